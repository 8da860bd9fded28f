use std::fmt;
use std::ops::Index;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    Hamming,
    Gabidulin,
    Delsarte,
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Hamming => "hamming",
            Metric::Gabidulin => "gabidulin",
            Metric::Delsarte => "delsarte",
        })
    }
}

/// Generalized weights `(w_1, …, w_t)` of a nonzero code, stored 0-based:
/// `profile[r - 1]` is the `r`-th weight.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightProfile {
    pub metric: Metric,
    pub weights: Vec<usize>,
}

impl WeightProfile {
    pub fn new(metric: Metric, weights: Vec<usize>) -> Self {
        Self { metric, weights }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// The `r`-th weight, `1 ≤ r ≤ len`.
    pub fn get(&self, r: usize) -> Option<usize> {
        r.checked_sub(1).and_then(|i| self.weights.get(i).copied())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.weights
    }
}

impl Index<usize> for WeightProfile {
    type Output = usize;

    fn index(&self, i: usize) -> &usize {
        &self.weights[i]
    }
}

impl fmt::Display for WeightProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, w) in self.weights.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{w}")?;
        }
        write!(f, ")")
    }
}
