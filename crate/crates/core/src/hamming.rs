//! Linear codes over `F_q` in the Hamming metric.
//!
//! Coordinates are 0-based throughout: a support is a set of indices in
//! `0..n`.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::config::{pow_saturating, GuardConfig};
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::linalg::{
    dual_subspace, enumerate_all_subspaces, enumerate_subspaces, rank, BilinearForm, Matrix,
    Subspace,
};
use crate::profile::{Metric, WeightProfile};

/// Longest length for which optimal anticodes over `F_2` are enumerated
/// exhaustively.
pub const MAX_BINARY_ANTICODE_LENGTH: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    field: Arc<Field>,
    space: Subspace,
}

impl LinearCode {
    pub fn new(field: Arc<Field>, space: Subspace) -> Self {
        Self { field, space }
    }

    pub fn from_generators<R: AsRef<[Elem]>>(
        field: Arc<Field>,
        n: usize,
        rows: &[R],
    ) -> Result<Self> {
        for r in rows {
            if let Some(&bad) = r.as_ref().iter().find(|&&x| !field.contains(x)) {
                return Err(Error::NotAnElement(bad));
            }
        }
        let space = Subspace::span(&field, n, rows)?;
        Ok(Self { field, space })
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn length(&self) -> usize {
        self.space.ambient_dim()
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    fn check_scan(&self, guard: &GuardConfig) -> Result<()> {
        guard.check_codewords(pow_saturating(self.field.order() as u64, self.dim()))
    }
}

pub fn weight(v: &[Elem]) -> usize {
    v.iter().filter(|&&x| x != 0).count()
}

/// `χ(D)`: union of the supports of the canonical basis rows.
pub fn support(d: &Subspace) -> BTreeSet<usize> {
    let b = d.basis();
    (0..d.ambient_dim())
        .filter(|&j| (0..b.rows()).any(|i| b.get(i, j) != 0))
        .collect()
}

pub fn minwt(c: &LinearCode, guard: &GuardConfig) -> Result<usize> {
    if c.dim() == 0 {
        return Err(Error::ZeroCode);
    }
    c.check_scan(guard)?;
    Ok(c.space
        .vectors(&c.field)
        .skip(1)
        .map(|v| weight(&v))
        .min()
        .expect("nonzero code"))
}

/// Maximum weight by a full codeword scan. The support size is only an upper
/// bound (over `F_2` the code `⟨(1,0,1),(0,1,1)⟩` has support 3 but maximum
/// weight 2), so there is no cheaper fallback: above the guard this errors.
pub fn maxwt(c: &LinearCode, guard: &GuardConfig) -> Result<usize> {
    c.check_scan(guard)?;
    Ok(c.space
        .vectors(&c.field)
        .map(|v| weight(&v))
        .max()
        .unwrap_or(0))
}

/// `d_r(C) = min |χ(D)|` over `r`-dimensional subcodes `D`, enumerated as
/// images of the `r`-dimensional subspaces of the coefficient space `F_q^t`.
pub fn generalized_hamming_weights(c: &LinearCode, guard: &GuardConfig) -> Result<WeightProfile> {
    let t = c.dim();
    if t == 0 {
        return Err(Error::ZeroCode);
    }
    let f = &*c.field;
    let g = c.space.basis();
    let mut weights = Vec::with_capacity(t);
    for r in 1..=t {
        let mut best = usize::MAX;
        for coeffs in enumerate_subspaces(f, t, r, guard)? {
            let image = coeffs.basis().mul(f, g)?;
            let s = (0..image.cols())
                .filter(|&j| (0..image.rows()).any(|i| image.get(i, j) != 0))
                .count();
            best = best.min(s);
            if best == r {
                break;
            }
        }
        weights.push(best);
    }
    Ok(WeightProfile::new(Metric::Hamming, weights))
}

pub fn is_optimal_linear_anticode(c: &LinearCode, guard: &GuardConfig) -> Result<bool> {
    Ok(c.dim() == maxwt(c, guard)?)
}

/// `C_q(n, S)`: all vectors vanishing outside `S`.
pub fn free_code(field: Arc<Field>, n: usize, s: &BTreeSet<usize>) -> Result<LinearCode> {
    if let Some(&bad) = s.iter().find(|&&i| i >= n) {
        return Err(Error::Invalid(format!("coordinate {bad} outside 0..{n}")));
    }
    let rows: Vec<Vec<Elem>> = s
        .iter()
        .map(|&i| {
            let mut v = vec![0; n];
            v[i] = 1;
            v
        })
        .collect();
    LinearCode::from_generators(field, n, &rows)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnticodeClass {
    /// The code equals the free code on this support.
    Free(BTreeSet<usize>),
    /// An optimal anticode that is not free (possible only over `F_2`).
    NonFree,
}

pub fn classify_optimal_anticode(c: &LinearCode, guard: &GuardConfig) -> Result<AnticodeClass> {
    if !is_optimal_linear_anticode(c, guard)? {
        return Err(Error::Invalid(
            "code is not an optimal linear anticode".into(),
        ));
    }
    let s = support(&c.space);
    // C ⊆ C(n, χ(C)) always, so equal dimensions mean equality
    if s.len() == c.dim() {
        Ok(AnticodeClass::Free(s))
    } else {
        Ok(AnticodeClass::NonFree)
    }
}

/// `d'_r(C) = min dim(A)` over optimal linear anticodes `A` with
/// `dim(A ∩ C) ≥ r`. The family is every free code, plus over `F_2` every
/// optimal anticode found by exhaustive enumeration (length at most
/// [`MAX_BINARY_ANTICODE_LENGTH`]). Agrees with
/// [`generalized_hamming_weights`] for `q ≥ 3`.
pub fn ghw_via_anticodes(c: &LinearCode, guard: &GuardConfig) -> Result<WeightProfile> {
    let t = c.dim();
    if t == 0 {
        return Err(Error::ZeroCode);
    }
    let n = c.length();
    let f = &*c.field;
    if n >= 64 {
        return Err(Error::GuardExceeded {
            guard: "free_code_subsets",
            requested: n as u128,
            limit: 63,
        });
    }
    guard.check_subspaces(1u128 << n)?;
    let mut best = vec![usize::MAX; t + 1];
    let g = c.space.basis();
    for mask in 0u64..(1u64 << n) {
        let size = mask.count_ones() as usize;
        // C ∩ C(n,S) = {xG : (xG)_j = 0 for j ∉ S}, of dimension t - rank(G|_{S^c})
        let outside: Vec<usize> = (0..n).filter(|j| mask >> j & 1 == 0).collect();
        let mut restricted = Matrix::zeros(t, outside.len());
        for i in 0..t {
            for (jj, &j) in outside.iter().enumerate() {
                restricted.set(i, jj, g.get(i, j));
            }
        }
        let inter = t - rank(f, &restricted);
        for slot in best.iter_mut().take(inter + 1) {
            *slot = (*slot).min(size);
        }
    }
    if f.order() == 2 {
        if n > MAX_BINARY_ANTICODE_LENGTH {
            return Err(Error::GuardExceeded {
                guard: "binary_anticode_length",
                requested: n as u128,
                limit: MAX_BINARY_ANTICODE_LENGTH as u128,
            });
        }
        for a in enumerate_all_subspaces(f, n, guard)? {
            let anti = LinearCode::new(c.field.clone(), a);
            if !is_optimal_linear_anticode(&anti, guard)? {
                continue;
            }
            let inter = anti.space.intersection_dim(f, &c.space)?;
            for slot in best.iter_mut().take(inter + 1) {
                *slot = (*slot).min(anti.dim());
            }
        }
    }
    Ok(WeightProfile::new(Metric::Hamming, best[1..].to_vec()))
}

/// Dual under the standard inner product.
pub fn hamming_dual(c: &LinearCode) -> LinearCode {
    let space = dual_subspace(&c.field, &c.space, BilinearForm::Standard)
        .expect("the standard form is non-degenerate");
    LinearCode::new(c.field.clone(), space)
}
