//! Enumeration guards shared by every exhaustive routine.

use std::time::Duration;

use crate::error::{Error, Result};

/// Limits on exhaustive work. Every brute-force routine checks the relevant
/// limit before it starts and fails with [`Error::GuardExceeded`] instead of
/// running unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GuardConfig {
    /// Maximum number of subspaces a single enumeration may produce.
    pub max_subspaces: u128,
    /// Maximum number of vectors scanned when sweeping a whole space.
    pub max_codewords: u128,
    /// Maximum ambient size `q^n` for subspace enumeration.
    pub max_ambient: u128,
    /// Wall-clock budget for open-ended searches.
    pub time_budget: Option<Duration>,
}

impl Default for GuardConfig {
    fn default() -> Self {
        Self {
            max_subspaces: 4_000_000,
            max_codewords: 1 << 22,
            max_ambient: 1 << 24,
            time_budget: None,
        }
    }
}

impl GuardConfig {
    pub fn check_subspaces(&self, requested: u128) -> Result<()> {
        check("max_subspaces", requested, self.max_subspaces)
    }

    pub fn check_codewords(&self, requested: u128) -> Result<()> {
        check("max_codewords", requested, self.max_codewords)
    }

    pub fn check_ambient(&self, requested: u128) -> Result<()> {
        check("max_ambient", requested, self.max_ambient)
    }
}

fn check(guard: &'static str, requested: u128, limit: u128) -> Result<()> {
    if requested > limit {
        Err(Error::GuardExceeded {
            guard,
            requested,
            limit,
        })
    } else {
        Ok(())
    }
}

/// `base^exp`, saturating at `u128::MAX`.
pub fn pow_saturating(base: u64, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
    }
    acc
}
