//! Gabidulin codes: `F_{q^m}`-linear subspaces of `F_{q^m}^k` under the rank
//! metric, Frobenius-closed spaces and generalized rank weights.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::config::{pow_saturating, GuardConfig};
use crate::error::{Error, Result};
use crate::field::{Elem, Tower};
use crate::linalg::{
    enumerate_all_subspaces, enumerate_subspaces, rank, right_mul_code, Matrix, Subspace,
};
use crate::profile::{Metric, WeightProfile};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GabidulinCode {
    tower: Arc<Tower>,
    space: Subspace,
}

fn check_k_le_m(k: usize, m: usize) -> Result<()> {
    if k > m {
        Err(Error::KExceedsM { k, m })
    } else {
        Ok(())
    }
}

impl GabidulinCode {
    pub fn new(tower: Arc<Tower>, space: Subspace) -> Result<Self> {
        check_k_le_m(space.ambient_dim(), tower.m())?;
        Ok(Self { tower, space })
    }

    pub fn from_generators<R: AsRef<[Elem]>>(
        tower: Arc<Tower>,
        k: usize,
        rows: &[R],
    ) -> Result<Self> {
        check_k_le_m(k, tower.m())?;
        for r in rows {
            if let Some(&bad) = r.as_ref().iter().find(|&&x| !tower.top().contains(x)) {
                return Err(Error::NotAnElement(bad));
            }
        }
        let space = Subspace::span(tower.top(), k, rows)?;
        Ok(Self { tower, space })
    }

    pub fn tower(&self) -> &Arc<Tower> {
        &self.tower
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn k(&self) -> usize {
        self.space.ambient_dim()
    }

    pub fn m(&self) -> usize {
        self.tower.m()
    }

    /// Dimension over `F_{q^m}`.
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// `C·A = {cA : c ∈ C}` for `A` an invertible `k x k` matrix over `F_q`.
    pub fn mul_right(&self, a: &Matrix) -> Result<GabidulinCode> {
        if let Some(&bad) = a.data().iter().find(|&&x| !self.tower.in_base(x)) {
            return Err(Error::NotAnElement(bad));
        }
        let space = right_mul_code(self.tower.top(), &self.space, a, 1, self.k())?;
        Ok(Self {
            tower: self.tower.clone(),
            space,
        })
    }
}

/// The `k x m` matrix over `F_q` of coordinates of `v` in the polynomial
/// basis.
pub fn coordinate_matrix(tower: &Tower, v: &[Elem]) -> Matrix {
    let m = tower.m();
    let mut out = Matrix::zeros(v.len(), m);
    for (i, &x) in v.iter().enumerate() {
        for (j, c) in tower.coords(x).into_iter().enumerate() {
            out.set(i, j, c);
        }
    }
    out
}

/// `rk(v) = dim_{F_q} Span_{F_q}{v_1, …, v_k}`.
pub fn rank_of_vector(tower: &Tower, v: &[Elem]) -> usize {
    rank(tower.base(), &coordinate_matrix(tower, v))
}

pub fn frobenius_vector(tower: &Tower, v: &[Elem]) -> Vec<Elem> {
    v.iter().map(|&x| tower.frobenius(x)).collect()
}

/// Frobenius-closed iff the canonical basis has every entry in `F_q`.
pub fn is_frobenius_closed(tower: &Tower, v: &Subspace) -> bool {
    v.basis().data().iter().all(|&x| tower.in_base(x))
}

/// Frobenius-closed iff `b^q ∈ V` for each basis vector `b`.
pub fn is_frobenius_closed_direct(tower: &Tower, v: &Subspace) -> bool {
    (0..v.dim()).all(|i| {
        let fb = frobenius_vector(tower, v.basis().row(i));
        v.contains(tower.top(), &fb).expect("same length")
    })
}

/// A basis of a Frobenius-closed space with entries in `F_q`: its RREF.
pub fn fq_basis(tower: &Tower, v: &Subspace) -> Result<Matrix> {
    if !is_frobenius_closed(tower, v) {
        return Err(Error::Invalid("space is not Frobenius-closed".into()));
    }
    Ok(v.basis().clone())
}

/// The `F_{q^m}`-span of a subspace of `F_q^k`. The RREF over `F_q` is already
/// the RREF over `F_{q^m}`.
pub fn lift(u: &Subspace) -> Subspace {
    u.clone()
}

/// Enumerates the `d`-dimensional Frobenius-closed subspaces of `F_{q^m}^k`
/// through their bijection with subspaces of `F_q^k`.
pub fn enumerate_frobenius_closed<'a>(
    tower: &'a Tower,
    k: usize,
    d: usize,
    guard: &GuardConfig,
) -> Result<impl Iterator<Item = Subspace> + 'a> {
    Ok(enumerate_subspaces(tower.base(), k, d, guard)?.map(|u| lift(&u)))
}

fn check_scan(tower: &Tower, dim: usize, guard: &GuardConfig) -> Result<()> {
    guard.check_codewords(pow_saturating(tower.top().order() as u64, dim))
}

pub fn maxrk(tower: &Tower, v: &Subspace, guard: &GuardConfig) -> Result<usize> {
    check_scan(tower, v.dim(), guard)?;
    Ok(v.vectors(tower.top())
        .map(|x| rank_of_vector(tower, &x))
        .max()
        .unwrap_or(0))
}

pub fn minrk(tower: &Tower, v: &Subspace, guard: &GuardConfig) -> Result<usize> {
    if v.is_zero() {
        return Err(Error::ZeroCode);
    }
    check_scan(tower, v.dim(), guard)?;
    Ok(v.vectors(tower.top())
        .skip(1)
        .map(|x| rank_of_vector(tower, &x))
        .min()
        .expect("nonzero space"))
}

pub fn is_optimal_gabidulin_anticode(
    tower: &Tower,
    v: &Subspace,
    guard: &GuardConfig,
) -> Result<bool> {
    Ok(v.dim() == maxrk(tower, v, guard)?)
}

/// `m_r(C) = min{dim V : V Frobenius-closed, dim(V ∩ C) ≥ r}`.
pub fn generalized_rank_weights(c: &GabidulinCode, guard: &GuardConfig) -> Result<WeightProfile> {
    let t = c.dim();
    if t == 0 {
        return Err(Error::ZeroCode);
    }
    let tower = &*c.tower;
    let top = tower.top();
    let k = c.k();
    let mut weights = Vec::with_capacity(t);
    for r in 1..=t {
        let mut found = None;
        // m_r ≥ r because dim(V) ≥ dim(V ∩ C)
        'mu: for mu in r..=k {
            for v in enumerate_frobenius_closed(tower, k, mu, guard)? {
                if v.intersection_dim(top, &c.space)? >= r {
                    found = Some(mu);
                    break 'mu;
                }
            }
        }
        weights.push(found.expect("the full space meets C in dimension t"));
    }
    Ok(WeightProfile::new(Metric::Gabidulin, weights))
}

/// Every optimal Gabidulin anticode of `F_{q^m}^k`, found by scanning all
/// subspaces for `dim = maxrk`. Independent of Frobenius closure.
pub fn optimal_gabidulin_anticodes(
    tower: &Tower,
    k: usize,
    guard: &GuardConfig,
) -> Result<Vec<Subspace>> {
    check_k_le_m(k, tower.m())?;
    let mut out = Vec::new();
    for v in enumerate_all_subspaces(tower.top(), k, guard)? {
        if is_optimal_gabidulin_anticode(tower, &v, guard)? {
            out.push(v);
        }
    }
    Ok(out)
}

/// `m_r(C)` computed as `min dim(A)` over optimal Gabidulin anticodes `A`
/// with `dim(A ∩ C) ≥ r`.
pub fn rank_weights_via_anticodes(c: &GabidulinCode, guard: &GuardConfig) -> Result<WeightProfile> {
    let anticodes = optimal_gabidulin_anticodes(&c.tower, c.k(), guard)?;
    rank_weights_over(c, &anticodes)
}

/// Minimizes over a precomputed anticode family.
pub fn rank_weights_over(c: &GabidulinCode, anticodes: &[Subspace]) -> Result<WeightProfile> {
    let t = c.dim();
    if t == 0 {
        return Err(Error::ZeroCode);
    }
    let top = c.tower.top();
    let mut best = vec![usize::MAX; t + 1];
    for a in anticodes {
        let inter = a.intersection_dim(top, &c.space)?;
        for slot in best.iter_mut().take(inter + 1) {
            *slot = (*slot).min(a.dim());
        }
    }
    Ok(WeightProfile::new(Metric::Gabidulin, best[1..].to_vec()))
}

/// `m'_r(C) = min{maxrk(D) : D ⊆ C, dim D = r}`.
pub fn oggier_sboui_rank_weights(c: &GabidulinCode, guard: &GuardConfig) -> Result<WeightProfile> {
    let t = c.dim();
    if t == 0 {
        return Err(Error::ZeroCode);
    }
    let tower = &*c.tower;
    let top = tower.top();
    let g = c.space.basis();
    let mut weights = Vec::with_capacity(t);
    for r in 1..=t {
        let mut best = usize::MAX;
        for coeffs in enumerate_subspaces(top, t, r, guard)? {
            let d = Subspace::from_matrix(top, &coeffs.basis().mul(top, g)?);
            best = best.min(maxrk(tower, &d, guard)?);
            if best == r {
                break;
            }
        }
        weights.push(best);
    }
    Ok(WeightProfile::new(Metric::Gabidulin, weights))
}

/// `(Δ_0, …, Δ_k)` with `Δ_μ = max{dim(V ∩ C) : V Frobenius-closed, dim V = μ}`.
pub fn security_profile(c: &GabidulinCode, guard: &GuardConfig) -> Result<Vec<usize>> {
    if c.dim() == 0 {
        return Err(Error::ZeroCode);
    }
    let tower = &*c.tower;
    let k = c.k();
    let mut deltas = Vec::with_capacity(k + 1);
    for mu in 0..=k {
        let mut best = 0;
        for v in enumerate_frobenius_closed(tower, k, mu, guard)? {
            best = best.max(v.intersection_dim(tower.top(), &c.space)?);
        }
        deltas.push(best);
    }
    Ok(deltas)
}

/// `{μ ∈ 1..=k : Δ_μ > Δ_{μ-1}}`.
pub fn worst_case_drops(c: &GabidulinCode, guard: &GuardConfig) -> Result<BTreeSet<usize>> {
    Ok(drops_of(&security_profile(c, guard)?))
}

pub fn drops_of(deltas: &[usize]) -> BTreeSet<usize> {
    (1..deltas.len())
        .filter(|&mu| deltas[mu] > deltas[mu - 1])
        .collect()
}
