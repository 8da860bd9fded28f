//! Delsarte codes: `F_q`-linear spaces of `k x m` matrices under the rank
//! metric.
//!
//! A code is stored as a subspace of `F_q^{km}` (matrices flattened
//! row-major); ranks are always taken on the unflattened `k x m` shape.
//!
//! Optimal anticodes are enumerated through their supports: every optimal
//! anticode of maximum rank `R` is `{N : colsp(N) ⊆ U}` for an `R`-dimensional
//! `U ⊆ F_q^k`, or, when `k = m`, `{N : rowsp(N) ⊆ U}` for `U ⊆ F_q^m`. Right
//! multiplication preserves column spaces, so the orbit `A·S·B` of the
//! standard anticode `S` (last `k - R` rows zero) is exactly the column-support
//! family, and transposition gives the row-support one.

use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::{pow_saturating, GuardConfig};
use crate::error::{Error, Result};
use crate::field::{Elem, Field, Tower};
use crate::linalg::{
    dual_subspace, enumerate_subspaces, left_mul_code, rank, right_mul_code, BilinearForm, Matrix,
    Subspace,
};
use crate::profile::{Metric, WeightProfile};
use crate::rankmetric::{generalized_rank_weights, GabidulinCode};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DelsarteCode {
    field: Arc<Field>,
    k: usize,
    m: usize,
    space: Subspace,
}

impl DelsarteCode {
    pub fn new(field: Arc<Field>, k: usize, m: usize, space: Subspace) -> Result<Self> {
        if k > m {
            return Err(Error::KExceedsM { k, m });
        }
        if space.ambient_dim() != k * m {
            return Err(Error::Dimension(format!(
                "subspace of F^{} is not a space of {k}x{m} matrices",
                space.ambient_dim()
            )));
        }
        Ok(Self { field, k, m, space })
    }

    pub fn from_matrices(field: Arc<Field>, k: usize, m: usize, mats: &[Matrix]) -> Result<Self> {
        let mut rows = Vec::with_capacity(mats.len());
        for a in mats {
            if a.rows() != k || a.cols() != m {
                return Err(Error::Dimension(format!(
                    "{}x{} generator in a {k}x{m} code",
                    a.rows(),
                    a.cols()
                )));
            }
            if let Some(&bad) = a.data().iter().find(|&&x| !field.contains(x)) {
                return Err(Error::NotAnElement(bad));
            }
            rows.push(a.data().to_vec());
        }
        let space = Subspace::span(&field, k * m, &rows)?;
        Self::new(field, k, m, space)
    }

    /// Ingests a code given by generators of shape `rows x cols` with
    /// `rows > cols` by storing their transposes, which is rank-preserving.
    pub fn from_transposes(
        field: Arc<Field>,
        rows: usize,
        cols: usize,
        mats: &[Matrix],
    ) -> Result<Self> {
        if mats.iter().any(|a| a.rows() != rows || a.cols() != cols) {
            return Err(Error::Dimension(format!(
                "generators must be {rows}x{cols}"
            )));
        }
        let t: Vec<Matrix> = mats.iter().map(Matrix::transpose).collect();
        Self::from_matrices(field, cols, rows, &t)
    }

    pub fn zero(field: Arc<Field>, k: usize, m: usize) -> Result<Self> {
        Self::new(field, k, m, Subspace::zero(k * m))
    }

    pub fn full(field: Arc<Field>, k: usize, m: usize) -> Result<Self> {
        Self::new(field, k, m, Subspace::full(k * m))
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Canonical generators as `k x m` matrices.
    pub fn matrices(&self) -> Vec<Matrix> {
        (0..self.dim())
            .map(|i| self.as_matrix(self.space.basis().row(i)))
            .collect()
    }

    pub fn as_matrix(&self, flat: &[Elem]) -> Matrix {
        Matrix::from_vec(self.k, self.m, flat.to_vec()).expect("flattened length k*m")
    }

    fn with_space(&self, space: Subspace) -> Self {
        Self {
            field: self.field.clone(),
            k: self.k,
            m: self.m,
            space,
        }
    }

    fn same_shape(&self, other: &DelsarteCode) -> Result<()> {
        if self.k != other.k || self.m != other.m || *self.field != *other.field {
            return Err(Error::Dimension(
                "codes live in different matrix spaces".into(),
            ));
        }
        Ok(())
    }

    pub fn intersect(&self, other: &DelsarteCode) -> Result<DelsarteCode> {
        self.same_shape(other)?;
        Ok(self.with_space(self.space.intersect(&self.field, &other.space)?))
    }

    pub fn intersection_dim(&self, other: &DelsarteCode) -> Result<usize> {
        self.same_shape(other)?;
        self.space.intersection_dim(&self.field, &other.space)
    }

    fn check_scan(&self, guard: &GuardConfig) -> Result<()> {
        guard.check_codewords(pow_saturating(self.field.order() as u64, self.dim()))
    }

    /// `A·C·B` for invertible `A` (`k x k`) and `B` (`m x m`).
    pub fn transform(&self, a: &Matrix, b: &Matrix) -> Result<DelsarteCode> {
        let f = &*self.field;
        let left = left_mul_code(f, a, &self.space, self.k, self.m)?;
        Ok(self.with_space(right_mul_code(f, &left, b, self.k, self.m)?))
    }
}

/// Rank of a flattened `k x m` matrix.
pub fn matrix_rank(f: &Field, k: usize, m: usize, flat: &[Elem]) -> usize {
    rank(
        f,
        &Matrix::from_vec(k, m, flat.to_vec()).expect("flattened length k*m"),
    )
}

pub fn minrk(c: &DelsarteCode, guard: &GuardConfig) -> Result<usize> {
    if c.dim() == 0 {
        return Err(Error::ZeroCode);
    }
    c.check_scan(guard)?;
    let f = &*c.field;
    Ok(c.space
        .vectors(f)
        .skip(1)
        .map(|v| matrix_rank(f, c.k, c.m, &v))
        .min()
        .expect("nonzero code"))
}

pub fn maxrk(c: &DelsarteCode, guard: &GuardConfig) -> Result<usize> {
    c.check_scan(guard)?;
    let f = &*c.field;
    Ok(c.space
        .vectors(f)
        .map(|v| matrix_rank(f, c.k, c.m, &v))
        .max()
        .unwrap_or(0))
}

/// Singleton-like bound `dim ≤ m(k - minrk + 1)` met with equality.
pub fn is_optimal_delsarte_code(c: &DelsarteCode, guard: &GuardConfig) -> Result<bool> {
    let d = minrk(c, guard)?;
    Ok(c.dim() == c.m * (c.k - d + 1))
}

/// Anticode bound `dim ≤ m · maxrk` met with equality.
pub fn is_optimal_delsarte_anticode(c: &DelsarteCode, guard: &GuardConfig) -> Result<bool> {
    Ok(c.dim() == c.m * maxrk(c, guard)?)
}

/// `k x m` matrices whose last `k - R` rows vanish.
pub fn standard_anticode(field: Arc<Field>, k: usize, m: usize, r: usize) -> Result<DelsarteCode> {
    if r > k {
        return Err(Error::Invalid(format!("maximum rank {r} exceeds k = {k}")));
    }
    let rows: Vec<Vec<Elem>> = (0..r * m)
        .map(|i| {
            let mut v = vec![0; k * m];
            v[i] = 1;
            v
        })
        .collect();
    let space = Subspace::span(&field, k * m, &rows)?;
    DelsarteCode::new(field, k, m, space)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SupportKind {
    /// `{N : colsp(N) ⊆ U}`, `U ⊆ F_q^k`.
    Column,
    /// `{N : rowsp(N) ⊆ U}`, `U ⊆ F_q^m`; only for square matrices.
    Row,
}

/// Compact description of a Delsarte optimal anticode.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AnticodeDescriptor {
    pub kind: SupportKind,
    pub support: Subspace,
}

impl AnticodeDescriptor {
    /// Maximum rank of the described anticode.
    pub fn rank(&self) -> usize {
        self.support.dim()
    }
}

/// Materializes a descriptor as a flattened subspace of dimension `m·R`
/// (column support) or `k·R` (row support).
pub fn anticode_space(
    field: Arc<Field>,
    k: usize,
    m: usize,
    d: &AnticodeDescriptor,
) -> Result<DelsarteCode> {
    let u = d.support.basis();
    let mut rows = Vec::new();
    match d.kind {
        SupportKind::Column => {
            if d.support.ambient_dim() != k {
                return Err(Error::Dimension("column support must live in F_q^k".into()));
            }
            for b in 0..u.rows() {
                for j in 0..m {
                    let mut v = vec![0; k * m];
                    for i in 0..k {
                        v[i * m + j] = u.get(b, i);
                    }
                    rows.push(v);
                }
            }
        }
        SupportKind::Row => {
            if k != m {
                return Err(Error::Invalid("row-support anticodes require k = m".into()));
            }
            if d.support.ambient_dim() != m {
                return Err(Error::Dimension("row support must live in F_q^m".into()));
            }
            for b in 0..u.rows() {
                for i in 0..k {
                    let mut v = vec![0; k * m];
                    v[i * m..(i + 1) * m].copy_from_slice(u.row(b));
                    rows.push(v);
                }
            }
        }
    }
    let space = Subspace::span(&field, k * m, &rows)?;
    DelsarteCode::new(field, k, m, space)
}

/// All Delsarte optimal anticodes of maximum rank `R`, each exactly once.
pub fn enumerate_optimal_anticodes(
    field: &Arc<Field>,
    k: usize,
    m: usize,
    r: usize,
    guard: &GuardConfig,
) -> Result<Vec<AnticodeDescriptor>> {
    if k > m {
        return Err(Error::KExceedsM { k, m });
    }
    if r > k {
        return Err(Error::Invalid(format!("maximum rank {r} exceeds k = {k}")));
    }
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for u in enumerate_subspaces(field, k, r, guard)? {
        let d = AnticodeDescriptor {
            kind: SupportKind::Column,
            support: u,
        };
        seen.insert(anticode_space(field.clone(), k, m, &d)?.space);
        out.push(d);
    }
    if k == m {
        for u in enumerate_subspaces(field, m, r, guard)? {
            let d = AnticodeDescriptor {
                kind: SupportKind::Row,
                support: u,
            };
            if seen.insert(anticode_space(field.clone(), k, m, &d)?.space) {
                out.push(d);
            }
        }
    }
    Ok(out)
}

/// Materialized optimal anticodes of `Mat(k x m, F_q)`, grouped by maximum
/// rank, for repeated weight computations in one matrix space.
#[derive(Debug, Clone)]
pub struct AnticodeCatalog {
    field: Arc<Field>,
    k: usize,
    m: usize,
    by_rank: Vec<Vec<Subspace>>,
}

impl AnticodeCatalog {
    pub fn new(field: Arc<Field>, k: usize, m: usize, guard: &GuardConfig) -> Result<Self> {
        let mut by_rank = Vec::with_capacity(k + 1);
        for r in 0..=k {
            let spaces = enumerate_optimal_anticodes(&field, k, m, r, guard)?
                .iter()
                .map(|d| anticode_space(field.clone(), k, m, d).map(|c| c.space))
                .collect::<Result<Vec<_>>>()?;
            by_rank.push(spaces);
        }
        Ok(Self {
            field,
            k,
            m,
            by_rank,
        })
    }

    pub fn len(&self) -> usize {
        self.by_rank.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn of_rank(&self, r: usize) -> &[Subspace] {
        &self.by_rank[r]
    }

    /// `a_r(C)` for every `r`, scanning ranks upward and stopping once every
    /// weight is known.
    pub fn weights(&self, c: &DelsarteCode) -> Result<WeightProfile> {
        if c.k != self.k || c.m != self.m || *c.field != *self.field {
            return Err(Error::Dimension(
                "code and catalog live in different matrix spaces".into(),
            ));
        }
        let t = c.dim();
        if t == 0 {
            return Err(Error::ZeroCode);
        }
        let f = &*self.field;
        let mut weights = Vec::with_capacity(t);
        for (r, spaces) in self.by_rank.iter().enumerate() {
            let mut reach = 0;
            for a in spaces {
                reach = reach.max(a.intersection_dim(f, &c.space)?);
                if reach == t {
                    break;
                }
            }
            while weights.len() < reach {
                weights.push(r);
            }
            if weights.len() == t {
                break;
            }
        }
        Ok(WeightProfile::new(Metric::Delsarte, weights))
    }
}

/// `a_r(C) = (1/m) min{dim A : A optimal anticode, dim(A ∩ C) ≥ r}`.
pub fn delsarte_generalized_weights(
    c: &DelsarteCode,
    guard: &GuardConfig,
) -> Result<WeightProfile> {
    if c.dim() == 0 {
        return Err(Error::ZeroCode);
    }
    AnticodeCatalog::new(c.field.clone(), c.k, c.m, guard)?.weights(c)
}

/// `a'_r(C) = min{maxrk(D) : D ⊆ C, dim D = r}`.
pub fn oggier_sboui_delsarte_weights(
    c: &DelsarteCode,
    guard: &GuardConfig,
) -> Result<WeightProfile> {
    let t = c.dim();
    if t == 0 {
        return Err(Error::ZeroCode);
    }
    let f = &*c.field;
    let g = c.space.basis();
    let mut weights = Vec::with_capacity(t);
    for r in 1..=t {
        guard.check_codewords(pow_saturating(f.order() as u64, r))?;
        let mut best = usize::MAX;
        for coeffs in enumerate_subspaces(f, t, r, guard)? {
            let d = Subspace::from_matrix(f, &coeffs.basis().mul(f, g)?);
            let mr = d
                .vectors(f)
                .map(|v| matrix_rank(f, c.k, c.m, &v))
                .max()
                .unwrap_or(0);
            best = best.min(mr);
            if best * c.m == r {
                // maxrk(D) ≥ dim(D)/m, so nothing smaller exists
                break;
            }
        }
        weights.push(best);
    }
    Ok(WeightProfile::new(Metric::Delsarte, weights))
}

/// `⟨M, N⟩ = Tr(M N^t)`.
pub fn trace_product(f: &Field, a: &Matrix, b: &Matrix) -> Result<Elem> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::Dimension(
            "trace product of matrices of different shapes".into(),
        ));
    }
    a.mul(f, &b.transpose())?.trace(f)
}

/// Dual under the trace product.
pub fn delsarte_dual(c: &DelsarteCode) -> DelsarteCode {
    let form = BilinearForm::TraceProduct {
        rows: c.k,
        cols: c.m,
    };
    let space =
        dual_subspace(&c.field, &c.space, form).expect("the trace product is non-degenerate");
    c.with_space(space)
}

/// `C^t = {M^t : M ∈ C}` for square codes.
pub fn transpose_code(c: &DelsarteCode) -> Result<DelsarteCode> {
    if c.k != c.m {
        return Err(Error::Invalid(format!(
            "transpose code needs k = m (got {}x{})",
            c.k, c.m
        )));
    }
    let mats: Vec<Matrix> = c.matrices().iter().map(Matrix::transpose).collect();
    DelsarteCode::from_matrices(c.field.clone(), c.k, c.m, &mats)
}

/// Weight sets `W_s = {a_{s+im}}` and `W̄_s = {k+1-a_{s+im}}` over all `i`
/// with `1 ≤ s+im ≤ t`.
pub fn weight_sets(
    profile: &[usize],
    k: usize,
    m: usize,
    t: usize,
    s: i64,
) -> Result<(BTreeSet<usize>, BTreeSet<usize>)> {
    if profile.len() != t {
        return Err(Error::Dimension(format!(
            "profile of length {} for a code of dimension {t}",
            profile.len()
        )));
    }
    if m == 0 {
        return Err(Error::Invalid("m must be positive".into()));
    }
    let start = (s - 1).rem_euclid(m as i64) as usize + 1;
    let mut w = BTreeSet::new();
    let mut wbar = BTreeSet::new();
    for idx in (start..=t).step_by(m) {
        let a = profile[idx - 1];
        w.insert(a);
        if a > k + 1 {
            return Err(Error::Invalid(format!("weight {a} exceeds k + 1")));
        }
        wbar.insert(k + 1 - a);
    }
    Ok((w, wbar))
}

/// Clauses of the Delsarte weight properties that `profile` violates (items
/// 2–6; item 1 needs the code itself). Empty means consistent.
pub fn profile_violations(profile: &[usize], k: usize, m: usize) -> Vec<String> {
    let t = profile.len();
    let a = |r: usize| profile[r - 1];
    let mut out = Vec::new();
    if t == 0 {
        out.push("empty profile".to_string());
        return out;
    }
    if a(t) > k {
        out.push(format!("a_t = {} > k = {k}", a(t)));
    }
    for r in 1..t {
        if a(r) > a(r + 1) {
            out.push(format!("a_{r} = {} > a_{} = {}", a(r), r + 1, a(r + 1)));
        }
    }
    for r in 1..=t.saturating_sub(m) {
        if a(r) >= a(r + m) {
            out.push(format!("a_{r} = {} not < a_{} = {}", a(r), r + m, a(r + m)));
        }
    }
    for r in 1..=t {
        let upper = k as i64 - ((t - r) / m) as i64;
        if (a(r) as i64) > upper {
            out.push(format!("a_{r} = {} > k - floor((t-r)/m) = {upper}", a(r)));
        }
        let lower = r.div_ceil(m);
        if a(r) < lower {
            out.push(format!("a_{r} = {} < ceil(r/m) = {lower}", a(r)));
        }
    }
    out
}

fn dual_profile_unchecked(profile: &[usize], k: usize, m: usize) -> Result<Vec<usize>> {
    let t = profile.len();
    let n = k * m - t;
    let mut out = vec![0; n];
    for p in 1..=m {
        let (_, wbar) = weight_sets(profile, k, m, t, (p + t) as i64)?;
        let complement: Vec<usize> = (1..=k).filter(|x| !wbar.contains(x)).collect();
        let slots: Vec<usize> = (p..=n).step_by(m).collect();
        if slots.len() != complement.len() {
            return Err(Error::Invalid(format!(
                "inconsistent profile: residue class {p} needs {} weights, complement has {}",
                slots.len(),
                complement.len()
            )));
        }
        for (slot, w) in slots.into_iter().zip(complement) {
            out[slot - 1] = w;
        }
    }
    Ok(out)
}

/// Delsarte weights of `C^⊥` from those of `C`, using
/// `W_p(C^⊥) = [k] \ W̄_{p+t}(C)` for every `p ∈ [m]`.
pub fn dual_weights_from_weights(
    profile: &[usize],
    k: usize,
    m: usize,
    t: usize,
) -> Result<Vec<usize>> {
    if k > m {
        return Err(Error::KExceedsM { k, m });
    }
    if t == 0 || t >= k * m {
        return Err(Error::Invalid(format!(
            "dimension t = {t} outside 1..={}",
            k * m - 1
        )));
    }
    if profile.len() != t {
        return Err(Error::Dimension(format!(
            "profile of length {} for t = {t}",
            profile.len()
        )));
    }
    let bad = profile_violations(profile, k, m);
    if !bad.is_empty() {
        return Err(Error::Invalid(format!(
            "inconsistent profile: {}",
            bad.join("; ")
        )));
    }
    let dual = dual_profile_unchecked(profile, k, m)?;
    if dual_profile_unchecked(&dual, k, m)? != profile {
        return Err(Error::Invalid(
            "inconsistent profile: reconstruction is not involutive".into(),
        ));
    }
    Ok(dual)
}

/// Basis `1, γ, …, γ^{m-1}` of `F_{q^m}` over `F_q`.
pub fn polynomial_basis(tower: &Tower) -> Vec<Elem> {
    let g = tower.generator();
    (0..tower.m())
        .map(|j| tower.top().pow(g, j as u64))
        .collect()
}

/// The `m x m` matrix over `F_q` whose row `j` holds the coordinates of
/// `basis[j]`; errors unless it is invertible.
pub fn basis_matrix(tower: &Tower, basis: &[Elem]) -> Result<Matrix> {
    let m = tower.m();
    if basis.len() != m {
        return Err(Error::Invalid(format!(
            "{} elements cannot form a basis of degree {m}",
            basis.len()
        )));
    }
    let mut out = Matrix::zeros(m, m);
    for (j, &x) in basis.iter().enumerate() {
        if !tower.top().contains(x) {
            return Err(Error::NotAnElement(x));
        }
        for (s, c) in tower.coords(x).into_iter().enumerate() {
            out.set(j, s, c);
        }
    }
    if rank(tower.base(), &out) != m {
        return Err(Error::Invalid("elements are not a basis over F_q".into()));
    }
    Ok(out)
}

/// The matrix `B` with `γ_j = Σ_s B_js φ_s` relating bases `G` and `F`.
pub fn change_of_basis(tower: &Tower, g: &[Elem], f: &[Elem]) -> Result<Matrix> {
    let gm = basis_matrix(tower, g)?;
    let fm = basis_matrix(tower, f)?;
    gm.mul(tower.base(), &fm.inverse(tower.base())?)
}

/// `M_G(v)`: the `k x m` matrix with `v_i = Σ_j M_ij γ_j`.
pub fn vector_matrix(tower: &Tower, basis: &[Elem], v: &[Elem]) -> Result<Matrix> {
    let inv = basis_matrix(tower, basis)?.inverse(tower.base())?;
    let coords = crate::rankmetric::coordinate_matrix(tower, v);
    coords.mul(tower.base(), &inv)
}

/// The Delsarte code `{M_G(c) : c ∈ C}`.
pub fn associate(c: &GabidulinCode, basis: &[Elem]) -> Result<DelsarteCode> {
    let tower = &**c.tower();
    let base = tower.base();
    let inv = basis_matrix(tower, basis)?.inverse(base)?;
    let (k, m) = (c.k(), c.m());
    let g = c.space().basis();
    let mut rows = Vec::with_capacity(g.rows() * m);
    for i in 0..g.rows() {
        for alpha in polynomial_basis(tower) {
            let v: Vec<Elem> = g
                .row(i)
                .iter()
                .map(|&x| tower.top().mul(alpha, x))
                .collect();
            let mat = crate::rankmetric::coordinate_matrix(tower, &v).mul(base, &inv)?;
            rows.push(mat.data().to_vec());
        }
    }
    let space = Subspace::span(base, k * m, &rows)?;
    DelsarteCode::new(base.clone(), k, m, space)
}

/// Outcome of [`finer_check`]: every `(r, ε)` pair compared and every sampled
/// left-multiplication tested.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FinerOutcome {
    pub rank_weights: Vec<usize>,
    pub delsarte_weights: Vec<usize>,
    pub mismatches: Vec<(usize, usize)>,
    pub left_mul_failures: usize,
}

impl FinerOutcome {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.left_mul_failures == 0
    }
}

/// Checks `m_r(C) = a_{rm-ε}(C_G(C))` for all `1 ≤ r ≤ t`, `0 ≤ ε < m`, and
/// `C_G(C A^t) = A·C_G(C)` for a few seeded random invertible `A`.
pub fn finer_check(
    c: &GabidulinCode,
    basis: &[Elem],
    guard: &GuardConfig,
    seed: u64,
) -> Result<FinerOutcome> {
    let tower = &**c.tower();
    let m = c.m();
    let k = c.k();
    let mr = generalized_rank_weights(c, guard)?;
    let assoc = associate(c, basis)?;
    let a = delsarte_generalized_weights(&assoc, guard)?;
    let mut mismatches = Vec::new();
    for r in 1..=c.dim() {
        for eps in 0..m {
            if mr.get(r) != a.get(r * m - eps) {
                mismatches.push((r, eps));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut left_mul_failures = 0;
    for _ in 0..3 {
        let am = Matrix::random_invertible(tower.base(), k, &mut rng);
        let lhs = associate(&c.mul_right(&am.transpose())?, basis)?;
        let rhs = assoc.with_space(left_mul_code(tower.base(), &am, assoc.space(), k, m)?);
        if lhs != rhs {
            left_mul_failures += 1;
        }
    }
    Ok(FinerOutcome {
        rank_weights: mr.weights,
        delsarte_weights: a.weights,
        mismatches,
        left_mul_failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use rand::Rng;

    fn f(p: u32) -> Arc<Field> {
        Arc::new(Field::prime(p).unwrap())
    }

    fn mat(rows: &[&[Elem]]) -> Matrix {
        Matrix::from_rows(rows[0].len(), rows).unwrap()
    }

    #[test]
    fn association_read_off() {
        let t = Arc::new(make_field(2, 1, 2).unwrap());
        let xi = t.generator();
        let v = [xi, t.top().add(1, xi)];
        let b = polynomial_basis(&t);
        assert_eq!(vector_matrix(&t, &b, &v).unwrap(), mat(&[&[0, 1], &[1, 1]]));
        let zero = GabidulinCode::new(t.clone(), Subspace::zero(2)).unwrap();
        assert_eq!(associate(&zero, &b).unwrap().dim(), 0);
        let c = GabidulinCode::from_generators(t.clone(), 2, &[v.to_vec()]).unwrap();
        assert_eq!(associate(&c, &b).unwrap().dim(), 2);
        assert!(associate(&c, &[1, 1]).is_err());
    }

    #[test]
    fn standard_anticodes() {
        let g = GuardConfig::default();
        let s = standard_anticode(f(2), 2, 3, 1).unwrap();
        assert_eq!(s.dim(), 3);
        assert_eq!(maxrk(&s, &g).unwrap(), 1);
        assert!(is_optimal_delsarte_anticode(&s, &g).unwrap());
        assert_eq!(standard_anticode(f(2), 2, 3, 0).unwrap().dim(), 0);
        assert_eq!(
            standard_anticode(f(2), 2, 3, 2).unwrap(),
            DelsarteCode::full(f(2), 2, 3).unwrap()
        );
        assert!(standard_anticode(f(2), 2, 3, 3).is_err());
        let full = DelsarteCode::full(f(3), 2, 2).unwrap();
        assert!(is_optimal_delsarte_code(&full, &g).unwrap());
        assert!(is_optimal_delsarte_anticode(&full, &g).unwrap());
    }

    #[test]
    fn descriptor_materialization() {
        let field = f(2);
        let u = Subspace::span(&field, 2, &[vec![1, 1]]).unwrap();
        let d = AnticodeDescriptor {
            kind: SupportKind::Column,
            support: u,
        };
        let a = anticode_space(field.clone(), 2, 2, &d).unwrap();
        assert_eq!(a.dim(), 2);
        // oracle: every 2x2 matrix whose columns lie in span{(1,1)}
        let expected: Vec<Vec<Elem>> = (0..16u32)
            .map(|x| (0..4).map(|i| x >> i & 1).collect::<Vec<_>>())
            .filter(|v| v[0] == v[2] && v[1] == v[3])
            .collect();
        assert_eq!(expected.len(), 4);
        for v in &expected {
            assert!(a.space().contains(&field, v).unwrap());
        }
        let std = AnticodeDescriptor {
            kind: SupportKind::Column,
            support: Subspace::span(&field, 3, &[vec![1, 0, 0], vec![0, 1, 0]]).unwrap(),
        };
        assert_eq!(
            anticode_space(field.clone(), 3, 3, &std).unwrap(),
            standard_anticode(field.clone(), 3, 3, 2).unwrap()
        );
        let row_full = AnticodeDescriptor {
            kind: SupportKind::Row,
            support: Subspace::full(3),
        };
        assert_eq!(
            anticode_space(field.clone(), 3, 3, &row_full)
                .unwrap()
                .dim(),
            9
        );
        assert!(anticode_space(field, 2, 3, &row_full).is_err());
    }

    #[test]
    fn anticode_counts() {
        let g = GuardConfig::default();
        let field = f(2);
        assert_eq!(
            enumerate_optimal_anticodes(&field, 2, 2, 1, &g)
                .unwrap()
                .len(),
            6
        );
        assert_eq!(
            enumerate_optimal_anticodes(&field, 2, 3, 1, &g)
                .unwrap()
                .len(),
            3
        );
        for (k, m) in [(2, 2), (2, 3), (3, 3)] {
            assert_eq!(
                enumerate_optimal_anticodes(&field, k, m, k, &g)
                    .unwrap()
                    .len(),
                1
            );
            assert_eq!(
                enumerate_optimal_anticodes(&field, k, m, 0, &g)
                    .unwrap()
                    .len(),
                1
            );
        }
    }

    fn section5_code() -> DelsarteCode {
        DelsarteCode::from_matrices(
            f(2),
            2,
            3,
            &[
                mat(&[&[1, 0, 0], &[0, 0, 0]]),
                mat(&[&[0, 1, 0], &[0, 0, 1]]),
                mat(&[&[0, 0, 0], &[1, 0, 0]]),
            ],
        )
        .unwrap()
    }

    fn q5_code() -> DelsarteCode {
        DelsarteCode::from_matrices(
            f(5),
            3,
            3,
            &[
                mat(&[&[1, 0, 0], &[0, 0, 0], &[0, 0, 0]]),
                mat(&[&[0, 0, 0], &[0, 3, 0], &[0, 0, 0]]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn worked_examples() {
        let g = GuardConfig::default();
        let c = section5_code();
        let a = delsarte_generalized_weights(&c, &g).unwrap();
        let os = oggier_sboui_delsarte_weights(&c, &g).unwrap();
        assert_eq!(a.get(2), Some(2));
        assert_eq!(os.get(2), Some(1));
        let q5 = q5_code();
        assert_eq!(
            delsarte_generalized_weights(&q5, &g).unwrap().weights,
            vec![1, 2]
        );
        assert!(!is_optimal_delsarte_code(&q5, &g).unwrap());
        let dual = delsarte_dual(&q5);
        assert_eq!(dual.dim(), 7);
        assert_eq!(
            delsarte_generalized_weights(&dual, &g).unwrap().weights,
            vec![1, 1, 1, 2, 2, 3, 3]
        );
    }

    #[test]
    fn oggier_sboui_has_no_duality() {
        let g = GuardConfig::default();
        let e11 = mat(&[&[1, 0, 0], &[0, 0, 0]]);
        let c =
            DelsarteCode::from_matrices(f(2), 2, 3, &[e11.clone(), mat(&[&[0, 0, 0], &[1, 0, 0]])])
                .unwrap();
        let d = DelsarteCode::from_matrices(f(2), 2, 3, &[e11, mat(&[&[0, 1, 0], &[0, 0, 0]])])
            .unwrap();
        assert_eq!(
            oggier_sboui_delsarte_weights(&c, &g).unwrap().weights,
            vec![1, 1]
        );
        assert_eq!(
            oggier_sboui_delsarte_weights(&d, &g).unwrap().weights,
            vec![1, 1]
        );
        let cd = oggier_sboui_delsarte_weights(&delsarte_dual(&c), &g).unwrap();
        let dd = oggier_sboui_delsarte_weights(&delsarte_dual(&d), &g).unwrap();
        assert_eq!(cd.weights, vec![1, 1, 2, 2]);
        assert_eq!(dd.weights, vec![1, 1, 1, 2]);
    }

    #[test]
    fn trace_products() {
        assert_eq!(
            trace_product(&f(2), &Matrix::identity(2), &Matrix::identity(2)).unwrap(),
            0
        );
        assert_eq!(
            trace_product(&f(3), &Matrix::identity(2), &Matrix::identity(2)).unwrap(),
            2
        );
        assert!(trace_product(&f(3), &Matrix::identity(2), &Matrix::identity(3)).is_err());
    }

    #[test]
    fn dual_of_standard_anticode() {
        let g = GuardConfig::default();
        let s = standard_anticode(f(2), 2, 2, 1).unwrap();
        let d = delsarte_dual(&s);
        assert_eq!(d.dim(), 2);
        assert!(is_optimal_delsarte_anticode(&d, &g).unwrap());
        assert_eq!(delsarte_dual(&d), s);
    }

    #[test]
    fn weight_set_examples() {
        let (w, wbar) = weight_sets(&[1, 2], 3, 3, 2, 4).unwrap();
        assert_eq!(w, BTreeSet::from([1]));
        assert_eq!(wbar, BTreeSet::from([3]));
        let (w, wbar) = weight_sets(&[1, 2], 3, 3, 2, 3).unwrap();
        assert!(w.is_empty() && wbar.is_empty());
        let (w, _) = weight_sets(&[1, 1, 1, 2, 2, 3, 3], 3, 3, 7, 1).unwrap();
        assert_eq!(w, BTreeSet::from([1, 2, 3]));
        assert!(weight_sets(&[1], 3, 3, 2, 1).is_err());
    }

    #[test]
    fn dual_profile_examples() {
        assert_eq!(
            dual_weights_from_weights(&[1, 2], 3, 3, 2).unwrap(),
            vec![1, 1, 1, 2, 2, 3, 3]
        );
        assert_eq!(
            dual_weights_from_weights(&[1, 1, 1, 2, 2, 3, 3], 3, 3, 7).unwrap(),
            vec![1, 2]
        );
        // t = km - 1: a single dual weight
        let near_full = [1, 1, 1, 2, 2, 2, 3, 3];
        assert_eq!(
            dual_weights_from_weights(&near_full, 3, 3, 8)
                .unwrap()
                .len(),
            1
        );
        assert!(dual_weights_from_weights(&[1, 2], 3, 3, 0).is_err());
        assert!(dual_weights_from_weights(&[2, 1], 3, 3, 2).is_err());
        assert!(dual_weights_from_weights(&[1; 9], 3, 3, 9).is_err());
    }

    #[test]
    fn transpose_and_shapes() {
        let g = GuardConfig::default();
        let q5 = q5_code();
        let t = transpose_code(&q5).unwrap();
        assert_eq!(
            delsarte_generalized_weights(&t, &g).unwrap(),
            delsarte_generalized_weights(&q5, &g).unwrap()
        );
        assert!(transpose_code(&section5_code()).is_err());
        assert_eq!(
            DelsarteCode::full(f(2), 3, 2).unwrap_err(),
            Error::KExceedsM { k: 3, m: 2 }
        );
        let tall = DelsarteCode::from_transposes(f(2), 3, 2, &[mat(&[&[1, 0], &[0, 1], &[0, 0]])])
            .unwrap();
        assert_eq!((tall.k(), tall.m()), (2, 3));
        assert_eq!(maxrk(&tall, &g).unwrap(), 2);
    }

    #[test]
    fn basis_change_multiplies_on_the_right() {
        let t = Arc::new(make_field(2, 1, 3).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let g0 = polynomial_basis(&t);
        for _ in 0..10 {
            let other: Vec<Elem> = loop {
                let cand: Vec<Elem> = (0..3).map(|_| rng.gen_range(1..8)).collect();
                if basis_matrix(&t, &cand).is_ok() {
                    break cand;
                }
            };
            let c =
                GabidulinCode::new(t.clone(), Subspace::random(t.top(), 2, 1, &mut rng)).unwrap();
            let cg = associate(&c, &g0).unwrap();
            let cf = associate(&c, &other).unwrap();
            let b = change_of_basis(&t, &g0, &other).unwrap();
            let moved = right_mul_code(t.base(), cg.space(), &b, 2, 3).unwrap();
            assert_eq!(&moved, cf.space());
        }
    }

    #[test]
    fn finer_small() {
        let g = GuardConfig::default();
        let t = Arc::new(make_field(2, 1, 2).unwrap());
        let c = GabidulinCode::from_generators(t.clone(), 2, &[vec![1, t.generator()]]).unwrap();
        let out = finer_check(&c, &polynomial_basis(&t), &g, 1).unwrap();
        assert!(out.passed(), "{out:?}");
        assert_eq!(out.delsarte_weights[0], out.delsarte_weights[1]);
        let full = GabidulinCode::new(t.clone(), Subspace::full(2)).unwrap();
        let out = finer_check(&full, &polynomial_basis(&t), &g, 1).unwrap();
        assert!(out.passed());
        assert_eq!(out.delsarte_weights, vec![1, 1, 2, 2]);
    }
}
