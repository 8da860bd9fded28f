//! Brute-force re-derivations of every weight and classification.
//!
//! Nothing here calls the fast paths it is meant to check: the oracles share
//! only field arithmetic and linear algebra with the rest of the crate. The
//! verifiers compare the two sides and collect violations into a [`Report`].

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::pow_saturating;
pub use crate::config::GuardConfig;
use crate::delsarte::{
    self, anticode_space, associate, basis_matrix, change_of_basis, delsarte_dual,
    dual_weights_from_weights, enumerate_optimal_anticodes, finer_check,
    is_optimal_delsarte_anticode, is_optimal_delsarte_code, matrix_rank, polynomial_basis,
    profile_violations, transpose_code, AnticodeCatalog, DelsarteCode,
};
use crate::error::{Error, Result};
use crate::field::{Elem, Field, Tower};
use crate::hamming::{self, ghw_via_anticodes, hamming_dual, LinearCode};
use crate::linalg::{
    enumerate_all_subspaces, enumerate_subspaces, gaussian_binomial, right_mul_code, Matrix,
    Subspace,
};
use crate::profile::{Metric, WeightProfile};
use crate::rankmetric::{
    self, generalized_rank_weights, is_frobenius_closed_direct, rank_weights_via_anticodes,
    worst_case_drops, GabidulinCode,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub clause: String,
    pub detail: String,
}

/// Outcome of a verification suite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn new(suite: &str) -> Self {
        Self {
            suite: suite.to_string(),
            checked: 0,
            violations: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn fail(&mut self, clause: &str, detail: impl Into<String>) {
        self.violations.push(Violation {
            clause: clause.to_string(),
            detail: detail.into(),
        });
    }

    pub fn expect(&mut self, ok: bool, clause: &str, detail: impl FnOnce() -> String) {
        if !ok {
            self.fail(clause, detail());
        }
    }

    pub fn merge(&mut self, other: Report) {
        self.checked += other.checked;
        self.violations.extend(other.violations);
    }
}

// ---------------------------------------------------------------------------
// Hamming

/// `d_r(C)` from the definition: for every coordinate set `S`, count the
/// codewords supported inside `S`; `d_r` is the least `|S|` whose count
/// reaches `q^r`.
pub fn ghw_bruteforce(c: &LinearCode, guard: &GuardConfig) -> Result<WeightProfile> {
    let t = c.dim();
    if t == 0 {
        return Err(Error::ZeroCode);
    }
    let n = c.length();
    let f = &**c.field();
    guard.check_codewords(pow_saturating(f.order() as u64, t))?;
    guard.check_subspaces(pow_saturating(2, n))?;
    let masks: Vec<u64> = c
        .space()
        .vectors(f)
        .map(|v| {
            v.iter()
                .enumerate()
                .filter(|(_, &x)| x != 0)
                .fold(0u64, |acc, (i, _)| acc | 1 << i)
        })
        .collect();
    let q = f.order() as u128;
    let mut best = vec![usize::MAX; t + 1];
    for s in 0u64..(1 << n) {
        let inside = masks.iter().filter(|&&mk| mk & !s == 0).count() as u128;
        let mut r = 0;
        let mut size = 1u128;
        while r < t && size * q <= inside {
            size *= q;
            r += 1;
        }
        let w = s.count_ones() as usize;
        for slot in best.iter_mut().take(r + 1).skip(1) {
            *slot = (*slot).min(w);
        }
    }
    Ok(WeightProfile::new(Metric::Hamming, best[1..].to_vec()))
}

// ---------------------------------------------------------------------------
// Gabidulin

/// `m_r(C)` from the definition, with the Frobenius-closed spaces found by
/// testing every subspace of `F_{q^m}^k` for closure under the Frobenius map.
pub fn grw_bruteforce(c: &GabidulinCode, guard: &GuardConfig) -> Result<WeightProfile> {
    let t = c.dim();
    if t == 0 {
        return Err(Error::ZeroCode);
    }
    let tower = &**c.tower();
    let top = tower.top();
    let mut best = vec![usize::MAX; t + 1];
    for v in enumerate_all_subspaces(top, c.k(), guard)? {
        if !is_frobenius_closed_direct(tower, &v) {
            continue;
        }
        let inter = v.intersection_dim(top, c.space())?;
        for slot in best.iter_mut().take(inter + 1).skip(1) {
            *slot = (*slot).min(v.dim());
        }
    }
    Ok(WeightProfile::new(Metric::Gabidulin, best[1..].to_vec()))
}

// ---------------------------------------------------------------------------
// Delsarte

fn max_rank_at_most(f: &Field, k: usize, m: usize, s: &Subspace, bound: usize) -> bool {
    s.vectors(f).all(|v| matrix_rank(f, k, m, &v) <= bound)
}

fn exhaustive_cost(f: &Field, k: usize, m: usize) -> u128 {
    (0..=k)
        .map(|r| gaussian_binomial(k * m, m * r, f.order() as u64))
        .fold(0u128, u128::saturating_add)
}

/// Ground truth for Delsarte generalized weights in one matrix space.
///
/// When the whole subspace lattice fits the guard, every subspace of
/// dimension `mR` is tested for `maxrk ≤ R` and the survivors are kept.
/// Otherwise each weight is found by trying to extend `r`-dimensional subcodes
/// to `mR`-dimensional spaces of matrices of rank at most `R`.
#[derive(Debug, Clone)]
pub struct DelsarteOracle {
    field: Arc<Field>,
    k: usize,
    m: usize,
    by_rank: Option<Vec<Vec<Subspace>>>,
    guard: GuardConfig,
}

impl DelsarteOracle {
    pub fn new(field: Arc<Field>, k: usize, m: usize, guard: &GuardConfig) -> Result<Self> {
        if k > m {
            return Err(Error::KExceedsM { k, m });
        }
        let f = &*field;
        let fits = guard
            .check_ambient(pow_saturating(f.order() as u64, k * m))
            .and_then(|_| guard.check_subspaces(exhaustive_cost(f, k, m)))
            .is_ok();
        let by_rank = if fits {
            let mut by_rank = Vec::with_capacity(k + 1);
            for r in 0..=k {
                let mut found: Vec<Subspace> = enumerate_subspaces(f, k * m, m * r, guard)?
                    .par_bridge()
                    .filter(|s| max_rank_at_most(f, k, m, s, r))
                    .collect();
                found.sort();
                by_rank.push(found);
            }
            Some(by_rank)
        } else {
            None
        };
        Ok(Self {
            field,
            k,
            m,
            by_rank,
            guard: *guard,
        })
    }

    pub fn is_exhaustive(&self) -> bool {
        self.by_rank.is_some()
    }

    /// Optimal anticodes of maximum rank `R`, when the lattice was enumerated.
    pub fn anticodes_of_rank(&self, r: usize) -> Option<&[Subspace]> {
        self.by_rank.as_ref().map(|b| b[r].as_slice())
    }

    pub fn weights(&self, c: &DelsarteCode) -> Result<WeightProfile> {
        if c.k() != self.k || c.m() != self.m || **c.field() != *self.field {
            return Err(Error::Dimension(
                "code and oracle live in different matrix spaces".into(),
            ));
        }
        let t = c.dim();
        if t == 0 {
            return Err(Error::ZeroCode);
        }
        let f = &*self.field;
        let mut best = vec![usize::MAX; t + 1];
        match &self.by_rank {
            Some(by_rank) => {
                for (r, spaces) in by_rank.iter().enumerate() {
                    for a in spaces {
                        let inter = a.intersection_dim(f, c.space())?;
                        for slot in best.iter_mut().take(inter + 1).skip(1) {
                            *slot = (*slot).min(r);
                        }
                    }
                }
            }
            None => {
                for (r, slot) in best.iter_mut().enumerate().skip(1) {
                    *slot = self.weight_by_extension(c, r)?;
                }
            }
        }
        Ok(WeightProfile::new(Metric::Delsarte, best[1..].to_vec()))
    }

    fn weight_by_extension(&self, c: &DelsarteCode, r: usize) -> Result<usize> {
        let f = &*self.field;
        let (k, m) = (self.k, self.m);
        let g = c.space().basis();
        let subcodes: Vec<Subspace> = enumerate_subspaces(f, c.dim(), r, &self.guard)?
            .map(|coeffs| Ok(Subspace::from_matrix(f, &coeffs.basis().mul(f, g)?)))
            .collect::<Result<_>>()?;
        for big_r in 0..=k {
            if m * big_r < r {
                continue;
            }
            let mut nodes = 0u128;
            for d in &subcodes {
                if !max_rank_at_most(f, k, m, d, big_r) {
                    continue;
                }
                let mut seen = HashSet::new();
                if self.extend(d.clone(), big_r, &mut seen, &mut nodes)? {
                    return Ok(big_r);
                }
            }
        }
        unreachable!("the full space is an optimal anticode of rank k")
    }

    fn extend(
        &self,
        s: Subspace,
        bound: usize,
        seen: &mut HashSet<Subspace>,
        nodes: &mut u128,
    ) -> Result<bool> {
        let f = &*self.field;
        let (k, m) = (self.k, self.m);
        if s.dim() == m * bound {
            return Ok(true);
        }
        *nodes += 1;
        self.guard.check_subspaces(*nodes)?;
        let pivots: BTreeSet<usize> = s.pivots().into_iter().collect();
        let free: Vec<usize> = (0..k * m).filter(|i| !pivots.contains(i)).collect();
        let q = f.order();
        let mut digits = vec![0 as Elem; free.len()];
        let members: Vec<Vec<Elem>> = s.vectors(f).collect();
        loop {
            // odometer over the free coordinates, last digit fastest
            let mut i = free.len();
            loop {
                if i == 0 {
                    return Ok(false);
                }
                i -= 1;
                digits[i] += 1;
                if digits[i] < q {
                    break;
                }
                digits[i] = 0;
            }
            if digits.iter().find(|&&x| x != 0) != Some(&1) {
                continue;
            }
            let mut v = vec![0; k * m];
            for (&pos, &x) in free.iter().zip(&digits) {
                v[pos] = x;
            }
            let ok = members.iter().all(|w| {
                let sum: Vec<Elem> = v.iter().zip(w).map(|(&a, &b)| f.add(a, b)).collect();
                matrix_rank(f, k, m, &sum) <= bound
            });
            if !ok {
                continue;
            }
            let mut rows = s.basis().row_vecs();
            rows.push(v);
            let next = Subspace::span(f, k * m, &rows)?;
            if !seen.insert(next.clone()) {
                continue;
            }
            if self.extend(next, bound, seen, nodes)? {
                return Ok(true);
            }
        }
    }
}

/// `a_r(C)` from the definition, without the classification of anticodes.
pub fn dgw_bruteforce(c: &DelsarteCode, guard: &GuardConfig) -> Result<WeightProfile> {
    DelsarteOracle::new(c.field().clone(), c.k(), c.m(), guard)?.weights(c)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PazReport {
    pub q: u32,
    pub k: usize,
    pub m: usize,
    pub rank: usize,
    pub exhaustive_count: usize,
    pub descriptor_count: usize,
    pub equal: bool,
}

/// Compares the optimal anticodes of maximum rank `R` found by filtering every
/// `mR`-dimensional subspace against those materialized from supports.
pub fn verify_paz(
    field: &Arc<Field>,
    k: usize,
    m: usize,
    rank: usize,
    guard: &GuardConfig,
) -> Result<PazReport> {
    if rank > k {
        return Err(Error::Invalid(format!(
            "maximum rank {rank} exceeds k = {k}"
        )));
    }
    let f = &**field;
    guard.check_ambient(pow_saturating(f.order() as u64, k * m))?;
    let exhaustive: BTreeSet<Subspace> = enumerate_subspaces(f, k * m, m * rank, guard)?
        .par_bridge()
        .filter(|s| max_rank_at_most(f, k, m, s, rank))
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    let described: BTreeSet<Subspace> = enumerate_optimal_anticodes(field, k, m, rank, guard)?
        .iter()
        .map(|d| anticode_space(field.clone(), k, m, d).map(|c| c.space().clone()))
        .collect::<Result<_>>()?;
    Ok(PazReport {
        q: f.order(),
        k,
        m,
        rank,
        exhaustive_count: exhaustive.len(),
        descriptor_count: described.len(),
        equal: exhaustive == described,
    })
}

/// Every subspace of `F_{q^m}^k` is Frobenius-closed exactly when its
/// dimension equals its maximum rank.
pub fn verify_casino(tower: &Tower, k: usize, guard: &GuardConfig) -> Result<Report> {
    let mut report = Report::new("casino");
    for v in enumerate_all_subspaces(tower.top(), k, guard)? {
        report.checked += 1;
        let closed = is_frobenius_closed_direct(tower, &v);
        let anti = v.dim() == rankmetric::maxrk(tower, &v, guard)?;
        report.expect(closed == anti, "closed iff dim = maxrk", || {
            format!(
                "dim {} closed={closed} anticode={anti}: {:?}",
                v.dim(),
                v.basis().row_vecs()
            )
        });
    }
    Ok(report)
}

/// A space of matrices is an optimal anticode exactly when its dual is. Runs
/// over every subspace of dimension divisible by `m` when that fits the guard,
/// otherwise over the enumerated anticodes only.
pub fn verify_dan(field: &Arc<Field>, k: usize, m: usize, guard: &GuardConfig) -> Result<Report> {
    let mut report = Report::new("dan");
    let f = &**field;
    let exhaustive = guard
        .check_ambient(pow_saturating(f.order() as u64, k * m))
        .is_ok()
        && guard.check_subspaces(exhaustive_cost(f, k, m)).is_ok();
    let check = |space: Subspace, report: &mut Report| -> Result<()> {
        let a = DelsarteCode::new(field.clone(), k, m, space)?;
        let d = delsarte_dual(&a);
        let lhs = is_optimal_delsarte_anticode(&a, guard)?;
        let rhs = is_optimal_delsarte_anticode(&d, guard)?;
        report.checked += 1;
        report.expect(lhs == rhs, "anticode iff dual anticode", || {
            format!("dim {} anticode={lhs}, dual anticode={rhs}", a.dim())
        });
        Ok(())
    };
    if exhaustive {
        for r in 0..=k {
            for s in enumerate_subspaces(f, k * m, m * r, guard)? {
                check(s, &mut report)?;
            }
        }
    } else {
        for r in 0..=k {
            for d in enumerate_optimal_anticodes(field, k, m, r, guard)? {
                check(
                    anticode_space(field.clone(), k, m, &d)?.space().clone(),
                    &mut report,
                )?;
            }
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Random codes

pub fn random_linear_code<R: Rng + ?Sized>(
    field: &Arc<Field>,
    n: usize,
    t: usize,
    rng: &mut R,
) -> LinearCode {
    LinearCode::new(field.clone(), Subspace::random(field, n, t, rng))
}

pub fn random_gabidulin_code<R: Rng + ?Sized>(
    tower: &Arc<Tower>,
    k: usize,
    t: usize,
    rng: &mut R,
) -> Result<GabidulinCode> {
    GabidulinCode::new(tower.clone(), Subspace::random(tower.top(), k, t, rng))
}

pub fn random_delsarte_code<R: Rng + ?Sized>(
    field: &Arc<Field>,
    k: usize,
    m: usize,
    t: usize,
    rng: &mut R,
) -> Result<DelsarteCode> {
    DelsarteCode::new(field.clone(), k, m, Subspace::random(field, k * m, t, rng))
}

/// A uniformly drawn basis of `F_{q^m}` over `F_q`.
pub fn random_basis<R: Rng + ?Sized>(tower: &Tower, rng: &mut R) -> Vec<Elem> {
    let order = tower.top().order();
    loop {
        let cand: Vec<Elem> = (0..tower.m()).map(|_| rng.gen_range(0..order)).collect();
        if basis_matrix(tower, &cand).is_ok() {
            return cand;
        }
    }
}

// ---------------------------------------------------------------------------
// Property suites

fn fmt(w: &[usize]) -> String {
    WeightProfile::new(Metric::Delsarte, w.to_vec()).to_string()
}

/// Wei-type properties of generalized Hamming weights, checked against the
/// oracle and the anticode characterization.
pub fn check_linear_code(c: &LinearCode, guard: &GuardConfig, report: &mut Report) -> Result<()> {
    report.checked += 1;
    let (n, t) = (c.length(), c.dim());
    let d = hamming::generalized_hamming_weights(c, guard)?;
    let w = d.as_slice();
    report.expect(w[0] == hamming::minwt(c, guard)?, "d_1 = minwt", || fmt(w));
    report.expect(w[t - 1] <= n, "d_t <= n", || fmt(w));
    for r in 1..t {
        report.expect(w[r - 1] < w[r], "strictly increasing", || fmt(w));
    }
    for r in 1..=t {
        report.expect(w[r - 1] <= n - t + r, "d_r <= n - t + r", || fmt(w));
    }
    let brute = ghw_bruteforce(c, guard)?;
    report.expect(brute == d, "oracle agreement", || {
        format!("fast {d}, oracle {brute}")
    });
    let via = ghw_via_anticodes(c, guard)?;
    if c.field().order() != 2 || n <= hamming::MAX_BINARY_ANTICODE_LENGTH {
        report.expect(via == d, "anticode characterization", || {
            format!("{d} vs {via}")
        });
    }
    Ok(())
}

pub fn verify_hamming_suite(codes: &[LinearCode], guard: &GuardConfig) -> Result<Report> {
    let mut report = Report::new("hamming");
    for c in codes {
        check_linear_code(c, guard, &mut report)?;
    }
    Ok(report)
}

/// Properties of generalized rank weights, the anticode characterization,
/// worst-case security drops and oracle agreement.
pub fn check_gabidulin_code(
    c: &GabidulinCode,
    guard: &GuardConfig,
    report: &mut Report,
) -> Result<()> {
    report.checked += 1;
    let (k, t) = (c.k(), c.dim());
    let mr = generalized_rank_weights(c, guard)?;
    let w = mr.as_slice();
    let minrk = rankmetric::minrk(c.tower(), c.space(), guard)?;
    report.expect(w[0] == minrk, "m_1 = minrk", || fmt(w));
    report.expect(w[t - 1] <= k, "m_t <= k", || fmt(w));
    for r in 1..t {
        report.expect(w[r - 1] < w[r], "strictly increasing", || fmt(w));
    }
    for r in 1..=t {
        report.expect(w[r - 1] <= k - t + r, "m_r <= k - t + r", || fmt(w));
    }
    let via = rank_weights_via_anticodes(c, guard)?;
    report.expect(via == mr, "anticode characterization", || {
        format!("{mr} vs {via}")
    });
    let drops = worst_case_drops(c, guard)?;
    let expected: BTreeSet<usize> = w.iter().copied().collect();
    report.expect(drops == expected, "security drops are the weights", || {
        format!("drops {drops:?}, weights {mr}")
    });
    let brute = grw_bruteforce(c, guard)?;
    report.expect(brute == mr, "oracle agreement", || {
        format!("fast {mr}, oracle {brute}")
    });
    Ok(())
}

pub fn verify_gabidulin_suite(codes: &[GabidulinCode], guard: &GuardConfig) -> Result<Report> {
    let mut report = Report::new("gabidulin");
    for c in codes {
        check_gabidulin_code(c, guard, &mut report)?;
    }
    Ok(report)
}

/// Dual-profile reconstruction and the non-matching of primal and dual weight
/// sets, both against a directly computed dual profile.
pub fn check_duality(
    c: &DelsarteCode,
    catalog: &AnticodeCatalog,
    report: &mut Report,
) -> Result<()> {
    let (k, m, t) = (c.k(), c.m(), c.dim());
    if t == 0 || t == k * m {
        return Ok(());
    }
    let a = catalog.weights(c)?;
    let dual = catalog.weights(&delsarte_dual(c))?;
    for r in 1..=k * m - t {
        for s in 1..=t {
            if (s as i64 - t as i64 - r as i64).rem_euclid(m as i64) != 0 {
                continue;
            }
            let lhs = dual.as_slice()[r - 1];
            let rhs = k + 1 - a.as_slice()[s - 1];
            report.expect(lhs != rhs, "dual weights avoid shifted primal", || {
                format!("a_{r}(dual) = k + 1 - a_{s} = {lhs} for {a}")
            });
        }
    }
    match dual_weights_from_weights(a.as_slice(), k, m, t) {
        Ok(rebuilt) => report.expect(
            rebuilt == dual.weights,
            "dual profile reconstruction",
            || format!("rebuilt {} vs direct {dual}", fmt(&rebuilt)),
        ),
        Err(e) => report.fail("dual profile reconstruction", format!("{a}: {e}")),
    }
    Ok(())
}

fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

/// Properties of Delsarte generalized weights, invariance under rank-preserving
/// maps and transposition, duality, the optimal code and anticode
/// characterizations, and oracle agreement when an oracle is supplied.
pub fn check_delsarte_code<R: Rng + ?Sized>(
    c: &DelsarteCode,
    catalog: &AnticodeCatalog,
    oracle: Option<&DelsarteOracle>,
    guard: &GuardConfig,
    rng: &mut R,
    report: &mut Report,
) -> Result<()> {
    report.checked += 1;
    let (k, m, t) = (c.k(), c.m(), c.dim());
    let a = catalog.weights(c)?;
    let w = a.as_slice();
    report.expect(w[0] == delsarte::minrk(c, guard)?, "a_1 = minrk", || fmt(w));
    for v in profile_violations(w, k, m) {
        report.fail("weight bounds", v);
    }
    if let Some(o) = oracle {
        let brute = o.weights(c)?;
        report.expect(brute == a, "oracle agreement", || {
            format!("fast {a}, oracle {brute}")
        });
    }
    let f = &**c.field();
    let am = Matrix::random_invertible(f, k, rng);
    let bm = Matrix::random_invertible(f, m, rng);
    let moved = catalog.weights(&c.transform(&am, &bm)?)?;
    report.expect(moved == a, "invariant under A C B", || {
        format!("{a} vs {moved}")
    });
    if k == m {
        let tr = catalog.weights(&transpose_code(c)?)?;
        report.expect(tr == a, "invariant under transposition", || {
            format!("{a} vs {tr}")
        });
    }
    if t % m == 0 {
        let big_r = t / m;
        let opt = is_optimal_delsarte_code(c, guard)?;
        let first = w[0] == k - big_r + 1;
        let all = (1..=t).all(|r| w[r - 1] == k - big_r + ceil_div(r, m));
        report.expect(
            opt == first && first == all,
            "optimal code characterization",
            || format!("optimal={opt} a_1={} profile {a}", w[0]),
        );
        let anti = is_optimal_delsarte_anticode(c, guard)?;
        let last = w[t - 1] == big_r;
        let all = (1..=t).all(|r| w[r - 1] == ceil_div(r, m));
        report.expect(
            anti == last && last == all,
            "optimal anticode characterization",
            || format!("anticode={anti} profile {a}"),
        );
    }
    let dual = delsarte_dual(c);
    let anti = is_optimal_delsarte_anticode(c, guard)?;
    let dual_anti = is_optimal_delsarte_anticode(&dual, guard)?;
    report.expect(anti == dual_anti, "anticode iff dual anticode", || {
        format!("anticode={anti}, dual anticode={dual_anti} for {a}")
    });
    check_duality(c, catalog, report)
}

/// Runs [`check_delsarte_code`] on every code, building one anticode catalog
/// and one oracle per matrix space.
pub fn verify_delsarte_suite(
    codes: &[DelsarteCode],
    guard: &GuardConfig,
    seed: u64,
) -> Result<Report> {
    let mut report = Report::new("delsarte");
    let mut catalogs: HashMap<(u32, usize, usize), (AnticodeCatalog, DelsarteOracle)> =
        HashMap::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for c in codes {
        let key = (c.field().order(), c.k(), c.m());
        if let Entry::Vacant(e) = catalogs.entry(key) {
            let cat = AnticodeCatalog::new(c.field().clone(), c.k(), c.m(), guard)?;
            let ora = DelsarteOracle::new(c.field().clone(), c.k(), c.m(), guard)?;
            e.insert((cat, ora));
        }
        let (cat, ora) = &catalogs[&key];
        check_delsarte_code(c, cat, Some(ora), guard, &mut rng, &mut report)?;
    }
    Ok(report)
}

/// Reconstruction of dual profiles on a batch of codes.
pub fn verify_duality(codes: &[DelsarteCode], guard: &GuardConfig) -> Result<Report> {
    let mut report = Report::new("duality");
    let mut catalogs: HashMap<(u32, usize, usize), AnticodeCatalog> = HashMap::new();
    for c in codes {
        let key = (c.field().order(), c.k(), c.m());
        if let Entry::Vacant(e) = catalogs.entry(key) {
            e.insert(AnticodeCatalog::new(
                c.field().clone(),
                c.k(),
                c.m(),
                guard,
            )?);
        }
        report.checked += 1;
        check_duality(c, &catalogs[&key], &mut report)?;
    }
    Ok(report)
}

/// Rank weights against Delsarte weights of the associated code, for the
/// polynomial basis and a second random basis, plus basis independence.
pub fn verify_finer(codes: &[GabidulinCode], guard: &GuardConfig, seed: u64) -> Result<Report> {
    let mut report = Report::new("finer");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for c in codes {
        let tower = &**c.tower();
        let g = polynomial_basis(tower);
        let other = loop {
            let b = random_basis(tower, &mut rng);
            if b != g {
                break b;
            }
        };
        let mut profiles = Vec::new();
        for basis in [&g, &other] {
            report.checked += 1;
            let out = finer_check(c, basis, guard, rng.gen())?;
            report.expect(out.mismatches.is_empty(), "m_r = a_{rm-e}", || {
                format!(
                    "rank {:?}, delsarte {:?}, at {:?}",
                    out.rank_weights, out.delsarte_weights, out.mismatches
                )
            });
            report.expect(
                out.left_mul_failures == 0,
                "association commutes with left multiplication",
                || format!("{} failures", out.left_mul_failures),
            );
            profiles.push(out.delsarte_weights);
        }
        report.expect(profiles[0] == profiles[1], "basis independence", || {
            format!("{:?} vs {:?}", profiles[0], profiles[1])
        });
        let b = change_of_basis(tower, &g, &other)?;
        let cg = associate(c, &g)?;
        let cf = associate(c, &other)?;
        let moved = right_mul_code(tower.base(), cg.space(), &b, c.k(), c.m())?;
        report.expect(
            &moved == cf.space(),
            "basis change is right multiplication",
            || format!("basis {other:?}"),
        );
    }
    Ok(report)
}

/// `{d_r(C^⊥)} = [n] \ {n + 1 - d_r(C)}`, both sides by brute force.
pub fn verify_wei(codes: &[LinearCode], guard: &GuardConfig) -> Result<Report> {
    let mut report = Report::new("wei");
    for c in codes {
        let (n, t) = (c.length(), c.dim());
        if t == 0 || t == n {
            continue;
        }
        report.checked += 1;
        let d = ghw_bruteforce(c, guard)?;
        let dd = ghw_bruteforce(&hamming_dual(c), guard)?;
        let lhs: BTreeSet<usize> = dd.as_slice().iter().copied().collect();
        let shifted: BTreeSet<usize> = d.as_slice().iter().map(|&x| n + 1 - x).collect();
        let rhs: BTreeSet<usize> = (1..=n).filter(|x| !shifted.contains(x)).collect();
        report.expect(
            lhs == rhs && lhs.len() == n - t,
            "dual weights complement",
            || format!("n = {n}, d = {d}, dual = {dd}"),
        );
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Profile search

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub profile: Vec<usize>,
    /// Generators as `k x m` arrays of `F_q` elements.
    pub generators: Vec<Vec<Vec<Elem>>>,
}

impl Witness {
    pub fn from_code(profile: Vec<usize>, c: &DelsarteCode) -> Self {
        Self {
            profile,
            generators: c.matrices().iter().map(Matrix::row_vecs).collect(),
        }
    }

    pub fn to_code(&self, field: Arc<Field>, k: usize, m: usize) -> Result<DelsarteCode> {
        let mats = self
            .generators
            .iter()
            .map(|g| Matrix::from_rows(m, g))
            .collect::<Result<Vec<_>>>()?;
        DelsarteCode::from_matrices(field, k, m, &mats)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Unfindable {
    pub profile: Vec<usize>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub q: u32,
    pub k: usize,
    pub m: usize,
    pub t: usize,
    pub seed: u64,
    pub mode: SearchMode,
    pub examined: u64,
    pub found: Vec<Witness>,
    pub unfound: Vec<Vec<usize>>,
    pub unfindable: Vec<Unfindable>,
    pub budget_exhausted: bool,
    pub elapsed_secs: f64,
}

const SEARCH_CHUNK: usize = 4096;

/// Looks for `t`-dimensional codes in `Mat(k x m, F_q)` realizing each target
/// profile. Enumerates every code when the count fits the subspace guard,
/// otherwise samples spans of `t` random matrices from a seeded stream. The
/// first witness in stream order is kept, so results do not depend on the
/// thread count.
pub fn search_profiles(
    field: &Arc<Field>,
    k: usize,
    m: usize,
    t: usize,
    targets: &[Vec<usize>],
    guard: &GuardConfig,
    seed: u64,
) -> Result<SearchReport> {
    if k > m {
        return Err(Error::KExceedsM { k, m });
    }
    if t == 0 || t > k * m {
        return Err(Error::Invalid(format!(
            "dimension t = {t} outside 1..={}",
            k * m
        )));
    }
    let start = Instant::now();
    let f = &**field;
    let mut unfindable = Vec::new();
    let mut wanted: BTreeSet<Vec<usize>> = BTreeSet::new();
    for p in targets {
        if p.len() != t {
            unfindable.push(Unfindable {
                profile: p.clone(),
                reason: format!("length {} differs from t = {t}", p.len()),
            });
            continue;
        }
        let bad = profile_violations(p, k, m);
        if bad.is_empty() {
            wanted.insert(p.clone());
        } else {
            unfindable.push(Unfindable {
                profile: p.clone(),
                reason: bad.join("; "),
            });
        }
    }
    let catalog = AnticodeCatalog::new(field.clone(), k, m, guard)?;
    let mut found: BTreeMap<Vec<usize>, Witness> = BTreeMap::new();
    let mut examined = 0u64;
    let mut budget_exhausted = false;
    let out_of_time = |start: &Instant| guard.time_budget.is_some_and(|b| start.elapsed() >= b);

    let absorb = |chunk: Vec<Subspace>, found: &mut BTreeMap<Vec<usize>, Witness>| -> Result<()> {
        let profiles: Vec<Result<Vec<usize>>> = chunk
            .par_iter()
            .map(|s| {
                let c = DelsarteCode::new(field.clone(), k, m, s.clone())?;
                Ok(catalog.weights(&c)?.weights)
            })
            .collect();
        for (s, p) in chunk.into_iter().zip(profiles) {
            let p = p?;
            if wanted.contains(&p) && !found.contains_key(&p) {
                let c = DelsarteCode::new(field.clone(), k, m, s)?;
                found.insert(p.clone(), Witness::from_code(p, &c));
            }
        }
        Ok(())
    };

    let total = gaussian_binomial(k * m, t, f.order() as u64);
    let exhaustive = guard.check_subspaces(total).is_ok()
        && guard
            .check_ambient(pow_saturating(f.order() as u64, k * m))
            .is_ok();
    let mode = if exhaustive {
        SearchMode::Exhaustive
    } else {
        SearchMode::Sampled
    };
    if exhaustive {
        let mut iter = enumerate_subspaces(f, k * m, t, guard)?;
        while found.len() < wanted.len() {
            if out_of_time(&start) {
                budget_exhausted = true;
                break;
            }
            let chunk: Vec<Subspace> = iter.by_ref().take(SEARCH_CHUNK).collect();
            if chunk.is_empty() {
                break;
            }
            examined += chunk.len() as u64;
            absorb(chunk, &mut found)?;
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut seen: HashSet<Subspace> = HashSet::new();
        let mut draws = 0u128;
        while found.len() < wanted.len() {
            if out_of_time(&start) || draws >= guard.max_subspaces {
                budget_exhausted = true;
                break;
            }
            let mut chunk = Vec::with_capacity(SEARCH_CHUNK);
            while chunk.len() < SEARCH_CHUNK && draws < guard.max_subspaces {
                draws += 1;
                let mats: Vec<Vec<Elem>> = (0..t)
                    .map(|_| Matrix::random(f, k, m, &mut rng).data().to_vec())
                    .collect();
                let s = Subspace::span(f, k * m, &mats)?;
                if s.dim() == t && seen.insert(s.clone()) {
                    chunk.push(s);
                }
            }
            examined += chunk.len() as u64;
            absorb(chunk, &mut found)?;
        }
    }
    let unfound = wanted
        .iter()
        .filter(|p| !found.contains_key(*p))
        .cloned()
        .collect();
    Ok(SearchReport {
        q: f.order(),
        k,
        m,
        t,
        seed,
        mode,
        examined,
        found: found.into_values().collect(),
        unfound,
        unfindable,
        budget_exhausted,
        elapsed_secs: start.elapsed().as_secs_f64(),
    })
}

/// Recomputes every witness's profile and reports the ones that disagree.
pub fn reverify_witnesses(
    report: &SearchReport,
    field: &Arc<Field>,
    guard: &GuardConfig,
) -> Result<Report> {
    let mut out = Report::new("witnesses");
    for w in &report.found {
        out.checked += 1;
        let c = w.to_code(field.clone(), report.k, report.m)?;
        out.expect(c.dim() == report.t, "witness dimension", || {
            format!("{} != {}", c.dim(), report.t)
        });
        let a = delsarte::delsarte_generalized_weights(&c, guard)?;
        out.expect(a.weights == w.profile, "witness profile", || {
            format!("claimed {}, recomputed {a}", fmt(&w.profile))
        });
    }
    Ok(out)
}
