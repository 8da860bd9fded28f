//! Exact linear algebra over a [`Field`]: row-reduced echelon form, subspaces
//! in canonical form, intersections, duals and exhaustive enumeration.
//!
//! Functions take the field explicitly; matrices and subspaces only hold
//! element indices.

use std::fmt;

use rand::Rng;

use crate::config::{pow_saturating, GuardConfig};
use crate::error::{Error, Result};
use crate::field::{Elem, Field};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.data.chunks(self.cols.max(1)).take(self.rows))
            .finish()
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Elem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from rows of equal length. An empty row list gives a
    /// `0 x cols` matrix.
    pub fn from_rows<R: AsRef<[Elem]>>(cols: usize, rows: &[R]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::Dimension(format!(
                    "row of length {} in a matrix with {cols} columns",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Elem] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: Elem) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, f: &Field, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(l, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Trace of a square matrix.
    pub fn trace(&self, f: &Field) -> Result<Elem> {
        if self.rows != self.cols {
            return Err(Error::Dimension("trace of a non-square matrix".into()));
        }
        Ok((0..self.rows).fold(0, |acc, i| f.add(acc, self.get(i, i))))
    }

    /// Vertical concatenation.
    pub fn stack(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.cols {
            return Err(Error::Dimension(
                "stacking matrices of different widths".into(),
            ));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn inverse(&self, f: &Field) -> Result<Matrix> {
        let n = self.rows;
        if n != self.cols {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let pivots = rref_in_place(f, &mut aug);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, aug.get(i, n + j));
            }
        }
        Ok(inv)
    }

    pub fn random<R: Rng + ?Sized>(f: &Field, rows: usize, cols: usize, rng: &mut R) -> Matrix {
        let data = (0..rows * cols)
            .map(|_| rng.gen_range(0..f.order()))
            .collect();
        Matrix { rows, cols, data }
    }

    pub fn random_invertible<R: Rng + ?Sized>(f: &Field, n: usize, rng: &mut R) -> Matrix {
        loop {
            let m = Matrix::random(f, n, n, rng);
            if rank(f, &m) == n {
                return m;
            }
        }
    }
}

fn row_axpy(f: &Field, data: &mut [Elem], cols: usize, dst: usize, src: usize, c: Elem) {
    // row[dst] -= c * row[src]
    let nc = f.neg(c);
    for j in 0..cols {
        let s = data[src * cols + j];
        if s != 0 {
            let d = &mut data[dst * cols + j];
            *d = f.add(*d, f.mul(nc, s));
        }
    }
}

/// Reduces `m` in place and returns its pivot columns. Zero rows end up at
/// the bottom.
pub fn rref_in_place(f: &Field, m: &mut Matrix) -> Vec<usize> {
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| m.data[i * cols + c] != 0) else {
            continue;
        };
        if piv != r {
            for j in 0..cols {
                m.data.swap(piv * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(m.data[r * cols + c]).expect("pivot is nonzero");
        if inv != 1 {
            for j in c..cols {
                let x = &mut m.data[r * cols + j];
                *x = f.mul(*x, inv);
            }
        }
        for i in 0..rows {
            if i != r {
                let coef = m.data[i * cols + c];
                if coef != 0 {
                    row_axpy(f, &mut m.data, cols, i, r, coef);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Row-reduced echelon form of `m` (same shape, zero rows last) and its pivot
/// columns.
pub fn rref(f: &Field, m: &Matrix) -> (Matrix, Vec<usize>) {
    let mut out = m.clone();
    let pivots = rref_in_place(f, &mut out);
    (out, pivots)
}

pub fn rank(f: &Field, m: &Matrix) -> usize {
    rref(f, m).1.len()
}

pub fn rowspace(f: &Field, m: &Matrix) -> Subspace {
    Subspace::from_matrix(f, m)
}

pub fn transpose(m: &Matrix) -> Matrix {
    m.transpose()
}

/// A subspace of `F^n` stored as its unique RREF basis (nonzero rows only).
/// Two subspaces are equal iff their canonical bases are identical.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    n: usize,
    basis: Matrix,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(n={}, {:?})", self.n, self.basis)
    }
}

impl Subspace {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            basis: Matrix::zeros(0, n),
        }
    }

    pub fn full(n: usize) -> Self {
        Self {
            n,
            basis: Matrix::identity(n),
        }
    }

    pub fn from_matrix(f: &Field, m: &Matrix) -> Self {
        let (mut r, pivots) = rref(f, m);
        r.rows = pivots.len();
        r.data.truncate(r.rows * r.cols);
        Self {
            n: m.cols,
            basis: r,
        }
    }

    pub fn span<R: AsRef<[Elem]>>(f: &Field, n: usize, rows: &[R]) -> Result<Self> {
        Ok(Self::from_matrix(f, &Matrix::from_rows(n, rows)?))
    }

    /// Wraps a matrix that is already in RREF with no zero rows.
    fn from_rref_unchecked(basis: Matrix) -> Self {
        Self {
            n: basis.cols,
            basis,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> Vec<usize> {
        (0..self.basis.rows)
            .map(|i| {
                self.basis
                    .row(i)
                    .iter()
                    .position(|&x| x != 0)
                    .expect("basis rows are nonzero")
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    fn same_ambient(&self, other: &Subspace) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Dimension(format!(
                "subspaces of F^{} and F^{}",
                self.n, other.n
            )));
        }
        Ok(())
    }

    pub fn contains(&self, f: &Field, v: &[Elem]) -> Result<bool> {
        if v.len() != self.n {
            return Err(Error::Dimension(format!(
                "vector of length {} in F^{}",
                v.len(),
                self.n
            )));
        }
        // reduce v against the RREF basis using the pivot positions
        let mut r = v.to_vec();
        for (i, p) in self.pivots().into_iter().enumerate() {
            let c = r[p];
            if c != 0 {
                let nc = f.neg(c);
                for (x, &b) in r.iter_mut().zip(self.basis.row(i)) {
                    if b != 0 {
                        *x = f.add(*x, f.mul(nc, b));
                    }
                }
            }
        }
        Ok(r.iter().all(|&x| x == 0))
    }

    pub fn is_subspace_of(&self, f: &Field, other: &Subspace) -> Result<bool> {
        self.same_ambient(other)?;
        for i in 0..self.dim() {
            if !other.contains(f, self.basis.row(i))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, f: &Field, other: &Subspace) -> Result<Subspace> {
        self.same_ambient(other)?;
        Ok(Subspace::from_matrix(f, &self.basis.stack(&other.basis)?))
    }

    /// `dim(self + other)` without building the canonical basis of the sum.
    pub fn sum_dim(&self, f: &Field, other: &Subspace) -> Result<usize> {
        self.same_ambient(other)?;
        Ok(rank(f, &self.basis.stack(&other.basis)?))
    }

    pub fn intersection_dim(&self, f: &Field, other: &Subspace) -> Result<usize> {
        Ok(self.dim() + other.dim() - self.sum_dim(f, other)?)
    }

    /// Zassenhaus: reduce `[[U, U], [V, 0]]`; rows whose left half vanishes
    /// span `U ∩ V`.
    pub fn intersect(&self, f: &Field, other: &Subspace) -> Result<Subspace> {
        self.same_ambient(other)?;
        let n = self.n;
        let mut z = Matrix::zeros(self.dim() + other.dim(), 2 * n);
        for i in 0..self.dim() {
            for j in 0..n {
                let x = self.basis.get(i, j);
                z.set(i, j, x);
                z.set(i, n + j, x);
            }
        }
        for i in 0..other.dim() {
            for j in 0..n {
                z.set(self.dim() + i, j, other.basis.get(i, j));
            }
        }
        let pivots = rref_in_place(f, &mut z);
        let rows: Vec<Vec<Elem>> = pivots
            .iter()
            .enumerate()
            .filter(|(_, &p)| p >= n)
            .map(|(i, _)| z.row(i)[n..].to_vec())
            .collect();
        Subspace::span(f, n, &rows)
    }

    /// `{x : b·x = 0 for every basis row b}`.
    pub fn orthogonal(&self, f: &Field) -> Subspace {
        kernel(f, &self.basis)
    }

    /// The vector with coordinates `coeffs` in the canonical basis.
    pub fn combine(&self, f: &Field, coeffs: &[Elem]) -> Vec<Elem> {
        let mut v = vec![0; self.n];
        for (i, &c) in coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (x, &b) in v.iter_mut().zip(self.basis.row(i)) {
                if b != 0 {
                    *x = f.add(*x, f.mul(c, b));
                }
            }
        }
        v
    }

    /// Every vector of the subspace (`|F|^dim` of them), zero first.
    pub fn vectors<'a>(&'a self, f: &'a Field) -> impl Iterator<Item = Vec<Elem>> + 'a {
        let q = f.order() as u64;
        let total = q.pow(self.dim() as u32);
        let d = self.dim();
        (0..total).map(move |mut code| {
            let mut coeffs = Vec::with_capacity(d);
            for _ in 0..d {
                coeffs.push((code % q) as Elem);
                code /= q;
            }
            self.combine(f, &coeffs)
        })
    }

    pub fn random<R: Rng + ?Sized>(f: &Field, n: usize, d: usize, rng: &mut R) -> Subspace {
        assert!(d <= n);
        loop {
            let s = Subspace::from_matrix(f, &Matrix::random(f, d, n, rng));
            if s.dim() == d {
                return s;
            }
        }
    }
}

/// Null space `{x : M x^T = 0}`.
pub fn kernel(f: &Field, m: &Matrix) -> Subspace {
    let n = m.cols;
    let (r, pivots) = rref(f, m);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut rows = Vec::with_capacity(free.len());
    for &fc in &free {
        let mut v = vec![0; n];
        v[fc] = 1;
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = f.neg(r.get(i, fc));
        }
        rows.push(v);
    }
    Subspace::span(f, n, &rows).expect("rows have length n")
}

/// A non-degenerate symmetric bilinear form on `F^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BilinearForm {
    /// `⟨u, v⟩ = Σ u_i v_i`.
    Standard,
    /// `⟨M, N⟩ = Tr(M N^t)` on `rows x cols` matrices flattened row-major.
    TraceProduct { rows: usize, cols: usize },
}

impl BilinearForm {
    pub fn eval(&self, f: &Field, u: &[Elem], v: &[Elem]) -> Result<Elem> {
        if u.len() != v.len() {
            return Err(Error::Dimension("vectors of different lengths".into()));
        }
        match *self {
            BilinearForm::Standard => Ok(u
                .iter()
                .zip(v)
                .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))),
            BilinearForm::TraceProduct { rows, cols } => {
                let m = Matrix::from_vec(rows, cols, u.to_vec())?;
                let n = Matrix::from_vec(rows, cols, v.to_vec())?;
                m.mul(f, &n.transpose())?.trace(f)
            }
        }
    }

    /// Gram matrix on the standard basis of `F^n`.
    pub fn gram(&self, f: &Field, n: usize) -> Result<Matrix> {
        let mut g = Matrix::zeros(n, n);
        let unit = |i: usize| {
            let mut e = vec![0; n];
            e[i] = 1;
            e
        };
        for i in 0..n {
            for j in 0..n {
                g.set(i, j, self.eval(f, &unit(i), &unit(j))?);
            }
        }
        Ok(g)
    }
}

/// `U^⊥ = {v : ⟨u, v⟩ = 0 for all u ∈ U}` under `form`.
pub fn dual_subspace(f: &Field, u: &Subspace, form: BilinearForm) -> Result<Subspace> {
    let n = u.ambient_dim();
    let gram = form.gram(f, n)?;
    if rank(f, &gram) != n {
        return Err(Error::Invalid("bilinear form is degenerate".into()));
    }
    Ok(kernel(f, &u.basis().mul(f, &gram)?))
}

fn check_invertible(f: &Field, a: &Matrix, n: usize) -> Result<()> {
    if a.rows() != n || a.cols() != n {
        return Err(Error::Dimension(format!(
            "expected a {n}x{n} matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if rank(f, a) != n {
        return Err(Error::Singular);
    }
    Ok(())
}

fn map_rows(
    f: &Field,
    u: &Subspace,
    k: usize,
    m: usize,
    op: impl Fn(&Matrix) -> Result<Matrix>,
) -> Result<Subspace> {
    if u.ambient_dim() != k * m {
        return Err(Error::Dimension(format!(
            "subspace of F^{} is not a space of {k}x{m} matrices",
            u.ambient_dim()
        )));
    }
    let mut rows = Vec::with_capacity(u.dim());
    for i in 0..u.dim() {
        let x = Matrix::from_vec(k, m, u.basis().row(i).to_vec())?;
        rows.push(op(&x)?.data);
    }
    Subspace::span(f, k * m, &rows)
}

/// `A·U = {A N : N ∈ U}` for `U` a space of `k x m` matrices and `A`
/// invertible `k x k`.
pub fn left_mul_code(f: &Field, a: &Matrix, u: &Subspace, k: usize, m: usize) -> Result<Subspace> {
    check_invertible(f, a, k)?;
    map_rows(f, u, k, m, |x| a.mul(f, x))
}

/// `U·B = {N B : N ∈ U}` for `U` a space of `k x m` matrices and `B`
/// invertible `m x m`. Vector codes are the case `k = 1`.
pub fn right_mul_code(f: &Field, u: &Subspace, b: &Matrix, k: usize, m: usize) -> Result<Subspace> {
    check_invertible(f, b, m)?;
    map_rows(f, u, k, m, |x| x.mul(f, b))
}

/// Number of `d`-dimensional subspaces of `F_q^n`.
pub fn gaussian_binomial(n: usize, d: usize, q: u64) -> u128 {
    if d > n {
        return 0;
    }
    let q = q as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..d {
        num *= q.pow((n - i) as u32) - 1;
        den *= q.pow((i + 1) as u32) - 1;
    }
    num / den
}

/// Iterator over all `d`-dimensional subspaces of `F^n`, each exactly once.
///
/// Order: pivot-column sets in lexicographic order, then the free entries of
/// the RREF read row-major as base-`|F|` digits, most significant first.
pub struct SubspaceIter<'a> {
    f: &'a Field,
    n: usize,
    d: usize,
    pivots: Option<Vec<usize>>,
    free: Vec<(usize, usize)>,
    counter: Vec<Elem>,
}

/// Enumerates the `d`-dimensional subspaces of `F^n`.
pub fn enumerate_subspaces<'a>(
    f: &'a Field,
    n: usize,
    d: usize,
    guard: &GuardConfig,
) -> Result<SubspaceIter<'a>> {
    if d > n {
        return Err(Error::Invalid(format!("dimension {d} exceeds ambient {n}")));
    }
    guard.check_ambient(pow_saturating(f.order() as u64, n))?;
    guard.check_subspaces(gaussian_binomial(n, d, f.order() as u64))?;
    let pivots: Vec<usize> = (0..d).collect();
    let free = free_positions(n, &pivots);
    Ok(SubspaceIter {
        f,
        n,
        d,
        counter: vec![0; free.len()],
        free,
        pivots: Some(pivots),
    })
}

fn free_positions(n: usize, pivots: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, &p) in pivots.iter().enumerate() {
        for j in p + 1..n {
            if !pivots.contains(&j) {
                out.push((i, j));
            }
        }
    }
    out
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let d = c.len();
    for i in (0..d).rev() {
        if c[i] < n - d + i {
            c[i] += 1;
            for j in i + 1..d {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

impl Iterator for SubspaceIter<'_> {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        let pivots = self.pivots.as_ref()?;
        let mut m = Matrix::zeros(self.d, self.n);
        for (i, &p) in pivots.iter().enumerate() {
            m.set(i, p, 1);
        }
        for (&(i, j), &x) in self.free.iter().zip(&self.counter) {
            m.set(i, j, x);
        }
        let out = Subspace::from_rref_unchecked(m);

        // advance: odometer on free entries, then next pivot set
        let q = self.f.order();
        let mut carried = true;
        for x in self.counter.iter_mut().rev() {
            *x += 1;
            if *x < q {
                carried = false;
                break;
            }
            *x = 0;
        }
        if carried {
            let mut next = pivots.clone();
            if next_combination(&mut next, self.n) {
                self.free = free_positions(self.n, &next);
                self.counter = vec![0; self.free.len()];
                self.pivots = Some(next);
            } else {
                self.pivots = None;
            }
        }
        Some(out)
    }
}

/// All subspaces of `F^n` of every dimension, by ascending dimension.
pub fn enumerate_all_subspaces<'a>(
    f: &'a Field,
    n: usize,
    guard: &GuardConfig,
) -> Result<impl Iterator<Item = Subspace> + 'a> {
    let total: u128 = (0..=n)
        .map(|d| gaussian_binomial(n, d, f.order() as u64))
        .sum();
    guard.check_subspaces(total)?;
    let mut iters = Vec::with_capacity(n + 1);
    for d in 0..=n {
        iters.push(enumerate_subspaces(f, n, d, guard)?);
    }
    Ok(iters.into_iter().flatten())
}
