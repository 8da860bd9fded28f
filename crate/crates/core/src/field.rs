//! Exact arithmetic in `F_p`, `F_q = F_p[x]/(f)` and `F_{q^m} = F_q[y]/(g)`.
//!
//! An element is stored as its *index*: the coefficient tuple over the field
//! it was built from, read as base-`Q` digits (low degree first). Because the
//! digits of a tower element regroup into base-`p` digits, addition in every
//! level is digitwise addition mod `p`, and the embedded copy of `F_q` inside
//! `F_{q^m}` is exactly the set of indices below `q`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Elem = u32;

/// Largest field order for which multiplication tables are built.
pub const MAX_FIELD_ORDER: u64 = 1 << 16;

const ADD_TABLE_LIMIT: u32 = 1024;

#[derive(Clone)]
pub struct Field {
    p: u32,
    order: u32,
    base_order: u32,
    degree: u32,
    moduli: Vec<Vec<Elem>>,
    exp: Vec<Elem>,
    log: Vec<u32>,
    neg: Vec<Elem>,
    add_table: Option<Vec<Elem>>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.moduli == other.moduli
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("order", &self.order)
            .field("moduli", &self.moduli)
            .finish()
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn digit_add(p: u32, mut a: u32, mut b: u32) -> u32 {
    let mut out = 0;
    let mut place = 1;
    while a > 0 || b > 0 {
        out += ((a % p + b % p) % p) * place;
        place *= p;
        a /= p;
        b /= p;
    }
    out
}

fn digit_neg(p: u32, mut a: u32) -> u32 {
    let mut out = 0;
    let mut place = 1;
    while a > 0 {
        out += ((p - a % p) % p) * place;
        place *= p;
        a /= p;
    }
    out
}

impl Field {
    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p as u64 > MAX_FIELD_ORDER {
            return Err(Error::FieldTooLarge(p as u64));
        }
        let pm = p as u64;
        Self::build(p, p, p, 1, Vec::new(), |a, b| {
            ((a as u64 * b as u64) % pm) as u32
        })
    }

    /// The extension `self[x]/(modulus)`; `modulus` is monic, low degree first,
    /// with coefficients given as element indices of `self`.
    pub fn extension(&self, modulus: &[Elem]) -> Result<Field> {
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 {
            return Err(Error::NotIrreducible(modulus.to_vec()));
        }
        if let Some(&bad) = modulus.iter().find(|&&c| c >= self.order) {
            return Err(Error::NotAnElement(bad));
        }
        if !self.is_irreducible(modulus) {
            return Err(Error::NotIrreducible(modulus.to_vec()));
        }
        let degree = (modulus.len() - 1) as u32;
        let order = (self.order as u64).checked_pow(degree).unwrap_or(u64::MAX);
        if order > MAX_FIELD_ORDER {
            return Err(Error::FieldTooLarge(order));
        }
        let mut moduli = self.moduli.clone();
        moduli.push(modulus.to_vec());
        let q = self.order;
        let d = degree as usize;
        let mul = |a: u32, b: u32| {
            let pa = to_digits(a, q, d);
            let pb = to_digits(b, q, d);
            let prod = self.poly_rem(&self.poly_mul(&pa, &pb), modulus);
            from_digits(&prod, q)
        };
        Self::build(self.p, order as u32, q, degree, moduli, mul)
    }

    fn build(
        p: u32,
        order: u32,
        base_order: u32,
        degree: u32,
        moduli: Vec<Vec<Elem>>,
        mul: impl Fn(u32, u32) -> u32,
    ) -> Result<Field> {
        let n = order as usize;
        let mut exp = vec![0u32; n - 1];
        let mut found = false;
        for g in 1..order {
            let mut x = 1u32;
            let mut ok = true;
            for (i, slot) in exp.iter_mut().enumerate() {
                *slot = x;
                x = mul(x, g);
                if x == 1 && i + 2 < n {
                    ok = false;
                    break;
                }
            }
            if ok && x == 1 {
                found = true;
                break;
            }
        }
        debug_assert!(found, "multiplicative group of a field is cyclic");
        let mut log = vec![0u32; n];
        for (i, &x) in exp.iter().enumerate() {
            log[x as usize] = i as u32;
        }
        let neg = (0..order).map(|a| digit_neg(p, a)).collect();
        let add_table = (p != 2 && order <= ADD_TABLE_LIMIT).then(|| {
            let mut t = Vec::with_capacity(n * n);
            for a in 0..order {
                for b in 0..order {
                    t.push(digit_add(p, a, b));
                }
            }
            t
        });
        Ok(Field {
            p,
            order,
            base_order,
            degree,
            moduli,
            exp,
            log,
            neg,
            add_table,
        })
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Order of the field this one was built over (itself for a prime field).
    pub fn base_order(&self) -> u32 {
        self.base_order
    }

    /// Extension degree over the field this one was built over.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Defining polynomials, innermost first.
    pub fn moduli(&self) -> &[Vec<Elem>] {
        &self.moduli
    }

    #[inline]
    pub fn contains(&self, x: Elem) -> bool {
        x < self.order
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            a ^ b
        } else if let Some(t) = &self.add_table {
            t[a as usize * self.order as usize + b as usize]
        } else {
            digit_add(self.p, a, b)
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.exp.len();
        let i = self.log[a as usize] as usize + self.log[b as usize] as usize;
        self.exp[if i >= n { i - n } else { i }]
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        let n = self.exp.len();
        let l = self.log[a as usize] as usize;
        Ok(self.exp[(n - l) % n])
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = self.exp.len() as u64;
        let l = self.log[a as usize] as u64;
        self.exp[((l * (e % n)) % n) as usize]
    }

    /// Coefficients over the defining field, low degree first.
    pub fn coeffs(&self, x: Elem) -> Vec<Elem> {
        to_digits(x, self.base_order, self.degree as usize)
    }

    pub fn from_coeffs(&self, coeffs: &[Elem]) -> Result<Elem> {
        if coeffs.len() > self.degree as usize {
            return Err(Error::Dimension(format!(
                "{} coefficients for an extension of degree {}",
                coeffs.len(),
                self.degree
            )));
        }
        if let Some(&bad) = coeffs.iter().find(|&&c| c >= self.base_order) {
            return Err(Error::NotAnElement(bad));
        }
        Ok(from_digits(coeffs, self.base_order))
    }

    fn trim(&self, a: &mut Vec<Elem>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    fn poly_mul(&self, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = self.add(out[i + j], self.mul(x, y));
            }
        }
        self.trim(&mut out);
        out
    }

    /// Remainder of `a` modulo the nonzero polynomial `m`.
    fn poly_rem(&self, a: &[Elem], m: &[Elem]) -> Vec<Elem> {
        let mut m = m.to_vec();
        self.trim(&mut m);
        let mut r = a.to_vec();
        self.trim(&mut r);
        let dm = m.len() - 1;
        let lead_inv = self.inv(m[dm]).expect("nonzero leading coefficient");
        while r.len() > dm {
            let shift = r.len() - 1 - dm;
            let c = self.mul(*r.last().unwrap(), lead_inv);
            for (j, &mj) in m.iter().enumerate() {
                r[shift + j] = self.sub(r[shift + j], self.mul(c, mj));
            }
            self.trim(&mut r);
        }
        r
    }

    /// Trial division by every monic polynomial of degree at most half.
    pub fn is_irreducible(&self, poly: &[Elem]) -> bool {
        let mut poly = poly.to_vec();
        self.trim(&mut poly);
        if poly.len() < 2 {
            return false;
        }
        let d = poly.len() - 1;
        for deg in 1..=d / 2 {
            let count = (self.order as u64).pow(deg as u32);
            for code in 0..count {
                let mut cand = to_digits(code as u32, self.order, deg);
                cand.push(1);
                if self.poly_rem(&poly, &cand).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    /// Smallest monic irreducible polynomial of degree `d`, ordering candidates
    /// by the integer whose base-`|F|` digits are the coefficients (low degree
    /// first), i.e. the leading non-monic coefficient is most significant.
    pub fn smallest_irreducible(&self, d: usize) -> Result<Vec<Elem>> {
        if d == 0 {
            return Err(Error::ZeroDegree);
        }
        let count = (self.order as u64)
            .checked_pow(d as u32)
            .filter(|&c| c <= u32::MAX as u64)
            .ok_or(Error::FieldTooLarge(u64::MAX))?;
        for code in 0..count {
            let mut cand = to_digits(code as u32, self.order, d);
            cand.push(1);
            if self.is_irreducible(&cand) {
                return Ok(cand);
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }
}

fn to_digits(mut x: u32, base: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(x % base);
        x /= base;
    }
    out
}

fn from_digits(digits: &[u32], base: u32) -> u32 {
    digits.iter().rev().fold(0, |acc, &d| acc * base + d)
}

/// Parameters of the tower `F_p ⊆ F_q ⊆ F_{q^m}`. Polynomials are coefficient
/// arrays, low degree first; `f` has coefficients mod `p`, `g` has coefficients
/// given as `F_q` indices. Empty arrays mean "use the default".
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    #[serde(default = "one")]
    pub e: u32,
    #[serde(default = "one")]
    pub m: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub f: Vec<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub g: Vec<u32>,
}

fn one() -> u32 {
    1
}

impl FieldSpec {
    pub fn new(p: u32, e: u32, m: u32) -> Self {
        Self {
            p,
            e,
            m,
            f: Vec::new(),
            g: Vec::new(),
        }
    }

    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.e)
    }
}

/// A resolved field tower: `base` is `F_q`, `top` is `F_{q^m}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tower {
    spec: FieldSpec,
    base: Arc<Field>,
    top: Arc<Field>,
}

/// Builds the tower for `(p, e, m)` with default defining polynomials.
pub fn make_field(p: u32, e: u32, m: u32) -> Result<Tower> {
    Tower::from_spec(&FieldSpec::new(p, e, m))
}

impl Tower {
    /// Resolves a spec; missing polynomials are filled with the smallest
    /// irreducible ones so the returned spec is fully explicit.
    pub fn from_spec(spec: &FieldSpec) -> Result<Tower> {
        if spec.e == 0 || spec.m == 0 {
            return Err(Error::ZeroDegree);
        }
        let prime = Field::prime(spec.p)?;
        let (base, f) = if spec.e == 1 {
            if !(spec.f.is_empty() || spec.f.len() == 2 && spec.f[1] == 1) {
                return Err(Error::NotIrreducible(spec.f.clone()));
            }
            (prime, Vec::new())
        } else {
            let f = if spec.f.is_empty() {
                prime.smallest_irreducible(spec.e as usize)?
            } else {
                spec.f.clone()
            };
            if f.len() != spec.e as usize + 1 {
                return Err(Error::NotIrreducible(f));
            }
            (prime.extension(&f)?, f)
        };
        let (top, g) = if spec.m == 1 {
            if !(spec.g.is_empty() || spec.g.len() == 2 && spec.g[1] == 1) {
                return Err(Error::NotIrreducible(spec.g.clone()));
            }
            (base.clone(), Vec::new())
        } else {
            let g = if spec.g.is_empty() {
                base.smallest_irreducible(spec.m as usize)?
            } else {
                spec.g.clone()
            };
            if g.len() != spec.m as usize + 1 {
                return Err(Error::NotIrreducible(g));
            }
            (base.extension(&g)?, g)
        };
        Ok(Tower {
            spec: FieldSpec {
                p: spec.p,
                e: spec.e,
                m: spec.m,
                f,
                g,
            },
            base: Arc::new(base),
            top: Arc::new(top),
        })
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    /// `F_q`.
    pub fn base(&self) -> &Arc<Field> {
        &self.base
    }

    /// `F_{q^m}`.
    pub fn top(&self) -> &Arc<Field> {
        &self.top
    }

    pub fn q(&self) -> u32 {
        self.base.order()
    }

    pub fn m(&self) -> usize {
        self.spec.m as usize
    }

    /// `x ↦ x^q` on `F_{q^m}`.
    pub fn frobenius(&self, x: Elem) -> Elem {
        self.top.pow(x, self.q() as u64)
    }

    /// Whether `x ∈ F_{q^m}` lies in the embedded `F_q`.
    pub fn in_base(&self, x: Elem) -> bool {
        x < self.q()
    }

    /// Coordinates of `x` in the polynomial basis `1, γ, …, γ^{m-1}`.
    pub fn coords(&self, x: Elem) -> Vec<Elem> {
        to_digits(x, self.q(), self.m())
    }

    pub fn from_coords(&self, coords: &[Elem]) -> Result<Elem> {
        if self.m() == 1 {
            return match coords {
                [] => Ok(0),
                [c] if *c < self.q() => Ok(*c),
                [c] => Err(Error::NotAnElement(*c)),
                _ => Err(Error::Dimension("too many coordinates".into())),
            };
        }
        self.top.from_coeffs(coords)
    }

    /// The generator `γ` of `F_{q^m}` over `F_q` (the class of `y`).
    pub fn generator(&self) -> Elem {
        if self.m() == 1 {
            1
        } else {
            self.q()
        }
    }
}

/// A field element that carries its field, for checked arithmetic.
#[derive(Clone, Debug)]
pub struct FieldElement {
    field: Arc<Field>,
    value: Elem,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value && *self.field == *other.field
    }
}

impl Eq for FieldElement {}

impl FieldElement {
    pub fn new(field: Arc<Field>, value: Elem) -> Result<Self> {
        if !field.contains(value) {
            return Err(Error::NotAnElement(value));
        }
        Ok(Self { field, value })
    }

    pub fn zero(field: Arc<Field>) -> Self {
        Self { field, value: 0 }
    }

    pub fn one(field: Arc<Field>) -> Self {
        Self { field, value: 1 }
    }

    pub fn from_coeffs(field: Arc<Field>, coeffs: &[Elem]) -> Result<Self> {
        let value = field.from_coeffs(coeffs)?;
        Ok(Self { field, value })
    }

    pub fn value(&self) -> Elem {
        self.value
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn coeffs(&self) -> Vec<Elem> {
        self.field.coeffs(self.value)
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn same(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    fn with(&self, value: Elem) -> Self {
        Self {
            field: self.field.clone(),
            value,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        Ok(self.with(self.field.add(self.value, other.value)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        Ok(self.with(self.field.sub(self.value, other.value)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        Ok(self.with(self.field.mul(self.value, other.value)))
    }

    pub fn neg(&self) -> Self {
        self.with(self.field.neg(self.value))
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(self.with(self.field.inv(self.value)?))
    }

    pub fn pow(&self, e: u64) -> Self {
        self.with(self.field.pow(self.value, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f16() -> Tower {
        Tower::from_spec(&FieldSpec {
            g: vec![1, 1, 0, 0, 1],
            ..FieldSpec::new(2, 1, 4)
        })
        .unwrap()
    }

    #[test]
    fn default_polynomials() {
        assert_eq!(make_field(2, 1, 4).unwrap().spec().g, vec![1, 1, 0, 0, 1]);
        assert_eq!(make_field(2, 2, 1).unwrap().spec().f, vec![1, 1, 1]);
        let f3 = make_field(3, 1, 1).unwrap();
        assert!(f3.spec().f.is_empty() && f3.spec().g.is_empty());
        assert_eq!(f3.top().order(), 3);
        assert_eq!(make_field(2, 1, 3).unwrap().spec().g, vec![1, 1, 0, 1]);
        assert_eq!(make_field(3, 1, 2).unwrap().spec().g, vec![1, 0, 1]);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(make_field(4, 1, 1).unwrap_err(), Error::NotPrime(4));
        assert_eq!(make_field(2, 0, 1).unwrap_err(), Error::ZeroDegree);
        assert_eq!(make_field(2, 1, 0).unwrap_err(), Error::ZeroDegree);
        let reducible = FieldSpec {
            g: vec![1, 0, 1],
            ..FieldSpec::new(2, 1, 2)
        };
        assert!(matches!(
            Tower::from_spec(&reducible),
            Err(Error::NotIrreducible(_))
        ));
    }

    #[test]
    fn xi_cubed_times_xi() {
        let t = f16();
        let f = t.top();
        let xi = t.generator();
        let xi3 = f.pow(xi, 3);
        // ξ⁴ = ξ + 1
        assert_eq!(f.mul(xi3, xi), f.from_coeffs(&[1, 1]).unwrap());
    }

    #[test]
    fn frobenius_examples() {
        let t = f16();
        let f = t.top();
        let xi = t.generator();
        assert_eq!(t.frobenius(xi), f.mul(xi, xi));
        for c in 0..t.q() {
            assert_eq!(t.frobenius(c), c);
        }
        for x in 0..f.order() {
            let mut y = x;
            for _ in 0..t.m() {
                y = t.frobenius(y);
            }
            assert_eq!(y, x);
        }
    }

    #[test]
    fn fixed_field_is_embedded_base() {
        for (p, e, m) in [(2, 1, 4), (3, 1, 2), (2, 2, 2), (2, 1, 8), (5, 1, 3)] {
            let t = make_field(p, e, m).unwrap();
            for x in 0..t.top().order() {
                assert_eq!(t.frobenius(x) == x, t.in_base(x), "{p},{e},{m}: {x}");
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive() {
        for (p, e, m) in [
            (2, 1, 4),
            (3, 1, 2),
            (2, 2, 2),
            (5, 1, 1),
            (3, 2, 1),
            (2, 1, 3),
        ] {
            let t = make_field(p, e, m).unwrap();
            let f = t.top();
            let n = f.order();
            for a in 0..n {
                assert_eq!(f.add(a, f.neg(a)), 0);
                assert_eq!(f.mul(a, 1), a);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
                for b in 0..n {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    let fa = t.frobenius(a);
                    let fb = t.frobenius(b);
                    assert_eq!(t.frobenius(f.mul(a, b)), f.mul(fa, fb));
                    assert_eq!(t.frobenius(f.add(a, b)), f.add(fa, fb));
                }
            }
            // associativity and distributivity on a stride through the field
            for a in (0..n).step_by(3) {
                for b in (0..n).step_by(5) {
                    for c in 0..n {
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn element_errors() {
        let a = make_field(2, 1, 2).unwrap();
        let b = make_field(3, 1, 1).unwrap();
        let x = FieldElement::one(a.top().clone());
        let y = FieldElement::one(b.top().clone());
        assert_eq!(x.add(&y).unwrap_err(), Error::FieldMismatch);
        assert_eq!(
            FieldElement::zero(a.top().clone()).inv().unwrap_err(),
            Error::DivisionByZero
        );
        assert!(FieldElement::new(a.top().clone(), 4).is_err());
        let z = x.add(&x.neg()).unwrap();
        assert!(z.is_zero());
        // specs with equal parameters define equal fields
        let again = make_field(2, 1, 2).unwrap();
        let w = FieldElement::one(again.top().clone());
        assert_eq!(x.mul(&w).unwrap(), x);
    }

    #[test]
    fn tower_over_extension_base() {
        // F_16 as a degree-2 extension of F_4
        let t = make_field(2, 2, 2).unwrap();
        assert_eq!(t.q(), 4);
        assert_eq!(t.top().order(), 16);
        let x = t.from_coords(&[3, 2]).unwrap();
        assert_eq!(t.coords(x), vec![3, 2]);
    }
}
