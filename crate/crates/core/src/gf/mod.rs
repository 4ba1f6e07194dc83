//! Finite fields F_{p^m} in a dense polynomial basis.
//!
//! F_{p^m} is represented as F_p[X]/(f) where f is the lexicographically
//! smallest monic irreducible of degree m, comparing (c_0, c_1, ..., c_{m-1})
//! as integer tuples with c_0 most significant. Elements are coefficient
//! vectors in the basis 1, θ, ..., θ^{m-1}. The field with given (p, m) is
//! built once per process and shared, so equal parameters give identical
//! descriptors.
//!
//! Enumeration order is the base-p odometer on coefficients with c_0 the
//! fastest digit, i.e. element number `Σ c_j p^j`. The same order is used by
//! `Ord` on elements.

mod embed;
mod extpoly;
pub(crate) mod fp_poly;
mod linalg;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Arc, Mutex, OnceLock};

use smallvec::SmallVec;

use crate::error::{Error, Result};

pub use embed::{embed, embedding, embedding_by_degree, relative_trace, Embedding};
pub use linalg::{complement_indices, fp_linear_kernel, FpMatrix};

pub(crate) use fp_poly::{is_square_mod, mod_inv};

/// Largest supported characteristic. Products of two residues stay well inside u64
/// with delayed reduction.
pub const MAX_PRIME: u32 = 65521;

/// Largest supported extension degree.
pub const MAX_DEGREE: usize = 256;

type Coeffs = SmallVec<[u32; 8]>;

struct Inner {
    p: u32,
    m: usize,
    modulus: Vec<u32>,
    /// frob[j] = (θ^j)^p
    frob: Vec<Coeffs>,
    /// traces[j] = Tr(θ^j)
    traces: Vec<u32>,
}

/// Handle to a finite field. Cheap to clone; equality is by (p, m).
#[derive(Clone)]
pub struct FieldDesc(Arc<Inner>);

impl PartialEq for FieldDesc {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.m == other.0.m
    }
}
impl Eq for FieldDesc {}

impl Hash for FieldDesc {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.p.hash(state);
        self.0.m.hash(state);
    }
}

impl fmt::Debug for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.0.p, self.0.m)
    }
}

pub(crate) fn check_prime(p: u64) -> Result<u32> {
    if p == 2 {
        return Err(Error::UnsupportedCharacteristic(2));
    }
    if p < 2 || !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not a prime")));
    }
    if p > MAX_PRIME as u64 {
        return Err(Error::Domain(format!("p = {p} exceeds the supported maximum {MAX_PRIME}")));
    }
    Ok(p as u32)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn fields() -> &'static Mutex<HashMap<(u32, usize), FieldDesc>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, usize), FieldDesc>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Returns the canonical field F_{p^m}.
pub fn make_field(p: u64, m: usize) -> Result<FieldDesc> {
    let p = check_prime(p)?;
    if m == 0 || m > MAX_DEGREE {
        return Err(Error::Domain(format!("extension degree {m} outside 1..={MAX_DEGREE}")));
    }
    if let Some(f) = fields().lock().unwrap().get(&(p, m)) {
        return Ok(f.clone());
    }
    let desc = build_field(p, m);
    let mut cache = fields().lock().unwrap();
    Ok(cache.entry((p, m)).or_insert(desc).clone())
}

fn smallest_irreducible(p: u32, m: usize) -> Vec<u32> {
    // odometer over (c_0, ..., c_{m-1}) with c_{m-1} fastest, so that c_0 is most significant
    let mut c = vec![0u32; m];
    if m > 1 {
        // c_0 = 0 means X divides f
        c[0] = 1;
    }
    loop {
        let mut f = c.clone();
        f.push(1);
        if fp_poly::is_irreducible(&f, p) {
            return f;
        }
        let mut k = m;
        loop {
            k -= 1;
            c[k] += 1;
            if c[k] < p {
                break;
            }
            c[k] = 0;
            assert!(k > 0, "no irreducible polynomial of degree {m} over F_{p}");
        }
    }
}

fn build_field(p: u32, m: usize) -> FieldDesc {
    let modulus = smallest_irreducible(p, m);
    // θ^k for k < 2m, used for Frobenius images and traces
    let mut powers: Vec<Coeffs> = Vec::with_capacity(2 * m);
    let mut cur: Coeffs = SmallVec::from_elem(0, m);
    cur[0] = 1;
    let theta = {
        let mut t: Coeffs = SmallVec::from_elem(0, m);
        if m == 1 {
            t[0] = (p - modulus[0]) % p;
        } else {
            t[1] = 1;
        }
        t
    };
    for _ in 0..2 * m {
        powers.push(cur.clone());
        cur = mul_raw(p, &modulus, &cur, &theta);
    }
    let traces: Vec<u32> = (0..m)
        .map(|j| {
            let mut t = 0u64;
            for i in 0..m {
                t += powers[i + j][i] as u64;
            }
            (t % p as u64) as u32
        })
        .collect();
    let theta_p = pow_raw(p, &modulus, &theta, p as u128);
    let mut frob = Vec::with_capacity(m);
    let mut acc: Coeffs = SmallVec::from_elem(0, m);
    acc[0] = 1;
    for _ in 0..m {
        frob.push(acc.clone());
        acc = mul_raw(p, &modulus, &acc, &theta_p);
    }
    FieldDesc(Arc::new(Inner { p, m, modulus, frob, traces }))
}

fn mul_raw(p: u32, modulus: &[u32], a: &[u32], b: &[u32]) -> Coeffs {
    let m = modulus.len() - 1;
    let p64 = p as u64;
    let mut buf: SmallVec<[u64; 16]> = SmallVec::from_elem(0, 2 * m - 1);
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        let x = x as u64;
        for (j, &y) in b.iter().enumerate() {
            buf[i + j] += x * y as u64;
        }
    }
    for k in (m..2 * m - 1).rev() {
        let t = buf[k] % p64;
        if t == 0 {
            continue;
        }
        let nt = p64 - t;
        for i in 0..m {
            buf[k - m + i] += nt * modulus[i] as u64;
        }
    }
    buf[..m].iter().map(|&v| (v % p64) as u32).collect()
}

fn pow_raw(p: u32, modulus: &[u32], a: &[u32], mut e: u128) -> Coeffs {
    let m = modulus.len() - 1;
    let mut acc: Coeffs = SmallVec::from_elem(0, m);
    acc[0] = 1;
    let mut base: Coeffs = a.iter().copied().collect();
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_raw(p, modulus, &acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mul_raw(p, modulus, &base, &base);
        }
    }
    acc
}

impl FieldDesc {
    pub fn p(&self) -> u32 {
        self.0.p
    }

    /// Extension degree m over F_p.
    pub fn degree(&self) -> usize {
        self.0.m
    }

    /// Monic defining polynomial, coefficients low to high (length m+1).
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    /// p^m, or None if it does not fit in u128.
    pub fn order(&self) -> Option<u128> {
        (self.0.p as u128).checked_pow(self.0.m as u32)
    }

    /// p^m as u64 when it is at most `budget`.
    pub fn order_within(&self, budget: u64) -> Result<u64> {
        let required = self.order().unwrap_or(u128::MAX);
        if required > budget as u128 {
            return Err(Error::BudgetExceeded { required, budget });
        }
        Ok(required as u64)
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem { field: self.clone(), c: SmallVec::from_elem(0, self.0.m) }
    }

    pub fn one(&self) -> FieldElem {
        self.from_int(1)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, k: i64) -> FieldElem {
        let mut e = self.zero();
        e.c[0] = k.rem_euclid(self.0.p as i64) as u32;
        e
    }

    /// Element from coordinates (low to high). Missing high coordinates are zero.
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElem> {
        if coeffs.len() > self.0.m {
            return Err(Error::Domain(format!(
                "{} coordinates given for an element of F_{}^{}",
                coeffs.len(),
                self.0.p,
                self.0.m
            )));
        }
        let mut e = self.zero();
        for (i, &v) in coeffs.iter().enumerate() {
            if v >= self.0.p {
                return Err(Error::Domain(format!("coordinate {v} is not reduced mod {}", self.0.p)));
            }
            e.c[i] = v;
        }
        Ok(e)
    }

    /// Like [`from_coeffs`](Self::from_coeffs) but reduces each coordinate mod p.
    pub fn from_coeffs_reduced(&self, coeffs: &[u32]) -> FieldElem {
        let mut e = self.zero();
        for (i, &v) in coeffs.iter().take(self.0.m).enumerate() {
            e.c[i] = v % self.0.p;
        }
        e
    }

    /// The generator θ = X mod f.
    pub fn gen(&self) -> FieldElem {
        let mut e = self.zero();
        if self.0.m == 1 {
            e.c[0] = (self.0.p - self.0.modulus[0]) % self.0.p;
        } else {
            e.c[1] = 1;
        }
        e
    }

    /// θ^j for j < m.
    pub fn basis_element(&self, j: usize) -> FieldElem {
        let mut e = self.zero();
        e.c[j] = 1;
        e
    }

    /// Element number `idx` in enumeration order.
    pub fn element_at(&self, mut idx: u128) -> FieldElem {
        let mut e = self.zero();
        let p = self.0.p as u128;
        for i in 0..self.0.m {
            e.c[i] = (idx % p) as u32;
            idx /= p;
        }
        e
    }

    /// All elements in enumeration order, if there are at most `budget` of them.
    pub fn enumerate(&self, budget: u64) -> Result<FieldIter> {
        let n = self.order_within(budget)?;
        Ok(FieldIter { next: Some(self.zero()), remaining: n })
    }

    /// Elements with index in `start..end`, for chunked parallel loops.
    pub fn range(&self, start: u64, end: u64) -> FieldIter {
        FieldIter { next: Some(self.element_at(start as u128)), remaining: end.saturating_sub(start) }
    }

    /// Matrix of the F_p-linear map x ↦ f(x) in this field's basis.
    pub fn linear_map_matrix<F>(&self, target: &FieldDesc, f: F) -> FpMatrix
    where
        F: Fn(&FieldElem) -> FieldElem,
    {
        let cols: Vec<Vec<u32>> =
            (0..self.0.m).map(|j| f(&self.basis_element(j)).coeffs().to_vec()).collect();
        debug_assert!(cols.iter().all(|c| c.len() == target.degree()));
        FpMatrix::from_columns(self.0.p, &cols)
    }
}

/// Iterator over field elements in enumeration order.
pub struct FieldIter {
    next: Option<FieldElem>,
    remaining: u64,
}

impl Iterator for FieldIter {
    type Item = FieldElem;

    fn next(&mut self) -> Option<FieldElem> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let cur = self.next.take()?;
        if self.remaining > 0 {
            let mut n = cur.clone();
            n.increment();
            self.next = Some(n);
        }
        Some(cur)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining as usize, Some(self.remaining as usize))
    }
}

/// An element of some F_{p^m}.
#[derive(Clone)]
pub struct FieldElem {
    field: FieldDesc,
    c: Coeffs,
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.c == other.c
    }
}
impl Eq for FieldElem {}

impl Hash for FieldElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.hash(state);
        self.c.hash(state);
    }
}

impl PartialOrd for FieldElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldElem {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.field.p(), self.field.degree())
            .cmp(&(other.field.p(), other.field.degree()))
            .then_with(|| self.c.iter().rev().cmp(other.c.iter().rev()))
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.c.as_slice())
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, &v) in self.c.iter().enumerate() {
            if v == 0 {
                continue;
            }
            terms.push(match (i, v) {
                (0, _) => format!("{v}"),
                (1, 1) => "t".to_string(),
                (1, _) => format!("{v}*t"),
                (_, 1) => format!("t^{i}"),
                _ => format!("{v}*t^{i}"),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl FieldElem {
    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    /// Coordinates, low to high, length m.
    pub fn coeffs(&self) -> &[u32] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&v| v == 0)
    }

    pub fn is_one(&self) -> bool {
        self.c[0] == 1 && self.c[1..].iter().all(|&v| v == 0)
    }

    /// Value in F_p when the element lies in the prime subfield.
    pub fn as_prime(&self) -> Option<u32> {
        if self.c[1..].iter().all(|&v| v == 0) {
            Some(self.c[0])
        } else {
            None
        }
    }

    /// Position in enumeration order, saturating at u128::MAX.
    pub fn index(&self) -> u128 {
        let p = self.field.p() as u128;
        let mut idx = 0u128;
        for &v in self.c.iter().rev() {
            idx = idx.saturating_mul(p).saturating_add(v as u128);
        }
        idx
    }

    fn increment(&mut self) {
        let p = self.field.p();
        for v in self.c.iter_mut() {
            *v += 1;
            if *v < p {
                return;
            }
            *v = 0;
        }
    }

    fn check_same(&self, other: &FieldElem) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                p: self.field.p(),
                a: self.field.degree(),
                b: other.field.degree(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check_same(other)?;
        let p = self.field.p();
        let c = self.c.iter().zip(&other.c).map(|(&a, &b)| (a + b) % p).collect();
        Ok(FieldElem { field: self.field.clone(), c })
    }

    pub fn try_sub(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check_same(other)?;
        let p = self.field.p();
        let c = self.c.iter().zip(&other.c).map(|(&a, &b)| (a + p - b) % p).collect();
        Ok(FieldElem { field: self.field.clone(), c })
    }

    pub fn try_mul(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check_same(other)?;
        let c = mul_raw(self.field.p(), self.field.modulus(), &self.c, &other.c);
        Ok(FieldElem { field: self.field.clone(), c })
    }

    pub fn try_div(&self, other: &FieldElem) -> Result<FieldElem> {
        self.try_mul(&other.inv()?)
    }

    pub fn neg(&self) -> FieldElem {
        let p = self.field.p();
        let c = self.c.iter().map(|&a| (p - a) % p).collect();
        FieldElem { field: self.field.clone(), c }
    }

    /// Multiplication by an integer.
    pub fn scale(&self, k: i64) -> FieldElem {
        let p = self.field.p() as i64;
        let k = k.rem_euclid(p) as u64;
        let c = self.c.iter().map(|&a| (a as u64 * k % p as u64) as u32).collect();
        FieldElem { field: self.field.clone(), c }
    }

    pub fn inv(&self) -> Result<FieldElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = self.field.p();
        let mut f: Vec<u32> = self.c.to_vec();
        fp_poly::trim(&mut f);
        let g = fp_poly::inv_mod(&f, self.field.modulus(), p).ok_or(Error::DivisionByZero)?;
        Ok(self.field.from_coeffs_reduced(&g))
    }

    pub fn pow(&self, e: u128) -> FieldElem {
        let c = pow_raw(self.field.p(), self.field.modulus(), &self.c, e);
        FieldElem { field: self.field.clone(), c }
    }

    /// x ↦ x^p.
    pub fn frobenius(&self) -> FieldElem {
        let inner = &self.field.0;
        let p = inner.p as u64;
        let mut acc = vec![0u64; inner.m];
        for (j, &v) in self.c.iter().enumerate() {
            if v == 0 {
                continue;
            }
            for (i, &w) in inner.frob[j].iter().enumerate() {
                acc[i] = (acc[i] + v as u64 * w as u64) % p;
            }
        }
        FieldElem { field: self.field.clone(), c: acc.into_iter().map(|v| v as u32).collect() }
    }

    /// x ↦ x^{p^k}.
    pub fn frobenius_pow(&self, k: usize) -> FieldElem {
        let k = k % self.field.degree();
        let mut x = self.clone();
        for _ in 0..k {
            x = x.frobenius();
        }
        x
    }

    /// Absolute trace to F_p.
    pub fn trace_to_prime(&self) -> u32 {
        let inner = &self.field.0;
        let p = inner.p as u64;
        let t = self.c.iter().zip(&inner.traces).fold(0u64, |acc, (&a, &t)| (acc + a as u64 * t as u64) % p);
        t as u32
    }

    /// Norm to F_p.
    pub fn norm_to_prime(&self) -> u32 {
        let mut acc = self.clone();
        let mut conj = self.clone();
        for _ in 1..self.field.degree() {
            conj = conj.frobenius();
            acc = &acc * &conj;
        }
        acc.c[0]
    }

    /// Whether x is a nonzero square. Zero is rejected.
    ///
    /// x is a square in F_{p^m} iff its norm is a square in F_p.
    pub fn is_square(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::Domain("zero has no square class".into()));
        }
        Ok(is_square_mod(self.norm_to_prime(), self.field.p()))
    }

    /// A square root, if one exists in this field. Found by enumeration, so only for small fields.
    pub fn sqrt_by_search(&self, budget: u64) -> Result<Option<FieldElem>> {
        for y in self.field.enumerate(budget)? {
            if &(&y * &y) == self {
                return Ok(Some(y));
            }
        }
        Ok(None)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl $tr<&FieldElem> for &FieldElem {
            type Output = FieldElem;
            fn $m(self, rhs: &FieldElem) -> FieldElem {
                self.$f(rhs).expect("field mismatch")
            }
        }
        impl $tr<FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $m(self, rhs: FieldElem) -> FieldElem {
                self.$f(&rhs).expect("field mismatch")
            }
        }
        impl $tr<&FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $m(self, rhs: &FieldElem) -> FieldElem {
                self.$f(rhs).expect("field mismatch")
            }
        }
        impl $tr<FieldElem> for &FieldElem {
            type Output = FieldElem;
            fn $m(self, rhs: FieldElem) -> FieldElem {
                self.$f(&rhs).expect("field mismatch")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem::neg(self)
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem::neg(&self)
    }
}

impl AddAssign<&FieldElem> for FieldElem {
    fn add_assign(&mut self, rhs: &FieldElem) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&FieldElem> for FieldElem {
    fn sub_assign(&mut self, rhs: &FieldElem) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&FieldElem> for FieldElem {
    fn mul_assign(&mut self, rhs: &FieldElem) {
        *self = &*self * rhs;
    }
}

/// Solves y^p - y = t in the field of `t`. Returns the solution with zero
/// free coordinate, or None when Tr(t) ≠ 0.
pub fn artin_schreier_root(t: &FieldElem) -> Option<FieldElem> {
    let f = t.field();
    let m = f.linear_map_matrix(f, |y| &y.frobenius() - y);
    m.solve(t.coeffs()).map(|v| f.from_coeffs_reduced(&v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defining_polynomials() {
        assert_eq!(make_field(3, 1).unwrap().modulus(), &[0, 1]);
        assert_eq!(make_field(3, 2).unwrap().modulus(), &[1, 0, 1]);
        // X^2 + 1 splits over F_5, X^2 + X + 1 does not
        assert_eq!(make_field(5, 2).unwrap().modulus(), &[1, 1, 1]);
        // X^3 + 1 and X^3 + X^2 + 1 vanish at -1 and 1
        assert_eq!(make_field(3, 3).unwrap().modulus(), &[1, 0, 2, 1]);
    }

    #[test]
    fn caching_is_referential() {
        let a = make_field(7, 3).unwrap();
        let b = make_field(7, 3).unwrap();
        assert!(Arc::ptr_eq(&a.0, &b.0));
    }

    #[test]
    fn rejects_bad_characteristic() {
        assert_eq!(make_field(2, 3).unwrap_err(), Error::UnsupportedCharacteristic(2));
        assert!(matches!(make_field(9, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn f9_arithmetic() {
        let f = make_field(3, 2).unwrap();
        let i = f.gen();
        assert_eq!(&i * &i, f.from_int(-1));
        assert_eq!(i.trace_to_prime(), 0);
        assert_eq!(f.one().trace_to_prime(), 2);
        assert!(f.from_int(-1).is_square().unwrap());
        assert!(!i.is_square().unwrap() || i.pow(4).is_one());
    }

    #[test]
    fn enumeration_order() {
        let f = make_field(3, 2).unwrap();
        let all: Vec<_> = f.enumerate(100).unwrap().collect();
        assert_eq!(all.len(), 9);
        for (k, x) in all.iter().enumerate() {
            assert_eq!(x.index(), k as u128);
        }
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert!(matches!(f.enumerate(5), Err(Error::BudgetExceeded { required: 9, budget: 5 })));
    }

    #[test]
    fn artin_schreier_solutions() {
        let f = make_field(5, 2).unwrap();
        for t in f.enumerate(100).unwrap() {
            match artin_schreier_root(&t) {
                Some(y) => assert_eq!(&y.pow(5) - &y, t),
                None => assert_ne!(t.trace_to_prime(), 0),
            }
        }
    }
}
