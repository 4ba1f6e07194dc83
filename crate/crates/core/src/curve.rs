//! The curve C_R : y^p - y = x R(x), its kernel space W and point counts.
//!
//! W is the F_p-space of roots of E (see [`build_e`]); it is the radical of
//! the bilinear form (x, y) ↦ Tr(x R(y) + y R(x)) over every extension
//! containing it. The splitting field F_q of E is the smallest extension of
//! the coefficient field that contains all of W.

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf::{
    artin_schreier_root, complement_indices, embed, is_square_mod, make_field, mod_inv, FieldDesc, FieldElem,
    FpMatrix,
};
use crate::linpoly::{build_e, LinearizedPoly};
use crate::sparse::SparsePoly;

/// Resource limits shared by every enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest number of field elements any single enumeration may visit.
    pub budget: u64,
    /// Largest extension degree tried when looking for a splitting field.
    pub split_cap: usize,
}

pub const DEFAULT_BUDGET: u64 = 1_000_000;
pub const DEFAULT_SPLIT_CAP: usize = 64;

impl Default for Limits {
    fn default() -> Self {
        Limits { budget: DEFAULT_BUDGET, split_cap: DEFAULT_SPLIT_CAP }
    }
}

impl Limits {
    pub fn with_budget(budget: u64) -> Self {
        Limits { budget, ..Default::default() }
    }
}

#[derive(Clone, Debug)]
pub struct CurveAS {
    p: u32,
    base: FieldDesc,
    r: LinearizedPoly,
    h: usize,
    e: LinearizedPoly,
    q_degree: usize,
    split: FieldDesc,
    r_split: LinearizedPoly,
    w_basis: Vec<FieldElem>,
}

/// Builds C_R over F_{p^r} from coefficient vectors; `coeffs[i]` is the
/// coefficient of X^{p^i} given by its coordinates in F_{p^r}.
pub fn make_curve(p: u64, r: usize, coeffs: &[Vec<u32>], limits: &Limits) -> Result<CurveAS> {
    let base = make_field(p, r)?;
    let elems = coeffs.iter().map(|c| base.from_coeffs(c)).collect::<Result<Vec<_>>>()?;
    CurveAS::new(LinearizedPoly::new(&base, elems)?, limits)
}

impl CurveAS {
    pub fn new(r: LinearizedPoly, limits: &Limits) -> Result<Self> {
        let h = r.index().ok_or_else(|| Error::Domain("R must be nonzero".into()))?;
        let base = r.field().clone();
        let p = base.p();
        let e = build_e(&r)?;
        let q_degree = e.splitting_degree(limits.split_cap)?;
        let split = make_field(p as u64, q_degree)?;
        let r_split = r.embed_into(&split)?;
        let w_basis = e.kernel(&split)?;
        if w_basis.len() != 2 * h {
            return Err(Error::Invariant(format!("dim W = {} but 2h = {}", w_basis.len(), 2 * h)));
        }
        Ok(CurveAS { p, base, r, h, e, q_degree, split, r_split, w_basis })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// Coefficient field F_{p^r}.
    pub fn base(&self) -> &FieldDesc {
        &self.base
    }

    pub fn r_degree(&self) -> usize {
        self.base.degree()
    }

    pub fn r_poly(&self) -> &LinearizedPoly {
        &self.r
    }

    /// h with deg R = p^h.
    pub fn h(&self) -> usize {
        self.h
    }

    pub fn e_poly(&self) -> &LinearizedPoly {
        &self.e
    }

    /// Degree of the splitting field F_q of E over F_p.
    pub fn q_degree(&self) -> usize {
        self.q_degree
    }

    pub fn splitting_field(&self) -> &FieldDesc {
        &self.split
    }

    /// F_p-basis of W inside F_q.
    pub fn w_basis(&self) -> &[FieldElem] {
        &self.w_basis
    }

    /// p^h (p-1)/2
    pub fn genus(&self) -> BigUint {
        BigUint::from(self.p).pow(self.h as u32) * BigUint::from(self.p - 1) / BigUint::from(2u32)
    }

    pub fn genus_u64(&self) -> Result<u64> {
        u64::try_from(self.genus()).map_err(|_| Error::OutOfScope("genus does not fit in 64 bits".into()))
    }

    /// R is X or X^p exactly; these curves carry extra automorphisms outside P ⋊ H.
    pub fn has_special_automorphisms(&self) -> bool {
        self.h <= 1 && self.r.leading().is_some_and(|a| a.is_one()) && self.r.coeffs()[..self.h].iter().all(|c| c.is_zero())
    }

    /// R with coefficients in `field`.
    pub fn r_over(&self, field: &FieldDesc) -> Result<LinearizedPoly> {
        if field == &self.split {
            Ok(self.r_split.clone())
        } else {
            self.r.embed_into(field)
        }
    }

    fn ext(&self, s: usize) -> Result<FieldDesc> {
        if s == 0 || s % self.r_degree() != 0 {
            return Err(Error::Domain(format!("s = {s} is not a multiple of r = {}", self.r_degree())));
        }
        make_field(self.p as u64, s)
    }

    /// Basis of W(F_{p^s}) = W ∩ F_{p^s}, as the kernel of E on F_{p^s}.
    pub fn w_space(&self, s: usize) -> Result<Vec<FieldElem>> {
        let f = self.ext(s)?;
        self.e.kernel(&f)
    }

    /// Gram matrix of (x, y) ↦ Tr(x R(y) + y R(x)) on the basis θ^j of F_{p^s}.
    pub fn trace_form_gram(&self, s: usize) -> Result<FpMatrix> {
        let f = self.ext(s)?;
        let rf = self.r_over(&f)?;
        let basis: Vec<FieldElem> = (0..s).map(|j| f.basis_element(j)).collect();
        let images = basis.iter().map(|x| rf.eval(x)).collect::<Result<Vec<_>>>()?;
        let mut g = FpMatrix::zeros(self.p, s, s);
        for j in 0..s {
            for k in 0..s {
                let v = (&basis[j] * &images[k] + &basis[k] * &images[j]).trace_to_prime();
                g.set(j, k, v);
            }
        }
        Ok(g)
    }

    /// W(F_{p^s}) computed as the radical of the trace form.
    pub fn w_space_via_form(&self, s: usize) -> Result<Vec<FieldElem>> {
        let f = self.ext(s)?;
        Ok(self.trace_form_gram(s)?.kernel().into_iter().map(|v| f.from_coeffs_reduced(&v)).collect())
    }

    /// Whether c lies in W, decided by the B recursion.
    pub fn in_w(&self, c: &FieldElem) -> Result<bool> {
        match self.b_poly(c) {
            Ok(_) => Ok(true),
            Err(Error::NotInKernel { .. }) => Ok(false),
            Err(e) => Err(e),
        }
    }

    /// The unique additive B_c of index < h with B_c^p - B_c = c R(X) + R(c) X.
    pub fn b_poly(&self, c: &FieldElem) -> Result<BPoly> {
        let f = c.field().clone();
        if f.degree() % self.r_degree() != 0 {
            return Err(Error::NoEmbedding { p: self.p, from: self.r_degree(), to: f.degree() });
        }
        let rf = self.r_over(&f)?;
        let rc = rf.eval(c)?;
        let h = self.h;
        if h == 0 {
            let eps = &(c * &rf.coeff(0)) + &rc;
            if !eps.is_zero() {
                return Err(Error::NotInKernel { residual: eps.coeffs().to_vec() });
            }
            return Ok(BPoly { c: c.clone(), poly: LinearizedPoly::zero(&f), b: f.zero() });
        }
        let mut bs = Vec::with_capacity(h);
        bs.push(-&(c * &rf.coeff(0)) - &rc);
        for i in 1..h {
            let next = &bs[i - 1].frobenius() - &(c * &rf.coeff(i));
            bs.push(next);
        }
        let eps = &bs[h - 1].frobenius() - &(c * &rf.coeff(h));
        if !eps.is_zero() {
            return Err(Error::NotInKernel { residual: eps.coeffs().to_vec() });
        }
        let poly = LinearizedPoly::new(&f, bs)?;
        let half = f.from_int(mod_inv(2, self.p) as i64);
        let b = &poly.eval(c)? * &half;
        Ok(BPoly { c: c.clone(), poly, b })
    }

    /// Affine points with x ranging over F_{p^s} in enumeration order, at most `max` of them.
    /// For each admissible x both y and y + 1 are returned.
    pub fn sample_points(&self, field: &FieldDesc, max: usize, limits: &Limits) -> Result<Vec<(FieldElem, FieldElem)>> {
        let rf = self.r_over(field)?;
        let mut out = Vec::new();
        let n = field.order().unwrap_or(u128::MAX).min(limits.budget as u128) as u64;
        for x in field.range(0, n) {
            if out.len() >= max {
                break;
            }
            let t = &x * &rf.eval(&x)?;
            if let Some(y) = artin_schreier_root(&t) {
                let y1 = &y + &field.one();
                out.push((x.clone(), y));
                if out.len() < max {
                    out.push((x, y1));
                }
            }
        }
        Ok(out)
    }

    /// Whether (x, y) satisfies y^p - y = x R(x).
    pub fn is_on_curve(&self, x: &FieldElem, y: &FieldElem) -> Result<bool> {
        let rf = self.r_over(x.field())?;
        Ok(&y.frobenius() - y == x * &rf.eval(x)?)
    }

    /// #C(F_{p^s}) including the point at infinity, by enumerating x.
    pub fn count_points_oracle(&self, s: usize, limits: &Limits) -> Result<u64> {
        let f = self.ext(s)?;
        let n = f.order_within(limits.budget)?;
        let rf = self.r_over(&f)?;
        const CHUNK: u64 = 1 << 12;
        let chunks = n.div_ceil(CHUNK);
        let zeros: u64 = (0..chunks)
            .into_par_iter()
            .map(|k| {
                let start = k * CHUNK;
                let end = (start + CHUNK).min(n);
                f.range(start, end)
                    .filter(|x| (x * &rf.eval(x).expect("same field")).trace_to_prime() == 0)
                    .count() as u64
            })
            .sum();
        Ok(1 + self.p as u64 * zeros)
    }

    /// #C(F_{p^s}) from the diagonalized quadratic form on F_{p^s}/W(F_{p^s}).
    pub fn count_points_quadric(&self, s: usize) -> Result<QuadricCount> {
        let f = self.ext(s)?;
        let rf = self.r_over(&f)?;
        let w = self.w_space(s)?;
        let w_coords: Vec<Vec<u32>> = w.iter().map(|x| x.coeffs().to_vec()).collect();
        let reps: Vec<FieldElem> =
            complement_indices(self.p, s, &w_coords).into_iter().map(|j| f.basis_element(j)).collect();
        let n = reps.len();
        let images = reps.iter().map(|x| rf.eval(x)).collect::<Result<Vec<_>>>()?;
        let half = mod_inv(2, self.p) as u64;
        let mut g = FpMatrix::zeros(self.p, n, n);
        for j in 0..n {
            for k in 0..n {
                let t = (&reps[j] * &images[k] + &reps[k] * &images[j]).trace_to_prime() as u64;
                g.set(j, k, (t * half % self.p as u64) as u32);
            }
        }
        let diagonal = diagonalize_form(&g);
        if diagonal.iter().any(|&a| a == 0) {
            return Err(Error::Invariant(format!("form on F_{}^{s}/W is degenerate", self.p)));
        }
        let (n0, disc_square) = quadric_zeros(self.p, &diagonal);
        let count = BigUint::from(self.p).pow((w.len() + 1) as u32) * n0 + BigUint::one();
        Ok(QuadricCount { s, w: w.len(), n, diagonal, disc_square, count })
    }
}

/// Number of zeros in F_p^n of Σ a_i x_i^2 (all a_i ≠ 0), and for even n
/// whether (-1)^{n/2} Π a_i is a square.
pub fn quadric_zeros(p: u32, diag: &[u32]) -> (BigUint, Option<bool>) {
    let n = diag.len() as u32;
    let pb = BigUint::from(p);
    if n == 0 {
        return (BigUint::one(), None);
    }
    if n % 2 == 1 {
        return (pb.pow(n - 1), None);
    }
    let p64 = p as u64;
    let mut disc = if (n / 2) % 2 == 0 { 1u64 } else { p64 - 1 };
    for &a in diag {
        disc = disc * a as u64 % p64;
    }
    let sq = is_square_mod(disc as u32, p);
    let main = pb.pow(n - 1);
    let corr = pb.pow(n / 2) - pb.pow(n / 2 - 1);
    (if sq { main + corr } else { main - corr }, Some(sq))
}

/// Diagonal entries of a form congruent to the symmetric matrix `g`.
/// Zeros appear only when `g` is degenerate.
pub fn diagonalize_form(g: &FpMatrix) -> Vec<u32> {
    let p = g.p() as u64;
    let n = g.rows();
    let mut m = g.clone();
    let add_row_col = |m: &mut FpMatrix, dst: usize, src: usize, f: u64| {
        // v_dst += f v_src
        for j in 0..n {
            let v = (m.get(dst, j) as u64 + f * m.get(src, j) as u64) % p;
            m.set(dst, j, v as u32);
        }
        for i in 0..n {
            let v = (m.get(i, dst) as u64 + f * m.get(i, src) as u64) % p;
            m.set(i, dst, v as u32);
        }
    };
    let swap = |m: &mut FpMatrix, a: usize, b: usize| {
        if a == b {
            return;
        }
        for j in 0..n {
            let (x, y) = (m.get(a, j), m.get(b, j));
            m.set(a, j, y);
            m.set(b, j, x);
        }
        for i in 0..n {
            let (x, y) = (m.get(i, a), m.get(i, b));
            m.set(i, a, y);
            m.set(i, b, x);
        }
    };
    for i in 0..n {
        if m.get(i, i) == 0 {
            if let Some(k) = (i + 1..n).find(|&k| m.get(k, k) != 0) {
                swap(&mut m, i, k);
            } else if let Some((k, l)) =
                (i..n).flat_map(|k| (k + 1..n).map(move |l| (k, l))).find(|&(k, l)| m.get(k, l) != 0)
            {
                add_row_col(&mut m, k, l, 1);
                swap(&mut m, i, k);
            } else {
                break;
            }
        }
        let inv = mod_inv(m.get(i, i), g.p()) as u64;
        for k in i + 1..n {
            let a = m.get(k, i) as u64;
            if a != 0 {
                add_row_col(&mut m, k, i, (p - a * inv % p) % p);
            }
        }
    }
    (0..n).map(|i| m.get(i, i)).collect()
}

/// Result of the quadric point count over F_{p^s}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadricCount {
    pub s: usize,
    /// dim W(F_{p^s})
    pub w: usize,
    /// s - w
    pub n: usize,
    pub diagonal: Vec<u32>,
    pub disc_square: Option<bool>,
    pub count: BigUint,
}

/// Integer window [q + 1 - ⌊2g√q⌋, q + 1 + ⌊2g√q⌋] for q = p^s.
pub fn hasse_weil_window(p: u32, s: usize, genus: &BigUint) -> (BigInt, BigInt) {
    let q = BigUint::from(p).pow(s as u32);
    let r = BigInt::from((BigUint::from(4u32) * genus * genus * &q).sqrt());
    let mid = BigInt::from(q) + 1;
    (&mid - &r, mid + r)
}

/// Whether |N - q - 1| ≤ 2g√q, decided exactly.
pub fn within_hasse_weil(p: u32, s: usize, genus: &BigUint, n: &BigUint) -> bool {
    let q = BigUint::from(p).pow(s as u32);
    let d: BigInt = BigInt::from(n.clone()) - BigInt::from(q.clone()) - 1;
    let d2 = (&d * &d).magnitude().clone();
    d2 <= BigUint::from(4u32) * genus * genus * q
}

/// B_c together with its canonical constant b = B_c(c)/2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BPoly {
    c: FieldElem,
    poly: LinearizedPoly,
    b: FieldElem,
}

impl BPoly {
    pub fn c(&self) -> &FieldElem {
        &self.c
    }

    pub fn poly(&self) -> &LinearizedPoly {
        &self.poly
    }

    /// B_c(c)/2, which satisfies b^p - b = c R(c).
    pub fn b_canonical(&self) -> &FieldElem {
        &self.b
    }

    pub fn eval(&self, x: &FieldElem) -> Result<FieldElem> {
        self.poly.eval(x)
    }

    /// Residual of B^p - B - c R(X) - R(c) X as a sparse polynomial; zero when the identity holds.
    pub fn identity_residual(&self, r: &LinearizedPoly) -> Result<SparsePoly> {
        let f = self.c.field();
        let rf = r.embed_into(f)?;
        let b = self.poly.to_sparse();
        let lhs = b.pow_p().sub(&b);
        let rhs = rf.to_sparse().scale(&self.c).add(&SparsePoly::monomial(&rf.eval(&self.c)?, 1));
        Ok(lhs.sub(&rhs))
    }

    /// Replaces coefficient `i` (test hook for exercising failure paths).
    pub fn with_coeff(&self, i: usize, v: FieldElem) -> Result<BPoly> {
        let mut cs: Vec<FieldElem> = (0..self.poly.coeffs().len().max(i + 1)).map(|k| self.poly.coeff(k)).collect();
        cs[i] = v;
        Ok(BPoly { c: self.c.clone(), poly: LinearizedPoly::new(self.c.field(), cs)?, b: self.b.clone() })
    }
}

/// Embeds every W basis vector of `curve` into `field` by recomputing W there.
pub fn w_basis_in(curve: &CurveAS, field: &FieldDesc) -> Result<Vec<FieldElem>> {
    if field == curve.splitting_field() {
        return Ok(curve.w_basis().to_vec());
    }
    if field.degree() % curve.q_degree() != 0 {
        return Err(Error::NoEmbedding { p: curve.p(), from: curve.q_degree(), to: field.degree() });
    }
    curve.e_poly().kernel(field)
}

/// Embeds an element of the coefficient field of `curve` into `field`.
pub fn lift(x: &FieldElem, field: &FieldDesc) -> Result<FieldElem> {
    embed(x, field)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(p: u64, r: usize, coeffs: &[Vec<u32>]) -> CurveAS {
        make_curve(p, r, coeffs, &Limits::default()).unwrap()
    }

    #[test]
    fn x_cubed_over_f3() {
        let c = curve(3, 1, &[vec![0], vec![1]]);
        assert_eq!(c.h(), 1);
        assert_eq!(c.q_degree(), 4);
        assert_eq!(c.genus(), BigUint::from(3u32));
        assert_eq!(c.w_basis().len(), 2);
        assert_eq!(c.count_points_oracle(4, &Limits::default()).unwrap(), 28);
        assert_eq!(c.count_points_quadric(4).unwrap().count, BigUint::from(28u32));
    }

    #[test]
    fn b_poly_rejects_outside_w() {
        let c = curve(3, 1, &[vec![0], vec![1]]);
        let f = c.splitting_field().clone();
        let bad = f.one();
        assert!(matches!(c.b_poly(&bad), Err(Error::NotInKernel { .. })));
        for w in c.w_basis() {
            let b = c.b_poly(w).unwrap();
            assert!(b.identity_residual(c.r_poly()).unwrap().is_zero());
        }
    }

    #[test]
    fn diagonalization_handles_zero_diagonal() {
        let g = FpMatrix::from_rows(5, &[vec![0, 1], vec![1, 0]]);
        let d = diagonalize_form(&g);
        assert!(d.iter().all(|&a| a != 0));
        // hyperbolic plane: discriminant -det is a square
        let (n0, sq) = quadric_zeros(5, &d);
        assert_eq!(sq, Some(true));
        assert_eq!(n0, BigUint::from(9u32));
    }

    #[test]
    fn hasse_weil_window_contains_q_plus_one() {
        let (lo, hi) = hasse_weil_window(3, 4, &BigUint::from(3u32));
        assert_eq!(lo, BigInt::from(28));
        assert_eq!(hi, BigInt::from(136));
    }
}
