//! Additive (linearized) polynomials L = Σ a_i X^{p^i} over a finite field.
//!
//! Coefficient `i` is the coefficient of X^{p^i}. Composition is
//! `(L ∘ M)_k = Σ_{i+j=k} a_i b_j^{p^i}`.

use crate::error::{Error, Result};
use crate::gf::{embed, make_field, FieldDesc, FieldElem};
use crate::sparse::SparsePoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearizedPoly {
    field: FieldDesc,
    coeffs: Vec<FieldElem>,
}

impl LinearizedPoly {
    /// Builds Σ coeffs[i] X^{p^i}; trailing zeros are dropped.
    pub fn new(field: &FieldDesc, coeffs: Vec<FieldElem>) -> Result<Self> {
        for c in &coeffs {
            if c.field() != field {
                return Err(Error::FieldMismatch { p: field.p(), a: field.degree(), b: c.field().degree() });
            }
        }
        let mut lp = LinearizedPoly { field: field.clone(), coeffs };
        lp.trim();
        Ok(lp)
    }

    pub fn zero(field: &FieldDesc) -> Self {
        LinearizedPoly { field: field.clone(), coeffs: Vec::new() }
    }

    /// X
    pub fn identity(field: &FieldDesc) -> Self {
        Self::monomial(field.one(), 0)
    }

    /// a X^{p^i}
    pub fn monomial(a: FieldElem, i: usize) -> Self {
        let field = a.field().clone();
        let mut coeffs = vec![field.zero(); i + 1];
        coeffs[i] = a;
        let mut lp = LinearizedPoly { field, coeffs };
        lp.trim();
        lp
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    /// Coefficient of X^{p^i} (zero past the end).
    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// h with deg L = p^h; None for the zero polynomial.
    pub fn index(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&FieldElem> {
        self.coeffs.last()
    }

    /// The formal derivative, which is the constant a_0.
    pub fn derivative(&self) -> FieldElem {
        self.coeff(0)
    }

    /// Separable iff a_0 ≠ 0.
    pub fn is_separable(&self) -> bool {
        !self.derivative().is_zero()
    }

    pub fn embed_into(&self, target: &FieldDesc) -> Result<Self> {
        if target == &self.field {
            return Ok(self.clone());
        }
        let coeffs = self.coeffs.iter().map(|c| embed(c, target)).collect::<Result<Vec<_>>>()?;
        Ok(LinearizedPoly { field: target.clone(), coeffs })
    }

    /// L(x). Coefficients are embedded into the field of x when they differ.
    pub fn eval(&self, x: &FieldElem) -> Result<FieldElem> {
        if x.field() != &self.field {
            return self.embed_into(x.field())?.eval(x);
        }
        let mut acc = x.field().zero();
        let mut y = x.clone();
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                y = y.frobenius();
            }
            if !a.is_zero() {
                acc += &(a * &y);
            }
        }
        Ok(acc)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    fn zip(&self, other: &Self, f: impl Fn(&FieldElem, &FieldElem) -> FieldElem) -> Result<Self> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                p: self.field.p(),
                a: self.field.degree(),
                b: other.field.degree(),
            });
        }
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f(&self.coeff(i), &other.coeff(i))).collect();
        LinearizedPoly::new(&self.field, coeffs)
    }

    /// c · L
    pub fn scale(&self, c: &FieldElem) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(|a| a.try_mul(c)).collect::<Result<Vec<_>>>()?;
        LinearizedPoly::new(&self.field, coeffs)
    }

    /// L(cX)
    pub fn scale_argument(&self, c: &FieldElem) -> Result<Self> {
        let mut cp = c.clone();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                cp = cp.frobenius();
            }
            coeffs.push(a.try_mul(&cp)?);
        }
        LinearizedPoly::new(&self.field, coeffs)
    }

    /// X^{p^k} ∘ L = L^{p^k}
    pub fn frobenius_power(&self, k: usize) -> Self {
        let mut coeffs = vec![self.field.zero(); k];
        coeffs.extend(self.coeffs.iter().map(|a| a.frobenius_pow(k)));
        let mut lp = LinearizedPoly { field: self.field.clone(), coeffs };
        lp.trim();
        lp
    }

    /// L ∘ M
    pub fn compose(&self, m: &Self) -> Result<Self> {
        if self.field != m.field {
            return Err(Error::FieldMismatch { p: self.field.p(), a: self.field.degree(), b: m.field.degree() });
        }
        if self.is_zero() || m.is_zero() {
            return Ok(Self::zero(&self.field));
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + m.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in m.coeffs.iter().enumerate() {
                out[i + j] += &(a * &b.frobenius_pow(i));
            }
        }
        LinearizedPoly::new(&self.field, out)
    }

    /// θ with θ ∘ U = self. Fails with `Divisibility` when U is not a right factor.
    pub fn left_decompose(&self, u: &Self) -> Result<Self> {
        let d = u.index().ok_or(Error::DivisionByZero)?;
        let n = match self.index() {
            None => return Ok(Self::zero(&self.field)),
            Some(n) => n,
        };
        if n < d {
            return Err(Error::Divisibility { nonzero: self.coeffs.iter().filter(|c| !c.is_zero()).count() });
        }
        let lead = u.coeff(d);
        let mut rem = self.clone();
        let mut theta = vec![self.field.zero(); n - d + 1];
        for k in (0..=n - d).rev() {
            let top = rem.coeff(k + d);
            if top.is_zero() {
                continue;
            }
            let mu = top.try_div(&lead.frobenius_pow(k))?;
            let term = Self::monomial(mu.clone(), k).compose(u)?;
            rem = rem.sub(&term)?;
            theta[k] = mu;
        }
        if !rem.is_zero() {
            return Err(Error::Divisibility { nonzero: rem.coeffs.iter().filter(|c| !c.is_zero()).count() });
        }
        LinearizedPoly::new(&self.field, theta)
    }

    /// F_p-basis of the roots of L lying in `ambient`, which must contain the coefficient field.
    pub fn kernel(&self, ambient: &FieldDesc) -> Result<Vec<FieldElem>> {
        let l = self.embed_into(ambient)?;
        let m = ambient.linear_map_matrix(ambient, |x| l.eval(x).expect("same field"));
        Ok(m.kernel().into_iter().map(|v| ambient.from_coeffs_reduced(&v)).collect())
    }

    /// Least multiple m of the coefficient field degree such that all roots of L lie in F_{p^m}.
    pub fn splitting_degree(&self, cap: usize) -> Result<usize> {
        let h = self.index().ok_or_else(|| Error::Domain("zero polynomial".into()))?;
        if !self.is_separable() {
            return Err(Error::Domain("inseparable linearized polynomial".into()));
        }
        let r = self.field.degree();
        let mut m = r;
        while m <= cap {
            let f = make_field(self.field.p() as u64, m)?;
            if self.kernel(&f)?.len() == h {
                return Ok(m);
            }
            m += r;
        }
        Err(Error::SplittingCap { cap })
    }

    /// As an ordinary polynomial.
    pub fn to_sparse(&self) -> SparsePoly {
        let p = self.field.p() as u64;
        let mut s = SparsePoly::zero(&self.field);
        let mut e = 1u64;
        for a in &self.coeffs {
            s.add_term(e, a);
            e *= p;
        }
        s
    }
}

/// E = R^{p^h} + Σ_i (a_i X)^{p^{h-i}} for R = Σ_{i≤h} a_i X^{p^i}.
///
/// The roots of E are the c for which c R(x) + x R(c) is a trace-zero form in x.
pub fn build_e(r: &LinearizedPoly) -> Result<LinearizedPoly> {
    let h = r.index().ok_or_else(|| Error::Domain("R is zero".into()))?;
    let field = r.field();
    let mut coeffs = vec![field.zero(); 2 * h + 1];
    for (i, a) in r.coeffs().iter().enumerate() {
        coeffs[i + h] += &a.frobenius_pow(h);
        coeffs[h - i] += &a.frobenius_pow(h - i);
    }
    LinearizedPoly::new(field, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;

    #[test]
    fn e_for_x_cubed() {
        let f3 = make_field(3, 1).unwrap();
        let r = LinearizedPoly::monomial(f3.one(), 1);
        let e = build_e(&r).unwrap();
        assert_eq!(e.coeffs(), &[f3.one(), f3.zero(), f3.one()]);
        assert_eq!(e.splitting_degree(64).unwrap(), 4);
    }

    #[test]
    fn e_for_x() {
        let f5 = make_field(5, 1).unwrap();
        let e = build_e(&LinearizedPoly::identity(&f5)).unwrap();
        assert_eq!(e.coeffs(), &[f5.from_int(2)]);
        assert_eq!(e.kernel(&f5).unwrap().len(), 0);
        assert_eq!(e.splitting_degree(64).unwrap(), 1);
    }

    #[test]
    fn decomposition_round_trip() {
        let f = make_field(3, 2).unwrap();
        let t = f.gen();
        let u = LinearizedPoly::new(&f, vec![-&t, f.one()]).unwrap();
        let theta = LinearizedPoly::new(&f, vec![f.one(), &t + &f.one(), t.clone()]).unwrap();
        let big = theta.compose(&u).unwrap();
        assert_eq!(big.left_decompose(&u).unwrap(), theta);
        let off = big.add(&LinearizedPoly::identity(&f)).unwrap();
        assert!(matches!(off.left_decompose(&u), Err(Error::Divisibility { .. })));
    }
}
