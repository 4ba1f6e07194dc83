//! Sparse univariate polynomials over a finite field, used for identity checks.

use std::collections::BTreeMap;

use crate::gf::{FieldDesc, FieldElem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsePoly {
    field: FieldDesc,
    terms: BTreeMap<u64, FieldElem>,
}

impl SparsePoly {
    pub fn zero(field: &FieldDesc) -> Self {
        SparsePoly { field: field.clone(), terms: BTreeMap::new() }
    }

    pub fn monomial(a: &FieldElem, e: u64) -> Self {
        let mut s = Self::zero(a.field());
        s.add_term(e, a);
        s
    }

    pub fn add_term(&mut self, e: u64, a: &FieldElem) {
        if a.is_zero() {
            return;
        }
        let v = match self.terms.get(&e) {
            Some(b) => b + a,
            None => a.clone(),
        };
        if v.is_zero() {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, v);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &FieldElem)> {
        self.terms.iter().map(|(e, a)| (*e, a))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, a) in &other.terms {
            out.add_term(*e, a);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, a) in &other.terms {
            out.add_term(*e, &-a);
        }
        out
    }

    pub fn scale(&self, c: &FieldElem) -> Self {
        let mut out = Self::zero(&self.field);
        for (e, a) in &self.terms {
            out.add_term(*e, &(a * c));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(&self.field);
        for (e1, a) in &self.terms {
            for (e2, b) in &other.terms {
                out.add_term(e1 + e2, &(a * b));
            }
        }
        out
    }

    /// f^p, computed as Σ a^p X^{pe}.
    pub fn pow_p(&self) -> Self {
        let p = self.field.p() as u64;
        let mut out = Self::zero(&self.field);
        for (e, a) in &self.terms {
            out.add_term(e * p, &a.frobenius());
        }
        out
    }

    pub fn eval(&self, x: &FieldElem) -> FieldElem {
        let mut acc = x.field().zero();
        for (e, a) in &self.terms {
            acc += &(a * &x.pow(*e as u128));
        }
        acc
    }

    /// Number of nonzero coefficients.
    pub fn weight(&self) -> usize {
        self.terms.len()
    }
}
