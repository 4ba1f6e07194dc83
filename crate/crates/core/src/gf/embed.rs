//! Field embeddings F_{p^a} → F_{p^b} for a | b.
//!
//! The generator of the source goes to the least root (in enumeration order)
//! of its defining polynomial inside the target; the identity is used when
//! a = b. Maps are cached per (p, a, b).

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::extpoly::split_roots;
use super::{make_field, FieldDesc, FieldElem, FpMatrix};
use crate::error::{Error, Result};

/// A ring embedding of one field into a larger one.
#[derive(Clone, Debug)]
pub struct Embedding {
    src: FieldDesc,
    dst: FieldDesc,
    /// images[j] = image of θ^j
    images: Arc<Vec<FieldElem>>,
}

fn cache() -> &'static Mutex<HashMap<(u32, usize, usize), Embedding>> {
    static C: OnceLock<Mutex<HashMap<(u32, usize, usize), Embedding>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The canonical embedding of `src` into `dst`.
pub fn embedding(src: &FieldDesc, dst: &FieldDesc) -> Result<Embedding> {
    let (p, a, b) = (src.p(), src.degree(), dst.degree());
    if p != dst.p() || b % a != 0 {
        return Err(Error::NoEmbedding { p, from: a, to: b });
    }
    if let Some(e) = cache().lock().unwrap().get(&(p, a, b)) {
        return Ok(e.clone());
    }
    let root = if a == b {
        src.gen()
    } else if a == 1 {
        dst.from_int(src.gen().coeffs()[0] as i64)
    } else {
        let f: Vec<FieldElem> = src.modulus().iter().map(|&c| dst.from_int(c as i64)).collect();
        split_roots(&f, dst)
            .into_iter()
            .next()
            .ok_or(Error::NoEmbedding { p, from: a, to: b })?
    };
    let mut images = Vec::with_capacity(a);
    let mut pw = dst.one();
    for _ in 0..a {
        images.push(pw.clone());
        pw = &pw * &root;
    }
    let e = Embedding { src: src.clone(), dst: dst.clone(), images: Arc::new(images) };
    cache().lock().unwrap().insert((p, a, b), e.clone());
    Ok(e)
}

/// Image of `x` in `dst` under the canonical embedding.
pub fn embed(x: &FieldElem, dst: &FieldDesc) -> Result<FieldElem> {
    if x.field() == dst {
        return Ok(x.clone());
    }
    embedding(x.field(), dst)?.apply(x)
}

impl Embedding {
    pub fn source(&self) -> &FieldDesc {
        &self.src
    }

    pub fn target(&self) -> &FieldDesc {
        &self.dst
    }

    pub fn apply(&self, x: &FieldElem) -> Result<FieldElem> {
        if x.field() != &self.src {
            return Err(Error::FieldMismatch { p: x.field().p(), a: x.field().degree(), b: self.src.degree() });
        }
        let mut acc = self.dst.zero();
        for (c, img) in x.coeffs().iter().zip(self.images.iter()) {
            if *c != 0 {
                acc += &img.scale(*c as i64);
            }
        }
        Ok(acc)
    }

    /// Preimage of `y`, if `y` lies in the image.
    pub fn preimage(&self, y: &FieldElem) -> Option<FieldElem> {
        let cols: Vec<Vec<u32>> = self.images.iter().map(|e| e.coeffs().to_vec()).collect();
        let m = FpMatrix::from_columns(self.src.p(), &cols);
        m.solve(y.coeffs()).map(|v| self.src.from_coeffs_reduced(&v))
    }
}

/// Relative trace Tr_{F_{p^b}/F_{p^a}}(y) = Σ_{j < b/a} y^{p^{aj}}, as an element of F_{p^b}.
pub fn relative_trace(y: &FieldElem, a: usize) -> FieldElem {
    let b = y.field().degree();
    let mut acc = y.field().zero();
    let mut cur = y.clone();
    for _ in 0..b / a {
        acc += &cur;
        cur = cur.frobenius_pow(a);
    }
    acc
}

/// Convenience: F_{p^a} embedded into F_{p^b} by degree.
pub fn embedding_by_degree(p: u64, a: usize, b: usize) -> Result<Embedding> {
    embedding(&make_field(p, a)?, &make_field(p, b)?)
}
