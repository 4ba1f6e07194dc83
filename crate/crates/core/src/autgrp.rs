//! Automorphisms σ_{a,b,c,d}(x, y) = (a x + c, d y + b + B_c(a x)) of C_R.
//!
//! The translations (a = d = 1, c ∈ W) form an extraspecial group P of order
//! p^{2h+1}. An element of P is stored as (u, i) where u are the coordinates
//! of c in the fixed basis of W and b = B_c(c)/2 + i. In these coordinates
//!
//! ```text
//! (u, i)(v, j) = (u + v, i + j + ε(u, v)/2),   ε(c1, c2) = B_{c1}(c2) - B_{c2}(c1) ∈ F_p,
//! ```
//!
//! so the center is {(0, i)} and [σ1, σ2] = σ1 σ2 σ1^{-1} σ2^{-1} = (0, ε(c1, c2)),
//! i.e. ρ^{ε(c1, c2)} when maps compose right to left.
//!
//! The scalings (x, y) ↦ (a x, d y) with a R(aX) = d R(X), d ∈ F_p^*, form H.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::curve::{w_basis_in, BPoly, CurveAS, Limits};
use crate::error::{Error, Result};
use crate::gf::{embed, make_field, mod_inv, FieldDesc, FieldElem, FpMatrix};

/// A concrete automorphism, acting on points with coordinates in one field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutElem {
    a: FieldElem,
    b: FieldElem,
    c: FieldElem,
    d: u32,
    bpoly: BPoly,
}

impl AutElem {
    /// σ_{b,c} with b = B_c(c)/2 + i.
    pub fn translation(curve: &CurveAS, c: &FieldElem, i: u32) -> Result<AutElem> {
        let bpoly = curve.b_poly(c)?;
        let f = c.field();
        let b = bpoly.b_canonical() + &f.from_int(i as i64);
        Ok(AutElem { a: f.one(), b, c: c.clone(), d: 1, bpoly })
    }

    /// (x, y) ↦ (a x, d y). Fails unless a R(aX) = d R(X).
    pub fn scaling(curve: &CurveAS, a: &FieldElem, d: u32) -> Result<AutElem> {
        let f = a.field();
        let r = curve.r_over(f)?;
        let lhs = r.scale_argument(a)?.scale(a)?;
        let rhs = r.scale(&f.from_int(d as i64))?;
        if lhs != rhs {
            return Err(Error::Domain("a R(aX) ≠ d R(X)".into()));
        }
        let bpoly = curve.b_poly(&f.zero())?;
        Ok(AutElem { a: a.clone(), b: f.zero(), c: f.zero(), d, bpoly })
    }

    /// Assembles σ_{a,b,c,d} from parts without checks.
    pub fn from_parts(a: FieldElem, b: FieldElem, c: FieldElem, d: u32, bpoly: BPoly) -> AutElem {
        AutElem { a, b, c, d, bpoly }
    }

    pub fn a(&self) -> &FieldElem {
        &self.a
    }

    pub fn b(&self) -> &FieldElem {
        &self.b
    }

    pub fn c(&self) -> &FieldElem {
        &self.c
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn bpoly(&self) -> &BPoly {
        &self.bpoly
    }

    pub fn apply(&self, pt: &(FieldElem, FieldElem)) -> Result<(FieldElem, FieldElem)> {
        let (x, y) = pt;
        let ax = self.a.try_mul(x)?;
        let x1 = ax.try_add(&self.c)?;
        let f = x.field();
        let y1 = &(&(y * &f.from_int(self.d as i64)) + &self.b) + &self.bpoly.eval(&ax)?;
        Ok((x1, y1))
    }

    /// Inverse action for a translation: (x - c, y - b - B_c(x - c)).
    pub fn apply_inverse(&self, pt: &(FieldElem, FieldElem)) -> Result<(FieldElem, FieldElem)> {
        if !self.a.is_one() || self.d != 1 {
            let f = self.a.field();
            let ainv = self.a.inv()?;
            let dinv = f.from_int(mod_inv(self.d, f.p()) as i64);
            // (x, y) = (a x0 + c, d y0 + b + B(a x0))
            let ax0 = pt.0.try_sub(&self.c)?;
            let x0 = &ax0 * &ainv;
            let y0 = &(&(&pt.1 - &self.b) - &self.bpoly.eval(&ax0)?) * &dinv;
            return Ok((x0, y0));
        }
        let x0 = pt.0.try_sub(&self.c)?;
        let y0 = &(&pt.1 - &self.b) - &self.bpoly.eval(&x0)?;
        Ok((x0, y0))
    }

    /// Composition self ∘ other of two translations, as a translation.
    pub fn compose_translations(&self, other: &AutElem, curve: &CurveAS) -> Result<AutElem> {
        let c = &self.c + &other.c;
        let bpoly = curve.b_poly(&c)?;
        let b = &(&self.b + &other.b) + &self.bpoly.eval(&other.c)?;
        Ok(AutElem { a: c.field().one(), b, c, d: 1, bpoly })
    }
}

/// An element (u, i) of P in coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PElem {
    pub u: Vec<u32>,
    pub i: u32,
}

/// The group P of translations, with W in a fixed ambient field.
#[derive(Clone, Debug)]
pub struct GroupP {
    p: u32,
    field: FieldDesc,
    basis: Vec<FieldElem>,
    bpolys: Vec<BPoly>,
    pairing: FpMatrix,
}

/// ε(c1, c2) = B_{c1}(c2) - B_{c2}(c1), checked to lie in F_p.
pub fn pairing(b1: &BPoly, b2: &BPoly) -> Result<u32> {
    let e = &b1.eval(b2.c())? - &b2.eval(b1.c())?;
    e.as_prime().ok_or_else(|| Error::Invariant(format!("pairing value {e:?} is not in F_p")))
}

impl GroupP {
    pub fn new(curve: &CurveAS) -> Result<GroupP> {
        Self::in_field(curve, curve.splitting_field())
    }

    /// P with W recomputed inside `field`, which must contain F_q.
    pub fn in_field(curve: &CurveAS, field: &FieldDesc) -> Result<GroupP> {
        let basis = w_basis_in(curve, field)?;
        let bpolys = basis.iter().map(|c| curve.b_poly(c)).collect::<Result<Vec<_>>>()?;
        let n = basis.len();
        let mut pairing_m = FpMatrix::zeros(curve.p(), n, n);
        for j in 0..n {
            for k in 0..n {
                pairing_m.set(j, k, pairing(&bpolys[j], &bpolys[k])?);
            }
        }
        Ok(GroupP { p: curve.p(), field: field.clone(), basis, bpolys, pairing: pairing_m })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    /// 2h
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn w_basis(&self) -> &[FieldElem] {
        &self.basis
    }

    /// Matrix of ε on the W basis.
    pub fn bpolys(&self) -> &[BPoly] {
        &self.bpolys
    }

    pub fn pairing_matrix(&self) -> &FpMatrix {
        &self.pairing
    }

    /// p^{2h+1}
    pub fn order(&self) -> BigUint {
        BigUint::from(self.p).pow(self.rank() as u32 + 1)
    }

    pub fn identity(&self) -> PElem {
        PElem { u: vec![0; self.rank()], i: 0 }
    }

    /// The central generator ρ : (x, y) ↦ (x, y + 1).
    pub fn rho(&self) -> PElem {
        PElem { u: vec![0; self.rank()], i: 1 }
    }

    /// σ for each W basis vector with i = 0, followed by ρ.
    pub fn generators(&self) -> Vec<PElem> {
        let n = self.rank();
        let mut g: Vec<PElem> = (0..n)
            .map(|j| {
                let mut u = vec![0; n];
                u[j] = 1;
                PElem { u, i: 0 }
            })
            .collect();
        g.push(self.rho());
        g
    }

    pub fn epsilon(&self, u: &[u32], v: &[u32]) -> u32 {
        self.pairing.bilinear(u, v)
    }

    pub fn mul(&self, x: &PElem, y: &PElem) -> PElem {
        let p = self.p as u64;
        let half = mod_inv(2, self.p) as u64;
        let u = x.u.iter().zip(&y.u).map(|(&a, &b)| (a + b) % self.p).collect();
        let e = self.epsilon(&x.u, &y.u) as u64;
        let i = ((x.i as u64 + y.i as u64 + e * half) % p) as u32;
        PElem { u, i }
    }

    pub fn inv(&self, x: &PElem) -> PElem {
        // ε(u, u) = 0, so (u, i)^{-1} = (-u, -i)
        let p = self.p;
        PElem { u: x.u.iter().map(|&a| (p - a) % p).collect(), i: (p - x.i) % p }
    }

    pub fn pow(&self, x: &PElem, n: u64) -> PElem {
        let mut acc = self.identity();
        for _ in 0..n {
            acc = self.mul(&acc, x);
        }
        acc
    }

    /// x y x^{-1} y^{-1}
    pub fn commutator(&self, x: &PElem, y: &PElem) -> PElem {
        self.mul(&self.mul(x, y), &self.mul(&self.inv(x), &self.inv(y)))
    }

    pub fn conjugate(&self, g: &PElem, x: &PElem) -> PElem {
        self.mul(&self.mul(g, x), &self.inv(g))
    }

    /// c = Σ u_j w_j
    pub fn w_elem(&self, u: &[u32]) -> FieldElem {
        let mut acc = self.field.zero();
        for (&k, w) in u.iter().zip(&self.basis) {
            if k != 0 {
                acc += &w.scale(k as i64);
            }
        }
        acc
    }

    /// Coordinates of c ∈ W in the fixed basis.
    pub fn coords_of(&self, c: &FieldElem) -> Option<Vec<u32>> {
        let cols: Vec<Vec<u32>> = self.basis.iter().map(|w| w.coeffs().to_vec()).collect();
        if cols.is_empty() {
            return if c.is_zero() { Some(Vec::new()) } else { None };
        }
        FpMatrix::from_columns(self.p, &cols).solve(c.coeffs())
    }

    pub fn to_aut(&self, curve: &CurveAS, x: &PElem) -> Result<AutElem> {
        AutElem::translation(curve, &self.w_elem(&x.u), x.i)
    }

    /// All p^{2h} coordinate vectors in odometer order.
    pub fn w_vectors(&self, budget: u64) -> Result<Vec<Vec<u32>>> {
        let n = self.rank();
        let count = (self.p as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        if count > budget as u128 {
            return Err(Error::BudgetExceeded { required: count, budget });
        }
        let mut out = Vec::with_capacity(count as usize);
        let mut u = vec![0u32; n];
        for _ in 0..count {
            out.push(u.clone());
            for d in u.iter_mut() {
                *d += 1;
                if *d < self.p {
                    break;
                }
                *d = 0;
            }
        }
        Ok(out)
    }

    /// All p^{2h+1} elements.
    pub fn elements(&self, budget: u64) -> Result<Vec<PElem>> {
        let required = self.order().to_u128().unwrap_or(u128::MAX);
        if required > budget as u128 {
            return Err(Error::BudgetExceeded { required, budget });
        }
        let ws = self.w_vectors(budget)?;
        let mut out = Vec::with_capacity(required as usize);
        for u in ws {
            for i in 0..self.p {
                out.push(PElem { u: u.clone(), i });
            }
        }
        Ok(out)
    }

    /// Closure of `gens` under multiplication.
    pub fn generated_subgroup(&self, gens: &[PElem], budget: u64) -> Result<BTreeSet<PElem>> {
        let mut seen: BTreeSet<PElem> = BTreeSet::new();
        seen.insert(self.identity());
        let mut frontier = vec![self.identity()];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = self.mul(&x, g);
                if seen.insert(y.clone()) {
                    if seen.len() as u64 > budget {
                        return Err(Error::BudgetExceeded { required: seen.len() as u128, budget });
                    }
                    frontier.push(y);
                }
            }
        }
        Ok(seen)
    }
}

/// Outcome of checking the group-theoretic description of P.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureReport {
    pub order: BigUint,
    pub exponent_p: bool,
    pub center_order: u64,
    pub commutator_order: u64,
    pub center_is_commutator: bool,
    pub quotient_elementary_abelian: bool,
    pub nonabelian: bool,
    pub pairing_nondegenerate: bool,
}

impl StructureReport {
    /// Extraspecial of exponent p (or cyclic of order p when h = 0).
    pub fn is_extraspecial(&self, p: u32) -> bool {
        let rank_ok = self.nonabelian || self.order == BigUint::from(p);
        self.exponent_p
            && self.center_order == p as u64
            && (self.commutator_order == p as u64 || !self.nonabelian)
            && self.center_is_commutator == self.nonabelian
            && self.quotient_elementary_abelian
            && self.pairing_nondegenerate
            && rank_ok
    }
}

/// Enumerates P and checks exponent, center, commutator subgroup and P/Z.
pub fn verify_structure(group: &GroupP, limits: &Limits) -> Result<StructureReport> {
    let elems = group.elements(limits.budget)?;
    let distinct: HashSet<&PElem> = elems.iter().collect();
    if distinct.len() != elems.len() {
        return Err(Error::Invariant("duplicate group elements".into()));
    }
    let p = group.p() as u64;
    let id = group.identity();
    let exponent_p = elems.iter().all(|x| group.pow(x, p) == id);
    let gens = group.generators();
    let center: Vec<&PElem> =
        elems.iter().filter(|x| gens.iter().all(|g| group.mul(x, g) == group.mul(g, x))).collect();
    let mut comms: Vec<PElem> = Vec::new();
    for g1 in &gens {
        for g2 in &gens {
            comms.push(group.commutator(g1, g2));
        }
    }
    let commutator_sub = group.generated_subgroup(&comms, limits.budget)?;
    let center_set: BTreeSet<PElem> = center.iter().map(|&x| x.clone()).collect();
    // P/Z: the projection (u, i) ↦ u must be a homomorphism onto F_p^{2h}
    let quotient_elementary_abelian = gens.iter().all(|x| {
        gens.iter().all(|y| {
            let xy = group.mul(x, y);
            xy.u.iter().zip(x.u.iter().zip(&y.u)).all(|(&s, (&a, &b))| s == (a + b) % group.p())
        })
    }) && center_set.iter().all(|z| z.u.iter().all(|&a| a == 0));
    let nonabelian = !gens.iter().all(|x| gens.iter().all(|y| group.mul(x, y) == group.mul(y, x)));
    let pairing_nondegenerate = group.pairing_matrix().rank() == group.rank();
    Ok(StructureReport {
        order: BigUint::from(elems.len()),
        exponent_p,
        center_order: center.len() as u64,
        commutator_order: commutator_sub.len() as u64,
        center_is_commutator: center_set == commutator_sub,
        quotient_elementary_abelian,
        nonabelian,
        pairing_nondegenerate,
    })
}

/// Checks the coordinate group law and the commutator formula against the
/// action on curve points, for every pair of generators.
pub fn verify_action(curve: &CurveAS, group: &GroupP, samples: usize, limits: &Limits) -> Result<()> {
    let pts = curve.sample_points(group.field(), samples, limits)?;
    if pts.is_empty() {
        return Err(Error::Invariant("no sample points".into()));
    }
    for pt in &pts {
        if !curve.is_on_curve(&pt.0, &pt.1)? {
            return Err(Error::Invariant("sample point is not on the curve".into()));
        }
    }
    let gens: Vec<PElem> = group.generators();
    let auts = gens.iter().map(|g| group.to_aut(curve, g)).collect::<Result<Vec<_>>>()?;
    for (g1, s1) in gens.iter().zip(&auts) {
        for (g2, s2) in gens.iter().zip(&auts) {
            let prod = group.mul(g1, g2);
            let s12 = s1.compose_translations(s2, curve)?;
            let expected = group.to_aut(curve, &prod)?;
            if s12 != expected {
                return Err(Error::Invariant(format!("composition mismatch for {g1:?} {g2:?}")));
            }
            let eps = group.epsilon(&g1.u, &g2.u);
            for pt in &pts {
                let via_maps = s1.apply(&s2.apply(pt)?)?;
                if via_maps != s12.apply(pt)? {
                    return Err(Error::Invariant("composed action differs from the product".into()));
                }
                if !curve.is_on_curve(&via_maps.0, &via_maps.1)? {
                    return Err(Error::Invariant("image point is off the curve".into()));
                }
                // σ1 σ2 σ1^{-1} σ2^{-1} = ρ^{ε}
                let q = s1.apply(&s2.apply(&s1.apply_inverse(&s2.apply_inverse(pt)?)?)?)?;
                let shift = &q.1 - &pt.1;
                let want = group.field().from_int(eps as i64);
                if q.0 != pt.0 || shift != want {
                    return Err(Error::Invariant(format!("commutator of {g1:?} and {g2:?} acts wrongly")));
                }
            }
        }
    }
    Ok(())
}

/// Order of H, by formula and (within budget) by enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HOrder {
    pub formula: BigUint,
    pub enumerated: Option<u64>,
    /// Degree of the field searched for a.
    pub search_degree: usize,
}

fn nonzero_indices(curve: &CurveAS) -> Vec<usize> {
    curve.r_poly().coeffs().iter().enumerate().filter(|(_, a)| !a.is_zero()).map(|(i, _)| i).collect()
}

/// e (p - 1)/2 · gcd_i (p^i + 1) over the i with a_i ≠ 0; e = 2 when all such i have one parity.
pub fn h_order_formula(curve: &CurveAS) -> BigUint {
    let idx = nonzero_indices(curve);
    let p = BigUint::from(curve.p());
    let g = idx.iter().map(|&i| p.pow(i as u32) + 1u32).reduce(|a, b| a.gcd(&b)).unwrap_or_else(BigUint::one);
    let e = if idx.iter().all(|&i| i % 2 == idx[0] % 2) { 2u32 } else { 1 };
    BigUint::from(e) * BigUint::from((curve.p() - 1) / 2) * g
}

/// Degree of a field containing every a with a^{p^i+1} ∈ F_p^* for the least such i,
/// and the coefficients of R.
pub fn h_search_degree(curve: &CurveAS) -> usize {
    let i0 = nonzero_indices(curve)[0];
    (2 * i0.max(1)).lcm(&curve.r_degree())
}

/// Pairs (a, d) with a R(aX) = d R(X), a in `field`.
pub fn h_elements(curve: &CurveAS, field: &FieldDesc, limits: &Limits) -> Result<Vec<(FieldElem, u32)>> {
    let r = curve.r_over(field)?;
    let mut out = Vec::new();
    for a in field.enumerate(limits.budget)? {
        if a.is_zero() {
            continue;
        }
        let lhs = r.scale_argument(&a)?.scale(&a)?;
        for d in 1..curve.p() {
            if lhs == r.scale(&field.from_int(d as i64))? {
                out.push((a.clone(), d));
            }
        }
    }
    Ok(out)
}

pub fn subgroup_h_order(curve: &CurveAS, limits: &Limits) -> Result<HOrder> {
    let formula = h_order_formula(curve);
    let search_degree = h_search_degree(curve);
    let field = make_field(curve.p() as u64, search_degree)?;
    let enumerated = match h_elements(curve, &field, limits) {
        Ok(v) => Some(v.len() as u64),
        Err(e) if e.is_budget() => None,
        Err(e) => return Err(e),
    };
    Ok(HOrder { formula, enumerated, search_degree })
}

/// Checks h σ_{b,c} h^{-1} = σ_{d b, a c} with B_{ac}(X) = d B_c(X/a) for every h in H
/// and every W basis vector c, in a field containing both.
pub fn verify_semidirect(curve: &CurveAS, samples: usize, limits: &Limits) -> Result<usize> {
    let search = make_field(curve.p() as u64, h_search_degree(curve))?;
    let field = make_field(curve.p() as u64, search.degree().lcm(&curve.q_degree()))?;
    let hs = h_elements(curve, &search, limits)?
        .into_iter()
        .map(|(a, d)| Ok((embed(&a, &field)?, d)))
        .collect::<Result<Vec<_>>>()?;
    let basis = w_basis_in(curve, &field)?;
    let pts = curve.sample_points(&field, samples, limits)?;
    let mut checked = 0;
    for (a, d) in &hs {
        let hmap = AutElem::scaling(curve, a, *d)?;
        let dd = field.from_int(*d as i64);
        for c in &basis {
            let sigma = AutElem::translation(curve, c, 0)?;
            let ac = a * c;
            let target = curve.b_poly(&ac)?;
            let predicted = sigma.bpoly().poly().scale_argument(&a.inv()?)?.scale(&dd)?;
            if target.poly() != &predicted {
                return Err(Error::Invariant("B_{ac}(X) ≠ d B_c(X/a)".into()));
            }
            if target.b_canonical() != &(sigma.b() * &dd) {
                return Err(Error::Invariant("canonical constant not carried to d b".into()));
            }
            let conj = AutElem::translation(curve, &ac, 0)?;
            for pt in &pts {
                let lhs = hmap.apply(&sigma.apply(&hmap.apply_inverse(pt)?)?)?;
                if lhs != conj.apply(pt)? {
                    return Err(Error::Invariant("conjugation action mismatch".into()));
                }
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// c_1, c'_1, ..., c_h, c'_h with ε(c_i, c'_j) = δ_ij and all other pairings zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticBasis {
    pub c: Vec<Vec<u32>>,
    pub c_prime: Vec<Vec<u32>>,
}

impl SymplecticBasis {
    pub fn c_elems(&self, group: &GroupP) -> Vec<FieldElem> {
        self.c.iter().map(|u| group.w_elem(u)).collect()
    }

    pub fn c_prime_elems(&self, group: &GroupP) -> Vec<FieldElem> {
        self.c_prime.iter().map(|u| group.w_elem(u)).collect()
    }
}

/// Greedy symplectic basis: take the least nonzero vector of the current
/// subspace (in field enumeration order), pair it with the least partner,
/// normalize, and pass to the orthogonal complement of the pair.
pub fn symplectic_basis(group: &GroupP, limits: &Limits) -> Result<SymplecticBasis> {
    let p = group.p();
    let mut space: Vec<(FieldElem, Vec<u32>)> =
        group.w_vectors(limits.budget)?.into_iter().map(|u| (group.w_elem(&u), u)).collect();
    space.sort();
    let mut c = Vec::new();
    let mut c_prime = Vec::new();
    loop {
        let Some((_, v)) = space.iter().find(|(e, _)| !e.is_zero()).cloned() else {
            break;
        };
        let Some((_, w)) = space.iter().find(|(_, x)| group.epsilon(&v, x) != 0).cloned() else {
            return Err(Error::Invariant("pairing is degenerate on W".into()));
        };
        let k = mod_inv(group.epsilon(&v, &w), p) as u64;
        let w: Vec<u32> = w.iter().map(|&a| (a as u64 * k % p as u64) as u32).collect();
        space.retain(|(_, x)| group.epsilon(&v, x) == 0 && group.epsilon(&w, x) == 0);
        c.push(v);
        c_prime.push(w);
    }
    Ok(SymplecticBasis { c, c_prime })
}

/// A_p = ⟨σ_{c_1}, ..., σ_{c_h}⟩ and its conjugates A_j = τ^j A_p τ^{-j}.
#[derive(Clone, Debug)]
pub struct IsotropicDecomposition {
    pub a_p: BTreeSet<PElem>,
    pub tau: PElem,
    pub conjugates: Vec<BTreeSet<PElem>>,
    pub abelian: BTreeSet<PElem>,
    /// 𝒜 = Z ∪ A_1 ∪ ... ∪ A_p with pairwise trivial intersections. Holds for h = 1 only.
    pub partition_holds: bool,
    /// Number of complements of Z in 𝒜, all conjugate to A_p.
    pub complement_count: usize,
}

/// Builds the decomposition and checks: each A_j has order p^h and meets Z
/// trivially, 𝒜 = ⟨A_p, Z⟩ is elementary abelian of order p^{h+1},
/// τ σ_i τ^{-1} = ρ σ_i, and the p^h complements of Z in 𝒜 form one
/// conjugacy class. Whether the A_j partition 𝒜 minus Z is recorded, not enforced.
pub fn isotropic_decomposition(
    group: &GroupP,
    basis: &SymplecticBasis,
    limits: &Limits,
) -> Result<IsotropicDecomposition> {
    let p = group.p();
    let n = group.rank();
    let h = basis.c.len();
    let ph = (p as usize).pow(h as u32);
    let sigmas: Vec<PElem> = basis.c.iter().map(|u| PElem { u: u.clone(), i: 0 }).collect();
    let a_p = group.generated_subgroup(&sigmas, limits.budget)?;
    // τ = ∏ σ_{c'_i}^{-1}, so that ε(τ, σ_i) = ε(c_i, c'_i) = 1
    let mut tau_u = vec![0u32; n];
    for u in &basis.c_prime {
        for (t, &x) in tau_u.iter_mut().zip(u) {
            *t = (*t + p - x) % p;
        }
    }
    let tau = PElem { u: tau_u, i: 0 };
    let mut gens = sigmas.clone();
    gens.push(group.rho());
    let abelian = group.generated_subgroup(&gens, limits.budget)?;
    let fail = |m: &str| Err(Error::Invariant(m.to_string()));
    if a_p.len() != ph {
        return fail("A_p has the wrong order");
    }
    if abelian.len() != ph * p as usize {
        return fail("𝒜 has the wrong order");
    }
    for x in &abelian {
        for y in &abelian {
            if group.mul(x, y) != group.mul(y, x) {
                return fail("𝒜 is not abelian");
            }
        }
    }
    for s in &sigmas {
        if group.conjugate(&tau, s) != group.mul(&group.rho(), s) {
            return fail("τ σ τ^{-1} ≠ ρ σ");
        }
    }
    let mut conjugates = Vec::with_capacity(p as usize);
    let mut tj = group.identity();
    for _ in 0..p {
        let aj: BTreeSet<PElem> = a_p.iter().map(|x| group.conjugate(&tj, x)).collect();
        conjugates.push(aj);
        tj = group.mul(&tj, &tau);
    }
    let id = group.identity();
    let meets_center = |a: &BTreeSet<PElem>| a.iter().any(|x| x != &id && x.u.iter().all(|&v| v == 0));
    let mut union: BTreeSet<PElem> = BTreeSet::new();
    let mut disjoint = true;
    for (j, aj) in conjugates.iter().enumerate() {
        if aj.len() != ph || meets_center(aj) {
            return fail("A_j meets the center");
        }
        for ak in &conjugates[j + 1..] {
            if aj.intersection(ak).count() != 1 {
                disjoint = false;
            }
        }
        union.extend(aj.iter().cloned());
    }
    for i in 0..p {
        union.insert(PElem { u: vec![0; n], i });
    }
    let partition_holds = disjoint && union == abelian;
    // complements of Z in 𝒜 are graphs of functionals on A_p, so there are p^h;
    // conjugation by σ_v realizes the functional ε(v, ·)
    let mut orbit: BTreeSet<BTreeSet<PElem>> = BTreeSet::new();
    for v in group.w_vectors(limits.budget)? {
        let g = PElem { u: v, i: 0 };
        let conj: BTreeSet<PElem> = a_p.iter().map(|x| group.conjugate(&g, x)).collect();
        if !conj.is_subset(&abelian) || meets_center(&conj) {
            return fail("a conjugate of A_p is not a complement of Z in 𝒜");
        }
        orbit.insert(conj);
    }
    if orbit.len() != ph {
        return fail("complements of Z in 𝒜 are not all conjugate");
    }
    Ok(IsotropicDecomposition { a_p, tau, conjugates, abelian, partition_holds, complement_count: orbit.len() })
}
