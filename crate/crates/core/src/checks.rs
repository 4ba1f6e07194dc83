//! Named consistency checks over one curve, shared by reports and `verify`.

use num_bigint::{BigInt, BigUint};

use crate::autgrp::{
    isotropic_decomposition, subgroup_h_order, symplectic_basis, verify_action, verify_semidirect,
    verify_structure, GroupP,
};
use crate::curve::{within_hasse_weil, CurveAS, Limits};
use crate::error::Error;
use crate::gf::{FpMatrix};
use crate::zeta::{
    canonical_a_constant, is_supersingular, iterated_quotient, kani_rosen_check, l_polynomial_with_constant,
    predicted_count, quotient_self_consistent,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// Not run, usually because of the budget.
    Skipped,
    /// Informational finding; never a failure.
    Note,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
            Status::Note => "note",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, status: Status, detail: impl Into<String>) -> Check {
        Check { name: name.to_string(), status, detail: detail.into() }
    }

    pub fn from_bool(name: &str, ok: bool, detail: impl Into<String>) -> Check {
        Check::new(name, if ok { Status::Pass } else { Status::Fail }, detail)
    }

    pub fn from_err(name: &str, e: &Error) -> Check {
        if e.is_budget() {
            Check::new(name, Status::Skipped, e.to_string())
        } else {
            Check::new(name, Status::Fail, e.to_string())
        }
    }
}

#[derive(Clone, Debug)]
pub struct CheckOptions {
    /// Extension degrees for count and L-polynomial checks. Empty means [q_degree].
    pub s_values: Vec<usize>,
    pub samples: usize,
    /// Replace the first B_c with a corrupted one; the identity check must then fail.
    pub corrupt_b: bool,
    /// Run the group, quotient and Kani-Rosen checks.
    pub deep: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { s_values: Vec::new(), samples: 8, corrupt_b: false, deep: true }
    }
}

fn same_span(p: u32, a: &[Vec<u32>], b: &[Vec<u32>]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    let mut all = a.to_vec();
    all.extend_from_slice(b);
    FpMatrix::from_rows(p, &all).rank() == a.len()
}

pub fn run_checks(curve: &CurveAS, opts: &CheckOptions, limits: &Limits) -> Vec<Check> {
    let mut out = Vec::new();
    let p = curve.p();
    let h = curve.h();
    let q = curve.q_degree();
    let mut s_values: Vec<usize> = if opts.s_values.is_empty() { vec![q] } else { opts.s_values.clone() };
    s_values.retain(|&s| s > 0 && s % curve.r_degree() == 0);
    s_values.sort_unstable();
    s_values.dedup();

    out.push(Check::from_bool("w_dimension", curve.w_basis().len() == 2 * h, format!("dim W = {}, h = {h}", curve.w_basis().len())));

    match (curve.w_space(q), curve.w_space_via_form(q)) {
        (Ok(a), Ok(b)) => {
            let ca: Vec<Vec<u32>> = a.iter().map(|x| x.coeffs().to_vec()).collect();
            let cb: Vec<Vec<u32>> = b.iter().map(|x| x.coeffs().to_vec()).collect();
            out.push(Check::from_bool("w_two_routes", same_span(p, &ca, &cb), "kernel of E vs radical of the trace form"));
        }
        (Err(e), _) | (_, Err(e)) => out.push(Check::from_err("w_two_routes", &e)),
    }
    {
        let coords: Vec<Vec<u32>> = curve.w_basis().iter().map(|x| x.coeffs().to_vec()).collect();
        let r = curve.r_degree();
        let frob: Vec<Vec<u32>> = curve.w_basis().iter().map(|x| x.frobenius_pow(r).coeffs().to_vec()).collect();
        out.push(Check::from_bool("w_frobenius_stable", same_span(p, &coords, &frob), "x ↦ x^{p^r} maps W to itself"));
    }

    // B_c invariants on the W basis
    let mut b_ok = true;
    let mut b_detail = String::from("all basis vectors");
    let mut top_ok = true;
    let mut const_ok = true;
    let a_h = curve.r_poly().leading().cloned().expect("nonzero");
    for (k, c) in curve.w_basis().iter().enumerate() {
        let bp = match curve.b_poly(c) {
            Ok(b) => b,
            Err(e) => {
                out.push(Check::from_err("b_identity", &e));
                b_ok = false;
                break;
            }
        };
        let bp = if opts.corrupt_b && k == 0 {
            let f = c.field();
            let v = &bp.poly().coeff(0) + &f.one();
            bp.with_coeff(0, v).expect("same field")
        } else {
            bp
        };
        match bp.identity_residual(curve.r_poly()) {
            Ok(res) if res.is_zero() => {}
            Ok(res) => {
                b_ok = false;
                let terms: Vec<String> = res.terms().map(|(e, a)| format!("{a:?}·X^{e}")).collect();
                b_detail = format!("c = {c:?}: residual {}", terms.join(" + "));
            }
            Err(e) => {
                b_ok = false;
                b_detail = e.to_string();
            }
        }
        if h > 0 {
            let ah = crate::gf::embed(&a_h, c.field()).expect("F_q contains the coefficients");
            if bp.poly().coeff(h - 1).frobenius() != c * &ah {
                top_ok = false;
            }
        }
        let rc = curve.r_over(c.field()).and_then(|r| r.eval(c)).expect("same field");
        let b = bp.b_canonical();
        if &b.frobenius() - b != c * &rc || (c * &rc).trace_to_prime() != 0 {
            const_ok = false;
        }
    }
    out.push(Check::from_bool("b_identity", b_ok, b_detail));
    out.push(Check::from_bool("b_top_coefficient", top_ok, "b_{h-1}^p = c a_h"));
    out.push(Check::from_bool("b_constant", const_ok, "b^p - b = c R(c) and Tr(c R(c)) = 0"));
    let mut add_ok = true;
    let wb = curve.w_basis();
    for i in 0..wb.len() {
        for j in i..wb.len() {
            let sum = &wb[i] + &wb[j];
            match (curve.b_poly(&wb[i]), curve.b_poly(&wb[j]), curve.b_poly(&sum)) {
                (Ok(x), Ok(y), Ok(z)) => {
                    if x.poly().add(y.poly()).ok().as_ref() != Some(z.poly()) {
                        add_ok = false;
                    }
                }
                _ => add_ok = false,
            }
        }
    }
    out.push(Check::from_bool("b_additive", add_ok, "B_{c1+c2} = B_{c1} + B_{c2}"));

    for &s in &s_values {
        let name = format!("counts_s{s}");
        match curve.count_points_quadric(s) {
            Ok(qc) => {
                let gram_ok = qc.diagonal.len() == qc.n && qc.w + qc.n == s;
                out.push(Check::from_bool(
                    &format!("gram_nondegenerate_s{s}"),
                    gram_ok,
                    format!("n_s = {}, w_s = {}", qc.n, qc.w),
                ));
                out.push(Check::from_bool(
                    &format!("hasse_weil_s{s}"),
                    within_hasse_weil(p, s, &curve.genus(), &qc.count),
                    format!("N = {}", qc.count),
                ));
                match curve.count_points_oracle(s, limits) {
                    Ok(n) => out.push(Check::from_bool(
                        &name,
                        BigUint::from(n) == qc.count,
                        format!("oracle {n}, quadric {}", qc.count),
                    )),
                    Err(e) => out.push(Check::from_err(&name, &e)),
                }
            }
            Err(e) => out.push(Check::from_err(&name, &e)),
        }
    }

    let a = match canonical_a_constant(curve, limits) {
        Ok(a) => Some(a),
        Err(e) => {
            out.push(Check::from_err("a_constant", &e));
            None
        }
    };
    if let Some(a) = &a {
        for &s in s_values.iter().filter(|&&s| s % q == 0) {
            match l_polynomial_with_constant(curve, s, a) {
                Ok(l) => {
                    out.push(Check::from_bool(
                        &format!("lpoly_functional_equation_s{s}"),
                        l.functional_equation_holds() && l.roots_on_circle(),
                        l.form.describe(),
                    ));
                    out.push(Check::from_bool(
                        &format!("lpoly_supersingular_s{s}"),
                        is_supersingular(&l.coeffs, p, s),
                        "single Newton slope s/2",
                    ));
                    let pred = predicted_count(&l, 1);
                    match curve.count_points_oracle(s, limits) {
                        Ok(n) => out.push(Check::from_bool(
                            &format!("lpoly_vs_oracle_s{s}"),
                            pred == BigInt::from(n),
                            format!("predicted {pred}, oracle {n}"),
                        )),
                        Err(e) => out.push(Check::from_err(&format!("lpoly_vs_oracle_s{s}"), &e)),
                    }
                }
                Err(e) => out.push(Check::from_err(&format!("lpoly_s{s}"), &e)),
            }
        }
    }

    if !opts.deep {
        return out;
    }

    match GroupP::new(curve) {
        Ok(group) => {
            match verify_structure(&group, limits) {
                Ok(rep) => {
                    let ok = if h == 0 { rep.order == BigUint::from(p) } else { rep.is_extraspecial(p) };
                    out.push(Check::from_bool(
                        "group_structure",
                        ok,
                        format!(
                            "|P| = {}, |Z| = {}, |[P,P]| = {}, exponent p: {}",
                            rep.order, rep.center_order, rep.commutator_order, rep.exponent_p
                        ),
                    ))
                }
                Err(e) => out.push(Check::from_err("group_structure", &e)),
            }
            match verify_action(curve, &group, opts.samples, limits) {
                Ok(()) => out.push(Check::new("group_action", Status::Pass, "composition and commutators on points")),
                Err(e) => out.push(Check::from_err("group_action", &e)),
            }
            if h > 0 {
                match symplectic_basis(&group, limits)
                    .and_then(|sb| isotropic_decomposition(&group, &sb, limits).map(|d| (sb, d)))
                {
                    Ok((sb, d)) => {
                        out.push(Check::new(
                            "isotropic_decomposition",
                            Status::Pass,
                            format!("|𝒜| = {}, {} complements of Z, all conjugate", d.abelian.len(), d.complement_count),
                        ));
                        let part = if d.partition_holds {
                            Check::new("isotropic_partition", Status::Pass, "𝒜 = Z ∪ A_1 ∪ ... ∪ A_p")
                        } else if h >= 2 {
                            Check::new("isotropic_partition", Status::Note, "the τ-conjugates of A_p share σ_u with ε(τ, σ_u) = 0")
                        } else {
                            Check::new("isotropic_partition", Status::Fail, "the τ-conjugates of A_p do not partition 𝒜 minus Z")
                        };
                        out.push(part);
                        match iterated_quotient(curve, &sb.c_elems(&group), limits) {
                            Ok(iq) => {
                                out.push(Check::from_bool(
                                    "quotient_twist_class",
                                    iq.twist_equivalent,
                                    format!("final {:?}, a_𝒜 {:?}", iq.final_constant, iq.a_constant),
                                ));
                                out.push(Check::new(
                                    "quotient_exact_constant",
                                    Status::Note,
                                    format!("exactly equal: {}", iq.exactly_equal),
                                ));
                                let consistent = iq
                                    .steps
                                    .iter()
                                    .map(|s| quotient_self_consistent(s, limits))
                                    .collect::<Result<Vec<bool>, _>>();
                                match consistent {
                                    Ok(v) => out.push(Check::from_bool(
                                        "quotient_counts",
                                        v.iter().all(|&b| b),
                                        "oracle vs quadric on each quotient",
                                    )),
                                    Err(e) => out.push(Check::from_err("quotient_counts", &e)),
                                }
                            }
                            Err(e) => out.push(Check::from_err("quotient_twist_class", &e)),
                        }
                    }
                    Err(e) => out.push(Check::from_err("isotropic_decomposition", &e)),
                }
            }
        }
        Err(e) => out.push(Check::from_err("group_structure", &e)),
    }

    match subgroup_h_order(curve, limits) {
        Ok(ho) => match ho.enumerated {
            Some(n) => out.push(Check::from_bool(
                "h_order",
                BigUint::from(n) == ho.formula,
                format!("formula {}, enumerated {n}", ho.formula),
            )),
            None => out.push(Check::new("h_order", Status::Skipped, "enumeration over budget")),
        },
        Err(e) => out.push(Check::from_err("h_order", &e)),
    }
    match verify_semidirect(curve, opts.samples, limits) {
        Ok(n) => out.push(Check::new("semidirect_action", Status::Pass, format!("{n} conjugations"))),
        Err(e) => out.push(Check::from_err("semidirect_action", &e)),
    }
    if h > 0 {
        match kani_rosen_check(curve, limits) {
            Ok(kr) => out.push(Check::from_bool(
                "kani_rosen",
                kr.pass,
                format!("L over F_{}^{} is the {}-th power of the quotient's", p, kr.s, kr.exponent),
            )),
            Err(e) => out.push(Check::from_err("kani_rosen", &e)),
        }
    }
    out
}
