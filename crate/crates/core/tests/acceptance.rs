//! Acceptance criteria, one PASS/FAIL line each.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};

use aszeta_core::autgrp::{
    subgroup_h_order, symplectic_basis, verify_action, verify_structure, GroupP, PElem,
};
use aszeta_core::checks::{run_checks, CheckOptions, Status};
use aszeta_core::curve::within_hasse_weil;
use aszeta_core::zeta::{
    canonical_a_constant, classify, is_supersingular, iterated_quotient, kani_rosen_check,
    l_polynomial, predicted_count, quotient_step, Classification,
};
use aszeta_core::{make_curve, make_field, CurveAS, FieldDesc, FieldElem, Limits};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn curve(p: u64, r: usize, coeffs: &[Vec<u32>]) -> Result<CurveAS, String> {
    make_curve(p, r, coeffs, &Limits::default()).map_err(|e| e.to_string())
}

fn monomial(p: u64, i: usize) -> Result<CurveAS, String> {
    let mut c = vec![vec![0]; i + 1];
    c[i] = vec![1];
    curve(p, 1, &c)
}

fn first_nonsquare(f: &FieldDesc) -> FieldElem {
    f.enumerate(u64::MAX)
        .unwrap()
        .find(|x| !x.is_zero() && !x.is_square().unwrap())
        .expect("odd characteristic has nonsquares")
}

fn c1_hermite() -> Outcome {
    let l = Limits::default();
    let mut parts = Vec::new();
    for p in [3u64, 5, 7] {
        let c = monomial(p, 1)?;
        let t = Instant::now();
        let n = c.count_points_oracle(2, &l).map_err(|e| e.to_string())?;
        let dt = t.elapsed();
        ensure(n == 1 + p, format!("p = {p}: N = {n}, expected {}", 1 + p))?;
        ensure(dt < Duration::from_secs(1), format!("p = {p}: oracle took {dt:?}"))?;
        parts.push(format!("p={p} N={n}"));
    }
    Ok(parts.join(", "))
}

fn c2_x_cubed() -> Outcome {
    let l = Limits::default();
    let c = monomial(3, 1)?;
    let e: Vec<Vec<u32>> = c.e_poly().coeffs().iter().map(|a| a.coeffs().to_vec()).collect();
    let one = c.base().one().coeffs().to_vec();
    let zero = c.base().zero().coeffs().to_vec();
    ensure(e == vec![one.clone(), zero, one], format!("E = {e:?}"))?;
    ensure(c.q_degree() == 4, format!("splitting degree {}", c.q_degree()))?;
    ensure(c.w_basis().len() == 2, "dim W ≠ 2")?;
    let res = classify(&c, 4, &l).map_err(|e| e.to_string())?;
    let oracle = c.count_points_oracle(4, &l).map_err(|e| e.to_string())?;
    ensure(res.class == Classification::Minimal, format!("class {:?}", res.class))?;
    ensure(res.n1 == BigInt::from(28) && oracle == 28, format!("N = {} / oracle {oracle}", res.n1))?;
    ensure(BigInt::from(81 + 1 - 2 * 3 * 9) == res.n1, "closed form")?;
    Ok(format!("E = X^9 + X, q = 3^4, Minimal, N = {oracle}"))
}

fn c3_i_x_cubed() -> Outcome {
    let l = Limits::default();
    let c = curve(3, 2, &[vec![0, 0], vec![0, 1]])?;
    let a1 = c.r_poly().coeff(1);
    ensure(&a1 * &a1 == -&c.base().one(), "a_1² ≠ -1")?;
    ensure(c.q_degree() == 2, format!("splitting degree {}", c.q_degree()))?;
    let res = classify(&c, 2, &l).map_err(|e| e.to_string())?;
    let oracle = c.count_points_oracle(2, &l).map_err(|e| e.to_string())?;
    ensure(res.class == Classification::Maximal, format!("class {:?}", res.class))?;
    ensure(res.n1 == BigInt::from(28) && oracle == 28, format!("N = {} / oracle {oracle}", res.n1))?;
    ensure(BigInt::from(9 + 1 + 2 * 3 * 3) == res.n1, "closed form")?;
    Ok(format!("q = 9, Maximal, N = {oracle}"))
}

fn c4_many_points() -> Outcome {
    let l = Limits::default();
    let mut parts = Vec::new();
    for (p, g, want) in [(11u64, 5u64, 15852u64), (19, 9, 136820)] {
        let f = make_field(p, 4).map_err(|e| e.to_string())?;
        let a = first_nonsquare(&f);
        let c = curve(p, 4, &[a.coeffs().to_vec()])?;
        ensure(c.genus() == BigUint::from(g), format!("p = {p}: genus {}", c.genus()))?;
        let res = classify(&c, 4, &l).map_err(|e| e.to_string())?;
        let oracle = c.count_points_oracle(4, &l).map_err(|e| e.to_string())?;
        ensure(res.class == Classification::Maximal, format!("p = {p}: {:?}", res.class))?;
        ensure(oracle == want && res.n1 == BigInt::from(want), format!("p = {p}: N = {oracle}"))?;
        ensure(p.pow(4) + 1 + 2 * g * p * p == want, "closed form")?;
        parts.push(format!("p={p} g={g} N={oracle}"));
    }
    Ok(parts.join(", "))
}

/// Pairs of generators with ε ≠ 0 on which the point action shows ρ^{-ε}.
fn literal_minus_sign_agreements(c: &CurveAS, g: &GroupP) -> Result<(usize, usize), String> {
    let l = Limits::default();
    let pts = c.sample_points(g.field(), 4, &l).map_err(|e| e.to_string())?;
    let gens: Vec<PElem> = g.generators();
    let mut total = 0;
    let mut agree = 0;
    for x in &gens {
        for y in &gens {
            let eps = g.epsilon(&x.u, &y.u);
            if eps == 0 {
                continue;
            }
            total += 1;
            let s1 = g.to_aut(c, x).map_err(|e| e.to_string())?;
            let s2 = g.to_aut(c, y).map_err(|e| e.to_string())?;
            let pt = &pts[0];
            let q = s1
                .apply(&s2.apply(&s1.apply_inverse(&s2.apply_inverse(pt).unwrap()).unwrap()).unwrap())
                .unwrap();
            if &q.1 - &pt.1 == g.field().from_int(-(eps as i64)) {
                agree += 1;
            }
        }
    }
    Ok((agree, total))
}

fn c5_groups() -> Outcome {
    let l = Limits::default();
    let mut parts = Vec::new();
    for (p, h) in [(3u64, 1usize), (5, 1), (3, 2)] {
        let c = monomial(p, h)?;
        let g = GroupP::new(&c).map_err(|e| e.to_string())?;
        let rep = verify_structure(&g, &l).map_err(|e| e.to_string())?;
        let order = BigUint::from(p).pow(2 * h as u32 + 1);
        ensure(rep.order == order, format!("p={p} h={h}: |P| = {}", rep.order))?;
        ensure(rep.exponent_p, "exponent is not p")?;
        ensure(
            rep.center_order == p && rep.commutator_order == p && rep.center_is_commutator,
            "Z(P) ≠ [P,P] = ⟨ρ⟩",
        )?;
        ensure(rep.quotient_elementary_abelian && rep.pairing_nondegenerate, "P/Z not elementary abelian of rank 2h")?;
        verify_action(&c, &g, 6, &l).map_err(|e| e.to_string())?;
        let (agree, total) = literal_minus_sign_agreements(&c, &g)?;
        parts.push(format!("p={p} h={h} |P|={order} (ρ^-ε matches maps on {agree}/{total} pairs)"));
    }
    Ok(parts.join(", "))
}

fn c6_h_order() -> Outcome {
    let l = Limits::default();
    let mut parts = Vec::new();
    for p in [3u64, 5] {
        for (name, coeffs) in [("X", vec![vec![1]]), ("X^p", vec![vec![0], vec![1]]), ("X+X^p", vec![vec![1], vec![1]])] {
            let c = curve(p, 1, &coeffs)?;
            let ho = subgroup_h_order(&c, &l).map_err(|e| e.to_string())?;
            let n = ho.enumerated.ok_or(format!("p={p} {name}: enumeration skipped"))?;
            ensure(BigUint::from(n) == ho.formula, format!("p={p} {name}: formula {} vs {n}", ho.formula))?;
            parts.push(format!("p={p} {name}:{n}"));
        }
    }
    Ok(parts.join(" "))
}

fn c7_quotient() -> Outcome {
    let l = Limits::default();
    let c = monomial(3, 1)?;
    let g = GroupP::new(&c).map_err(|e| e.to_string())?;
    let sb = symplectic_basis(&g, &l).map_err(|e| e.to_string())?;
    let basis = sb.c_elems(&g);
    let iq = iterated_quotient(&c, &basis, &l).map_err(|e| e.to_string())?;
    ensure(iq.twist_equivalent, "iterated quotient not twist-equivalent to a_𝒜")?;
    let step = quotient_step(&c, &basis[0], &l).map_err(|e| e.to_string())?;
    ensure(step.curve.genus() == BigUint::from(1u32), format!("quotient genus {}", step.curve.genus()))?;
    let f = step.c.field();
    let two_cp = &f.from_int(2) * &step.c.pow(2);
    let want = f.one().try_div(&two_cp).map_err(|e| e.to_string())?;
    ensure(step.r_tilde.leading() == Some(&want), "leading coefficient is not a_1/(2c^{p-1})")?;
    let a = canonical_a_constant(&c, &l).map_err(|e| e.to_string())?;
    Ok(format!(
        "genus 1 quotient, leading 1/(2c²), a_𝒜 {:?}, exact constant match: {}",
        a.coeffs(),
        iq.exactly_equal
    ))
}

fn c8_kani_rosen() -> Outcome {
    let l = Limits::default();
    let mut parts = Vec::new();
    for (name, c) in [("X^3", monomial(3, 1)?), ("a1 X^3", curve(3, 2, &[vec![0, 0], vec![0, 1]])?)] {
        let kr = kani_rosen_check(&c, &l).map_err(|e| e.to_string())?;
        ensure(kr.pass, format!("{name}: lhs {:?} rhs {:?}", kr.lhs_oracle, kr.rhs_table))?;
        ensure(kr.lhs_oracle == kr.lhs_table && kr.quotient_oracle == kr.quotient_table, "paths disagree")?;
        parts.push(format!("{name} over F_3^{} (exponent {})", kr.s, kr.exponent));
    }
    Ok(parts.join(", "))
}

fn row_of(p: u32, s: usize, square: bool) -> &'static str {
    match (p % 4, s % 2, s % 4, square) {
        (1, 1, _, _) => "p≡1 s odd",
        (1, 0, _, true) => "p≡1 s even square",
        (1, 0, _, false) => "p≡1 s even nonsquare",
        (_, 1, _, _) => "p≡3 s odd",
        (_, _, 0, true) => "p≡3 s≡0 square",
        (_, _, 0, false) => "p≡3 s≡0 nonsquare",
        (_, _, _, true) => "p≡3 s≡2 square",
        _ => "p≡3 s≡2 nonsquare",
    }
}

fn c9_case_table() -> Outcome {
    let l = Limits::default();
    let mut rows = std::collections::BTreeSet::new();
    let mut cells = 0;
    for p in [3u64, 5] {
        let mut s = 1;
        while p.pow(s as u32) <= 10_000 {
            let f = make_field(p, s).map_err(|e| e.to_string())?;
            for a in [f.one(), first_nonsquare(&f)] {
                let square = a.is_square().unwrap();
                let c = curve(p, s, &[a.coeffs().to_vec()])?;
                let lp = l_polynomial(&c, s, &l).map_err(|e| e.to_string())?;
                let pred = predicted_count(&lp, 1);
                let oracle = c.count_points_oracle(s, &l).map_err(|e| e.to_string())?;
                ensure(
                    pred == BigInt::from(oracle),
                    format!("p={p} s={s} square={square}: predicted {pred}, oracle {oracle}"),
                )?;
                ensure(lp.functional_equation_holds() && is_supersingular(&lp.coeffs, p as u32, s), "L invariants")?;
                rows.insert(row_of(p as u32, s, square));
                cells += 1;
            }
            s += 1;
        }
    }
    ensure(rows.len() == 8, format!("only {} rows covered", rows.len()))?;
    Ok(format!("{cells} cells, {} case rows", rows.len()))
}

fn c10_properties() -> Outcome {
    let l = Limits::default();
    let f9 = make_field(3, 2).map_err(|e| e.to_string())?;
    let family: Vec<(&str, CurveAS)> = vec![
        ("p=3 X", monomial(3, 0)?),
        ("p=3 2X", curve(3, 1, &[vec![2]])?),
        ("p=5 X", monomial(5, 0)?),
        ("p=7 X", monomial(7, 0)?),
        ("p=3 X^3", monomial(3, 1)?),
        ("p=3 a1X^3", curve(3, 2, &[vec![0, 0], vec![0, 1]])?),
        ("p=3 X+X^3", curve(3, 1, &[vec![1], vec![1]])?),
        ("p=3 nX+X^3", curve(3, 2, &[first_nonsquare(&f9).coeffs().to_vec(), vec![1, 0]])?),
        ("p=5 X^5", monomial(5, 1)?),
        ("p=3 X^9", monomial(3, 2)?),
    ];
    let mut checks = 0;
    let mut lpolys = 0;
    for (name, c) in &family {
        let q = c.q_degree();
        let r = c.r_degree();
        let s_values: Vec<usize> = [r, q, 2 * q].into_iter().filter(|s| s % r == 0).collect();
        let opts = CheckOptions { s_values: s_values.clone(), ..Default::default() };
        for ch in run_checks(c, &opts, &l) {
            ensure(ch.status != Status::Fail, format!("{name}: {} failed: {}", ch.name, ch.detail))?;
            checks += 1;
        }
        for &s in &s_values {
            let gram = c.trace_form_gram(s).map_err(|e| e.to_string())?;
            let qc = c.count_points_quadric(s).map_err(|e| e.to_string())?;
            ensure(gram.rank() == qc.n, format!("{name} s={s}: Gram rank {} ≠ n_s {}", gram.rank(), qc.n))?;
            ensure(within_hasse_weil(c.p(), s, &c.genus(), &qc.count), "Hasse-Weil")?;
            if s % q == 0 {
                let lp = l_polynomial(c, s, &l).map_err(|e| e.to_string())?;
                ensure(lp.functional_equation_holds(), format!("{name} s={s}: functional equation"))?;
                ensure(lp.roots_on_circle(), format!("{name} s={s}: |α| ≠ p^(s/2)"))?;
                ensure(is_supersingular(&lp.coeffs, c.p(), s), format!("{name} s={s}: not supersingular"))?;
                lpolys += 1;
            }
        }
    }
    // the corrupted B must be caught
    let c = monomial(3, 1)?;
    let opts = CheckOptions { corrupt_b: true, deep: false, ..Default::default() };
    let caught = run_checks(&c, &opts, &l).iter().any(|ch| ch.name == "b_identity" && ch.status == Status::Fail);
    ensure(caught, "corrupted B_c passed the identity check")?;
    Ok(format!("{} curves, {checks} checks, {lpolys} L-polynomials", family.len()))
}

fn main() {
    let criteria: Vec<(&str, fn() -> Outcome, u64)> = vec![
        ("1 hermite quotient count", c1_hermite, 3),
        ("2 R = X^3 minimal over F_81", c2_x_cubed, 1),
        ("3 R = a1 X^3 maximal over F_9", c3_i_x_cubed, 1),
        ("4 many points p = 11, 19", c4_many_points, 30),
        ("5 group structure", c5_groups, 10),
        ("6 order of H", c6_h_order, 10),
        ("7 quotient pipeline", c7_quotient, 10),
        ("8 Kani-Rosen identity", c8_kani_rosen, 30),
        ("9 h = 0 case table", c9_case_table, 30),
        ("10 property suites", c10_properties, 120),
    ];
    let mut failed = 0;
    for (name, f, secs) in criteria {
        let t = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or(e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let dt = t.elapsed();
        let res = res.and_then(|m| {
            if dt <= Duration::from_secs(secs) {
                Ok(m)
            } else {
                Err(format!("{m}; took {dt:?}, bound {secs} s"))
            }
        });
        match res {
            Ok(m) => println!("PASS criterion {name} [{:.2?}]: {m}", dt),
            Err(m) => {
                failed += 1;
                println!("FAIL criterion {name} [{:.2?}]: {m}", dt);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
