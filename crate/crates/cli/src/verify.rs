//! Cross-check suites: a single curve, or a named preset.

use clap::ValueEnum;
use num_bigint::{BigInt, BigUint};
use serde_json::{json, Value};

use aszeta_core::autgrp::subgroup_h_order;
use aszeta_core::checks::{run_checks, Check, CheckOptions, Status};
use aszeta_core::zeta::{classify, kani_rosen_check, Classification};
use aszeta_core::{make_curve, make_field, CurveAS, FieldDesc, FieldElem, Limits};

use crate::error::CliResult;
use crate::output::{cell, SCHEMA_VERSION};
use crate::spec::CurveSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    PaperExamples,
    KaniRosen,
}

impl Preset {
    pub fn as_str(self) -> &'static str {
        match self {
            Preset::PaperExamples => "paper-examples",
            Preset::KaniRosen => "kani-rosen",
        }
    }
}

struct Row {
    curve: String,
    check: Check,
}

fn rows(curve: &str, checks: Vec<Check>) -> Vec<Row> {
    checks.into_iter().map(|check| Row { curve: curve.to_string(), check }).collect()
}

fn monomial(p: u64, i: usize, limits: &Limits) -> CliResult<CurveAS> {
    let mut c = vec![vec![0]; i + 1];
    c[i] = vec![1];
    Ok(make_curve(p, 1, &c, limits)?)
}

fn first_nonsquare(f: &FieldDesc, limits: &Limits) -> CliResult<FieldElem> {
    for x in f.enumerate(limits.budget)? {
        if !x.is_zero() && !x.is_square()? {
            return Ok(x);
        }
    }
    unreachable!("odd characteristic has nonsquares")
}

fn expect_count(curve: &CurveAS, s: usize, want: u64, limits: &Limits) -> Check {
    let name = format!("oracle_count_s{s}");
    match curve.count_points_oracle(s, limits) {
        Ok(n) => Check::from_bool(&name, n == want, format!("N = {n}, expected {want}")),
        Err(e) => Check::from_err(&name, &e),
    }
}

fn expect_class(curve: &CurveAS, s: usize, class: Classification, n1: u64, limits: &Limits) -> Check {
    let name = format!("classification_s{s}");
    match classify(curve, s, limits) {
        Ok(res) => Check::from_bool(
            &name,
            res.class == class && res.n1 == BigInt::from(n1),
            format!("{} with N = {}, expected {} with N = {n1}", res.class.as_str(), res.n1, class.as_str()),
        ),
        Err(e) => Check::from_err(&name, &e),
    }
}

fn h_order_check(curve: &CurveAS, limits: &Limits) -> Check {
    match subgroup_h_order(curve, limits) {
        Ok(ho) => match ho.enumerated {
            Some(n) => Check::from_bool(
                "h_order_enumerated",
                BigUint::from(n) == ho.formula,
                format!("enumerated {n}, formula {}", ho.formula),
            ),
            None => Check::new("h_order_enumerated", Status::Skipped, "enumeration over budget"),
        },
        Err(e) => Check::from_err("h_order_enumerated", &e),
    }
}

fn suite(curve: &CurveAS, s: &[usize], limits: &Limits) -> Vec<Check> {
    let opts = CheckOptions { s_values: s.to_vec(), ..Default::default() };
    run_checks(curve, &opts, limits)
}

fn paper_examples(limits: &Limits) -> CliResult<Vec<Row>> {
    let mut out = Vec::new();
    for p in [3u64, 5, 7] {
        let c = monomial(p, 1, limits)?;
        let name = format!("p={p} X^{p}");
        out.extend(rows(&name, vec![expect_count(&c, 2, 1 + p, limits)]));
        out.extend(rows(&name, suite(&c, &[], limits)));
    }

    let c = monomial(3, 1, limits)?;
    out.extend(rows("p=3 X^3", vec![expect_class(&c, 4, Classification::Minimal, 28, limits)]));
    out.extend(rows("p=3 X^3", vec![expect_count(&c, 1, 4, limits), expect_count(&c, 4, 28, limits)]));

    let c = make_curve(3, 2, &[vec![0, 0], vec![0, 1]], limits)?;
    out.extend(rows("p=3 a1X^3", vec![expect_class(&c, 2, Classification::Maximal, 28, limits)]));
    out.extend(rows("p=3 a1X^3", vec![expect_count(&c, 2, 28, limits)]));
    out.extend(rows("p=3 a1X^3", suite(&c, &[2, 4], limits)));

    for (p, n1) in [(11u64, 15852u64), (19, 136820)] {
        let f = make_field(p, 4)?;
        let a = first_nonsquare(&f, limits)?;
        let c = make_curve(p, 4, &[a.coeffs().to_vec()], limits)?;
        let name = format!("p={p} r=4 nX");
        out.extend(rows(&name, vec![expect_class(&c, 4, Classification::Maximal, n1, limits)]));
        out.extend(rows(&name, vec![expect_count(&c, 4, n1, limits)]));
    }

    out.extend(rows("p=3 X^9", suite(&monomial(3, 2, limits)?, &[], limits)));
    out.extend(rows("p=5 X^5", suite(&monomial(5, 1, limits)?, &[], limits)));

    for p in [3u64, 5] {
        for (label, coeffs) in [("X", vec![vec![1]]), ("X^p", vec![vec![0], vec![1]]), ("X+X^p", vec![vec![1], vec![1]])] {
            let c = make_curve(p, 1, &coeffs, limits)?;
            out.extend(rows(&format!("p={p} {label}"), vec![h_order_check(&c, limits)]));
        }
    }
    Ok(out)
}

fn kani_rosen(limits: &Limits) -> CliResult<Vec<Row>> {
    let mut out = Vec::new();
    let curves = [("p=3 X^3", monomial(3, 1, limits)?), ("p=3 a1X^3", make_curve(3, 2, &[vec![0, 0], vec![0, 1]], limits)?)];
    for (name, c) in curves {
        let check = match kani_rosen_check(&c, limits) {
            Ok(kr) => Check::from_bool(
                "kani_rosen",
                kr.pass && kr.lhs_oracle == kr.lhs_table && kr.quotient_oracle == kr.quotient_table,
                format!("over F_{}^{}, exponent {}", c.p(), kr.s, kr.exponent),
            ),
            Err(e) => Check::from_err("kani_rosen", &e),
        };
        out.push(Row { curve: name.to_string(), check });
    }
    Ok(out)
}

fn record(target: Value, rows: &[Row]) -> Value {
    let results: Vec<Value> = rows
        .iter()
        .map(|r| json!({ "curve": r.curve, "check": r.check.name, "status": r.check.status.as_str(), "detail": r.check.detail }))
        .collect();
    let failed: Vec<&Value> = results.iter().filter(|r| r["status"] == "fail").collect();
    json!({
        "schema_version": SCHEMA_VERSION,
        "kind": "verify",
        "target": target,
        "total": results.len(),
        "failed": failed.len(),
        "first_failure": failed.first().cloned(),
        "ok": failed.is_empty(),
        "results": results,
    })
}

pub fn verify_preset(preset: Preset, limits: &Limits) -> CliResult<Value> {
    let rows = match preset {
        Preset::PaperExamples => paper_examples(limits)?,
        Preset::KaniRosen => kani_rosen(limits)?,
    };
    Ok(record(json!({ "preset": preset.as_str() }), &rows))
}

pub fn verify_spec(spec: &CurveSpec, s: &[usize], corrupt_b: bool, limits: &Limits) -> CliResult<Value> {
    let curve = spec.build(limits)?;
    let opts = CheckOptions { s_values: s.to_vec(), corrupt_b, ..Default::default() };
    let label = spec.name.clone().unwrap_or_else(|| format!("p={} r={} R={}", spec.p, spec.r, spec.r_text()));
    let rows = rows(&label, run_checks(&curve, &opts, limits));
    Ok(record(json!({ "curve": spec.to_json() }), &rows))
}

pub const VERIFY_CSV: &[&str] = &["curve", "check", "status", "detail"];

pub fn verify_rows(rec: &Value) -> Vec<Vec<String>> {
    rec["results"]
        .as_array()
        .map(|v| v.as_slice())
        .unwrap_or_default()
        .iter()
        .map(|r| vec![cell(&r["curve"]), cell(&r["check"]), cell(&r["status"]), cell(&r["detail"])])
        .collect()
}
