//! `analyze`, `count` and `lpoly` records.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use serde_json::{json, Value};

use aszeta_core::autgrp::{subgroup_h_order, verify_structure, GroupP};
use aszeta_core::checks::{run_checks, Check, CheckOptions, Status};
use aszeta_core::curve::hasse_weil_window;
use aszeta_core::gf::embed;
use aszeta_core::zeta::{
    canonical_a_constant, classify_count, classify_with, is_supersingular, reconstruct_lpoly, LPoly, Method,
};
use aszeta_core::{make_field, CurveAS, FieldElem, Limits};

use crate::error::{CliError, CliResult};
use crate::output::{cell, elem, field, int, r_cell, u, uint, SCHEMA_VERSION};
use crate::spec::CurveSpec;

/// Extension degrees to query: the given list, or the splitting degree.
pub fn s_values(spec: &CurveSpec, curve: &CurveAS, given: &[usize]) -> CliResult<Vec<usize>> {
    if given.is_empty() {
        return Ok(vec![curve.q_degree()]);
    }
    for &s in given {
        if s == 0 || s % spec.r != 0 {
            return Err(CliError::Parse(format!("--s {s}: must be a positive multiple of r = {}", spec.r)));
        }
    }
    Ok(given.to_vec())
}

pub const ANALYSIS_REPORT_SCHEMA: &str = include_str!("../schemas/analysis_report.schema.json");

fn report_validator() -> &'static jsonschema::Validator {
    static V: OnceLock<jsonschema::Validator> = OnceLock::new();
    V.get_or_init(|| {
        let schema: Value = serde_json::from_str(ANALYSIS_REPORT_SCHEMA).expect("bundled schema parses");
        jsonschema::validator_for(&schema).expect("bundled schema compiles")
    })
}

/// Checks a report against the bundled AnalysisReport schema.
pub fn validate_report(report: &Value) -> CliResult<()> {
    report_validator()
        .validate(report)
        .map_err(|e| CliError::Invariant(format!("report violates its schema at {}: {e}", e.instance_path())))
}

pub fn method_str(m: Method) -> &'static str {
    match m {
        Method::Table => "table",
        Method::Oracle => "oracle",
    }
}

fn budget_ok<T>(r: aszeta_core::Result<T>) -> CliResult<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(e) if e.is_budget() => Ok(None),
        Err(e) => Err(e.into()),
    }
}

pub fn checks_json(checks: &[Check]) -> Value {
    Value::Array(
        checks
            .iter()
            .map(|c| json!({ "name": c.name, "status": c.status.as_str(), "detail": c.detail }))
            .collect(),
    )
}

fn lpoly_json(l: &LPoly) -> Value {
    json!({ "form": l.form.describe(), "coeffs": l.coeffs.iter().map(int).collect::<Vec<_>>() })
}

fn a_square_in(a: &FieldElem, p: u64, s: usize) -> CliResult<Option<bool>> {
    if s % a.field().degree() != 0 {
        return Ok(None);
    }
    let f = make_field(p, s)?;
    Ok(Some(embed(a, &f)?.is_square()?))
}

pub fn analyze(spec: &CurveSpec, given_s: &[usize], limits: &Limits, corrupt_b: bool) -> CliResult<Value> {
    let curve = spec.build(limits)?;
    let ss = s_values(spec, &curve, given_s)?;
    let p = curve.p();
    let h = curve.h();

    let group = GroupP::new(&curve)?;
    let extraspecial = budget_ok(verify_structure(&group, limits))?.map(|rep| rep.is_extraspecial(p));
    let ho = subgroup_h_order(&curve, limits)?;
    let a = budget_ok(canonical_a_constant(&curve, limits))?;

    let mut per_s = Vec::new();
    for &s in &ss {
        let res = classify_with(&curve, s, a.as_ref(), limits)?;
        let oracle = budget_ok(curve.count_points_oracle(s, limits))?;
        let a_square = match &a {
            Some(a) => a_square_in(a, p as u64, s)?,
            None => None,
        };
        let (lo, hi) = hasse_weil_window(p, s, &curve.genus());
        per_s.push(json!({
            "s": s,
            "method": method_str(res.method),
            "classification": res.class.as_str(),
            "n1": int(&res.n1),
            "oracle_count": oracle.map(u),
            "a_square": a_square,
            "lpoly": res.lpoly.as_ref().map(lpoly_json),
            "supersingular": res.lpoly.as_ref().map(|l| is_supersingular(&l.coeffs, p, s)),
            "hasse_weil": [int(&lo), int(&hi)],
        }));
    }

    let opts = CheckOptions { s_values: ss.clone(), corrupt_b, ..Default::default() };
    let checks = run_checks(&curve, &opts, limits);
    let ok = checks.iter().all(|c| c.status != Status::Fail);
    let p_order = BigUint::from(p).pow(2 * h as u32 + 1);
    Ok(json!({
        "schema_version": SCHEMA_VERSION,
        "kind": "analysis",
        "curve": spec.to_json(),
        "base_field": field(curve.base()),
        "splitting_field": field(curve.splitting_field()),
        "genus": uint(&curve.genus()),
        "h": h,
        "q_degree": curve.q_degree(),
        "w_dimension": curve.w_basis().len(),
        "group": {
            "p_order": uint(&p_order),
            "h_order": uint(&ho.formula),
            "h_order_enumerated": ho.enumerated.map(u),
            "extraspecial": extraspecial,
            "special_automorphisms": curve.has_special_automorphisms(),
        },
        "a_constant": a.as_ref().map(elem),
        "per_s": per_s,
        "checks": checks_json(&checks),
        "ok": ok,
    }))
}

pub const ANALYZE_CSV: &[&str] = &[
    "name", "p", "r", "R", "genus", "h", "q_degree", "s", "method", "classification", "n1", "oracle_count",
    "a_square", "lform", "lpoly", "supersingular", "ok",
];

pub fn analyze_rows(report: &Value) -> Vec<Vec<String>> {
    let c = &report["curve"];
    report["per_s"]
        .as_array()
        .map(|v| v.as_slice())
        .unwrap_or_default()
        .iter()
        .map(|row| {
            vec![
                cell(&c["name"]),
                cell(&c["p"]),
                cell(&c["r"]),
                r_cell(c),
                cell(&report["genus"]),
                cell(&report["h"]),
                cell(&report["q_degree"]),
                cell(&row["s"]),
                cell(&row["method"]),
                cell(&row["classification"]),
                cell(&row["n1"]),
                cell(&row["oracle_count"]),
                cell(&row["a_square"]),
                cell(&row["lpoly"]["form"]),
                cell(&row["lpoly"]["coeffs"]),
                cell(&row["supersingular"]),
                cell(&report["ok"]),
            ]
        })
        .collect()
}

pub fn count(spec: &CurveSpec, given_s: &[usize], limits: &Limits) -> CliResult<Vec<Value>> {
    let curve = spec.build(limits)?;
    let ss = s_values(spec, &curve, given_s)?;
    let mut out = Vec::new();
    for s in ss {
        let n = curve.count_points_oracle(s, limits)?;
        let (lo, hi) = hasse_weil_window(curve.p(), s, &curve.genus());
        out.push(json!({
            "schema_version": SCHEMA_VERSION,
            "kind": "count",
            "curve": spec.to_json(),
            "s": s,
            "n": u(n),
            "hasse_weil": [int(&lo), int(&hi)],
        }));
    }
    Ok(out)
}

pub const COUNT_CSV: &[&str] = &["p", "r", "R", "s", "n", "hasse_weil_low", "hasse_weil_high"];

pub fn count_row(rec: &Value) -> Vec<String> {
    vec![
        cell(&rec["curve"]["p"]),
        cell(&rec["curve"]["r"]),
        r_cell(&rec["curve"]),
        cell(&rec["s"]),
        cell(&rec["n"]),
        cell(&rec["hasse_weil"][0]),
        cell(&rec["hasse_weil"][1]),
    ]
}

/// L-polynomials: from the case table when F_{p^s} ⊇ F_q, else from oracle counts by Newton's identities.
pub fn lpoly(spec: &CurveSpec, given_s: &[usize], limits: &Limits) -> CliResult<Vec<Value>> {
    let curve = spec.build(limits)?;
    let ss = s_values(spec, &curve, given_s)?;
    let p = curve.p();
    let a = if ss.iter().any(|s| s % curve.q_degree() == 0) { Some(canonical_a_constant(&curve, limits)?) } else { None };
    let mut out = Vec::new();
    for s in ss {
        let (method, form, coeffs) = if s % curve.q_degree() == 0 {
            let res = classify_with(&curve, s, a.as_ref(), limits)?;
            let l = res.lpoly.expect("table route");
            ("table", Some(l.form.describe()), l.coeffs)
        } else {
            let coeffs = reconstruct_lpoly(&curve, s, limits)?;
            let form = LPoly::recognize(p, s, &coeffs).map(|l| l.form.describe());
            ("newton", form, coeffs)
        };
        let n1: BigInt = BigInt::from(p).pow(s as u32) + 1 + coeffs.get(1).cloned().unwrap_or_default();
        out.push(json!({
            "schema_version": SCHEMA_VERSION,
            "kind": "lpoly",
            "curve": spec.to_json(),
            "s": s,
            "method": method,
            "form": form,
            "coeffs": coeffs.iter().map(int).collect::<Vec<_>>(),
            "n1": int(&n1),
            "classification": classify_count(p, s, &curve.genus(), &n1).as_str(),
            "supersingular": is_supersingular(&coeffs, p, s),
        }));
    }
    Ok(out)
}

pub const LPOLY_CSV: &[&str] = &["p", "r", "R", "s", "method", "form", "coeffs", "n1", "classification", "supersingular"];

pub fn lpoly_row(rec: &Value) -> Vec<String> {
    vec![
        cell(&rec["curve"]["p"]),
        cell(&rec["curve"]["r"]),
        r_cell(&rec["curve"]),
        cell(&rec["s"]),
        cell(&rec["method"]),
        cell(&rec["form"]),
        cell(&rec["coeffs"]),
        cell(&rec["n1"]),
        cell(&rec["classification"]),
        cell(&rec["supersingular"]),
    ]
}
