//! Exhaustive search over additive R of a fixed degree.

use clap::ValueEnum;
use rayon::prelude::*;
use serde_json::{json, Value};

use aszeta_core::zeta::{canonical_a_constant, classify_with, twist_equivalent, Classification};
use aszeta_core::{make_field, FieldElem, Limits};

use crate::error::{CliError, CliResult};
use crate::output::{cell, elem, int, r_cell, uint, SCHEMA_VERSION};
use crate::report::method_str;
use crate::spec::CurveSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Filter {
    Maximal,
    Minimal,
    All,
}

impl Filter {
    fn admits(self, c: Classification) -> bool {
        match self {
            Filter::Maximal => c == Classification::Maximal,
            Filter::Minimal => c == Classification::Minimal,
            Filter::All => true,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Filter::Maximal => "maximal",
            Filter::Minimal => "minimal",
            Filter::All => "all",
        }
    }
}

pub struct SearchParams {
    pub p: u64,
    pub r: usize,
    pub h: usize,
    pub s: Vec<usize>,
    pub filter: Filter,
}

struct Found {
    a: Option<FieldElem>,
    records: Vec<Value>,
}

fn candidate_count(p: u64, r: usize, h: usize) -> Option<u128> {
    let q = (p as u128).checked_pow(r as u32)?;
    q.checked_pow(h as u32)?.checked_mul(q - 1)
}

/// Coefficient tuples (a_0, …, a_h), a_h ≠ 0, in lexicographic index order with a_0 varying fastest.
fn candidates(p: u64, r: usize, h: usize, n: u128) -> CliResult<Vec<Vec<Vec<u32>>>> {
    let f = make_field(p, r)?;
    let q = f.order().expect("checked above");
    let mut out = Vec::with_capacity(n as usize);
    for idx in 0..n {
        let mut rest = idx;
        let mut coeffs = Vec::with_capacity(h + 1);
        for _ in 0..h {
            coeffs.push(f.element_at(rest % q).coeffs().to_vec());
            rest /= q;
        }
        coeffs.push(f.element_at(1 + rest).coeffs().to_vec());
        out.push(coeffs);
    }
    Ok(out)
}

fn analyze_one(spec: &CurveSpec, params: &SearchParams, limits: &Limits) -> CliResult<Found> {
    let curve = spec.build(limits)?;
    let a = match canonical_a_constant(&curve, limits) {
        Ok(a) => Some(a),
        Err(e) if e.is_budget() => None,
        Err(e) => return Err(e.into()),
    };
    let ss = if params.s.is_empty() { vec![curve.q_degree()] } else { params.s.clone() };
    let mut records = Vec::new();
    for s in ss {
        let res = classify_with(&curve, s, a.as_ref(), limits)?;
        if !params.filter.admits(res.class) {
            continue;
        }
        records.push(json!({
            "schema_version": SCHEMA_VERSION,
            "kind": "search",
            "curve": spec.to_json(),
            "genus": uint(&curve.genus()),
            "h": curve.h(),
            "q_degree": curve.q_degree(),
            "s": s,
            "classification": res.class.as_str(),
            "n1": int(&res.n1),
            "method": method_str(res.method),
            "lform": res.lpoly.as_ref().map(|l| l.form.describe()),
            "a_constant": a.as_ref().map(elem),
        }));
    }
    Ok(Found { a, records })
}

pub fn search(params: &SearchParams, limits: &Limits) -> CliResult<Vec<Value>> {
    for &s in &params.s {
        if s == 0 || s % params.r != 0 {
            return Err(CliError::Parse(format!("--s {s}: must be a positive multiple of r = {}", params.r)));
        }
    }
    let n = candidate_count(params.p, params.r, params.h)
        .filter(|&n| n <= limits.budget as u128)
        .ok_or_else(|| {
            CliError::Budget(format!(
                "search space of (p^{})^{} (p^{} - 1) candidates exceeds the budget {}",
                params.r, params.h, params.r, limits.budget
            ))
        })?;
    let specs: Vec<CurveSpec> = candidates(params.p, params.r, params.h, n)?
        .into_iter()
        .map(|coeffs| CurveSpec { name: None, p: params.p, r: params.r, coeffs })
        .collect();
    let found: Vec<Found> = specs
        .par_iter()
        .map(|spec| analyze_one(spec, params, limits))
        .collect::<CliResult<_>>()?;

    // For h = 0 every curve is a twist y^p - y = a x^2, so keep one per square class of a.
    let mut kept: Vec<FieldElem> = Vec::new();
    let mut out = Vec::new();
    for f in found {
        if params.h == 0 {
            if let Some(a) = &f.a {
                let mut seen = false;
                for k in &kept {
                    if twist_equivalent(k, a)? {
                        seen = true;
                        break;
                    }
                }
                if seen {
                    continue;
                }
                kept.push(a.clone());
            }
        }
        out.extend(f.records);
    }
    Ok(out)
}

pub const SEARCH_CSV: &[&str] =
    &["p", "r", "R", "genus", "h", "q_degree", "s", "classification", "n1", "method", "lform", "a_constant"];

pub fn search_row(rec: &Value) -> Vec<String> {
    vec![
        cell(&rec["curve"]["p"]),
        cell(&rec["curve"]["r"]),
        r_cell(&rec["curve"]),
        cell(&rec["genus"]),
        cell(&rec["h"]),
        cell(&rec["q_degree"]),
        cell(&rec["s"]),
        cell(&rec["classification"]),
        cell(&rec["n1"]),
        cell(&rec["method"]),
        cell(&rec["lform"]),
        cell(&rec["a_constant"]),
    ]
}
