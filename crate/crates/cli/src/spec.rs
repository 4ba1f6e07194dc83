//! CurveSpec input records.

use std::io::Read;
use std::sync::OnceLock;

use serde_json::{json, Value};

use aszeta_core::{make_curve, CurveAS, Limits};

use crate::error::{CliError, CliResult};

pub const CURVE_SPEC_SCHEMA: &str = include_str!("../schemas/curve_spec.schema.json");

fn validator() -> &'static jsonschema::Validator {
    static V: OnceLock<jsonschema::Validator> = OnceLock::new();
    V.get_or_init(|| {
        let schema: Value = serde_json::from_str(CURVE_SPEC_SCHEMA).expect("bundled schema parses");
        jsonschema::validator_for(&schema).expect("bundled schema compiles")
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveSpec {
    pub name: Option<String>,
    pub p: u64,
    pub r: usize,
    /// Little-endian coordinate vectors of length r.
    pub coeffs: Vec<Vec<u32>>,
}

/// `-` reads stdin, text starting with `{` is inline JSON, anything else is a path.
pub fn read_input(arg: &str) -> CliResult<String> {
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        return Ok(arg.to_string());
    }
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    std::fs::read_to_string(arg).map_err(|e| CliError::Io(format!("{arg}: {e}")))
}

pub fn parse_json(text: &str) -> CliResult<Value> {
    serde_json::from_str(text)
        .map_err(|e| CliError::Parse(format!("line {} column {}: {e}", e.line(), e.column())))
}

impl CurveSpec {
    pub fn from_text(text: &str) -> CliResult<CurveSpec> {
        CurveSpec::from_value(&parse_json(text)?)
    }

    pub fn from_value(v: &Value) -> CliResult<CurveSpec> {
        if let Err(e) = validator().validate(v) {
            let path = e.instance_path().to_string();
            let path = if path.is_empty() { "/".to_string() } else { path };
            return Err(CliError::Parse(format!("at {path}: {e}")));
        }
        let p = v["p"].as_u64().ok_or_else(|| CliError::Parse("at /p: not a small integer".into()))?;
        let r = v["r"].as_u64().unwrap() as usize;
        let name = v.get("name").and_then(Value::as_str).map(str::to_string);
        let mut coeffs = Vec::new();
        for (i, c) in v["R"].as_array().unwrap().iter().enumerate() {
            let coords = match c {
                Value::Number(n) => {
                    let k = n.as_i64().ok_or_else(|| CliError::Parse(format!("at /R/{i}: integer out of range")))?;
                    let mut out = vec![0u32; r];
                    out[0] = k.rem_euclid(p as i64) as u32;
                    out
                }
                Value::Array(xs) => {
                    if xs.len() != r {
                        return Err(CliError::Parse(format!("at /R/{i}: expected {r} coordinates, got {}", xs.len())));
                    }
                    let mut out = Vec::with_capacity(r);
                    for (j, x) in xs.iter().enumerate() {
                        match x.as_u64() {
                            Some(k) if k < p => out.push(k as u32),
                            _ => return Err(CliError::Parse(format!("at /R/{i}/{j}: coordinate must lie in 0..{p}"))),
                        }
                    }
                    out
                }
                _ => unreachable!("schema admits integers and arrays only"),
            };
            coeffs.push(coords);
        }
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.iter().all(|&x| x == 0)) {
            coeffs.pop();
        }
        if coeffs.iter().all(|c| c.iter().all(|&x| x == 0)) {
            return Err(CliError::Parse("at /R: R must be nonzero".into()));
        }
        Ok(CurveSpec { name, p, r, coeffs })
    }

    pub fn build(&self, limits: &Limits) -> CliResult<CurveAS> {
        make_curve(self.p, self.r, &self.coeffs, limits).map_err(CliError::from)
    }

    /// Normalized echo: every coefficient as a coordinate vector.
    pub fn to_json(&self) -> Value {
        let mut v = json!({ "p": self.p, "r": self.r, "R": self.coeffs });
        if let Some(n) = &self.name {
            v["name"] = json!(n);
        }
        v
    }

    /// Compact text form for CSV cells: coefficients separated by `;`, coordinates by spaces.
    pub fn r_text(&self) -> String {
        self.coeffs
            .iter()
            .map(|c| c.iter().map(u32::to_string).collect::<Vec<_>>().join(" "))
            .collect::<Vec<_>>()
            .join(";")
    }
}
