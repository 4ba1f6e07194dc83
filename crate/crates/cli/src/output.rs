//! Exact integers in JSON, and CSV projections of records.

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use aszeta_core::{FieldDesc, FieldElem};

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u64 = 1;
const SAFE: u64 = 1 << 53;

/// A JSON number when |x| ≤ 2^53, otherwise a decimal string.
pub fn int(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) if v.unsigned_abs() <= SAFE => json!(v),
        _ => json!(x.to_string()),
    }
}

pub fn uint(x: &BigUint) -> Value {
    int(&BigInt::from(x.clone()))
}

pub fn u(x: u64) -> Value {
    int(&BigInt::from(x))
}

pub fn elem(x: &FieldElem) -> Value {
    json!(x.coeffs())
}

pub fn field(f: &FieldDesc) -> Value {
    json!({ "p": f.p(), "degree": f.degree(), "modulus": f.modulus() })
}

/// Text of a JSON scalar for a CSV cell; arrays are space-separated.
pub fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(xs) => xs.iter().map(cell).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

/// `R` of a curve echo: coefficients separated by `;`, coordinates by spaces.
pub fn r_cell(curve: &Value) -> String {
    curve["R"].as_array().map(|cs| cs.iter().map(cell).collect::<Vec<_>>().join(";")).unwrap_or_default()
}

pub fn write_csv(header: &[&str], rows: &[Vec<String>]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(|e| CliError::Io(e.to_string()))?;
    for row in rows {
        w.write_record(row).map_err(|e| CliError::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
