//! Append-only JSON-lines results cache.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::error::CliResult;
use crate::output::SCHEMA_VERSION;

/// Records of a finished command and the exit status they imply.
#[derive(Clone, Debug, PartialEq)]
pub struct Entry {
    pub records: Vec<Value>,
    pub exit: i32,
}

/// Objects with sorted keys, so equal requests hash equally.
fn canonical(v: &Value) -> Value {
    match v {
        Value::Object(m) => {
            let mut keys: Vec<&String> = m.keys().collect();
            keys.sort();
            let mut out = Map::new();
            for k in keys {
                out.insert(k.clone(), canonical(&m[k]));
            }
            Value::Object(out)
        }
        Value::Array(xs) => Value::Array(xs.iter().map(canonical).collect()),
        other => other.clone(),
    }
}

pub fn key(command: &str, args: &Value) -> String {
    let req = canonical(&json!({ "command": command, "args": args, "schema_version": SCHEMA_VERSION }));
    hex::encode(Sha256::digest(req.to_string().as_bytes()))
}

pub struct Cache {
    path: PathBuf,
}

impl Cache {
    pub fn new(path: &Path) -> Cache {
        Cache { path: path.to_path_buf() }
    }

    /// Latest entry for `key`; unreadable lines are ignored.
    pub fn get(&self, key: &str) -> Option<Entry> {
        let text = fs::read_to_string(&self.path).ok()?;
        text.lines()
            .filter_map(|l| serde_json::from_str::<Value>(l).ok())
            .filter(|v| v["key"] == key && v["schema_version"] == SCHEMA_VERSION)
            .last()
            .and_then(|v| {
                let records = v["value"]["records"].as_array()?.clone();
                let exit = v["value"]["exit"].as_i64()? as i32;
                Some(Entry { records, exit })
            })
    }

    /// Appends one line by rewriting to a sibling temp file and renaming over the original.
    pub fn put(&self, key: &str, entry: &Entry) -> CliResult<()> {
        let mut text = fs::read_to_string(&self.path).unwrap_or_default();
        if !text.is_empty() && !text.ends_with('\n') {
            text.push('\n');
        }
        let line = json!({
            "key": key,
            "schema_version": SCHEMA_VERSION,
            "value": { "records": entry.records, "exit": entry.exit },
        });
        text.push_str(&line.to_string());
        text.push('\n');
        let dir = self.path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
        let name = self.path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(text.as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &self.path)?;
        Ok(())
    }
}
