//! Reading curve records from report files and parsing command arguments.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;
use serde_json::Value;
use ssp_core::families::QuadricCase;

use crate::CliError;

/// One curve as it appears in an enumeration report or curve file.
#[derive(Clone, Debug, Deserialize)]
pub struct RawCurve {
    pub case: QuadricCase,
    pub p: u32,
    pub cubic: String,
}

/// Accepts an enumeration report, `{"curves": [...]}`, or a bare array of
/// records. Each record is decoded on its own so one bad entry does not
/// hide the rest.
pub fn read_records(path: &Path) -> Result<Vec<Result<RawCurve, String>>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let list = match v {
        Value::Array(a) => a,
        Value::Object(mut o) => match o.remove("curves") {
            Some(Value::Array(a)) => a,
            _ => {
                return Err(CliError::Config(format!(
                    "{}: expected a \"curves\" array",
                    path.display()
                )))
            }
        },
        _ => {
            return Err(CliError::Config(format!(
                "{}: expected a report object or an array of curves",
                path.display()
            )))
        }
    };
    Ok(list
        .into_iter()
        .map(|r| serde_json::from_value::<RawCurve>(r).map_err(|e| e.to_string()))
        .collect())
}

/// Parses `k=v,k=v` into slot values.
pub fn parse_slice(s: &str) -> Result<BTreeMap<String, u32>, CliError> {
    let mut out = BTreeMap::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("slice entry {part:?} is not key=value")))?;
        let v: u32 = v
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("slice value {v:?} is not a residue")))?;
        if out.insert(k.trim().to_string(), v).is_some() {
            return Err(CliError::Config(format!("slot {k} pinned twice")));
        }
    }
    Ok(out)
}

pub fn write_json<T: serde::Serialize>(value: &T, out: Option<&Path>) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Internal(e.to_string()))?;
    text.push('\n');
    match out {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CliError::Config(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
