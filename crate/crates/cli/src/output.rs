use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::CliError;

pub const HEADER: &str = concat!("# dkpo-lab v", env!("CARGO_PKG_VERSION"), " fmt=1");

/// Rounds `x` to `digits` significant digits. The result prints with at most
/// that many digits under the shortest round-trip formatting used by the
/// CSV and JSON writers.
pub fn round_sig(x: f64, digits: u8) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let digits = usize::from(digits.max(1));
    format!("{:.*e}", digits - 1, x)
        .parse()
        .expect("formatted float parses")
}

/// Rounds every non-integer number inside a JSON document.
pub fn round_json(value: &mut Value, digits: u8) {
    match value {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64 number");
            if let Some(r) = serde_json::Number::from_f64(round_sig(x, digits)) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(|v| round_json(v, digits)),
        Value::Object(map) => map.values_mut().for_each(|v| round_json(v, digits)),
        _ => {}
    }
}

pub fn json_bytes<T: Serialize>(value: &T, digits: u8) -> Result<Vec<u8>, CliError> {
    let mut v = serde_json::to_value(value).map_err(|e| CliError::Io(io::Error::other(e)))?;
    round_json(&mut v, digits);
    let mut out = serde_json::to_vec_pretty(&v).map_err(|e| CliError::Io(io::Error::other(e)))?;
    out.push(b'\n');
    Ok(out)
}

/// CSV with the versioned comment line first; column names come from the
/// row type's field names. Floats must already be rounded.
pub fn csv_bytes<T: Serialize>(rows: &[T]) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    writeln!(buf, "{HEADER}")?;
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        for row in rows {
            w.serialize(row).map_err(csv_err)?;
        }
        w.flush()?;
    }
    Ok(buf)
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Io(io::Error::other(e))
}

/// Writes to `path`, or to standard output when no path is given.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, bytes)?,
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
        }
    }
    Ok(())
}
