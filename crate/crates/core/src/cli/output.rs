//! Fixed-format number output shared by the CSV and JSON writers.

use std::io::{self, Write};

use serde_json::Value;

/// 17 significant digits in scientific notation; round-trips any `f64`.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        // -0.0 prints as 0
        let x = x + 0.0;
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

/// Writes `value` as compact JSON, floats via [`fmt_f64`], with a trailing LF.
pub fn write_json(out: &mut dyn Write, value: &Value) -> io::Result<()> {
    emit(out, value)?;
    out.write_all(b"\n")
}

fn emit(out: &mut dyn Write, value: &Value) -> io::Result<()> {
    match value {
        Value::Null => out.write_all(b"null"),
        Value::Bool(b) => write!(out, "{b}"),
        Value::Number(n) => {
            if let Some(u) = n.as_u64() {
                write!(out, "{u}")
            } else if let Some(i) = n.as_i64() {
                write!(out, "{i}")
            } else {
                let f = n.as_f64().unwrap_or(f64::NAN);
                if f.is_finite() {
                    out.write_all(fmt_f64(f).as_bytes())
                } else {
                    out.write_all(b"null")
                }
            }
        }
        Value::String(s) => out.write_all(serde_json::to_string(s)?.as_bytes()),
        Value::Array(items) => {
            out.write_all(b"[")?;
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.write_all(b",")?;
                }
                emit(out, item)?;
            }
            out.write_all(b"]")
        }
        Value::Object(map) => {
            out.write_all(b"{")?;
            for (i, (k, v)) in map.iter().enumerate() {
                if i > 0 {
                    out.write_all(b",")?;
                }
                out.write_all(serde_json::to_string(k)?.as_bytes())?;
                out.write_all(b":")?;
                emit(out, v)?;
            }
            out.write_all(b"}")
        }
    }
}

/// Wraps a serialisable report in `{"schema_version": 1, ...}`.
pub fn with_schema<T: serde::Serialize>(report: &T) -> io::Result<Value> {
    let mut v = serde_json::to_value(report).map_err(io::Error::other)?;
    let mut obj = serde_json::Map::new();
    obj.insert("schema_version".into(), Value::from(1u64));
    match v.take() {
        Value::Object(fields) => obj.extend(fields),
        other => {
            obj.insert("report".into(), other);
        }
    }
    Ok(Value::Object(obj))
}
