//! JSON/CSV emission. Every numeric carries a provenance tag
//! (closed_form | certified_lo | certified_hi | estimate); BoundInterval
//! records follow the fixed {lo, hi, lo_witness, hi_witness, certified}
//! schema with infinities spelled "-inf"/"+inf".

use plurigreen::bounds::BoundInterval;
use serde_json::{json, Value};

pub fn extended(x: f64) -> Value {
    if x == f64::NEG_INFINITY {
        json!("-inf")
    } else if x == f64::INFINITY {
        json!("+inf")
    } else {
        json!(x)
    }
}

pub fn interval_json(b: &BoundInterval) -> Value {
    json!({
        "lo": extended(b.lo),
        "hi": extended(b.hi),
        "lo_witness": b.lo_witness,
        "hi_witness": b.hi_witness,
        "certified": b.certified,
    })
}

pub fn tagged(x: f64, provenance: &str) -> Value {
    json!({ "value": extended(x), "provenance": provenance })
}

/// Renders a CSV cell for an extended real.
pub fn csv_cell(x: f64) -> String {
    if x == f64::NEG_INFINITY {
        "-inf".to_string()
    } else if x == f64::INFINITY {
        "+inf".to_string()
    } else {
        format!("{x}")
    }
}

pub fn write_output(out: &Option<std::path::PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pole_interval_serializes_inf_as_strings() {
        let v = interval_json(&BoundInterval::pole());
        assert_eq!(v["lo"], "-inf");
        assert_eq!(v["hi"], "-inf");
        assert_eq!(v["certified"], true);
    }

    #[test]
    fn json_key_order_is_deterministic() {
        let v = interval_json(&BoundInterval::upper(1.5, "x", true));
        let a = serde_json::to_string(&v).unwrap();
        let b = serde_json::to_string(&interval_json(&BoundInterval::upper(1.5, "x", true))).unwrap();
        assert_eq!(a, b);
    }
}
