//! Output formatting: exact "p/q" strings by default, optional rounded
//! decimal display, CSV tables, and JSON payloads with run metadata.

use carrymix::exact::{Matrix, Rat};
use num_bigint::{BigInt, Sign};
use serde_json::{json, Value};

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Render one rational: exact by default, rounded to `decimal` digits when
/// requested. Rounding is done in integer arithmetic (half away from
/// zero), not through floats.
pub fn fmt_rat(x: &Rat, decimal: Option<u32>) -> String {
    match decimal {
        None => x.to_string(),
        Some(digits) => {
            let scale = BigInt::from(10u32).pow(digits);
            let rounded = (x * Rat::from_integer(scale)).round().to_integer();
            let negative = rounded.sign() == Sign::Minus;
            let magnitude = rounded.magnitude().to_string();
            let padded = format!("{:0>width$}", magnitude, width = digits as usize + 1);
            let split = padded.len() - digits as usize;
            let mut out = String::new();
            if negative {
                out.push('-');
            }
            out.push_str(&padded[..split]);
            if digits > 0 {
                out.push('.');
                out.push_str(&padded[split..]);
            }
            out
        }
    }
}

pub fn matrix_rows(m: &Matrix, decimal: Option<u32>) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|r| m.row(r).iter().map(|x| fmt_rat(x, decimal)).collect())
        .collect()
}

pub fn vector_strings(v: &[Rat], decimal: Option<u32>) -> Vec<String> {
    v.iter().map(|x| fmt_rat(x, decimal)).collect()
}

/// CSV table: optional header line, then comma-joined rows.
pub fn print_csv(header: Option<&str>, rows: &[Vec<String>]) {
    if let Some(h) = header {
        println!("{h}");
    }
    for row in rows {
        println!("{}", row.join(","));
    }
}

/// JSON payload with the standard metadata envelope.
pub fn print_json(command: &str, params: Value, data: Value) {
    let mut object = serde_json::Map::new();
    object.insert("command".into(), json!(command));
    object.insert("params".into(), params);
    object.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    if let Value::Object(extra) = data {
        for (k, v) in extra {
            object.insert(k, v);
        }
    }
    println!(
        "{}",
        serde_json::to_string_pretty(&Value::Object(object)).expect("valid json")
    );
}
