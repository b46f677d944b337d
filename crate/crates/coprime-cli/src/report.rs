use num::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::{json, Number, Value};
use std::str::FromStr;

/// The single JSON document every invocation prints on standard output.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub parameters: Value,
    pub result: Value,
    pub runtime_ms: u64,
    pub cache_hit: bool,
    pub tool_version: String,
}

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Exact rational as {"num", "den"} with arbitrary-precision integers,
/// denominator positive, lowest terms (guaranteed by the rational type).
pub fn rational_json(r: &BigRational) -> Value {
    let number = |s: String| -> Value {
        Value::Number(Number::from_str(&s).expect("integer string is a valid JSON number"))
    };
    json!({
        "num": number(r.numer().to_string()),
        "den": number(r.denom().to_string()),
    })
}

pub fn emit(report: &RunReport) {
    println!(
        "{}",
        serde_json::to_string_pretty(report).expect("report serializes")
    );
}
