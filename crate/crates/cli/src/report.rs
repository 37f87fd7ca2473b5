//! JSON fragments shared by the commands. Object keys are sorted and
//! non-finite numbers serialize as `null`.

use std::io::Write;
use std::path::Path;

use framekit::frame::BoundsVerdict;
use framekit::matrix_file::{matrix_to_value, vector_to_value};
use framekit::orbit::{Verdict, VerdictReason};
use framekit::{DenseMatrix, DenseVector};
use serde_json::{json, Map, Value};

use crate::error::CliError;

pub fn matrix(m: &DenseMatrix) -> Value {
    matrix_to_value(m)
}

pub fn vector(v: &DenseVector) -> Value {
    vector_to_value(v.iter())
}

/// `{"A", "B", "not_a_frame": false}` or `{"lambda_min", "not_a_frame": true}`.
pub fn bounds(verdict: &BoundsVerdict) -> Map<String, Value> {
    let value = match verdict {
        BoundsVerdict::Frame(b) => json!({ "A": b.lower, "B": b.upper, "not_a_frame": false }),
        BoundsVerdict::NotAFrame { lambda_min } => {
            json!({ "lambda_min": lambda_min, "not_a_frame": true })
        }
    };
    match value {
        Value::Object(map) => map,
        _ => unreachable!(),
    }
}

/// `true`, `false`, or `null` when undecidable at the truncation.
pub fn verdict(v: Verdict) -> Value {
    match v {
        Verdict::Yes => Value::Bool(true),
        Verdict::No => Value::Bool(false),
        Verdict::Undecidable => Value::Null,
    }
}

pub fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Yes => "yes",
        Verdict::No => "no",
        Verdict::Undecidable => "undecidable",
    }
}

pub fn reason(r: VerdictReason) -> &'static str {
    match r {
        VerdictReason::Spans => "spans",
        VerdictReason::Rank => "rank",
        VerdictReason::DivergingBessel => "diverging_bessel",
        VerdictReason::Truncation => "truncation",
    }
}

pub fn merge(mut base: Map<String, Value>, extra: Value) -> Value {
    if let Value::Object(map) = extra {
        base.extend(map);
    }
    Value::Object(base)
}

/// Pretty JSON with a trailing newline, to `out` or stdout.
pub fn emit(report: &Value, out: Option<&Path>) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(report).expect("JSON values always serialize");
    text.push('\n');
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Output {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Output {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}
