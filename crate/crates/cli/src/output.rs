//! CSV and JSON emission.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::compute::{Column, Dim};
use crate::config::RunConfig;

/// ħc in J·m.
pub const HBAR_C: f64 = 3.161_526_77e-26;

/// C-style `%.17e`: 17 digits after the point, signed two-digit exponent.
pub fn sci(x: f64) -> String {
    let s = format!("{x:.17e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    format!("{mantissa}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    /// Index of the sweep point this row came from.
    pub point: usize,
    pub values: Vec<f64>,
}

/// JSON document: configuration, results in CSV column order and per-point diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Output {
    pub config: RunConfig,
    pub columns: Vec<String>,
    pub results: Vec<ResultRow>,
    pub diagnostics: Vec<Value>,
}

/// Converts computed columns to SI when a length unit is set.
pub fn to_si(columns: &[Column], row: &mut [f64], length_unit: Option<f64>) {
    let Some(l) = length_unit else { return };
    for (c, v) in columns.iter().zip(row.iter_mut()) {
        if let Dim::HbarC(k) = c.dim {
            *v *= HBAR_C / l.powi(k);
        }
    }
}

pub fn csv(out: &Output) -> String {
    let mut s = out.columns.join(",");
    s.push('\n');
    for r in &out.results {
        let line: Vec<String> = r.values.iter().map(|&v| sci(v)).collect();
        s.push_str(&line.join(","));
        s.push('\n');
    }
    s
}

pub fn json(out: &Output) -> String {
    let mut s = serde_json::to_string_pretty(out).expect("output serializes");
    s.push('\n');
    s
}
