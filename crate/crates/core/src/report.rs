//! Check reports, parameter maps and the fixed number format used in every output file.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde_json::{Map, Number, Value};

use crate::error::{Error, Result};

/// Format like C's `%.12g`: 12 significant digits, trailing zeros removed.
pub fn fmt_sig12(v: f64) -> String {
    if v.is_nan() {
        return "nan".to_string();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    if v == 0.0 {
        return if v.is_sign_negative() { "-0" } else { "0" }.to_string();
    }
    let sci = format!("{:.11e}", v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..12).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (11 - exp) as usize;
        trim_zeros(&format!("{:.*}", decimals, v)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// JSON number in the fixed 12-digit format; non-finite values become null.
pub fn json_number(v: f64) -> Value {
    if !v.is_finite() {
        return Value::Null;
    }
    let text = fmt_sig12(v);
    match Number::from_str(&text) {
        Ok(n) => Value::Number(n),
        Err(_) => Value::Null,
    }
}

/// Named numeric parameters for identity checks. Each key maps to a list;
/// scalars are one-element lists.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Params {
    values: BTreeMap<String, Vec<f64>>,
}

impl Params {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parse `k=v,k2=a:b:c`, where `:` separates list elements.
    pub fn parse(text: &str) -> Result<Self> {
        let mut params = Self::new();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::Usage(format!("parameter '{item}' is not key=value")))?;
            let list = value
                .split(':')
                .map(|v| {
                    v.trim().parse::<f64>().map_err(|_| {
                        Error::Usage(format!("parameter '{key}' has non-numeric value '{v}'"))
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            params.values.insert(key.trim().to_string(), list);
        }
        Ok(params)
    }

    pub fn with(mut self, key: &str, values: &[f64]) -> Self {
        self.values.insert(key.to_string(), values.to_vec());
        self
    }

    pub fn set(&mut self, key: &str, values: &[f64]) {
        self.values.insert(key.to_string(), values.to_vec());
    }

    pub fn contains(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    pub fn list_or(&self, key: &str, default: &[f64]) -> Vec<f64> {
        self.values
            .get(key)
            .cloned()
            .unwrap_or_else(|| default.to_vec())
    }

    pub fn scalar_or(&self, key: &str, default: f64) -> Result<f64> {
        match self.values.get(key) {
            None => Ok(default),
            Some(v) if v.len() == 1 => Ok(v[0]),
            Some(_) => Err(Error::Usage(format!("parameter '{key}' takes a single value"))),
        }
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.values.keys().map(String::as_str)
    }
}

/// One compared quantity.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckEntry {
    pub label: String,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    /// `None` for report-only comparisons.
    pub pass: Option<bool>,
}

/// How an entry is judged against the report tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Judge {
    Absolute,
    Relative,
    /// Passes when lhs ≤ rhs.
    AtMost,
    ReportOnly,
}

/// Result of an identity check: both sides, discrepancies and a verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub identity: String,
    /// False for comparisons that are reported but never asserted.
    pub assertable: bool,
    pub tolerance: f64,
    pub entries: Vec<CheckEntry>,
    /// Extra named magnitudes, e.g. error-term sizes printed for context.
    pub scales: Vec<(String, f64)>,
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn new(identity: &str, tolerance: f64, assertable: bool) -> Self {
        Self {
            identity: identity.to_string(),
            assertable,
            tolerance,
            entries: Vec::new(),
            scales: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, label: impl Into<String>, lhs: f64, rhs: f64, judge: Judge) {
        let tol = self.tolerance;
        self.push_with_tolerance(label, lhs, rhs, judge, tol);
    }

    /// Like [`push`](Self::push) but judged against `tol` instead of the report tolerance.
    pub fn push_with_tolerance(
        &mut self,
        label: impl Into<String>,
        lhs: f64,
        rhs: f64,
        judge: Judge,
        tol: f64,
    ) {
        let abs_err = (lhs - rhs).abs();
        let denom = lhs.abs().max(rhs.abs());
        let rel_err = if denom > 0.0 { abs_err / denom } else { 0.0 };
        let pass = match judge {
            Judge::Absolute => Some(abs_err <= tol),
            Judge::Relative => Some(rel_err <= tol),
            Judge::AtMost => Some(lhs <= rhs),
            Judge::ReportOnly => None,
        };
        self.entries.push(CheckEntry {
            label: label.into(),
            lhs,
            rhs,
            abs_err,
            rel_err,
            pass,
        });
    }

    pub fn scale(&mut self, name: impl Into<String>, value: f64) {
        self.scales.push((name.into(), value));
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// True when every asserted entry passed (always true for report-only checks).
    pub fn passed(&self) -> bool {
        !self.assertable || self.entries.iter().all(|e| e.pass != Some(false))
    }

    pub fn max_abs_discrepancy(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, e| m.max(e.abs_err))
    }

    pub fn max_rel_discrepancy(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, e| m.max(e.rel_err))
    }

    pub fn entry(&self, label: &str) -> Option<&CheckEntry> {
        self.entries.iter().find(|e| e.label == label)
    }

    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("identity".into(), Value::String(self.identity.clone()));
        obj.insert("assertable".into(), Value::Bool(self.assertable));
        obj.insert("passed".into(), Value::Bool(self.passed()));
        obj.insert("tolerance".into(), json_number(self.tolerance));
        obj.insert(
            "max_abs_discrepancy".into(),
            json_number(self.max_abs_discrepancy()),
        );
        obj.insert(
            "max_rel_discrepancy".into(),
            json_number(self.max_rel_discrepancy()),
        );
        let entries = self
            .entries
            .iter()
            .map(|e| {
                let mut m = Map::new();
                m.insert("label".into(), Value::String(e.label.clone()));
                m.insert("lhs".into(), json_number(e.lhs));
                m.insert("rhs".into(), json_number(e.rhs));
                m.insert("abs_err".into(), json_number(e.abs_err));
                m.insert("rel_err".into(), json_number(e.rel_err));
                m.insert(
                    "pass".into(),
                    e.pass.map(Value::Bool).unwrap_or(Value::Null),
                );
                Value::Object(m)
            })
            .collect();
        obj.insert("entries".into(), Value::Array(entries));
        let mut scales = Map::new();
        for (k, v) in &self.scales {
            scales.insert(k.clone(), json_number(*v));
        }
        obj.insert("scales".into(), Value::Object(scales));
        obj.insert(
            "notes".into(),
            Value::Array(self.notes.iter().cloned().map(Value::String).collect()),
        );
        Value::Object(obj)
    }
}
