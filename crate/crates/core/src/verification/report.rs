use std::time::Duration;

use serde::Serialize;

use super::FormulaId;
use crate::error::{LabError, Result};

pub const CSV_HEADER: [&str; 6] = ["formula", "params", "lhs", "rhs", "ratio", "elapsed_ms"];

// Symbolic values accepted for numeric parameters.
const WORDS: [(&str, f64); 2] = [("separable", 0.0), ("grid2d", 1.0)];

/// Named numeric parameters in insertion order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Params(Vec<(String, f64)>);

impl Params {
    pub fn new() -> Self {
        Params(Vec::new())
    }

    /// Parses `name=value`; the value may use exponent notation.
    pub fn parse_pair(s: &str) -> Result<(String, f64)> {
        let (k, v) = s
            .split_once('=')
            .ok_or_else(|| LabError::invalid(format!("parameter '{s}' is not of the form name=value")))?;
        let k = k.trim();
        let v = v.trim();
        if k.is_empty() {
            return Err(LabError::invalid(format!("parameter '{s}' has an empty name")));
        }
        let value = match WORDS.iter().find(|(w, _)| w.eq_ignore_ascii_case(v)) {
            Some(&(_, x)) => x,
            None => v
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| LabError::invalid(format!("parameter {k} has non-numeric value '{v}'")))?,
        };
        Ok((k.to_string(), value))
    }

    pub fn set(&mut self, name: &str, value: f64) {
        match self.0.iter_mut().find(|(k, _)| k == name) {
            Some(slot) => slot.1 = value,
            None => self.0.push((name.to_string(), value)),
        }
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.set(name, value);
        self
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.0.iter().find(|(k, _)| k == name).map(|&(_, v)| v)
    }

    pub fn get_or(&self, name: &str, default: f64) -> f64 {
        self.get(name).unwrap_or(default)
    }

    pub fn require(&self, name: &str) -> Result<f64> {
        self.get(name).ok_or_else(|| LabError::invalid(format!("missing parameter {name}")))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }

    /// `a=1;b=2`, the CSV form.
    pub fn joined(&self) -> String {
        self.0.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";")
    }
}

impl FromIterator<(String, f64)> for Params {
    fn from_iter<I: IntoIterator<Item = (String, f64)>>(iter: I) -> Self {
        let mut p = Params::new();
        for (k, v) in iter {
            p.set(&k, v);
        }
        p
    }
}

/// One evaluation: both sides of a formula at finite parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioReport {
    pub formula: FormulaId,
    pub params: Params,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub elapsed: Duration,
}

#[derive(Serialize)]
struct JsonRow<'a> {
    formula: &'a str,
    params: serde_json::Map<String, serde_json::Value>,
    lhs: f64,
    rhs: f64,
    ratio: f64,
    elapsed_ms: f64,
}

impl RatioReport {
    pub fn new(formula: FormulaId, params: Params, lhs: f64, rhs: f64, elapsed: Duration) -> Result<Self> {
        if rhs == 0.0 || !lhs.is_finite() || !rhs.is_finite() {
            return Err(LabError::numeric(format!(
                "{formula}: sides must be finite with rhs != 0, got lhs = {lhs}, rhs = {rhs}"
            )));
        }
        if let Some((k, v)) = params.iter().find(|(_, v)| !v.is_finite()) {
            return Err(LabError::numeric(format!("{formula}: parameter {k} = {v}")));
        }
        Ok(RatioReport { formula, params, lhs, rhs, ratio: lhs / rhs, elapsed })
    }

    pub fn with_elapsed(mut self, elapsed: Duration) -> Self {
        self.elapsed = elapsed;
        self
    }

    fn elapsed_ms(&self, timing: bool) -> f64 {
        if timing {
            (self.elapsed.as_secs_f64() * 1e3 * 1e3).round() / 1e3
        } else {
            0.0
        }
    }

    /// CSV fields in [`CSV_HEADER`] order. With `timing` off the elapsed
    /// column is 0, which makes output byte-reproducible.
    pub fn csv_record(&self, timing: bool) -> [String; 6] {
        [
            self.formula.to_string(),
            self.params.joined(),
            self.lhs.to_string(),
            self.rhs.to_string(),
            self.ratio.to_string(),
            self.elapsed_ms(timing).to_string(),
        ]
    }

    pub fn to_json(&self, timing: bool) -> String {
        let params = self
            .params
            .iter()
            .map(|(k, v)| (k.to_string(), serde_json::json!(v)))
            .collect();
        let row = JsonRow {
            formula: self.formula.as_str(),
            params,
            lhs: self.lhs,
            rhs: self.rhs,
            ratio: self.ratio,
            elapsed_ms: self.elapsed_ms(timing),
        };
        serde_json::to_string(&row).expect("report fields are finite")
    }

    /// `|ratio − 1|`.
    pub fn deviation(&self) -> f64 {
        (self.ratio - 1.0).abs()
    }
}

/// Writes a header and one row per report.
pub fn write_csv<W: std::io::Write>(out: W, reports: &[RatioReport], timing: bool) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for r in reports {
        w.write_record(r.csv_record(timing)).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> LabError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => LabError::Io(io),
        other => LabError::numeric(format!("csv: {other:?}")),
    }
}
