use serde::Serialize;
use serde_json::Value;

use crate::config::RunConfig;

/// One eigenvalue of one method.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumRow {
    #[serde(rename = "S")]
    pub spin: u32,
    #[serde(rename = "L")]
    pub length: usize,
    #[serde(rename = "J")]
    pub j: u32,
    /// `"p/q"`; absent for oracle methods.
    pub lambda_exact: Option<String>,
    pub lambda_float: f64,
    pub multiplicity: usize,
    pub method: String,
}

/// One entropy value; the von Neumann entropy is the row with `alpha = 1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyRow {
    #[serde(rename = "S")]
    pub spin: u32,
    #[serde(rename = "L")]
    pub length: usize,
    pub alpha: f64,
    pub measure: &'static str,
    pub value: f64,
    pub saturation_gap: f64,
    pub method: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ResultRow {
    Spectrum(SpectrumRow),
    Entropy(EntropyRow),
}

/// Outcome of one named verification.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    #[serde(rename = "S", skip_serializing_if = "Option::is_none")]
    pub spin: Option<u32>,
    #[serde(rename = "L", skip_serializing_if = "Option::is_none")]
    pub length: Option<usize>,
    pub passed: bool,
    /// The measured quantity (a residual, a dimension, ...).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    /// Extra context, including the counterexample of a failed check.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
}

impl Check {
    pub fn new(suite: &'static str, name: impl Into<String>, passed: bool) -> Self {
        Check {
            suite,
            name: name.into(),
            spin: None,
            length: None,
            passed,
            value: None,
            tolerance: None,
            detail: None,
        }
    }

    pub fn at(mut self, spin: u32, length: usize) -> Self {
        self.spin = Some(spin);
        self.length = Some(length);
        self
    }

    pub fn spin(mut self, spin: u32) -> Self {
        self.spin = Some(spin);
        self
    }

    /// Passes when `value ≤ tolerance`.
    pub fn residual(suite: &'static str, name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        let mut c = Check::new(suite, name, value <= tolerance);
        c.value = Some(value);
        c.tolerance = Some(tolerance);
        c
    }

    pub fn value(mut self, value: f64) -> Self {
        self.value = Some(value);
        self
    }

    pub fn detail(mut self, detail: Value) -> Self {
        self.detail = Some(detail);
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Document {
    pub config: RunConfig,
    pub results: Vec<ResultRow>,
    pub checks: Vec<Check>,
    pub version: &'static str,
}

impl Document {
    pub fn new(config: RunConfig) -> Self {
        Document {
            config,
            results: Vec::new(),
            checks: Vec::new(),
            version: env!("CARGO_PKG_VERSION"),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serialises");
        s.push('\n');
        s
    }

    /// Entropy rows as `S,L,alpha,value`; spectrum rows with their exact values;
    /// checks when there are no results.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        let entropies: Vec<&EntropyRow> = self
            .results
            .iter()
            .filter_map(|r| match r {
                ResultRow::Entropy(e) => Some(e),
                _ => None,
            })
            .collect();
        let spectra: Vec<&SpectrumRow> = self
            .results
            .iter()
            .filter_map(|r| match r {
                ResultRow::Spectrum(s) => Some(s),
                _ => None,
            })
            .collect();
        if !entropies.is_empty() {
            w.write_record(["S", "L", "alpha", "value"]).unwrap();
            for e in entropies {
                w.write_record([e.spin.to_string(), e.length.to_string(), float17(e.alpha), float17(e.value)])
                    .unwrap();
            }
        } else if !spectra.is_empty() {
            w.write_record(["S", "L", "J", "lambda_exact", "lambda_float", "multiplicity", "method"])
                .unwrap();
            for s in spectra {
                w.write_record([
                    s.spin.to_string(),
                    s.length.to_string(),
                    s.j.to_string(),
                    s.lambda_exact.clone().unwrap_or_default(),
                    float17(s.lambda_float),
                    s.multiplicity.to_string(),
                    s.method.clone(),
                ])
                .unwrap();
            }
        } else {
            w.write_record(["suite", "name", "S", "L", "passed", "value"]).unwrap();
            for c in &self.checks {
                w.write_record([
                    c.suite.to_string(),
                    c.name.clone(),
                    c.spin.map(|s| s.to_string()).unwrap_or_default(),
                    c.length.map(|l| l.to_string()).unwrap_or_default(),
                    c.passed.to_string(),
                    c.value.map(float17).unwrap_or_default(),
                ])
                .unwrap();
            }
        }
        String::from_utf8(w.into_inner().expect("in-memory writer")).expect("ascii output")
    }
}

/// 17 significant digits, independent of locale.
pub fn float17(x: f64) -> String {
    format!("{x:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [1.0 / 3.0, 1.3689223607402194, 1e-300, 2.0, 0.0] {
            let s = float17(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            let digits = s.split('e').next().unwrap().replace(['.', '-'], "");
            assert_eq!(digits.len(), 17);
        }
    }

    #[test]
    fn residual_checks() {
        assert!(Check::residual("s", "n", 1e-12, 1e-10).passed);
        assert!(!Check::residual("s", "n", 1e-9, 1e-10).passed);
        assert!(!Check::residual("s", "n", f64::NAN, 1e-10).passed);
    }
}
