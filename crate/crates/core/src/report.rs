//! Structured verdict records shared by every check.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::words::ConjConvention;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Fails,
    Engel,
    NotEngel,
    Undetermined,
    ExperimentalPass,
    ExperimentalFail,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Engel => "engel",
            Verdict::NotEngel => "not-engel",
            Verdict::Undetermined => "undetermined",
            Verdict::ExperimentalPass => "experimental-pass",
            Verdict::ExperimentalFail => "experimental-fail",
        }
    }

    pub fn requires_witness(self) -> bool {
        matches!(self, Verdict::Fails | Verdict::NotEngel)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Settings echoed into every report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub seed: u64,
    pub max_iter: usize,
    pub strategy: String,
    pub conj_convention: ConjConvention,
    pub word_cap: usize,
    pub enumeration_cap: u64,
    pub group_order_cap: usize,
    pub monomial_cap: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            max_iter: 50,
            strategy: "class-reps".to_string(),
            conj_convention: ConjConvention::Right,
            word_cap: crate::words::DEFAULT_WORD_CAP,
            enumeration_cap: crate::lie::DEFAULT_ENUMERATION_CAP,
            group_order_cap: crate::group::DEFAULT_ORDER_CAP,
            monomial_cap: crate::poly::DEFAULT_MONOMIAL_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub claim: String,
    pub inputs: Value,
    pub verdict: Verdict,
    pub witness: Option<Value>,
    pub iterations: u64,
    pub millis: u64,
    pub config: Value,
    /// Check-specific data (thresholds, set sizes, sub-verdicts).
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub details: Value,
}

impl Report {
    pub fn new(claim: impl Into<String>, verdict: Verdict) -> Self {
        Report {
            claim: claim.into(),
            inputs: Value::Null,
            verdict,
            witness: None,
            iterations: 0,
            millis: 0,
            config: serde_json::to_value(RunConfig::default()).expect("serializable"),
            details: Value::Null,
        }
    }

    pub fn with_config(mut self, config: &RunConfig) -> Self {
        self.config = serde_json::to_value(config).expect("serializable");
        self
    }

    /// The witness is present exactly for failing verdicts.
    pub fn is_well_formed(&self) -> bool {
        self.verdict.requires_witness() == self.witness.is_some() && !self.config.is_null()
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("[{}] {}", self.claim, self.verdict);
        if !self.inputs.is_null() {
            s.push_str(&format!("  inputs={}", self.inputs));
        }
        if let Some(w) = &self.witness {
            s.push_str(&format!("  witness={w}"));
        }
        if self.iterations > 0 {
            s.push_str(&format!("  iterations={}", self.iterations));
        }
        s.push_str(&format!("  ({} ms)", self.millis));
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witness_invariant() {
        let mut r = Report::new("x", Verdict::Fails);
        assert!(!r.is_well_formed());
        r.witness = Some(serde_json::json!([1, 2]));
        assert!(r.is_well_formed());
        let ok = Report::new("x", Verdict::Holds);
        assert!(ok.is_well_formed());
    }

    #[test]
    fn schema_keys() {
        let r = Report::new("claim", Verdict::Engel);
        let v: Value = serde_json::from_str(&r.to_json_line()).unwrap();
        for key in ["claim", "inputs", "verdict", "witness", "iterations", "millis", "config"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["verdict"], "engel");
        assert_eq!(v["config"]["strategy"], "class-reps");
    }
}
