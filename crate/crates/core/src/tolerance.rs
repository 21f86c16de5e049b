//! Zero-test policy shared by every check in the crate.
//!
//! A residual `R` counts as zero iff `‖R‖_F ≤ atol + rtol·scale`, where
//! `scale` is supplied by the caller and estimates the magnitude of the terms
//! that cancelled to produce `R`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_ATOL: f64 = 1e-12;
pub const DEFAULT_RTOL: f64 = 1e-9;

/// Multiple of the threshold that separates a genuine nonzero from noise
/// (strictness, sharpness and forcing probes).
pub const STRICT_FACTOR: f64 = 1e3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceContext {
    pub atol: f64,
    pub rtol: f64,
}

impl Default for ToleranceContext {
    fn default() -> Self {
        ToleranceContext { atol: DEFAULT_ATOL, rtol: DEFAULT_RTOL }
    }
}

impl ToleranceContext {
    pub fn new(atol: f64, rtol: f64) -> Result<Self> {
        if !(atol >= 0.0 && atol.is_finite() && rtol >= 0.0 && rtol.is_finite()) {
            return Err(Error::InvalidParam(format!(
                "tolerances must be finite and nonnegative (atol={atol}, rtol={rtol})"
            )));
        }
        Ok(ToleranceContext { atol, rtol })
    }

    pub fn threshold(&self, scale: f64) -> f64 {
        self.atol + self.rtol * scale
    }

    pub fn is_zero(&self, residual: f64, scale: f64) -> bool {
        residual <= self.threshold(scale)
    }

    /// Clearly nonzero: above [`STRICT_FACTOR`] times the threshold.
    pub fn is_clearly_nonzero(&self, residual: f64, scale: f64) -> bool {
        residual > STRICT_FACTOR * self.threshold(scale)
    }

    pub fn judge(&self, residual: f64, scale: f64) -> ZeroTest {
        let threshold = self.threshold(scale);
        ZeroTest { residual, scale, threshold, pass: residual <= threshold }
    }

    /// Labelled zero test.
    pub fn check_zero(&self, label: impl Into<String>, residual: f64, scale: f64) -> Residual {
        let threshold = self.threshold(scale);
        Residual { label: label.into(), residual, scale, threshold, pass: residual <= threshold, expect: Expect::Zero }
    }

    /// Labelled "clearly nonzero" test: passes when the residual exceeds
    /// [`STRICT_FACTOR`] times the zero threshold.
    pub fn check_nonzero(&self, label: impl Into<String>, residual: f64, scale: f64) -> Residual {
        let threshold = STRICT_FACTOR * self.threshold(scale);
        Residual { label: label.into(), residual, scale, threshold, pass: residual > threshold, expect: Expect::Nonzero }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expect {
    Zero,
    Nonzero,
}

impl Expect {
    fn is_zero(&self) -> bool {
        *self == Expect::Zero
    }
}

/// A labelled check as it appears in reports and manifests.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub label: String,
    pub residual: f64,
    pub scale: f64,
    pub threshold: f64,
    pub pass: bool,
    #[serde(default = "default_expect", skip_serializing_if = "Expect::is_zero")]
    pub expect: Expect,
}

fn default_expect() -> Expect {
    Expect::Zero
}

impl Residual {
    /// Boolean check with no numeric content (e.g. an exact structural fact).
    pub fn flag(label: impl Into<String>, pass: bool) -> Self {
        Residual { label: label.into(), residual: if pass { 0.0 } else { 1.0 }, scale: 0.0, threshold: 0.0, pass, expect: Expect::Zero }
    }
}

/// Outcome of one zero test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroTest {
    pub residual: f64,
    pub scale: f64,
    pub threshold: f64,
    pub pass: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threshold_formula() {
        let tol = ToleranceContext::default();
        assert_eq!(tol.threshold(0.0), 1e-12);
        assert!((tol.threshold(1e3) - (1e-12 + 1e-6)).abs() < 1e-20);
        assert!(tol.is_zero(1e-12, 0.0));
        assert!(!tol.is_zero(2e-12, 0.0));
        let z = tol.judge(0.5, 1e9);
        assert!(z.pass);
        assert!(!tol.judge(2.0, 1e9).pass);
    }

    #[test]
    fn rejects_bad_tolerances() {
        assert!(ToleranceContext::new(-1.0, 0.0).is_err());
        assert!(ToleranceContext::new(0.0, f64::NAN).is_err());
        assert!(ToleranceContext::new(0.0, 0.0).is_ok());
    }

    #[test]
    fn labelled_checks() {
        let tol = ToleranceContext::default();
        let z = tol.check_zero("a", 1e-13, 1.0);
        assert!(z.pass && z.expect == Expect::Zero);
        let n = tol.check_nonzero("b", 1.0, 1.0);
        assert!(n.pass);
        assert!((n.threshold - 1e3 * (1e-12 + 1e-9)).abs() < 1e-18);
        assert!(!tol.check_nonzero("c", 1e-7, 1.0).pass);
        let json = serde_json::to_value(&z).unwrap();
        assert!(json.get("expect").is_none());
    }
}
