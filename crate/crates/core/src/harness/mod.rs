//! Executable checks of the product, perturbation and Drazin results.
//!
//! Each check produces a [`VerificationReport`] with labelled hypothesis,
//! conclusion and diagnostic residuals. A failed hypothesis makes the report
//! *vacuous*: the results are implications, so a broken instance is never
//! counted as a counterexample. Diagnostics are informational and never
//! affect the verdict.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::elementary::{
    compose_mn, compose_scale, delta_power, delta_scale, delta_weight, triangle_power, triangle_scale, triangle_weight,
    ComposeOrder, Pair,
};
use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use crate::tolerance::{Expect, Residual, ToleranceContext, ZeroTest};

pub mod corollaries;
pub mod exact;
pub mod lemmas;
pub mod prop1;
pub mod suite;
pub mod theorem1;
pub mod theorem2;
pub mod theorem3;

pub use suite::{run_suite, SuiteConfig, SuiteReport, Summary};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Lemmas,
    Prop1,
    Corollaries,
    Thm1,
    Thm2,
    Thm3,
}

impl Suite {
    pub const ALL: [Suite; 6] = [Suite::Lemmas, Suite::Prop1, Suite::Corollaries, Suite::Thm1, Suite::Thm2, Suite::Thm3];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemmas => "lemmas",
            Suite::Prop1 => "prop1",
            Suite::Corollaries => "corollaries",
            Suite::Thm1 => "thm1",
            Suite::Thm2 => "thm2",
            Suite::Thm3 => "thm3",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidParam(format!("unknown suite `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Vacuous,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub result_id: String,
    pub suite: Suite,
    pub seed: u64,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub variant: String,
    pub hypotheses: Vec<Residual>,
    pub conclusions: Vec<Residual>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<Residual>,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub runtime_ms: f64,
}

/// Sort key of a report within a suite run.
pub type CellKey = (Suite, String, usize, u64, String);

impl VerificationReport {
    pub fn new(suite: Suite, result_id: impl Into<String>, seed: u64, dim: usize) -> Self {
        VerificationReport {
            result_id: result_id.into(),
            suite,
            seed,
            dim,
            variant: String::new(),
            hypotheses: Vec::new(),
            conclusions: Vec::new(),
            diagnostics: Vec::new(),
            verdict: Verdict::Pass,
            notes: Vec::new(),
            runtime_ms: 0.0,
        }
    }

    pub fn with_variant(mut self, variant: impl Into<String>) -> Self {
        self.variant = variant.into();
        self
    }

    pub fn hyp(&mut self, r: Residual) {
        self.hypotheses.push(r);
    }

    pub fn concl(&mut self, r: Residual) {
        self.conclusions.push(r);
    }

    pub fn diag(&mut self, r: Residual) {
        self.diagnostics.push(r);
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn hypotheses_hold(&self) -> bool {
        self.hypotheses.iter().all(|r| r.pass)
    }

    /// Vacuous if any hypothesis fails, else pass iff every conclusion passes.
    pub fn compute_verdict(&self) -> Verdict {
        if !self.hypotheses_hold() {
            Verdict::Vacuous
        } else if self.conclusions.iter().all(|r| r.pass) {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn key(&self) -> CellKey {
        (self.suite, self.result_id.clone(), self.dim, self.seed, self.variant.clone())
    }

    /// Copy with `runtime_ms` zeroed, for determinism comparisons.
    pub fn without_timing(&self) -> Self {
        VerificationReport { runtime_ms: 0.0, ..self.clone() }
    }
}

/// Runs `body` on a fresh report and seals it: an error becomes a failed
/// conclusion carrying the error code, then the verdict and runtime are set.
pub fn run_cell(
    suite: Suite,
    result_id: &str,
    seed: u64,
    dim: usize,
    body: impl FnOnce(&mut VerificationReport) -> Result<()>,
) -> VerificationReport {
    let start = Instant::now();
    let mut r = VerificationReport::new(suite, result_id, seed, dim);
    if let Err(e) = body(&mut r) {
        r.concl(Residual::flag(format!("error: {}", e.code()), false));
        r.note(e.to_string());
    }
    r.verdict = r.compute_verdict();
    r.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    r
}

pub(crate) fn from_test(label: impl Into<String>, z: &ZeroTest) -> Residual {
    Residual { label: label.into(), residual: z.residual, scale: z.scale, threshold: z.threshold, pass: z.pass, expect: Expect::Zero }
}

/// `Δ^m_{B,A}(X) = 0`.
pub fn triangle_check(label: impl Into<String>, pair: Pair<'_>, x: &CMatrix, m: usize, tol: &ToleranceContext) -> Result<Residual> {
    let r = triangle_power(pair.b, pair.a, x, m)?;
    Ok(tol.check_zero(label, r.fro_norm(), triangle_scale(pair, x, m)?))
}

/// `δ^n_{B,A}(X) = 0`.
pub fn delta_check(label: impl Into<String>, pair: Pair<'_>, x: &CMatrix, n: usize, tol: &ToleranceContext) -> Result<Residual> {
    let r = delta_power(pair.b, pair.a, x, n)?;
    Ok(tol.check_zero(label, r.fro_norm(), delta_scale(pair, x, n)?))
}

/// Largest of the two composition-order residuals of `Δ^m(δ^n(X))`.
pub fn pair_residual(outer: Pair<'_>, inner: Pair<'_>, x: &CMatrix, m: usize, n: usize) -> Result<(f64, f64)> {
    let mut worst = 0.0f64;
    for order in [ComposeOrder::TriangleFirstOutside, ComposeOrder::DeltaFirstOutside] {
        worst = worst.max(compose_mn(outer, inner, x, m, n, order)?.fro_norm());
    }
    Ok((worst, compose_scale(outer, inner, x, m, n)?))
}

/// `Δ^m_{outer}(δ^n_{inner}(X)) = 0` in both composition orders.
pub fn pair_check(
    label: impl Into<String>,
    outer: Pair<'_>,
    inner: Pair<'_>,
    x: &CMatrix,
    m: usize,
    n: usize,
    tol: &ToleranceContext,
) -> Result<Residual> {
    let (r, s) = pair_residual(outer, inner, x, m, n)?;
    Ok(tol.check_zero(label, r, s))
}

/// `Δ^m_{outer}(δ^n_{inner}(X))` clearly nonzero (`Δ` outside).
pub fn pair_nonzero(
    label: impl Into<String>,
    outer: Pair<'_>,
    inner: Pair<'_>,
    x: &CMatrix,
    m: usize,
    n: usize,
    tol: &ToleranceContext,
) -> Result<Residual> {
    let r = compose_mn(outer, inner, x, m, n, ComposeOrder::TriangleFirstOutside)?;
    Ok(tol.check_nonzero(label, r.fro_norm(), compose_scale(outer, inner, x, m, n)?))
}

/// `‖[A, B]‖_F = 0` relative to `2‖A‖‖B‖`.
pub fn commutator_check(label: impl Into<String>, a: &CMatrix, b: &CMatrix, tol: &ToleranceContext) -> Result<Residual> {
    let cm = a.commutator(b)?;
    Ok(tol.check_zero(label, cm.fro_norm(), 2.0 * a.fro_norm() * b.fro_norm()))
}

/// `lhs = rhs` relative to `scale`.
pub fn equal_check(label: impl Into<String>, lhs: &CMatrix, rhs: &CMatrix, scale: f64, tol: &ToleranceContext) -> Residual {
    tol.check_zero(label, (lhs - rhs).fro_norm(), scale)
}

/// Scale for `Δ^{m}_{outer}(Δ^{k}_{inner}(X))`.
pub fn triangle_triangle_scale(outer: Pair<'_>, inner: Pair<'_>, x: &CMatrix, m: usize, k: usize) -> Result<f64> {
    Ok(x.fro_norm() * triangle_weight(outer, m)? * triangle_weight(inner, k)?)
}

/// Scale for `δ^{n}_{outer}(δ^{k}_{inner}(X))`.
pub fn delta_delta_scale(outer: Pair<'_>, inner: Pair<'_>, x: &CMatrix, n: usize, k: usize) -> Result<f64> {
    Ok(x.fro_norm() * delta_weight(outer, n)? * delta_weight(inner, k)?)
}

/// Label `Δ^m(δ^n)` for a named pair of pairs.
pub(crate) fn order_label(what: &str, m: usize, n: usize) -> String {
    format!("{what} at ({m},{n})")
}
