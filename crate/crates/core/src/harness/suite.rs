//! Grid runner: every suite over `seeds × dims`, cells in parallel, output
//! sorted by cell key.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{corollaries, lemmas, prop1, theorem1, theorem2, theorem3, Suite, Verdict, VerificationReport};
use crate::elementary::MAX_ORDER;
use crate::error::{Error, Result};
use crate::generators::{GenOptions, MAX_THEOREM1_DIM, MAX_THEOREM23_DIM};
use crate::matrix::Limits;
use crate::tolerance::ToleranceContext;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    pub suites: Vec<Suite>,
    /// Seeds `0..seeds`.
    pub seeds: u64,
    pub dims: Vec<usize>,
    /// Upper bound on generated hypothesis orders.
    pub orders: usize,
    pub tol: ToleranceContext,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { suites: Suite::ALL.to_vec(), seeds: 20, dims: vec![2, 4, 6], orders: 3, tol: ToleranceContext::default() }
    }
}

impl SuiteConfig {
    pub fn validate(&self, limits: &Limits) -> Result<()> {
        if self.orders == 0 || self.orders > MAX_ORDER {
            return Err(Error::OrderTooLarge { order: self.orders, max: MAX_ORDER });
        }
        if self.seeds == 0 {
            return Err(Error::InvalidParam("seeds must be positive".into()));
        }
        if self.suites.is_empty() {
            return Err(Error::InvalidParam("no suites selected".into()));
        }
        if self.dims.is_empty() {
            return Err(Error::InvalidParam("no dimensions selected".into()));
        }
        for &d in &self.dims {
            if d == 0 {
                return Err(Error::InvalidParam("dimensions must be positive".into()));
            }
            limits.check_dim(d)?;
        }
        ToleranceContext::new(self.tol.atol, self.tol.rtol)?;
        Ok(())
    }

    fn gen_options(&self) -> GenOptions {
        GenOptions { max_order: self.orders, tol: self.tol, ..GenOptions::default() }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub vacuous: usize,
    /// `(suite, seed, dim)` combinations outside a suite's dimension range.
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub cells: Vec<VerificationReport>,
    pub summary: Summary,
}

impl SuiteReport {
    /// 0 without non-vacuous failures, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.summary.fail > 0 {
            1
        } else {
            0
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &VerificationReport> {
        self.cells.iter().filter(|c| c.verdict == Verdict::Fail)
    }

    /// Report with every `runtime_ms` zeroed.
    pub fn without_timing(&self) -> Self {
        SuiteReport { config: self.config.clone(), cells: self.cells.iter().map(|c| c.without_timing()).collect(), summary: self.summary }
    }
}

/// Whether `suite` runs at `dim`.
pub fn supports(suite: Suite, dim: usize) -> bool {
    match suite {
        Suite::Thm1 => dim <= MAX_THEOREM1_DIM,
        Suite::Thm2 => dim <= MAX_THEOREM23_DIM,
        Suite::Thm3 => (2..=MAX_THEOREM23_DIM).contains(&dim),
        Suite::Lemmas | Suite::Prop1 | Suite::Corollaries => true,
    }
}

fn run_one(suite: Suite, seed: u64, dim: usize, opts: &GenOptions) -> Vec<VerificationReport> {
    match suite {
        Suite::Lemmas => lemmas::run(seed, dim, opts),
        Suite::Prop1 => prop1::run(seed, dim, opts),
        Suite::Corollaries => corollaries::run(seed, dim, opts),
        Suite::Thm1 => theorem1::run(seed, dim, opts),
        Suite::Thm2 => theorem2::run(seed, dim, opts),
        Suite::Thm3 => theorem3::run(seed, dim, opts),
    }
}

fn fixed(suite: Suite, tol: &ToleranceContext) -> Vec<VerificationReport> {
    match suite {
        Suite::Lemmas => lemmas::fixed(tol),
        Suite::Prop1 => Vec::new(),
        Suite::Corollaries => corollaries::fixed(tol),
        Suite::Thm1 => theorem1::fixed(tol),
        Suite::Thm2 => theorem2::fixed(tol),
        Suite::Thm3 => theorem3::fixed(tol),
    }
}

pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport> {
    run_suite_with_limits(config, &Limits::from_env()?)
}

pub fn run_suite_with_limits(config: &SuiteConfig, limits: &Limits) -> Result<SuiteReport> {
    config.validate(limits)?;
    let opts = config.gen_options();
    let mut suites = config.suites.clone();
    suites.sort();
    suites.dedup();
    let mut dims = config.dims.clone();
    dims.sort_unstable();
    dims.dedup();

    let mut jobs = Vec::new();
    let mut skipped = 0;
    for &suite in &suites {
        for seed in 0..config.seeds {
            for &dim in &dims {
                if supports(suite, dim) {
                    jobs.push((suite, seed, dim));
                } else {
                    skipped += 1;
                }
            }
        }
    }
    let mut cells: Vec<VerificationReport> = jobs
        .par_iter()
        .flat_map_iter(|&(suite, seed, dim)| run_one(suite, seed, dim, &opts))
        .chain(suites.par_iter().flat_map_iter(|&s| fixed(s, &config.tol)))
        .collect();
    cells.sort_by_key(|c| c.key());

    let mut summary = Summary { skipped, ..Summary::default() };
    for c in &cells {
        match c.verdict {
            Verdict::Pass => summary.pass += 1,
            Verdict::Fail => summary.fail += 1,
            Verdict::Vacuous => summary.vacuous += 1,
        }
    }
    Ok(SuiteReport { config: config.clone(), cells, summary })
}
