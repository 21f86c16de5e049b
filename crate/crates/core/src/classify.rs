//! Membership tests and minimal-order searches for the operator classes.
//!
//! Every test reduces to a residual norm judged against
//! [`ToleranceContext`] with a scale computed by the `*_scale` functions of
//! [`crate::elementary`].

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::elementary::{
    compose_mn, compose_scale, delta_power, delta_scale, triangle_power, triangle_scale, ComposeOrder, Pair,
};
use crate::error::{ensure_same_dim, Error, Result};
use crate::matrix::CMatrix;
use crate::tolerance::{ToleranceContext, ZeroTest, STRICT_FACTOR};

/// Largest order accepted by [`minimal_order`].
pub const MAX_SEARCH_BOUND: usize = 20;
/// Largest grid bound accepted by [`classify_operator`].
pub const MAX_GRID_BOUND: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Order {
    Single(usize),
    Pair([usize; 2]),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassReport {
    pub class: String,
    pub order: Order,
    pub residual: f64,
    pub scale: f64,
    pub verdict: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_order: Option<usize>,
    /// Set by [`residual_pair_symmetric`]: the two composition orders differ
    /// by more than the threshold.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orders_disagree: Option<bool>,
}

impl ClassReport {
    fn new(class: &str, order: Order, test: ZeroTest) -> Self {
        ClassReport {
            class: class.to_string(),
            order,
            residual: test.residual,
            scale: test.scale,
            verdict: test.pass,
            witness_order: None,
            orders_disagree: None,
        }
    }
}

/// Which defect transform a single-pair search runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderKind {
    /// `Δ^m_{B,A}(X)`: left-(X,m)-invertibility.
    Triangle,
    /// `δ^n_{B,A}(X)`: (X,n)-symmetry.
    Delta,
}

/// Residual of one transform at one order.
pub fn evaluate(kind: OrderKind, b: &CMatrix, a: &CMatrix, x: &CMatrix, k: usize, tol: &ToleranceContext) -> Result<ZeroTest> {
    let pair = Pair::new(b, a);
    let (value, scale) = match kind {
        OrderKind::Triangle => (triangle_power(b, a, x, k)?, triangle_scale(pair, x, k)?),
        OrderKind::Delta => (delta_power(b, a, x, k)?, delta_scale(pair, x, k)?),
    };
    Ok(tol.judge(value.fro_norm(), scale))
}

/// Is `A` left-(X,m)-invertible by `B`?
pub fn residual_left_invertible(b: &CMatrix, a: &CMatrix, x: &CMatrix, m: usize, tol: &ToleranceContext) -> Result<ClassReport> {
    let t = evaluate(OrderKind::Triangle, b, a, x, m, tol)?;
    Ok(ClassReport::new("left-invertible", Order::Single(m), t))
}

/// Is `B` an (X,n)-symmetry of `A`?
pub fn residual_symmetry(b: &CMatrix, a: &CMatrix, x: &CMatrix, n: usize, tol: &ToleranceContext) -> Result<ClassReport> {
    let t = evaluate(OrderKind::Delta, b, a, x, n, tol)?;
    Ok(ClassReport::new("symmetry", Order::Single(n), t))
}

/// `((B1,A1),(B2,A2))` with operand `X` and orders `(m, n)`, plus the
/// commutator norms the definition presupposes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairInstance {
    pub b1: CMatrix,
    pub a1: CMatrix,
    pub b2: CMatrix,
    pub a2: CMatrix,
    pub x: CMatrix,
    pub m: usize,
    pub n: usize,
    pub commute_residuals: BTreeMap<String, f64>,
}

impl PairInstance {
    pub fn new(b1: CMatrix, a1: CMatrix, b2: CMatrix, a2: CMatrix, x: CMatrix, m: usize, n: usize) -> Result<Self> {
        let d = x.dim();
        for mat in [&b1, &a1, &b2, &a2] {
            ensure_same_dim(mat.dim(), d)?;
        }
        let mut inst = PairInstance { b1, a1, b2, a2, x, m, n, commute_residuals: BTreeMap::new() };
        inst.commute_residuals = inst.compute_commutators();
        Ok(inst)
    }

    /// `[A1,A2]` and `[B1,B2]` Frobenius norms.
    pub fn compute_commutators(&self) -> BTreeMap<String, f64> {
        let mut out = BTreeMap::new();
        out.insert("[A1,A2]".to_string(), (&(&self.a1 * &self.a2) - &(&self.a2 * &self.a1)).fro_norm());
        out.insert("[B1,B2]".to_string(), (&(&self.b1 * &self.b2) - &(&self.b2 * &self.b1)).fro_norm());
        out
    }

    /// True when the stored certificates match the fields.
    pub fn certificates_fresh(&self) -> bool {
        self.commute_residuals == self.compute_commutators()
    }

    pub fn outer(&self) -> Pair<'_> {
        Pair::new(&self.b1, &self.a1)
    }

    pub fn inner(&self) -> Pair<'_> {
        Pair::new(&self.b2, &self.a2)
    }
}

/// Composed residual for one evaluation order.
pub fn evaluate_pair(outer: Pair<'_>, inner: Pair<'_>, x: &CMatrix, m: usize, n: usize, order: ComposeOrder, tol: &ToleranceContext) -> Result<ZeroTest> {
    let value = compose_mn(outer, inner, x, m, n, order)?;
    let scale = compose_scale(outer, inner, x, m, n)?;
    Ok(tol.judge(value.fro_norm(), scale))
}

/// Left-(X,(m,n))-symmetry of a pair: the larger residual over both
/// composition orders.
pub fn residual_pair_symmetric(p: &PairInstance, tol: &ToleranceContext) -> Result<ClassReport> {
    let first = compose_mn(p.outer(), p.inner(), &p.x, p.m, p.n, ComposeOrder::TriangleFirstOutside)?;
    let second = compose_mn(p.outer(), p.inner(), &p.x, p.m, p.n, ComposeOrder::DeltaFirstOutside)?;
    let scale = compose_scale(p.outer(), p.inner(), &p.x, p.m, p.n)?;
    let residual = first.fro_norm().max(second.fro_norm());
    let mut report = ClassReport::new("pair-symmetric", Order::Pair([p.m, p.n]), tol.judge(residual, scale));
    report.orders_disagree = Some(!tol.is_zero((&first - &second).fro_norm(), scale));
    Ok(report)
}

/// Outcome of a minimal-order sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimalOrder {
    pub kind: OrderKind,
    pub bound: usize,
    pub order: Option<usize>,
    /// Residual at orders `1..=bound`.
    pub residuals: Vec<f64>,
    pub warnings: Vec<MonotonicityWarning>,
}

/// A pass at `order` followed by a fail at `order + 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityWarning {
    pub order: usize,
    pub residual: f64,
    pub next_residual: f64,
}

/// Smallest order in `1..=bound` at which the transform vanishes.
pub fn minimal_order(kind: OrderKind, b: &CMatrix, a: &CMatrix, x: &CMatrix, bound: usize, tol: &ToleranceContext) -> Result<MinimalOrder> {
    if bound == 0 || bound > MAX_SEARCH_BOUND {
        return Err(Error::InvalidParam(format!("search bound must be in 1..={MAX_SEARCH_BOUND}, got {bound}")));
    }
    let tests = (1..=bound)
        .map(|k| evaluate(kind, b, a, x, k, tol))
        .collect::<Result<Vec<_>>>()?;
    let order = tests.iter().position(|t| t.pass).map(|i| i + 1);
    let warnings = tests
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[0].pass && !w[1].pass)
        .map(|(i, w)| MonotonicityWarning { order: i + 1, residual: w[0].residual, next_residual: w[1].residual })
        .collect();
    Ok(MinimalOrder { kind, bound, order, residuals: tests.iter().map(|t| t.residual).collect(), warnings })
}

/// Strict at `k`: passes at `k` and the residual at `k − 1` exceeds
/// `STRICT_FACTOR` times its threshold.
pub fn is_strict(kind: OrderKind, b: &CMatrix, a: &CMatrix, x: &CMatrix, k: usize, tol: &ToleranceContext) -> Result<bool> {
    if k == 0 {
        return Ok(false);
    }
    let at = evaluate(kind, b, a, x, k, tol)?;
    let below = evaluate(kind, b, a, x, k - 1, tol)?;
    Ok(at.pass && below.residual > STRICT_FACTOR * below.threshold)
}

/// Grid classification of a single operator with `B = A*`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorClassification {
    pub dim: usize,
    pub m_max: usize,
    pub n_max: usize,
    /// `Δ^m_{A*,A}(I)` for `m = 1..=m_max`.
    pub isometry: Vec<ClassReport>,
    /// `δ^n_{A*,A}(I)` for `n = 1..=n_max`.
    pub symmetry: Vec<ClassReport>,
    /// `Δ^m_{A*,A}(δ^n_{A*,A}(X))`, row-major over `(m, n)`.
    pub isosymmetry: Vec<ClassReport>,
    pub minimal_isometry: Option<usize>,
    pub minimal_symmetry: Option<usize>,
    /// Passing `(m, n)` cells not dominated by another passing cell.
    pub pareto: Vec<[usize; 2]>,
}

pub fn classify_operator(a: &CMatrix, x: &CMatrix, m_max: usize, n_max: usize, tol: &ToleranceContext) -> Result<OperatorClassification> {
    ensure_same_dim(a.dim(), x.dim())?;
    for bound in [m_max, n_max] {
        if bound == 0 || bound > MAX_GRID_BOUND {
            return Err(Error::InvalidParam(format!("grid bounds must be in 1..={MAX_GRID_BOUND}, got {bound}")));
        }
    }
    let b = a.adjoint();
    let id = CMatrix::identity(a.dim());
    let isometry = (1..=m_max)
        .into_par_iter()
        .map(|m| {
            let mut r = residual_left_invertible(&b, a, &id, m, tol)?;
            r.class = "isometry".into();
            Ok(r)
        })
        .collect::<Result<Vec<_>>>()?;
    let symmetry = (1..=n_max)
        .into_par_iter()
        .map(|n| residual_symmetry(&b, a, &id, n, tol))
        .collect::<Result<Vec<_>>>()?;
    let cells: Vec<(usize, usize)> = (1..=m_max).flat_map(|m| (1..=n_max).map(move |n| (m, n))).collect();
    let isosymmetry = cells
        .par_iter()
        .map(|&(m, n)| {
            let p = Pair::new(&b, a);
            let t = evaluate_pair(p, p, x, m, n, ComposeOrder::TriangleFirstOutside, tol)?;
            Ok(ClassReport::new("isosymmetry", Order::Pair([m, n]), t))
        })
        .collect::<Result<Vec<_>>>()?;
    let minimal_isometry = isometry.iter().position(|r| r.verdict).map(|i| i + 1);
    let minimal_symmetry = symmetry.iter().position(|r| r.verdict).map(|i| i + 1);
    let passing: Vec<(usize, usize)> = cells
        .iter()
        .zip(&isosymmetry)
        .filter(|(_, r)| r.verdict)
        .map(|(&c, _)| c)
        .collect();
    let pareto = pareto_frontier(&passing);
    let mut out = OperatorClassification {
        dim: a.dim(),
        m_max,
        n_max,
        isometry,
        symmetry,
        isosymmetry,
        minimal_isometry,
        minimal_symmetry,
        pareto,
    };
    for r in &mut out.isometry {
        r.witness_order = minimal_isometry;
    }
    for r in &mut out.symmetry {
        r.witness_order = minimal_symmetry;
    }
    Ok(out)
}

/// Cells of `cells` with no other cell componentwise `≤`.
pub fn pareto_frontier(cells: &[(usize, usize)]) -> Vec<[usize; 2]> {
    let mut out: Vec<[usize; 2]> = cells
        .iter()
        .filter(|&&(m, n)| !cells.iter().any(|&(m2, n2)| (m2, n2) != (m, n) && m2 <= m && n2 <= n))
        .map(|&(m, n)| [m, n])
        .collect();
    out.sort();
    out.dedup();
    out
}
