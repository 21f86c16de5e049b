//! Defect transforms built from left and right multiplications.
//!
//! For a pair `(B, A)` and an operand `X`:
//!
//! * `δ_{B,A}(X) = BX − XA`, and `δ^n` is its n-th iterate,
//!   `Σ_j (−1)^j C(n,j) B^{n−j} X A^j`;
//! * `Δ_{B,A}(X) = BXA − X`, and `Δ^m` is its m-th iterate,
//!   `Σ_j (−1)^j C(m,j) B^{m−j} X A^{m−j}`.
//!
//! Powers are evaluated as binomial sums with exact integer coefficients,
//! summed with `j` ascending. [`SuperOp`] realizes the same maps as
//! `d²×d²` matrices acting on the column-stacked `vec(X)`, where
//! `vec(BXA) = (Aᵀ ⊗ B) vec(X)`; it is the independent route used for
//! cross-checking.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_same_dim, Error, Result};
use crate::matrix::{CMatrix, DEFAULT_MAX_SUPEROP_DIM};

/// Largest order accepted by the binomial sums; `C(62, 31)` still fits a u64
/// with room for the sign.
pub const MAX_ORDER: usize = 62;

/// Exact binomial coefficient for `n ≤ MAX_ORDER`.
pub fn binomial(n: usize, k: usize) -> Result<u64> {
    check_order(n)?;
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        // acc·(n−i) is divisible by (i+1) at every step
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    Ok(acc)
}

pub(crate) fn check_order(order: usize) -> Result<()> {
    if order > MAX_ORDER {
        Err(Error::OrderTooLarge { order, max: MAX_ORDER })
    } else {
        Ok(())
    }
}

fn signed(coeff: u64, j: usize) -> f64 {
    if j % 2 == 0 {
        coeff as f64
    } else {
        -(coeff as f64)
    }
}

/// An ordered pair `(B, A)`: `B` multiplies on the left, `A` on the right.
#[derive(Debug, Clone, Copy)]
pub struct Pair<'a> {
    pub b: &'a CMatrix,
    pub a: &'a CMatrix,
}

impl<'a> Pair<'a> {
    pub fn new(b: &'a CMatrix, a: &'a CMatrix) -> Self {
        Pair { b, a }
    }

    fn check(&self, x: &CMatrix) -> Result<usize> {
        ensure_same_dim(self.b.dim(), self.a.dim())?;
        ensure_same_dim(self.b.dim(), x.dim())?;
        Ok(x.dim())
    }
}

/// `BX − XA`.
pub fn delta_apply(b: &CMatrix, a: &CMatrix, x: &CMatrix) -> Result<CMatrix> {
    Pair::new(b, a).check(x)?;
    Ok(&(b * x) - &(x * a))
}

/// `BXA − X`.
pub fn triangle_apply(b: &CMatrix, a: &CMatrix, x: &CMatrix) -> Result<CMatrix> {
    Pair::new(b, a).check(x)?;
    Ok(&(&(b * x) * a) - x)
}

/// `δ^n_{B,A}(X)`; `n = 0` returns `X`.
pub fn delta_power(b: &CMatrix, a: &CMatrix, x: &CMatrix, n: usize) -> Result<CMatrix> {
    Pair::new(b, a).check(x)?;
    check_order(n)?;
    let bp = b.powers(n);
    let ap = a.powers(n);
    let mut acc = CMatrix::zeros(x.dim());
    for j in 0..=n {
        let w = signed(binomial(n, j)?, j);
        let term = &(&bp[n - j] * x) * &ap[j];
        acc = &acc + &term.scale_real(w);
    }
    Ok(acc)
}

/// `Δ^m_{B,A}(X)`; `m = 0` returns `X`.
pub fn triangle_power(b: &CMatrix, a: &CMatrix, x: &CMatrix, m: usize) -> Result<CMatrix> {
    Pair::new(b, a).check(x)?;
    check_order(m)?;
    let bp = b.powers(m);
    let ap = a.powers(m);
    let mut acc = CMatrix::zeros(x.dim());
    for j in 0..=m {
        let w = signed(binomial(m, j)?, j);
        let term = &(&bp[m - j] * x) * &ap[m - j];
        acc = &acc + &term.scale_real(w);
    }
    Ok(acc)
}

/// Evaluation strategy for the composed `(m, n)` transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComposeOrder {
    /// `Δ^m_{B1,A1}(δ^n_{B2,A2}(X))`
    TriangleFirstOutside,
    /// `δ^n_{B2,A2}(Δ^m_{B1,A1}(X))`
    DeltaFirstOutside,
    /// `Σ_j Σ_k (−1)^{j+k} C(m,j) C(n,k) B1^{m−j} B2^{n−k} X A1^{m−j} A2^k`
    DoubleSum,
}

impl ComposeOrder {
    pub const ALL: [ComposeOrder; 3] =
        [ComposeOrder::TriangleFirstOutside, ComposeOrder::DeltaFirstOutside, ComposeOrder::DoubleSum];
}

/// The composed transform for `outer = (B1, A1)` (the Δ side) and
/// `inner = (B2, A2)` (the δ side).
///
/// The three orders agree when `[A1, A2] = [B1, B2] = 0`; with noncommuting
/// input they are three different (well-defined) maps.
pub fn compose_mn(
    outer: Pair<'_>,
    inner: Pair<'_>,
    x: &CMatrix,
    m: usize,
    n: usize,
    order: ComposeOrder,
) -> Result<CMatrix> {
    outer.check(x)?;
    inner.check(x)?;
    check_order(m)?;
    check_order(n)?;
    match order {
        ComposeOrder::TriangleFirstOutside => {
            let y = delta_power(inner.b, inner.a, x, n)?;
            triangle_power(outer.b, outer.a, &y, m)
        }
        ComposeOrder::DeltaFirstOutside => {
            let y = triangle_power(outer.b, outer.a, x, m)?;
            delta_power(inner.b, inner.a, &y, n)
        }
        ComposeOrder::DoubleSum => {
            let b1 = outer.b.powers(m);
            let a1 = outer.a.powers(m);
            let b2 = inner.b.powers(n);
            let a2 = inner.a.powers(n);
            let mut acc = CMatrix::zeros(x.dim());
            for j in 0..=m {
                let cj = binomial(m, j)?;
                let left = &b1[m - j];
                let right = &a1[m - j];
                for k in 0..=n {
                    let w = signed(cj * binomial(n, k)?, j + k);
                    let term = &(&(&(left * &b2[n - k]) * x) * right) * &a2[k];
                    acc = &acc + &term.scale_real(w);
                }
            }
            Ok(acc)
        }
    }
}

/// `Σ_j C(k,j) ‖B^{k−j}‖₂ ‖A^{k−j}‖₂`: the total weight of the terms in `Δ^k_{B,A}`.
pub fn triangle_weight(pair: Pair<'_>, k: usize) -> Result<f64> {
    check_order(k)?;
    let bn = power_norms(pair.b, k);
    let an = power_norms(pair.a, k);
    (0..=k).try_fold(0.0, |s, j| Ok(s + binomial(k, j)? as f64 * bn[k - j] * an[k - j]))
}

/// `Σ_j C(k,j) ‖B^{k−j}‖₂ ‖A^j‖₂`: the total weight of the terms in `δ^k_{B,A}`.
pub fn delta_weight(pair: Pair<'_>, k: usize) -> Result<f64> {
    check_order(k)?;
    let bn = power_norms(pair.b, k);
    let an = power_norms(pair.a, k);
    (0..=k).try_fold(0.0, |s, j| Ok(s + binomial(k, j)? as f64 * bn[k - j] * an[j]))
}

fn power_norms(m: &CMatrix, k: usize) -> Vec<f64> {
    m.powers(k).iter().map(CMatrix::spectral_norm).collect()
}

/// Zero-test scale for `Δ^m_{B,A}(X)`.
pub fn triangle_scale(pair: Pair<'_>, x: &CMatrix, m: usize) -> Result<f64> {
    Ok(x.fro_norm() * triangle_weight(pair, m)?)
}

/// Zero-test scale for `δ^n_{B,A}(X)`.
pub fn delta_scale(pair: Pair<'_>, x: &CMatrix, n: usize) -> Result<f64> {
    Ok(x.fro_norm() * delta_weight(pair, n)?)
}

/// Zero-test scale for the composed transform (any evaluation order).
pub fn compose_scale(outer: Pair<'_>, inner: Pair<'_>, x: &CMatrix, m: usize, n: usize) -> Result<f64> {
    Ok(x.fro_norm() * triangle_weight(outer, m)? * delta_weight(inner, n)?)
}

/// A linear map on `d×d` matrices, stored as the `d²×d²` matrix that acts on
/// the column-stacked `vec(X)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperOp {
    operand_dim: usize,
    matrix: CMatrix,
}

impl SuperOp {
    pub fn operand_dim(&self) -> usize {
        self.operand_dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &CMatrix) -> Result<CMatrix> {
        ensure_same_dim(self.operand_dim, x.dim())?;
        let v = self.matrix.apply_vec(&x.vec_col());
        CMatrix::from_vec_col(self.operand_dim, &v)
    }

    /// `self ∘ other`.
    pub fn then_after(&self, other: &SuperOp) -> Result<SuperOp> {
        ensure_same_dim(self.operand_dim, other.operand_dim)?;
        Ok(SuperOp { operand_dim: self.operand_dim, matrix: &self.matrix * &other.matrix })
    }

    pub fn pow(&self, k: usize) -> SuperOp {
        SuperOp { operand_dim: self.operand_dim, matrix: self.matrix.pow(k) }
    }
}

/// What [`as_superop`] should realize.
#[derive(Debug, Clone, Copy)]
pub enum SuperSpec<'a> {
    Delta { pair: Pair<'a>, n: usize },
    Triangle { pair: Pair<'a>, m: usize },
    /// Triangle-first-outside composition.
    ComposeMn { outer: Pair<'a>, inner: Pair<'a>, m: usize, n: usize },
}

/// Builds the superoperator under the default size cap.
pub fn as_superop(spec: SuperSpec<'_>) -> Result<SuperOp> {
    as_superop_with_limit(spec, DEFAULT_MAX_SUPEROP_DIM)
}

/// Builds the superoperator from `(A^k)ᵀ ⊗ B^l` blocks weighted by signed
/// binomial coefficients.
pub fn as_superop_with_limit(spec: SuperSpec<'_>, max_dim: usize) -> Result<SuperOp> {
    match spec {
        SuperSpec::Delta { pair, n } => {
            let d = pair_dim(pair)?;
            check_super_dim(d, max_dim)?;
            check_order(n)?;
            let bp = pair.b.powers(n);
            let ap = pair.a.powers(n);
            let mut acc = CMatrix::zeros(d * d);
            for j in 0..=n {
                let w = Complex64::new(signed(binomial(n, j)?, j), 0.0);
                let block = ap[j].transpose().kron_with_limit(&bp[n - j], max_dim)?;
                acc = &acc + &block.scale(w);
            }
            Ok(SuperOp { operand_dim: d, matrix: acc })
        }
        SuperSpec::Triangle { pair, m } => {
            let d = pair_dim(pair)?;
            check_super_dim(d, max_dim)?;
            check_order(m)?;
            let bp = pair.b.powers(m);
            let ap = pair.a.powers(m);
            let mut acc = CMatrix::zeros(d * d);
            for j in 0..=m {
                let w = Complex64::new(signed(binomial(m, j)?, j), 0.0);
                let block = ap[m - j].transpose().kron_with_limit(&bp[m - j], max_dim)?;
                acc = &acc + &block.scale(w);
            }
            Ok(SuperOp { operand_dim: d, matrix: acc })
        }
        SuperSpec::ComposeMn { outer, inner, m, n } => {
            ensure_same_dim(pair_dim(outer)?, pair_dim(inner)?)?;
            let tri = as_superop_with_limit(SuperSpec::Triangle { pair: outer, m }, max_dim)?;
            let del = as_superop_with_limit(SuperSpec::Delta { pair: inner, n }, max_dim)?;
            tri.then_after(&del)
        }
    }
}

fn pair_dim(pair: Pair<'_>) -> Result<usize> {
    ensure_same_dim(pair.b.dim(), pair.a.dim())?;
    Ok(pair.b.dim())
}

fn check_super_dim(d: usize, max_dim: usize) -> Result<()> {
    let sd = d * d;
    if sd > max_dim {
        Err(Error::DimTooLarge { dim: sd, max: max_dim })
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::c;

    fn jordan() -> CMatrix {
        CMatrix::from_real(2, &[1.0, 1.0, 0.0, 1.0])
    }

    fn jordan_adj() -> CMatrix {
        CMatrix::from_real(2, &[1.0, 0.0, 1.0, 1.0])
    }

    fn sample(dim: usize, seed: u64) -> CMatrix {
        // small deterministic LCG; test-local
        let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut next = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        CMatrix::from_fn(dim, |_, _| c(next(), next()))
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(0, 0).unwrap(), 1);
        assert_eq!(binomial(5, 2).unwrap(), 10);
        assert_eq!(binomial(6, 7).unwrap(), 0);
        assert_eq!(binomial(62, 31).unwrap(), 465428353255261088);
        assert_eq!(binomial(63, 1).unwrap_err().code(), "order-too-large");
    }

    #[test]
    fn single_applications() {
        let x = sample(3, 1);
        let i = CMatrix::identity(3);
        assert_eq!(delta_apply(&i, &i, &x).unwrap().fro_norm(), 0.0);
        assert_eq!(triangle_apply(&i, &i, &x).unwrap().fro_norm(), 0.0);
        let d = delta_apply(&jordan_adj(), &jordan(), &CMatrix::identity(2)).unwrap();
        assert_eq!(d, CMatrix::from_real(2, &[0.0, -1.0, 1.0, 0.0]));
        let t = triangle_apply(&jordan_adj(), &jordan(), &d).unwrap();
        assert_eq!(t.fro_norm(), 0.0);
    }

    #[test]
    fn selfadjoint_and_unitary_roots() {
        let h = CMatrix::from_vec(2, vec![c(2.0, 0.0), c(1.0, -1.0), c(1.0, 1.0), c(-3.0, 0.0)]).unwrap();
        let i2 = CMatrix::identity(2);
        assert!(delta_apply(&h.adjoint(), &h, &i2).unwrap().fro_norm() < 1e-15);
        assert!(delta_power(&h.adjoint(), &h, &i2, 1).unwrap().fro_norm() < 1e-15);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let u = CMatrix::from_vec(2, vec![c(s, 0.0), c(0.0, s), c(0.0, s), c(s, 0.0)]).unwrap();
        assert!(triangle_apply(&u.adjoint(), &u, &i2).unwrap().fro_norm() < 1e-15);
        assert!(triangle_power(&u.adjoint(), &u, &i2, 1).unwrap().fro_norm() < 1e-15);
    }

    #[test]
    fn jordan_powers() {
        let i2 = CMatrix::identity(2);
        let (b, a) = (jordan_adj(), jordan());
        assert_eq!(delta_power(&b, &a, &i2, 2).unwrap(), CMatrix::from_real(2, &[0.0, 0.0, 0.0, -2.0]));
        assert_eq!(delta_power(&b, &a, &i2, 3).unwrap().fro_norm(), 0.0);
        assert_eq!(triangle_power(&b, &a, &i2, 2).unwrap(), CMatrix::from_real(2, &[0.0, 0.0, 0.0, 2.0]));
        assert_eq!(triangle_power(&b, &a, &i2, 3).unwrap().fro_norm(), 0.0);
        assert_eq!(delta_power(&b, &a, &i2, 0).unwrap(), i2);
    }

    #[test]
    fn order_guard() {
        let i2 = CMatrix::identity(2);
        assert_eq!(delta_power(&i2, &i2, &i2, 63).unwrap_err().code(), "order-too-large");
        assert_eq!(triangle_power(&i2, &i2, &i2, 63).unwrap_err().code(), "order-too-large");
        assert!(delta_power(&i2, &i2, &i2, 62).is_ok());
    }

    #[test]
    fn dim_mismatch() {
        let (a, b) = (CMatrix::identity(2), CMatrix::identity(3));
        assert_eq!(delta_apply(&a, &a, &b).unwrap_err().code(), "dim-mismatch");
        assert_eq!(triangle_power(&a, &b, &a, 1).unwrap_err().code(), "dim-mismatch");
        let p = Pair::new(&a, &a);
        let q = Pair::new(&b, &b);
        assert!(compose_mn(p, q, &a, 1, 1, ComposeOrder::DoubleSum).is_err());
    }

    #[test]
    fn compose_identity_and_jordan() {
        let x = sample(2, 9);
        let i2 = CMatrix::identity(2);
        for order in ComposeOrder::ALL {
            let r = compose_mn(Pair::new(&i2, &i2), Pair::new(&i2, &i2), &x, 1, 1, order).unwrap();
            assert_eq!(r.fro_norm(), 0.0);
        }
        let (b, a) = (jordan_adj(), jordan());
        let p = Pair::new(&b, &a);
        let r = compose_mn(p, p, &i2, 1, 1, ComposeOrder::TriangleFirstOutside).unwrap();
        assert_eq!(r.fro_norm(), 0.0);
    }

    #[test]
    fn superop_trivial_and_power_law() {
        let i3 = CMatrix::identity(3);
        let s = as_superop(SuperSpec::Triangle { pair: Pair::new(&i3, &i3), m: 1 }).unwrap();
        assert_eq!(s.matrix().dim(), 9);
        assert_eq!(s.matrix().fro_norm(), 0.0);

        let (b, a) = (sample(3, 2), sample(3, 3));
        let p = Pair::new(&b, &a);
        let d1 = as_superop(SuperSpec::Delta { pair: p, n: 1 }).unwrap();
        let d2 = as_superop(SuperSpec::Delta { pair: p, n: 2 }).unwrap();
        let sq = d1.pow(2);
        assert!((d2.matrix() - sq.matrix()).fro_norm() < 1e-12 * d2.matrix().fro_norm());
    }

    #[test]
    fn superop_apply_matches_direct() {
        for seed in 0..20 {
            let (b, a, x) = (sample(3, seed), sample(3, seed + 100), sample(3, seed + 200));
            let s = as_superop(SuperSpec::Delta { pair: Pair::new(&b, &a), n: 1 }).unwrap();
            let direct = delta_apply(&b, &a, &x).unwrap();
            assert!((&s.apply(&x).unwrap() - &direct).fro_norm() <= 1e-13 * (1.0 + direct.fro_norm()));
        }
    }

    #[test]
    fn superop_size_guard() {
        let i = CMatrix::identity(5);
        let err = as_superop_with_limit(SuperSpec::Delta { pair: Pair::new(&i, &i), n: 1 }, 16).unwrap_err();
        assert_eq!(err.code(), "dim-too-large");
    }

    #[test]
    fn scales_bound_term_sums() {
        let two = CMatrix::identity(2).scale_real(2.0);
        let i2 = CMatrix::identity(2);
        // Δ^m_{2I,2I}(I) = 3^m I; the weight is Σ C(m,j) 4^{m−j} = 5^m
        let w = triangle_weight(Pair::new(&two, &two), 3).unwrap();
        assert!((w - 125.0).abs() < 1e-9);
        let r = triangle_power(&two, &two, &i2, 3).unwrap();
        assert!((r.fro_norm() - 27.0 * 2f64.sqrt()).abs() < 1e-12);
        let s = triangle_scale(Pair::new(&two, &two), &i2, 3).unwrap();
        assert!(r.fro_norm() <= s);
    }
}
