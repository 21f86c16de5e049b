//! Drazin index, core–nilpotent splitting and Drazin inverse.
//!
//! With `p` the index, `range(T^p)` and `null(T^p)` are complementary
//! `T`-invariant subspaces. Taking orthonormal bases of each (from the SVD
//! of `T^p`) as the columns of `S` gives `S⁻¹TS = T₁ ⊕ T₂` with `T₁`
//! invertible and `T₂^p = 0`, and `T_d = S (T₁⁻¹ ⊕ 0) S⁻¹`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use crate::tolerance::{ToleranceContext, ZeroTest};

/// Largest condition number of `S` accepted by [`core_nilpotent`].
pub const MAX_SPLITTING_COND: f64 = 1e8;

/// Smallest `p ≥ 1` with `rank(T^p) = rank(T^{p+1})`.
pub fn drazin_index(t: &CMatrix, tol: &ToleranceContext) -> usize {
    let mut power = t.clone();
    let mut rank = power.rank(tol);
    for p in 1..=t.dim() {
        let next = &power * t;
        let next_rank = next.rank(tol);
        if next_rank == rank {
            return p;
        }
        power = next;
        rank = next_rank;
    }
    t.dim()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DrazinDecomposition {
    /// Columns: basis of `range(T^p)` then basis of `null(T^p)`.
    pub s: CMatrix,
    pub s_inv: CMatrix,
    /// Invertible core; absent when `T` is nilpotent.
    pub t1: Option<CMatrix>,
    /// Nilpotent part; absent when `T` is invertible.
    pub t2: Option<CMatrix>,
    pub p: usize,
    pub td: CMatrix,
    pub core_dim: usize,
    pub diagnostics: DrazinDiagnostics,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DrazinDiagnostics {
    pub splitting_cond: f64,
    pub core_cond: f64,
    /// `‖T − S(T₁ ⊕ T₂)S⁻¹‖_F`
    pub reconstruction: ZeroTest,
    /// `‖T₂^p‖_F`
    pub nilpotency: ZeroTest,
    /// `‖T₂^{p−1}‖_F`, expected clearly nonzero (zero for `p = 1`).
    pub nilpotent_below_index: f64,
    /// `‖[T_d, T]‖_F`
    pub commutes: ZeroTest,
    /// `‖T_d² T − T_d‖_F`
    pub outer_inverse: ZeroTest,
    /// `‖T^{p+1} T_d − T^p‖_F`
    pub index_identity: ZeroTest,
    /// `‖T_d T T_d − T_d‖_F`
    pub reflexive: ZeroTest,
}

impl DrazinDiagnostics {
    pub fn all_pass(&self) -> bool {
        [&self.reconstruction, &self.nilpotency, &self.commutes, &self.outer_inverse, &self.index_identity, &self.reflexive]
            .iter()
            .all(|z| z.pass)
    }
}

impl DrazinDecomposition {
    pub fn dim(&self) -> usize {
        self.s.dim()
    }

    /// `S⁻¹ M S`: `M` in splitting coordinates.
    pub fn to_splitting(&self, m: &CMatrix) -> CMatrix {
        &(&self.s_inv * m) * &self.s
    }

    /// `S M S⁻¹`: back from splitting coordinates.
    pub fn from_splitting(&self, m: &CMatrix) -> CMatrix {
        &(&self.s * m) * &self.s_inv
    }

    /// `T₁T₁⁻¹ ⊕ 0` mapped back: the spectral projection onto the core.
    pub fn core_projection(&self) -> CMatrix {
        let d = self.dim();
        let p = CMatrix::from_fn(d, |i, j| if i == j && i < self.core_dim { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) });
        self.from_splitting(&p)
    }
}

pub fn core_nilpotent(t: &CMatrix, tol: &ToleranceContext) -> Result<DrazinDecomposition> {
    let d = t.dim();
    let p = drazin_index(t, tol);
    let tp = t.pow(p);
    let rank = tp.rank(tol);
    let svd = tp.svd();
    let s = CMatrix::from_fn(d, |i, j| if j < rank { svd.u.get(i, j) } else { svd.v.get(i, j) });
    let splitting_cond = s.condition_number();
    if !(splitting_cond <= MAX_SPLITTING_COND) {
        return Err(Error::IllConditionedSplitting { cond: splitting_cond });
    }
    let s_inv = s.inverse().map_err(|_| Error::IllConditionedSplitting { cond: splitting_cond })?;
    let hat = &(&s_inv * t) * &s;
    let t1 = (rank > 0).then(|| hat.diag_block(0, rank));
    let t2 = (rank < d).then(|| hat.diag_block(rank, d - rank));

    let mut core_cond = 1.0;
    let mut inv_hat = CMatrix::zeros(d);
    if let Some(t1) = &t1 {
        core_cond = t1.condition_number();
        let sv = t1.singular_values();
        let smin = sv[sv.len() - 1];
        if !(smin > tol.threshold(t.spectral_norm())) || !(core_cond <= MAX_SPLITTING_COND) {
            return Err(Error::IllConditionedSplitting { cond: core_cond });
        }
        inv_hat.embed(0, &t1.inverse()?);
    }
    let td = &(&s * &inv_hat) * &s_inv;

    let mut block = CMatrix::zeros(d);
    if let Some(t1) = &t1 {
        block.embed(0, t1);
    }
    if let Some(t2) = &t2 {
        block.embed(rank, t2);
    }
    let recon = &(&(&s * &block) * &s_inv) - t;

    let kappa = splitting_cond * core_cond;
    let tn = t.fro_norm();
    let tdn = td.fro_norm();
    let (nilp, below) = match &t2 {
        Some(t2) => (t2.pow(p).fro_norm(), if p > 1 { t2.pow(p - 1).fro_norm() } else { 0.0 }),
        None => (0.0, 0.0),
    };
    let commutator = &(&td * t) - &(t * &td);
    let outer = &(&(&td * &td) * t) - &td;
    let index_id = &(&t.pow(p + 1) * &td) - &tp;
    let reflexive = &(&(&td * t) * &td) - &td;
    let diagnostics = DrazinDiagnostics {
        splitting_cond,
        core_cond,
        reconstruction: tol.judge(recon.fro_norm(), splitting_cond * tn),
        nilpotency: tol.judge(nilp, splitting_cond * p as f64 * tn.powi(p as i32)),
        nilpotent_below_index: below,
        commutes: tol.judge(commutator.fro_norm(), kappa * 2.0 * tdn * tn),
        outer_inverse: tol.judge(outer.fro_norm(), kappa * (tdn * tdn * tn + tdn)),
        index_identity: tol.judge(index_id.fro_norm(), kappa * (tn.powi(p as i32 + 1) * tdn + tn.powi(p as i32))),
        reflexive: tol.judge(reflexive.fro_norm(), kappa * (tdn * tdn * tn + tdn)),
    };
    Ok(DrazinDecomposition { s, s_inv, t1, t2, p, td, core_dim: rank, diagnostics })
}

pub fn drazin_inverse(t: &CMatrix, tol: &ToleranceContext) -> Result<CMatrix> {
    Ok(core_nilpotent(t, tol)?.td)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::c;

    fn tol() -> ToleranceContext {
        ToleranceContext::default()
    }

    #[test]
    fn index_examples() {
        let inv = CMatrix::from_real(2, &[2.0, 1.0, 0.0, 3.0]);
        assert_eq!(drazin_index(&inv, &tol()), 1);
        assert_eq!(drazin_index(&CMatrix::shift(3), &tol()), 3);
        let t = CMatrix::shift(2).direct_sum(&CMatrix::identity(1));
        assert_eq!(drazin_index(&t, &tol()), 2);
        assert_eq!(drazin_index(&CMatrix::zeros(3), &tol()), 1);
    }

    #[test]
    fn decomposition_examples() {
        let dd = core_nilpotent(&CMatrix::real_diag(&[2.0, 0.0]), &tol()).unwrap();
        assert_eq!(dd.core_dim, 1);
        assert_eq!(dd.p, 1);
        assert!((dd.t1.as_ref().unwrap().get(0, 0) - c(2.0, 0.0)).norm() < 1e-14);
        assert!(dd.t2.as_ref().unwrap().fro_norm() < 1e-14);
        assert!((&dd.td - &CMatrix::real_diag(&[0.5, 0.0])).fro_norm() < 1e-14);
        assert!(dd.diagnostics.all_pass());

        let nil = core_nilpotent(&CMatrix::shift(4), &tol()).unwrap();
        assert_eq!(nil.core_dim, 0);
        assert!(nil.t1.is_none());
        assert_eq!(nil.td.fro_norm(), 0.0);
        assert_eq!(nil.p, 4);

        let idem = CMatrix::from_real(2, &[1.0, 1.0, 0.0, 0.0]);
        let dd = core_nilpotent(&idem, &tol()).unwrap();
        assert!((&dd.td - &idem).fro_norm() < 1e-13);
        assert!(dd.diagnostics.all_pass());
    }

    #[test]
    fn inverse_examples() {
        let inv = CMatrix::from_real(2, &[2.0, 1.0, 0.0, 3.0]);
        let td = drazin_inverse(&inv, &tol()).unwrap();
        assert!((&td - &inv.inverse().unwrap()).fro_norm() < 1e-14);
        assert_eq!(drazin_inverse(&CMatrix::zeros(2), &tol()).unwrap().fro_norm(), 0.0);
        let t = CMatrix::real_diag(&[1.0, -1.0, 0.0]);
        assert!((&drazin_inverse(&t, &tol()).unwrap() - &t).fro_norm() < 1e-14);
    }

    #[test]
    fn jordan_plus_core() {
        let t = CMatrix::shift(3).direct_sum(&CMatrix::from_real(2, &[2.0, 1.0, 0.0, -1.0]));
        let dd = core_nilpotent(&t, &tol()).unwrap();
        assert_eq!(dd.p, 3);
        assert_eq!(dd.core_dim, 2);
        assert!(dd.diagnostics.all_pass());
        assert!(dd.diagnostics.nilpotent_below_index > 0.1);
    }
}
