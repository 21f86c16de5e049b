//! Exact Gaussian-rational evaluation of the binomial sums, used as an
//! oracle for the floating-point path on small integer matrices.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::{run_cell, Suite, VerificationReport};
use crate::elementary::{binomial, compose_mn, delta_power, triangle_power, ComposeOrder, Pair};
use crate::error::{Error, Result};
use crate::matrix::{c, CMatrix};
use crate::rng::Rng;
use crate::tolerance::ToleranceContext;

pub const MAX_EXACT_DIM: usize = 4;
pub const MAX_EXACT_ORDER: usize = 3;

type Q = Complex<BigRational>;

fn q_int(v: i64) -> Q {
    Complex::new(BigRational::from_integer(BigInt::from(v)), BigRational::zero())
}

/// Square matrix over `ℚ[i]`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct QMatrix {
    dim: usize,
    data: Vec<Q>,
}

impl QMatrix {
    pub fn zeros(dim: usize) -> Self {
        QMatrix { dim, data: vec![q_int(0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = q_int(1);
        }
        m
    }

    /// From integer real and imaginary parts.
    pub fn from_gaussian_ints(dim: usize, re: &[i64], im: &[i64]) -> Self {
        assert_eq!(re.len(), dim * dim);
        assert_eq!(im.len(), dim * dim);
        let data = re
            .iter()
            .zip(im)
            .map(|(&r, &i)| Complex::new(BigRational::from_integer(r.into()), BigRational::from_integer(i.into())))
            .collect();
        QMatrix { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mul(&self, other: &Self) -> Self {
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let aik = &self.data[i * d + k];
                if aik.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let t = aik * &other.data[k * d + j];
                    out.data[i * d + j] = &out.data[i * d + j] + t;
                }
            }
        }
        out
    }

    fn add_scaled(&mut self, other: &Self, w: &BigInt) {
        let w = Complex::new(BigRational::from_integer(w.clone()), BigRational::zero());
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a = &*a + b * &w;
        }
    }

    fn powers(&self, k: usize) -> Vec<Self> {
        let mut out = vec![Self::identity(self.dim)];
        for i in 0..k {
            out.push(out[i].mul(self));
        }
        out
    }

    pub fn to_float(&self) -> CMatrix {
        let data = self
            .data
            .iter()
            .map(|z| c(z.re.to_f64().unwrap_or(f64::NAN), z.im.to_f64().unwrap_or(f64::NAN)))
            .collect();
        CMatrix::from_vec(self.dim, data).expect("finite conversion of small rationals")
    }
}

fn signed_binomial(n: usize, k: usize, extra_sign: usize) -> Result<BigInt> {
    let b = BigInt::from(binomial(n, k)?);
    Ok(if (k + extra_sign) % 2 == 0 { b } else { -b })
}

fn check(b: &QMatrix, a: &QMatrix, x: &QMatrix) -> Result<()> {
    if b.dim != a.dim || b.dim != x.dim {
        return Err(Error::DimMismatch { left: b.dim, right: if b.dim != a.dim { a.dim } else { x.dim } });
    }
    Ok(())
}

/// `Σ_j (−1)^j C(m,j) B^{m−j} X A^{m−j}`.
pub fn exact_triangle(b: &QMatrix, a: &QMatrix, x: &QMatrix, m: usize) -> Result<QMatrix> {
    check(b, a, x)?;
    let (bp, ap) = (b.powers(m), a.powers(m));
    let mut acc = QMatrix::zeros(x.dim);
    for j in 0..=m {
        acc.add_scaled(&bp[m - j].mul(x).mul(&ap[m - j]), &signed_binomial(m, j, 0)?);
    }
    Ok(acc)
}

/// `Σ_j (−1)^j C(n,j) B^{n−j} X A^j`.
pub fn exact_delta(b: &QMatrix, a: &QMatrix, x: &QMatrix, n: usize) -> Result<QMatrix> {
    check(b, a, x)?;
    let (bp, ap) = (b.powers(n), a.powers(n));
    let mut acc = QMatrix::zeros(x.dim);
    for j in 0..=n {
        acc.add_scaled(&bp[n - j].mul(x).mul(&ap[j]), &signed_binomial(n, j, 0)?);
    }
    Ok(acc)
}

/// The composed transform as one double sum.
pub fn exact_compose(b1: &QMatrix, a1: &QMatrix, b2: &QMatrix, a2: &QMatrix, x: &QMatrix, m: usize, n: usize) -> Result<QMatrix> {
    check(b1, a1, x)?;
    check(b2, a2, x)?;
    let (b1p, a1p, b2p, a2p) = (b1.powers(m), a1.powers(m), b2.powers(n), a2.powers(n));
    let mut acc = QMatrix::zeros(x.dim);
    for j in 0..=m {
        for k in 0..=n {
            let w = signed_binomial(m, j, 0)? * signed_binomial(n, k, 0)?;
            let term = b1p[m - j].mul(&b2p[n - k]).mul(x).mul(&a2p[k]).mul(&a1p[m - j]);
            acc.add_scaled(&term, &w);
        }
    }
    Ok(acc)
}

fn random_gaussian_int(rng: &mut Rng, dim: usize) -> QMatrix {
    let re: Vec<i64> = (0..dim * dim).map(|_| rng.int_in(-2, 2)).collect();
    let im: Vec<i64> = (0..dim * dim).map(|_| rng.int_in(-2, 2)).collect();
    QMatrix::from_gaussian_ints(dim, &re, &im)
}

/// `count` random Gaussian-integer instances (entries in `[−2,2] + i[−2,2]`):
/// exact and floating evaluations agree to `1e-9·max(‖exact‖, 1)`.
pub fn verify_exact(seed: u64, dim: usize, count: usize, max_order: usize) -> VerificationReport {
    run_cell(Suite::Lemmas, "exact-rational", seed, dim, |r| {
        if dim > MAX_EXACT_DIM || max_order > MAX_EXACT_ORDER {
            return Err(Error::InvalidParam(format!(
                "exact oracle limited to dim ≤ {MAX_EXACT_DIM}, orders ≤ {MAX_EXACT_ORDER}"
            )));
        }
        let tol = ToleranceContext { atol: 0.0, rtol: 1e-9 };
        let mut rng = Rng::derived(seed, 0xe7);
        for i in 0..count {
            let [b1, a1, b2, a2, x] = std::array::from_fn(|_| random_gaussian_int(&mut rng, dim));
            let m = 1 + rng.below(max_order);
            let n = 1 + rng.below(max_order);
            let [fb1, fa1, fb2, fa2, fx] = [&b1, &a1, &b2, &a2, &x].map(QMatrix::to_float);
            let mut cmp = |label: String, exact: QMatrix, float: CMatrix| {
                let e = exact.to_float();
                r.concl(tol.check_zero(label, (&e - &float).fro_norm(), e.fro_norm().max(1.0)));
            };
            cmp(format!("#{i} Δ^{m}"), exact_triangle(&b1, &a1, &x, m)?, triangle_power(&fb1, &fa1, &fx, m)?);
            cmp(format!("#{i} δ^{n}"), exact_delta(&b2, &a2, &x, n)?, delta_power(&fb2, &fa2, &fx, n)?);
            let float = compose_mn(Pair::new(&fb1, &fa1), Pair::new(&fb2, &fa2), &fx, m, n, ComposeOrder::TriangleFirstOutside)?;
            cmp(format!("#{i} ({m},{n})"), exact_compose(&b1, &a1, &b2, &a2, &x, m, n)?, float);
        }
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jordan_exact() {
        let j = QMatrix::from_gaussian_ints(2, &[1, 1, 0, 1], &[0; 4]);
        let js = QMatrix::from_gaussian_ints(2, &[1, 0, 1, 1], &[0; 4]);
        let i = QMatrix::identity(2);
        let d2 = exact_triangle(&js, &j, &i, 2).unwrap();
        assert_eq!(d2, QMatrix::from_gaussian_ints(2, &[0, 0, 0, 2], &[0; 4]));
        assert_eq!(exact_triangle(&js, &j, &i, 3).unwrap(), QMatrix::zeros(2));
        assert_eq!(exact_delta(&js, &j, &i, 2).unwrap(), QMatrix::from_gaussian_ints(2, &[0, 0, 0, -2], &[0; 4]));
        assert_eq!(exact_compose(&js, &j, &js, &j, &i, 1, 1).unwrap(), QMatrix::zeros(2));
    }

    #[test]
    fn float_agreement() {
        let r = verify_exact(3, 4, 5, 3);
        assert!(r.conclusions.iter().all(|c| c.pass), "{r:?}");
        assert!(verify_exact(3, 5, 1, 3).conclusions.iter().any(|c| !c.pass));
    }
}
