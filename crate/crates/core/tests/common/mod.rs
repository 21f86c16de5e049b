//! Test-side oracles, written against plain row-major arrays so they share
//! no arithmetic with the library.

#![allow(dead_code)]

use isosym::CMatrix;
use num_complex::Complex64;

/// Row-major dense square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Dense {
    pub n: usize,
    pub d: Vec<Complex64>,
}

impl Dense {
    pub fn zeros(n: usize) -> Self {
        Dense { n, d: vec![Complex64::new(0.0, 0.0); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.d[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_cm(m: &CMatrix) -> Self {
        let n = m.dim();
        Dense { n, d: (0..n * n).map(|k| m.get(k / n, k % n)).collect() }
    }

    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.d[i * self.n + j]
    }

    pub fn mul(&self, o: &Dense) -> Dense {
        let n = self.n;
        let mut out = Dense::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.at(i, k);
                for j in 0..n {
                    out.d[i * n + j] += a * o.at(k, j);
                }
            }
        }
        out
    }

    pub fn sub(&self, o: &Dense) -> Dense {
        Dense { n: self.n, d: self.d.iter().zip(&o.d).map(|(a, b)| a - b).collect() }
    }

    pub fn transpose(&self) -> Dense {
        let n = self.n;
        Dense { n, d: (0..n * n).map(|k| self.at(k % n, k / n)).collect() }
    }

    pub fn fro(&self) -> f64 {
        self.d.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Column-stacked `vec`.
    pub fn vec_col(&self) -> Vec<Complex64> {
        let n = self.n;
        (0..n * n).map(|k| self.at(k % n, k / n)).collect()
    }

    pub fn from_vec_col(n: usize, v: &[Complex64]) -> Dense {
        let mut m = Dense::zeros(n);
        for (k, z) in v.iter().enumerate() {
            m.d[(k % n) * n + k / n] = *z;
        }
        m
    }

    /// `self ⊗ o`.
    pub fn kron(&self, o: &Dense) -> Dense {
        let (p, q) = (self.n, o.n);
        let n = p * q;
        let mut out = Dense::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.d[i * n + j] = self.at(i / q, j / q) * o.at(i % q, j % q);
            }
        }
        out
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.at(i, j) * v[j]).sum()).collect()
    }
}

pub fn dist(a: &CMatrix, b: &Dense) -> f64 {
    Dense::from_cm(a).sub(b).fro()
}

/// `Δ^m_{B,A}(X)` by `m` single steps `Y ↦ BYA − Y`.
pub fn tri_iter(b: &Dense, a: &Dense, x: &Dense, m: usize) -> Dense {
    (0..m).fold(x.clone(), |y, _| b.mul(&y).mul(a).sub(&y))
}

/// `δ^n_{B,A}(X)` by `n` single steps `Y ↦ BY − YA`.
pub fn del_iter(b: &Dense, a: &Dense, x: &Dense, n: usize) -> Dense {
    (0..n).fold(x.clone(), |y, _| b.mul(&y).sub(&y.mul(a)))
}

/// Step superoperators on column-stacked `vec`: `Aᵀ⊗B − I` and `I⊗B − Aᵀ⊗I`.
pub fn tri_super(b: &Dense, a: &Dense) -> Dense {
    let n = a.n;
    a.transpose().kron(b).sub(&Dense::identity(n * n))
}

pub fn del_super(b: &Dense, a: &Dense) -> Dense {
    let n = a.n;
    Dense::identity(n).kron(b).sub(&a.transpose().kron(&Dense::identity(n)))
}

pub fn super_power_apply(op: &Dense, x: &Dense, k: usize) -> Dense {
    let v = (0..k).fold(x.vec_col(), |v, _| op.apply(&v));
    Dense::from_vec_col(x.n, &v)
}

/// Gaussian-integer matrices with exact `i128` arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussInt {
    pub n: usize,
    pub d: Vec<(i128, i128)>,
}

impl GaussInt {
    pub fn new(n: usize, re: &[i64], im: &[i64]) -> Self {
        GaussInt { n, d: re.iter().zip(im).map(|(&r, &i)| (r as i128, i as i128)).collect() }
    }

    pub fn mul(&self, o: &GaussInt) -> GaussInt {
        let n = self.n;
        let mut d = vec![(0i128, 0i128); n * n];
        for i in 0..n {
            for k in 0..n {
                let (ar, ai) = self.d[i * n + k];
                for j in 0..n {
                    let (br, bi) = o.d[k * n + j];
                    let e = &mut d[i * n + j];
                    e.0 += ar * br - ai * bi;
                    e.1 += ar * bi + ai * br;
                }
            }
        }
        GaussInt { n, d }
    }

    pub fn sub(&self, o: &GaussInt) -> GaussInt {
        GaussInt { n: self.n, d: self.d.iter().zip(&o.d).map(|(a, b)| (a.0 - b.0, a.1 - b.1)).collect() }
    }

    pub fn to_cm(&self) -> CMatrix {
        CMatrix::from_vec(self.n, self.d.iter().map(|&(r, i)| Complex64::new(r as f64, i as f64)).collect()).unwrap()
    }

    pub fn tri(&self, a: &GaussInt, x: &GaussInt, m: usize) -> GaussInt {
        (0..m).fold(x.clone(), |y, _| self.mul(&y).mul(a).sub(&y))
    }

    pub fn del(&self, a: &GaussInt, x: &GaussInt, n: usize) -> GaussInt {
        (0..n).fold(x.clone(), |y, _| self.mul(&y).sub(&y.mul(a)))
    }
}
