//! Dense complex square matrices.
//!
//! [`CMatrix`] is the concrete stand-in for every operator the crate talks
//! about. Storage is row-major `Vec<Complex64>` of length `dim²`, and every
//! constructor rejects non-finite entries, so a `CMatrix` in hand is always
//! square and finite.
//!
//! The arithmetic operator impls (`&a * &b`, `&a + &b`, ...) panic on a
//! dimension mismatch; the `checked_*` methods return [`Error::DimMismatch`]
//! instead and are what public entry points use to validate user input.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{ensure_same_dim, Error, Result};
use crate::tolerance::ToleranceContext;

pub const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Default cap on input/generated matrix dimension.
pub const DEFAULT_MAX_DIM: usize = 16;
/// Default cap on the dimension of a Kronecker product.
pub const DEFAULT_MAX_KRON_DIM: usize = 64;
/// Default cap on the dimension of a superoperator (d² for d×d operands).
pub const DEFAULT_MAX_SUPEROP_DIM: usize = 4096;

/// Environment variable overriding [`Limits::max_dim`].
pub const MAX_DIM_ENV: &str = "ISOSYM_MAX_DIM";

/// Dimension caps applied at the edges of the library.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    pub max_dim: usize,
    pub max_kron_dim: usize,
    pub max_superop_dim: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_dim: DEFAULT_MAX_DIM,
            max_kron_dim: DEFAULT_MAX_KRON_DIM,
            max_superop_dim: DEFAULT_MAX_SUPEROP_DIM,
        }
    }
}

impl Limits {
    /// Defaults, with `max_dim` taken from `ISOSYM_MAX_DIM` when it is set.
    pub fn from_env() -> Result<Self> {
        let mut limits = Limits::default();
        if let Ok(raw) = std::env::var(MAX_DIM_ENV) {
            let value: usize = raw.trim().parse().map_err(|_| {
                Error::InvalidParam(format!("{MAX_DIM_ENV} must be a positive integer, got `{raw}`"))
            })?;
            if value == 0 {
                return Err(Error::InvalidParam(format!("{MAX_DIM_ENV} must be positive")));
            }
            limits.max_dim = value;
            limits.max_kron_dim = limits.max_kron_dim.max(value);
        }
        Ok(limits)
    }

    pub fn check_dim(&self, dim: usize) -> Result<()> {
        if dim > self.max_dim {
            Err(Error::DimTooLarge { dim, max: self.max_dim })
        } else {
            Ok(())
        }
    }
}

#[derive(Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        CMatrix { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries, validating length and finiteness.
    pub fn from_vec(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParam("matrix dimension must be positive".into()));
        }
        if data.len() != dim * dim {
            return Err(Error::BadLength { len: data.len(), expected: dim * dim });
        }
        if let Some(index) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(CMatrix { dim, data })
    }

    /// Real row-major entries. Panics on bad length or non-finite input; meant
    /// for literals in code and tests.
    pub fn from_real(dim: usize, entries: &[f64]) -> Self {
        Self::from_vec(dim, entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .expect("valid real matrix literal")
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.data[i * dim + j] = f(i, j);
            }
        }
        debug_assert!(m.is_finite());
        m
    }

    pub fn diag(entries: &[Complex64]) -> Self {
        let dim = entries.len();
        Self::from_fn(dim, |i, j| if i == j { entries[i] } else { ZERO })
    }

    pub fn real_diag(entries: &[f64]) -> Self {
        let v: Vec<Complex64> = entries.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::diag(&v)
    }

    /// Upper shift of size `dim`: ones on the first superdiagonal.
    pub fn shift(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if j == i + 1 { ONE } else { ZERO })
    }

    /// Matrix unit `e_{row,col}`.
    pub fn unit(dim: usize, row: usize, col: usize) -> Self {
        let mut m = Self::zeros(dim);
        m.data[row * dim + col] = ONE;
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<Complex64> {
        self.data
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub(crate) fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.dim + col] = value;
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        CMatrix { dim: self.dim, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        CMatrix { dim: self.dim, data: self.data.iter().map(|z| z * s).collect() }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        Self::from_fn(d, |i, j| self.data[j * d + i].conj())
    }

    pub fn transpose(&self) -> Self {
        let d = self.dim;
        Self::from_fn(d, |i, j| self.data[j * d + i])
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        ensure_same_dim(self.dim, other.dim)?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        ensure_same_dim(self.dim, other.dim)?;
        Ok(self - other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        ensure_same_dim(self.dim, other.dim)?;
        Ok(self * other)
    }

    /// `self^k`, with `self^0 = I`.
    pub fn pow(&self, k: usize) -> Self {
        let mut result = Self::identity(self.dim);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// `[I, A, A², ..., A^k]`, built by repeated multiplication.
    pub fn powers(&self, k: usize) -> Vec<Self> {
        let mut out = Vec::with_capacity(k + 1);
        out.push(Self::identity(self.dim));
        for i in 0..k {
            let next = &out[i] * self;
            out.push(next);
        }
        out
    }

    /// `AB - BA`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        ensure_same_dim(self.dim, other.dim)?;
        Ok(&(self * other) - &(other * self))
    }

    /// Kronecker product under the default size cap.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        self.kron_with_limit(other, DEFAULT_MAX_KRON_DIM)
    }

    /// Kronecker product: entry `((i·d_B + k), (j·d_B + l))` is `A_ij · B_kl`.
    pub fn kron_with_limit(&self, other: &Self, max_dim: usize) -> Result<Self> {
        let (da, db) = (self.dim, other.dim);
        let dim = da.checked_mul(db).unwrap_or(usize::MAX);
        if dim > max_dim {
            return Err(Error::DimTooLarge { dim, max: max_dim });
        }
        let mut out = Self::zeros(dim);
        for i in 0..da {
            for j in 0..da {
                let a = self.data[i * da + j];
                if a == ZERO {
                    continue;
                }
                for k in 0..db {
                    for l in 0..db {
                        out.data[(i * db + k) * dim + (j * db + l)] = a * other.data[k * db + l];
                    }
                }
            }
        }
        Ok(out)
    }

    /// Block-diagonal `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let (da, db) = (self.dim, other.dim);
        let mut out = Self::zeros(da + db);
        out.embed(0, self);
        out.embed(da, other);
        out
    }

    /// Writes `block` onto the diagonal starting at `offset`.
    pub(crate) fn embed(&mut self, offset: usize, block: &Self) {
        let d = self.dim;
        for i in 0..block.dim {
            for j in 0..block.dim {
                self.data[(offset + i) * d + offset + j] = block.data[i * block.dim + j];
            }
        }
    }

    /// Copies out the (generally rectangular) sub-block as row-major data.
    pub fn sub_block(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(rows.len() * cols.len());
        for i in rows {
            for j in cols.clone() {
                out.push(self.data[i * self.dim + j]);
            }
        }
        out
    }

    /// Square diagonal block `[start, start+len)`.
    pub fn diag_block(&self, start: usize, len: usize) -> Self {
        let data = self.sub_block(start..start + len, start..start + len);
        CMatrix { dim: len, data }
    }

    pub fn fro_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.dim, self.dim, &self.data)
    }

    pub(crate) fn from_nalgebra(m: &DMatrix<Complex64>) -> Self {
        assert_eq!(m.nrows(), m.ncols());
        let d = m.nrows();
        Self::from_fn(d, |i, j| m[(i, j)])
    }

    fn to_faer(&self) -> faer::Mat<Complex64> {
        faer::Mat::from_fn(self.dim, self.dim, |i, j| self.get(i, j))
    }

    /// Singular values in descending order.
    pub fn singular_values(&self) -> Vec<f64> {
        let mut s = self.to_faer().singular_values().expect("svd did not converge");
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }

    /// Full SVD `A = U Σ V*` with singular values sorted descending.
    pub fn svd(&self) -> Svd {
        let d = self.dim;
        let svd = self.to_faer().svd().expect("svd did not converge");
        let (u, v, s) = (svd.U(), svd.V(), svd.S().column_vector());
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&a, &b| s[b].re.total_cmp(&s[a].re));
        let sigma = order.iter().map(|&k| s[k].re).collect();
        let u = Self::from_fn(d, |i, j| u[(i, order[j])]);
        let v = Self::from_fn(d, |i, j| v[(i, order[j])]);
        Svd { u, sigma, v }
    }

    /// Largest singular value.
    pub fn spectral_norm(&self) -> f64 {
        self.singular_values().first().copied().unwrap_or(0.0)
    }

    /// Numerical rank: singular values above `atol + rtol·σ_max`.
    pub fn rank(&self, tol: &ToleranceContext) -> usize {
        let s = self.singular_values();
        let smax = s.first().copied().unwrap_or(0.0);
        let threshold = tol.threshold(smax);
        s.iter().filter(|&&x| x > threshold).count()
    }

    /// 2-norm condition number; infinite for singular input.
    pub fn condition_number(&self) -> f64 {
        let s = self.singular_values();
        let (max, min) = (s[0], s[s.len() - 1]);
        if min == 0.0 {
            f64::INFINITY
        } else {
            max / min
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        let inv = self.to_nalgebra().try_inverse().ok_or(Error::Singular)?;
        let out = Self::from_nalgebra(&inv);
        if out.is_finite() {
            Ok(out)
        } else {
            Err(Error::Singular)
        }
    }

    /// Column-stacking vectorization.
    pub fn vec_col(&self) -> Vec<Complex64> {
        let d = self.dim;
        let mut v = Vec::with_capacity(d * d);
        for j in 0..d {
            for i in 0..d {
                v.push(self.data[i * d + j]);
            }
        }
        v
    }

    /// Inverse of [`CMatrix::vec_col`].
    pub fn from_vec_col(dim: usize, v: &[Complex64]) -> Result<Self> {
        if v.len() != dim * dim {
            return Err(Error::BadLength { len: v.len(), expected: dim * dim });
        }
        let mut m = Self::zeros(dim);
        for j in 0..dim {
            for i in 0..dim {
                m.data[i * dim + j] = v[j * dim + i];
            }
        }
        Ok(m)
    }

    /// Matrix-vector product.
    pub fn apply_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim);
        let d = self.dim;
        (0..d)
            .map(|i| (0..d).map(|j| self.data[i * d + j] * v[j]).sum())
            .collect()
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson { dim: self.dim, data: self.data.iter().map(|z| [z.re, z.im]).collect() }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: MatrixJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::try_from(raw)
    }
}

/// Singular value decomposition with descending singular values.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: CMatrix,
    pub sigma: Vec<f64>,
    pub v: CMatrix,
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self.get(i, j);
                write!(f, "{:>10.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl<'a> Add<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;

    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in add");
        CMatrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl<'a> Sub<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;

    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in sub");
        CMatrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;

    fn neg(self) -> CMatrix {
        CMatrix { dim: self.dim, data: self.data.iter().map(|z| -z).collect() }
    }
}

impl<'a> Mul<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in matmul");
        let d = self.dim;
        let mut out = vec![ZERO; d * d];
        for i in 0..d {
            let row = &self.data[i * d..(i + 1) * d];
            let out_row = &mut out[i * d..(i + 1) * d];
            for (k, &a) in row.iter().enumerate() {
                if a == ZERO {
                    continue;
                }
                let rhs_row = &rhs.data[k * d..(k + 1) * d];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        CMatrix { dim: d, data: out }
    }
}

/// Wire form: `{"dim": d, "data": [[re, im], ...]}`, row-major, length d².
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub dim: usize,
    pub data: Vec<[f64; 2]>,
}

impl TryFrom<MatrixJson> for CMatrix {
    type Error = Error;

    fn try_from(raw: MatrixJson) -> Result<Self> {
        let data = raw.data.into_iter().map(|[re, im]| Complex64::new(re, im)).collect();
        CMatrix::from_vec(raw.dim, data)
    }
}

impl Serialize for CMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(deserializer)?;
        CMatrix::try_from(raw).map_err(serde::de::Error::custom)
    }
}

/// `Complex64` shorthand.
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
