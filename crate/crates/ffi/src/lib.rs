//! C ABI over `isosym`.
//!
//! Matrices cross the boundary as opaque [`IsosymMatrix`] handles; structured
//! results (classifications, bundles, suite reports) as JSON strings that the
//! caller releases with [`isosym_string_free`]. Every entry point returns an
//! [`IsosymStatus`]; on failure, [`isosym_last_error`] gives the message for
//! the calling thread. Panics are caught and reported as
//! [`IsosymStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use isosym::bundle;
use isosym::classify::{classify_operator, evaluate, minimal_order, OrderKind};
use isosym::drazin::drazin_inverse;
use isosym::elementary::{delta_power, triangle_power};
use isosym::generators::GenSpec;
use isosym::harness::{run_suite, SuiteConfig};
use isosym::{json, CMatrix, Error, Limits, ToleranceContext};
use num_complex::Complex64;

/// Result code of every `isosym_*` call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsosymStatus {
    Ok = 0,
    NullPointer = 1,
    DimMismatch = 2,
    DimTooLarge = 3,
    OrderTooLarge = 4,
    BadLength = 5,
    NonFinite = 6,
    Singular = 7,
    IllConditionedSplitting = 8,
    GenerationFailed = 9,
    InvalidParam = 10,
    Parse = 11,
    Io = 12,
    InvalidUtf8 = 13,
    Panic = 14,
}

impl From<&Error> for IsosymStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::DimMismatch { .. } => IsosymStatus::DimMismatch,
            Error::DimTooLarge { .. } => IsosymStatus::DimTooLarge,
            Error::OrderTooLarge { .. } => IsosymStatus::OrderTooLarge,
            Error::BadLength { .. } => IsosymStatus::BadLength,
            Error::NonFinite { .. } => IsosymStatus::NonFinite,
            Error::Singular => IsosymStatus::Singular,
            Error::IllConditionedSplitting { .. } => IsosymStatus::IllConditionedSplitting,
            Error::GenerationFailed { .. } => IsosymStatus::GenerationFailed,
            Error::InvalidParam(_) => IsosymStatus::InvalidParam,
            Error::Parse(_) => IsosymStatus::Parse,
            Error::Io { .. } => IsosymStatus::Io,
        }
    }
}

/// Which transform a zero test or sweep runs.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsosymTransform {
    /// `Δ^m_{B,A}(X)`.
    Triangle = 0,
    /// `δ^n_{B,A}(X)`.
    Delta = 1,
}

fn order_kind(kind: u32) -> FfiResult<OrderKind> {
    match kind {
        k if k == IsosymTransform::Triangle as u32 => Ok(OrderKind::Triangle),
        k if k == IsosymTransform::Delta as u32 => Ok(OrderKind::Delta),
        k => Err(Error::InvalidParam(format!("unknown transform {k}")).into()),
    }
}

/// Opaque square complex matrix.
pub struct IsosymMatrix(CMatrix);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

enum Failure {
    Lib(Error),
    Null(&'static str),
    Utf8,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type FfiResult<T> = Result<T, Failure>;

fn guard(f: impl FnOnce() -> FfiResult<()>) -> IsosymStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error(String::new());
            IsosymStatus::Ok
        }
        Ok(Err(Failure::Lib(e))) => {
            set_last_error(format!("{}: {e}", e.code()));
            IsosymStatus::from(&e)
        }
        Ok(Err(Failure::Null(what))) => {
            set_last_error(format!("null pointer: {what}"));
            IsosymStatus::NullPointer
        }
        Ok(Err(Failure::Utf8)) => {
            set_last_error("string argument is not valid UTF-8".into());
            IsosymStatus::InvalidUtf8
        }
        Err(_) => {
            set_last_error("internal panic".into());
            IsosymStatus::Panic
        }
    }
}

unsafe fn mat<'a>(p: *const IsosymMatrix, what: &'static str) -> FfiResult<&'a CMatrix> {
    p.as_ref().map(|m| &m.0).ok_or(Failure::Null(what))
}

unsafe fn text<'a>(p: *const c_char, what: &'static str) -> FfiResult<&'a str> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure::Utf8)
}

unsafe fn put<T>(out: *mut T, value: T, what: &'static str) -> FfiResult<()> {
    if out.is_null() {
        return Err(Failure::Null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_matrix(out: *mut *mut IsosymMatrix, m: CMatrix) -> FfiResult<()> {
    if out.is_null() {
        return Err(Failure::Null("out"));
    }
    out.write(Box::into_raw(Box::new(IsosymMatrix(m))));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> FfiResult<()> {
    if out.is_null() {
        return Err(Failure::Null("out"));
    }
    let c = CString::new(s).map_err(|e| Error::Parse(e.to_string()))?;
    out.write(c.into_raw());
    Ok(())
}

fn tolerance(atol: f64, rtol: f64) -> FfiResult<ToleranceContext> {
    Ok(ToleranceContext::new(atol, rtol)?)
}

fn checked(m: CMatrix) -> FfiResult<CMatrix> {
    Limits::from_env()?.check_dim(m.dim())?;
    Ok(m)
}

/// Message for the last failed call on this thread (empty after a success).
/// Valid until the next `isosym_*` call on the same thread.
#[no_mangle]
pub extern "C" fn isosym_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Stable kebab-case name of a status code (`"unknown"` outside the enum).
/// Static storage.
#[no_mangle]
pub extern "C" fn isosym_status_name(status: i32) -> *const c_char {
    let s: &'static CStr = match status {
        0 => c"ok",
        1 => c"null-pointer",
        2 => c"dim-mismatch",
        3 => c"dim-too-large",
        4 => c"order-too-large",
        5 => c"bad-length",
        6 => c"non-finite",
        7 => c"singular",
        8 => c"ill-conditioned-splitting",
        9 => c"generation-failed",
        10 => c"invalid-param",
        11 => c"parse",
        12 => c"io",
        13 => c"invalid-utf8",
        14 => c"panic",
        _ => c"unknown",
    };
    s.as_ptr()
}

/// Frees a string returned by this library. Null is a no-op.
///
/// # Safety
/// `s` must be null or a string from an `isosym_*` call, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn isosym_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a `dim × dim` matrix from `2·dim²` doubles: row-major
/// interleaved `(re, im)` pairs.
///
/// # Safety
/// `data` must point to `len` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn isosym_matrix_new(dim: usize, data: *const f64, len: usize, out: *mut *mut IsosymMatrix) -> IsosymStatus {
    guard(|| {
        if data.is_null() {
            return Err(Failure::Null("data"));
        }
        Limits::from_env()?.check_dim(dim)?;
        if len != 2 * dim * dim {
            return Err(Error::BadLength { len, expected: 2 * dim * dim }.into());
        }
        let raw = std::slice::from_raw_parts(data, len);
        let entries = raw.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect();
        put_matrix(out, CMatrix::from_vec(dim, entries)?)
    })
}

/// Parses a matrix from `{"dim": d, "data": [[re, im], ...]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn isosym_matrix_from_json(json: *const c_char, out: *mut *mut IsosymMatrix) -> IsosymStatus {
    guard(|| {
        let s = text(json, "json")?;
        put_matrix(out, checked(CMatrix::from_json_str(s)?)?)
    })
}

/// Serializes a matrix to JSON; free with [`isosym_string_free`].
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn isosym_matrix_to_json(m: *const IsosymMatrix, out: *mut *mut c_char) -> IsosymStatus {
    guard(|| put_string(out, json::to_string(mat(m, "m")?)?))
}

/// Copies the matrix into `data` as `2·dim²` interleaved doubles.
///
/// # Safety
/// `m` must be a live handle; `data` must have room for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn isosym_matrix_data(m: *const IsosymMatrix, data: *mut f64, len: usize) -> IsosymStatus {
    guard(|| {
        let m = mat(m, "m")?;
        if data.is_null() {
            return Err(Failure::Null("data"));
        }
        let expected = 2 * m.dim() * m.dim();
        if len != expected {
            return Err(Error::BadLength { len, expected }.into());
        }
        let dst = std::slice::from_raw_parts_mut(data, len);
        for (k, z) in m.data().iter().enumerate() {
            dst[2 * k] = z.re;
            dst[2 * k + 1] = z.im;
        }
        Ok(())
    })
}

/// Dimension of a matrix, 0 for null.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn isosym_matrix_dim(m: *const IsosymMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.dim())
}

/// Releases a matrix. Null is a no-op.
///
/// # Safety
/// `m` must be null or a handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn isosym_matrix_free(m: *mut IsosymMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// `Δ^k_{B,A}(X)` or `δ^k_{B,A}(X)` as a new matrix; `kind` is an
/// [`IsosymTransform`] value.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn isosym_transform(
    kind: u32,
    b: *const IsosymMatrix,
    a: *const IsosymMatrix,
    x: *const IsosymMatrix,
    k: usize,
    out: *mut *mut IsosymMatrix,
) -> IsosymStatus {
    guard(|| {
        let (b, a, x) = (mat(b, "b")?, mat(a, "a")?, mat(x, "x")?);
        let r = match order_kind(kind)? {
            OrderKind::Triangle => triangle_power(b, a, x, k)?,
            OrderKind::Delta => delta_power(b, a, x, k)?,
        };
        put_matrix(out, r)
    })
}

/// Zero test of a transform at order `k`: `‖R‖ ≤ atol + rtol·scale`.
///
/// # Safety
/// Handles must be live; output pointers must be writable (`residual` may be null).
#[no_mangle]
pub unsafe extern "C" fn isosym_zero_test(
    kind: u32,
    b: *const IsosymMatrix,
    a: *const IsosymMatrix,
    x: *const IsosymMatrix,
    k: usize,
    atol: f64,
    rtol: f64,
    pass: *mut bool,
    residual: *mut f64,
) -> IsosymStatus {
    guard(|| {
        let t = evaluate(order_kind(kind)?, mat(b, "b")?, mat(a, "a")?, mat(x, "x")?, k, &tolerance(atol, rtol)?)?;
        if !residual.is_null() {
            residual.write(t.residual);
        }
        put(pass, t.pass, "pass")
    })
}

/// Smallest order in `1..=bound` at which the transform vanishes; writes 0
/// when there is none.
///
/// # Safety
/// Handles must be live; `order` must be writable.
#[no_mangle]
pub unsafe extern "C" fn isosym_minimal_order(
    kind: u32,
    b: *const IsosymMatrix,
    a: *const IsosymMatrix,
    x: *const IsosymMatrix,
    bound: usize,
    atol: f64,
    rtol: f64,
    order: *mut usize,
) -> IsosymStatus {
    guard(|| {
        let r = minimal_order(order_kind(kind)?, mat(b, "b")?, mat(a, "a")?, mat(x, "x")?, bound, &tolerance(atol, rtol)?)?;
        put(order, r.order.unwrap_or(0), "order")
    })
}

/// Grid classification of `A` with weight `X` (identity when null), as JSON.
///
/// # Safety
/// `a` must be live, `x` null or live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn isosym_classify_json(
    a: *const IsosymMatrix,
    x: *const IsosymMatrix,
    m_max: usize,
    n_max: usize,
    atol: f64,
    rtol: f64,
    out: *mut *mut c_char,
) -> IsosymStatus {
    guard(|| {
        let a = mat(a, "a")?;
        let id;
        let x = match x.as_ref() {
            Some(x) => &x.0,
            None => {
                id = CMatrix::identity(a.dim());
                &id
            }
        };
        let r = classify_operator(a, x, m_max, n_max, &tolerance(atol, rtol)?)?;
        put_string(out, json::to_string(&r)?)
    })
}

/// Drazin inverse of `T`.
///
/// # Safety
/// `t` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn isosym_drazin_inverse(t: *const IsosymMatrix, atol: f64, rtol: f64, out: *mut *mut IsosymMatrix) -> IsosymStatus {
    guard(|| put_matrix(out, drazin_inverse(mat(t, "t")?, &tolerance(atol, rtol)?)?))
}

/// Generates the bundle described by a JSON generator spec
/// (`{"family": ..., "seed": ..., "dim": ..., "params": {...}}`) and returns
/// it as JSON.
///
/// # Safety
/// `spec` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn isosym_generate_json(spec: *const c_char, out: *mut *mut c_char) -> IsosymStatus {
    guard(|| {
        let spec: GenSpec = serde_json::from_str(text(spec, "spec")?).map_err(|e| Error::Parse(e.to_string()))?;
        put_string(out, json::to_string(&bundle::generate(&spec)?)?)
    })
}

/// Runs the suites described by a JSON suite config and returns the report
/// as JSON. `exit_code` receives 0 without failures, 1 otherwise.
///
/// # Safety
/// `config` must be a NUL-terminated string; output pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn isosym_verify_json(config: *const c_char, out: *mut *mut c_char, exit_code: *mut i32) -> IsosymStatus {
    guard(|| {
        let cfg: SuiteConfig = serde_json::from_str(text(config, "config")?).map_err(|e| Error::Parse(e.to_string()))?;
        let r = run_suite(&cfg)?;
        put(exit_code, r.exit_code(), "exit_code")?;
        put_string(out, json::to_string(&r)?)
    })
}
