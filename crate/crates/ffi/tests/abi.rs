use std::ffi::{c_char, CStr, CString};
use std::ptr;

use isosym_ffi::*;

const ATOL: f64 = 1e-12;
const RTOL: f64 = 1e-9;
const TRIANGLE: u32 = IsosymTransform::Triangle as u32;
const DELTA: u32 = IsosymTransform::Delta as u32;

fn matrix(dim: usize, re: &[f64]) -> *mut IsosymMatrix {
    let data: Vec<f64> = re.iter().flat_map(|&r| [r, 0.0]).collect();
    let mut out = ptr::null_mut();
    let st = unsafe { isosym_matrix_new(dim, data.as_ptr(), data.len(), &mut out) };
    assert_eq!(st, IsosymStatus::Ok);
    out
}

fn take_string(p: *mut c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { isosym_string_free(p) };
    s
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(isosym_last_error()) }.to_str().unwrap().to_owned()
}

#[test]
fn jordan_orders_through_the_abi() {
    let a = matrix(3, &[1.0, 1.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0]);
    let id = matrix(3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]);
    let mut b = ptr::null_mut();
    let json = CString::new(r#"{"dim":3,"data":[[1,0],[0,0],[0,0],[1,0],[1,0],[0,0],[0,0],[1,0],[1,0]]}"#).unwrap();
    assert_eq!(unsafe { isosym_matrix_from_json(json.as_ptr(), &mut b) }, IsosymStatus::Ok);
    assert_eq!(unsafe { isosym_matrix_dim(b) }, 3);

    let mut order = 99;
    for (kind, want) in [(TRIANGLE, 5), (DELTA, 5)] {
        let st = unsafe { isosym_minimal_order(kind, b, a, id, 10, ATOL, RTOL, &mut order) };
        assert_eq!(st, IsosymStatus::Ok);
        assert_eq!(order, want);
    }
    let (mut pass, mut residual) = (true, -1.0);
    let st = unsafe { isosym_zero_test(DELTA, b, a, id, 4, ATOL, RTOL, &mut pass, &mut residual) };
    assert_eq!(st, IsosymStatus::Ok);
    assert!(!pass && residual > 1.0);

    let mut r = ptr::null_mut();
    assert_eq!(unsafe { isosym_transform(DELTA, b, a, id, 5, &mut r) }, IsosymStatus::Ok);
    let mut data = [1.0; 18];
    assert_eq!(unsafe { isosym_matrix_data(r, data.as_mut_ptr(), data.len()) }, IsosymStatus::Ok);
    assert!(data.iter().all(|v| v.abs() < 1e-12));

    let mut s = ptr::null_mut();
    assert_eq!(unsafe { isosym_classify_json(a, ptr::null(), 5, 5, ATOL, RTOL, &mut s) }, IsosymStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(s)).unwrap();
    assert_eq!(v["minimal_isometry"], 5);
    assert_eq!(v["minimal_symmetry"], 5);

    for m in [a, b, id, r] {
        unsafe { isosym_matrix_free(m) };
    }
}

#[test]
fn drazin_and_json_round_trip() {
    let a = matrix(3, &[2.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { isosym_drazin_inverse(a, ATOL, RTOL, &mut d) }, IsosymStatus::Ok);
    let mut data = [0.0; 18];
    assert_eq!(unsafe { isosym_matrix_data(d, data.as_mut_ptr(), 18) }, IsosymStatus::Ok);
    let want = [0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0];
    for (k, w) in want.iter().enumerate() {
        assert!((data[2 * k] - w).abs() < 1e-12 && data[2 * k + 1].abs() < 1e-12);
    }

    let mut s = ptr::null_mut();
    assert_eq!(unsafe { isosym_matrix_to_json(d, &mut s) }, IsosymStatus::Ok);
    let text = CString::new(take_string(s)).unwrap();
    let mut back = ptr::null_mut();
    assert_eq!(unsafe { isosym_matrix_from_json(text.as_ptr(), &mut back) }, IsosymStatus::Ok);
    let mut again = [0.0; 18];
    assert_eq!(unsafe { isosym_matrix_data(back, again.as_mut_ptr(), 18) }, IsosymStatus::Ok);
    assert_eq!(data.map(f64::to_bits), again.map(f64::to_bits));
    for m in [a, d, back] {
        unsafe { isosym_matrix_free(m) };
    }
}

#[test]
fn generate_and_verify() {
    let spec = CString::new(r#"{"family":"mr","seed":0,"dim":2,"params":{"n":2,"lambda":1}}"#).unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { isosym_generate_json(spec.as_ptr(), &mut s) }, IsosymStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(s)).unwrap();
    assert_eq!(v["orders"]["symmetry"], 3);

    let cfg = CString::new(
        r#"{"suites":["thm2"],"seeds":1,"dims":[2],"orders":3,"tol":{"atol":1e-12,"rtol":1e-9}}"#,
    )
    .unwrap();
    let mut code = -1;
    assert_eq!(unsafe { isosym_verify_json(cfg.as_ptr(), &mut s, &mut code) }, IsosymStatus::Ok);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&take_string(s)).unwrap();
    assert_eq!(v["summary"]["fail"], 0);
}

#[test]
fn error_codes() {
    let mut out = ptr::null_mut();
    let data = [1.0, 0.0];
    assert_eq!(unsafe { isosym_matrix_new(2, data.as_ptr(), 2, &mut out) }, IsosymStatus::BadLength);
    assert!(last_error().starts_with("bad-length"));
    assert_eq!(unsafe { isosym_matrix_new(1, ptr::null(), 2, &mut out) }, IsosymStatus::NullPointer);
    let nan = [f64::NAN, 0.0];
    assert_eq!(unsafe { isosym_matrix_new(1, nan.as_ptr(), 2, &mut out) }, IsosymStatus::NonFinite);
    let big = vec![0.0; 2 * 40 * 40];
    assert_eq!(unsafe { isosym_matrix_new(40, big.as_ptr(), big.len(), &mut out) }, IsosymStatus::DimTooLarge);

    let bad = CString::new(r#"{"dim":2,"dta":[]}"#).unwrap();
    assert_eq!(unsafe { isosym_matrix_from_json(bad.as_ptr(), &mut out) }, IsosymStatus::Parse);
    assert!(last_error().contains("dta"));

    let a = matrix(1, &[1.0]);
    let b = matrix(2, &[1.0, 0.0, 0.0, 1.0]);
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { isosym_transform(TRIANGLE, a, b, a, 1, &mut r) }, IsosymStatus::DimMismatch);
    assert_eq!(unsafe { isosym_transform(TRIANGLE, a, a, a, 63, &mut r) }, IsosymStatus::OrderTooLarge);
    assert_eq!(unsafe { isosym_transform(7, a, a, a, 1, &mut r) }, IsosymStatus::InvalidParam);
    let mut order = 0;
    assert_eq!(unsafe { isosym_minimal_order(DELTA, a, a, a, 5, -1.0, RTOL, &mut order) }, IsosymStatus::InvalidParam);
    assert_eq!(unsafe { isosym_minimal_order(DELTA, a, ptr::null(), a, 5, ATOL, RTOL, &mut order) }, IsosymStatus::NullPointer);
    assert_eq!(unsafe { isosym_minimal_order(DELTA, a, a, a, 5, ATOL, RTOL, &mut order) }, IsosymStatus::Ok);
    assert_eq!(last_error(), "");

    let spec = CString::new(r#"{"family":"thm3","seed":0,"dim":1}"#).unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { isosym_generate_json(spec.as_ptr(), &mut s) }, IsosymStatus::InvalidParam);
    let cfg = CString::new(r#"{"suites":["thm1"],"seeds":1,"dims":[2],"orders":63,"tol":{"atol":0,"rtol":0}}"#).unwrap();
    let mut code = 0;
    assert_eq!(unsafe { isosym_verify_json(cfg.as_ptr(), &mut s, &mut code) }, IsosymStatus::OrderTooLarge);

    let name = |c: i32| unsafe { CStr::from_ptr(isosym_status_name(c)) }.to_str().unwrap();
    assert_eq!(name(IsosymStatus::DimTooLarge as i32), "dim-too-large");
    assert_eq!(name(IsosymStatus::Ok as i32), "ok");
    assert_eq!(name(99), "unknown");
    unsafe {
        isosym_matrix_free(a);
        isosym_matrix_free(b);
        isosym_matrix_free(ptr::null_mut());
        isosym_string_free(ptr::null_mut());
    }
}
