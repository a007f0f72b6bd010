use std::ffi::{CStr, CString};
use std::ptr;

use roughforms_ffi::*;

fn parse(text: &str, dim: usize) -> *mut RfExpr {
    let c = CString::new(text).unwrap();
    let mut e = ptr::null_mut();
    assert_eq!(
        unsafe { rf_expr_parse(c.as_ptr(), dim, &mut e) },
        RfStatus::Ok
    );
    assert!(!e.is_null());
    e
}

fn last_error() -> String {
    let p = rf_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn parse_and_evaluate() {
    let e = parse("x^2 + sin(y)", 2);
    let mut v = 0.0;
    let p = [3.0, 0.0];
    assert_eq!(
        unsafe { rf_expr_eval(e, p.as_ptr(), 2, &mut v) },
        RfStatus::Ok
    );
    assert_eq!(v, 9.0);
    assert_eq!(
        unsafe { rf_expr_eval(e, p.as_ptr(), 1, &mut v) },
        RfStatus::InvalidArgument
    );
    unsafe { rf_expr_free(e) };
}

#[test]
fn parse_errors_set_the_message() {
    let c = CString::new("x +").unwrap();
    let mut e = ptr::null_mut();
    assert_eq!(
        unsafe { rf_expr_parse(c.as_ptr(), 1, &mut e) },
        RfStatus::Parse
    );
    assert!(e.is_null());
    assert!(last_error().contains("position 3"));
    let c = CString::new("z").unwrap();
    assert_eq!(
        unsafe { rf_expr_parse(c.as_ptr(), 2, &mut e) },
        RfStatus::InvalidArgument
    );
}

#[test]
fn null_pointers_are_rejected() {
    let mut e = ptr::null_mut();
    assert_eq!(
        unsafe { rf_expr_parse(ptr::null(), 1, &mut e) },
        RfStatus::NullPointer
    );
    assert_eq!(
        unsafe { rf_sew_options_default(ptr::null_mut()) },
        RfStatus::NullPointer
    );
    let mut out = ptr::null_mut();
    let v = [0.0, 1.0];
    assert_eq!(
        unsafe {
            rf_young(
                ptr::null(),
                ptr::null(),
                v.as_ptr(),
                1,
                ptr::null(),
                &mut out,
            )
        },
        RfStatus::NullPointer
    );
    unsafe {
        rf_expr_free(ptr::null_mut());
        rf_result_free(ptr::null_mut());
        rf_string_free(ptr::null_mut());
    }
}

#[test]
fn young_through_the_abi() {
    let (f, g) = (parse("x", 1), parse("x^2", 1));
    let mut opts = RfSewOptions {
        max_level: 0,
        abs_tol: 0.0,
        rel_tol: 0.0,
        variant: 0,
        extrapolate: false,
    };
    assert_eq!(unsafe { rf_sew_options_default(&mut opts) }, RfStatus::Ok);
    opts.extrapolate = true;
    opts.max_level = 20;
    let v = [0.0, 1.0];
    let mut r = ptr::null_mut();
    assert_eq!(
        unsafe { rf_young(f, g, v.as_ptr(), 1, &opts, &mut r) },
        RfStatus::Ok
    );
    let (mut value, mut err, mut status, mut levels, mut s0) = (0.0, 0.0, 9u32, 0usize, 1.0);
    unsafe {
        assert_eq!(rf_result_value(r, &mut value), RfStatus::Ok);
        assert_eq!(rf_result_error_estimate(r, &mut err), RfStatus::Ok);
        assert_eq!(rf_result_status(r, &mut status), RfStatus::Ok);
        assert_eq!(rf_result_levels(r, &mut levels), RfStatus::Ok);
        assert_eq!(rf_result_partial_sum(r, 0, &mut s0), RfStatus::Ok);
        assert_eq!(
            rf_result_partial_sum(r, levels, &mut s0),
            RfStatus::InvalidArgument
        );
    }
    assert!((value - 2.0 / 3.0).abs() < 1e-8);
    assert_eq!(status, 0);
    assert!(levels > 1);

    let mut json = ptr::null_mut();
    assert_eq!(unsafe { rf_result_to_json(r, &mut json) }, RfStatus::Ok);
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["value"].as_f64().unwrap(), value);
    unsafe {
        rf_string_free(json);
        rf_result_free(r);
        rf_expr_free(f);
        rf_expr_free(g);
    }
}

#[test]
fn zust_through_the_abi() {
    let (one, x, y) = (parse("1", 2), parse("x", 2), parse("y", 2));
    let v = [0.0, 0.0, 1.0, 0.0, 0.0, 1.0];
    let mut r = ptr::null_mut();
    assert_eq!(
        unsafe { rf_zust(one, x, y, v.as_ptr(), 2, ptr::null(), &mut r) },
        RfStatus::Ok
    );
    let mut value = 0.0;
    assert_eq!(unsafe { rf_result_value(r, &mut value) }, RfStatus::Ok);
    assert!((value - 0.5).abs() < 1e-10);
    unsafe {
        rf_result_free(r);
        rf_expr_free(one);
        rf_expr_free(x);
        rf_expr_free(y);
    }
}

#[test]
fn invalid_options_and_budget() {
    let (f, g) = (parse("x", 1), parse("x", 1));
    let v = [0.0, 1.0];
    let mut r = ptr::null_mut();
    let mut opts = RfSewOptions {
        max_level: 0,
        abs_tol: 0.0,
        rel_tol: 0.0,
        variant: 7,
        extrapolate: false,
    };
    unsafe { rf_sew_options_default(&mut opts) };
    opts.variant = 7;
    assert_eq!(
        unsafe { rf_young(f, g, v.as_ptr(), 1, &opts, &mut r) },
        RfStatus::InvalidArgument
    );
    assert!(last_error().contains("variant"));
    opts.variant = 0;
    opts.max_level = 40;
    assert_eq!(
        unsafe { rf_young(f, g, v.as_ptr(), 1, &opts, &mut r) },
        RfStatus::Budget
    );
    assert!(r.is_null());
    unsafe {
        rf_expr_free(f);
        rf_expr_free(g);
    }
}

#[test]
fn success_clears_the_message() {
    let c = CString::new("(").unwrap();
    let mut e = ptr::null_mut();
    unsafe { rf_expr_parse(c.as_ptr(), 1, &mut e) };
    assert!(!rf_last_error_message().is_null());
    let e = parse("1", 1);
    assert!(rf_last_error_message().is_null());
    unsafe { rf_expr_free(e) };
}
