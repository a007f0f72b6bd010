//! C ABI over the roughforms library.
//!
//! Every function returns an [`RfStatus`]; on failure the message is kept
//! per thread and read back with [`rf_last_error_message`]. Handles are
//! opaque and owned by the caller until passed to the matching `_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use roughforms::decompose::{check_budget, Variant};
use roughforms::error::Error;
use roughforms::funcs::{parse_expr, Expr};
use roughforms::integrals::{young, zust, IntegralResult, Scalar0};
use roughforms::sew::{SewOptions, SewStatus};
use roughforms::simplex::{Point, Simplex};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    NonConvergent = 5,
    Budget = 6,
    Internal = 7,
    Panic = 8,
}

/// Sewing settings. `max_level == 0` picks the degree default.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct RfSewOptions {
    pub max_level: u32,
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// 0 for dya, 1 for dya†.
    pub variant: u32,
    pub extrapolate: bool,
}

/// A parsed expression bound to an ambient dimension.
pub struct RfExpr {
    expr: Expr,
    scalar: Scalar0,
    dim: usize,
}

/// The outcome of a Young or Züst integral.
pub struct RfResult {
    inner: IntegralResult,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).ok());
}

fn status_of(e: &Error) -> RfStatus {
    match e {
        Error::Syntax { .. } | Error::UnknownIdentifier { .. } | Error::Arity { .. } => {
            RfStatus::Parse
        }
        Error::NonConvergent { .. } => RfStatus::NonConvergent,
        Error::Budget { .. } => RfStatus::Budget,
        Error::Oracle(_) | Error::InsufficientData(_) => RfStatus::Internal,
        _ => RfStatus::InvalidArgument,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (RfStatus, String)>) -> RfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            RfStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            RfStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (RfStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (RfStatus, String) {
    (RfStatus::NullPointer, format!("{what} is null"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (RfStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn coords<'a>(p: *const f64, n: usize, what: &str) -> Result<&'a [f64], (RfStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, n))
}

fn to_options(o: &RfSewOptions) -> Result<SewOptions, (RfStatus, String)> {
    let variant = match o.variant {
        0 => Variant::Dya,
        1 => Variant::DyaDagger,
        v => return Err((RfStatus::InvalidArgument, format!("unknown variant {v}"))),
    };
    let opts = SewOptions {
        max_level: (o.max_level > 0).then_some(o.max_level as usize),
        abs_tol: o.abs_tol,
        rel_tol: o.rel_tol,
        variant,
        extrapolate: o.extrapolate,
        ..SewOptions::default()
    };
    opts.validate().map_err(lib_err)?;
    Ok(opts)
}

/// Writes the library defaults into `out`.
///
/// # Safety
/// `out` must be null or point to writable memory for one `RfSewOptions`.
#[no_mangle]
pub unsafe extern "C" fn rf_sew_options_default(out: *mut RfSewOptions) -> RfStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let d = SewOptions::default();
        *out = RfSewOptions {
            max_level: 0,
            abs_tol: d.abs_tol,
            rel_tol: d.rel_tol,
            variant: 0,
            extrapolate: d.extrapolate,
        };
        Ok(())
    })
}

/// Parses `text` as an expression on `ℝ^dim`.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rf_expr_parse(
    text: *const c_char,
    dim: usize,
    out: *mut *mut RfExpr,
) -> RfStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        if text.is_null() {
            return Err(null("text"));
        }
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|e| (RfStatus::InvalidUtf8, e.to_string()))?;
        let expr = parse_expr(s).map_err(lib_err)?;
        let scalar = expr.to_scalar(dim, s).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(RfExpr { expr, scalar, dim }));
        Ok(())
    })
}

/// Evaluates `e` at the point with `n` coordinates.
///
/// # Safety
/// `e` must come from [`rf_expr_parse`]; `point` must hold `n` values.
#[no_mangle]
pub unsafe extern "C" fn rf_expr_eval(
    e: *const RfExpr,
    point: *const f64,
    n: usize,
    out: *mut f64,
) -> RfStatus {
    guard(|| {
        let e = deref(e, "expr")?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        if n != e.dim {
            return Err((
                RfStatus::InvalidArgument,
                format!("expected {} coordinates, got {n}", e.dim),
            ));
        }
        let p = Point::new(coords(point, n, "point")?).map_err(lib_err)?;
        *out = e.expr.eval(&p).map_err(lib_err)?;
        Ok(())
    })
}

/// # Safety
/// `e` must be null or come from [`rf_expr_parse`], and not be used again.
#[no_mangle]
pub unsafe extern "C" fn rf_expr_free(e: *mut RfExpr) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

unsafe fn simplex(
    vertices: *const f64,
    count: usize,
    dim: usize,
) -> Result<Simplex, (RfStatus, String)> {
    if dim == 0 {
        return Err((
            RfStatus::InvalidArgument,
            "dimension must be positive".into(),
        ));
    }
    let flat = coords(vertices, count * dim, "vertices")?;
    let rows: Vec<&[f64]> = flat.chunks(dim).collect();
    Simplex::from_coords(&rows).map_err(lib_err)
}

/// Explicit levels beyond the refinement budget are refused rather than clamped.
unsafe fn options(
    opts: *const RfSewOptions,
    degree: usize,
) -> Result<SewOptions, (RfStatus, String)> {
    if opts.is_null() {
        return Ok(SewOptions::default());
    }
    let o = to_options(&*opts)?;
    if let Some(n) = o.max_level {
        check_budget(degree, n).map_err(lib_err)?;
    }
    Ok(o)
}

/// `∫ f dg` over the segment with endpoint coordinates `vertices[0..2·dim]`.
/// A null `opts` uses the defaults.
///
/// # Safety
/// Handles must be live; `vertices` must hold `2·dim` values; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rf_young(
    f: *const RfExpr,
    g: *const RfExpr,
    vertices: *const f64,
    dim: usize,
    opts: *const RfSewOptions,
    out: *mut *mut RfResult,
) -> RfStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let (f, g) = (deref(f, "f")?, deref(g, "g")?);
        let s = simplex(vertices, 2, dim)?;
        let r = young(&f.scalar, &g.scalar, &s, &options(opts, 1)?).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(RfResult { inner: r }));
        Ok(())
    })
}

/// `∫ f dg1 ∧ dg2` over the triangle with vertex coordinates
/// `vertices[0..3·dim]`.
///
/// # Safety
/// Handles must be live; `vertices` must hold `3·dim` values; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rf_zust(
    f: *const RfExpr,
    g1: *const RfExpr,
    g2: *const RfExpr,
    vertices: *const f64,
    dim: usize,
    opts: *const RfSewOptions,
    out: *mut *mut RfResult,
) -> RfStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let (f, g1, g2) = (deref(f, "f")?, deref(g1, "g1")?, deref(g2, "g2")?);
        let s = simplex(vertices, 3, dim)?;
        let r = zust(&f.scalar, &g1.scalar, &g2.scalar, &s, &options(opts, 2)?).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(RfResult { inner: r }));
        Ok(())
    })
}

/// # Safety
/// `r` must come from [`rf_young`] or [`rf_zust`]; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rf_result_value(r: *const RfResult, out: *mut f64) -> RfStatus {
    guard(|| {
        *out.as_mut().ok_or_else(|| null("out"))? = deref(r, "result")?.inner.value;
        Ok(())
    })
}

/// # Safety
/// As for [`rf_result_value`].
#[no_mangle]
pub unsafe extern "C" fn rf_result_error_estimate(r: *const RfResult, out: *mut f64) -> RfStatus {
    guard(|| {
        *out.as_mut().ok_or_else(|| null("out"))? = deref(r, "result")?.inner.error_estimate;
        Ok(())
    })
}

/// Sewing status: 0 converged, 1 stopped at the maximum level, 2 diverged.
///
/// # Safety
/// As for [`rf_result_value`].
#[no_mangle]
pub unsafe extern "C" fn rf_result_status(r: *const RfResult, out: *mut u32) -> RfStatus {
    guard(|| {
        *out.as_mut().ok_or_else(|| null("out"))? = match deref(r, "result")?.inner.status() {
            SewStatus::Converged => 0,
            SewStatus::MaxLevel => 1,
            SewStatus::Diverged => 2,
        };
        Ok(())
    })
}

/// Number of refinement levels in the outer report.
///
/// # Safety
/// As for [`rf_result_value`].
#[no_mangle]
pub unsafe extern "C" fn rf_result_levels(r: *const RfResult, out: *mut usize) -> RfStatus {
    guard(|| {
        *out.as_mut().ok_or_else(|| null("out"))? = deref(r, "result")?.inner.report.levels.len();
        Ok(())
    })
}

/// Partial sum at refinement level `level`.
///
/// # Safety
/// As for [`rf_result_value`].
#[no_mangle]
pub unsafe extern "C" fn rf_result_partial_sum(
    r: *const RfResult,
    level: usize,
    out: *mut f64,
) -> RfStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let levels = &deref(r, "result")?.inner.report.levels;
        let l = levels.get(level).ok_or_else(|| {
            (
                RfStatus::InvalidArgument,
                format!("level {level} out of range 0..{}", levels.len()),
            )
        })?;
        *out = l.partial_sum;
        Ok(())
    })
}

/// The full result as JSON; release with [`rf_string_free`].
///
/// # Safety
/// As for [`rf_result_value`].
#[no_mangle]
pub unsafe extern "C" fn rf_result_to_json(r: *const RfResult, out: *mut *mut c_char) -> RfStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let text = serde_json::to_string(&deref(r, "result")?.inner)
            .map_err(|e| (RfStatus::Internal, e.to_string()))?;
        *out = CString::new(text)
            .map_err(|e| (RfStatus::Internal, e.to_string()))?
            .into_raw();
        Ok(())
    })
}

/// # Safety
/// `r` must be null or a live result handle, not used again.
#[no_mangle]
pub unsafe extern "C" fn rf_result_free(r: *mut RfResult) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library, not used again.
#[no_mangle]
pub unsafe extern "C" fn rf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn rf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}
