//! C ABI over `ikorder`.
//!
//! Every function returns an [`IkStatus`]; results go through out-pointers.
//! On failure, [`ik_last_error`] returns a message for the calling thread.
//! Strings returned by the library are freed with [`ik_string_free`];
//! mixtures with [`ik_mixture_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ikorder::fixtures::{reproduce_all, run_fixture, FixtureCatalog};
use ikorder::ikdist::{self, IkParams};
use ikorder::mixture::FiniteMixture;
use ikorder::ordercheck::{check_order, Grid, OrderKind, Spacing, Status};
use ikorder::theorems::TheoremCase;
use ikorder::Error;

/// Status codes returned by every entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IkStatus {
    Ok = 0,
    NullPointer = 1,
    /// Argument outside a function's domain, e.g. `x < 0` or `u` outside `[0, 1]`.
    Domain = 2,
    /// Invalid parameters or inconsistent shapes.
    InvalidParameter = 3,
    Json = 4,
    UnknownFixture = 5,
    /// A string argument was not valid UTF-8.
    Utf8 = 6,
    Io = 7,
    Panic = 8,
}

/// Order kinds accepted by [`ik_check_order`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IkOrderKind {
    St = 0,
    Rh = 1,
    Lr = 2,
    RRh = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IkOrderStatus {
    HoldsOnGrid = 0,
    Violated = 1,
    Inconclusive = 2,
}

/// Evaluation grid. `log_spacing != 0` selects log spacing.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct IkGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub points: usize,
    pub log_spacing: i32,
}

/// Grid verdict. Witness fields are NaN when `has_witness == 0`.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct IkVerdict {
    pub status: IkOrderStatus,
    pub has_witness: i32,
    pub witness_x: f64,
    pub witness_lhs: f64,
    pub witness_rhs: f64,
    /// First sign change of the deciding function, NaN if none was refined.
    pub refined_crossing: f64,
    pub points: usize,
    pub skipped: usize,
}

/// Opaque finite mixture.
pub struct IkMixture(FiniteMixture);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(IkStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Domain(_) => IkStatus::Domain,
            Error::InvalidParameter(_) | Error::LengthMismatch { .. } | Error::IndexOutOfRange { .. } => {
                IkStatus::InvalidParameter
            }
            Error::UnknownFixture(_) => IkStatus::UnknownFixture,
            Error::Io(_) => IkStatus::Io,
            Error::Json(_) => IkStatus::Json,
        };
        Failure(status, e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure(IkStatus::Json, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(IkStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, records any failure, and converts panics to [`IkStatus::Panic`].
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> IkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            IkStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            IkStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|e| Failure(IkStatus::Utf8, format!("{what}: {e}")))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn mixture<'a>(m: *const IkMixture, what: &str) -> Result<&'a FiniteMixture, Failure> {
    m.as_ref().map(|m| &m.0).ok_or_else(|| null(what))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn ik_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ik_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[derive(Clone, Copy)]
enum Func {
    Cdf,
    Sf,
    Pdf,
    Rh,
    Quantile,
}

unsafe fn eval_ik(func: Func, alpha: f64, beta: f64, x: f64, out: *mut f64) -> IkStatus {
    guard(|| {
        let p = IkParams::new(alpha, beta)?;
        let v = match func {
            Func::Cdf => ikdist::ik_cdf(x, p)?,
            Func::Sf => ikdist::ik_sf(x, p)?,
            Func::Pdf => ikdist::ik_pdf(x, p)?.value(),
            Func::Rh => ikdist::ik_reversed_hazard(x, p)?,
            Func::Quantile => ikdist::ik_quantile(x, p)?,
        };
        write(out, v, "out")
    })
}

/// Distribution function of a single component.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ik_cdf(alpha: f64, beta: f64, x: f64, out: *mut f64) -> IkStatus {
    eval_ik(Func::Cdf, alpha, beta, x, out)
}

/// Survival function of a single component.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ik_sf(alpha: f64, beta: f64, x: f64, out: *mut f64) -> IkStatus {
    eval_ik(Func::Sf, alpha, beta, x, out)
}

/// Density of a single component; `+inf` at a singular origin.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ik_pdf(alpha: f64, beta: f64, x: f64, out: *mut f64) -> IkStatus {
    eval_ik(Func::Pdf, alpha, beta, x, out)
}

/// Reversed hazard rate `f / F` of a single component.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ik_reversed_hazard(alpha: f64, beta: f64, x: f64, out: *mut f64) -> IkStatus {
    eval_ik(Func::Rh, alpha, beta, x, out)
}

/// Quantile of a single component at probability `u`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ik_quantile(alpha: f64, beta: f64, u: f64, out: *mut f64) -> IkStatus {
    eval_ik(Func::Quantile, alpha, beta, u, out)
}

/// Builds a mixture from `n` weights and component parameters.
///
/// # Safety
/// The three arrays must hold `n` readable doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ik_mixture_new(
    weights: *const f64,
    alpha: *const f64,
    beta: *const f64,
    n: usize,
    out: *mut *mut IkMixture,
) -> IkStatus {
    guard(|| {
        if weights.is_null() || alpha.is_null() || beta.is_null() {
            return Err(null("parameter array"));
        }
        let slice = |p: *const f64| std::slice::from_raw_parts(p, n);
        let m = FiniteMixture::from_vectors(slice(weights), slice(alpha), slice(beta))?;
        write(out, Box::into_raw(Box::new(IkMixture(m))), "out")
    })
}

/// Parses a mixture from JSON, in any layout the CLI accepts.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ik_mixture_from_json(json: *const c_char, out: *mut *mut IkMixture) -> IkStatus {
    guard(|| {
        let m = FiniteMixture::from_json(read_str(json, "json")?)?;
        write(out, Box::into_raw(Box::new(IkMixture(m))), "out")
    })
}

/// Serializes a mixture to JSON; free the result with [`ik_string_free`].
///
/// # Safety
/// `m` must be a live mixture; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ik_mixture_to_json(m: *const IkMixture, out: *mut *mut c_char) -> IkStatus {
    guard(|| {
        let text = mixture(m, "mixture")?.to_json();
        write(out, into_c_string(text), "out")
    })
}

/// Number of components.
///
/// # Safety
/// `m` must be a live mixture; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ik_mixture_len(m: *const IkMixture, out: *mut usize) -> IkStatus {
    guard(|| write(out, mixture(m, "mixture")?.len(), "out"))
}

/// Frees a mixture. Null is ignored.
///
/// # Safety
/// `m` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ik_mixture_free(m: *mut IkMixture) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

unsafe fn eval_mixture(func: Func, m: *const IkMixture, x: f64, out: *mut f64) -> IkStatus {
    guard(|| {
        let m = mixture(m, "mixture")?;
        let v = match func {
            Func::Cdf => m.cdf(x)?,
            Func::Sf => m.sf(x)?,
            Func::Pdf => m.pdf(x)?.value(),
            Func::Rh => m.reversed_hazard(x)?,
            Func::Quantile => unreachable!("no mixture quantile"),
        };
        write(out, v, "out")
    })
}

/// # Safety
/// `m` must be a live mixture; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ik_mixture_cdf(m: *const IkMixture, x: f64, out: *mut f64) -> IkStatus {
    eval_mixture(Func::Cdf, m, x, out)
}

/// # Safety
/// `m` must be a live mixture; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ik_mixture_sf(m: *const IkMixture, x: f64, out: *mut f64) -> IkStatus {
    eval_mixture(Func::Sf, m, x, out)
}

/// # Safety
/// `m` must be a live mixture; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ik_mixture_pdf(m: *const IkMixture, x: f64, out: *mut f64) -> IkStatus {
    eval_mixture(Func::Pdf, m, x, out)
}

/// # Safety
/// `m` must be a live mixture; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ik_mixture_reversed_hazard(m: *const IkMixture, x: f64, out: *mut f64) -> IkStatus {
    eval_mixture(Func::Rh, m, x, out)
}

/// The default grid: 2000 log-spaced points on `[1e-4, 1e4]`.
#[no_mangle]
pub extern "C" fn ik_grid_default() -> IkGrid {
    let g = Grid::default();
    IkGrid { x_min: g.x_min(), x_max: g.x_max(), points: g.len(), log_spacing: i32::from(g.spacing() == Spacing::Log) }
}

/// Checks `m1 <=_kind m2` on `grid`, or on the default grid when it is null.
///
/// # Safety
/// `m1`, `m2` must be live mixtures; `grid` null or readable; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ik_check_order(
    kind: IkOrderKind,
    m1: *const IkMixture,
    m2: *const IkMixture,
    grid: *const IkGrid,
    out: *mut IkVerdict,
) -> IkStatus {
    guard(|| {
        let (m1, m2) = (mixture(m1, "m1")?, mixture(m2, "m2")?);
        let grid = match grid.as_ref() {
            None => Grid::default(),
            Some(g) => {
                let spacing = if g.log_spacing != 0 { Spacing::Log } else { Spacing::Linear };
                Grid::new(g.x_min, g.x_max, g.points, spacing)?
            }
        };
        let kind = match kind {
            IkOrderKind::St => OrderKind::St,
            IkOrderKind::Rh => OrderKind::Rh,
            IkOrderKind::Lr => OrderKind::Lr,
            IkOrderKind::RRh => OrderKind::RRh,
        };
        let v = check_order(kind, m1, m2, &grid);
        let w = v.witness;
        let verdict = IkVerdict {
            status: match v.status {
                Status::HoldsOnGrid => IkOrderStatus::HoldsOnGrid,
                Status::Violated => IkOrderStatus::Violated,
                Status::Inconclusive => IkOrderStatus::Inconclusive,
            },
            has_witness: i32::from(w.is_some()),
            witness_x: w.map_or(f64::NAN, |w| w.x),
            witness_lhs: w.map_or(f64::NAN, |w| w.lhs),
            witness_rhs: w.map_or(f64::NAN, |w| w.rhs),
            refined_crossing: v.refined_crossing.unwrap_or(f64::NAN),
            points: v.points,
            skipped: v.skipped,
        };
        write(out, verdict, "out")
    })
}

/// Checks a theorem case given as JSON and returns the condition report as
/// JSON; free it with [`ik_string_free`].
///
/// # Safety
/// `case_json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ik_check_case(case_json: *const c_char, out: *mut *mut c_char) -> IkStatus {
    guard(|| {
        let case: TheoremCase = serde_json::from_str(read_str(case_json, "case_json")?)?;
        let report = serde_json::to_string(&case.check()?)?;
        write(out, into_c_string(report), "out")
    })
}

/// Runs one bundled fixture, or all of them when `id` is null, on the
/// default grid. Writes the outcomes as a JSON array and sets `all_passed`.
///
/// # Safety
/// `id` null or NUL-terminated; `out_json` and `all_passed` writable.
#[no_mangle]
pub unsafe extern "C" fn ik_reproduce(id: *const c_char, out_json: *mut *mut c_char, all_passed: *mut i32) -> IkStatus {
    guard(|| {
        if out_json.is_null() || all_passed.is_null() {
            return Err(null("out"));
        }
        let catalog = FixtureCatalog::builtin();
        let grid = Grid::default();
        let outcomes = if id.is_null() {
            reproduce_all(&catalog, &grid)?
        } else {
            vec![run_fixture(catalog.get(read_str(id, "id")?)?, &grid)?]
        };
        let text = serde_json::to_string(&outcomes)?;
        write(all_passed, i32::from(outcomes.iter().all(|o| o.passed)), "all_passed")?;
        write(out_json, into_c_string(text), "out_json")
    })
}

/// `sf(p*) - sf(p)` at `x` for the fixed weight pair with shared components.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ik_k1(x: f64, out: *mut f64) -> IkStatus {
    guard(|| write(out, ikorder::oracles::k1(x)?, "out"))
}
