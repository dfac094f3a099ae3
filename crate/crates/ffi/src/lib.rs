//! C ABI over `besicover`.
//!
//! Every fallible call returns a [`BcStatus`]; on failure the message is
//! available from [`bc_last_error`] on the same thread. Handles are opaque and
//! must be released with their `_free` function. Strings returned through
//! `char **out` parameters are owned by the caller and released with
//! [`bc_string_free`]. Exact rationals cross the boundary as `"p/q"` strings.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use besicover::covering::BallFamily;
use besicover::dynamics::{ActionModel, Observable};
use besicover::exact::{fmt_rational, parse_rational};
use besicover::experiment::{self, Command};
use besicover::geometry::{set_point_cap, Point};
use besicover::{dynamics, maximal, Error};

/// Result of an FFI call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidInput = 3,
    DimensionMismatch = 4,
    CapExceeded = 5,
    ZeroDenominator = 6,
    HorizonOverflow = 7,
    Violation = 8,
    Precondition = 9,
    Parse = 10,
    Io = 11,
    Panic = 12,
}

/// Atomic `Z^d`-action.
pub struct BcAction(ActionModel);

/// Finitely supported or constant observable.
pub struct BcObservable(Observable);

/// Ball family: a norm or one-sided cubes.
pub struct BcFamily(BallFamily);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = s);
}

fn status_of(e: &Error) -> BcStatus {
    match e {
        Error::DimensionMismatch { .. } => BcStatus::DimensionMismatch,
        Error::CapExceeded { .. } => BcStatus::CapExceeded,
        Error::ZeroDenominator(_) | Error::UndefinedFraction { .. } => BcStatus::ZeroDenominator,
        Error::HorizonOverflow(_) => BcStatus::HorizonOverflow,
        Error::CertificateViolation { .. } | Error::ExhaustionOverrun { .. } | Error::HypothesisViolation(_) => {
            BcStatus::Violation
        }
        Error::Precondition(_) => BcStatus::Precondition,
        Error::Parse(_) | Error::Json(_) | Error::Csv(_) => BcStatus::Parse,
        Error::Io(_) => BcStatus::Io,
        _ => BcStatus::InvalidInput,
    }
}

struct Fail(BcStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

impl From<serde_json::Error> for Fail {
    fn from(e: serde_json::Error) -> Self {
        Fail(BcStatus::Parse, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> BcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BcStatus::Ok,
        Ok(Err(Fail(s, m))) => {
            set_error(m);
            s
        }
        Err(_) => {
            set_error("internal panic");
            BcStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(BcStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(BcStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail(BcStatus::NullPointer, format!("{what} is null")))
}

unsafe fn coords(p: *const i64, d: usize, what: &str) -> Result<Point, Fail> {
    if d == 0 {
        return Ok(Point(Vec::new()));
    }
    if p.is_null() {
        return Err(Fail(BcStatus::NullPointer, format!("{what} is null")));
    }
    Ok(Point(std::slice::from_raw_parts(p, d).to_vec()))
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(BcStatus::NullPointer, "output pointer is null".into()));
    }
    let c = CString::new(s).map_err(|_| Fail(BcStatus::InvalidInput, "output contains NUL".into()))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn put_handle<T>(out: *mut *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(BcStatus::NullPointer, "output pointer is null".into()));
    }
    *out = Box::into_raw(Box::new(v));
    Ok(())
}

/// Message of the last failed call on this thread; empty if none. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn bc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn bc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn bc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Sets the global lattice point cap.
#[no_mangle]
pub extern "C" fn bc_set_point_cap(cap: u64) -> BcStatus {
    guard(|| {
        if cap == 0 {
            return Err(Fail(BcStatus::InvalidInput, "cap must be positive".into()));
        }
        set_point_cap(cap);
        Ok(())
    })
}

/// Parses an action config such as `{"model":"weighted","d":2,"lambda":"1/2"}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bc_action_from_json(json: *const c_char, out: *mut *mut BcAction) -> BcStatus {
    guard(|| {
        let a: ActionModel = serde_json::from_str(text(json, "json")?)?;
        put_handle(out, BcAction(a))
    })
}

/// # Safety
/// `a` must come from [`bc_action_from_json`] or be null.
#[no_mangle]
pub unsafe extern "C" fn bc_action_free(a: *mut BcAction) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// Dimension of the acting group.
///
/// # Safety
/// `a` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn bc_action_dim(a: *const BcAction) -> usize {
    a.as_ref().map_or(0, |a| a.0.dim())
}

/// Parses `[{"point":[..],"value":"p/q"}, ...]` or `{"constant":"p/q"}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bc_observable_from_json(json: *const c_char, out: *mut *mut BcObservable) -> BcStatus {
    guard(|| {
        let f: Observable = serde_json::from_str(text(json, "json")?)?;
        put_handle(out, BcObservable(f))
    })
}

/// # Safety
/// `f` must come from [`bc_observable_from_json`] or be null.
#[no_mangle]
pub unsafe extern "C" fn bc_observable_free(f: *mut BcObservable) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Parses `{"family":"norm","norm":{...}}` or `{"family":"one_sided_cube","d":2}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bc_family_from_json(json: *const c_char, out: *mut *mut BcFamily) -> BcStatus {
    guard(|| {
        let f: BallFamily = serde_json::from_str(text(json, "json")?)?;
        put_handle(out, BcFamily(f))
    })
}

/// # Safety
/// `f` must come from [`bc_family_from_json`] or be null.
#[no_mangle]
pub unsafe extern "C" fn bc_family_free(f: *mut BcFamily) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// `ρ(u, ω)` as `"p/q"`.
///
/// # Safety
/// `u` and `w` must point to `d` integers; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bc_rn_derivative(
    a: *const BcAction,
    u: *const i64,
    w: *const i64,
    d: usize,
    out: *mut *mut c_char,
) -> BcStatus {
    guard(|| {
        let a = handle(a, "action")?;
        let (u, w) = (coords(u, d, "u")?, coords(w, d, "omega")?);
        put_string(out, fmt_rational(&a.0.rn_derivative(&u, &w)?))
    })
}

/// `S_n f(ω)` as `"p/q"`.
///
/// # Safety
/// Handles must be live; `w` must point to `d` integers; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bc_ball_sum(
    a: *const BcAction,
    f: *const BcObservable,
    family: *const BcFamily,
    n: u64,
    w: *const i64,
    d: usize,
    out: *mut *mut c_char,
) -> BcStatus {
    guard(|| {
        let (a, f, fam) = (handle(a, "action")?, handle(f, "f")?, handle(family, "family")?);
        let w = coords(w, d, "omega")?;
        put_string(out, fmt_rational(&dynamics::ball_sum(&a.0, &f.0, &fam.0, n, &w)?))
    })
}

/// `R_n(f, g)(ω)` as `"p/q"`; `BC_STATUS_ZERO_DENOMINATOR` when undefined.
///
/// # Safety
/// Handles must be live; `w` must point to `d` integers; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bc_ratio_average(
    a: *const BcAction,
    f: *const BcObservable,
    g: *const BcObservable,
    family: *const BcFamily,
    n: u64,
    w: *const i64,
    d: usize,
    out: *mut *mut c_char,
) -> BcStatus {
    guard(|| {
        let (a, f, g, fam) = (handle(a, "action")?, handle(f, "f")?, handle(g, "g")?, handle(family, "family")?);
        let w = coords(w, d, "omega")?;
        put_string(out, fmt_rational(&dynamics::ratio_average(&a.0, &f.0, &g.0, &fam.0, n, &w)?))
    })
}

/// `sup_{n ≤ n_max} R_n(f, g)(ω)` as `"p/q"`, with the smallest attaining `n`.
///
/// # Safety
/// Handles must be live; `w` must point to `d` integers; `argmax` and `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn bc_maximal_ratio(
    a: *const BcAction,
    f: *const BcObservable,
    g: *const BcObservable,
    family: *const BcFamily,
    n_max: u64,
    w: *const i64,
    d: usize,
    argmax: *mut u64,
    out: *mut *mut c_char,
) -> BcStatus {
    guard(|| {
        let (a, f, g, fam) = (handle(a, "action")?, handle(f, "f")?, handle(g, "g")?, handle(family, "family")?);
        let w = coords(w, d, "omega")?;
        if argmax.is_null() {
            return Err(Fail(BcStatus::NullPointer, "argmax is null".into()));
        }
        let m = maximal::maximal_ratio(&a.0, &f.0, &g.0, &fam.0, n_max, &w)?;
        put_string(out, fmt_rational(&m.sup))?;
        *argmax = m.argmax;
        Ok(())
    })
}

/// Staircase witness package for `K` and `M` (a `"p/q"` string) as JSON.
///
/// # Safety
/// `m` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bc_staircase_witness(k: u64, m: *const c_char, out: *mut *mut c_char) -> BcStatus {
    guard(|| {
        let m = parse_rational(text(m, "M")?)?;
        put_string(out, maximal::staircase_witness(k, &m)?.to_json()?)
    })
}

/// Validates a witness package; writes the JSON report and sets `*valid`.
///
/// # Safety
/// `package` and `m` must be NUL-terminated strings; `valid` and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bc_witness_validate(
    package: *const c_char,
    m: *const c_char,
    valid: *mut c_int,
    out: *mut *mut c_char,
) -> BcStatus {
    guard(|| {
        let w = maximal::WitnessPackage::from_json(text(package, "package")?)?;
        let m = parse_rational(text(m, "M")?)?;
        if valid.is_null() {
            return Err(Fail(BcStatus::NullPointer, "valid is null".into()));
        }
        let r = maximal::witness_validate(&w, &m)?;
        put_string(out, serde_json::to_string(&r)?)?;
        *valid = c_int::from(r.valid);
        Ok(())
    })
}

/// Runs a CLI experiment (`"cover"`, `"concentration"`, `"ratio"`,
/// `"maximal"`) on a JSON config. `seed < 0` keeps the config's seed. Writes
/// the output bytes and the number of findings; findings do not make the
/// call fail.
///
/// # Safety
/// `command` and `config` must be NUL-terminated strings; `findings` and
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bc_run_experiment(
    command: *const c_char,
    config: *const c_char,
    seed: i64,
    findings: *mut usize,
    out: *mut *mut c_char,
) -> BcStatus {
    guard(|| {
        let cmd = match text(command, "command")? {
            "cover" => Command::Cover,
            "concentration" => Command::Concentration,
            "ratio" => Command::Ratio,
            "maximal" => Command::Maximal,
            other => return Err(Fail(BcStatus::InvalidInput, format!("unknown command {other:?}"))),
        };
        if findings.is_null() {
            return Err(Fail(BcStatus::NullPointer, "findings is null".into()));
        }
        let seed = u64::try_from(seed).ok();
        let o = experiment::run(cmd, text(config, "config")?, seed)?;
        let s = String::from_utf8(o.bytes).map_err(|_| Fail(BcStatus::InvalidUtf8, "output is not UTF-8".into()))?;
        put_string(out, s)?;
        *findings = o.findings.len();
        Ok(())
    })
}
