//! C ABI over `supcheck`.
//!
//! Points are opaque handles created by `supcheck_point_parse` and released
//! with `supcheck_point_free`. Functions return a `SupcheckStatus`; on a
//! non-zero status `supcheck_last_error` describes the failure on the
//! calling thread. Strings returned through out-parameters are owned by the
//! caller and released with `supcheck_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use supcheck::conditions::{Checker, ProductPoint, ScanConfig, Verdict, DEFAULT_SAMPLE};
use supcheck::gm::component_count;
use supcheck::Error;

/// Status codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupcheckStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    BadReduction = 5,
    TorsionPoint = 6,
    LimitExceeded = 7,
    Arithmetic = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupcheckCondition {
    Sp = 0,
    Lsp = 1,
    Rsp = 2,
    Msp = 3,
    Wmsp = 4,
    Lmsp = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupcheckVerdict {
    Holds = 0,
    HoldsWithExceptions = 1,
    Violated = 2,
}

/// Scan parameters. Start from `supcheck_scan_options_default`.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct SupcheckScanOptions {
    /// Inclusive prime range.
    pub lo: u64,
    pub hi: u64,
    /// Violating primes tolerated.
    pub budget: usize,
    /// Additive slack for LSP.
    pub slack: u32,
    /// Coefficient box bound for MSP, WMSP and LMSP.
    pub bound: u64,
    /// Use exact lattice methods where available.
    pub exact: bool,
}

/// Opaque point on a product of copies of the multiplicative group and
/// elliptic curves.
pub struct SupcheckPoint(ProductPoint);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> SupcheckStatus {
    match e {
        Error::Parse(_) | Error::PointNotOnCurve | Error::SingularCurve => SupcheckStatus::Parse,
        Error::BadReduction { .. } | Error::ZeroElement { .. } => SupcheckStatus::BadReduction,
        Error::TorsionPoint => SupcheckStatus::TorsionPoint,
        Error::FactorizationLimitExceeded(_) | Error::PrimeTooLarge { .. } | Error::DiscreteLogLimitExceeded { .. } => {
            SupcheckStatus::LimitExceeded
        }
        Error::Overflow(_) | Error::SingularMatrix | Error::NotSublattice | Error::RankMismatch => {
            SupcheckStatus::Arithmetic
        }
        _ => SupcheckStatus::InvalidArgument,
    }
}

struct Fail(SupcheckStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> SupcheckStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            SupcheckStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            SupcheckStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(SupcheckStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|_| Fail(SupcheckStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn points<'a>(ptrs: *const *const SupcheckPoint, n: usize, what: &str) -> Result<Vec<&'a ProductPoint>, Fail> {
    if n == 0 {
        return Ok(Vec::new());
    }
    if ptrs.is_null() {
        return Err(null(what));
    }
    std::slice::from_raw_parts(ptrs, n)
        .iter()
        .map(|&p| p.as_ref().map(|p| &p.0).ok_or_else(|| null(what)))
        .collect()
}

fn give_string(s: String, out: *mut *mut c_char) -> Result<(), Fail> {
    let c = CString::new(s).map_err(|_| Fail(SupcheckStatus::Panic, "interior NUL".into()))?;
    unsafe { *out = c.into_raw() };
    Ok(())
}

fn json_error(e: serde_json::Error) -> Fail {
    Fail(SupcheckStatus::Panic, e.to_string())
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn supcheck_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn supcheck_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse a point. `group` may be null for a plain comma list of rationals
/// (a torus point); otherwise it reads like `gm:2`, `ec:0,-2` or
/// `gm:1*ec:0,-2`, with point components separated by `*`.
///
/// # Safety
/// `group` is null or a NUL-terminated string; `point` is a NUL-terminated
/// string; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn supcheck_point_parse(
    group: *const c_char,
    point: *const c_char,
    out: *mut *mut SupcheckPoint,
) -> SupcheckStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let group = if group.is_null() { None } else { Some(read_str(group, "group")?) };
        let point = read_str(point, "point")?;
        let parsed = supcheck::cli::parse_point(group, point)?;
        *out = Box::into_raw(Box::new(SupcheckPoint(parsed)));
        Ok(())
    })
}

/// Release a point. Null is ignored.
///
/// # Safety
/// `point` must come from `supcheck_point_parse` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn supcheck_point_free(point: *mut SupcheckPoint) {
    if !point.is_null() {
        drop(Box::from_raw(point));
    }
}

/// Canonical text of a point.
///
/// # Safety
/// `point` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn supcheck_point_to_string(point: *const SupcheckPoint, out: *mut *mut c_char) -> SupcheckStatus {
    guard(|| {
        let point = point.as_ref().ok_or_else(|| null("point"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        give_string(point.0.to_string(), out)
    })
}

/// Order of the reduction of `point` modulo the prime `p`.
/// Returns `BAD_REDUCTION` when the point does not reduce at `p`.
///
/// # Safety
/// `point` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn supcheck_point_order(point: *const SupcheckPoint, p: u64, out: *mut u64) -> SupcheckStatus {
    guard(|| {
        let point = point.as_ref().ok_or_else(|| null("point"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        if !supcheck::arith::is_prime(p) {
            return Err(Error::NotPrime(p).into());
        }
        if let Some(reason) = point.0.bad_reduction(p) {
            return Err(Fail(SupcheckStatus::BadReduction, reason));
        }
        *out = supcheck::conditions::product_order(&point.0, p)?;
        Ok(())
    })
}

/// Number of connected components of the smallest algebraic subgroup
/// containing a torus point. Fails with `LIMIT_EXCEEDED` when it does not
/// fit in 64 bits.
///
/// # Safety
/// `point` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn supcheck_point_components(point: *const SupcheckPoint, out: *mut u64) -> SupcheckStatus {
    guard(|| {
        let point = point.as_ref().ok_or_else(|| null("point"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let gm = point.0.as_gm().ok_or_else(|| Fail(SupcheckStatus::InvalidArgument, "not a torus point".into()))?;
        let n = component_count(gm)?;
        *out = u64::try_from(&n).map_err(|_| Fail(SupcheckStatus::LimitExceeded, format!("{n} does not fit in 64 bits")))?;
        Ok(())
    })
}

/// Default scan options: primes 2..10000, no budget, no slack, box bound 20,
/// exact methods on.
#[no_mangle]
pub extern "C" fn supcheck_scan_options_default() -> SupcheckScanOptions {
    let d = ScanConfig::default();
    SupcheckScanOptions { lo: d.lo, hi: d.hi, budget: d.budget, slack: d.slack, bound: d.bound, exact: d.exact }
}

/// Scan a prime range for violations of `condition`.
///
/// SP, LSP and RSP take one point on each side; WMSP takes two; MSP and
/// LMSP take any matching number. `ell` is read by LSP and LMSP. For RSP a
/// null `sample` selects the first 25 primes. `options` may be null for the
/// defaults. On success `out_json` receives the report and `out_verdict`
/// (if non-null) its verdict.
///
/// # Safety
/// Pointer/length pairs describe valid arrays of live handles or primes;
/// `out_json` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn supcheck_check(
    condition: SupcheckCondition,
    ps: *const *const SupcheckPoint,
    n_ps: usize,
    qs: *const *const SupcheckPoint,
    n_qs: usize,
    ell: u64,
    sample: *const u64,
    n_sample: usize,
    options: *const SupcheckScanOptions,
    out_json: *mut *mut c_char,
    out_verdict: *mut SupcheckVerdict,
) -> SupcheckStatus {
    guard(|| {
        if out_json.is_null() {
            return Err(null("out_json"));
        }
        let o = options.as_ref().copied().unwrap_or_else(|| supcheck_scan_options_default());
        let cfg = ScanConfig { lo: o.lo, hi: o.hi, budget: o.budget, slack: o.slack, bound: o.bound, exact: o.exact };
        let ps: Vec<ProductPoint> = points(ps, n_ps, "ps")?.into_iter().cloned().collect();
        let qs: Vec<ProductPoint> = points(qs, n_qs, "qs")?.into_iter().cloned().collect();
        let arity = |k: usize| -> Result<(), Fail> {
            if ps.len() != k || qs.len() != k {
                return Err(Fail(SupcheckStatus::InvalidArgument, format!("expected {k} point(s) on each side")));
            }
            Ok(())
        };
        let checker = Checker::new(&cfg);
        let report = match condition {
            SupcheckCondition::Sp => {
                arity(1)?;
                checker.sp(&ps[0], &qs[0])?
            }
            SupcheckCondition::Lsp => {
                arity(1)?;
                checker.lsp(&ps[0], &qs[0], ell)?
            }
            SupcheckCondition::Rsp => {
                arity(1)?;
                let sample = if sample.is_null() {
                    DEFAULT_SAMPLE.to_vec()
                } else {
                    std::slice::from_raw_parts(sample, n_sample).to_vec()
                };
                checker.rsp(&ps[0], &qs[0], &sample)?
            }
            SupcheckCondition::Msp => checker.msp(&ps, &qs)?,
            SupcheckCondition::Wmsp => {
                arity(2)?;
                checker.wmsp(&ps[0], &ps[1], &qs[0], &qs[1])?
            }
            SupcheckCondition::Lmsp => checker.lmsp(&ps, &qs, ell)?,
        };
        if !out_verdict.is_null() {
            *out_verdict = match report.verdict {
                Verdict::Holds => SupcheckVerdict::Holds,
                Verdict::HoldsWithExceptions => SupcheckVerdict::HoldsWithExceptions,
                Verdict::Violated => SupcheckVerdict::Violated,
            };
        }
        give_string(serde_json::to_string(&report).map_err(json_error)?, out_json)
    })
}

/// Search for `phi(P) = c Q` with `c` minimal. `bound` limits the
/// coefficient search on elliptic factors (0 means none given, which is an
/// error when `q` has one). `out_json` receives `{"relation": null, ...}`
/// when no relation exists.
///
/// # Safety
/// `p` and `q` are live handles; `out_json` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn supcheck_relate(
    p: *const SupcheckPoint,
    q: *const SupcheckPoint,
    bound: u64,
    out_json: *mut *mut c_char,
) -> SupcheckStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("p"))?;
        let q = q.as_ref().ok_or_else(|| null("q"))?;
        if out_json.is_null() {
            return Err(null("out_json"));
        }
        let out = supcheck::cli::relate(&p.0, &q.0, (bound > 0).then_some(bound))?;
        give_string(serde_json::to_string(&out).map_err(json_error)?, out_json)
    })
}
