//! C ABI over `braidfix`.
//!
//! Handles are opaque pointers owned by the caller and released with the
//! matching `*_free` function. Every fallible call returns a
//! [`BraidfixStatus`]; the message of the last failure on the calling
//! thread is available from [`braidfix_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use braidfix::braid::{is_knot_closure, parse_braid, BraidWord};
use braidfix::fixpoint::SolverConfig;
use braidfix::report::{build_report, Report};
use braidfix::Error;

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BraidfixStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    StrandMismatch = 4,
    NotAKnot = 5,
    Domain = 6,
    /// The analysis succeeded but some class is degenerate, so λ is undefined.
    Degenerate = 7,
    Internal = 8,
    Panic = 9,
}

/// Solver settings; obtain defaults from [`braidfix_solver_config_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct BraidfixSolverConfig {
    pub seeds: usize,
    pub max_iters: usize,
    pub residual_tol: f64,
    pub dedup_tol: f64,
    pub fd_step: f64,
    pub rng_seed: u64,
}

impl From<&BraidfixSolverConfig> for SolverConfig {
    fn from(c: &BraidfixSolverConfig) -> Self {
        SolverConfig {
            seeds: c.seeds,
            max_iters: c.max_iters,
            residual_tol: c.residual_tol,
            dedup_tol: c.dedup_tol,
            fd_step: c.fd_step,
            rng_seed: c.rng_seed,
        }
    }
}

/// Opaque braid word.
pub struct BraidfixBraid {
    word: BraidWord,
}

/// Opaque analysis result.
pub struct BraidfixAnalysis {
    report: Report,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> BraidfixStatus {
    match e {
        Error::Parse { .. } | Error::GeneratorOutOfRange { .. } => BraidfixStatus::Parse,
        Error::StrandMismatch { .. } => BraidfixStatus::StrandMismatch,
        Error::NotAKnot { .. } => BraidfixStatus::NotAKnot,
        Error::Domain(_) | Error::SplitDiagram(_) => BraidfixStatus::Domain,
        Error::Internal(_) | Error::Report(_) => BraidfixStatus::Internal,
    }
}

fn fail(e: Error) -> BraidfixStatus {
    set_error(&e.to_string());
    status_of(&e)
}

/// Runs `f`, converting panics into [`BraidfixStatus::Panic`].
fn guard(f: impl FnOnce() -> BraidfixStatus) -> BraidfixStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("panic inside braidfix");
            BraidfixStatus::Panic
        }
    }
}

macro_rules! non_null {
    ($($p:expr),+) => {
        $(if $p.is_null() {
            set_error(concat!("null pointer: ", stringify!($p)));
            return BraidfixStatus::NullPointer;
        })+
    };
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, BraidfixStatus> {
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        BraidfixStatus::InvalidUtf8
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn braidfix_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or NULL. Valid until
/// the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn braidfix_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

#[no_mangle]
pub extern "C" fn braidfix_solver_config_default() -> BraidfixSolverConfig {
    let d = SolverConfig::default();
    BraidfixSolverConfig {
        seeds: d.seeds,
        max_iters: d.max_iters,
        residual_tol: d.residual_tol,
        dedup_tol: d.dedup_tol,
        fd_step: d.fd_step,
        rng_seed: d.rng_seed,
    }
}

/// Parses a braid word such as `"1 -2 1 -2"`. `strands = 0` infers the
/// strand count from the largest generator.
///
/// # Safety
/// `word` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn braidfix_braid_parse(
    word: *const c_char,
    strands: usize,
    out: *mut *mut BraidfixBraid,
) -> BraidfixStatus {
    guard(|| {
        non_null!(word, out);
        let text = match read_str(word) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse_braid(text, (strands > 0).then_some(strands)) {
            Ok(word) => {
                *out = Box::into_raw(Box::new(BraidfixBraid { word }));
                BraidfixStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `braid` must come from [`braidfix_braid_parse`] or be NULL.
#[no_mangle]
pub unsafe extern "C" fn braidfix_braid_free(braid: *mut BraidfixBraid) {
    if !braid.is_null() {
        drop(Box::from_raw(braid));
    }
}

/// # Safety
/// `braid` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn braidfix_braid_strands(braid: *const BraidfixBraid, out: *mut usize) -> BraidfixStatus {
    guard(|| {
        non_null!(braid, out);
        *out = (&*braid).word.strands();
        BraidfixStatus::Ok
    })
}

/// # Safety
/// `braid` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn braidfix_braid_is_knot(braid: *const BraidfixBraid, out: *mut bool) -> BraidfixStatus {
    guard(|| {
        non_null!(braid, out);
        *out = is_knot_closure(&(&*braid).word);
        BraidfixStatus::Ok
    })
}

/// Runs the full analysis. `config` may be NULL for defaults. On success
/// (including a degenerate result, signalled by
/// [`BraidfixStatus::Degenerate`]) `*out` receives a new handle.
///
/// # Safety
/// `braid` must be a live handle, `config` NULL or valid, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn braidfix_analyze(
    braid: *const BraidfixBraid,
    config: *const BraidfixSolverConfig,
    out: *mut *mut BraidfixAnalysis,
) -> BraidfixStatus {
    guard(|| {
        non_null!(braid, out);
        let cfg = if config.is_null() {
            SolverConfig::default()
        } else {
            SolverConfig::from(&*config)
        };
        match build_report("analyze", &(&*braid).word, &cfg) {
            Ok(report) => {
                let degenerate = report.lambda.value().is_none();
                *out = Box::into_raw(Box::new(BraidfixAnalysis { report }));
                if degenerate {
                    set_error("degenerate class; lambda undefined");
                    BraidfixStatus::Degenerate
                } else {
                    BraidfixStatus::Ok
                }
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `analysis` must come from [`braidfix_analyze`] or be NULL.
#[no_mangle]
pub unsafe extern "C" fn braidfix_analysis_free(analysis: *mut BraidfixAnalysis) {
    if !analysis.is_null() {
        drop(Box::from_raw(analysis));
    }
}

/// Signed count λ; [`BraidfixStatus::Degenerate`] when undefined.
///
/// # Safety
/// `analysis` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn braidfix_analysis_lambda(analysis: *const BraidfixAnalysis, out: *mut i64) -> BraidfixStatus {
    guard(|| {
        non_null!(analysis, out);
        match (&*analysis).report.lambda.value() {
            Some(l) => {
                *out = l;
                BraidfixStatus::Ok
            }
            None => {
                set_error("lambda undefined: degenerate class");
                BraidfixStatus::Degenerate
            }
        }
    })
}

/// # Safety
/// `analysis` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn braidfix_analysis_class_count(analysis: *const BraidfixAnalysis, out: *mut usize) -> BraidfixStatus {
    guard(|| {
        non_null!(analysis, out);
        *out = (&*analysis).report.classes.len();
        BraidfixStatus::Ok
    })
}

/// # Safety
/// `analysis` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn braidfix_analysis_signature(analysis: *const BraidfixAnalysis, out: *mut i64) -> BraidfixStatus {
    guard(|| {
        non_null!(analysis, out);
        *out = (&*analysis).report.signature;
        BraidfixStatus::Ok
    })
}

/// # Safety
/// `analysis` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn braidfix_analysis_determinant(analysis: *const BraidfixAnalysis, out: *mut u64) -> BraidfixStatus {
    guard(|| {
        non_null!(analysis, out);
        *out = (&*analysis).report.determinant;
        BraidfixStatus::Ok
    })
}

/// Index of class `k` as `+1` or `-1`, or `0` for a degenerate class.
///
/// # Safety
/// `analysis` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn braidfix_analysis_class_index(
    analysis: *const BraidfixAnalysis,
    k: usize,
    out: *mut i32,
) -> BraidfixStatus {
    guard(|| {
        non_null!(analysis, out);
        match (&*analysis).report.classes.get(k) {
            Some(c) => {
                *out = c.index.value().map_or(0, |v| v as i32);
                BraidfixStatus::Ok
            }
            None => {
                set_error("class index out of range");
                BraidfixStatus::Domain
            }
        }
    })
}

/// Full JSON report. Release the string with [`braidfix_string_free`].
///
/// # Safety
/// `analysis` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn braidfix_analysis_json(analysis: *const BraidfixAnalysis, out: *mut *mut c_char) -> BraidfixStatus {
    guard(|| {
        non_null!(analysis, out);
        match (&*analysis).report.to_json() {
            Ok(json) => match CString::new(json) {
                Ok(c) => {
                    *out = c.into_raw();
                    BraidfixStatus::Ok
                }
                Err(_) => {
                    set_error("report contains a NUL byte");
                    BraidfixStatus::Internal
                }
            },
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `s` must come from this library or be NULL.
#[no_mangle]
pub unsafe extern "C" fn braidfix_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
