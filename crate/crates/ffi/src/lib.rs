//! C ABI for the g2census verification library.
//!
//! Every function returns a status code (`G2C_OK` on success) and writes its
//! results through out-pointers. After a failure, `g2c_last_error` returns a
//! message for the calling thread. Strings handed out by the library must be
//! released with `g2c_string_free`; census handles with `g2c_census_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use g2census::biquadratic::BrauerContext;
use g2census::cache::ClassCache;
use g2census::census::{Census, VerifyOptions};
use g2census::curves::{search_g2, SearchOptions};
use g2census::Error;

pub const G2C_OK: i32 = 0;
/// Bad argument: not an odd prime power, bad `D`, budget exceeded.
pub const G2C_ERR_PARAM: i32 = 1;
/// A verification ran and failed.
pub const G2C_ERR_MISMATCH: i32 = 2;
/// Internal consistency failure or panic.
pub const G2C_ERR_INTERNAL: i32 = 3;
/// A required pointer was null.
pub const G2C_ERR_NULL: i32 = 4;
/// Cache file or other I/O failure.
pub const G2C_ERR_IO: i32 = 5;

/// Also count elliptic curves by enumeration.
pub const G2C_BRUTE_FORCE_EC: u32 = 1;
/// Also search every genus-2 model.
pub const G2C_BRUTE_FORCE_G2: u32 = 2;

/// Census state: the class-number cache shared by successive calls.
pub struct G2cCensus {
    cache: ClassCache,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn code_for(e: &Error) -> i32 {
    match e {
        Error::Parameter(_) | Error::InvalidModel(_) | Error::Budget { .. } | Error::DivisionByZero => G2C_ERR_PARAM,
        Error::Cache(_) | Error::Io(_) => G2C_ERR_IO,
        Error::Internal(_) | Error::InconsistentCounts { .. } => G2C_ERR_INTERNAL,
    }
}

/// Runs `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<i32, Error>) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(code)) => code,
        Ok(Err(e)) => {
            set_error(&e.to_string());
            code_for(&e)
        }
        Err(_) => {
            set_error("panic inside g2census");
            G2C_ERR_INTERNAL
        }
    }
}

macro_rules! non_null {
    ($($p:ident),+) => {
        $(if $p.is_null() {
            set_error(concat!("null pointer: ", stringify!($p)));
            return G2C_ERR_NULL;
        })+
    };
}

/// Message for the last failure on this thread; empty if none. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn g2c_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Opens a census handle. `cache_path` may be null for an in-memory cache.
///
/// # Safety
/// `cache_path` must be null or a NUL-terminated string; `out` must be valid
/// for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn g2c_census_new(cache_path: *const c_char, out: *mut *mut G2cCensus) -> i32 {
    non_null!(out);
    guard(|| {
        let cache = if cache_path.is_null() {
            ClassCache::in_memory()
        } else {
            let p = CStr::from_ptr(cache_path)
                .to_str()
                .map_err(|_| Error::Parameter("cache path is not UTF-8".into()))?;
            ClassCache::open(Path::new(p))?
        };
        *out = Box::into_raw(Box::new(G2cCensus { cache }));
        Ok(G2C_OK)
    })
}

/// Releases a handle from `g2c_census_new`. Null is ignored.
///
/// # Safety
/// `h` must come from `g2c_census_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn g2c_census_free(h: *mut G2cCensus) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Writes the cache back to its file, if it has one.
///
/// # Safety
/// `h` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn g2c_census_save(h: *const G2cCensus) -> i32 {
    non_null!(h);
    guard(|| {
        (*h).cache.save()?;
        Ok(G2C_OK)
    })
}

fn options(flags: u32, jobs: u32) -> VerifyOptions {
    VerifyOptions {
        brute_force_ec: flags & G2C_BRUTE_FORCE_EC != 0,
        brute_force_g2: flags & G2C_BRUTE_FORCE_G2 != 0,
        f_budget: 0,
        jobs: jobs.max(1) as usize,
    }
}

/// Verifies one `q`. Returns `G2C_OK` if every check passed and
/// `G2C_ERR_MISMATCH` if any failed; the counts are written either way.
///
/// # Safety
/// `h` must be a live handle; the out-pointers must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn g2c_census_verify(
    h: *const G2cCensus,
    q: u64,
    flags: u32,
    jobs: u32,
    out_ppas: *mut u64,
    out_split: *mut u64,
) -> i32 {
    non_null!(h, out_ppas, out_split);
    guard(|| {
        let r = Census::new(&(*h).cache).verify(q, &options(flags, jobs))?;
        // non-integral counts only arise in failed reports
        *out_ppas = r.ppas_count.integer().unwrap_or(u64::MAX);
        *out_split = r.split_count.integer().unwrap_or(u64::MAX);
        if r.passed {
            Ok(G2C_OK)
        } else {
            set_error(&format!("verification failed for q = {q}"));
            Ok(G2C_ERR_MISMATCH)
        }
    })
}

/// The full report for `q` as a JSON string, to be freed with `g2c_string_free`.
///
/// # Safety
/// `h` must be a live handle; `out_json` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn g2c_census_report_json(
    h: *const G2cCensus,
    q: u64,
    flags: u32,
    jobs: u32,
    out_json: *mut *mut c_char,
) -> i32 {
    non_null!(h, out_json);
    guard(|| {
        let r = Census::new(&(*h).cache).verify(q, &options(flags, jobs))?;
        let s = serde_json::to_string(&r).map_err(|e| Error::Internal(e.to_string()))?;
        *out_json = CString::new(s).map_err(|e| Error::Internal(e.to_string()))?.into_raw();
        Ok(G2C_OK)
    })
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn g2c_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// `#Cl R_f` for the order of conductor `f` in `Q(sqrt(-2), sqrt(-D))`.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn g2c_ring_class_number(d: u64, f: u64, out: *mut u64) -> i32 {
    non_null!(out);
    guard(|| {
        *out = BrauerContext::new(d)?.ring_class_number(f)?;
        Ok(G2C_OK)
    })
}

/// Both sides of the class-number identity for `(D, f)`; returns
/// `G2C_ERR_MISMATCH` when they differ.
///
/// # Safety
/// The out-pointers must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn g2c_brauer(d: u64, f: u64, out_lhs: *mut u64, out_rhs: *mut u64) -> i32 {
    non_null!(out_lhs, out_rhs);
    guard(|| {
        let b = BrauerContext::new(d)?.breakdown(f, 0)?;
        *out_lhs = b.lhs;
        *out_rhs = b.rhs;
        Ok(if b.equal { G2C_OK } else { G2C_ERR_MISMATCH })
    })
}

/// Number of genus-2 models over `F_q` whose Weil polynomial is
/// `x^4 + a1 x^3 + a2 x^2 + q a1 x + q^2`.
///
/// # Safety
/// `out_count` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn g2c_search_g2(q: u64, a1: i64, a2: i64, jobs: u32, out_count: *mut u64) -> i32 {
    non_null!(out_count);
    guard(|| {
        let hits = search_g2(q, (a1, a2), SearchOptions { jobs: jobs.max(1) as usize, prune: true })?;
        *out_count = hits.len() as u64;
        Ok(G2C_OK)
    })
}
