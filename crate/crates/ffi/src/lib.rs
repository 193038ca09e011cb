//! C ABI over `rigiditylab`.
//!
//! Terms, sets and oracles cross the boundary as opaque handles created by
//! the `*_parse` functions and released with the matching `*_free`. Every
//! fallible call returns an [`RlStatus`]; on failure a message is available
//! from [`rl_last_error`] until the next call on the same thread. Strings
//! returned through `char **` out-parameters are owned by the caller and must
//! be released with [`rl_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rigiditylab::duplication::{dup_set, verify_m_equivalence};
use rigiditylab::paramsets::antichain_family;
use rigiditylab::randomness::{test_level, DEFAULT_SEARCH_CAP};
use rigiditylab::{AlmostInclusion, FuncTerm, Nat, Oracle, PeriodicSet};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RlStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Precondition = 4,
    Overflow = 5,
    Panic = 6,
}

/// Opaque term handle.
pub struct RlTerm(FuncTerm);
/// Opaque set handle.
pub struct RlSet(PeriodicSet);
/// Opaque oracle handle.
pub struct RlOracle(Oracle);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Failure(RlStatus, String);

impl Failure {
    fn null(what: &str) -> Self {
        Failure(RlStatus::NullArgument, format!("`{what}` is null"))
    }
}

/// Runs `body`, turning errors and panics into status codes.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> RlStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => RlStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            RlStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(RlStatus::InvalidUtf8, format!("`{what}` is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure::null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure(RlStatus::Panic, "interior nul".into()))?;
    write_out(out, c.into_raw(), "out")
}

fn parse_error(e: impl ToString) -> Failure {
    Failure(RlStatus::Parse, e.to_string())
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call into this library on the same thread; do not free.
#[no_mangle]
pub extern "C" fn rl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `src` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rl_term_parse(src: *const c_char, out: *mut *mut RlTerm) -> RlStatus {
    guard(|| {
        let term: FuncTerm = read_str(src, "src")?.parse().map_err(parse_error)?;
        write_out(out, Box::into_raw(Box::new(RlTerm(term))), "out")
    })
}

/// # Safety
/// `term` must be null or a handle from [`rl_term_parse`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rl_term_free(term: *mut RlTerm) {
    if !term.is_null() {
        drop(Box::from_raw(term));
    }
}

/// Canonical rendering of a term.
///
/// # Safety
/// `term` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rl_term_render(term: *const RlTerm, out: *mut *mut c_char) -> RlStatus {
    guard(|| write_string(out, handle(term, "term")?.0.to_string()))
}

/// Evaluates at `x`; [`RlStatus::Overflow`] if the value exceeds 64 bits.
///
/// # Safety
/// `term` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rl_term_eval_u64(term: *const RlTerm, x: u64, out: *mut u64) -> RlStatus {
    guard(|| {
        let value = handle(term, "term")?.0.eval_u64(x);
        let value = u64::try_from(&value)
            .map_err(|_| Failure(RlStatus::Overflow, format!("value {value} exceeds 64 bits")))?;
        write_out(out, value, "out")
    })
}

/// Evaluates at a decimal natural, writing a decimal string.
///
/// # Safety
/// `term` must be a live handle, `x` nul-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rl_term_eval_dec(
    term: *const RlTerm,
    x: *const c_char,
    out: *mut *mut c_char,
) -> RlStatus {
    guard(|| {
        let term = handle(term, "term")?;
        let x: Nat = read_str(x, "x")?.parse().map_err(parse_error)?;
        write_string(out, term.0.eval(&x).to_string())
    })
}

/// # Safety
/// `src` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rl_set_parse(src: *const c_char, out: *mut *mut RlSet) -> RlStatus {
    guard(|| {
        let set: PeriodicSet = read_str(src, "src")?.parse().map_err(parse_error)?;
        write_out(out, Box::into_raw(Box::new(RlSet(set))), "out")
    })
}

/// The antichain family member `{2^i (2n+1)}`, `i <= 64`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rl_set_family(i: u32, out: *mut *mut RlSet) -> RlStatus {
    guard(|| {
        if i > 64 {
            return Err(Failure(
                RlStatus::Precondition,
                "family index must be at most 64".into(),
            ));
        }
        write_out(
            out,
            Box::into_raw(Box::new(RlSet(antichain_family(i)))),
            "out",
        )
    })
}

/// # Safety
/// `set` must be null or a live set handle.
#[no_mangle]
pub unsafe extern "C" fn rl_set_free(set: *mut RlSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// # Safety
/// `set` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rl_set_render(set: *const RlSet, out: *mut *mut c_char) -> RlStatus {
    guard(|| write_string(out, handle(set, "set")?.0.to_string()))
}

/// # Safety
/// `set` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rl_set_contains(set: *const RlSet, x: u64, out: *mut bool) -> RlStatus {
    guard(|| write_out(out, handle(set, "set")?.0.contains_u64(x), "out"))
}

/// Decides `s ⊆* t`. When it fails and `witness` is non-null, writes the
/// witness class as `"r mod m"`; otherwise writes null there.
///
/// # Safety
/// `s`, `t` must be live handles; `holds` writable; `witness` null or writable.
#[no_mangle]
pub unsafe extern "C" fn rl_set_almost_subset(
    s: *const RlSet,
    t: *const RlSet,
    holds: *mut bool,
    witness: *mut *mut c_char,
) -> RlStatus {
    guard(|| {
        let verdict = handle(s, "s")?.0.almost_subset(&handle(t, "t")?.0);
        let class = match &verdict {
            AlmostInclusion::Holds => None,
            AlmostInclusion::Fails(w) => Some(format!("{} mod {}", w.residue, w.modulus)),
        };
        write_out(holds, class.is_none(), "holds")?;
        if !witness.is_null() {
            match class {
                Some(c) => write_string(witness, c)?,
                None => witness.write(ptr::null_mut()),
            }
        }
        Ok(())
    })
}

/// # Safety
/// `src` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rl_oracle_parse(src: *const c_char, out: *mut *mut RlOracle) -> RlStatus {
    guard(|| {
        let oracle: Oracle = read_str(src, "src")?.parse().map_err(parse_error)?;
        write_out(out, Box::into_raw(Box::new(RlOracle(oracle))), "out")
    })
}

/// # Safety
/// `oracle` must be null or a live oracle handle.
#[no_mangle]
pub unsafe extern "C" fn rl_oracle_free(oracle: *mut RlOracle) {
    if !oracle.is_null() {
        drop(Box::from_raw(oracle));
    }
}

/// # Safety
/// `oracle` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rl_oracle_render(
    oracle: *const RlOracle,
    out: *mut *mut c_char,
) -> RlStatus {
    guard(|| write_string(out, handle(oracle, "oracle")?.0.to_string()))
}

/// # Safety
/// `oracle` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rl_oracle_query(
    oracle: *const RlOracle,
    x: u64,
    out: *mut bool,
) -> RlStatus {
    guard(|| write_out(out, handle(oracle, "oracle")?.0.query_u64(x), "out"))
}

/// Builds `B_S` from `base`; [`RlStatus::Precondition`] if `base(c) = 1`.
///
/// # Safety
/// `set`, `base` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rl_oracle_dup(
    set: *const RlSet,
    c: u64,
    base: *const RlOracle,
    out: *mut *mut RlOracle,
) -> RlStatus {
    guard(|| {
        let b = dup_set(
            &handle(set, "set")?.0,
            &Nat::from(c),
            &handle(base, "base")?.0,
        )
        .map_err(|e| Failure(RlStatus::Precondition, e.to_string()))?;
        write_out(out, Box::into_raw(Box::new(RlOracle(b))), "out")
    })
}

/// Checks `B_S ≡_m A` below `bound`; `ok` is false on the first violation.
///
/// # Safety
/// `base`, `set` must be live handles; `ok` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rl_dup_verify(
    base: *const RlOracle,
    set: *const RlSet,
    c: u64,
    bound: u64,
    ok: *mut bool,
) -> RlStatus {
    guard(|| {
        let v = verify_m_equivalence(
            &handle(base, "base")?.0,
            &handle(set, "set")?.0,
            &Nat::from(c),
            bound,
        )
        .map_err(|e| Failure(RlStatus::Precondition, e.to_string()))?;
        write_out(ok, v.is_ok(), "ok")
    })
}

/// Exact measure of the test level `U_n` for `k`, as `numerator / 2^exponent`.
/// The numerator is written as a decimal string.
///
/// # Safety
/// `k` must be a live handle; `numerator` and `exponent` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rl_test_level_measure(
    k: *const RlTerm,
    n: usize,
    numerator: *mut *mut c_char,
    exponent: *mut u64,
) -> RlStatus {
    guard(|| {
        let level = test_level(&handle(k, "k")?.0, n, DEFAULT_SEARCH_CAP)
            .map_err(|e| Failure(RlStatus::Precondition, e.to_string()))?;
        let m = level.exact_measure();
        if exponent.is_null() {
            return Err(Failure::null("exponent"));
        }
        write_string(numerator, m.numerator().to_string())?;
        exponent.write(m.exponent());
        Ok(())
    })
}
