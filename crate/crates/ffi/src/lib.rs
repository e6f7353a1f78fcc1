//! C ABI over `sadic`.
//!
//! Every function returns a [`SadicStatus`]. On failure the message is kept
//! in a thread-local slot readable with [`sadic_last_error`]. Strings handed
//! out by the library must be released with [`sadic_string_free`]; families
//! with [`sadic_family_free`]. Large integers cross the boundary as decimal
//! strings.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_bigint::BigUint;
use sadic::bispecial::{desubstitute_word, p_symbolic, s_symbolic};
use sadic::construction::{generate_word, hypothesis_check, parikh_uv, prefix_stream, recurrence_bound, Which};
use sadic::error::Error;
use sadic::family::{parse_big, ParameterFamily};
use sadic::frequency::excess_check;
use sadic::words::{set_materialization_cap, FiniteWord};
use serde_json::json;

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SadicStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Config = 3,
    Structure = 4,
    LevelUnavailable = 5,
    Unvalidated = 6,
    SizeLimit = 7,
    MemoryBudget = 8,
    NotDecomposable = 9,
    Io = 10,
    Panic = 11,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SadicWhich {
    U = 0,
    V = 1,
}

/// Opaque parameter family.
pub struct SadicFamily {
    inner: ParameterFamily,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> SadicStatus {
    match e {
        Error::SizeLimit { .. } => SadicStatus::SizeLimit,
        Error::MemoryBudget { .. } => SadicStatus::MemoryBudget,
        Error::LevelUnavailable { .. } => SadicStatus::LevelUnavailable,
        Error::Structure { .. } => SadicStatus::Structure,
        Error::Unvalidated { .. } => SadicStatus::Unvalidated,
        Error::NotLong | Error::NotDecomposable(_) => SadicStatus::NotDecomposable,
        Error::Config(_) => SadicStatus::Config,
        Error::Io(_) => SadicStatus::Io,
        Error::OutOfRange { .. } | Error::InvalidArgument(_) => SadicStatus::InvalidArgument,
    }
}

enum Failure {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type FfiResult = Result<(), Failure>;

/// Runs `f`, converting errors and panics into a status code.
fn guard(f: impl FnOnce() -> FfiResult) -> SadicStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
            SadicStatus::Ok
        }
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            SadicStatus::NullPointer
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            SadicStatus::Panic
        }
    }
}

unsafe fn family<'a>(fam: *const SadicFamily) -> Result<&'a ParameterFamily, Failure> {
    fam.as_ref().map(|f| &f.inner).ok_or(Failure::Null("family"))
}

unsafe fn str_arg<'a>(s: *const c_char, what: &'static str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure::Null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Failure::Lib(Error::InvalidArgument(format!("{what} is not UTF-8"))))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> FfiResult {
    if out.is_null() {
        return Err(Failure::Null("output"));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> FfiResult {
    let c = CString::new(s).map_err(|_| Error::InvalidArgument("string contains nul".into()))?;
    write_out(out, c.into_raw())
}

unsafe fn write_family(out: *mut *mut SadicFamily, fam: ParameterFamily) -> FfiResult {
    write_out(out, Box::into_raw(Box::new(SadicFamily { inner: fam })))
}

macro_rules! json_string {
    ($value:expr) => {
        serde_json::to_string($value).expect("serializable")
    };
}

/// Copy of the last error message on this thread, or null. Free with [`sadic_string_free`].
#[no_mangle]
pub extern "C" fn sadic_last_error() -> *mut c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null_mut(), |c| c.clone().into_raw()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn sadic_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Sets the process-wide materialization cap in letters.
#[no_mangle]
pub extern "C" fn sadic_set_max_letters(cap: u64) {
    set_materialization_cap(cap);
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sadic_family_paper(out: *mut *mut SadicFamily) -> SadicStatus {
    guard(|| write_family(out, ParameterFamily::paper_star()))
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sadic_family_mini(out: *mut *mut SadicFamily) -> SadicStatus {
    guard(|| write_family(out, ParameterFamily::mini()))
}

/// Family from three tables of `levels` decimal or `2^k` strings.
///
/// # Safety
/// `l`, `m`, `n` must each point to `levels` valid C strings; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sadic_family_custom(
    l: *const *const c_char,
    m: *const *const c_char,
    n: *const *const c_char,
    levels: usize,
    out: *mut *mut SadicFamily,
) -> SadicStatus {
    guard(|| {
        let table = |p: *const *const c_char, what: &'static str| -> Result<Vec<BigUint>, Failure> {
            if p.is_null() {
                return Err(Failure::Null(what));
            }
            (0..levels)
                .map(|k| Ok(parse_big(str_arg(*p.add(k), what)?)?))
                .collect()
        };
        let fam = ParameterFamily::custom(table(l, "l")?, table(m, "m")?, table(n, "n")?)?;
        fam.validate_structure(None)?;
        write_family(out, fam)
    })
}

/// Family from a TOML file, or `"paper"` / `"mini"`.
///
/// # Safety
/// `path` must be a valid C string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sadic_family_from_config(path: *const c_char, out: *mut *mut SadicFamily) -> SadicStatus {
    guard(|| {
        let path = str_arg(path, "path")?;
        let fam = ParameterFamily::from_reference(path)?;
        if !fam.is_paper_star() {
            fam.validate_structure(None)?;
        }
        write_family(out, fam)
    })
}

/// # Safety
/// `fam` must come from a `sadic_family_*` constructor and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn sadic_family_free(fam: *mut SadicFamily) {
    if !fam.is_null() {
        drop(Box::from_raw(fam));
    }
}

/// Hypothesis report for index `i` as JSON; `all_ok` receives the overall verdict.
///
/// # Safety
/// Pointers must be valid; `json_out` receives a string to free with [`sadic_string_free`].
#[no_mangle]
pub unsafe extern "C" fn sadic_hypothesis_check(
    fam: *const SadicFamily,
    i: usize,
    all_ok: *mut bool,
    json_out: *mut *mut c_char,
) -> SadicStatus {
    guard(|| {
        let report = hypothesis_check(family(fam)?, i)?;
        write_out(all_ok, report.all_ok())?;
        write_string(json_out, json_string!(&report))
    })
}

/// Parikh vectors of `u_i^(h)` and `v_i^(h)` as `{"u": {...}, "v": {...}}`.
///
/// # Safety
/// Pointers must be valid; free the string with [`sadic_string_free`].
#[no_mangle]
pub unsafe extern "C" fn sadic_parikh_uv(
    fam: *const SadicFamily,
    h: usize,
    i: usize,
    json_out: *mut *mut c_char,
) -> SadicStatus {
    guard(|| {
        let (u, v) = parikh_uv(family(fam)?, h, i)?;
        write_string(json_out, json_string!(&json!({ "u": u, "v": v })))
    })
}

/// `s(n)` for decimal `n`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sadic_s_symbolic(fam: *const SadicFamily, n: *const c_char, out: *mut u8) -> SadicStatus {
    guard(|| {
        let n = parse_big(str_arg(n, "n")?)?;
        write_out(out, s_symbolic(family(fam)?, &n)?)
    })
}

/// `p(n)` for decimal `n`, as a decimal string.
///
/// # Safety
/// Pointers must be valid; free the string with [`sadic_string_free`].
#[no_mangle]
pub unsafe extern "C" fn sadic_p_symbolic(
    fam: *const SadicFamily,
    n: *const c_char,
    out: *mut *mut c_char,
) -> SadicStatus {
    guard(|| {
        let n = parse_big(str_arg(n, "n")?)?;
        write_string(out, p_symbolic(family(fam)?, &n)?.to_string())
    })
}

/// `u_i^(h)` or `v_i^(h)` as a string of `'0'` and `'1'`.
///
/// # Safety
/// Pointers must be valid; free the string with [`sadic_string_free`].
#[no_mangle]
pub unsafe extern "C" fn sadic_generate_word(
    fam: *const SadicFamily,
    h: usize,
    i: usize,
    which: SadicWhich,
    out: *mut *mut c_char,
) -> SadicStatus {
    guard(|| {
        let which = match which {
            SadicWhich::U => Which::U,
            SadicWhich::V => Which::V,
        };
        write_string(out, generate_word(family(fam)?, h, i, which)?.to_string())
    })
}

/// Prefix of `u^(h)` of `len` letters.
///
/// # Safety
/// Pointers must be valid; free the string with [`sadic_string_free`].
#[no_mangle]
pub unsafe extern "C" fn sadic_prefix(
    fam: *const SadicFamily,
    h: usize,
    len: usize,
    out: *mut *mut c_char,
) -> SadicStatus {
    guard(|| write_string(out, prefix_stream(family(fam)?, h, len)?.to_string()))
}

/// Window length `N_i` as a decimal string.
///
/// # Safety
/// Pointers must be valid; free the string with [`sadic_string_free`].
#[no_mangle]
pub unsafe extern "C" fn sadic_recurrence_bound(
    fam: *const SadicFamily,
    i: usize,
    out: *mut *mut c_char,
) -> SadicStatus {
    guard(|| write_string(out, recurrence_bound(family(fam)?, i)?.value.to_string()))
}

/// Frequency report for rank `i` as JSON.
///
/// # Safety
/// Pointers must be valid; free the string with [`sadic_string_free`].
#[no_mangle]
pub unsafe extern "C" fn sadic_excess_report_json(
    fam: *const SadicFamily,
    i: usize,
    out: *mut *mut c_char,
) -> SadicStatus {
    guard(|| write_string(out, json_string!(&excess_check(family(fam)?, i)?)))
}

/// Splits `word` as `s σ_h(v) p`; writes `{"s": ..., "v": ..., "p": ...}` with `s`, `p` in run notation.
///
/// # Safety
/// Pointers must be valid; free the string with [`sadic_string_free`].
#[no_mangle]
pub unsafe extern "C" fn sadic_desubstitute(
    fam: *const SadicFamily,
    h: usize,
    word: *const c_char,
    out: *mut *mut c_char,
) -> SadicStatus {
    guard(|| {
        let w: FiniteWord = str_arg(word, "word")?
            .parse()
            .map_err(|_| Error::InvalidArgument("word must consist of '0' and '1'".into()))?;
        let d = desubstitute_word(family(fam)?, h, &w)?;
        let doc = json!({ "s": d.s.to_string(), "v": d.v.to_string(), "p": d.p.to_string() });
        write_string(out, json_string!(&doc))
    })
}
