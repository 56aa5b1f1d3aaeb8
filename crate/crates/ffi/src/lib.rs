//! C ABI for the tamebrauer library.
//!
//! Conventions:
//! - Opaque handles (`TbField`, `TbClass`) own library values; free them
//!   with the matching `tb_*_free` function.
//! - Every fallible call returns a `TbStatus`; outputs are written through
//!   out-pointers only on `TB_STATUS_OK`.
//! - Strings are NUL-terminated UTF-8 JSON documents in the schemas the CLI
//!   uses; strings returned by the library must be released with
//!   `tb_string_free`.
//! - `tb_last_error_message` returns a description of the most recent error
//!   on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use tamebrauer::brauer::TameClass;
use tamebrauer::report::{
    self, ClassInput, ExtensionInput, SymbolInput, TowerRunConfig, VerifyMode,
};
use tamebrauer::symbols::FieldModel;
use tamebrauer::Error;

/// Result codes; aligned with the CLI exit codes where they overlap.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TbStatus {
    /// Success; for verification entry points, everything verified.
    Ok = 0,
    /// A verification failed or an oracle cross-check disagreed.
    VerifyFailed = 1,
    /// Malformed input: bad JSON, schema violation, or a domain error.
    InvalidInput = 2,
    /// The configured enumeration budget was exceeded.
    BudgetExceeded = 3,
    /// A required pointer argument was NULL.
    NullArgument = 4,
    /// Internal error (a bug; details via tb_last_error_message).
    InternalError = 5,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let message = CString::new(message.replace('\0', " "))
        .unwrap_or_else(|_| CString::new("invalid error text").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(message));
}

fn status_of(err: &Error) -> TbStatus {
    match err {
        Error::BudgetExceeded { .. } => TbStatus::BudgetExceeded,
        Error::NonSquareQuotient | Error::TowerInvariantViolation(_) => TbStatus::InternalError,
        _ => TbStatus::InvalidInput,
    }
}

/// Opaque handle for a field model.
pub struct TbField(FieldModel);

/// Opaque handle for a tame Brauer class.
pub struct TbClass(TameClass);

fn run(body: impl FnOnce() -> Result<TbStatus, TbStatus>) -> TbStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(status)) => status,
        Ok(Err(status)) => status,
        Err(panic) => {
            let text = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_error(format!("internal panic: {text}"));
            TbStatus::InternalError
        }
    }
}

fn fail(err: Error) -> TbStatus {
    let status = status_of(&err);
    set_error(err.to_string());
    status
}

unsafe fn parse_utf8<'a>(ptr: *const c_char) -> Result<&'a str, TbStatus> {
    if ptr.is_null() {
        set_error("NULL string argument".into());
        return Err(TbStatus::NullArgument);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8".into());
        TbStatus::InvalidInput
    })
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, TbStatus> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        set_error(format!("at field `{}`: {}", e.path(), e.inner()));
        TbStatus::InvalidInput
    })
}

fn emit_json<T: serde::Serialize>(value: &T, out: *mut *mut c_char) -> Result<(), TbStatus> {
    if out.is_null() {
        set_error("NULL output pointer".into());
        return Err(TbStatus::NullArgument);
    }
    let text = serde_json::to_string(value).map_err(|e| {
        set_error(format!("serialization failed: {e}"));
        TbStatus::InternalError
    })?;
    let c_text = CString::new(text).map_err(|_| {
        set_error("output contained an interior NUL".into());
        TbStatus::InternalError
    })?;
    unsafe { *out = c_text.into_raw() };
    Ok(())
}

fn out_handle<T>(out: *mut *mut T, value: T) -> Result<(), TbStatus> {
    if out.is_null() {
        set_error("NULL output pointer".into());
        return Err(TbStatus::NullArgument);
    }
    unsafe { *out = Box::into_raw(Box::new(value)) };
    Ok(())
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn tb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Description of the most recent error on this thread, or NULL when no
/// error was recorded. Do not free; the buffer is reused by later errors.
#[no_mangle]
pub extern "C" fn tb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow().as_ref().map_or(std::ptr::null(), |message| message.as_ptr())
    })
}

/// Release a string returned by this library.
///
/// # Safety
/// `ptr` must be NULL or a pointer previously returned by a `tb_*` function
/// that documents `tb_string_free`.
#[no_mangle]
pub unsafe extern "C" fn tb_string_free(ptr: *mut c_char) {
    if !ptr.is_null() {
        drop(CString::from_raw(ptr));
    }
}

/// Parse a field model from JSON: {"residue_char": q, "lattice": {...},
/// "labels": {...}}.
///
/// # Safety
/// `json` must be a valid NUL-terminated string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tb_field_from_json(
    json: *const c_char,
    out: *mut *mut TbField,
) -> TbStatus {
    run(|| {
        let text = parse_utf8(json)?;
        let field: FieldModel = parse_json(text)?;
        out_handle(out, TbField(field))?;
        Ok(TbStatus::Ok)
    })
}

/// # Safety
/// `field` must be NULL or a pointer from `tb_field_from_json`.
#[no_mangle]
pub unsafe extern "C" fn tb_field_free(field: *mut TbField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Parse a class from JSON: {"schema":1, "field": {...}, "level": N,
/// "form": [[...]]} (the schema key is optional).
///
/// # Safety
/// `json` must be a valid NUL-terminated string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tb_class_from_json(
    json: *const c_char,
    out: *mut *mut TbClass,
) -> TbStatus {
    run(|| {
        let text = parse_utf8(json)?;
        let input: ClassInput = parse_json(text)?;
        let class = input.into_class().map_err(fail)?;
        out_handle(out, TbClass(class))?;
        Ok(TbStatus::Ok)
    })
}

/// # Safety
/// `class` must be NULL or a pointer from a `tb_class_*` constructor.
#[no_mangle]
pub unsafe extern "C" fn tb_class_free(class: *mut TbClass) {
    if !class.is_null() {
        drop(Box::from_raw(class));
    }
}

unsafe fn class_ref<'a>(class: *const TbClass) -> Result<&'a TameClass, TbStatus> {
    if class.is_null() {
        set_error("NULL class handle".into());
        return Err(TbStatus::NullArgument);
    }
    Ok(&(*class).0)
}

/// Serialize a class handle back to JSON; release with `tb_string_free`.
///
/// # Safety
/// `class` must come from a `tb_class_*` constructor; `out_json` valid.
#[no_mangle]
pub unsafe extern "C" fn tb_class_to_json(
    class: *const TbClass,
    out_json: *mut *mut c_char,
) -> TbStatus {
    run(|| {
        let class = class_ref(class)?;
        emit_json(class, out_json)?;
        Ok(TbStatus::Ok)
    })
}

/// Sum of two classes over the same field (tensor product of algebras).
///
/// # Safety
/// Handles must come from `tb_class_*` constructors; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn tb_class_add(
    left: *const TbClass,
    right: *const TbClass,
    out: *mut *mut TbClass,
) -> TbStatus {
    run(|| {
        let sum = tamebrauer::brauer::add(class_ref(left)?, class_ref(right)?).map_err(fail)?;
        out_handle(out, TbClass(sum))?;
        Ok(TbStatus::Ok)
    })
}

/// Class of the opposite algebra.
///
/// # Safety
/// As for `tb_class_add`.
#[no_mangle]
pub unsafe extern "C" fn tb_class_neg(class: *const TbClass, out: *mut *mut TbClass) -> TbStatus {
    run(|| {
        let neg = tamebrauer::brauer::neg(class_ref(class)?);
        out_handle(out, TbClass(neg))?;
        Ok(TbStatus::Ok)
    })
}

/// The class scaled by an integer multiplier.
///
/// # Safety
/// As for `tb_class_add`.
#[no_mangle]
pub unsafe extern "C" fn tb_class_scale(
    class: *const TbClass,
    multiplier: i64,
    out: *mut *mut TbClass,
) -> TbStatus {
    run(|| {
        let scaled = tamebrauer::brauer::scale(class_ref(class)?, &multiplier.into());
        out_handle(out, TbClass(scaled))?;
        Ok(TbStatus::Ok)
    })
}

/// Scalar extension of a class along a larger field.
///
/// # Safety
/// As for `tb_class_add`; `field` from `tb_field_from_json`.
#[no_mangle]
pub unsafe extern "C" fn tb_class_extend(
    class: *const TbClass,
    field: *const TbField,
    out: *mut *mut TbClass,
) -> TbStatus {
    run(|| {
        if field.is_null() {
            set_error("NULL field handle".into());
            return Err(TbStatus::NullArgument);
        }
        let extended =
            tamebrauer::brauer::extend_scalars(class_ref(class)?, &(*field).0).map_err(fail)?;
        out_handle(out, TbClass(extended))?;
        Ok(TbStatus::Ok)
    })
}

/// Invariants report for a class handle as JSON
/// {"index", "exponent", "divisors", "value_lattice"}; release with
/// `tb_string_free`.
///
/// # Safety
/// As for `tb_class_to_json`.
#[no_mangle]
pub unsafe extern "C" fn tb_class_invariants_json(
    class: *const TbClass,
    out_json: *mut *mut c_char,
) -> TbStatus {
    run(|| {
        let inv = tamebrauer::brauer::invariants(class_ref(class)?);
        emit_json(&inv, out_json)?;
        Ok(TbStatus::Ok)
    })
}

/// Full symbol report (same document as `tamebrauer symbol`). Budget 0 means
/// no oracle cross-check. Returns VerifyFailed when the oracle disagrees.
///
/// # Safety
/// `input_json` valid NUL-terminated string; `out_json` valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tb_symbol_report_json(
    input_json: *const c_char,
    oracle_budget: u64,
    out_json: *mut *mut c_char,
) -> TbStatus {
    run(|| {
        let text = parse_utf8(input_json)?;
        let input: SymbolInput = parse_json(text)?;
        let budget = (oracle_budget > 0).then_some(oracle_budget);
        let report = report::symbol_report(input, budget).map_err(fail)?;
        let disagree = report.oracle_agrees == Some(false);
        emit_json(&report, out_json)?;
        Ok(if disagree { TbStatus::VerifyFailed } else { TbStatus::Ok })
    })
}

/// Full class report (same document as `tamebrauer class`).
///
/// # Safety
/// As for `tb_symbol_report_json`.
#[no_mangle]
pub unsafe extern "C" fn tb_class_report_json(
    input_json: *const c_char,
    oracle_budget: u64,
    out_json: *mut *mut c_char,
) -> TbStatus {
    run(|| {
        let text = parse_utf8(input_json)?;
        let input: ClassInput = parse_json(text)?;
        let class = input.into_class().map_err(fail)?;
        let budget = (oracle_budget > 0).then_some(oracle_budget);
        let report = report::class_report(&class, budget).map_err(fail)?;
        let disagree = report.oracle_agrees == Some(false);
        emit_json(&report, out_json)?;
        Ok(if disagree { TbStatus::VerifyFailed } else { TbStatus::Ok })
    })
}

/// Scalar-extension report (same document as `tamebrauer extend`). Returns
/// VerifyFailed when the two division predicates disagree.
///
/// # Safety
/// Both inputs valid NUL-terminated strings; `out_json` valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tb_extend_report_json(
    class_json: *const c_char,
    extension_json: *const c_char,
    out_json: *mut *mut c_char,
) -> TbStatus {
    run(|| {
        let class: ClassInput = parse_json(parse_utf8(class_json)?)?;
        let class = class.into_class().map_err(fail)?;
        let ext: ExtensionInput = parse_json(parse_utf8(extension_json)?)?;
        let target = ext.into_field().map_err(fail)?;
        let report = report::extend_report(&class, &target).map_err(fail)?;
        let consistent = report.consistent();
        emit_json(&report, out_json)?;
        Ok(if consistent { TbStatus::Ok } else { TbStatus::VerifyFailed })
    })
}

/// Build and verify tower levels (same document as `tamebrauer tower`).
/// `verify` is one of "all", "center", "intersection". Returns VerifyFailed
/// when a verification fails or the oracle disagrees, BudgetExceeded when
/// the sweep is too large for `budget`.
///
/// # Safety
/// `verify` valid NUL-terminated string; `out_json` valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tb_tower_report_json(
    p: u64,
    levels: u32,
    verify: *const c_char,
    oracle: bool,
    budget: u64,
    residue_char: u64,
    out_json: *mut *mut c_char,
) -> TbStatus {
    run(|| {
        let verify = parse_utf8(verify)?.parse::<VerifyMode>().map_err(fail)?;
        let cfg = TowerRunConfig {
            p,
            levels: levels as usize,
            verify,
            oracle,
            budget,
            residue_char,
        };
        let report = report::tower_report(&cfg).map_err(fail)?;
        let ok = report.pass && report.oracle_agrees != Some(false);
        emit_json(&report, out_json)?;
        Ok(if ok { TbStatus::Ok } else { TbStatus::VerifyFailed })
    })
}
