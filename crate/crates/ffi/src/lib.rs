//! C ABI for the morseprof library.
//!
//! Handles are opaque pointers created and freed here; strings returned
//! through `char **` parameters are owned by the library and must be
//! released with `mp_string_free`. Every fallible call returns an
//! `MpStatus`; on failure `mp_last_error_message` (thread-local, valid
//! until the next failing call on the same thread) carries the detail.
//! The generated header lives in `include/morseprof.h`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use morseprof::{
    assemble_profile, catalog, collapse_search, detect_spikes, exact_min_morse,
    greedy_incremental, reduce, ClosureMode, CollapseCertificate, Filtration, FiltrationError,
    MorseError, PersistencePairing, ProfileReport,
};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    ValidationError = 4,
    UnknownName = 5,
    CapExceeded = 6,
    BudgetExhausted = 7,
}

/// Opaque filtration handle.
pub struct MpFiltration(Filtration);

/// Opaque persistence pairing handle.
pub struct MpPairing(PersistencePairing);

/// Opaque profile handle (levels plus detected spikes).
pub struct MpProfile(ProfileReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let cstring = CString::new(message).unwrap_or_else(|_| c"invalid error text".to_owned());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(cstring));
}

fn fail(status: MpStatus, message: String) -> MpStatus {
    set_error(message);
    status
}

fn filtration_error_status(e: &FiltrationError) -> MpStatus {
    match e {
        FiltrationError::Parse { .. } => MpStatus::ParseError,
        FiltrationError::UnknownName(_) => MpStatus::UnknownName,
        _ => MpStatus::ValidationError,
    }
}

/// Message set by the most recent failing call on this thread, or null.
/// The pointer stays valid until the next failing call on the thread.
#[no_mangle]
pub extern "C" fn mp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

unsafe fn read_str<'a>(text: *const c_char) -> Result<&'a str, MpStatus> {
    if text.is_null() {
        return Err(fail(MpStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(text)
        .to_str()
        .map_err(|_| fail(MpStatus::InvalidUtf8, "string is not valid UTF-8".into()))
}

fn give_string(out: *mut *mut c_char, value: String) -> MpStatus {
    if out.is_null() {
        return fail(MpStatus::NullPointer, "null output pointer".into());
    }
    match CString::new(value) {
        Ok(s) => {
            unsafe { *out = s.into_raw() };
            MpStatus::Ok
        }
        Err(_) => fail(
            MpStatus::ValidationError,
            "output contains an interior NUL byte".into(),
        ),
    }
}

/// Parses the filtration file format. With `auto_close`, missing faces are
/// inserted at the smallest grade of their listed cofaces.
///
/// # Safety
/// `text` must point to a NUL-terminated string and `out` to writable
/// pointer storage.
#[no_mangle]
pub unsafe extern "C" fn mp_filtration_parse(
    text: *const c_char,
    auto_close: bool,
    out: *mut *mut MpFiltration,
) -> MpStatus {
    let text = match read_str(text) {
        Ok(t) => t,
        Err(status) => return status,
    };
    if out.is_null() {
        return fail(MpStatus::NullPointer, "null output pointer".into());
    }
    let mode = if auto_close {
        ClosureMode::AutoClose
    } else {
        ClosureMode::Strict
    };
    match Filtration::parse(text, mode) {
        Ok(f) => {
            *out = Box::into_raw(Box::new(MpFiltration(f)));
            MpStatus::Ok
        }
        Err(e) => fail(filtration_error_status(&e), e.to_string()),
    }
}

/// Builds a built-in example filtration: point, circle, dunce-hat,
/// dunce-hat-filtration, pentagon-rips.
///
/// # Safety
/// `name` must point to a NUL-terminated string and `out` to writable
/// pointer storage.
#[no_mangle]
pub unsafe extern "C" fn mp_filtration_catalog(
    name: *const c_char,
    out: *mut *mut MpFiltration,
) -> MpStatus {
    let name = match read_str(name) {
        Ok(n) => n,
        Err(status) => return status,
    };
    if out.is_null() {
        return fail(MpStatus::NullPointer, "null output pointer".into());
    }
    match catalog(name) {
        Ok(f) => {
            *out = Box::into_raw(Box::new(MpFiltration(f)));
            MpStatus::Ok
        }
        Err(e) => fail(filtration_error_status(&e), e.to_string()),
    }
}

/// # Safety
/// `f` must be a pointer from this library, not yet freed; null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn mp_filtration_free(f: *mut MpFiltration) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Number of simplices; 0 for a null handle.
///
/// # Safety
/// `f` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn mp_filtration_simplex_count(f: *const MpFiltration) -> usize {
    f.as_ref().map_or(0, |f| f.0.len())
}

/// Number of distinct grades; 0 for a null handle.
///
/// # Safety
/// `f` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn mp_filtration_level_count(f: *const MpFiltration) -> usize {
    f.as_ref().map_or(0, |f| f.0.num_levels())
}

/// Canonical filtration file text; free with `mp_string_free`.
///
/// # Safety
/// `f` must be a live handle and `out` writable pointer storage.
#[no_mangle]
pub unsafe extern "C" fn mp_filtration_to_string(
    f: *const MpFiltration,
    out: *mut *mut c_char,
) -> MpStatus {
    let Some(f) = f.as_ref() else {
        return fail(MpStatus::NullPointer, "null filtration handle".into());
    };
    give_string(out, f.0.to_file_string())
}

/// Computes the persistence pairing of a filtration.
///
/// # Safety
/// `f` must be a live handle and `out` writable pointer storage.
#[no_mangle]
pub unsafe extern "C" fn mp_pairing_compute(
    f: *const MpFiltration,
    out: *mut *mut MpPairing,
) -> MpStatus {
    let Some(f) = f.as_ref() else {
        return fail(MpStatus::NullPointer, "null filtration handle".into());
    };
    if out.is_null() {
        return fail(MpStatus::NullPointer, "null output pointer".into());
    }
    *out = Box::into_raw(Box::new(MpPairing(reduce(&f.0))));
    MpStatus::Ok
}

/// # Safety
/// `p` must be a pointer from this library, not yet freed; null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn mp_pairing_free(p: *mut MpPairing) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Barcode as JSON (`[{dim, birth, death|null}, ...]`); free with
/// `mp_string_free`.
///
/// # Safety
/// `p` must be a live handle and `out` writable pointer storage.
#[no_mangle]
pub unsafe extern "C" fn mp_barcode_json(p: *const MpPairing, out: *mut *mut c_char) -> MpStatus {
    let Some(p) = p.as_ref() else {
        return fail(MpStatus::NullPointer, "null pairing handle".into());
    };
    give_string(out, p.0.barcode_json())
}

/// Betti number of the sublevel complex at `grade` in homology dimension
/// `dim`, written to `out`.
///
/// # Safety
/// `p` must be a live handle and `out` writable integer storage.
#[no_mangle]
pub unsafe extern "C" fn mp_betti_at(
    p: *const MpPairing,
    grade: f64,
    dim: usize,
    out: *mut usize,
) -> MpStatus {
    let Some(p) = p.as_ref() else {
        return fail(MpStatus::NullPointer, "null pairing handle".into());
    };
    if out.is_null() {
        return fail(MpStatus::NullPointer, "null output pointer".into());
    }
    *out = p.0.betti_at(grade).get(dim).copied().unwrap_or(0);
    MpStatus::Ok
}

/// Computes the Morse complexity profile with exact values at levels of at
/// most `exact_cap` simplices, plus spike detection.
///
/// # Safety
/// `f` must be a live handle and `out` writable pointer storage.
#[no_mangle]
pub unsafe extern "C" fn mp_profile_compute(
    f: *const MpFiltration,
    exact_cap: usize,
    out: *mut *mut MpProfile,
) -> MpStatus {
    let Some(f) = f.as_ref() else {
        return fail(MpStatus::NullPointer, "null filtration handle".into());
    };
    if out.is_null() {
        return fail(MpStatus::NullPointer, "null output pointer".into());
    }
    let pairing = reduce(&f.0);
    let greedy = greedy_incremental(&f.0);
    let profile = assemble_profile(&f.0, &pairing, &greedy, exact_cap)
        .expect("pairing and greedy come from this filtration");
    let spikes =
        detect_spikes(&profile, &pairing).expect("profile and pairing share a filtration");
    *out = Box::into_raw(Box::new(MpProfile(ProfileReport::new(profile, spikes))));
    MpStatus::Ok
}

/// # Safety
/// `p` must be a pointer from this library, not yet freed; null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn mp_profile_free(p: *mut MpProfile) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Profile and spikes as JSON; free with `mp_string_free`.
///
/// # Safety
/// `p` must be a live handle and `out` writable pointer storage.
#[no_mangle]
pub unsafe extern "C" fn mp_profile_json(p: *const MpProfile, out: *mut *mut c_char) -> MpStatus {
    let Some(p) = p.as_ref() else {
        return fail(MpStatus::NullPointer, "null profile handle".into());
    };
    give_string(out, p.0.to_json())
}

/// Number of detected spikes; 0 for a null handle.
///
/// # Safety
/// `p` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn mp_profile_spike_count(p: *const MpProfile) -> usize {
    p.as_ref().map_or(0, |p| p.0.spikes.len())
}

/// Greedy critical total at level index `level`, written to `out`.
///
/// # Safety
/// `p` must be a live handle and `out` writable integer storage.
#[no_mangle]
pub unsafe extern "C" fn mp_profile_greedy_total(
    p: *const MpProfile,
    level: usize,
    out: *mut usize,
) -> MpStatus {
    let Some(p) = p.as_ref() else {
        return fail(MpStatus::NullPointer, "null profile handle".into());
    };
    if out.is_null() {
        return fail(MpStatus::NullPointer, "null output pointer".into());
    }
    match p.0.levels.get(level) {
        Some(l) => {
            *out = l.greedy_total();
            MpStatus::Ok
        }
        None => fail(
            MpStatus::ValidationError,
            format!("level {level} out of range"),
        ),
    }
}

/// Runs the collapsibility search on the filtration's full complex.
/// Writes 1 for collapsible and 0 for a definite refutation; budget
/// exhaustion returns `BudgetExhausted` and writes nothing.
///
/// # Safety
/// `f` must be a live handle and `out` writable integer storage.
#[no_mangle]
pub unsafe extern "C" fn mp_collapse_search(
    f: *const MpFiltration,
    node_budget: u64,
    out: *mut i32,
) -> MpStatus {
    let Some(f) = f.as_ref() else {
        return fail(MpStatus::NullPointer, "null filtration handle".into());
    };
    if out.is_null() {
        return fail(MpStatus::NullPointer, "null output pointer".into());
    }
    match collapse_search(f.0.complex(), node_budget) {
        Ok(CollapseCertificate::Collapsible { .. }) => {
            *out = 1;
            MpStatus::Ok
        }
        Ok(CollapseCertificate::NotCollapsible { .. }) => {
            *out = 0;
            MpStatus::Ok
        }
        Err(e @ MorseError::BudgetExhausted { .. }) => {
            fail(MpStatus::BudgetExhausted, e.to_string())
        }
        Err(e) => fail(MpStatus::ValidationError, e.to_string()),
    }
}

/// Exact minimal Morse number of the filtration's full complex, refusing
/// complexes larger than `simplex_cap`.
///
/// # Safety
/// `f` must be a live handle and `out` writable integer storage.
#[no_mangle]
pub unsafe extern "C" fn mp_exact_min_morse(
    f: *const MpFiltration,
    simplex_cap: usize,
    out: *mut usize,
) -> MpStatus {
    let Some(f) = f.as_ref() else {
        return fail(MpStatus::NullPointer, "null filtration handle".into());
    };
    if out.is_null() {
        return fail(MpStatus::NullPointer, "null output pointer".into());
    }
    match exact_min_morse(f.0.complex(), simplex_cap) {
        Ok(m) => {
            *out = m.total;
            MpStatus::Ok
        }
        Err(e @ MorseError::CapExceeded { .. }) => fail(MpStatus::CapExceeded, e.to_string()),
        Err(e) => fail(MpStatus::ValidationError, e.to_string()),
    }
}

/// Per-level greedy critical totals: writes up to `len` values into `buf`
/// and stores the level count in `out_len`.
///
/// # Safety
/// `f` must be a live handle, `buf` writable storage for `len` values (or
/// null with `len == 0`), `out_len` writable.
#[no_mangle]
pub unsafe extern "C" fn mp_greedy_totals(
    f: *const MpFiltration,
    buf: *mut usize,
    len: usize,
    out_len: *mut usize,
) -> MpStatus {
    let Some(f) = f.as_ref() else {
        return fail(MpStatus::NullPointer, "null filtration handle".into());
    };
    if out_len.is_null() {
        return fail(MpStatus::NullPointer, "null output pointer".into());
    }
    let totals = greedy_incremental(&f.0).totals();
    *out_len = totals.len();
    if !buf.is_null() {
        for (i, &t) in totals.iter().take(len).enumerate() {
            *buf.add(i) = t;
        }
    }
    MpStatus::Ok
}

/// Frees a string returned by this library; null is a no-op.
///
/// # Safety
/// `s` must be a string from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
