//! C interface to the reasoner.
//!
//! Formulas and models are opaque heap handles owned by the caller and
//! released with the matching `_free` function. Every fallible call returns
//! a [`PdslStatus`]; on failure `pdsl_last_error` describes the problem.
//! Strings returned to C are released with `pdsl_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pdsl::reasoner::{
    global_sat, local_sat, preferential_entails, translate_restricted, FragmentMode, QueryOptions,
    ReasonerError,
};
use pdsl::semantics::{satisfies, satisfies_globally, Spss};
use pdsl::syntax::{parse_formula, print_formula, Formula, KnowledgeBase, VocabMode};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PdslStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidModel = 4,
    ResourceExceeded = 5,
    NotInFragment = 6,
    Internal = 7,
}

/// A parsed formula.
pub struct PdslFormula(Formula);

/// A validated state-preferential standpoint structure.
pub struct PdslModel(Spss);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = CString::new(message.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

fn fail(status: PdslStatus, message: impl Into<String>) -> PdslStatus {
    set_error(message);
    status
}

fn guard(body: impl FnOnce() -> PdslStatus) -> PdslStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    catch_unwind(AssertUnwindSafe(body))
        .unwrap_or_else(|_| fail(PdslStatus::Internal, "panic inside the reasoner"))
}

unsafe fn read_str<'a>(text: *const c_char) -> Result<&'a str, PdslStatus> {
    if text.is_null() {
        return Err(fail(PdslStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(text)
        .to_str()
        .map_err(|_| fail(PdslStatus::InvalidUtf8, "string is not UTF-8"))
}

unsafe fn write_string(out: *mut *mut c_char, text: String) -> PdslStatus {
    if out.is_null() {
        return fail(PdslStatus::NullPointer, "null output pointer");
    }
    let c = CString::new(text).expect("no interior nul");
    *out = c.into_raw();
    PdslStatus::Ok
}

fn reasoner_status(e: ReasonerError) -> PdslStatus {
    match e {
        ReasonerError::ResourceExceeded(r) => fail(PdslStatus::ResourceExceeded, r.to_string()),
        ReasonerError::InternalSoundness(m) => fail(PdslStatus::Internal, m),
    }
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn pdsl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn pdsl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a formula; the vocabulary is inferred from the text.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pdsl_formula_parse(
    text: *const c_char,
    out: *mut *mut PdslFormula,
) -> PdslStatus {
    guard(|| {
        if out.is_null() {
            return fail(PdslStatus::NullPointer, "null output pointer");
        }
        let text = match read_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse_formula(text, VocabMode::Inferred) {
            Ok((f, _)) => {
                *out = Box::into_raw(Box::new(PdslFormula(f)));
                PdslStatus::Ok
            }
            Err(e) => fail(PdslStatus::ParseError, e.to_string()),
        }
    })
}

/// # Safety
/// `f` must be null or a handle from `pdsl_formula_parse`.
#[no_mangle]
pub unsafe extern "C" fn pdsl_formula_free(f: *mut PdslFormula) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Concrete syntax of the formula.
///
/// # Safety
/// `f` must be a live formula handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pdsl_formula_print(
    f: *const PdslFormula,
    out: *mut *mut c_char,
) -> PdslStatus {
    guard(|| match f.as_ref() {
        Some(f) => write_string(out, print_formula(&f.0)),
        None => fail(PdslStatus::NullPointer, "null formula"),
    })
}

unsafe fn sat_common(
    f: *const PdslFormula,
    global: bool,
    out_sat: *mut bool,
    out_model: *mut *mut PdslModel,
) -> PdslStatus {
    guard(|| {
        let (Some(f), false) = (f.as_ref(), out_sat.is_null()) else {
            return fail(PdslStatus::NullPointer, "null argument");
        };
        let result = if global {
            global_sat(&f.0, QueryOptions::default())
        } else {
            local_sat(&f.0, QueryOptions::default())
        };
        match result {
            Ok(r) => {
                *out_sat = r.is_sat();
                if !out_model.is_null() {
                    *out_model = r
                        .model
                        .map_or(ptr::null_mut(), |m| Box::into_raw(Box::new(PdslModel(m))));
                }
                PdslStatus::Ok
            }
            Err(e) => reasoner_status(e),
        }
    })
}

/// Local satisfiability. When satisfiable and `out_model` is not null, a
/// model whose first precisification satisfies `f` is stored there;
/// otherwise it is set to null.
///
/// # Safety
/// `f` must be a live formula handle, `out_sat` valid, `out_model` null or valid.
#[no_mangle]
pub unsafe extern "C" fn pdsl_local_sat(
    f: *const PdslFormula,
    out_sat: *mut bool,
    out_model: *mut *mut PdslModel,
) -> PdslStatus {
    sat_common(f, false, out_sat, out_model)
}

/// Global satisfiability, with the same conventions as `pdsl_local_sat`.
///
/// # Safety
/// As for `pdsl_local_sat`.
#[no_mangle]
pub unsafe extern "C" fn pdsl_global_sat(
    f: *const PdslFormula,
    out_sat: *mut bool,
    out_model: *mut *mut PdslModel,
) -> PdslStatus {
    sat_common(f, true, out_sat, out_model)
}

/// Preferential entailment of `query` by the `kb_len` formulas in `kb`.
/// A countermodel is stored in `out_countermodel` (when not null) if the
/// query is not entailed.
///
/// # Safety
/// `kb` must point to `kb_len` live formula handles (or be null with
/// `kb_len == 0`); other pointers as for `pdsl_local_sat`.
#[no_mangle]
pub unsafe extern "C" fn pdsl_entails(
    kb: *const *const PdslFormula,
    kb_len: usize,
    query: *const PdslFormula,
    out_entailed: *mut bool,
    out_countermodel: *mut *mut PdslModel,
) -> PdslStatus {
    guard(|| {
        let (Some(query), false) = (query.as_ref(), out_entailed.is_null()) else {
            return fail(PdslStatus::NullPointer, "null argument");
        };
        if kb.is_null() && kb_len > 0 {
            return fail(PdslStatus::NullPointer, "null knowledge base");
        }
        let mut formulas = Vec::with_capacity(kb_len);
        for i in 0..kb_len {
            match (*kb.add(i)).as_ref() {
                Some(f) => formulas.push(f.0.clone()),
                None => return fail(PdslStatus::NullPointer, format!("null formula at {i}")),
            }
        }
        let kb = match KnowledgeBase::from_formulas(formulas) {
            Ok(kb) => kb,
            Err(e) => return fail(PdslStatus::ParseError, e.to_string()),
        };
        match preferential_entails(&kb, &query.0, QueryOptions::default()) {
            Ok(r) => {
                *out_entailed = r.entailed;
                if !out_countermodel.is_null() {
                    *out_countermodel = r
                        .countermodel
                        .map_or(ptr::null_mut(), |m| Box::into_raw(Box::new(PdslModel(m))));
                }
                PdslStatus::Ok
            }
            Err(e) => reasoner_status(e),
        }
    })
}

/// Translation into classical standpoint logic; `permissive` admits
/// complex indexes.
///
/// # Safety
/// `f` must be a live formula handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pdsl_translate(
    f: *const PdslFormula,
    permissive: bool,
    out: *mut *mut PdslFormula,
) -> PdslStatus {
    guard(|| {
        let (Some(f), false) = (f.as_ref(), out.is_null()) else {
            return fail(PdslStatus::NullPointer, "null argument");
        };
        let mode = if permissive {
            FragmentMode::Permissive
        } else {
            FragmentMode::Strict
        };
        match translate_restricted(&f.0, mode) {
            Ok(t) => {
                *out = Box::into_raw(Box::new(PdslFormula(t.formula)));
                PdslStatus::Ok
            }
            Err(e) => fail(PdslStatus::NotInFragment, e.to_string()),
        }
    })
}

/// Reads and validates a model in the JSON exchange format.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pdsl_model_from_json(
    json: *const c_char,
    out: *mut *mut PdslModel,
) -> PdslStatus {
    guard(|| {
        if out.is_null() {
            return fail(PdslStatus::NullPointer, "null output pointer");
        }
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match Spss::from_json_str(text) {
            Ok(m) => {
                *out = Box::into_raw(Box::new(PdslModel(m)));
                PdslStatus::Ok
            }
            Err(e) => fail(PdslStatus::InvalidModel, e.to_string()),
        }
    })
}

/// # Safety
/// `m` must be a live model handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pdsl_model_to_json(
    m: *const PdslModel,
    out: *mut *mut c_char,
) -> PdslStatus {
    guard(|| match m.as_ref() {
        Some(m) => write_string(out, m.0.to_json_string()),
        None => fail(PdslStatus::NullPointer, "null model"),
    })
}

/// # Safety
/// `m` must be null or a handle from this library.
#[no_mangle]
pub unsafe extern "C" fn pdsl_model_free(m: *mut PdslModel) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Truth of `f` at the named precisification, or at all of them when
/// `world` is null.
///
/// # Safety
/// `m` and `f` must be live handles, `world` null or a nul-terminated
/// string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pdsl_model_satisfies(
    m: *const PdslModel,
    f: *const PdslFormula,
    world: *const c_char,
    out: *mut bool,
) -> PdslStatus {
    guard(|| {
        let (Some(m), Some(f), false) = (m.as_ref(), f.as_ref(), out.is_null()) else {
            return fail(PdslStatus::NullPointer, "null argument");
        };
        let value = if world.is_null() {
            satisfies_globally(&m.0, &f.0)
        } else {
            let name = match read_str(world) {
                Ok(n) => n,
                Err(s) => return s,
            };
            match m.0.index_of(name) {
                Some(i) => satisfies(&m.0, i, &f.0),
                None => {
                    return fail(
                        PdslStatus::InvalidModel,
                        format!("unknown precisification `{name}`"),
                    )
                }
            }
        };
        match value {
            Ok(v) => {
                *out = v;
                PdslStatus::Ok
            }
            Err(e) => fail(PdslStatus::InvalidModel, e.to_string()),
        }
    })
}
