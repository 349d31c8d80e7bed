//! C interface to `toricbundle`.
//!
//! Diagrams live behind an opaque `TbDiagram` handle. Every call returns a
//! `TbStatus`; on failure `tb_last_error` describes the problem. Strings
//! handed out by the library are released with `tb_string_free`. A zero
//! budget, cap or size argument selects the library default.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use toricbundle::bundles::{check_adapted, Diagram};
use toricbundle::coxrees::{build_ib, strong_khovanskii_verdict, subduction_extend, VerdictOptions};
use toricbundle::error::Error;
use toricbundle::polyring::GroebnerBudget;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    DimensionMismatch = 4,
    Budget = 5,
    Precondition = 6,
    NonTropicalRow = 7,
    Invalid = 8,
    Panic = 9,
}

/// Opaque diagram handle.
pub struct TbDiagram {
    inner: Diagram,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> TbStatus {
    match e {
        Error::Parse(_) => TbStatus::Parse,
        Error::DimensionMismatch(_) | Error::RingMismatch(_) => TbStatus::DimensionMismatch,
        Error::Budget(_) => TbStatus::Budget,
        Error::Precondition(_) => TbStatus::Precondition,
        Error::NonTropicalRow { .. } => TbStatus::NonTropicalRow,
        _ => TbStatus::Invalid,
    }
}

fn guard(f: impl FnOnce() -> Result<(), TbStatus>) -> TbStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TbStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            TbStatus::Panic
        }
    }
}

fn lib<T>(r: toricbundle::error::Result<T>) -> Result<T, TbStatus> {
    r.map_err(|e| {
        set_error(&e.to_string());
        status_of(&e)
    })
}

unsafe fn diagram<'a>(h: *const TbDiagram) -> Result<&'a Diagram, TbStatus> {
    if h.is_null() {
        set_error("null diagram handle");
        return Err(TbStatus::NullPointer);
    }
    Ok(&(*h).inner)
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), TbStatus> {
    if out.is_null() {
        set_error("null output pointer");
        return Err(TbStatus::NullPointer);
    }
    *out = CString::new(s).map_err(|_| TbStatus::Invalid)?.into_raw();
    Ok(())
}

fn budget(max_basis: usize) -> GroebnerBudget {
    let d = GroebnerBudget::default();
    if max_basis == 0 {
        d
    } else {
        GroebnerBudget { max_basis, ..d }
    }
}

/// Message for the last failed call on this thread, or NULL. Valid until the
/// next call into the library.
#[no_mangle]
pub extern "C" fn tb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses a diagram from its JSON text.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tb_diagram_from_json(json: *const c_char, out: *mut *mut TbDiagram) -> TbStatus {
    guard(|| {
        if json.is_null() || out.is_null() {
            set_error("null argument");
            return Err(TbStatus::NullPointer);
        }
        let text = CStr::from_ptr(json).to_str().map_err(|_| {
            set_error("diagram text is not UTF-8");
            TbStatus::InvalidUtf8
        })?;
        let d = lib(Diagram::from_json(text))?;
        *out = Box::into_raw(Box::new(TbDiagram { inner: d }));
        Ok(())
    })
}

/// # Safety
/// `d` must come from `tb_diagram_from_json` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tb_diagram_free(d: *mut TbDiagram) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Shape of the diagram: rows (rays) and columns (basis elements).
///
/// # Safety
/// `d` must be a live handle; `rows` and `cols` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn tb_diagram_shape(d: *const TbDiagram, rows: *mut usize, cols: *mut usize) -> TbStatus {
    guard(|| {
        let d = diagram(d)?;
        if rows.is_null() || cols.is_null() {
            set_error("null output pointer");
            return Err(TbStatus::NullPointer);
        }
        *rows = d.n_rows();
        *cols = d.n_cols();
        Ok(())
    })
}

/// Adaptedness check. Sets `adapted` to 1 or 0; when `report` is not NULL it
/// receives the JSON report.
///
/// # Safety
/// `d` must be a live handle and `adapted` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tb_check_adapted(d: *const TbDiagram, max_basis: usize, adapted: *mut i32, report: *mut *mut c_char) -> TbStatus {
    guard(|| {
        let d = diagram(d)?;
        if adapted.is_null() {
            set_error("null output pointer");
            return Err(TbStatus::NullPointer);
        }
        let r = lib(check_adapted(d, &budget(max_basis)))?;
        *adapted = i32::from(r.adapted);
        if !report.is_null() {
            write_string(report, serde_json::to_string(&r).expect("report serializes"))?;
        }
        Ok(())
    })
}

/// Mori dream verdict as a JSON report.
///
/// # Safety
/// `d` must be a live handle and `report` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tb_mds_verdict(d: *const TbDiagram, max_basis: usize, degree_cap: usize, report: *mut *mut c_char) -> TbStatus {
    guard(|| {
        let d = diagram(d)?;
        let mut opts = VerdictOptions { budget: budget(max_basis), ..VerdictOptions::default() };
        if degree_cap > 0 {
            opts.degree_cap = degree_cap;
        }
        let r = lib(strong_khovanskii_verdict(d, &opts))?;
        write_string(report, serde_json::to_string(&r).expect("report serializes"))
    })
}

/// Cox ring presentation in the polynomial text grammar.
///
/// # Safety
/// `d` must be a live handle and `text` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tb_cox_presentation(d: *const TbDiagram, max_basis: usize, text: *mut *mut c_char) -> TbStatus {
    guard(|| {
        let d = diagram(d)?;
        let ib = lib(build_ib(d, &budget(max_basis)))?;
        write_string(text, ib.to_string())
    })
}

/// Extends the basis by subduction. On termination `extended` (if not NULL)
/// receives a new handle for the extended diagram, otherwise NULL.
///
/// # Safety
/// `d` must be a live handle; `report` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tb_extend(
    d: *const TbDiagram,
    max_basis: usize,
    degree_cap: usize,
    max_adjoined: usize,
    report: *mut *mut c_char,
    extended: *mut *mut TbDiagram,
) -> TbStatus {
    guard(|| {
        let d = diagram(d)?;
        let defaults = VerdictOptions::default();
        let cap = if degree_cap == 0 { defaults.degree_cap } else { degree_cap };
        let size = if max_adjoined == 0 { defaults.max_adjoined } else { max_adjoined };
        let ext = lib(subduction_extend(d, cap, size, &budget(max_basis)))?;
        if !extended.is_null() {
            *extended = match &ext.diagram {
                Some(e) => Box::into_raw(Box::new(TbDiagram { inner: e.clone() })),
                None => ptr::null_mut(),
            };
        }
        write_string(report, serde_json::to_string(&ext).expect("report serializes"))
    })
}

/// JSON text of the diagram.
///
/// # Safety
/// `d` must be a live handle and `json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tb_diagram_to_json(d: *const TbDiagram, json: *mut *mut c_char) -> TbStatus {
    guard(|| {
        let d = diagram(d)?;
        write_string(json, d.to_json_value().to_string())
    })
}

/// # Safety
/// `s` must be a string returned by this library, or NULL.
#[no_mangle]
pub unsafe extern "C" fn tb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
