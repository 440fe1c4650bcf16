//! C ABI over the lattika kernel.
//!
//! Lattices are opaque handles created from the JSON file format and
//! released with `lattika_lattice_free`. Every fallible function returns a
//! `LattikaStatus`; on failure `lattika_last_error` describes the problem
//! (thread-local, valid until the next call on the same thread). Strings
//! returned through out-parameters are owned by the caller and must be
//! released with `lattika_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lattika::expr::Expr;
use lattika::extending::Analysis;
use lattika::io::{parse_lattice, ParseMode};
use lattika::{canonical_form, ElementId, Error, Lattice};

/// Opaque lattice handle.
pub struct LattikaLattice {
    inner: Lattice,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LattikaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    NotALattice = 4,
    OutOfRange = 5,
    SizeLimit = 6,
    Internal = 7,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(err: &Error) -> LattikaStatus {
    match err {
        Error::Parse(_) | Error::UnknownCheckId(_) | Error::Io { .. } => LattikaStatus::Parse,
        Error::IndexOutOfRange { .. } => LattikaStatus::OutOfRange,
        Error::SizeLimitExceeded { .. } => LattikaStatus::SizeLimit,
        _ => LattikaStatus::NotALattice,
    }
}

fn guard(f: impl FnOnce() -> Result<(), LattikaStatus>) -> LattikaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LattikaStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => {
            set_error("internal panic");
            LattikaStatus::Internal
        }
    }
}

fn fail(err: Error) -> LattikaStatus {
    set_error(err.to_string());
    status_of(&err)
}

unsafe fn lattice<'a>(l: *const LattikaLattice) -> Result<&'a Lattice, LattikaStatus> {
    if l.is_null() {
        set_error("null lattice handle");
        return Err(LattikaStatus::NullPointer);
    }
    Ok(&(*l).inner)
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, LattikaStatus> {
    if s.is_null() {
        set_error("null string");
        return Err(LattikaStatus::NullPointer);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("string is not valid UTF-8");
        LattikaStatus::InvalidUtf8
    })
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), LattikaStatus> {
    if out.is_null() {
        set_error("null output pointer");
        return Err(LattikaStatus::NullPointer);
    }
    out.write(value);
    Ok(())
}

fn element(l: &Lattice, e: u32) -> Result<ElementId, LattikaStatus> {
    if (e as usize) < l.size() {
        Ok(ElementId::new(e as usize))
    } else {
        set_error(format!("element {e} out of range for a lattice of size {}", l.size()));
        Err(LattikaStatus::OutOfRange)
    }
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("no interior nul").into_raw()
}

/// Message for the last failed call on this thread, or null.
#[no_mangle]
pub extern "C" fn lattika_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parses a lattice from its JSON text (strict mode).
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lattika_lattice_from_json(
    json: *const c_char,
    out: *mut *mut LattikaLattice,
) -> LattikaStatus {
    guard(|| {
        let src = text(json)?;
        let parsed = parse_lattice(src, ParseMode::Strict).map_err(fail)?;
        let handle = Box::into_raw(Box::new(LattikaLattice { inner: parsed.lattice }));
        let written = write(out, handle);
        if written.is_err() {
            drop(Box::from_raw(handle));
        }
        written
    })
}

/// # Safety
/// `l` must come from `lattika_lattice_from_json` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn lattika_lattice_free(l: *mut LattikaLattice) {
    if !l.is_null() {
        drop(Box::from_raw(l));
    }
}

/// # Safety
/// `l` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lattika_lattice_size(l: *const LattikaLattice, out: *mut usize) -> LattikaStatus {
    guard(|| write(out, lattice(l)?.size()))
}

/// # Safety
/// `l` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lattika_meet(l: *const LattikaLattice, a: u32, b: u32, out: *mut u32) -> LattikaStatus {
    guard(|| {
        let l = lattice(l)?;
        let m = l.meet(element(l, a)?, element(l, b)?);
        write(out, m.index() as u32)
    })
}

/// # Safety
/// `l` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lattika_join(l: *const LattikaLattice, a: u32, b: u32, out: *mut u32) -> LattikaStatus {
    guard(|| {
        let l = lattice(l)?;
        let j = l.join(element(l, a)?, element(l, b)?);
        write(out, j.index() as u32)
    })
}

/// # Safety
/// `l` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lattika_leq(l: *const LattikaLattice, a: u32, b: u32, out: *mut bool) -> LattikaStatus {
    guard(|| {
        let l = lattice(l)?;
        write(out, l.leq(element(l, a)?, element(l, b)?))
    })
}

/// # Safety
/// `l` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lattika_is_modular(l: *const LattikaLattice, out: *mut bool) -> LattikaStatus {
    guard(|| write(out, lattice(l)?.is_modular()))
}

/// Evaluates a property expression such as `"modular and type1(simple)"`.
///
/// # Safety
/// `l` must be a live handle, `expr` nul-terminated, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn lattika_check(l: *const LattikaLattice, expr: *const c_char, out: *mut bool) -> LattikaStatus {
    guard(|| {
        let l = lattice(l)?;
        let e = Expr::parse(text(expr)?).map_err(fail)?;
        write(out, e.eval(&Analysis::new(l)))
    })
}

/// JSON object with the `E`, `C`, `D` and `P` element classes.
///
/// # Safety
/// `l` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lattika_classes_json(l: *const LattikaLattice, out: *mut *mut c_char) -> LattikaStatus {
    guard(|| {
        let l = lattice(l)?;
        let json = Analysis::new(l).table.to_json().to_string();
        write(out, owned_string(json))
    })
}

/// Canonical form as lowercase hex; equal strings mean isomorphic lattices.
///
/// # Safety
/// `l` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lattika_canonical_form(l: *const LattikaLattice, out: *mut *mut c_char) -> LattikaStatus {
    guard(|| write(out, owned_string(canonical_form(lattice(l)?).to_hex())))
}

/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn lattika_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
