//! C interface. Complexes live behind an opaque handle; reports come back as
//! JSON strings owned by the library.
//!
//! Every function returns a [`GlabStatus`]. On failure a message is kept
//! per thread and can be read with [`glab_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use clap::Parser;
use glab_core::cli::{run_on, Cli, Outcome};
use glab_core::complex::SimplicialComplex;
use glab_core::{corpus, io, Error};

/// Status codes; 2 to 4 agree with the exit codes of the `glab` binary.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GlabStatus {
    Ok = 0,
    HypothesisFailure = 2,
    CheckFailure = 3,
    InputError = 4,
    NullArgument = 5,
    InvalidUtf8 = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

/// A simplicial complex.
pub struct GlabComplex {
    inner: SimplicialComplex,
    label: String,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn status_of(outcome: Outcome) -> GlabStatus {
    match outcome {
        Outcome::Pass => GlabStatus::Ok,
        Outcome::HypothesisFailure => GlabStatus::HypothesisFailure,
        Outcome::CheckFailure => GlabStatus::CheckFailure,
        Outcome::InputError => GlabStatus::InputError,
    }
}

fn fail(status: GlabStatus, message: impl Into<String>) -> GlabStatus {
    set_error(message);
    status
}

fn from_error(e: &Error) -> GlabStatus {
    fail(status_of(Outcome::of_error(e)), e.to_string())
}

fn guard(f: impl FnOnce() -> GlabStatus) -> GlabStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(GlabStatus::Panic, "internal panic"))
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, GlabStatus> {
    if s.is_null() {
        return Err(fail(GlabStatus::NullArgument, "null string"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| fail(GlabStatus::InvalidUtf8, e.to_string()))
}

unsafe fn handle<'a>(k: *const GlabComplex) -> Result<&'a GlabComplex, GlabStatus> {
    k.as_ref().ok_or_else(|| fail(GlabStatus::NullArgument, "null complex"))
}

unsafe fn emit(out: *mut *mut GlabComplex, inner: Result<SimplicialComplex, Error>, label: String) -> GlabStatus {
    match inner {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(GlabComplex { inner, label }));
            GlabStatus::Ok
        }
        Err(e) => from_error(&e),
    }
}

/// Parses a facet list (JSON or one facet per line) into `*out`.
///
/// # Safety
/// `text_in` is a NUL-terminated string and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn glab_complex_parse(text_in: *const c_char, out: *mut *mut GlabComplex) -> GlabStatus {
    guard(|| {
        if out.is_null() {
            return fail(GlabStatus::NullArgument, "null output");
        }
        *out = ptr::null_mut();
        match text(text_in) {
            Ok(t) => emit(out, io::parse_complex(t), "ffi".into()),
            Err(s) => s,
        }
    })
}

/// Looks up a builtin such as `cycle:5` or `join:cycle:3,cycle:3`.
///
/// # Safety
/// `name` is a NUL-terminated string and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn glab_complex_builtin(name: *const c_char, out: *mut *mut GlabComplex) -> GlabStatus {
    guard(|| {
        if out.is_null() {
            return fail(GlabStatus::NullArgument, "null output");
        }
        *out = ptr::null_mut();
        match text(name) {
            Ok(n) => emit(out, corpus::builtin(n), format!("builtin:{n}")),
            Err(s) => s,
        }
    })
}

/// Releases a complex. Null is ignored.
///
/// # Safety
/// `k` came from this library and is not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn glab_complex_free(k: *mut GlabComplex) {
    if !k.is_null() {
        drop(Box::from_raw(k));
    }
}

/// Number of vertices.
///
/// # Safety
/// `k` is a live handle and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn glab_complex_vertex_count(k: *const GlabComplex, out: *mut usize) -> GlabStatus {
    guard(|| match (handle(k), out.is_null()) {
        (Ok(k), false) => {
            *out = k.inner.vertices().len();
            GlabStatus::Ok
        }
        (Err(s), _) => s,
        (_, true) => fail(GlabStatus::NullArgument, "null output"),
    })
}

/// Size of the facets; fails with `HYPOTHESIS_FAILURE` on impure input.
///
/// # Safety
/// `k` is a live handle and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn glab_complex_rank(k: *const GlabComplex, out: *mut usize) -> GlabStatus {
    guard(|| match (handle(k), out.is_null()) {
        (Ok(k), false) => match k.inner.pure_rank() {
            Ok(d) => {
                *out = d;
                GlabStatus::Ok
            }
            Err(e) => from_error(&e),
        },
        (Err(s), _) => s,
        (_, true) => fail(GlabStatus::NullArgument, "null output"),
    })
}

/// Writes the h-vector into `buf` (capacity `cap`) and its length into
/// `*len`. With `cap` too small only `*len` is written.
///
/// # Safety
/// `k` is a live handle, `len` is writable and `buf` holds `cap` entries.
#[no_mangle]
pub unsafe extern "C" fn glab_complex_h_vector(
    k: *const GlabComplex,
    buf: *mut i64,
    cap: usize,
    len: *mut usize,
) -> GlabStatus {
    guard(|| {
        let k = match handle(k) {
            Ok(k) => k,
            Err(s) => return s,
        };
        if len.is_null() {
            return fail(GlabStatus::NullArgument, "null length");
        }
        let h = match k.inner.h_vector() {
            Ok(h) => h,
            Err(e) => return from_error(&e),
        };
        *len = h.len();
        if cap < h.len() {
            return fail(GlabStatus::BufferTooSmall, format!("need {} entries", h.len()));
        }
        if buf.is_null() {
            return fail(GlabStatus::NullArgument, "null buffer");
        }
        ptr::copy_nonoverlapping(h.as_ptr(), buf, h.len());
        GlabStatus::Ok
    })
}

/// Whether the complex is a GF(2) homology sphere.
///
/// # Safety
/// `k` is a live handle and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn glab_complex_is_sphere(k: *const GlabComplex, out: *mut bool) -> GlabStatus {
    guard(|| match (handle(k), out.is_null()) {
        (Ok(k), false) => {
            *out = k.inner.is_homology_sphere_f2();
            GlabStatus::Ok
        }
        (Err(s), _) => s,
        (_, true) => fail(GlabStatus::NullArgument, "null output"),
    })
}

/// Runs a command on the complex, for example
/// `"identity --facet 1,2 --gamma 1 --tau 2 --seed 7"`, with the same
/// arguments as the `glab` binary. `--input` and `--builtin` are ignored.
///
/// The JSON report is stored in `*report` whenever the arguments parse,
/// including when a check fails; release it with [`glab_string_free`].
///
/// # Safety
/// `k` is a live handle, `args` a NUL-terminated string and `report` writable.
#[no_mangle]
pub unsafe extern "C" fn glab_run(k: *const GlabComplex, args: *const c_char, report: *mut *mut c_char) -> GlabStatus {
    guard(|| {
        if report.is_null() {
            return fail(GlabStatus::NullArgument, "null output");
        }
        *report = ptr::null_mut();
        let (k, args) = match (handle(k), text(args)) {
            (Ok(k), Ok(a)) => (k, a),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let cli = match Cli::try_parse_from(std::iter::once("glab").chain(args.split_whitespace())) {
            Ok(cli) => cli,
            Err(e) => return fail(GlabStatus::InputError, e.to_string()),
        };
        let r = run_on(&cli, &k.inner, &k.label);
        let json = match CString::new(r.to_json()) {
            Ok(j) => j,
            Err(e) => return fail(GlabStatus::Panic, e.to_string()),
        };
        if let Some(m) = &r.message {
            set_error(m.clone());
        }
        *report = json.into_raw();
        status_of(r.outcome)
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` came from this library and is not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn glab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failure on this thread, or null. Valid until the
/// next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn glab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn glab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
