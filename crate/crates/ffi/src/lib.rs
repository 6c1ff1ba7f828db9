//! C ABI over the octanomial library.
//!
//! Fields and surfaces are opaque handles. Each constructor has a matching
//! `oct_*_free`. Every fallible function returns an
//! [`OctStatus`]; the message of the last failure on the calling thread is
//! available from [`oct_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use octanomial::e6::triad_pairs;
use octanomial::normal_form::{
    octanomial_reduce, octanomial_surface, stratum_params, verify_stratum, FormVariant,
    OctanomialParams,
};
use octanomial::poly::form_from_json;
use octanomial::surface::{eckardt_points, lines_on, marking_from, CubicSurface};
use octanomial::{Elem, Error, Field};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OctStatus {
    Ok = 0,
    NullArgument = 1,
    Parse = 2,
    NotSmooth = 3,
    NotSplit = 4,
    CubeRootUnavailable = 5,
    NoSolution = 6,
    VerificationFailed = 7,
    Field = 8,
    Other = 9,
    Panic = 10,
}

impl From<&Error> for OctStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Parse(_) | Error::Io(_) => OctStatus::Parse,
            Error::NotSmooth => OctStatus::NotSmooth,
            Error::NotSplit { .. } | Error::ConfigurationMismatch(_) => OctStatus::NotSplit,
            Error::CubeRootUnavailable { .. } => OctStatus::CubeRootUnavailable,
            Error::NoSolutionInField(_) => OctStatus::NoSolution,
            Error::NotPrime(_)
            | Error::ReducibleModulus
            | Error::NoSuchRoot { .. }
            | Error::UnsupportedField(_)
            | Error::SpecMismatch(_, _) => OctStatus::Field,
            Error::IdentityFailure(_)
            | Error::NotAnAutomorphism
            | Error::ConstraintViolation(_) => OctStatus::VerificationFailed,
            _ => OctStatus::Other,
        }
    }
}

/// A finite field, the rationals, or a number field.
pub struct OctField(Field);

/// A smooth cubic surface.
pub struct OctSurface(CubicSurface);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(e: Error) -> OctStatus {
    set_error(&e.to_string());
    OctStatus::from(&e)
}

/// Runs `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), OctStatus>) -> OctStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => OctStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("panic inside the library");
            OctStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, OctStatus> {
    if s.is_null() {
        set_error("null string argument");
        return Err(OctStatus::NullArgument);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("string is not utf-8");
        OctStatus::Parse
    })
}

unsafe fn write_out<T>(out: *mut T, v: T) -> Result<(), OctStatus> {
    if out.is_null() {
        set_error("null output pointer");
        return Err(OctStatus::NullArgument);
    }
    out.write(v);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), OctStatus> {
    let c = CString::new(s).map_err(|_| {
        set_error("output contains a nul byte");
        OctStatus::Other
    })?;
    write_out(out, c.into_raw())
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, OctStatus> {
    p.as_ref().ok_or_else(|| {
        set_error("null handle");
        OctStatus::NullArgument
    })
}

/// Message of the last failure on this thread. Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn oct_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Frees a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn oct_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a field spec such as "Fp:13", "Fq:2:2" or "Q".
///
/// # Safety
/// `spec` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn oct_field_new(spec: *const c_char, out: *mut *mut OctField) -> OctStatus {
    guard(|| {
        let k = Field::parse(read_str(spec)?).map_err(fail)?;
        write_out(out, Box::into_raw(Box::new(OctField(k))))
    })
}

/// # Safety
/// `k` must come from [`oct_field_new`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn oct_field_free(k: *mut OctField) {
    if !k.is_null() {
        drop(Box::from_raw(k));
    }
}

/// Number of elements, or 0 for an infinite field.
///
/// # Safety
/// `k` must be a live field handle.
#[no_mangle]
pub unsafe extern "C" fn oct_field_cardinality(k: *const OctField, out: *mut u64) -> OctStatus {
    guard(|| {
        let k = handle(k)?;
        write_out(out, k.0.cardinality().unwrap_or(0))
    })
}

/// The octanomial surface with parameters a[0..4], given as element literals.
///
/// # Safety
/// `k` must be a live field handle, `a` must point to four nul-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn oct_surface_octanomial(
    k: *const OctField,
    a: *const *const c_char,
    out: *mut *mut OctSurface,
) -> OctStatus {
    guard(|| {
        let k = &handle(k)?.0;
        if a.is_null() {
            set_error("null parameter array");
            return Err(OctStatus::NullArgument);
        }
        let mut vals: Vec<Elem> = Vec::with_capacity(4);
        for i in 0..4 {
            vals.push(k.parse_elem(read_str(*a.add(i))?).map_err(fail)?);
        }
        let params = OctanomialParams::new([
            vals[0].clone(),
            vals[1].clone(),
            vals[2].clone(),
            vals[3].clone(),
        ]);
        write_out(
            out,
            Box::into_raw(Box::new(OctSurface(octanomial_surface(k, &params)))),
        )
    })
}

/// A surface from its JSON form `{"field", "degree", "coeffs"}` (or an object with a "surface" key).
///
/// # Safety
/// `json` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn oct_surface_from_json(
    json: *const c_char,
    out: *mut *mut OctSurface,
) -> OctStatus {
    guard(|| {
        let v: serde_json::Value = serde_json::from_str(read_str(json)?).map_err(|e| {
            set_error(&e.to_string());
            OctStatus::Parse
        })?;
        let form = v.get("surface").unwrap_or(&v);
        let x = form_from_json(form)
            .and_then(CubicSurface::new)
            .map_err(fail)?;
        write_out(out, Box::into_raw(Box::new(OctSurface(x))))
    })
}

/// # Safety
/// `x` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn oct_surface_free(x: *mut OctSurface) {
    if !x.is_null() {
        drop(Box::from_raw(x));
    }
}

/// # Safety
/// `x` must be a live surface handle.
#[no_mangle]
pub unsafe extern "C" fn oct_surface_is_smooth(x: *const OctSurface, out: *mut bool) -> OctStatus {
    guard(|| {
        let x = handle(x)?;
        write_out(out, x.0.is_smooth().map_err(fail)?)
    })
}

/// Number of lines defined over the field of the surface.
///
/// # Safety
/// `x` must be a live surface handle.
#[no_mangle]
pub unsafe extern "C" fn oct_surface_line_count(
    x: *const OctSurface,
    out: *mut usize,
) -> OctStatus {
    guard(|| {
        let x = handle(x)?;
        write_out(out, lines_on(&x.0).map_err(fail)?.len())
    })
}

/// Eckardt points of a split surface.
///
/// # Safety
/// `x` must be a live surface handle.
#[no_mangle]
pub unsafe extern "C" fn oct_surface_eckardt_count(
    x: *const OctSurface,
    out: *mut usize,
) -> OctStatus {
    guard(|| {
        let x = &handle(x)?.0;
        let m = lines_on(x)
            .and_then(|l| marking_from(x.field(), &l))
            .map_err(fail)?;
        write_out(out, eckardt_points(&m).len())
    })
}

/// Reduction to octanomial form along triad pair `pair`; writes JSON `{T, params, scalar, ...}`.
///
/// # Safety
/// `x` must be a live surface handle; free the output with [`oct_string_free`].
#[no_mangle]
pub unsafe extern "C" fn oct_surface_reduce(
    x: *const OctSurface,
    pair: usize,
    ordering: usize,
    cube_root: usize,
    out_json: *mut *mut c_char,
) -> OctStatus {
    guard(|| {
        let x = &handle(x)?.0;
        let m = lines_on(x)
            .and_then(|l| marking_from(x.field(), &l))
            .map_err(fail)?;
        let pairs = triad_pairs();
        let p = pairs
            .get(pair)
            .ok_or_else(|| fail(Error::Parse(format!("pair {pair} out of range"))))?;
        let r = octanomial_reduce(x, &m, p, ordering, cube_root).map_err(fail)?;
        write_string(out_json, r.to_json(x.field()).to_string())
    })
}

/// Instantiates a catalog stratum with the given free values (may be null when
/// `n_free` is 0) and verifies it. Writes the report JSON; returns
/// `VerificationFailed` when any claim fails, with the report still written.
///
/// # Safety
/// `label` must be nul-terminated, `free` must hold `n_free` strings, and
/// `k` must be a live field handle.
#[no_mangle]
pub unsafe extern "C" fn oct_stratum_verify(
    label: *const c_char,
    alternative: bool,
    k: *const OctField,
    free: *const *const c_char,
    n_free: usize,
    out_json: *mut *mut c_char,
) -> OctStatus {
    let mut passed = true;
    let status = guard(|| {
        let label = read_str(label)?;
        let k = &handle(k)?.0;
        let mut vals = Vec::with_capacity(n_free);
        if n_free > 0 && free.is_null() {
            set_error("null free-value array");
            return Err(OctStatus::NullArgument);
        }
        for i in 0..n_free {
            vals.push(k.parse_elem(read_str(*free.add(i))?).map_err(fail)?);
        }
        let variant = if alternative {
            FormVariant::Alternative
        } else {
            FormVariant::Main
        };
        let inst = stratum_params(label, variant, k, &vals, 0).map_err(fail)?;
        let rep = verify_stratum(&inst);
        passed = rep.passed();
        if !passed {
            set_error("a claim failed");
        }
        write_string(out_json, rep.to_json().to_string())
    });
    if status == OctStatus::Ok && !passed {
        OctStatus::VerificationFailed
    } else {
        status
    }
}

/// Runs one command-line invocation (`argv[0]` is the program name) and
/// writes its JSON output. Returns the process exit code (0, 1 or 2), or -1
/// on a null argument.
///
/// # Safety
/// `argv` must hold `argc` nul-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn oct_run(
    argc: usize,
    argv: *const *const c_char,
    out_json: *mut *mut c_char,
) -> i32 {
    if argv.is_null() || out_json.is_null() {
        set_error("null argument");
        return -1;
    }
    let mut args = Vec::with_capacity(argc);
    for i in 0..argc {
        match read_str(*argv.add(i)) {
            Ok(s) => args.push(s.to_string()),
            Err(_) => return -1,
        }
    }
    let mut buf = Vec::new();
    let code = match catch_unwind(AssertUnwindSafe(|| octanomial::cli::run(args, &mut buf))) {
        Ok(c) => c,
        Err(_) => {
            set_error("panic inside the library");
            return -1;
        }
    };
    let text = String::from_utf8_lossy(&buf).into_owned();
    match CString::new(text) {
        Ok(c) => *out_json = c.into_raw(),
        Err(_) => *out_json = ptr::null_mut(),
    }
    code
}
