//! C ABI for the arfkit library: opaque handles, integer status codes, and
//! canonical-JSON report functions, so other languages can bind without
//! understanding Rust types.
//!
//! Conventions:
//! - Every fallible function returns an [`ArfkitStatus`]; on failure a
//!   thread-local message is readable through [`arfkit_last_error_message`]
//!   until the next arfkit call on the same thread.
//! - Strings returned through `char**` are NUL-terminated, UTF-8, and owned
//!   by the caller; free them with [`arfkit_string_free`].
//! - `ArfkitSemigroup` is an opaque handle; free it with
//!   [`arfkit_semigroup_free`].
//! - List-returning functions fill a caller buffer and report the required
//!   length, so callers can size with a NULL buffer first.
//! - JSON reports are byte-identical to the CLI's `--format json` output for
//!   the same inputs, which makes cross-language parity testable.
//!
//! Panics never cross the boundary; they are caught and reported as
//! `ARFKIT_STATUS_INTERNAL_INCONSISTENCY`.

// The safety contracts (valid pointers, lengths, ownership) are stated once
// above and in the generated header rather than per function.
#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use arfkit::cli::{self, Options, OutputFormat, Payload, Request};
use arfkit::quadratic::QuadraticFormF2;
use arfkit::ramification::Filtration;
use arfkit::semigroup::NumericalSemigroup;
use arfkit::Error;

/// Status codes mirroring the CLI exit-code contract, plus boundary errors.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArfkitStatus {
    Ok = 0,
    InputError = 1,
    PrecisionFailure = 2,
    InternalInconsistency = 3,
    NullPointer = 4,
    InvalidUtf8 = 5,
    BufferTooSmall = 6,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let sanitized: Vec<u8> = message.bytes().filter(|&b| b != 0).collect();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).expect("NUL bytes stripped");
    });
}

fn status_of(err: &Error) -> ArfkitStatus {
    match err.exit_code() {
        1 => ArfkitStatus::InputError,
        2 => ArfkitStatus::PrecisionFailure,
        _ => ArfkitStatus::InternalInconsistency,
    }
}

/// Message for the most recent failure on this thread. Valid until the next
/// arfkit call on the same thread; never NULL.
#[no_mangle]
pub extern "C" fn arfkit_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Free a string returned by an arfkit function. NULL is allowed.
#[no_mangle]
pub unsafe extern "C" fn arfkit_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

unsafe fn utf8_arg<'a>(ptr: *const c_char) -> Result<&'a str, ArfkitStatus> {
    if ptr.is_null() {
        set_error("NULL string argument");
        return Err(ArfkitStatus::NullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        ArfkitStatus::InvalidUtf8
    })
}

unsafe fn u64_slice<'a>(ptr: *const u64, len: usize) -> Result<&'a [u64], ArfkitStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        set_error("NULL array argument with nonzero length");
        return Err(ArfkitStatus::NullPointer);
    }
    Ok(std::slice::from_raw_parts(ptr, len))
}

fn out_string(out: *mut *mut c_char, value: String) -> ArfkitStatus {
    if out.is_null() {
        set_error("NULL output pointer");
        return ArfkitStatus::NullPointer;
    }
    let sanitized: Vec<u8> = value.bytes().filter(|&b| b != 0).collect();
    let c = CString::new(sanitized).expect("NUL bytes stripped");
    unsafe { *out = c.into_raw() };
    ArfkitStatus::Ok
}

fn fill_u64s(values: &[u64], buf: *mut u64, cap: usize, out_len: *mut usize) -> ArfkitStatus {
    if out_len.is_null() {
        set_error("NULL out_len pointer");
        return ArfkitStatus::NullPointer;
    }
    unsafe { *out_len = values.len() };
    if values.is_empty() {
        return ArfkitStatus::Ok;
    }
    if buf.is_null() || cap < values.len() {
        set_error("buffer too small; out_len holds the required length");
        return ArfkitStatus::BufferTooSmall;
    }
    let dst = unsafe { std::slice::from_raw_parts_mut(buf, values.len()) };
    dst.copy_from_slice(values);
    ArfkitStatus::Ok
}

fn guarded<F>(body: F) -> ArfkitStatus
where
    F: FnOnce() -> ArfkitStatus,
{
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic caught at the C boundary");
            ArfkitStatus::InternalInconsistency
        }
    }
}

fn render_request(request: Request) -> Result<String, (ArfkitStatus, String)> {
    let report = cli::run(&request);
    let rendered = cli::render(&report, OutputFormat::Json);
    if report.exit_code == 0 {
        Ok(rendered)
    } else {
        let message = report
            .diagnostics
            .first()
            .cloned()
            .unwrap_or_else(|| format!("exit code {}", report.exit_code));
        let status = match report.exit_code {
            1 => ArfkitStatus::InputError,
            2 => ArfkitStatus::PrecisionFailure,
            _ => ArfkitStatus::InternalInconsistency,
        };
        Err((status, message))
    }
}

fn json_options(truncation: u32, max_steps: u32, precision_guard: bool) -> Options {
    Options {
        truncation,
        max_steps,
        format: OutputFormat::Json,
        precision_guard,
    }
}

fn report_entry(out_json: *mut *mut c_char, request: Request) -> ArfkitStatus {
    match render_request(request) {
        Ok(rendered) => out_string(out_json, rendered),
        Err((status, message)) => {
            set_error(&message);
            status
        }
    }
}

/// Canonical JSON report for a quadratic form literal such as
/// `"x1*x2 + x3^2"`. Byte-identical to `arfkit form <literal> --json`.
#[no_mangle]
pub unsafe extern "C" fn arfkit_form_report_json(
    form_literal: *const c_char,
    out_json: *mut *mut c_char,
) -> ArfkitStatus {
    guarded(|| {
        let literal = match utf8_arg(form_literal) {
            Ok(s) => s,
            Err(status) => return status,
        };
        let form = match QuadraticFormF2::parse(literal, None) {
            Ok(f) => f,
            Err(e) => {
                set_error(&e.to_string());
                return status_of(&e);
            }
        };
        report_entry(
            out_json,
            Request {
                payload: Payload::Form { form },
                options: json_options(arfkit::DEFAULT_TRUNCATION, arfkit::DEFAULT_MAX_STEPS, true),
            },
        )
    })
}

/// Canonical JSON report for a generator set. Byte-identical to
/// `arfkit semigroup --generators ... --json`.
#[no_mangle]
pub unsafe extern "C" fn arfkit_semigroup_report_json(
    generators: *const u64,
    len: usize,
    out_json: *mut *mut c_char,
) -> ArfkitStatus {
    guarded(|| {
        let gens = match u64_slice(generators, len) {
            Ok(s) => s.to_vec(),
            Err(status) => return status,
        };
        report_entry(
            out_json,
            Request {
                payload: Payload::Semigroup { generators: gens },
                options: json_options(arfkit::DEFAULT_TRUNCATION, arfkit::DEFAULT_MAX_STEPS, true),
            },
        )
    })
}

/// Canonical JSON report for a branch. `coordinates_text` uses the branch
/// file format (one series literal per line); `field_spec` is `"q"` or
/// `"f<p>"`. Byte-identical to the corresponding CLI invocation.
#[no_mangle]
pub unsafe extern "C" fn arfkit_branch_report_json(
    coordinates_text: *const c_char,
    field_spec: *const c_char,
    truncation: u32,
    max_steps: u32,
    precision_guard: bool,
    out_json: *mut *mut c_char,
) -> ArfkitStatus {
    guarded(|| {
        let text = match utf8_arg(coordinates_text) {
            Ok(s) => s,
            Err(status) => return status,
        };
        let spec = match utf8_arg(field_spec) {
            Ok(s) => s,
            Err(status) => return status,
        };
        let parsed = arfkit::scalar::Field::parse(spec)
            .and_then(|field| Ok((field, arfkit::branch::Branch::parse(text, field)?)));
        let (field, branch) = match parsed {
            Ok(pair) => pair,
            Err(e) => {
                set_error(&e.to_string());
                return status_of(&e);
            }
        };
        if truncation < 8 || max_steps < 1 {
            set_error("truncation must be >= 8 and max_steps >= 1");
            return ArfkitStatus::InputError;
        }
        report_entry(
            out_json,
            Request {
                payload: Payload::Branch { branch, field },
                options: json_options(truncation, max_steps, precision_guard),
            },
        )
    })
}

/// Canonical JSON report for a ramification filtration. Byte-identical to
/// `arfkit ramify --orders ... --abelian ... --json`.
#[no_mangle]
pub unsafe extern "C" fn arfkit_ramify_report_json(
    orders: *const u64,
    len: usize,
    abelian: bool,
    out_json: *mut *mut c_char,
) -> ArfkitStatus {
    guarded(|| {
        let orders = match u64_slice(orders, len) {
            Ok(s) => s,
            Err(status) => return status,
        };
        let filtration = match Filtration::new(orders, abelian, "") {
            Ok(f) => f,
            Err(e) => {
                set_error(&e.to_string());
                return status_of(&e);
            }
        };
        report_entry(
            out_json,
            Request {
                payload: Payload::Ramify { filtration },
                options: json_options(arfkit::DEFAULT_TRUNCATION, arfkit::DEFAULT_MAX_STEPS, true),
            },
        )
    })
}

/// Opaque numerical semigroup handle.
pub struct ArfkitSemigroup(NumericalSemigroup);

/// Build a numerical semigroup from generators. On success `*out` owns the
/// handle; free it with [`arfkit_semigroup_free`].
#[no_mangle]
pub unsafe extern "C" fn arfkit_semigroup_from_generators(
    generators: *const u64,
    len: usize,
    out: *mut *mut ArfkitSemigroup,
) -> ArfkitStatus {
    guarded(|| {
        if out.is_null() {
            set_error("NULL output pointer");
            return ArfkitStatus::NullPointer;
        }
        let gens = match u64_slice(generators, len) {
            Ok(s) => s,
            Err(status) => return status,
        };
        match NumericalSemigroup::from_generators(gens) {
            Ok(s) => {
                *out = Box::into_raw(Box::new(ArfkitSemigroup(s)));
                ArfkitStatus::Ok
            }
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Free a semigroup handle. NULL is allowed.
#[no_mangle]
pub unsafe extern "C" fn arfkit_semigroup_free(semigroup: *mut ArfkitSemigroup) {
    if !semigroup.is_null() {
        drop(Box::from_raw(semigroup));
    }
}

unsafe fn semigroup_ref<'a>(
    ptr: *const ArfkitSemigroup,
) -> Result<&'a NumericalSemigroup, ArfkitStatus> {
    if ptr.is_null() {
        set_error("NULL semigroup handle");
        return Err(ArfkitStatus::NullPointer);
    }
    Ok(&(*ptr).0)
}

/// True iff every element shift of the semigroup is additively closed.
#[no_mangle]
pub unsafe extern "C" fn arfkit_semigroup_is_arf(
    semigroup: *const ArfkitSemigroup,
    out: *mut bool,
) -> ArfkitStatus {
    guarded(|| {
        let s = match semigroup_ref(semigroup) {
            Ok(s) => s,
            Err(status) => return status,
        };
        if out.is_null() {
            set_error("NULL output pointer");
            return ArfkitStatus::NullPointer;
        }
        *out = s.is_arf();
        ArfkitStatus::Ok
    })
}

/// Least element from which every natural number belongs.
#[no_mangle]
pub unsafe extern "C" fn arfkit_semigroup_conductor(
    semigroup: *const ArfkitSemigroup,
    out: *mut u64,
) -> ArfkitStatus {
    guarded(|| {
        let s = match semigroup_ref(semigroup) {
            Ok(s) => s,
            Err(status) => return status,
        };
        if out.is_null() {
            set_error("NULL output pointer");
            return ArfkitStatus::NullPointer;
        }
        *out = s.conductor();
        ArfkitStatus::Ok
    })
}

/// Least nonzero element.
#[no_mangle]
pub unsafe extern "C" fn arfkit_semigroup_multiplicity(
    semigroup: *const ArfkitSemigroup,
    out: *mut u64,
) -> ArfkitStatus {
    guarded(|| {
        let s = match semigroup_ref(semigroup) {
            Ok(s) => s,
            Err(status) => return status,
        };
        if out.is_null() {
            set_error("NULL output pointer");
            return ArfkitStatus::NullPointer;
        }
        *out = s.multiplicity();
        ArfkitStatus::Ok
    })
}

/// Membership test.
#[no_mangle]
pub unsafe extern "C" fn arfkit_semigroup_contains(
    semigroup: *const ArfkitSemigroup,
    n: u64,
    out: *mut bool,
) -> ArfkitStatus {
    guarded(|| {
        let s = match semigroup_ref(semigroup) {
            Ok(s) => s,
            Err(status) => return status,
        };
        if out.is_null() {
            set_error("NULL output pointer");
            return ArfkitStatus::NullPointer;
        }
        *out = s.contains(n);
        ArfkitStatus::Ok
    })
}

/// The smallest Arf semigroup containing this one, as a new handle.
#[no_mangle]
pub unsafe extern "C" fn arfkit_semigroup_arf_closure(
    semigroup: *const ArfkitSemigroup,
    out: *mut *mut ArfkitSemigroup,
) -> ArfkitStatus {
    guarded(|| {
        let s = match semigroup_ref(semigroup) {
            Ok(s) => s,
            Err(status) => return status,
        };
        if out.is_null() {
            set_error("NULL output pointer");
            return ArfkitStatus::NullPointer;
        }
        *out = Box::into_raw(Box::new(ArfkitSemigroup(s.arf_closure())));
        ArfkitStatus::Ok
    })
}

/// Elements below the conductor. Fills `buf` (capacity `cap`) and stores the
/// required length in `*out_len`; call with a NULL buffer to size first.
#[no_mangle]
pub unsafe extern "C" fn arfkit_semigroup_sporadic(
    semigroup: *const ArfkitSemigroup,
    buf: *mut u64,
    cap: usize,
    out_len: *mut usize,
) -> ArfkitStatus {
    guarded(|| {
        let s = match semigroup_ref(semigroup) {
            Ok(s) => s,
            Err(status) => return status,
        };
        fill_u64s(s.sporadic(), buf, cap, out_len)
    })
}

/// Multiplicity sequence of an Arf semigroup (buffer contract as for
/// [`arfkit_semigroup_sporadic`]). Fails with an input error when the
/// semigroup is not Arf.
#[no_mangle]
pub unsafe extern "C" fn arfkit_semigroup_multiplicity_sequence(
    semigroup: *const ArfkitSemigroup,
    buf: *mut u64,
    cap: usize,
    out_len: *mut usize,
) -> ArfkitStatus {
    guarded(|| {
        let s = match semigroup_ref(semigroup) {
            Ok(s) => s,
            Err(status) => return status,
        };
        match s.multiplicity_sequence() {
            Ok(seq) => fill_u64s(seq.entries(), buf, cap, out_len),
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Characters of an Arf semigroup (buffer contract as for
/// [`arfkit_semigroup_sporadic`]).
#[no_mangle]
pub unsafe extern "C" fn arfkit_semigroup_characters(
    semigroup: *const ArfkitSemigroup,
    buf: *mut u64,
    cap: usize,
    out_len: *mut usize,
) -> ArfkitStatus {
    guarded(|| {
        let s = match semigroup_ref(semigroup) {
            Ok(s) => s,
            Err(status) => return status,
        };
        match s.characters() {
            Ok(chars) => fill_u64s(chars.values(), buf, cap, out_len),
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Arf invariant of a nondegenerate form literal, by both routes, which must
/// agree (0 or 1 written to `*out_arf`).
#[no_mangle]
pub unsafe extern "C" fn arfkit_form_arf(
    form_literal: *const c_char,
    out_arf: *mut u8,
) -> ArfkitStatus {
    guarded(|| {
        let literal = match utf8_arg(form_literal) {
            Ok(s) => s,
            Err(status) => return status,
        };
        if out_arf.is_null() {
            set_error("NULL output pointer");
            return ArfkitStatus::NullPointer;
        }
        let computed = QuadraticFormF2::parse(literal, None).and_then(|form| {
            let democratic = form.arf_democratic()?;
            let symplectic = form.arf_symplectic()?;
            if democratic != symplectic {
                return Err(Error::Inconsistency(format!(
                    "majority count gives Arf {democratic} but the symplectic sum gives {symplectic}"
                )));
            }
            Ok(democratic)
        });
        match computed {
            Ok(value) => {
                *out_arf = value;
                ArfkitStatus::Ok
            }
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}
