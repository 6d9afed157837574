//! C ABI over `cvclone`.
//!
//! Every fallible function returns a [`CvcStatus`] and writes its result
//! through an out-pointer. On failure `cvc_last_error_message` describes the
//! most recent error on the calling thread. Objects returned through
//! out-pointers are owned by the caller and released with the matching
//! `*_free` function; strings are released with `cvc_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cvclone::{
    build_cloner, fidelity_vs_coherent, optimal_added_variance, optimal_fidelity, report_with,
    ClonerCircuit, CloneReport, Error, GaussianState, Preparation, Variant,
};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CvcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    IndexOutOfRange = 4,
    RejectedTransform = 5,
    NotUnitary = 6,
    Unphysical = 7,
    InvalidUtf8 = 8,
    BufferTooSmall = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CvcVariant {
    Dft = 0,
    Msplitter = 1,
    Percopy = 2,
}

fn variant_from_code(code: u32) -> Result<Variant, Failure> {
    match code {
        c if c == CvcVariant::Dft as u32 => Ok(Variant::Dft),
        c if c == CvcVariant::Msplitter as u32 => Ok(Variant::MSplitter),
        c if c == CvcVariant::Percopy as u32 => Ok(Variant::PerCopy),
        _ => Err(Failure(
            CvcStatus::InvalidArgument,
            format!("unknown variant code {code}"),
        )),
    }
}

/// A cloning circuit with its mode roles.
pub struct CvcCloner(ClonerCircuit);

/// A multimode Gaussian state.
pub struct CvcState(GaussianState);

/// Clone statistics of one run.
pub struct CvcReport(CloneReport);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(CvcStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::InvalidArgument(_) => CvcStatus::InvalidArgument,
            Error::DimensionMismatch { .. } => CvcStatus::DimensionMismatch,
            Error::IndexOutOfRange { .. } => CvcStatus::IndexOutOfRange,
            Error::RejectedTransform { .. } => CvcStatus::RejectedTransform,
            Error::NotUnitary { .. } => CvcStatus::NotUnitary,
            Error::Unphysical { .. } => CvcStatus::Unphysical,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(CvcStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, records any error or panic, and converts to a status.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> CvcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            CvcStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            CvcStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null("string"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| Failure(CvcStatus::InvalidUtf8, e.to_string()))
}

fn to_c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|e| Failure(CvcStatus::InvalidArgument, e.to_string()))
}

unsafe fn fill(buf: *mut f64, len: usize, values: &[f64]) -> Result<(), Failure> {
    if buf.is_null() {
        return Err(null("buffer"));
    }
    if len < values.len() {
        return Err(Failure(
            CvcStatus::BufferTooSmall,
            format!("buffer holds {len} values, need {}", values.len()),
        ));
    }
    ptr::copy_nonoverlapping(values.as_ptr(), buf, values.len());
    Ok(())
}

fn preparation(alpha_re: f64, alpha_im: f64, squeeze: f64) -> Result<Preparation, Failure> {
    if !(alpha_re.is_finite() && alpha_im.is_finite() && squeeze.is_finite()) {
        return Err(Failure(
            CvcStatus::InvalidArgument,
            "alpha and squeeze must be finite".into(),
        ));
    }
    Ok(Preparation::matched_squeezing(alpha_re, alpha_im, squeeze))
}

/// Error message of the last call on this thread, empty if it succeeded.
/// The pointer stays valid until the next call into this library on the
/// same thread.
#[no_mangle]
pub extern "C" fn cvc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cvc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// `MN/(MN + M − N)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cvc_optimal_fidelity(n: usize, m: usize, out: *mut f64) -> CvcStatus {
    guard(|| write(out, optimal_fidelity(n, m)?))
}

/// Optimal added variance per quadrature, `1/N − 1/M`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cvc_optimal_added_variance(n: usize, m: usize, out: *mut f64) -> CvcStatus {
    guard(|| write(out, optimal_added_variance(n, m)?))
}

/// Builds an N → M cloner. `variant` is a `CvcVariant` value.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cvc_cloner_new(
    n: usize,
    m: usize,
    variant: u32,
    out: *mut *mut CvcCloner,
) -> CvcStatus {
    guard(|| {
        let c = build_cloner(n, m, variant_from_code(variant)?)?;
        write(out, Box::into_raw(Box::new(CvcCloner(c))))
    })
}

/// Parses a cloner from its JSON description.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cvc_cloner_from_json(json: *const c_char, out: *mut *mut CvcCloner) -> CvcStatus {
    guard(|| {
        let c = ClonerCircuit::from_json(read_str(json)?)?;
        write(out, Box::into_raw(Box::new(CvcCloner(c))))
    })
}

/// # Safety
/// `cloner` must come from this library and not have been freed. Null is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn cvc_cloner_free(cloner: *mut CvcCloner) {
    if !cloner.is_null() {
        drop(Box::from_raw(cloner));
    }
}

/// Serializes the cloner; release the string with `cvc_string_free`.
///
/// # Safety
/// `cloner` must be live; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cvc_cloner_to_json(cloner: *const CvcCloner, out: *mut *mut c_char) -> CvcStatus {
    guard(|| {
        let c = deref(cloner, "cloner")?;
        write(out, to_c_string(c.0.to_json()?)?)
    })
}

/// # Safety
/// `cloner` must be live; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cvc_cloner_n_modes(cloner: *const CvcCloner, out: *mut usize) -> CvcStatus {
    guard(|| write(out, deref(cloner, "cloner")?.0.circuit.n_modes))
}

/// # Safety
/// `cloner` must be live; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cvc_cloner_beam_splitter_count(cloner: *const CvcCloner, out: *mut usize) -> CvcStatus {
    guard(|| write(out, deref(cloner, "cloner")?.0.circuit.beam_splitter_count()))
}

/// # Safety
/// `cloner` must be live; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cvc_cloner_amplifier_count(cloner: *const CvcCloner, out: *mut usize) -> CvcStatus {
    guard(|| write(out, deref(cloner, "cloner")?.0.circuit.amplifier_count()))
}

/// Copies the clone mode indices into `buf`. `out_len` receives the number
/// of clones even when `buf` is too small.
///
/// # Safety
/// `cloner` must be live; `buf` must hold `len` elements; `out_len` must be
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cvc_cloner_clone_modes(
    cloner: *const CvcCloner,
    buf: *mut usize,
    len: usize,
    out_len: *mut usize,
) -> CvcStatus {
    guard(|| {
        let modes = &deref(cloner, "cloner")?.0.roles.clones;
        write(out_len, modes.len())?;
        if buf.is_null() {
            return Err(null("buffer"));
        }
        if len < modes.len() {
            return Err(Failure(
                CvcStatus::BufferTooSmall,
                format!("buffer holds {len} indices, need {}", modes.len()),
            ));
        }
        ptr::copy_nonoverlapping(modes.as_ptr(), buf, modes.len());
        Ok(())
    })
}

/// Runs the cloner on `|α⟩`, squeezed by `squeeze` together with every
/// auxiliary mode, and returns the full output state.
///
/// # Safety
/// `cloner` must be live; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cvc_cloner_run(
    cloner: *const CvcCloner,
    alpha_re: f64,
    alpha_im: f64,
    squeeze: f64,
    out: *mut *mut CvcState,
) -> CvcStatus {
    guard(|| {
        let c = deref(cloner, "cloner")?;
        let state = c.0.run(&preparation(alpha_re, alpha_im, squeeze)?)?;
        write(out, Box::into_raw(Box::new(CvcState(state))))
    })
}

/// # Safety
/// `state` must come from this library and not have been freed. Null is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn cvc_state_free(state: *mut CvcState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// # Safety
/// `state` must be live; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cvc_state_n_modes(state: *const CvcState, out: *mut usize) -> CvcStatus {
    guard(|| write(out, deref(state, "state")?.0.n_modes()))
}

/// Writes the `2n` quadrature means `(x0, p0, x1, p1, …)`.
///
/// # Safety
/// `state` must be live; `buf` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn cvc_state_mean(state: *const CvcState, buf: *mut f64, len: usize) -> CvcStatus {
    guard(|| fill(buf, len, deref(state, "state")?.0.mean().as_slice()))
}

/// Writes the `2n × 2n` covariance matrix in row-major order.
///
/// # Safety
/// `state` must be live; `buf` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn cvc_state_cov(state: *const CvcState, buf: *mut f64, len: usize) -> CvcStatus {
    guard(|| {
        let cov = &deref(state, "state")?.0.cov();
        let row_major: Vec<f64> = cov.transpose().as_slice().to_vec();
        fill(buf, len, &row_major)
    })
}

/// Fidelity of mode `mode` with the coherent state `|α⟩`.
///
/// # Safety
/// `state` must be live; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cvc_state_fidelity_coherent(
    state: *const CvcState,
    mode: usize,
    alpha_re: f64,
    alpha_im: f64,
    out: *mut f64,
) -> CvcStatus {
    guard(|| {
        let marginal = deref(state, "state")?.0.reduced(&[mode])?;
        write(out, fidelity_vs_coherent(&marginal, alpha_re, alpha_im)?)
    })
}

/// Runs the cloner and collects clone statistics.
///
/// # Safety
/// `cloner` must be live; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cvc_report_new(
    cloner: *const CvcCloner,
    alpha_re: f64,
    alpha_im: f64,
    squeeze: f64,
    out: *mut *mut CvcReport,
) -> CvcStatus {
    guard(|| {
        let c = deref(cloner, "cloner")?;
        let r = report_with(&c.0, &preparation(alpha_re, alpha_im, squeeze)?)?;
        write(out, Box::into_raw(Box::new(CvcReport(r))))
    })
}

/// # Safety
/// `report` must come from this library and not have been freed. Null is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn cvc_report_free(report: *mut CvcReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// # Safety
/// `report` must be live; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cvc_report_num_clones(report: *const CvcReport, out: *mut usize) -> CvcStatus {
    guard(|| write(out, deref(report, "report")?.0.clones.len()))
}

/// Fidelity of clone `index` (position in the clone list, not mode index).
///
/// # Safety
/// `report` must be live; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cvc_report_clone_fidelity(
    report: *const CvcReport,
    index: usize,
    out: *mut f64,
) -> CvcStatus {
    guard(|| {
        let clones = &deref(report, "report")?.0.clones;
        let c = clones.get(index).ok_or_else(|| {
            Failure(
                CvcStatus::IndexOutOfRange,
                format!("clone {index} out of range for {} clones", clones.len()),
            )
        })?;
        write(out, c.fidelity)
    })
}

/// Writes the two means and the four row-major covariance entries of clone
/// `index` into `buf` (6 doubles).
///
/// # Safety
/// `report` must be live; `buf` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn cvc_report_clone_moments(
    report: *const CvcReport,
    index: usize,
    buf: *mut f64,
    len: usize,
) -> CvcStatus {
    guard(|| {
        let clones = &deref(report, "report")?.0.clones;
        let c = clones.get(index).ok_or_else(|| {
            Failure(
                CvcStatus::IndexOutOfRange,
                format!("clone {index} out of range for {} clones", clones.len()),
            )
        })?;
        let s = &c.stats;
        fill(
            buf,
            len,
            &[s.mean[0], s.mean[1], s.cov[0][0], s.cov[0][1], s.cov[1][0], s.cov[1][1]],
        )
    })
}

/// # Safety
/// `report` must be live; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cvc_report_optimal_fidelity(report: *const CvcReport, out: *mut f64) -> CvcStatus {
    guard(|| write(out, deref(report, "report")?.0.optimal_fidelity))
}

/// Whether fidelity, added noise and means all meet the optimal bounds.
///
/// # Safety
/// `report` must be live; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cvc_report_saturated(report: *const CvcReport, out: *mut bool) -> CvcStatus {
    guard(|| write(out, deref(report, "report")?.0.saturated))
}

/// # Safety
/// `report` must be live; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cvc_report_to_json(report: *const CvcReport, out: *mut *mut c_char) -> CvcStatus {
    guard(|| {
        let r = deref(report, "report")?;
        write(out, to_c_string(r.0.to_json()?)?)
    })
}
