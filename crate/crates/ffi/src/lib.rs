//! C ABI over the `odat` crate.
//!
//! A transform plan lives behind the opaque `OdatPlan` handle. Every call
//! returns an `OdatStatus`; on failure the message is retrievable with
//! `odat_last_error_message` on the same thread. Spectra cross the boundary
//! as split real and imaginary buffers of the plan's frame length.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use odat::propagator::{ExponentSign, PropagatorConfig};
use odat::transform::{self, Domain, Frame, Spectrum, TransformPlan};
use odat::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OdatStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Dimension = 3,
    Numerical = 4,
    SymmetryViolation = 5,
    Io = 6,
    Panic = 7,
}

/// Which transform a denoising call thresholds in, passed as `uint32_t`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OdatBranch {
    Dft = 0,
    Odat = 1,
}

/// Opaque transform plan.
pub struct OdatPlan {
    inner: TransformPlan,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let text = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

fn status_of(err: &Error) -> OdatStatus {
    match err {
        Error::Dimension { .. } => OdatStatus::Dimension,
        Error::SymmetryViolation { .. } => OdatStatus::SymmetryViolation,
        Error::NoConvergence { .. } | Error::Numerical(_) => OdatStatus::Numerical,
        Error::Io { .. }
        | Error::UnsupportedWav { .. }
        | Error::MalformedWav { .. }
        | Error::ShortFile { .. }
        | Error::BadCsvValue { .. } => OdatStatus::Io,
        Error::Domain(_) | Error::Config(_) => OdatStatus::InvalidArgument,
    }
}

fn guard(f: impl FnOnce() -> Result<(), OdatStatus>) -> OdatStatus {
    set_last_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => OdatStatus::Ok,
        Ok(Err(status)) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_last_error(&format!("internal panic: {msg}"));
            OdatStatus::Panic
        }
    }
}

fn fail(status: OdatStatus, msg: &str) -> OdatStatus {
    set_last_error(msg);
    status
}

trait OrStatus<T> {
    fn or_status(self) -> Result<T, OdatStatus>;
}

impl<T> OrStatus<T> for odat::Result<T> {
    fn or_status(self) -> Result<T, OdatStatus> {
        self.map_err(|e| fail(status_of(&e), &e.to_string()))
    }
}

unsafe fn plan_ref<'a>(plan: *const OdatPlan) -> Result<&'a TransformPlan, OdatStatus> {
    plan.as_ref()
        .map(|p| &p.inner)
        .ok_or_else(|| fail(OdatStatus::NullPointer, "plan is null"))
}

unsafe fn input<'a>(data: *const f64, len: usize, name: &str) -> Result<&'a [f64], OdatStatus> {
    if data.is_null() {
        return Err(fail(OdatStatus::NullPointer, &format!("{name} is null")));
    }
    Ok(std::slice::from_raw_parts(data, len))
}

unsafe fn output<'a>(data: *mut f64, len: usize, name: &str) -> Result<&'a mut [f64], OdatStatus> {
    if data.is_null() {
        return Err(fail(OdatStatus::NullPointer, &format!("{name} is null")));
    }
    Ok(std::slice::from_raw_parts_mut(data, len))
}

fn check_len(len: usize, plan: &TransformPlan) -> Result<(), OdatStatus> {
    if len != plan.frame_len() {
        return Err(fail(
            OdatStatus::Dimension,
            &format!(
                "buffer length {len} does not match frame length {}",
                plan.frame_len()
            ),
        ));
    }
    Ok(())
}

fn write_spectrum(spec: &Spectrum, re: &mut [f64], im: &mut [f64]) {
    for ((b, r), i) in spec.bins.iter().zip(re.iter_mut()).zip(im.iter_mut()) {
        *r = b.re;
        *i = b.im;
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn odat_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or an empty string.
///
/// The pointer stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn odat_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Build a plan for frames of length `n` sampled at `fs` Hz.
///
/// `negative_exponent` nonzero selects exp(-iH) instead of exp(+iH).
/// On success `*out` receives a handle to release with `odat_plan_free`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn odat_plan_new(
    n: usize,
    fs: f64,
    sigma1: f64,
    sigma2: f64,
    negative_exponent: i32,
    out: *mut *mut OdatPlan,
) -> OdatStatus {
    guard(|| {
        if out.is_null() {
            return Err(fail(OdatStatus::NullPointer, "out is null"));
        }
        *out = ptr::null_mut();
        let cfg = PropagatorConfig::new(sigma1, sigma2).or_status()?;
        let sign = if negative_exponent != 0 {
            ExponentSign::Negative
        } else {
            ExponentSign::Positive
        };
        let inner = TransformPlan::with_sign(n, fs, cfg, sign).or_status()?;
        *out = Box::into_raw(Box::new(OdatPlan { inner }));
        Ok(())
    })
}

/// Release a plan. Null is accepted and ignored.
///
/// # Safety
/// `plan` must be null or a handle from `odat_plan_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn odat_plan_free(plan: *mut OdatPlan) {
    if !plan.is_null() {
        drop(Box::from_raw(plan));
    }
}

/// Frame length of a plan, or 0 for a null handle.
///
/// # Safety
/// `plan` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn odat_plan_len(plan: *const OdatPlan) -> usize {
    plan.as_ref().map_or(0, |p| p.inner.frame_len())
}

/// Forward ODAT of a real frame into split complex output.
///
/// # Safety
/// `frame`, `re` and `im` must each point to `len` valid doubles.
#[no_mangle]
pub unsafe extern "C" fn odat_forward(
    plan: *const OdatPlan,
    frame: *const f64,
    len: usize,
    re: *mut f64,
    im: *mut f64,
) -> OdatStatus {
    guard(|| {
        let plan = plan_ref(plan)?;
        check_len(len, plan)?;
        let frame = Frame::new(input(frame, len, "frame")?.to_vec()).or_status()?;
        let spec = transform::forward(&frame, plan).or_status()?;
        write_spectrum(&spec, output(re, len, "re")?, output(im, len, "im")?);
        Ok(())
    })
}

/// Unnormalized DFT of a real frame into split complex output.
///
/// # Safety
/// `frame`, `re` and `im` must each point to `len` valid doubles.
#[no_mangle]
pub unsafe extern "C" fn odat_dft(
    plan: *const OdatPlan,
    frame: *const f64,
    len: usize,
    re: *mut f64,
    im: *mut f64,
) -> OdatStatus {
    guard(|| {
        let plan = plan_ref(plan)?;
        check_len(len, plan)?;
        let frame = Frame::new(input(frame, len, "frame")?.to_vec()).or_status()?;
        let spec = transform::dft(&frame).or_status()?;
        write_spectrum(&spec, output(re, len, "re")?, output(im, len, "im")?);
        Ok(())
    })
}

/// Inverse ODAT of a split complex spectrum back to a real frame.
///
/// Fails with `ODAT_STATUS_SYMMETRY_VIOLATION` when the spectrum is not
/// the image of a real frame.
///
/// # Safety
/// `re`, `im` and `frame` must each point to `len` valid doubles.
#[no_mangle]
pub unsafe extern "C" fn odat_inverse(
    plan: *const OdatPlan,
    re: *const f64,
    im: *const f64,
    len: usize,
    frame: *mut f64,
) -> OdatStatus {
    guard(|| {
        let plan = plan_ref(plan)?;
        check_len(len, plan)?;
        let re = input(re, len, "re")?;
        let im = input(im, len, "im")?;
        let bins = re
            .iter()
            .zip(im)
            .map(|(&r, &i)| Complex64::new(r, i))
            .collect();
        let back = transform::inverse(&Spectrum::new(bins, Domain::Odat), plan).or_status()?;
        output(frame, len, "frame")?.copy_from_slice(back.samples());
        Ok(())
    })
}

/// Denoise a noisy frame by hard thresholding at the mean DFT magnitude.
///
/// `branch` takes an `OdatBranch` value.
///
/// # Safety
/// `noisy` and `out` must each point to `len` valid doubles.
#[no_mangle]
pub unsafe extern "C" fn odat_denoise(
    plan: *const OdatPlan,
    noisy: *const f64,
    len: usize,
    branch: u32,
    out: *mut f64,
) -> OdatStatus {
    guard(|| {
        let plan = plan_ref(plan)?;
        check_len(len, plan)?;
        let noisy = Frame::new(input(noisy, len, "noisy")?.to_vec()).or_status()?;
        let domain = match branch {
            b if b == OdatBranch::Dft as u32 => Domain::Dft,
            b if b == OdatBranch::Odat as u32 => Domain::Odat,
            other => {
                return Err(fail(
                    OdatStatus::InvalidArgument,
                    &format!("unknown branch {other}"),
                ))
            }
        };
        let clean = odat::denoise::denoise(&noisy, plan, domain).or_status()?;
        output(out, len, "out")?.copy_from_slice(clean.samples());
        Ok(())
    })
}
