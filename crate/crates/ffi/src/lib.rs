//! C ABI over `delta_casimir`.
//!
//! Every function returns a [`DcStatus`]; results go through out-pointers.
//! On failure the message is kept per thread and read back with
//! [`dc_last_error_message`]. A model is an opaque [`DcModel`] handle owned
//! by the caller and released with [`dc_model_free`].

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use delta_casimir::boundary_energy::{b_sphere, inner_limit, BoundaryParams, Direction};
use delta_casimir::bulk_energy::{
    delta_e_continued, delta_e_defining, delta_e_renormalized, renormalization_pipeline, residue_at_zero,
    vacuum_energy_sz, PipelineOptions, SZParams,
};
use delta_casimir::heat_kernel::{kernel, ModelParams, RadialGeometry};
use delta_casimir::quadrature::QuadratureSpec;
use delta_casimir::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DcStatus {
    Ok = 0,
    Domain = 1,
    Pole = 2,
    Evaluation = 3,
    NotConverged = 4,
    Extrapolation = 5,
    NullPointer = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DcDirection {
    Out = 0,
    In = 1,
}

/// Opaque model handle: coupling, mass scale, cutoff and quadrature tolerances.
pub struct DcModel {
    params: ModelParams,
    quad: QuadratureSpec,
}

thread_local! {
    static LAST_ERROR: RefCell<Vec<u8>> = const { RefCell::new(Vec::new()) };
}

fn set_error(message: &str) {
    LAST_ERROR.with(|e| {
        let mut buf = e.borrow_mut();
        buf.clear();
        buf.extend(message.bytes().filter(|b| *b != 0));
    });
}

fn status_of(err: &Error) -> DcStatus {
    match err {
        Error::Domain { .. } => DcStatus::Domain,
        Error::Pole { .. } => DcStatus::Pole,
        Error::Evaluation { .. } => DcStatus::Evaluation,
        Error::NotConverged { .. } => DcStatus::NotConverged,
        Error::Extrapolation(_) => DcStatus::Extrapolation,
    }
}

enum Failure {
    Library(Error),
    Null(&'static str),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Library(e)
    }
}

/// Runs `body`, translating errors and panics into a status.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> DcStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            DcStatus::Ok
        }
        Ok(Err(Failure::Library(e))) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Ok(Err(Failure::Null(what))) => {
            set_error(&format!("null pointer passed for `{what}`"));
            DcStatus::NullPointer
        }
        Err(_) => {
            set_error("internal panic");
            DcStatus::Panic
        }
    }
}

unsafe fn model_ref<'a>(model: *const DcModel) -> Result<&'a DcModel, Failure> {
    model.as_ref().ok_or(Failure::Null("model"))
}

unsafe fn write_out<T>(out: *mut T, value: T, name: &'static str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null(name));
    }
    out.write(value);
    Ok(())
}

/// Writes `value` to `out` only when `out` is non-null.
unsafe fn write_optional<T>(out: *mut T, value: T) {
    if !out.is_null() {
        out.write(value);
    }
}

/// Creates a model. `lambda = 0` is the free theory.
#[no_mangle]
pub unsafe extern "C" fn dc_model_new(lambda: f64, kappa: f64, epsilon: f64, out: *mut *mut DcModel) -> DcStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let params = ModelParams::new(lambda, kappa, epsilon)?;
        let handle = Box::new(DcModel {
            params,
            quad: QuadratureSpec::default(),
        });
        out.write(Box::into_raw(handle));
        Ok(())
    })
}

/// Releases a model; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn dc_model_free(model: *mut DcModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Sets the quadrature tolerances used by every later call on this model.
#[no_mangle]
pub unsafe extern "C" fn dc_model_set_tolerances(model: *mut DcModel, rel_tol: f64, abs_tol: f64) -> DcStatus {
    guard(|| {
        let m = model.as_mut().ok_or(Failure::Null("model"))?;
        let quad = m.quad.with_rel_tol(rel_tol).with_abs_tol(abs_tol);
        quad.validate()?;
        m.quad = quad;
        Ok(())
    })
}

/// Heat kernel with both points at distance `r` on the same ray.
#[no_mangle]
pub unsafe extern "C" fn dc_kernel_diagonal(model: *const DcModel, r: f64, t: f64, out_value: *mut f64) -> DcStatus {
    guard(|| {
        let m = model_ref(model)?;
        let v = kernel(&RadialGeometry::diagonal(r)?, t, &m.params)?;
        write_out(out_value, v, "out_value")
    })
}

/// Relative bulk energy, continued representation (`u > -1`, `u != 0`).
#[no_mangle]
pub unsafe extern "C" fn dc_delta_e_continued(
    model: *const DcModel,
    u: f64,
    out_value: *mut f64,
    out_error: *mut f64,
) -> DcStatus {
    guard(|| {
        let m = model_ref(model)?;
        let e = delta_e_continued(u, &m.params, &m.quad)?;
        write_out(out_value, e.value, "out_value")?;
        write_optional(out_error, e.error);
        Ok(())
    })
}

/// Relative bulk energy, defining representation (`u > 1`, `epsilon > 0`).
#[no_mangle]
pub unsafe extern "C" fn dc_delta_e_defining(
    model: *const DcModel,
    u: f64,
    out_value: *mut f64,
    out_error: *mut f64,
) -> DcStatus {
    guard(|| {
        let m = model_ref(model)?;
        let e = delta_e_defining(u, &m.params, &m.quad)?;
        write_out(out_value, e.value, "out_value")?;
        write_optional(out_error, e.error);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn dc_residue_at_zero(model: *const DcModel, out_value: *mut f64) -> DcStatus {
    guard(|| {
        let m = model_ref(model)?;
        write_out(out_value, residue_at_zero(&m.params)?, "out_value")
    })
}

/// Renormalized bulk energy: closed form, and optionally the quadrature value.
#[no_mangle]
pub unsafe extern "C" fn dc_delta_e_renormalized(
    model: *const DcModel,
    out_closed_form: *mut f64,
    out_numeric: *mut f64,
) -> DcStatus {
    guard(|| {
        let m = model_ref(model)?;
        let r = delta_e_renormalized(&m.params, &m.quad)?;
        write_out(out_closed_form, r.closed_form, "out_closed_form")?;
        write_optional(out_numeric, r.numeric);
        Ok(())
    })
}

/// Regular part at `u = 0` for each cutoff, extrapolated to zero cutoff.
/// `out_converged` (optional) receives 1 or 0.
#[no_mangle]
pub unsafe extern "C" fn dc_renormalization_pipeline(
    model: *const DcModel,
    cutoffs: *const f64,
    n_cutoffs: usize,
    out_value: *mut f64,
    out_converged: *mut i32,
) -> DcStatus {
    guard(|| {
        let m = model_ref(model)?;
        if cutoffs.is_null() && n_cutoffs > 0 {
            return Err(Failure::Null("cutoffs"));
        }
        let seq: &[f64] = if n_cutoffs == 0 {
            &[]
        } else {
            std::slice::from_raw_parts(cutoffs, n_cutoffs)
        };
        let r = renormalization_pipeline(&m.params, seq, &PipelineOptions::default())?;
        write_out(out_value, r.extrapolated, "out_value")?;
        write_optional(out_converged, r.converged as i32);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn dc_vacuum_energy_sz(alpha: f64, ell: f64, out_value: *mut f64) -> DcStatus {
    guard(|| write_out(out_value, vacuum_energy_sz(&SZParams { alpha, ell })?, "out_value"))
}

/// Sphere functional at radius `r` (`u > 0`, `epsilon > 0`); `direction`
/// is a `DcDirection` value.
#[no_mangle]
pub unsafe extern "C" fn dc_b_sphere(
    model: *const DcModel,
    u: f64,
    r: f64,
    direction: i32,
    out_value: *mut f64,
    out_error: *mut f64,
) -> DcStatus {
    guard(|| {
        let m = model_ref(model)?;
        let bp = BoundaryParams::new(0.0, m.params, u)?;
        let dir = match direction {
            d if d == DcDirection::Out as i32 => Direction::Out,
            d if d == DcDirection::In as i32 => Direction::In,
            other => {
                return Err(Failure::Library(Error::Domain {
                    function: "dc_b_sphere",
                    reason: format!("unknown direction {other}"),
                }));
            }
        };
        let e = b_sphere(r, dir, &bp, &m.quad)?;
        write_out(out_value, e.value, "out_value")?;
        write_optional(out_error, e.error);
        Ok(())
    })
}

/// `lim_{r -> 0} r B_in(r)`.
#[no_mangle]
pub unsafe extern "C" fn dc_inner_limit(model: *const DcModel, u: f64, out_value: *mut f64) -> DcStatus {
    guard(|| {
        let m = model_ref(model)?;
        let e = inner_limit(&BoundaryParams::new(0.0, m.params, u)?, &m.quad)?;
        write_out(out_value, e.value, "out_value")
    })
}

/// Copies the calling thread's last error message into `buf` (NUL
/// terminated, truncated to `len - 1` bytes). Returns the full message
/// length without the terminator; pass `buf = NULL` to query it.
#[no_mangle]
pub unsafe extern "C" fn dc_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, n);
            buf.add(n).write(0);
        }
        msg.len()
    })
}

/// Static name of a `DcStatus` value.
#[no_mangle]
pub extern "C" fn dc_status_name(status: i32) -> *const c_char {
    let name: &'static CStr = match status {
        0 => c"ok",
        1 => c"domain error",
        2 => c"pole",
        3 => c"non-finite integrand",
        4 => c"quadrature not converged",
        5 => c"extrapolation failed",
        6 => c"null pointer",
        7 => c"internal panic",
        _ => c"unknown status",
    };
    name.as_ptr()
}

/// Library version, NUL terminated.
#[no_mangle]
pub extern "C" fn dc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
