//! C interface to `mepkit`.
//!
//! Every fallible call returns a [`MepStatus`]; on failure the message is kept
//! per thread and read back with [`mepkit_last_error_message`]. Closures solved
//! from moments live behind the opaque [`MepClosure`] handle, which the caller
//! releases with [`mepkit_closure_free`]. Array arguments carry their length so
//! short buffers are reported instead of overrun.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

use mepkit::basis::{adapt_quadrature, GasModel, MomentVector};
use mepkit::cli::{default_order, BasisSpec};
use mepkit::closures::{gaussian_closure_10, GaussianParams};
use mepkit::hyperbolic::speed_bound;
use mepkit::mep::{close_flux, solve_multipliers_report, ClosureOutput, SolverOptions};
use mepkit::relativistic::{closure_coefficients, RelGas};
use mepkit::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MepStatus {
    Ok = 0,
    NullPointer = 1,
    BufferTooSmall = 2,
    InvalidUtf8 = 3,
    Panic = 4,
    InvalidInput = 10,
    NonFiniteIntegrand = 11,
    DegenerateState = 12,
    DomainError = 13,
    AdmissibilityViolation = 14,
    NotRealizable = 15,
    MaxIterations = 16,
    NotPositiveDefinite = 17,
    SingularLinearSystem = 18,
    OutOfBounds = 19,
    NotHyperbolic = 20,
    RegimeMismatch = 21,
    SeriesDivergence = 22,
    OffMassShell = 23,
    SingularDenominator = 24,
    StateConstraintViolation = 25,
    RealizabilityLoss = 26,
    Io = 27,
}

impl From<&Error> for MepStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidInput(_) => MepStatus::InvalidInput,
            Error::NonFiniteIntegrand { .. } => MepStatus::NonFiniteIntegrand,
            Error::DegenerateState(_) => MepStatus::DegenerateState,
            Error::DomainError { .. } => MepStatus::DomainError,
            Error::AdmissibilityViolation(_) => MepStatus::AdmissibilityViolation,
            Error::NotRealizable { .. } => MepStatus::NotRealizable,
            Error::MaxIterations { .. } => MepStatus::MaxIterations,
            Error::NotPositiveDefinite(_) => MepStatus::NotPositiveDefinite,
            Error::SingularLinearSystem(_) => MepStatus::SingularLinearSystem,
            Error::OutOfBounds(_) => MepStatus::OutOfBounds,
            Error::NotHyperbolic(_) => MepStatus::NotHyperbolic,
            Error::RegimeMismatch { .. } => MepStatus::RegimeMismatch,
            Error::SeriesDivergence(_) => MepStatus::SeriesDivergence,
            Error::OffMassShell { .. } => MepStatus::OffMassShell,
            Error::SingularDenominator { .. } => MepStatus::SingularDenominator,
            Error::StateConstraintViolation(_) => MepStatus::StateConstraintViolation,
            Error::RealizabilityLoss { .. } => MepStatus::RealizabilityLoss,
            Error::Io(_) => MepStatus::Io,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

struct Fail(MepStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail((&e).into(), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(MepStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, records any failure and turns panics into [`MepStatus::Panic`].
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> MepStatus {
    set_error(String::new());
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MepStatus::Ok,
        Ok(Err(Fail(code, msg))) => {
            set_error(msg);
            code
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            MepStatus::Panic
        }
    }
}

unsafe fn read<'a>(ptr: *const f64, len: usize, what: &str) -> Result<&'a [f64], Fail> {
    if ptr.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(ptr, len))
}

unsafe fn write(src: &[f64], dst: *mut f64, len: usize) -> Result<(), Fail> {
    if dst.is_null() {
        return Err(null("output buffer"));
    }
    if len < src.len() {
        return Err(Fail(
            MepStatus::BufferTooSmall,
            format!("output buffer holds {len} values, {} needed", src.len()),
        ));
    }
    std::ptr::copy_nonoverlapping(src.as_ptr(), dst, src.len());
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn mepkit_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Bytes in the last error message of this thread, without the terminator.
#[no_mangle]
pub extern "C" fn mepkit_last_error_length() -> usize {
    LAST_ERROR.with(|e| e.borrow().len())
}

/// Copies the last error message into `buf` (NUL-terminated, truncated to
/// `len - 1` bytes). Returns the number of bytes written before the NUL.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn mepkit_last_error_message(buf: *mut c_char, len: usize) -> usize {
    if buf.is_null() || len == 0 {
        return 0;
    }
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let n = msg.len().min(len - 1);
        std::ptr::copy_nonoverlapping(msg.as_ptr(), buf.cast::<u8>(), n);
        *buf.add(n) = 0;
        n
    })
}

/// Upper bound of the characteristic speeds of the full order-`n` system,
/// in units of `sqrt(kB T / m)`.
#[no_mangle]
pub extern "C" fn mepkit_speed_bound(n: u32) -> f64 {
    speed_bound(n)
}

/// Third moments `rho <xi_i xi_j xi_k>` of the ten-moment Gaussian closure.
///
/// `v` holds 3 values, `p` the 9 entries of the pressure tensor in row-major
/// order and `out` receives 27 values indexed `9 i + 3 j + k`.
///
/// # Safety
/// Pointers must be valid for the stated number of values.
#[no_mangle]
pub unsafe extern "C" fn mepkit_gaussian_flux_10(
    rho: f64,
    v: *const f64,
    p: *const f64,
    out: *mut f64,
    out_len: usize,
) -> MepStatus {
    guard(|| {
        let v = read(v, 3, "v")?;
        let p = read(p, 9, "p")?;
        let params = GaussianParams {
            rho,
            v: [v[0], v[1], v[2]],
            p: std::array::from_fn(|i| std::array::from_fn(|j| p[3 * i + j])),
        };
        let (_, flux) = gaussian_closure_10(params, &GasModel::default())?;
        let flat: Vec<f64> = flux.iter().flatten().flatten().copied().collect();
        write(&flat, out, out_len)
    })
}

/// Relativistic fourteen-moment closure coefficients.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MepRelCoefficients {
    pub c01: f64,
    pub cpi1: f64,
    pub c03: f64,
    pub c05: f64,
}

/// Closure coefficients at `(alpha, gamma)` for a Boltzmann gas with
/// `m = c = kB = Y = 1`.
///
/// # Safety
/// `out` must be null or point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn mepkit_rel_closure_coefficients(
    alpha: f64,
    gamma: f64,
    out: *mut MepRelCoefficients,
) -> MepStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let c = closure_coefficients(alpha, gamma, &RelGas::default())?;
        *out = MepRelCoefficients { c01: c.c01, cpi1: c.cpi1, c03: c.c03, c05: c.c05 };
        Ok(())
    })
}

/// A maximum-entropy closure solved from a moment vector.
pub struct MepClosure {
    multipliers: Vec<f64>,
    output: ClosureOutput,
    iterations: usize,
    residual: f64,
}

/// Solves the dual problem for `values` on the basis named by `basis`
/// (`"full:4"`, `"line:4"`, `"grad13"`, `"euler"`, `"six_moment"`,
/// `"full_internal:2"`) with a classical unit gas. `quadrature_order = 0`
/// selects the default grid. On success `*out` owns a new handle.
///
/// # Safety
/// `basis` must be a NUL-terminated string, `values` valid for `len` values
/// and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mepkit_closure_solve(
    basis: *const c_char,
    values: *const f64,
    len: usize,
    quadrature_order: usize,
    out: *mut *mut MepClosure,
) -> MepStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = std::ptr::null_mut();
        if basis.is_null() {
            return Err(null("basis"));
        }
        let name = CStr::from_ptr(basis)
            .to_str()
            .map_err(|_| Fail(MepStatus::InvalidUtf8, "basis name is not UTF-8".into()))?;
        let basis = BasisSpec::Named(name.to_string()).resolve()?;
        let values = read(values, len, "values")?;
        let gas = GasModel::default();
        let order = if quadrature_order == 0 { default_order(&basis) } else { quadrature_order };
        let target = MomentVector::new(basis, values.to_vec())?;
        let quad = adapt_quadrature(&target, order, &gas)?;
        let rep = solve_multipliers_report(&target, &gas, &quad, &SolverOptions::default())?;
        let output = close_flux(&rep.multipliers, &gas, &quad)?;
        *out = Box::into_raw(Box::new(MepClosure {
            multipliers: rep.multipliers.values,
            output,
            iterations: rep.iterations,
            residual: rep.residual,
        }));
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `h` must come from [`mepkit_closure_solve`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mepkit_closure_free(h: *mut MepClosure) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Number of basis elements, or 0 for a null handle.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mepkit_closure_len(h: *const MepClosure) -> usize {
    h.as_ref().map_or(0, |c| c.multipliers.len())
}

/// Newton iterations used by the solve, or 0 for a null handle.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mepkit_closure_iterations(h: *const MepClosure) -> usize {
    h.as_ref().map_or(0, |c| c.iterations)
}

/// Final scaled residual of the solve, NaN for a null handle.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mepkit_closure_residual(h: *const MepClosure) -> f64 {
    h.as_ref().map_or(f64::NAN, |c| c.residual)
}

/// Entropy density of the closed distribution, NaN for a null handle.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mepkit_closure_entropy(h: *const MepClosure) -> f64 {
    h.as_ref().map_or(f64::NAN, |c| c.output.entropy)
}

/// Copies the Lagrange multipliers into `out`.
///
/// # Safety
/// `h` must be a live handle and `out` valid for `len` values.
#[no_mangle]
pub unsafe extern "C" fn mepkit_closure_multipliers(h: *const MepClosure, out: *mut f64, len: usize) -> MepStatus {
    guard(|| {
        let c = h.as_ref().ok_or_else(|| null("handle"))?;
        write(&c.multipliers, out, len)
    })
}

/// Copies the moments reproduced by the closure into `out`.
///
/// # Safety
/// `h` must be a live handle and `out` valid for `len` values.
#[no_mangle]
pub unsafe extern "C" fn mepkit_closure_moments(h: *const MepClosure, out: *mut f64, len: usize) -> MepStatus {
    guard(|| {
        let c = h.as_ref().ok_or_else(|| null("handle"))?;
        write(&c.output.moments, out, len)
    })
}

/// Copies the fluxes along velocity component `direction` into `out`.
///
/// # Safety
/// `h` must be a live handle and `out` valid for `len` values.
#[no_mangle]
pub unsafe extern "C" fn mepkit_closure_flux(
    h: *const MepClosure,
    direction: u32,
    out: *mut f64,
    len: usize,
) -> MepStatus {
    guard(|| {
        let c = h.as_ref().ok_or_else(|| null("handle"))?;
        let flux = c.output.fluxes.get(direction as usize).ok_or_else(|| {
            Fail(
                MepStatus::InvalidInput,
                format!("direction {direction} outside 0..{}", c.output.fluxes.len()),
            )
        })?;
        write(flux, out, len)
    })
}
