//! C interface to `loglap`.
//!
//! Every fallible function returns a [`LoglapStatus`] and writes its result
//! through out-pointers, which are left untouched on failure. Panics are
//! caught at the boundary and reported as [`LoglapStatus::Panic`].

use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use loglap::distverify::{builtin_witnesses, division_residual};
use loglap::fundsol::{fundamental_solution, helmholtz_phi, FundSolTable};
use loglap::logop::{apply_integral_form, apply_spectral_radial, RadialProfile, SCHWARTZ_CUTOFF};
use loglap::quadrature::heat_time_integral;
use loglap::specfun::{bessel_j, hankel1, log_constants};
use loglap::{Error, QuadratureSpec};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoglapStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    UnsupportedOrder = 3,
    Singularity = 4,
    Divergence = 5,
    InvalidInput = 6,
    InsufficientData = 7,
    Parse = 8,
    IndexOutOfRange = 9,
    /// The value was computed but some integral missed its tolerance.
    NotConverged = 10,
    Panic = 11,
}

impl From<&Error> for LoglapStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Domain(_) => LoglapStatus::Domain,
            Error::UnsupportedOrder(_) => LoglapStatus::UnsupportedOrder,
            Error::Singularity(_) => LoglapStatus::Singularity,
            Error::Divergence(_) => LoglapStatus::Divergence,
            Error::Input(_) => LoglapStatus::InvalidInput,
            Error::InsufficientData { .. } => LoglapStatus::InsufficientData,
            Error::Parse { .. } => LoglapStatus::Parse,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoglapQuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
    pub osc_blocks: u32,
    pub accel: bool,
}

impl From<QuadratureSpec> for LoglapQuadratureSpec {
    fn from(s: QuadratureSpec) -> Self {
        LoglapQuadratureSpec {
            abs_tol: s.abs_tol,
            rel_tol: s.rel_tol,
            max_depth: s.max_depth,
            osc_blocks: s.osc_blocks,
            accel: s.accel,
        }
    }
}

impl From<LoglapQuadratureSpec> for QuadratureSpec {
    fn from(s: LoglapQuadratureSpec) -> Self {
        QuadratureSpec {
            abs_tol: s.abs_tol,
            rel_tol: s.rel_tol,
            max_depth: s.max_depth,
            osc_blocks: s.osc_blocks,
            accel: s.accel,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LoglapComplex {
    pub re: f64,
    pub im: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LoglapLogConstants {
    pub gamma_d: f64,
    pub rho_d: f64,
    pub omega: f64,
}

/// One row of a fundamental-solution table.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LoglapFundSolRow {
    pub r: f64,
    pub phi: LoglapComplex,
    pub e1_rem: f64,
    pub e2_rem: f64,
    pub total: LoglapComplex,
    pub err_estimate: f64,
    pub converged: bool,
}

/// Opaque handle owning a computed table.
pub struct LoglapFundSolTable(FundSolTable);

fn guard(body: impl FnOnce() -> LoglapStatus) -> LoglapStatus {
    catch_unwind(AssertUnwindSafe(body)).unwrap_or(LoglapStatus::Panic)
}

fn resolve_spec(spec: *const LoglapQuadratureSpec) -> Result<QuadratureSpec, LoglapStatus> {
    let s = if spec.is_null() {
        QuadratureSpec::default()
    } else {
        // SAFETY: non-null pointers are required to reference a valid spec.
        QuadratureSpec::from(unsafe { *spec })
    };
    s.validate().map_err(|e| LoglapStatus::from(&e))?;
    Ok(s)
}

macro_rules! out {
    ($ptr:expr) => {
        if $ptr.is_null() {
            return LoglapStatus::NullPointer;
        }
    };
}

/// Static, NUL-terminated description of a status code.
#[no_mangle]
pub extern "C" fn loglap_status_message(status: LoglapStatus) -> *const c_char {
    let msg: &'static [u8] = match status {
        LoglapStatus::Ok => b"ok\0",
        LoglapStatus::NullPointer => b"null pointer argument\0",
        LoglapStatus::Domain => b"argument outside the function's domain\0",
        LoglapStatus::UnsupportedOrder => b"unsupported Bessel order\0",
        LoglapStatus::Singularity => b"evaluation at a singular point\0",
        LoglapStatus::Divergence => b"divergent integral\0",
        LoglapStatus::InvalidInput => b"invalid input\0",
        LoglapStatus::InsufficientData => b"insufficient data\0",
        LoglapStatus::Parse => b"parse error\0",
        LoglapStatus::IndexOutOfRange => b"index out of range\0",
        LoglapStatus::NotConverged => b"integral did not reach its tolerance\0",
        LoglapStatus::Panic => b"internal panic\0",
    };
    msg.as_ptr().cast()
}

#[no_mangle]
pub extern "C" fn loglap_default_spec() -> LoglapQuadratureSpec {
    QuadratureSpec::default().into()
}

/// # Safety
/// `out` must be null or point to writable memory for one value.
#[no_mangle]
pub unsafe extern "C" fn loglap_log_constants(d: u32, out: *mut LoglapLogConstants) -> LoglapStatus {
    out!(out);
    guard(|| match log_constants(d) {
        Ok(c) => {
            *out = LoglapLogConstants {
                gamma_d: c.gamma_d,
                rho_d: c.rho_d,
                omega: c.omega,
            };
            LoglapStatus::Ok
        }
        Err(e) => LoglapStatus::from(&e),
    })
}

/// # Safety
/// `out` must be null or point to writable memory for one value.
#[no_mangle]
pub unsafe extern "C" fn loglap_bessel_j(nu: f64, z: f64, out: *mut f64) -> LoglapStatus {
    out!(out);
    guard(|| match bessel_j(nu, z) {
        Ok(v) => {
            *out = v;
            LoglapStatus::Ok
        }
        Err(e) => LoglapStatus::from(&e),
    })
}

/// # Safety
/// `out` must be null or point to writable memory for one value.
#[no_mangle]
pub unsafe extern "C" fn loglap_hankel1(nu: f64, z: f64, out: *mut LoglapComplex) -> LoglapStatus {
    out!(out);
    guard(|| match hankel1(nu, z) {
        Ok(v) => {
            *out = LoglapComplex { re: v.re, im: v.im };
            LoglapStatus::Ok
        }
        Err(e) => LoglapStatus::from(&e),
    })
}

/// Outgoing Helmholtz fundamental solution Φ_d(r).
///
/// # Safety
/// `out` must be null or point to writable memory for one value.
#[no_mangle]
pub unsafe extern "C" fn loglap_helmholtz_phi(d: u32, r: f64, out: *mut LoglapComplex) -> LoglapStatus {
    out!(out);
    guard(|| match helmholtz_phi(d, r) {
        Ok(v) => {
            *out = LoglapComplex { re: v.re, im: v.im };
            LoglapStatus::Ok
        }
        Err(e) => LoglapStatus::from(&e),
    })
}

/// ∫₀^∞ heat kernel dt at distance r, for d ≥ 3.
///
/// # Safety
/// `out` must be null or point to writable memory for one value.
#[no_mangle]
pub unsafe extern "C" fn loglap_heat_time_integral(d: u32, r: f64, out: *mut f64) -> LoglapStatus {
    out!(out);
    guard(|| match heat_time_integral(d, r) {
        Ok(v) => {
            *out = v;
            LoglapStatus::Ok
        }
        Err(e) => LoglapStatus::from(&e),
    })
}

/// log(−Δ) of the Gaussian e^{−|x|²/2} at norm `r`, by the singular-integral
/// and the spectral route. A null `spec` selects the defaults.
///
/// # Safety
/// `spec` must be null or valid; the out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn loglap_apply_gaussian(
    d: u32,
    r: f64,
    spec: *const LoglapQuadratureSpec,
    out_integral: *mut f64,
    out_spectral: *mut f64,
) -> LoglapStatus {
    out!(out_integral);
    out!(out_spectral);
    guard(|| {
        let spec = match resolve_spec(spec) {
            Ok(s) => s,
            Err(status) => return status,
        };
        let integral = match apply_integral_form(&RadialProfile::gaussian(), r, d, SCHWARTZ_CUTOFF, &spec) {
            Ok(v) => v,
            Err(e) => return LoglapStatus::from(&e),
        };
        let spectral = match apply_spectral_radial(&RadialProfile::gaussian_fourier(d), r, d, &spec) {
            Ok(v) => v,
            Err(e) => return LoglapStatus::from(&e),
        };
        *out_integral = integral.value;
        *out_spectral = spectral.value;
        if integral.converged && spectral.converged {
            LoglapStatus::Ok
        } else {
            LoglapStatus::NotConverged
        }
    })
}

/// Number of built-in witnesses accepted by [`loglap_division_residual`].
#[no_mangle]
pub extern "C" fn loglap_witness_count() -> usize {
    builtin_witnesses().len()
}

/// |⟨E_log, log|·|²ψ⟩ − ∫ψ| for the built-in witness with the given index.
///
/// # Safety
/// `spec` must be null or valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn loglap_division_residual(
    witness: usize,
    d: u32,
    spec: *const LoglapQuadratureSpec,
    out: *mut f64,
) -> LoglapStatus {
    out!(out);
    guard(|| {
        let spec = match resolve_spec(spec) {
            Ok(s) => s,
            Err(status) => return status,
        };
        let witnesses = builtin_witnesses();
        let Some(w) = witnesses.get(witness) else {
            return LoglapStatus::IndexOutOfRange;
        };
        match division_residual(w, d, &spec) {
            Ok(r) => {
                *out = r.value;
                if r.converged {
                    LoglapStatus::Ok
                } else {
                    LoglapStatus::NotConverged
                }
            }
            Err(e) => LoglapStatus::from(&e),
        }
    })
}

/// Tabulate the fundamental solution at `n` radii. On success `*out` owns a
/// table that must be released with [`loglap_fundsol_free`].
///
/// # Safety
/// `radii` must point to `n` readable values; `spec` must be null or valid;
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn loglap_fundsol_new(
    d: u32,
    radii: *const f64,
    n: usize,
    spec: *const LoglapQuadratureSpec,
    out: *mut *mut LoglapFundSolTable,
) -> LoglapStatus {
    out!(out);
    if radii.is_null() && n > 0 {
        return LoglapStatus::NullPointer;
    }
    guard(|| {
        let spec = match resolve_spec(spec) {
            Ok(s) => s,
            Err(status) => return status,
        };
        let radii = if n == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(radii, n)
        };
        match fundamental_solution(d, radii, &spec) {
            Ok(table) => {
                *out = Box::into_raw(Box::new(LoglapFundSolTable(table)));
                LoglapStatus::Ok
            }
            Err(e) => LoglapStatus::from(&e),
        }
    })
}

/// Number of rows; 0 for a null handle.
///
/// # Safety
/// `table` must be null or a live handle from [`loglap_fundsol_new`].
#[no_mangle]
pub unsafe extern "C" fn loglap_fundsol_len(table: *const LoglapFundSolTable) -> usize {
    table.as_ref().map_or(0, |t| t.0.len())
}

/// Row `i`. Rows whose evaluation failed report that failure's status.
///
/// # Safety
/// `table` must be null or a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn loglap_fundsol_get(
    table: *const LoglapFundSolTable,
    i: usize,
    out: *mut LoglapFundSolRow,
) -> LoglapStatus {
    out!(out);
    let Some(t) = table.as_ref() else {
        return LoglapStatus::NullPointer;
    };
    let t = &t.0;
    if i >= t.len() {
        return LoglapStatus::IndexOutOfRange;
    }
    if let Some(e) = &t.errors[i] {
        return LoglapStatus::from(e);
    }
    *out = LoglapFundSolRow {
        r: t.radii[i],
        phi: LoglapComplex {
            re: t.phi[i].re,
            im: t.phi[i].im,
        },
        e1_rem: t.e1_rem[i],
        e2_rem: t.e2_rem[i],
        total: LoglapComplex {
            re: t.total[i].re,
            im: t.total[i].im,
        },
        err_estimate: t.err_estimate[i],
        converged: t.converged[i],
    };
    LoglapStatus::Ok
}

/// Release a table. Null is accepted and ignored.
///
/// # Safety
/// `table` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn loglap_fundsol_free(table: *mut LoglapFundSolTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}
