//! Special functions and the dimensional constants of the logarithmic Laplacian.

mod bessel;
mod gamma;

use std::f64::consts::{LN_2, PI};

pub use bessel::{bessel_j, bessel_y, hankel1, SERIES_MAX};
pub use gamma::{digamma, gamma_fn, EULER_GAMMA};

pub(crate) use bessel::{bessel_j_raw, normalized_bessel};
pub(crate) use gamma::{digamma_pos, gamma_real};

use crate::error::{domain, Result};

/// Constants appearing in the singular-integral form of log(−Δ) in dimension `d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogConstants {
    pub d: u32,
    /// 2 / ω_{d−1}
    pub gamma_d: f64,
    /// 2 ln 2 + ψ(d/2) − γ_E
    pub rho_d: f64,
    /// Surface area ω_{d−1} of the unit sphere S^{d−1}.
    pub omega: f64,
}

/// Surface area of S^{d−1}: 2π^{d/2}/Γ(d/2).
pub fn sphere_area(d: u32) -> f64 {
    match d {
        1 => 2.0,
        2 => 2.0 * PI,
        3 => 4.0 * PI,
        _ => 2.0 * PI.powf(0.5 * d as f64) / gamma_real(0.5 * d as f64),
    }
}

pub fn log_constants(d: u32) -> Result<LogConstants> {
    if d < 1 {
        return Err(domain("log_constants requires d >= 1"));
    }
    let omega = sphere_area(d);
    Ok(LogConstants {
        d,
        gamma_d: 2.0 / omega,
        rho_d: 2.0 * LN_2 + digamma_pos(0.5 * d as f64) - EULER_GAMMA,
        omega,
    })
}

/// Coefficient Γ((d−α)/2) / (π^{d/2} 2^α Γ(α/2)) of the Riesz potential I_α.
pub fn riesz_constant(d: u32, alpha: f64) -> Result<f64> {
    let df = d as f64;
    if !(alpha > 0.0 && alpha < df) {
        return Err(domain(format!("riesz_constant requires 0 < alpha < {d}, got {alpha}")));
    }
    Ok(riesz_constant_unchecked(df, alpha))
}

pub(crate) fn riesz_constant_unchecked(d: f64, alpha: f64) -> f64 {
    gamma_real(0.5 * (d - alpha)) / (PI.powf(0.5 * d) * 2f64.powf(alpha) * gamma_real(0.5 * alpha))
}
