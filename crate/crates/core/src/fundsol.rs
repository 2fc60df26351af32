//! Fundamental solutions of the logarithmic Laplacian for d ∈ {1, 2, 3}.
//!
//! The Fourier-side target is 1/log(s²). It is split as
//!
//!   1/log(s²) = 1/(s² − 1) + h(s)·1_{s<2} + [1/log(s²) − 1/(s² − 1)]·1_{s>2},
//!
//! with h the [`remainder_symbol`]. The first piece inverts to the outgoing
//! Helmholtz solution Φ, the second to [`e1_rem`], and the last to
//! [`e2_log`] − [`e2_helm`]. Together E = Φ + E¹_rem + E²_rem, determined up
//! to a single-layer distribution on the unit sphere.
//!
//! The large-frequency integrals are only oscillatory-convergent. E²_log is
//! rewritten by integration by parts until its integrand is absolutely
//! integrable; the boundary terms at the upper limit N oscillate without
//! decaying and are dropped, as they vanish in the tempered limit N → ∞.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::logop::SphericalMeanKernel;
use crate::quadrature::{integrate_adaptive, integrate_breakpoints, integrate_osc_bessel, IntegralResult, QuadratureSpec};
use crate::specfun::{bessel_j_raw, gamma_real, hankel1, riesz_constant_unchecked, sphere_area};

fn check_dim(d: u32) -> Result<()> {
    if (1..=3).contains(&d) {
        Ok(())
    } else {
        Err(Error::Domain(format!("dimension must be 1, 2 or 3, got {d}")))
    }
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("radius must be finite and > 0, got {r}")))
    }
}

/// Outgoing solution of (Δ + 1)Φ = −δ₀, whose transform is 1/(s² − 1):
/// (i/2)e^{ir} for d = 1 and (i/4)(2π)^{−ν} H⁽¹⁾_ν(r)/r^ν, ν = (d−2)/2, otherwise.
pub fn helmholtz_phi(d: u32, r: f64) -> Result<Complex64> {
    if d == 0 {
        return Err(Error::Domain("dimension must be >= 1".into()));
    }
    if r == 0.0 && d >= 2 {
        return Err(Error::Singularity(format!("Helmholtz solution is singular at r = 0 in d = {d}")));
    }
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!("radius must be finite and >= 0, got {r}")));
    }
    if d == 1 {
        return Ok(Complex64::new(0.0, 0.5) * Complex64::from_polar(1.0, r));
    }
    if d == 3 {
        return Ok(Complex64::from_polar(1.0 / (4.0 * PI * r), r));
    }
    let nu = 0.5 * d as f64 - 1.0;
    let h = hankel1(nu, r)?;
    Ok(Complex64::new(0.0, 0.25) * h / ((2.0 * PI).powf(nu) * r.powf(nu)))
}

/// |Φ'' + ((d−1)/r)Φ' + Φ| by second-order central differences with step h.
pub fn helmholtz_ode_residual(d: u32, r: f64, h: f64) -> Result<f64> {
    if !(h > 0.0 && r > 2.0 * h) {
        return Err(Error::Domain(format!("need r > 2h > 0, got r = {r}, h = {h}")));
    }
    let (m, c, p) = (helmholtz_phi(d, r - h)?, helmholtz_phi(d, r)?, helmholtz_phi(d, r + h)?);
    let second = (p - 2.0 * c + m) / (h * h);
    let first = (p - m) / (2.0 * h);
    Ok((second + first * ((d as f64 - 1.0) / r) + c).norm())
}

/// h(s) = 1/log(s²) − 1/(s² − 1), extended continuously by h(0) = 1, h(1) = 1/2.
pub fn remainder_symbol(s: f64) -> f64 {
    if s == 0.0 {
        return 1.0;
    }
    let eps = s * s - 1.0;
    if eps.abs() < 1e-3 {
        // 1/log(1+ε) − 1/ε
        return 0.5 + eps * (-1.0 / 12.0 + eps * (1.0 / 24.0 + eps * (-19.0 / 720.0 + eps * (3.0 / 160.0))));
    }
    1.0 / eps.ln_1p() - 1.0 / eps
}

fn inverse_prefactor(d: u32) -> f64 {
    sphere_area(d) / (2.0 * PI).powi(d as i32)
}

/// Inverse radial transform of h restricted to s < 2.
pub fn e1_rem(d: u32, r: f64, spec: &QuadratureSpec) -> Result<IntegralResult> {
    check_dim(d)?;
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!("radius must be finite and >= 0, got {r}")));
    }
    let kernel = SphericalMeanKernel::new(d);
    let power = d as i32 - 1;
    let pieces = ((2.0 * r / PI).ceil() as usize).max(2);
    let mut pts: Vec<f64> = (0..=pieces).map(|i| 2.0 * i as f64 / pieces as f64).collect();
    pts.push(1.0);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let res = integrate_breakpoints(
        |s: f64| remainder_symbol(s) * kernel.eval(r * s) * s.powi(power),
        &pts,
        spec,
    );
    Ok(res.scale(inverse_prefactor(d)))
}

/// (2π)^{−d}ω_{d−1}∫_{s0}^∞ φ(s) c_d(rs) s^{d−1} ds for a decaying amplitude
/// φ(s)s^{(d−1)/2}, routed through the Bessel-block integrator.
fn inverse_tail<P: Fn(f64) -> f64>(d: u32, r: f64, s0: f64, phi: P, spec: &QuadratureSpec) -> Result<IntegralResult> {
    let nu = 0.5 * d as f64 - 1.0;
    let scale = gamma_real(0.5 * d as f64) * (2.0 / r).powf(nu);
    let expo = d as f64 - 1.0 - nu;
    let res = integrate_osc_bessel(|s: f64| scale * s.powf(expo) * phi(s), nu, r, s0, spec)?;
    Ok(res.scale(inverse_prefactor(d)))
}

/// Inverse radial transform of 1/(s² − 1) restricted to s > 2.
pub fn e2_helm(d: u32, r: f64, spec: &QuadratureSpec) -> Result<IntegralResult> {
    check_dim(d)?;
    if r == 0.0 && d >= 2 {
        return Err(Error::Divergence(format!(
            "the s > 2 Helmholtz part diverges at r = 0 in d = {d}"
        )));
    }
    if r == 0.0 {
        // (1/π)∫₂^∞ ds/(s² − 1) = ln 3 / (2π)
        return Ok(IntegralResult::exact(3f64.ln() / (2.0 * PI)));
    }
    check_radius(r)?;
    inverse_tail(d, r, 2.0, |s| 1.0 / (s * s - 1.0), spec)
}

/// The two pieces of E²_log in d = 2: G¹ = −2J₁(2r)/(r log 2) and
/// G² = J₀(2r)/(r² log²2) − (2/r²)∫₂^∞ J₀(sr)/(s log³s) ds, with
/// E²_log = (G¹ + G²)/(4π).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarLogPieces {
    pub g1: f64,
    pub g2: IntegralResult,
}

pub fn e2_log_planar_pieces(r: f64, spec: &QuadratureSpec) -> Result<PlanarLogPieces> {
    check_radius(r)?;
    let g1 = -2.0 * bessel_j_raw(1.0, 2.0 * r) / (r * LN_2);
    let tail = integrate_osc_bessel(|s: f64| 1.0 / (s * s.ln().powi(3)), 0.0, r, 2.0, spec)?;
    let boundary = IntegralResult::exact(bessel_j_raw(0.0, 2.0 * r) / (LN_2 * LN_2));
    let g2 = boundary.combine(tail.scale(-2.0)).scale(1.0 / (r * r));
    Ok(PlanarLogPieces { g1, g2 })
}

/// Uniform bound on |r²G²(r)|: 1/log²2 + 2∫₂^∞ ds/(s log³s) = 2/log²2.
pub const PLANAR_G2_MAJORANT: f64 = 2.0 / (LN_2 * LN_2);

/// Inverse radial transform of 1/log(s²) restricted to s > 2, with the
/// upper-limit boundary terms dropped.
pub fn e2_log(d: u32, r: f64, spec: &QuadratureSpec) -> Result<IntegralResult> {
    check_dim(d)?;
    if r == 0.0 {
        return Err(Error::Divergence("the s > 2 logarithmic part diverges at r = 0".into()));
    }
    check_radius(r)?;
    match d {
        1 => {
            let boundary = -(2.0 * r).sin() / (2.0 * PI * r * LN_2);
            // sin(sr) = √(πsr/2)·J_{1/2}(sr)
            let amp = (0.5 * PI * r).sqrt();
            let tail = integrate_osc_bessel(|s: f64| amp / (s.sqrt() * s.ln().powi(2)), 0.5, r, 2.0, spec)?;
            Ok(IntegralResult::exact(boundary).combine(tail.scale(1.0 / (2.0 * PI * r))))
        }
        2 => {
            let p = e2_log_planar_pieces(r, spec)?;
            Ok(IntegralResult::exact(p.g1).combine(p.g2).scale(1.0 / (4.0 * PI)))
        }
        _ => {
            // ∫₂^∞ A(s) sin(sr) ds with A = s/log s, integrated by parts twice.
            let l2 = LN_2;
            let a0 = 2.0 / l2;
            let a1 = 1.0 / l2 - 1.0 / (l2 * l2);
            let boundary = a0 * (2.0 * r).cos() / r - a1 * (2.0 * r).sin() / (r * r);
            let amp = (0.5 * PI * r).sqrt();
            let tail = integrate_osc_bessel(
                |s: f64| {
                    let l = s.ln();
                    amp * s.sqrt() * (2.0 - l) / (s * l * l * l)
                },
                0.5,
                r,
                2.0,
                spec,
            )?;
            let inner = IntegralResult::exact(boundary).combine(tail.scale(-1.0 / (r * r)));
            Ok(inner.scale(1.0 / (4.0 * PI * PI * r)))
        }
    }
}

/// Sides of the twice-integrated-by-parts identity for a finite upper limit N:
///
///   ∫₂^N s J₀(sr)/log s ds
///     = [N J₁(Nr)/(r log N) − 2J₁(2r)/(r log 2)]
///       + (1/r²)[J₀(2r)/log²2 − J₀(Nr)/log²N] − (2/r²)∫₂^N J₀(sr)/(s log³s) ds.
///
/// Both integrals are computed by plain quadrature, period by period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiniteIdentity {
    pub lhs: IntegralResult,
    pub rhs: IntegralResult,
}

impl FiniteIdentity {
    pub fn residual(&self) -> f64 {
        (self.lhs.value - self.rhs.value).abs()
    }
}

fn integrate_by_periods<F: Fn(f64) -> f64 + Sync>(f: F, a: f64, b: f64, period: f64, spec: &QuadratureSpec) -> IntegralResult {
    const CHUNK: usize = 256;
    let n = ((b - a) / period).ceil().max(1.0) as usize;
    let step = (b - a) / n as f64;
    let edges: Vec<f64> = (0..=n).map(|i| if i == n { b } else { a + step * i as f64 }).collect();
    edges
        .par_chunks(CHUNK)
        .enumerate()
        .map(|(ci, chunk)| {
            // Chunks overlap by one edge so consecutive windows tile [a, b].
            let start = ci * CHUNK;
            let end = (start + chunk.len()).min(n);
            integrate_breakpoints(&f, &edges[start..=end], spec)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(IntegralResult::exact(0.0), IntegralResult::combine)
}

pub fn e2_log_finite_identity(r: f64, n_upper: f64, spec: &QuadratureSpec) -> Result<FiniteIdentity> {
    check_radius(r)?;
    if !(n_upper > 2.0) || !n_upper.is_finite() {
        return Err(Error::Domain(format!("upper limit must exceed 2, got {n_upper}")));
    }
    let period = PI / r;
    let lhs = integrate_by_periods(|s| s * bessel_j_raw(0.0, s * r) / s.ln(), 2.0, n_upper, period, spec);
    let tail = integrate_by_periods(
        |s| bessel_j_raw(0.0, s * r) / (s * s.ln().powi(3)),
        2.0,
        n_upper,
        period,
        spec,
    );
    let (ln_n, j1) = (n_upper.ln(), |z: f64| bessel_j_raw(1.0, z));
    let first = n_upper * j1(n_upper * r) / (r * ln_n) - 2.0 * j1(2.0 * r) / (r * LN_2);
    let second = (bessel_j_raw(0.0, 2.0 * r) / (LN_2 * LN_2) - bessel_j_raw(0.0, n_upper * r) / (ln_n * ln_n)) / (r * r);
    let rhs = IntegralResult::exact(first + second).combine(tail.scale(-2.0 / (r * r)));
    Ok(FiniteIdentity { lhs, rhs })
}

/// ∫₀¹ c(d, 2t) r^{2t−d} dt, the first term of the Riesz-potential
/// representation of the fundamental solution (d ≥ 3).
pub fn riesz_series_first_term(d: u32, r: f64, spec: &QuadratureSpec) -> Result<IntegralResult> {
    if d < 3 {
        return Err(Error::Domain(format!(
            "the Riesz-potential representation needs d >= 3, got {d}"
        )));
    }
    check_radius(r)?;
    let df = d as f64;
    let ln_r = r.ln();
    let integrand = |t: f64| {
        if t == 0.0 {
            return 0.0;
        }
        riesz_constant_unchecked(df, 2.0 * t) * ((2.0 * t - df) * ln_r).exp()
    };
    // The integrand concentrates at t = 0 for small r and at t = 1 for large r.
    let mut pts = vec![0.0, 0.25, 0.5, 0.75, 0.9, 0.99, 1.0];
    if ln_r.abs() > 1.0 {
        let width = 1.0 / ln_r.abs();
        let edge = if ln_r > 0.0 { 1.0 - width } else { width };
        for k in 0..12 {
            let w = width * 0.5f64.powi(k);
            pts.push(if ln_r > 0.0 { 1.0 - w } else { w });
        }
        pts.push(edge);
    }
    pts.retain(|p| (0.0..=1.0).contains(p));
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    Ok(integrate_breakpoints(integrand, &pts, spec))
}

/// E = Φ + E¹_rem + E²_rem on a radial grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FundSolTable {
    pub d: u32,
    pub radii: Vec<f64>,
    pub phi: Vec<Complex64>,
    pub e1_rem: Vec<f64>,
    pub e2_rem: Vec<f64>,
    pub total: Vec<Complex64>,
    pub err_estimate: Vec<f64>,
    pub converged: Vec<bool>,
    /// Per-entry failure; the numeric columns hold NaN where this is set.
    pub errors: Vec<Option<Error>>,
}

impl FundSolTable {
    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    pub fn all_converged(&self) -> bool {
        self.converged.iter().all(|&c| c) && self.errors.iter().all(Option::is_none)
    }

    /// |total| per radius.
    pub fn magnitudes(&self) -> Vec<f64> {
        self.total.iter().map(|z| z.norm()).collect()
    }
}

struct Entry {
    phi: Complex64,
    e1: f64,
    e2: f64,
    err: f64,
    converged: bool,
}

fn entry(d: u32, r: f64, spec: &QuadratureSpec) -> Result<Entry> {
    let phi = helmholtz_phi(d, r)?;
    let e1 = e1_rem(d, r, spec)?;
    let log_part = e2_log(d, r, spec)?;
    let helm = e2_helm(d, r, spec)?;
    let e2 = log_part.combine(helm.scale(-1.0));
    Ok(Entry {
        phi,
        e1: e1.value,
        e2: e2.value,
        err: e1.err_estimate + e2.err_estimate,
        converged: e1.converged && e2.converged,
    })
}

/// Assemble the table; radii must be positive and strictly increasing.
pub fn fundamental_solution(d: u32, radii: &[f64], spec: &QuadratureSpec) -> Result<FundSolTable> {
    check_dim(d)?;
    spec.validate()?;
    if radii.is_empty() {
        return Err(Error::Input("radius grid is empty".into()));
    }
    if let Some(r) = radii.iter().find(|r| !(**r > 0.0) || !r.is_finite()) {
        return Err(Error::Domain(format!("radii must be finite and > 0, got {r}")));
    }
    if radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Input("radii must be strictly increasing".into()));
    }
    let entries: Vec<Result<Entry>> = radii.par_iter().map(|&r| entry(d, r, spec)).collect();
    let n = radii.len();
    let mut table = FundSolTable {
        d,
        radii: radii.to_vec(),
        phi: Vec::with_capacity(n),
        e1_rem: Vec::with_capacity(n),
        e2_rem: Vec::with_capacity(n),
        total: Vec::with_capacity(n),
        err_estimate: Vec::with_capacity(n),
        converged: Vec::with_capacity(n),
        errors: Vec::with_capacity(n),
    };
    for e in entries {
        match e {
            Ok(e) => {
                table.phi.push(e.phi);
                table.e1_rem.push(e.e1);
                table.e2_rem.push(e.e2);
                table.total.push(e.phi + e.e1 + e.e2);
                table.err_estimate.push(e.err);
                table.converged.push(e.converged);
                table.errors.push(None);
            }
            Err(err) => {
                let nan = Complex64::new(f64::NAN, f64::NAN);
                table.phi.push(nan);
                table.e1_rem.push(f64::NAN);
                table.e2_rem.push(f64::NAN);
                table.total.push(nan);
                table.err_estimate.push(f64::NAN);
                table.converged.push(false);
                table.errors.push(Some(err));
            }
        }
    }
    Ok(table)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFitReport {
    pub kappa: f64,
    pub log_weight: bool,
    /// max |E(r)|·r^κ (·log r with `log_weight`) over the window.
    pub sup_scaled: f64,
    /// Least-squares slope of log|E| against log r; −∞ for an identically zero window.
    pub slope: f64,
    /// Root-mean-square residual of the linear fit.
    pub fit_residual: f64,
    pub range: (f64, f64),
    pub points: usize,
}

/// Minimum number of samples a fit window must contain.
pub const MIN_FIT_POINTS: usize = 20;

/// Fit on raw samples (radius, |E|).
pub fn decay_fit_samples(
    radii: &[f64],
    magnitudes: &[f64],
    kappa: f64,
    log_weight: bool,
    r_lo: f64,
    r_hi: f64,
) -> Result<DecayFitReport> {
    if radii.len() != magnitudes.len() {
        return Err(Error::Input("radius and magnitude columns differ in length".into()));
    }
    if !(r_lo < r_hi) {
        return Err(Error::Input(format!("empty fit window [{r_lo}, {r_hi}]")));
    }
    if let (Some(&first), Some(&last)) = (radii.first(), radii.last()) {
        let slack = 1e-12 * last.abs().max(1.0);
        if r_lo < first - slack || r_hi > last + slack {
            return Err(Error::Input(format!(
                "fit window [{r_lo}, {r_hi}] exceeds table range [{first}, {last}]"
            )));
        }
    }
    let window: Vec<(f64, f64)> = radii
        .iter()
        .zip(magnitudes)
        .filter(|(r, _)| **r >= r_lo && **r <= r_hi)
        .map(|(r, m)| (*r, *m))
        .collect();
    if window.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientData {
            needed: MIN_FIT_POINTS,
            got: window.len(),
        });
    }
    if window.iter().any(|(_, m)| !m.is_finite()) {
        return Err(Error::Input("table contains non-finite values in the fit window".into()));
    }
    let weight = |r: f64| {
        let w = r.powf(kappa);
        if log_weight {
            w * r.ln()
        } else {
            w
        }
    };
    let sup_scaled = window.iter().map(|&(r, m)| m * weight(r)).fold(0.0, f64::max);

    let pts: Vec<(f64, f64)> = window
        .iter()
        .filter(|(_, m)| *m > 0.0)
        .map(|(r, m)| (r.ln(), m.ln()))
        .collect();
    let (slope, fit_residual) = if pts.len() < 2 {
        (f64::NEG_INFINITY, 0.0)
    } else {
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let slope = sxy / sxx;
        let rss: f64 = pts.iter().map(|p| (p.1 - my - slope * (p.0 - mx)).powi(2)).sum();
        (slope, (rss / n).sqrt())
    };
    Ok(DecayFitReport {
        kappa,
        log_weight,
        sup_scaled,
        slope,
        fit_residual,
        range: (r_lo, r_hi),
        points: window.len(),
    })
}

pub fn decay_fit(table: &FundSolTable, kappa: f64, log_weight: bool, r_lo: f64, r_hi: f64) -> Result<DecayFitReport> {
    decay_fit_samples(&table.radii, &table.magnitudes(), kappa, log_weight, r_lo, r_hi)
}

/// Integral ∫₀¹ s^{−2t} dt · s²/(s² − 1) in closed form, which collapses to 1/(2 log s).
pub fn collapse_lhs(s: f64, spec: &QuadratureSpec) -> IntegralResult {
    let inner = integrate_adaptive(|t: f64| s.powf(-2.0 * t), 0.0, 1.0, spec);
    inner.scale(s * s / (s * s - 1.0))
}
