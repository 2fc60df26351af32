//! Pairings of the Fourier-side fundamental solution with radial test functions.
//!
//! Ê_log acts on ψ by the renormalised pairing
//!
//!   ⟨Ê_log, ψ⟩ = ∫_{||ξ|−1|<1} (ψ(ξ) − ψ(ξ/|ξ|)) / (2 log|ξ|) dξ + ∫_{|ξ|>2} ψ(ξ) / (2 log|ξ|) dξ.
//!
//! For radial ψ every restriction to the unit sphere is the point value ψ(1),
//! so all checks below reduce to one-dimensional integrals in s = |ξ|.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fundsol::remainder_symbol;
use crate::logop::{DecayClass, RadialProfile, SCHWARTZ_CUTOFF};
use crate::quadrature::{integrate_breakpoints, subtracted_on_annulus, IntegralResult, QuadratureSpec};
use crate::specfun::sphere_area;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VanishingOrder {
    AllOrders,
    Finite(u32),
}

/// A radial Fourier-side test function ψ.
#[derive(Debug, Clone)]
pub struct Witness {
    pub name: String,
    pub psi: RadialProfile,
    pub vanishing_order_at_0: VanishingOrder,
    /// Closed interval containing the support; `hi` may be infinite.
    pub support: (f64, f64),
}

impl Witness {
    pub fn new(name: impl Into<String>, psi: RadialProfile, vanishing_order_at_0: VanishingOrder, support: (f64, f64)) -> Self {
        Witness {
            name: name.into(),
            psi,
            vanishing_order_at_0,
            support,
        }
    }

    /// α·self + β·other.
    pub fn combine(alpha: f64, a: &Witness, beta: f64, b: &Witness) -> Witness {
        let order = match (a.vanishing_order_at_0, b.vanishing_order_at_0) {
            (VanishingOrder::AllOrders, VanishingOrder::AllOrders) => VanishingOrder::AllOrders,
            (VanishingOrder::Finite(k), VanishingOrder::AllOrders) | (VanishingOrder::AllOrders, VanishingOrder::Finite(k)) => {
                VanishingOrder::Finite(k)
            }
            (VanishingOrder::Finite(j), VanishingOrder::Finite(k)) => VanishingOrder::Finite(j.min(k)),
        };
        Witness {
            name: format!("{alpha}*{}+{beta}*{}", a.name, b.name),
            psi: RadialProfile::linear_combination(alpha, &a.psi, beta, &b.psi),
            vanishing_order_at_0: order,
            support: (a.support.0.min(b.support.0), a.support.1.max(b.support.1)),
        }
    }

    pub fn at_sphere(&self) -> f64 {
        self.psi.eval(1.0)
    }

    /// Finite samples, and for all-orders vanishing |ψ(s)|/s^k → 0 (k ≤ 8) at s = 10⁻², 10⁻³.
    pub fn check_invariants(&self) -> Result<()> {
        self.psi.check_invariants()?;
        if self.vanishing_order_at_0 == VanishingOrder::AllOrders {
            for &s in &[1e-2f64, 1e-3] {
                for k in 0..=8 {
                    let q = self.psi.eval(s).abs() / s.powi(k);
                    if q > 1e-6 {
                        return Err(Error::Input(format!(
                            "witness {} does not vanish to all orders at 0: |psi({s})|/{s}^{k} = {q}",
                            self.name
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn upper(&self) -> f64 {
        self.support.1.min(SCHWARTZ_CUTOFF)
    }
}

/// The built-in witnesses: one flat at the origin, one straddling the sphere,
/// one supported away from both.
pub fn builtin_witnesses() -> Vec<Witness> {
    let flat = RadialProfile::new(
        "w_flat",
        |s: f64| if s <= 0.0 { 0.0 } else { (-s * s - 1.0 / (s * s)).exp() },
        true,
        DecayClass::Schwartz,
    );
    vec![
        Witness::new("w_flat", flat, VanishingOrder::AllOrders, (0.0, f64::INFINITY)),
        Witness::new("w_bump", RadialProfile::bump(0.5, 4.0, 1.0), VanishingOrder::AllOrders, (0.5, 4.0)),
        Witness::new("w_shell", RadialProfile::bump(3.0, 5.0, 4.0), VanishingOrder::AllOrders, (3.0, 5.0)),
    ]
}

/// Value of a pairing. Radial real pairings have zero imaginary part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairingResult {
    pub value: Complex64,
    pub err_estimate: f64,
    pub converged: bool,
}

impl From<IntegralResult> for PairingResult {
    fn from(r: IntegralResult) -> Self {
        PairingResult {
            value: Complex64::new(r.value, 0.0),
            err_estimate: r.err_estimate,
            converged: r.converged,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingleLayerKind {
    UniformMeasure,
    RadialDerivativeOfMeasure,
}

/// weight·δ_{S^{d−1}} or weight·∂_r δ_{S^{d−1}} on the Fourier side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleLayerSpec {
    pub kind: SingleLayerKind,
    pub weight: f64,
}

fn check_dim(d: u32) -> Result<()> {
    if (1..=3).contains(&d) {
        Ok(())
    } else {
        Err(Error::Domain(format!("dimension must be 1, 2 or 3, got {d}")))
    }
}

/// ω_{d−1}∫_a^b f(s) s^{d−1} ds with unit breakpoints.
fn radial_integral<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, d: u32, spec: &QuadratureSpec) -> IntegralResult {
    if b <= a {
        return IntegralResult::exact(0.0);
    }
    let mut pts = vec![a];
    let mut p = a.floor() + 1.0;
    while p < b {
        pts.push(p);
        p += 1.0;
    }
    pts.push(b);
    let power = d as i32 - 1;
    integrate_breakpoints(|s: f64| f(s) * s.powi(power), &pts, spec).scale(sphere_area(d))
}

fn pairing_with<P: Fn(f64) -> f64>(psi: P, upper: f64, d: u32, spec: &QuadratureSpec) -> Result<IntegralResult> {
    let inner = subtracted_on_annulus(&psi, d, spec, 1.0, |s| 0.5 / s.ln())?;
    let outer = radial_integral(|s| psi(s) * 0.5 / s.ln(), 2.0, upper, d, spec);
    Ok(inner.combine(outer))
}

/// ⟨Ê_log, ψ⟩ with the sphere-subtracted inner part.
pub fn pairing_elog(w: &Witness, d: u32, spec: &QuadratureSpec) -> Result<PairingResult> {
    check_dim(d)?;
    Ok(pairing_with(|s| w.psi.eval(s), w.upper(), d, spec)?.into())
}

/// |⟨Ê_log, log(s²)ψ⟩ − ∫ψ|: Ê_log inverts multiplication by log|ξ|².
pub fn division_residual(w: &Witness, d: u32, spec: &QuadratureSpec) -> Result<IntegralResult> {
    check_dim(d)?;
    let upper = w.upper();
    let lhs = pairing_with(|s| if s > 0.0 { (s * s).ln() * w.psi.eval(s) } else { 0.0 }, upper, d, spec)?;
    let rhs = radial_integral(|s| w.psi.eval(s), 0.0, upper, d, spec);
    Ok(IntegralResult {
        value: (lhs.value - rhs.value).abs(),
        err_estimate: lhs.err_estimate + rhs.err_estimate,
        converged: lhs.converged && rhs.converged,
    })
}

/// ⟨û, log(s²)ψ⟩ for û a uniform single layer on the sphere: weight·ω·log(1)·ψ(1), which is 0.
pub fn liouville_annihilation(sl: &SingleLayerSpec, w: &Witness, d: u32) -> Result<Complex64> {
    check_dim(d)?;
    if sl.kind != SingleLayerKind::UniformMeasure {
        return Err(Error::Input(
            "annihilation applies to the uniform single layer; use liouville_counterexample".into(),
        ));
    }
    if !sl.weight.is_finite() {
        return Err(Error::Input(format!("single-layer weight must be finite, got {}", sl.weight)));
    }
    let value = sl.weight * sphere_area(d) * 1f64.ln() * w.at_sphere();
    Ok(Complex64::new(value, 0.0))
}

/// ⟨∂_r δ_S, log(s²)ψ⟩ = −ω_{d−1}·∂_s[log(s²)ψ(s)s^{d−1}]_{s=1} = −2ω_{d−1}ψ(1).
pub fn liouville_counterexample(w: &Witness, d: u32) -> Result<Complex64> {
    check_dim(d)?;
    Ok(Complex64::new(-2.0 * sphere_area(d) * w.at_sphere(), 0.0))
}

/// The same certificate with the derivative at s = 1 taken numerically
/// (central differences with two Richardson steps).
pub fn liouville_counterexample_numeric(w: &Witness, d: u32) -> Result<Complex64> {
    check_dim(d)?;
    let power = d as i32 - 1;
    let g = |s: f64| (s * s).ln() * w.psi.eval(s) * s.powi(power);
    let central = |h: f64| (g(1.0 + h) - g(1.0 - h)) / (2.0 * h);
    let h = 1e-2;
    let (a, b, c) = (central(h), central(0.5 * h), central(0.25 * h));
    let ab = (4.0 * b - a) / 3.0;
    let bc = (4.0 * c - b) / 3.0;
    let deriv = (16.0 * bc - ab) / 15.0;
    Ok(Complex64::new(-sphere_area(d) * deriv, 0.0))
}

/// The four pairings of the sphere-term identity
/// ⟨Ê¹_log, ψ⟩ − ⟨Ê¹_Helm, ψ⟩ = ⟨Ê¹_rem, ψ⟩ − ω_{d−1}ψ(1)∫₀² h(s)s^{d−1} ds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossCheckTerms {
    pub log_subtracted: IntegralResult,
    pub helm_subtracted: IntegralResult,
    pub remainder: IntegralResult,
    pub sphere_term: IntegralResult,
}

impl CrossCheckTerms {
    pub fn residual(&self) -> f64 {
        (self.log_subtracted.value - self.helm_subtracted.value - self.remainder.value + self.sphere_term.value).abs()
    }
}

pub fn classification_terms(w: &Witness, d: u32, spec: &QuadratureSpec) -> Result<CrossCheckTerms> {
    check_dim(d)?;
    let psi = |s: f64| w.psi.eval(s);
    let log_subtracted = subtracted_on_annulus(psi, d, spec, 1.0, |s| 0.5 / s.ln())?;
    let helm_subtracted = subtracted_on_annulus(psi, d, spec, 1.0, |s| 1.0 / (s * s - 1.0))?;
    let remainder = radial_integral(|s| remainder_symbol(s) * w.psi.eval(s), 0.0, 2.0, d, spec);
    let sphere_term = radial_integral(remainder_symbol, 0.0, 2.0, d, spec).scale(w.at_sphere());
    Ok(CrossCheckTerms {
        log_subtracted,
        helm_subtracted,
        remainder,
        sphere_term,
    })
}

/// Residual of the sphere-term identity; every term is an independent quadrature.
pub fn classification_crosscheck(w: &Witness, d: u32, spec: &QuadratureSpec) -> Result<IntegralResult> {
    let t = classification_terms(w, d, spec)?;
    Ok(IntegralResult {
        value: t.residual(),
        err_estimate: t.log_subtracted.err_estimate
            + t.helm_subtracted.err_estimate
            + t.remainder.err_estimate
            + t.sphere_term.err_estimate,
        converged: t.log_subtracted.converged && t.helm_subtracted.converged && t.remainder.converged && t.sphere_term.converged,
    })
}
