//! Bessel functions of the first and second kind and the Hankel function H⁽¹⁾.
//!
//! Two branches: the ascending power series for `z <= SERIES_MAX` and the
//! Hankel asymptotic expansion (truncated at its smallest term, never fewer
//! than eight terms) above it. Half-integer orders make the asymptotic
//! expansion terminate, so that branch is exact for them up to rounding.
//!
//! The public entry points only accept the orders the rest of the crate
//! needs: −1/2, 0, 1/2, 1, 3/2 and 2 (that is, (d−2)/2 for d ≤ 6).

use std::f64::consts::{FRAC_1_PI, FRAC_2_PI, PI};

use num_complex::Complex64;

use super::gamma::{digamma_pos, gamma_real, rgamma};
use crate::error::{Error, Result};

/// Switch point between the power series and the asymptotic expansion.
pub const SERIES_MAX: f64 = 12.0;

const SUPPORTED_ORDERS: [f64; 6] = [-0.5, 0.0, 0.5, 1.0, 1.5, 2.0];

fn check_order(nu: f64) -> Result<()> {
    if SUPPORTED_ORDERS.contains(&nu) {
        Ok(())
    } else {
        Err(Error::UnsupportedOrder(nu))
    }
}

/// J_ν(z) for z ≥ 0.
pub fn bessel_j(nu: f64, z: f64) -> Result<f64> {
    check_order(nu)?;
    if !(z >= 0.0) || !z.is_finite() {
        return Err(Error::Domain(format!("bessel_j requires finite z >= 0, got {z}")));
    }
    Ok(bessel_j_raw(nu, z))
}

/// Y_ν(z) for z > 0.
pub fn bessel_y(nu: f64, z: f64) -> Result<f64> {
    check_order(nu)?;
    if z == 0.0 {
        return Err(Error::Singularity("Y_nu is singular at z = 0".into()));
    }
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::Domain(format!("bessel_y requires finite z > 0, got {z}")));
    }
    Ok(bessel_y_raw(nu, z))
}

/// H⁽¹⁾_ν(z) = J_ν(z) + i·Y_ν(z) for z > 0.
pub fn hankel1(nu: f64, z: f64) -> Result<Complex64> {
    check_order(nu)?;
    if z == 0.0 {
        return Err(Error::Singularity("H1_nu is singular at z = 0".into()));
    }
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::Domain(format!("hankel1 requires finite z > 0, got {z}")));
    }
    if z > SERIES_MAX {
        let (j, y) = asymptotic_jy(nu, z);
        return Ok(Complex64::new(j, y));
    }
    Ok(Complex64::new(bessel_j_raw(nu, z), bessel_y_raw(nu, z)))
}

/// J_ν(z) for any real ν ≥ −1/2 and z ≥ 0. No order validation.
pub(crate) fn bessel_j_raw(nu: f64, z: f64) -> f64 {
    if z == 0.0 {
        return if nu == 0.0 {
            1.0
        } else if nu > 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
    }
    if z <= SERIES_MAX {
        series_j(nu, z)
    } else {
        asymptotic_jy(nu, z).0
    }
}

pub(crate) fn bessel_y_raw(nu: f64, z: f64) -> f64 {
    if z > SERIES_MAX {
        return asymptotic_jy(nu, z).1;
    }
    if nu == nu.floor() {
        series_y_integer(nu as u32, z)
    } else {
        let (s, c) = (nu * PI).sin_cos();
        // Exact trigonometric values at half-integers.
        let (s, c) = if (2.0 * nu) == (2.0 * nu).floor() {
            (s.round(), 0.0)
        } else {
            (s, c)
        };
        (series_j(nu, z) * c - series_j(-nu, z)) / s
    }
}

/// Γ(ν+1)·(2/z)^ν·J_ν(z), the normalised Bessel function that equals 1 at z = 0.
pub(crate) fn normalized_bessel(nu: f64, z: f64) -> f64 {
    let z = z.abs();
    if z <= SERIES_MAX {
        let q = -0.25 * z * z;
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 0.0;
        loop {
            k += 1.0;
            term *= q / (k * (k + nu));
            sum += term;
            if term.abs() <= 1e-17 * sum.abs().max(1e-300) && k > 0.5 * z {
                break;
            }
        }
        sum
    } else {
        gamma_real(nu + 1.0) * (2.0 / z).powf(nu) * asymptotic_jy(nu, z).0
    }
}

fn series_j(nu: f64, z: f64) -> f64 {
    let half = 0.5 * z;
    let q = -half * half;
    let mut term = half.powf(nu) * rgamma(nu + 1.0);
    let mut sum = term;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= q / (k * (k + nu));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs().max(1e-300) && k > half {
            break;
        }
        if k > 200.0 {
            break;
        }
    }
    sum
}

fn series_y_integer(n: u32, z: f64) -> f64 {
    let half = 0.5 * z;
    let nf = n as f64;
    let mut finite = 0.0;
    if n > 0 {
        // Σ_{k<n} (n−k−1)!/k! (z/2)^{2k−n}
        for k in 0..n {
            let kf = k as f64;
            finite += gamma_real(nf - kf) / gamma_real(kf + 1.0) * half.powf(2.0 * kf - nf);
        }
    }
    let q = -half * half;
    let mut term = half.powf(nf) / gamma_real(nf + 1.0);
    let mut sum = (digamma_pos(1.0) + digamma_pos(nf + 1.0)) * term;
    let mut k = 0.0;
    let mut psi_a = digamma_pos(1.0);
    let mut psi_b = digamma_pos(nf + 1.0);
    loop {
        k += 1.0;
        term *= q / (k * (k + nf));
        psi_a += 1.0 / k;
        psi_b += 1.0 / (k + nf);
        let t = (psi_a + psi_b) * term;
        sum += t;
        if t.abs() <= 1e-17 * sum.abs().max(1e-300) && k > half {
            break;
        }
        if k > 200.0 {
            break;
        }
    }
    -FRAC_1_PI * finite + FRAC_2_PI * half.ln() * series_j(nf, z) - FRAC_1_PI * sum
}

/// Hankel asymptotic expansion; returns (J_ν(z), Y_ν(z)).
fn asymptotic_jy(nu: f64, z: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut a = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..=60 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        let next = a * (mu - odd * odd) / (kf * 8.0 * z);
        if next == 0.0 {
            break;
        }
        if k > 8 && next.abs() >= prev {
            break;
        }
        prev = next.abs();
        a = next;
        match k % 4 {
            1 => q += a,
            2 => p -= a,
            3 => q -= a,
            _ => p += a,
        }
        if a.abs() < 1e-17 {
            break;
        }
    }
    // cos/sin(z − φ) expanded so that no precision is lost forming z − φ.
    let phase = (0.5 * nu + 0.25) * PI;
    let (sz, cz) = z.sin_cos();
    let (sp, cp) = phase.sin_cos();
    let cos_chi = cz * cp + sz * sp;
    let sin_chi = sz * cp - cz * sp;
    let amp = (FRAC_2_PI / z).sqrt();
    (
        amp * (p * cos_chi - q * sin_chi),
        amp * (p * sin_chi + q * cos_chi),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    // Reference values from mpmath at 30 digits.
    const J_REF: [(f64, f64, f64); 10] = [
        (0.0, 1.0, 0.765_197_686_557_966_55),
        (0.0, 5.0, -0.177_596_771_314_338_3),
        (0.0, 11.5, -0.067_653_948_111_665_228),
        (0.0, 12.5, 0.146_884_054_700_421_1),
        (0.0, 30.0, -0.086_367_983_581_040_211),
        (1.0, 2.0, 0.576_724_807_756_873_39),
        (1.0, 20.0, 0.066_833_124_175_850_046),
        (2.0, 7.5, -0.230_273_410_525_790_26),
        (2.0, 40.0, -0.001_064_974_682_358_039_6),
        (1.0, 12.0, -0.223_447_104_490_627_61),
    ];

    const Y_REF: [(f64, f64, f64); 7] = [
        (0.0, 1.0, 0.088_256_964_215_676_958),
        (0.0, 7.0, -0.025_949_743_967_209_265),
        (0.0, 25.0, -0.127_249_432_268_006_14),
        (1.0, 3.0, 0.324_674_424_791_799_98),
        (1.0, 11.0, 0.163_705_537_414_942_85),
        (2.0, 0.5, -5.441_370_837_174_265_7),
        (2.0, 15.0, -0.202_654_478_967_335_13),
    ];

    #[test]
    fn j_against_reference() {
        for &(nu, z, want) in &J_REF {
            let got = bessel_j(nu, z).unwrap();
            assert!((got - want).abs() <= 2e-12, "J_{nu}({z}) = {got}, want {want}");
        }
    }

    #[test]
    fn y_against_reference() {
        for &(nu, z, want) in &Y_REF {
            let got = bessel_y(nu, z).unwrap();
            assert!(
                (got - want).abs() <= 2e-12 * want.abs().max(1.0),
                "Y_{nu}({z}) = {got}, want {want}"
            );
        }
    }

    #[test]
    fn examples() {
        assert_eq!(bessel_j(0.0, 0.0).unwrap(), 1.0);
        assert!(bessel_j(0.5, PI).unwrap().abs() < 1e-12);
        assert!(bessel_j(0.0, 2.404_825_557_695_773).unwrap().abs() < 1e-10);
    }

    #[test]
    fn unsupported_order_rejected() {
        assert_eq!(bessel_j(0.25, 1.0), Err(Error::UnsupportedOrder(0.25)));
        assert!(hankel1(3.0, 1.0).is_err());
        assert!(matches!(hankel1(0.0, 0.0), Err(Error::Singularity(_))));
    }

    #[test]
    fn half_integer_closed_forms() {
        let mut z: f64 = 0.1;
        while z <= 100.0 {
            let amp = (2.0 / (PI * z)).sqrt();
            let (s, c) = z.sin_cos();
            let j_half = bessel_j(0.5, z).unwrap();
            let j_mhalf = bessel_j(-0.5, z).unwrap();
            let j_3half = bessel_j(1.5, z).unwrap();
            assert!((j_half - amp * s).abs() <= 2e-12 * (1.0 + amp), "z={z}");
            assert!((j_mhalf - amp * c).abs() <= 2e-12 * (1.0 + amp), "z={z}");
            assert!((j_3half - amp * (s / z - c)).abs() <= 2e-12 * (1.0 + amp / z), "z={z}");
            let h = hankel1(0.5, z).unwrap();
            let expect = Complex64::new(0.0, -amp) * Complex64::new(c, s);
            assert!((h - expect).norm() <= 1e-12 * expect.norm(), "z={z}: {h} vs {expect}");
            z *= 1.07;
        }
    }

    #[test]
    fn hankel_half_at_one() {
        let h = hankel1(0.5, 1.0).unwrap();
        let amp = (2.0 / PI).sqrt();
        assert_relative_eq!(h.re, amp * 1f64.sin(), max_relative = 1e-13);
        assert_relative_eq!(h.im, -amp * 1f64.cos(), max_relative = 1e-13);
    }

    #[test]
    fn hankel_amplitude_limit() {
        let z = 1e4;
        let amp = hankel1(0.0, z).unwrap().norm() * z.sqrt();
        assert!((amp - (2.0 / PI).sqrt()).abs() < 1e-8);
    }

    #[test]
    fn three_term_recurrence() {
        // J_{ν−1} + J_{ν+1} = (2ν/z) J_ν
        for &nu in &[0.5, 1.0] {
            let mut z = 0.1;
            while z <= 50.0 {
                let lhs = bessel_j(nu - 1.0, z).unwrap() + bessel_j(nu + 1.0, z).unwrap();
                let rhs = 2.0 * nu / z * bessel_j(nu, z).unwrap();
                assert!((lhs - rhs).abs() <= 1e-9, "nu={nu} z={z}: {lhs} vs {rhs}");
                z += 0.173;
            }
        }
    }

    #[test]
    fn branches_agree_near_switch() {
        for &nu in &SUPPORTED_ORDERS {
            for &z in &[11.0, 11.5, 12.0, 12.5, 13.0] {
                let s = series_j(nu, z);
                let a = asymptotic_jy(nu, z).0;
                assert!((s - a).abs() <= 1e-10, "J nu={nu} z={z}: {s} vs {a}");
                let ys = if nu == 0.0 || nu == 1.0 || nu == 2.0 {
                    series_y_integer(nu as u32, z)
                } else {
                    let sgn = (nu * PI).sin().round();
                    -series_j(-nu, z) / sgn
                };
                let ya = asymptotic_jy(nu, z).1;
                assert!((ys - ya).abs() <= 1e-10, "Y nu={nu} z={z}: {ys} vs {ya}");
            }
        }
    }

    #[test]
    fn normalized_bessel_matches_definition() {
        for &nu in &[-0.5, 0.0, 0.5] {
            for &z in &[0.3f64, 4.0, 11.9, 12.1, 60.0] {
                let direct = gamma_real(nu + 1.0) * (2.0 / z).powf(nu) * bessel_j_raw(nu, z);
                assert!((normalized_bessel(nu, z) - direct).abs() < 1e-11);
            }
            assert_eq!(normalized_bessel(nu, 0.0), 1.0);
        }
        assert!((normalized_bessel(-0.5, 2.0) - 2f64.cos()).abs() < 1e-14);
        assert!((normalized_bessel(0.5, 2.0) - 2f64.sin() / 2.0).abs() < 1e-14);
    }
}
