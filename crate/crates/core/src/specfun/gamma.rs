//! Gamma and digamma functions.

use std::f64::consts::PI;

use crate::error::{domain, Result};

/// Euler–Mascheroni constant, 0.57721566490153286060651209008240243...
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(x) for x > 0.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain(format!("gamma_fn requires x > 0, got {x}")));
    }
    Ok(gamma_real(x))
}

/// Γ on the whole real line except the non-positive integers (reflection for x < 1/2).
pub(crate) fn gamma_real(x: f64) -> f64 {
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma_real(1.0 - x));
    }
    // Exact factorials keep Γ(n) bit-exact for small integers.
    if x == x.floor() && x <= 23.0 {
        let mut acc = 1.0;
        let mut k = 2.0;
        while k < x {
            acc *= k;
            k += 1.0;
        }
        return acc;
    }
    let z = x - 1.0;
    let mut sum = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        sum += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * sum
}

/// 1/Γ(x), finite (zero) at the poles of Γ.
pub(crate) fn rgamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return 0.0;
    }
    1.0 / gamma_real(x)
}

/// ψ(x) = Γ'(x)/Γ(x) for x > 0.
pub fn digamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain(format!("digamma requires x > 0, got {x}")));
    }
    Ok(digamma_pos(x))
}

pub(crate) fn digamma_pos(mut x: f64) -> f64 {
    let mut acc = 0.0;
    while x < 10.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    // Asymptotic series with Bernoulli numbers B_2k / (2k).
    let inv2 = 1.0 / (x * x);
    let tail = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * (691.0 / 32760.0))))));
    acc + x.ln() - 0.5 / x - tail
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::LN_2;

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma_fn(1.0).unwrap(), 1.0);
        assert_eq!(gamma_fn(5.0).unwrap(), 24.0);
        assert_relative_eq!(gamma_fn(0.5).unwrap(), PI.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(gamma_fn(1.5).unwrap(), 0.5 * PI.sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn gamma_rejects_nonpositive() {
        assert!(gamma_fn(0.0).is_err());
        assert!(gamma_fn(-1.5).is_err());
        assert!(gamma_fn(f64::NAN).is_err());
    }

    #[test]
    fn gamma_recurrence_on_grid() {
        let mut x = 0.1;
        while x <= 20.0 {
            let lhs = gamma_fn(x + 1.0).unwrap();
            let rhs = x * gamma_fn(x).unwrap();
            assert_relative_eq!(lhs, rhs, max_relative = 1e-12);
            x += 0.0731;
        }
    }

    #[test]
    fn gamma_large_argument_digits() {
        // 29! = 8841761993739701954543616000000
        assert_relative_eq!(gamma_fn(30.0).unwrap(), 8.841_761_993_739_702e30, max_relative = 1e-13);
        // Γ(25.5) = 24.5 · 23.5 ··· 0.5 · √π
        let mut expect = PI.sqrt();
        let mut k = 0.5;
        while k < 25.0 {
            expect *= k;
            k += 1.0;
        }
        assert_relative_eq!(gamma_fn(25.5).unwrap(), expect, max_relative = 1e-12);
    }

    #[test]
    fn reflection_branch() {
        // Γ(-1/2) = -2√π
        assert_relative_eq!(gamma_real(-0.5), -2.0 * PI.sqrt(), max_relative = 1e-14);
        assert_eq!(rgamma(0.0), 0.0);
        assert_eq!(rgamma(-2.0), 0.0);
    }

    #[test]
    fn digamma_examples() {
        assert_relative_eq!(digamma(1.0).unwrap(), -EULER_GAMMA, max_relative = 1e-14);
        assert_relative_eq!(
            digamma(0.5).unwrap(),
            -EULER_GAMMA - 2.0 * LN_2,
            max_relative = 1e-14
        );
        assert_relative_eq!(digamma(1.5).unwrap(), 0.036_489_973_978_576_52, max_relative = 1e-12);
        assert!(digamma(0.0).is_err());
    }

    #[test]
    fn digamma_recurrence_on_grid() {
        let mut x = 0.1;
        while x <= 20.0 {
            let lhs = digamma(x + 1.0).unwrap();
            let rhs = digamma(x).unwrap() + 1.0 / x;
            assert!((lhs - rhs).abs() <= 1e-12, "x = {x}: {lhs} vs {rhs}");
            x += 0.0731;
        }
    }
}
