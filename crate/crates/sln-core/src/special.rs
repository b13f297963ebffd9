//! Complex digamma function.

use crate::C64;

// Bernoulli numbers B_{2k} / (2k) for the asymptotic series.
const ASYMPTOTIC: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
    -3617.0 / 8160.0,
];

/// ψ(z) for complex z away from the non-positive integers.
///
/// Uses the upward recurrence ψ(z) = ψ(z+1) - 1/z until |z| ≥ 12, then the
/// Stirling series; accuracy is close to machine precision for Re z > -20.
pub fn digamma(mut z: C64) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    if z.re < 0.5 {
        // Reflection keeps the recurrence short for negative real parts.
        let pi = core::f64::consts::PI;
        let s = (z * pi).sin();
        let c = (z * pi).cos();
        return digamma(C64::new(1.0, 0.0) - z) - c / s * pi;
    }
    while z.norm() < 12.0 {
        acc -= z.inv();
        z += 1.0;
    }
    let zi2 = (z * z).inv();
    let mut term = zi2;
    let mut series = C64::new(0.0, 0.0);
    for c in ASYMPTOTIC {
        series += term * c;
        term *= zi2;
    }
    acc + z.ln() - z.inv() * 0.5 - series
}

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Real digamma on the positive axis.
pub fn digamma_real(x: f64) -> f64 {
    digamma(C64::new(x, 0.0)).re
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert!((digamma_real(1.0) + EULER_GAMMA).abs() < 1e-14);
        let pi = core::f64::consts::PI;
        let ln2 = core::f64::consts::LN_2;
        assert!((digamma_real(0.25) - (-EULER_GAMMA - pi / 2.0 - 3.0 * ln2)).abs() < 1e-13);
        assert!((digamma_real(0.5) - (-EULER_GAMMA - 2.0 * ln2)).abs() < 1e-14);
    }

    #[test]
    fn recurrence_and_conjugation() {
        let z = C64::new(0.3, 1.7);
        let r = digamma(z + 1.0) - digamma(z) - z.inv();
        assert!(r.norm() < 1e-13);
        assert!((digamma(z.conj()) - digamma(z).conj()).norm() < 1e-14);
    }

    #[test]
    fn reflection_branch() {
        let z = C64::new(-1.3, 0.4);
        let r = digamma(z + 1.0) - digamma(z) - z.inv();
        assert!(r.norm() < 1e-12);
    }
}
