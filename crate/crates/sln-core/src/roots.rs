//! Spectral input data: q-functions, vacuum factors Φ± and the eigenvalue
//! functions λ_j.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{domain, CoreError, Result};
use crate::C64;

/// Pole proximity threshold, relative to `1 + |x|^deg`.
pub const POLE_EPS: f64 = 1e-13;

/// Complete spectral input of one eigenvalue: rank, Trotter number, coupling,
/// chemical potentials and Bethe roots per level.
///
/// Levels 0 and n are never stored as roots: `q_0 = Φ₋` and `q_n = Φ₊` with
/// `Φ±(x) = (x ± iτ)^{N/2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct RootData {
    pub n: usize,
    /// Trotter number N (even).
    pub trotter: usize,
    pub tau: f64,
    pub beta: f64,
    /// Chemical potentials μ_1..μ_n.
    pub mu: Vec<f64>,
    /// Roots of q_1..q_{n-1}.
    pub roots: Vec<Vec<C64>>,
}

impl RootData {
    pub fn new(
        n: usize,
        trotter: usize,
        tau: f64,
        beta: f64,
        mu: Vec<f64>,
        roots: Vec<Vec<C64>>,
    ) -> Result<Self> {
        if n < 2 {
            return Err(domain("rank n must be at least 2"));
        }
        if !trotter.is_multiple_of(2) {
            return Err(domain("Trotter number must be even"));
        }
        if mu.len() != n {
            return Err(domain("need exactly n chemical potentials"));
        }
        if roots.len() != n - 1 {
            return Err(domain("need exactly n-1 root levels"));
        }
        Ok(Self { n, trotter, tau, beta, mu, roots })
    }

    /// N = 0, no roots, μ = 0: every box evaluates to 1.
    pub fn counting(n: usize) -> Self {
        Self::weighted(n, 1.0, &vec![0.0; n])
    }

    /// N = 0 and no roots: box j evaluates to e^{βμ_j}. This is the x → ∞
    /// limit of any data with the same μ.
    pub fn weighted(n: usize, beta: f64, mu: &[f64]) -> Self {
        Self {
            n,
            trotter: 0,
            tau: 0.0,
            beta,
            mu: mu.to_vec(),
            roots: vec![Vec::new(); n - 1],
        }
    }

    /// Number of roots at level 1..n-1.
    pub fn m(&self, level: usize) -> usize {
        self.roots[level - 1].len()
    }

    /// Polynomial degree of q_level (N/2 for the vacuum factors).
    pub fn degree(&self, level: usize) -> usize {
        if level == 0 || level == self.n {
            self.trotter / 2
        } else {
            self.m(level)
        }
    }

    pub fn phi_minus(&self, x: C64) -> C64 {
        (x - C64::new(0.0, self.tau)).powi((self.trotter / 2) as i32)
    }

    pub fn phi_plus(&self, x: C64) -> C64 {
        (x + C64::new(0.0, self.tau)).powi((self.trotter / 2) as i32)
    }

    /// q_level(x) for level in 0..=n.
    pub fn q(&self, level: usize, x: C64) -> Result<C64> {
        if level > self.n {
            return Err(domain("q level out of range"));
        }
        Ok(if level == 0 {
            self.phi_minus(x)
        } else if level == self.n {
            self.phi_plus(x)
        } else {
            self.roots[level - 1].iter().fold(C64::new(1.0, 0.0), |p, r| p * (x - r))
        })
    }

    /// q_level(x) used as a divisor: raises a pole error when it vanishes.
    fn q_divisor(&self, level: usize, x: C64) -> Result<C64> {
        let v = self.q(level, x)?;
        let deg = self.degree(level) as i32;
        if v.norm() < POLE_EPS * (1.0 + x.norm().powi(deg)) {
            return Err(CoreError::Pole { level, root: self.nearest_zero(level, x), x });
        }
        Ok(v)
    }

    fn nearest_zero(&self, level: usize, x: C64) -> C64 {
        if level == 0 {
            return C64::new(0.0, self.tau);
        }
        if level == self.n {
            return C64::new(0.0, -self.tau);
        }
        self.roots[level - 1]
            .iter()
            .copied()
            .min_by(|a, b| (x - a).norm().total_cmp(&(x - b).norm()))
            .unwrap_or(x)
    }

    /// λ_j(x) = Φ₋Φ₊ · q_{j-1}(x-i)/q_{j-1}(x) · q_j(x+i)/q_j(x) · e^{βμ_j}.
    pub fn lambda(&self, j: usize, x: C64) -> Result<C64> {
        if j == 0 || j > self.n {
            return Err(domain("species out of range"));
        }
        let i = C64::new(0.0, 1.0);
        let vac = self.phi_minus(x) * self.phi_plus(x);
        let lo = self.q(j - 1, x - i)? / self.q_divisor(j - 1, x)?;
        let hi = self.q(j, x + i)? / self.q_divisor(j, x)?;
        Ok(vac * lo * hi * (self.beta * self.mu[j - 1]).exp())
    }

    /// Λ(x) = Σ_j λ_j(x).
    pub fn eigenvalue(&self, x: C64) -> Result<C64> {
        (1..=self.n).try_fold(C64::new(0.0, 0.0), |acc, j| Ok(acc + self.lambda(j, x)?))
    }

    /// Species-reversed conjugate data: roots of level l become the conjugated
    /// roots of level n-l, and μ is reversed.
    pub fn species_conjugate(&self) -> Self {
        let n = self.n;
        let roots = (1..n)
            .map(|l| self.roots[n - l - 1].iter().map(|z| z.conj()).collect())
            .collect();
        let mut mu = self.mu.clone();
        mu.reverse();
        Self { roots, mu, ..self.clone() }
    }

    /// Same data with every root multiplied by `factor` (negative controls).
    pub fn scaled_roots(&self, factor: f64) -> Self {
        let roots = self.roots.iter().map(|l| l.iter().map(|z| z * factor).collect()).collect();
        Self { roots, ..self.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn q_basics() {
        let d = RootData::counting(3);
        assert_eq!(d.q(1, c(0.7, 0.2)).unwrap(), c(1.0, 0.0));
        let d = RootData::new(2, 2, 0.5, 1.0, vec![0.0; 2], vec![vec![c(0.3, 0.0), c(-0.3, 0.0)]])
            .unwrap();
        assert!((d.q(0, c(0.0, 0.0)).unwrap() - c(0.0, -0.5)).norm() < 1e-15);
        assert!((d.q(1, c(1.0, 0.0)).unwrap() - c(0.91, 0.0)).norm() < 1e-15);
        assert!(d.q(3, c(0.0, 0.0)).is_err());
    }

    #[test]
    fn lambda_trivial_cases() {
        let d = RootData::counting(4);
        for j in 1..=4 {
            assert_eq!(d.lambda(j, c(0.3, -0.1)).unwrap(), c(1.0, 0.0));
        }
        let d = RootData::weighted(3, 1.0, &[0.2, 0.0, 0.0]);
        assert!((d.lambda(1, c(1.0, 0.0)).unwrap().re - 0.2f64.exp()).abs() < 1e-15);
        let d = RootData::new(2, 0, 0.0, 1.0, vec![0.0; 2], vec![vec![c(0.0, 0.0)]]).unwrap();
        assert!((d.lambda(1, c(1.0, 0.0)).unwrap() - c(1.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn pole_identified() {
        let r = c(0.4, 0.1);
        let d = RootData::new(2, 0, 0.0, 1.0, vec![0.0; 2], vec![vec![r]]).unwrap();
        match d.lambda(1, r) {
            Err(CoreError::Pole { level, root, .. }) => {
                assert_eq!(level, 1);
                assert_eq!(root, r);
            }
            other => panic!("expected pole, got {other:?}"),
        }
    }

    #[test]
    fn validation() {
        assert!(RootData::new(3, 1, 0.1, 1.0, vec![0.0; 3], vec![vec![]; 2]).is_err());
        assert!(RootData::new(3, 2, 0.1, 1.0, vec![0.0; 2], vec![vec![]; 2]).is_err());
        assert!(RootData::new(3, 2, 0.1, 1.0, vec![0.0; 3], vec![vec![]; 3]).is_err());
    }
}
