//! Core algebra for finite-temperature sl(n) spin chains.
//!
//! Everything here is `no_std` with `alloc`: Yangian tableaux built from
//! Bethe-ansatz data, the canonical auxiliary functions, pole-cancellation
//! structure, and the Fourier-space kernels of the integral equations for
//! n = 4 and n = 5. The numerical solver lives in the `sln-thermo` crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod auxiliary;
pub mod bethe;
pub mod error;
pub mod kernels;
pub mod linalg;
pub mod roots;
pub mod spectral;
pub mod special;
pub mod tableau;

pub use error::{CoreError, Result};
pub use num_complex::Complex64 as C64;
pub use roots::RootData;
pub use tableau::{Cell, RangeTableau, Relation};

/// Relative residual `|a - b| / (1 + |a|)` used by every identity check.
pub fn rel_residual(a: C64, b: C64) -> f64 {
    (a - b).norm() / (1.0 + a.norm())
}

/// Binomial coefficient for the small arguments used here.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}
