//! Numerical side of the sl(n) finite-temperature toolkit: the FFT-based
//! solver of the non-linear integral equations, thermodynamic observables,
//! brute-force oracles (exact diagonalization, finite-Trotter quantum
//! transfer matrix, Yang-Baxter) and the verification suites driven by the
//! `sln` binary.

pub mod error;
pub mod nlie;
pub mod oracle;
pub mod thermo;
pub mod verify;

pub use error::{Result, ThermoError};
pub use nlie::{Grid, NlieParams, NlieState, NlieSystem};
pub use thermo::{ThermoOptions, ThermoPoint};
