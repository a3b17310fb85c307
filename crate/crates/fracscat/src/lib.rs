//! Numerical laboratory for scattering governed by the fractional Helmholtz
//! operator `(-Δ)^s - k^{2s}` with a compactly supported real potential.
//!
//! The crate is organized bottom-up:
//!
//! - [`specfun`]: real special functions (Gamma, Bessel J/K, sphere kernel).
//! - [`greens`]: fundamental solutions by several independent routes, plus
//!   the principal-value and spectral-decomposition quadrature engines.
//! - [`spectral`]: periodic-grid Fourier multipliers, solution construction,
//!   band projections and resolvent norm scans.
//! - [`forward`]: Lippmann-Schwinger solver for the total field and
//!   radiation-condition diagnostics.
//! - [`farfield`]: scattering amplitudes, asymptotic matching, symmetry checks.
//! - [`born`]: high-frequency Born inversion of far-field data.
//! - [`io`]: binary/CSV dataset formats.
//! - [`verify`]: the acceptance suite shared by tests and the CLI.

pub mod born;
pub mod error;
pub mod farfield;
pub mod forward;
pub mod greens;
pub mod io;
pub mod specfun;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
