//! Spectral kernels for the magnetic Laplacian with an attractive Robin boundary form.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only deterministic numerics:
//!
//! * [`linalg`]: symmetric tridiagonal and sparse Hermitian eigensolvers, deflated solves.
//! * [`model`]: the half-line Robin operators (Robin Laplacian, shifted oscillators, the
//!   de Gennes type function `Θ(γ)`, the weighted boundary-layer family).
//! * [`series`]: the Rayleigh–Schrödinger table `μ_{j,p}`, `λ_n`, `f_n`, `e_n` and the
//!   exponent bundles that govern each `ζ = c·h^ε` regime.
//! * [`geometry`]: arc-length boundary parametrizations, curvature, strip gauge and flux twist.
//! * [`solver2d`]: disk (angular reduction) and boundary-strip ground-state solvers plus
//!   variational trial-state energies.
//!
//! IO, sweeps, fitting and the command line live in the `magrobin` crate.
#![no_std]
#![deny(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
pub mod num;

pub mod geometry;
pub mod linalg;
pub mod model;
pub mod series;
pub mod solver2d;

pub use error::{Error, Result};
pub use num_complex::Complex64;
