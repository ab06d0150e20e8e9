//! Rayleigh–Schrödinger expansion of the Robin oscillator `−d²/dτ² + (ζτ − ξ)²` around
//! the half-line ground state, and the exponent bookkeeping that goes with it.
//!
//! The eigenvalue expands as `λ₀ + Σ_{j≥1} Σ_{p=0}^{2j} μ_{j,p} ζ^{2j−p} ξ^p`; only even
//! total degrees occur because the perturbation `ζ²τ² − 2ζξτ + ξ²` is homogeneous of
//! degree two.

mod regime;
mod table;

pub use regime::{regime_exponents, smallest_n_for_eps, BEpsKind, RegimeExponents};
pub use table::{build_table, PerturbationTable};

use alloc::vec;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::model::{minimize_over_window, WindowMinimum};
use crate::num::powi;

/// The coefficients `μ_{j,p}`, `mu[j−1][p]` for `1 ≤ j ≤ n`, `0 ≤ p ≤ 2j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesCoefficients {
    pub mu: Vec<Vec<f64>>,
}

impl SeriesCoefficients {
    pub fn new(mu: Vec<Vec<f64>>) -> Result<Self> {
        if mu.is_empty() {
            return Err(invalid("series needs at least one order"));
        }
        for (j, row) in mu.iter().enumerate() {
            if row.len() != 2 * j + 3 {
                return Err(invalid("order j needs 2j + 1 coefficients"));
            }
        }
        Ok(SeriesCoefficients { mu })
    }

    /// The closed-form first order `(1/2, −1, 1)`.
    pub fn first_order() -> Self {
        SeriesCoefficients { mu: vec![vec![0.5, -1.0, 1.0]] }
    }

    pub fn order(&self) -> usize {
        self.mu.len()
    }

    pub fn get(&self, j: usize, p: usize) -> f64 {
        self.mu[j - 1][p]
    }

    /// The first `n` orders.
    pub fn truncated(&self, n: usize) -> Self {
        SeriesCoefficients { mu: self.mu[..n.min(self.mu.len())].to_vec() }
    }

    /// `(4 c_fine − c_coarse) / 3` entrywise.
    pub fn richardson(coarse: &Self, fine: &Self) -> Result<Self> {
        if coarse.order() != fine.order() {
            return Err(invalid("Richardson needs tables of equal order"));
        }
        let mu = coarse
            .mu
            .iter()
            .zip(&fine.mu)
            .map(|(c, f)| c.iter().zip(f).map(|(a, b)| crate::model::richardson(*a, *b)).collect())
            .collect();
        Ok(SeriesCoefficients { mu })
    }

    /// `Σ_j Σ_p μ_{j,p} ζ^{2j−p} ξ^p`.
    pub fn correction(&self, zeta: f64, xi: f64) -> f64 {
        let mut s = 0.0;
        for (j0, row) in self.mu.iter().enumerate() {
            let deg = 2 * (j0 + 1) as i32;
            for (p, m) in row.iter().enumerate() {
                s += m * powi(zeta, deg - p as i32) * powi(xi, p as i32);
            }
        }
        s
    }
}

/// `λ_n(ζ, ξ) = −1 + Σ μ_{j,p} ζ^{2j−p} ξ^p`.
pub fn lambda_series(c: &SeriesCoefficients, zeta: f64, xi: f64) -> f64 {
    -1.0 + c.correction(zeta, xi)
}

/// `f_n = λ_n + 1`, the full correction sum starting at `j = 1`.
pub fn f_n(c: &SeriesCoefficients, zeta: f64, xi: f64) -> f64 {
    c.correction(zeta, xi)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnResult {
    pub value: f64,
    pub xi_star: f64,
    pub search: WindowMinimum,
}

/// `e_n(ζ) = min { f_n(ζ, ξ) : |ξ| ≤ ζ max(A₀, 1) }`.
pub fn e_n(c: &SeriesCoefficients, zeta: f64, a0: f64) -> Result<EnResult> {
    if !(zeta > 0.0 && zeta < 1.0) {
        return Err(invalid("e_n needs 0 < zeta < 1"));
    }
    let r = zeta * a0.max(1.0);
    let search = minimize_over_window(|xi| Ok(f_n(c, zeta, xi)), (-r, r), r / 200.0, 1e-12, Some((-r, r)))?;
    Ok(EnResult { value: search.value, xi_star: search.argmin, search })
}
