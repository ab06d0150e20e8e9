//! Half-line model operators.
//!
//! Every operator here is the Friedrichs extension of a form
//!
//! ```text
//! q(u) = ∫₀ᵀ (a |u'|² + ρ V |u|²) dτ − γ |u(0)|²,    ‖u‖² = ∫₀ᵀ ρ |u|² dτ,
//! ```
//!
//! with a Dirichlet cut at `τ = T`. [`RobinForm`] discretizes such a form with lumped
//! trapezoid weights, which reproduces the second-order ghost-point stencil for the
//! natural condition `a(0) u'(0) = −γ u(0)`.

mod harm;
mod theta;
mod weighted;

pub use harm::{find_a0, ground_state_h00, lambda_h00, mu_shifted_osc, solve_harm, A0Result, H00Result, HarmParams};
pub use theta::{minimize_over_window, theta, ThetaParams, ThetaResult, WindowMinimum};
pub use weighted::{solve_weighted, weighted_lambda1_over_xi, DeltaProfile, WeightedParams};

use alloc::vec;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::{smallest_eigenpairs, Grid1D, SymTridiagonal};

/// Default eigenvector residual tolerance for 1D solves.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Lowest eigenpairs of a half-line operator, sampled on the full grid (the Dirichlet
/// node carries an explicit zero).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    pub grid: Grid1D,
    /// Nondecreasing.
    pub values: Vec<f64>,
    /// Unit norm in the weighted measure `weights`.
    pub vectors: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
    /// Quadrature weights times the mass density at every node.
    pub weights: Vec<f64>,
    /// Fraction of the ground state's mass on the last 10% of nodes.
    pub tail_mass: f64,
}

impl SpectrumResult {
    pub fn lambda1(&self) -> f64 {
        self.values[0]
    }

    pub fn inner(&self, u: &[f64], v: &[f64]) -> f64 {
        u.iter().zip(v).zip(&self.weights).map(|((a, b), w)| a * b * w).sum()
    }
}

/// A discretized half-line form, see the module docs.
#[derive(Debug, Clone)]
pub struct RobinForm {
    grid: Grid1D,
    /// `a` at the midpoints `τ_{k+1/2}`, length `n − 1`.
    stiffness: Vec<f64>,
    /// `ρ` at the nodes.
    density: Vec<f64>,
    /// `V` at the nodes.
    potential: Vec<f64>,
    robin: f64,
}

impl RobinForm {
    /// Unit stiffness and density.
    pub fn plain<V: Fn(f64) -> f64>(grid: Grid1D, potential: V, robin: f64) -> Self {
        Self::weighted(grid, |_| 1.0, |_| 1.0, potential, robin).expect("unit weights are positive")
    }

    pub fn weighted<A, R, V>(grid: Grid1D, stiffness: A, density: R, potential: V, robin: f64) -> Result<Self>
    where
        A: Fn(f64) -> f64,
        R: Fn(f64) -> f64,
        V: Fn(f64) -> f64,
    {
        let n = grid.n_points();
        let dt = grid.spacing();
        let stiffness: Vec<f64> = (0..n - 1).map(|k| stiffness((k as f64 + 0.5) * dt)).collect();
        let density: Vec<f64> = (0..n).map(|k| density(grid.node(k))).collect();
        let potential: Vec<f64> = (0..n).map(|k| potential(grid.node(k))).collect();
        if stiffness.iter().chain(&density).any(|x| !(*x > 0.0) || !x.is_finite()) {
            return Err(invalid("form weights must be positive on the grid"));
        }
        if potential.iter().any(|v| !v.is_finite()) || !robin.is_finite() {
            return Err(invalid("potential and boundary coupling must be finite"));
        }
        Ok(RobinForm { grid, stiffness, density, potential, robin })
    }

    pub fn grid(&self) -> Grid1D {
        self.grid
    }

    /// Trapezoid weight times density at every node, including the Dirichlet node.
    pub fn weights(&self) -> Vec<f64> {
        let n = self.grid.n_points();
        let dt = self.grid.spacing();
        (0..n)
            .map(|k| {
                let q = if k == 0 || k == n - 1 { 0.5 * dt } else { dt };
                q * self.density[k]
            })
            .collect()
    }

    /// Pencil on the free nodes `0..n−1`.
    pub fn to_tridiagonal(&self) -> SymTridiagonal {
        let m = self.grid.n_points() - 1;
        let dt = self.grid.spacing();
        let w = self.weights();
        let mut diag = vec![0.0; m];
        let mut off = vec![0.0; m - 1];
        for k in 0..m {
            let left = if k > 0 { self.stiffness[k - 1] } else { 0.0 };
            diag[k] = (left + self.stiffness[k]) / dt + w[k] * self.potential[k];
            if k + 1 < m {
                off[k] = -self.stiffness[k] / dt;
            }
        }
        diag[0] -= self.robin;
        SymTridiagonal::new(diag, off, Some(w[..m].to_vec())).expect("assembled pencil is valid")
    }

    /// `q(u)` for a full-grid vector; differences are formed directly so that the
    /// kinetic part carries no cancellation against the diagonal.
    pub fn energy(&self, u: &[f64]) -> f64 {
        let dt = self.grid.spacing();
        let w = self.weights();
        let mut e = -self.robin * u[0] * u[0];
        for k in 0..u.len() - 1 {
            let d = u[k + 1] - u[k];
            e += self.stiffness[k] * d * d / dt;
        }
        for k in 0..u.len() {
            e += w[k] * self.potential[k] * u[k] * u[k];
        }
        e
    }

    /// Lowest `k` eigenpairs; eigenvalues are re-evaluated as Rayleigh quotients of
    /// [`RobinForm::energy`]. With `check_tail`, a ground state with more than `1e-8`
    /// of its mass on the last 10% of the grid is rejected.
    pub fn solve(&self, k: usize, tol: f64, check_tail: bool) -> Result<SpectrumResult> {
        let n = self.grid.n_points();
        let pairs = smallest_eigenpairs(&self.to_tridiagonal(), k, tol)?;
        let weights = self.weights();
        let mut values = Vec::with_capacity(k);
        let mut vectors = Vec::with_capacity(k);
        let mut residuals = Vec::with_capacity(k);
        for p in pairs {
            let mut v = p.vector;
            v.push(0.0);
            let nrm: f64 = v.iter().zip(&weights).map(|(x, w)| x * x * w).sum();
            values.push(self.energy(&v) / nrm);
            vectors.push(v);
            residuals.push(p.residual);
        }
        let tail_start = n - n.div_ceil(10);
        let u = &vectors[0];
        let tail_mass: f64 = (tail_start..n).map(|i| u[i] * u[i] * weights[i]).sum();
        if check_tail && tail_mass > 1e-8 {
            return Err(Error::Truncation { tail_mass });
        }
        Ok(SpectrumResult { grid: self.grid, values, vectors, residuals, weights, tail_mass })
    }

    /// Lowest eigenvalue only, from bisection.
    pub fn lowest_value(&self) -> f64 {
        self.to_tridiagonal().smallest_eigenvalues(1)[0]
    }
}

/// One-level Richardson extrapolation for a second-order quantity: `(4 f(Δ/2) − f(Δ)) / 3`.
pub fn richardson(coarse: f64, fine: f64) -> f64 {
    (4.0 * fine - coarse) / 3.0
}
