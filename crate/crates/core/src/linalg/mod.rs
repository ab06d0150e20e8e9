//! Eigensolvers that the model operators reduce to.
//!
//! All matrices describe generalized pencils `K u = λ W u` with a positive diagonal mass
//! `W`, i.e. the operator `A = W⁻¹K` that is self-adjoint for `⟨u,v⟩ = Σ u_k v̄_k w_k`.

mod band;
mod dense;
mod hermitian;
mod tridiag;

pub use band::BandLdl;
pub use dense::hermitian_jacobi;
pub use hermitian::{hermitian_smallest, HermitianSolve, HermitianSparse, SolvePath};
pub use tridiag::{deflated_solve, smallest_eigenpairs, DeflatedSolution, SymTridiagonal};
pub(crate) use tridiag::TriLu;

use crate::error::{invalid, Result};
use serde::{Deserialize, Serialize};

/// Uniform grid `τ_k = k·spacing`, `k = 0..n_points`, on `[0, T]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    n_points: usize,
    spacing: f64,
}

impl Grid1D {
    pub fn new(n_points: usize, spacing: f64) -> Result<Self> {
        if n_points < 3 {
            return Err(invalid("Grid1D needs at least 3 points"));
        }
        if !(spacing > 0.0) || !spacing.is_finite() {
            return Err(invalid("Grid1D spacing must be positive"));
        }
        Ok(Grid1D { n_points, spacing })
    }

    /// Grid with `n_points` nodes spanning `[0, truncation]`.
    pub fn with_truncation(truncation: f64, n_points: usize) -> Result<Self> {
        if n_points < 3 {
            return Err(invalid("Grid1D needs at least 3 points"));
        }
        Self::new(n_points, truncation / (n_points - 1) as f64)
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn truncation(&self) -> f64 {
        (self.n_points - 1) as f64 * self.spacing
    }

    pub fn node(&self, k: usize) -> f64 {
        k as f64 * self.spacing
    }

    /// Same truncation, spacing halved.
    pub fn refined(&self) -> Self {
        Grid1D { n_points: 2 * self.n_points - 1, spacing: 0.5 * self.spacing }
    }
}

/// An eigenvalue with its eigenvector (unit norm in the pencil's weighted inner product)
/// and the weighted residual `‖A v − λ v‖ / ‖v‖`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair<T> {
    pub value: f64,
    pub vector: alloc::vec::Vec<T>,
    pub residual: f64,
}
