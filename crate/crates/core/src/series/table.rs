use alloc::vec;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use super::SeriesCoefficients;
use crate::error::{invalid, Error, Result};
use crate::linalg::{deflated_solve, Grid1D};
use crate::model::{RobinForm, DEFAULT_TOL};
use crate::num::{powi, sqrt};

/// Coefficients and correctors of the expansion, built on one grid.
///
/// `correctors[j−1][p]` is the grid function multiplying `ζ^{2j−p} ξ^p` in the quasi-mode,
/// sampled on the full grid (zero at the Dirichlet node) and orthogonal to `ground`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbationTable {
    pub order: usize,
    pub grid: Grid1D,
    /// Discrete ground energy of the unperturbed operator; `−1` up to `O(Δ²)`.
    pub base_level: f64,
    pub coefficients: SeriesCoefficients,
    pub correctors: Vec<Vec<Vec<f64>>>,
    /// Discrete unperturbed ground state, unit in the trapezoid norm.
    pub ground: Vec<f64>,
}

struct Builder<'a> {
    order_done: &'a [Vec<Vec<f64>>],
    ground: &'a [f64],
}

impl Builder<'_> {
    /// Corrector of the monomial `ζ^a ξ^b`, if nonzero.
    fn get(&self, a: i64, b: i64) -> Option<&[f64]> {
        if a < 0 || b < 0 || (a + b) % 2 == 1 {
            return None;
        }
        let deg = (a + b) as usize;
        if deg == 0 {
            return Some(self.ground);
        }
        self.order_done.get(deg / 2 - 1).map(|row| row[b as usize].as_slice())
    }
}

/// Builds the expansion to order `n` on `grid` (Robin condition at 0, Dirichlet at the end).
///
/// At total degree `2j` and monomial `ζ^a ξ^b` the source is
/// `v = τ² u_{a−2,b} − 2τ u_{a−1,b−1} + u_{a,b−2} − Σ μ_{c,d} u_{a−c,b−d}` over lower
/// nonzero degrees; then `μ_{a,b} = ⟨v, u₀⟩` and `u_{a,b}` solves `(H₀ − λ₀) u = μ u₀ − v`
/// with `u ⊥ u₀`.
pub fn build_table(n: usize, grid: Grid1D) -> Result<PerturbationTable> {
    if n == 0 {
        return Err(invalid("order must be positive"));
    }
    let unperturbed = RobinForm::plain(grid, |_| 0.0, 1.0);
    let ground_state = unperturbed.solve(1, DEFAULT_TOL, true)?;
    let base_level = ground_state.values[0];
    let m = grid.n_points() - 1;
    let weights = unperturbed.weights();
    let w = &weights[..m];
    let mut u0: Vec<f64> = ground_state.vectors[0][..m].to_vec();
    let nrm = sqrt(u0.iter().zip(w).map(|(x, wi)| x * x * wi).sum());
    u0.iter_mut().for_each(|x| *x /= nrm);
    let shifted = RobinForm::plain(grid, |_| -base_level, 1.0).to_tridiagonal();
    let dot = |x: &[f64], y: &[f64]| -> f64 { x.iter().zip(y).zip(w).map(|((a, b), c)| a * b * c).sum() };
    let tau: Vec<f64> = (0..m).map(|k| grid.node(k)).collect();

    let mut mu_all: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut corr: Vec<Vec<Vec<f64>>> = Vec::with_capacity(n);
    for j in 1..=n {
        let deg = 2 * j as i64;
        let mut mu_row = Vec::with_capacity(2 * j + 1);
        let mut u_row = Vec::with_capacity(2 * j + 1);
        for p in 0..=deg {
            let (a, b) = (deg - p, p);
            let bld = Builder { order_done: &corr, ground: &u0 };
            let mut v = vec![0.0; m];
            if let Some(u) = bld.get(a - 2, b) {
                for k in 0..m {
                    v[k] += tau[k] * tau[k] * u[k];
                }
            }
            if let Some(u) = bld.get(a - 1, b - 1) {
                for k in 0..m {
                    v[k] -= 2.0 * tau[k] * u[k];
                }
            }
            if let Some(u) = bld.get(a, b - 2) {
                for k in 0..m {
                    v[k] += u[k];
                }
            }
            for jl in 1..j {
                let dl = 2 * jl as i64;
                for d in 0..=dl {
                    let c = dl - d;
                    if c > a || d > b {
                        continue;
                    }
                    if let Some(u) = bld.get(a - c, b - d) {
                        let coef = mu_all[jl - 1][d as usize];
                        for k in 0..m {
                            v[k] -= coef * u[k];
                        }
                    }
                }
            }
            let mu = dot(&v, &u0);
            let rhs: Vec<f64> = v.iter().map(|x| -x).collect();
            let sol = deflated_solve(&shifted, &u0, &rhs)?;
            let overlap = dot(&sol.solution, &u0);
            if overlap.abs() > 1e-8 {
                return Err(Error::Orthogonality { overlap });
            }
            mu_row.push(mu);
            u_row.push(sol.solution);
        }
        mu_all.push(mu_row);
        corr.push(u_row);
    }
    let pad = |mut x: Vec<f64>| {
        x.push(0.0);
        x
    };
    let correctors = corr.into_iter().map(|row| row.into_iter().map(pad).collect()).collect();
    Ok(PerturbationTable {
        order: n,
        grid,
        base_level,
        coefficients: SeriesCoefficients { mu: mu_all },
        correctors,
        ground: pad(u0),
    })
}

impl PerturbationTable {
    /// `λ₀ + Σ μ ζ^{2j−p} ξ^p` with the discrete base level, i.e. the expansion of the
    /// discrete eigenvalue on this table's grid.
    pub fn discrete_series(&self, zeta: f64, xi: f64) -> f64 {
        self.base_level + self.coefficients.correction(zeta, xi)
    }

    /// Quasi-mode `w_n = u₀ + Σ ζ^{2j−p} ξ^p u_{j,p}` on the full grid.
    pub fn quasimode(&self, zeta: f64, xi: f64) -> Vec<f64> {
        self.quasimode_to(self.order, zeta, xi)
    }

    /// Quasi-mode truncated at order `n ≤ self.order`.
    pub fn quasimode_to(&self, n: usize, zeta: f64, xi: f64) -> Vec<f64> {
        let mut w = self.ground.clone();
        for (j0, row) in self.correctors.iter().take(n).enumerate() {
            let deg = 2 * (j0 + 1) as i32;
            for (p, u) in row.iter().enumerate() {
                let c = powi(zeta, deg - p as i32) * powi(xi, p as i32);
                for (wk, uk) in w.iter_mut().zip(u) {
                    *wk += c * uk;
                }
            }
        }
        w
    }

    /// Value of the quasi-mode at an arbitrary `τ` by linear interpolation (zero beyond
    /// the grid).
    pub fn quasimode_at(&self, w: &[f64], tau: f64) -> f64 {
        let dt = self.grid.spacing();
        let x = tau / dt;
        if !(x >= 0.0) || x >= (w.len() - 1) as f64 {
            return 0.0;
        }
        let k = x as usize;
        let f = x - k as f64;
        (1.0 - f) * w[k] + f * w[k + 1]
    }

    /// `‖(H_harm − λ) w‖ / ‖w‖` for the quasi-mode at `(ζ, ξ)` with the discrete series
    /// value `λ`, in the trapezoid norm.
    pub fn quasimode_residual(&self, zeta: f64, xi: f64) -> f64 {
        let form = RobinForm::plain(self.grid, |t| (zeta * t - xi) * (zeta * t - xi), 1.0);
        let a = form.to_tridiagonal();
        let m = a.dim();
        let w = self.quasimode(zeta, xi);
        let lam = self.discrete_series(zeta, xi);
        let aw = a.apply(&w[..m]);
        let r: Vec<f64> = aw.iter().zip(&w).map(|(x, y)| x - lam * y).collect();
        a.norm(&r) / a.norm(&w[..m])
    }
}
