//! Boundary-strip discretization in the gauge `Ã = (−t + t²κ(s)/2, 0)`.
//!
//! The form `∬ [a⁻²|(h∂_s − iζÃ₁)u|² + h²|∂_t u|²] a ds dt + c_∂ ∫ |u(s,0)|² ds` is
//! discretized on nodes `(s_i, t_j)`, `j < n_t`, with Peierls phases on `s`-edges, the
//! wrap edge carrying the flux twist, trapezoid weights in `t` and Dirichlet at `t_cut`.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{GroundMode, GroundState2D, MagRobinProblem};
use crate::error::{invalid, Error, Result};
use crate::geometry::{flux_twist, StripGrid};
use crate::linalg::{hermitian_smallest, HermitianSolve, HermitianSparse};
use crate::num::{cos, sin, sqrt};

/// Grid sizes as functions of `h`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StripPolicy {
    /// `t_cut = min(t0, depth·h^{1/2})`.
    pub depth: f64,
    /// Solves with `t_cut < min_depth·h^{1/2}` are rejected.
    pub min_depth: f64,
    /// `t`-nodes per `h^{1/2}`.
    pub t_points_per_scale: f64,
    /// Target `s`-spacing.
    pub s_spacing: f64,
    /// Repeat on the grid refined in both directions and extrapolate `(4λ_fine − λ)/3`.
    pub richardson: bool,
    /// Largest accepted mass in the deepest 10% of the strip.
    pub truncation_limit: f64,
    /// Absolute weighted residual demanded from the eigensolver.
    pub tol: f64,
}

impl Default for StripPolicy {
    fn default() -> Self {
        StripPolicy {
            depth: 15.0,
            min_depth: 12.0,
            t_points_per_scale: 10.0,
            s_spacing: 0.05,
            richardson: true,
            truncation_limit: 1e-8,
            tol: 1e-9,
        }
    }
}

impl StripPolicy {
    pub fn grid(&self, p: &MagRobinProblem) -> Result<StripGrid> {
        let g = &p.geometry;
        let scale = sqrt(p.h);
        let t_cut = g.t0().min(self.depth * scale);
        let n_t = (libm::ceil(t_cut / scale * self.t_points_per_scale) as usize).max(4);
        let mut n_s = (libm::ceil(g.perimeter() / self.s_spacing) as usize).max(8);
        n_s += n_s % 2;
        StripGrid::new(g, n_s, n_t, t_cut, flux_twist(g, p.h, p.zeta))
    }
}

/// Assembled pencil together with the grid it lives on.
#[derive(Debug, Clone)]
pub struct StripAssembly {
    pub grid: StripGrid,
    pub matrix: HermitianSparse,
}

/// Index of node `(i, j)`: `s` runs fastest.
fn node(grid: &StripGrid, i: usize, j: usize) -> usize {
    j * grid.n_s + i
}

pub fn assemble_strip(p: &MagRobinProblem, grid: &StripGrid) -> Result<StripAssembly> {
    let g = &p.geometry;
    if !(0.0..2.0 * core::f64::consts::PI).contains(&grid.twist) {
        return Err(invalid("twist must lie in [0, 2pi)"));
    }
    let (n_s, n_t) = (grid.n_s, grid.n_t);
    let (ds, dt) = (grid.ds(g), grid.dt());
    let h2 = p.h * p.h;
    let kappa_node: Vec<f64> = (0..n_s).map(|i| g.curvature(grid.s(g, i))).collect();
    let kappa_mid: Vec<f64> = (0..n_s).map(|i| g.curvature(grid.s(g, i) + 0.5 * ds)).collect();
    let metric = |kappa: f64, t: f64| 1.0 - t * kappa;

    let n = grid.unknowns();
    let mut weight = vec![0.0; n];
    let mut entries: Vec<(usize, usize, Complex64)> = Vec::with_capacity(5 * n);
    let real = |x: f64| Complex64::new(x, 0.0);
    for j in 0..n_t {
        let t = grid.t(j);
        let omega = if j == 0 { 0.5 * dt } else { dt };
        for i in 0..n_s {
            let a = metric(kappa_node[i], t);
            if !(a > 0.0) {
                return Err(invalid("metric factor must stay positive on the strip"));
            }
            weight[node(grid, i, j)] = ds * omega * a;
        }
        for i in 0..n_s {
            let a = metric(kappa_mid[i], t);
            if !(a > 0.0) {
                return Err(invalid("metric factor must stay positive on the strip"));
            }
            let c = omega * h2 / (ds * a);
            let potential = -t + 0.5 * t * t * kappa_mid[i];
            let mut phase = p.zeta * potential * ds / p.h;
            let (k, l) = (node(grid, i, j), node(grid, (i + 1) % n_s, j));
            if i + 1 == n_s {
                phase += grid.twist;
            }
            let z = Complex64::new(cos(phase), -sin(phase)) * (-c);
            entries.push((k, k, real(c)));
            entries.push((l, l, real(c)));
            entries.push((k, l, z));
            entries.push((l, k, z.conj()));
        }
        let t_mid = t + 0.5 * dt;
        for i in 0..n_s {
            let c = ds * metric(kappa_node[i], t_mid) * h2 / dt;
            let k = node(grid, i, j);
            entries.push((k, k, real(c)));
            if j + 1 < n_t {
                let l = node(grid, i, j + 1);
                entries.push((l, l, real(c)));
                entries.push((k, l, real(-c)));
                entries.push((l, k, real(-c)));
            }
        }
    }
    for i in 0..n_s {
        entries.push((node(grid, i, 0), node(grid, i, 0), real(p.boundary_coefficient * ds)));
    }
    let matrix = HermitianSparse::new(n, entries, Some(weight))?;
    Ok(StripAssembly { grid: *grid, matrix })
}

/// Shift near the bottom of the spectrum: `−c²/h² − κ_max|c|` is the Robin two-term
/// prediction for `c_∂ = −c`, raised by half the small-field diamagnetic shift.
fn default_shift(p: &MagRobinProblem) -> f64 {
    let h = p.h;
    let kappa = p.geometry.kappa_max().max(0.0);
    let c = p.boundary_coefficient.min(0.0).abs();
    let field = 0.5 * h * (0.25 * p.zeta * p.zeta).min(0.25);
    -c * c / (h * h) - kappa * c + field - 0.1 * c.max(h * h)
}

fn solve_on(p: &MagRobinProblem, grid: &StripGrid, tol: f64) -> Result<(StripAssembly, HermitianSolve)> {
    let asm = assemble_strip(p, grid)?;
    let solve = hermitian_smallest(&asm.matrix, 2, tol, Some(default_shift(p)))?;
    Ok((asm, solve))
}

/// Mass fraction in rows with `t ≥ 0.9 t_cut`.
fn deep_mass(asm: &StripAssembly, v: &[Complex64]) -> f64 {
    let grid = &asm.grid;
    let w = asm.matrix.weight();
    let deep = 0.9 * grid.t_cut;
    let mut total = 0.0;
    let mut tail = 0.0;
    for j in 0..grid.n_t {
        for i in 0..grid.n_s {
            let k = node(grid, i, j);
            let m = w[k] * v[k].norm_sqr();
            total += m;
            if grid.t(j) >= deep {
                tail += m;
            }
        }
    }
    tail / total
}

/// Ground state on the boundary strip.
///
/// Uses `p.strip` when set, otherwise the policy's grid. With `richardson` the eigenvalues
/// are extrapolated from the grid and its refinement; the returned vector lives on the
/// finer grid.
pub fn solve_strip(p: &MagRobinProblem, policy: &StripPolicy) -> Result<GroundState2D> {
    let grid = match p.strip {
        Some(g) => g,
        None => policy.grid(p)?,
    };
    if grid.t_cut < policy.min_depth * sqrt(p.h) * (1.0 - 1e-12) {
        return Err(invalid("strip depth below the configured multiple of h^{1/2}"));
    }
    let (asm, solve) = solve_on(p, &grid, policy.tol)?;
    let (asm, solve, raw, lambda1, lambda2) = if policy.richardson {
        let fine = StripGrid::new(&p.geometry, 2 * grid.n_s, 2 * grid.n_t, grid.t_cut, grid.twist)?;
        let (fa, fs) = solve_on(p, &fine, policy.tol)?;
        let ex = |c: f64, f: f64| (4.0 * f - c) / 3.0;
        let (l1, l2) = (ex(solve.pairs[0].value, fs.pairs[0].value), ex(solve.pairs[1].value, fs.pairs[1].value));
        let raw = fs.pairs[0].value;
        (fa, fs, raw, l1, l2)
    } else {
        let raw = solve.pairs[0].value;
        let l2 = solve.pairs[1].value;
        (asm, solve, raw, raw, l2)
    };
    let pair = &solve.pairs[0];
    let truncation_mass = deep_mass(&asm, &pair.vector);
    if truncation_mass > policy.truncation_limit {
        return Err(Error::Truncation { tail_mass: truncation_mass });
    }
    let residual = solve.pairs.iter().fold(0.0f64, |m, q| m.max(q.residual));
    Ok(GroundState2D {
        lambda1,
        lambda2,
        residual,
        truncation_mass,
        mode: GroundMode::Strip {
            grid: asm.grid,
            values: pair.vector.clone(),
            discrete_lambda1: raw,
            path: solve.path,
            dimension: asm.matrix.dim(),
        },
    })
}
