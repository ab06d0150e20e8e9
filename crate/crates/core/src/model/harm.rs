use alloc::format;
use serde::{Deserialize, Serialize};

use super::{richardson, RobinForm, SpectrumResult, DEFAULT_TOL};
use crate::error::{invalid, Error, Result};
use crate::linalg::Grid1D;
use crate::num::{exp, sqrt};

/// Field strength `ζ` and momentum `ξ` of the oscillator `−d²/dτ² + (ζτ − ξ)²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HarmParams {
    pub zeta: f64,
    pub xi: f64,
}

/// The Robin ground state `√2 e^{−τ}` of `−d²/dτ²` with `u'(0) = −u(0)`.
pub fn ground_state_h00(tau: f64) -> f64 {
    sqrt(2.0) * exp(-tau)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct H00Result {
    /// The exact eigenvalue, `−1`.
    pub value: f64,
    pub discrete: SpectrumResult,
    /// Discrete eigenvalue on the grid with halved spacing.
    pub refined_value: f64,
    pub extrapolated: f64,
    /// `|⟨u, u₀⟩| / (‖u‖ ‖u₀‖)` against the sampled exact ground state.
    pub overlap: f64,
}

/// The half-line Robin Laplacian: exact ground pair plus a discrete cross-check on `grid`
/// and on its refinement.
pub fn lambda_h00(grid: Grid1D) -> Result<H00Result> {
    let coarse = RobinForm::plain(grid, |_| 0.0, 1.0).solve(1, DEFAULT_TOL, true)?;
    let fine = RobinForm::plain(grid.refined(), |_| 0.0, 1.0).solve(1, DEFAULT_TOL, true)?;
    let exact: alloc::vec::Vec<f64> = (0..grid.n_points()).map(|k| ground_state_h00(grid.node(k))).collect();
    let u = &coarse.vectors[0];
    let overlap = coarse.inner(u, &exact).abs() / sqrt(coarse.inner(u, u) * coarse.inner(&exact, &exact));
    Ok(H00Result {
        value: -1.0,
        refined_value: fine.values[0],
        extrapolated: richardson(coarse.values[0], fine.values[0]),
        overlap,
        discrete: coarse,
    })
}

/// Lowest `k` eigenvalues of `−d²/dτ² + (ζτ − ξ)²` with `u'(0) = −u(0)`.
pub fn solve_harm(p: HarmParams, grid: Grid1D, k: usize) -> Result<SpectrumResult> {
    if !(p.zeta > 0.0) || !p.xi.is_finite() {
        return Err(invalid("the oscillator needs zeta > 0 and finite xi"));
    }
    let (z, x) = (p.zeta, p.xi);
    RobinForm::plain(grid, |t| (z * t - x) * (z * t - x), 1.0).solve(k, DEFAULT_TOL, true)
}

/// Lowest eigenvalue of `−d²/dτ² + (τ − A)²` whose form carries `−γ |u(0)|²`.
pub fn mu_shifted_osc(shift: f64, robin_gamma: f64, grid: Grid1D) -> Result<f64> {
    if !shift.is_finite() || !robin_gamma.is_finite() {
        return Err(invalid("shift and boundary coupling must be finite"));
    }
    let form = RobinForm::plain(grid, |t| (t - shift) * (t - shift), robin_gamma);
    Ok(form.solve(1, DEFAULT_TOL, true)?.values[0])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct A0Result {
    /// Smallest `A₀ ≥ 0` with `μ(A) ≥ 1/2` whenever `|A| ≥ A₀`.
    pub a0: f64,
    pub mu_at_zero: f64,
    pub mu_at_a0: f64,
}

const A0_STEP: f64 = 0.05;
const A0_SCAN_END: f64 = 10.0;

/// Threshold beyond which the Robin oscillator energy `μ(±A)` stays above `1/2`.
///
/// Scans `A ≥ 0` in steps of 0.05, then bisects the last crossing of
/// `min(μ(A), μ(−A)) = 1/2` to `1e−7`.
pub fn find_a0(grid: Grid1D) -> Result<A0Result> {
    let g = |a: f64| -> Result<f64> {
        Ok(mu_shifted_osc(a, 1.0, grid)?.min(mu_shifted_osc(-a, 1.0, grid)?) - 0.5)
    };
    let steps = (A0_SCAN_END / A0_STEP) as usize;
    let mu_at_zero = mu_shifted_osc(0.0, 1.0, grid)?;
    let mut last_below: Option<usize> = None;
    for i in 0..=steps {
        if g(i as f64 * A0_STEP)? < 0.0 {
            last_below = Some(i);
        }
    }
    let Some(i) = last_below else {
        return Ok(A0Result { a0: 0.0, mu_at_zero, mu_at_a0: mu_at_zero });
    };
    if i == steps {
        return Err(Error::ScanExhausted(format!(
            "mu(A) still below 1/2 at A = {A0_SCAN_END}"
        )));
    }
    let (mut lo, mut hi) = (i as f64 * A0_STEP, (i + 1) as f64 * A0_STEP);
    while hi - lo > 1e-7 {
        let mid = 0.5 * (lo + hi);
        if g(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(A0Result { a0: hi, mu_at_zero, mu_at_a0: mu_shifted_osc(hi, 1.0, grid)? })
}
