use serde::{Deserialize, Serialize};

use super::{minimize_over_window, RobinForm, SpectrumResult, WindowMinimum, DEFAULT_TOL};
use crate::error::{invalid, Result};
use crate::linalg::Grid1D;
use crate::num::{powf, powi, sqrt};

/// Choice of the potential correction `Δ(β, τ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaProfile {
    /// `h^{−1/2}[(1 − h^{1/2}) ã(τ)^{−2} − 1]`, the metric factor of boundary coordinates.
    Metric,
    Zero,
}

/// The operator `−ã⁻¹∂(ã∂) + (1 + h^{1/2}Δ)(ζτ(1 − βh^{1/2}τ/2) − ξ)²` on
/// `(0, h^{−δ})` with `ã = 1 − (β + m h^σ) h^{1/2} τ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightedParams {
    pub zeta: f64,
    pub beta: f64,
    pub xi: f64,
    pub h: f64,
    pub m: f64,
    pub sigma_w: f64,
    pub delta: f64,
    /// Bound constant in `|Δ| ≤ M(β + 1)τ`; informational.
    pub bound_m: f64,
    pub delta_profile: DeltaProfile,
}

impl WeightedParams {
    pub fn truncation(&self) -> f64 {
        powf(self.h, -self.delta)
    }

    /// Grid on `(0, h^{−δ})` with `n_points` nodes.
    pub fn grid(&self, n_points: usize) -> Result<Grid1D> {
        Grid1D::with_truncation(self.truncation(), n_points)
    }

    fn slope(&self) -> f64 {
        (self.beta + self.m * powf(self.h, self.sigma_w)) * sqrt(self.h)
    }

    /// The weight `ã(τ)`.
    pub fn weight(&self, tau: f64) -> f64 {
        1.0 - self.slope() * tau
    }

    pub fn delta_fn(&self, tau: f64) -> f64 {
        match self.delta_profile {
            DeltaProfile::Zero => 0.0,
            DeltaProfile::Metric => {
                let sh = sqrt(self.h);
                ((1.0 - sh) * powi(self.weight(tau), -2) - 1.0) / sh
            }
        }
    }

    pub fn potential(&self, tau: f64) -> f64 {
        let sh = sqrt(self.h);
        let a = self.zeta * tau * (1.0 - 0.5 * self.beta * sh * tau) - self.xi;
        (1.0 + sh * self.delta_fn(tau)) * a * a
    }

    fn validate(&self) -> Result<()> {
        let finite = [self.zeta, self.beta, self.xi, self.h, self.m, self.sigma_w, self.delta]
            .iter()
            .all(|x| x.is_finite());
        if !finite || !(self.h > 0.0 && self.h < 1.0) || !(self.zeta > 0.0) || self.m < 0.0 {
            return Err(invalid("weighted operator needs 0 < h < 1, zeta > 0, m >= 0"));
        }
        if !(self.sigma_w > 0.0 && self.sigma_w < 1.0) || !(self.delta > 0.0 && self.delta < 0.5) {
            return Err(invalid("weighted operator needs sigma in (0,1) and delta in (0,1/2)"));
        }
        if !(self.beta.abs() * powf(self.h, 0.5 - self.delta) < 1.0 / 3.0) {
            return Err(invalid("|beta| h^(1/2 - delta) must stay below 1/3"));
        }
        if !(self.weight(self.truncation()) > 0.0) {
            return Err(invalid("weight 1 - (beta + m h^sigma) h^(1/2) tau must stay positive"));
        }
        Ok(())
    }
}

/// Lowest `k` eigenvalues of the weighted operator in `L²(ã dτ)`, Dirichlet at
/// `τ = h^{−δ}`. `grid` must span exactly that interval.
pub fn solve_weighted(p: WeightedParams, grid: Grid1D, k: usize) -> Result<SpectrumResult> {
    p.validate()?;
    let t = p.truncation();
    if (grid.truncation() - t).abs() > 1e-9 * t {
        return Err(invalid("grid truncation must equal h^(-delta)"));
    }
    let form = RobinForm::weighted(grid, |x| p.weight(x), |x| p.weight(x), |x| p.potential(x), 1.0)?;
    form.solve(k, DEFAULT_TOL, false)
}

/// `min_ξ λ₁` of the weighted operator; `p.xi` is ignored.
pub fn weighted_lambda1_over_xi(p: WeightedParams, grid: Grid1D) -> Result<WindowMinimum> {
    let step = (p.zeta / 50.0).min(0.01);
    let window = (-p.zeta - 0.02, 2.0 * p.zeta + 0.02);
    minimize_over_window(
        |xi| Ok(solve_weighted(WeightedParams { xi, ..p }, grid, 1)?.values[0]),
        window,
        step,
        1e-8,
        None,
    )
}
