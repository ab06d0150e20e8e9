//! Scaling bridges between the Robin magnetic problem with parameters `(h, b, α, γ)`
//!
//! `∫ |(h∇ − ibA)u|² + h^{1+α}γ ∫_{∂Ω} |u|²`
//!
//! and the normalized problem with field `ζ` and boundary coefficient `−h'^{3/2}`:
//! `μ₁(h; b, α, γ) = γ⁴ h^{4α−2} λ₁(h', ζ)` with `h' = h^{2−2α}/γ²`, `ζ = b h^{1−2α}/γ²`.

use serde::{Deserialize, Serialize};

use magrobin_core::geometry::DomainGeometry;
use magrobin_core::series::{e_n, regime_exponents, SeriesCoefficients};
use magrobin_core::solver2d::{solve_disk, DiskGrid, MagRobinProblem};

use crate::error::{AppError, AppResult};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RobinMagParams {
    pub h: f64,
    pub b: f64,
    pub alpha: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BridgeDerived {
    pub h_prime: f64,
    pub zeta: f64,
    /// `(1 − 2α) / (2(1 − α))`, so that `ζ ∝ h'^ε`.
    pub epsilon: f64,
    /// `γ⁴ h^{4α−2}`.
    pub prefactor: f64,
}

impl RobinMagParams {
    pub fn new(h: f64, b: f64, alpha: f64, gamma: f64) -> AppResult<Self> {
        if !(h > 0.0) || !(b > 0.0) || !alpha.is_finite() || alpha == 1.0 || !(gamma != 0.0) || !gamma.is_finite() {
            return Err(AppError::Config("bridge needs h > 0, b > 0, finite alpha != 1 and gamma != 0".into()));
        }
        Ok(RobinMagParams { h, b, alpha, gamma })
    }

    pub fn derived(&self) -> BridgeDerived {
        let (h, a, g) = (self.h, self.alpha, self.gamma);
        BridgeDerived {
            h_prime: h.powf(2.0 - 2.0 * a) / (g * g),
            zeta: self.b * h.powf(1.0 - 2.0 * a) / (g * g),
            epsilon: (1.0 - 2.0 * a) / (2.0 * (1.0 - a)),
            prefactor: g.powi(4) * h.powf(4.0 * a - 2.0),
        }
    }

    /// Parameters of `b² μ₁(h/b; 1, α, b^{α−1}γ)`, which must give the same value.
    pub fn unit_field(&self) -> (f64, Self) {
        let b = self.b;
        (b * b, RobinMagParams { h: self.h / b, b: 1.0, alpha: self.alpha, gamma: self.gamma * b.powf(self.alpha - 1.0) })
    }

    /// Boundary coefficient `h^{1+α}γ` of the original form.
    pub fn boundary_coefficient(&self) -> f64 {
        self.h.powf(1.0 + self.alpha) * self.gamma
    }

    /// Expansion of `μ₁` for `α < 1/2`, `γ < 0` (three cases split at `α = 1/3`).
    pub fn predicted(&self, kappa_max: f64, series: Option<(&SeriesCoefficients, f64)>) -> AppResult<f64> {
        let (h, a, g, b) = (self.h, self.alpha, self.gamma, self.b);
        if !(a < 0.5 && g < 0.0) {
            return Err(AppError::Config("the expansion needs alpha < 1/2 and gamma < 0".into()));
        }
        let lead = -g * g * h.powf(2.0 * a);
        let curvature = g * kappa_max * h.powf(1.0 + a);
        let third = 1.0 / 3.0;
        if (a - third).abs() < 1e-12 {
            Ok(-g * g * h.powf(2.0 / 3.0) + (b * b / (4.0 * g * g) + g * kappa_max) * h.powf(4.0 / 3.0))
        } else if a > third {
            let d = self.derived();
            let reg = regime_exponents(d.epsilon)?;
            let (c, a0) = series.ok_or_else(|| AppError::Config("e_n needs the series".into()))?;
            let e = e_n(&c.truncated(reg.n), d.zeta, a0)?.value;
            Ok(lead + e * g * g * h.powf(2.0 * a) + curvature)
        } else {
            Ok(lead + curvature)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BridgeResult {
    pub mu1: f64,
    pub lambda1: f64,
    pub derived: BridgeDerived,
    /// Set when `h' > 0.1` or the parameters leave the `α < 1/2, γ < 0` regime.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

/// `μ₁(h; b, α, γ)` through one normalized solve `lambda1(h', ζ)`.
pub fn mu1_bridge<F>(p: &RobinMagParams, mut lambda1: F) -> AppResult<BridgeResult>
where
    F: FnMut(f64, f64) -> AppResult<f64>,
{
    let d = p.derived();
    let mut notes = Vec::new();
    if d.h_prime > 0.1 {
        notes.push(format!("derived h' = {:.4} exceeds 0.1", d.h_prime));
    }
    if !(p.alpha < 0.5 && p.gamma < 0.0) {
        notes.push("outside the alpha < 1/2, gamma < 0 regime".to_string());
    }
    let l = lambda1(d.h_prime, d.zeta)?;
    Ok(BridgeResult {
        mu1: d.prefactor * l,
        lambda1: l,
        derived: d,
        warning: (!notes.is_empty()).then(|| notes.join("; ")),
    })
}

/// `μ₁` from the original form discretized directly on a disk (no rescaling).
pub fn mu1_direct_disk(p: &RobinMagParams, g: &DomainGeometry, grid: DiskGrid) -> AppResult<f64> {
    let problem = MagRobinProblem::general(g.clone(), p.h, p.b, p.boundary_coefficient())?.with_disk_grid(grid);
    Ok(solve_disk(&problem)?.lambda1)
}
