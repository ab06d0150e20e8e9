//! Gap `μ̃₁(β;H) − μ̃₁(β;0)` for `−(∇ − iHA)²` with the Robin coefficient `β < 0`.
//!
//! `μ̃₁(β;H) = H² μ₁(1/H; 1, α, βH^{α−1})`, which reduces to `β⁴ λ₁(β^{−2}, Hβ^{−2})` for
//! every `α`; `α` only fixes how `H` grows with `|β|`.

use serde::{Deserialize, Serialize};

use magrobin_core::series::{e_n, regime_exponents, SeriesCoefficients};

use super::bridge::{mu1_bridge, RobinMagParams};
use crate::error::{AppError, AppResult};

/// Which expansion of `μ̃₁(β;H)` applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiamagCase {
    /// `α > 1/2`: `Θ(0) H`.
    StrongField,
    /// `α = 1/2`: `H Θ(βH^{−1/2})`.
    Critical,
    /// `1/3 < α < 1/2`: `−β² + e_n(Hβ^{−2})β² + βκ_max`.
    FieldSecondOrder,
    /// `α = 1/3`: `−β² + (H²β^{−3}/4 + κ_max)β`.
    Balanced,
    /// `α < 1/3`: `−β² + κ_max β`.
    CurvatureDominated,
}

impl DiamagCase {
    pub fn from_alpha(alpha: f64) -> Self {
        let tol = 1e-12;
        if (alpha - 0.5).abs() < tol {
            DiamagCase::Critical
        } else if alpha > 0.5 {
            DiamagCase::StrongField
        } else if (alpha - 1.0 / 3.0).abs() < tol {
            DiamagCase::Balanced
        } else if alpha > 1.0 / 3.0 {
            DiamagCase::FieldSecondOrder
        } else {
            DiamagCase::CurvatureDominated
        }
    }
}

/// Optional inputs for the predicted expansions.
#[derive(Clone, Copy, Default)]
pub struct DiamagInputs<'a> {
    /// Series coefficients and `A₀`, for the `e_n` case.
    pub series: Option<(&'a SeriesCoefficients, f64)>,
    /// `Θ(γ)`, for `α ≥ 1/2`.
    pub theta: Option<&'a dyn Fn(f64) -> AppResult<f64>>,
    /// Admissible band `c₁|β|^{1/(1−α)} ≤ H ≤ c₂|β|^{1/(1−α)}`.
    pub band: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiamagResult {
    pub beta: f64,
    pub field: f64,
    pub alpha: f64,
    pub gap: f64,
    pub mu_field: f64,
    pub mu_zero: f64,
    pub h_prime: f64,
    pub zeta: f64,
    pub case: DiamagCase,
    /// Predicted `μ̃₁(β;H)`, when the needed inputs were supplied.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predicted: Option<f64>,
    /// Predicted minus `−β² + βκ_max` (cases with `α < 1/2`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predicted_gap: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

/// Computes the gap with `lambda1(h', ζ)` as the normalized solver.
pub fn diamag_gap<F>(
    beta: f64,
    field: f64,
    alpha: f64,
    kappa_max: f64,
    inputs: DiamagInputs,
    mut lambda1: F,
) -> AppResult<DiamagResult>
where
    F: FnMut(f64, f64) -> AppResult<f64>,
{
    if !(beta < 0.0) || !(field > 0.0) || alpha == 1.0 {
        return Err(AppError::Config("diamag needs beta < 0, H > 0 and alpha != 1".into()));
    }
    let params = RobinMagParams::new(1.0 / field, 1.0, alpha, beta * field.powf(alpha - 1.0))?;
    let bridged = mu1_bridge(&params, &mut lambda1)?;
    let mu_field = field * field * bridged.mu1;
    let h_prime = 1.0 / (beta * beta);
    let mu_zero = beta.powi(4) * lambda1(h_prime, 0.0)?;

    let mut notes = Vec::new();
    if let Some((c1, c2)) = inputs.band {
        let scale = beta.abs().powf(1.0 / (1.0 - alpha));
        if field < c1 * scale || field > c2 * scale {
            notes.push(format!("H = {field} outside [{c1}, {c2}]·|beta|^(1/(1-alpha))"));
        }
    }
    if h_prime > 0.1 {
        notes.push(format!("derived h' = {h_prime:.4} exceeds 0.1"));
    }

    let case = DiamagCase::from_alpha(alpha);
    let b2 = beta * beta;
    let robin = -b2 + beta * kappa_max;
    let predicted = match case {
        DiamagCase::StrongField => inputs.theta.map(|t| t(0.0).map(|v| v * field)).transpose()?,
        DiamagCase::Critical => inputs.theta.map(|t| t(beta / field.sqrt()).map(|v| v * field)).transpose()?,
        DiamagCase::FieldSecondOrder => match inputs.series {
            Some((c, a0)) => {
                let reg = regime_exponents(RobinMagParams::new(1.0, 1.0, alpha, -1.0)?.derived().epsilon)?;
                let e = e_n(&c.truncated(reg.n), field / b2, a0)?.value;
                Some(-b2 + e * b2 + beta * kappa_max)
            }
            None => None,
        },
        DiamagCase::Balanced => Some(-b2 + (field * field / (b2 * beta) / 4.0 + kappa_max) * beta),
        DiamagCase::CurvatureDominated => Some(robin),
    };
    let predicted_gap = match case {
        DiamagCase::StrongField | DiamagCase::Critical => None,
        _ => predicted.map(|p| p - robin),
    };
    if let Some(w) = bridged.warning {
        notes.push(w);
    }
    Ok(DiamagResult {
        beta,
        field,
        alpha,
        gap: mu_field - mu_zero,
        mu_field,
        mu_zero,
        h_prime,
        zeta: bridged.derived.zeta,
        case,
        predicted,
        predicted_gap,
        warning: (!notes.is_empty()).then(|| notes.join("; ")),
    })
}
