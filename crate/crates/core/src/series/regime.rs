use serde::{Deserialize, Serialize};

use super::{e_n, SeriesCoefficients};
use crate::error::{invalid, Result};

/// Which leading field correction `b_ε(ζ)` applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BEpsKind {
    /// `e_n(ζ)`, for `ε < 1/4`.
    En,
    /// `ζ²/4`, for `ε = 1/4`.
    QuarterZetaSq,
    /// `0`, for `ε > 1/4`.
    Zero,
}

/// Exponents governing the regime `ζ ~ h^ε`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeExponents {
    pub epsilon: f64,
    /// Least positive `n` with `(2n + 2)ε > 1/2`.
    pub n: usize,
    pub sigma: f64,
    pub rho: f64,
    /// Remainder exponent of the lower bound.
    pub r_star_lower: f64,
    /// Remainder exponent of the upper bound.
    pub r_star_upper: f64,
    pub b_eps_kind: BEpsKind,
    /// `2ε + 4ρ + 2σ − 1/2 > 3/2`, `2 − 2σ > 3/2` and `ρ + σ > 1/2` (checked for
    /// `ε ≤ 1/4`; `true` otherwise).
    pub conditions_hold: bool,
}

/// `ε` within this distance of `1/4` counts as the critical regime.
const CRITICAL_TOL: f64 = 1e-12;

fn least_n(epsilon: f64) -> usize {
    let mut n = 1;
    while (2 * n + 2) as f64 * epsilon <= 0.5 {
        n += 1;
    }
    n
}

/// Least positive `n` with `(2n + 2)ε > 1/2`; only meaningful for `0 < ε < 1/4`.
pub fn smallest_n_for_eps(epsilon: f64) -> Result<usize> {
    if !(epsilon > 0.0) {
        return Err(invalid("epsilon must be positive"));
    }
    if epsilon >= 0.25 - CRITICAL_TOL {
        return Err(invalid("no expansion order needed for epsilon >= 1/4"));
    }
    Ok(least_n(epsilon))
}

pub fn regime_exponents(epsilon: f64) -> Result<RegimeExponents> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(invalid("epsilon must be positive"));
    }
    let n = least_n(epsilon);
    let critical = (epsilon - 0.25).abs() <= CRITICAL_TOL;
    let below = epsilon < 0.25 && !critical;
    let k = (2.0 * epsilon).min(1.0 - 4.0 * epsilon);
    let sigma = if below { k / 5.0 } else { 0.125 };
    let rho = if below {
        0.5 - 0.25 * k
    } else if critical {
        7.0 / 16.0
    } else {
        0.125
    };
    let e = epsilon;
    let r_star_lower = if below || critical {
        [
            1.0 + (2 * n + 2) as f64 * e,
            1.5 + 2.0 * e,
            1.5 + sigma,
            2.0 * e + 4.0 * rho + 2.0 * sigma - 0.5,
            1.0 + sigma + rho,
            2.0 - 2.0 * sigma,
        ]
        .into_iter()
        .fold(f64::INFINITY, f64::min)
    } else {
        1.75
    };
    let r_star_upper = if below { 1.0 + ((2 * n + 2) as f64 * e).min(0.5 + e) } else { 13.0 / 8.0 };
    let b_eps_kind = if below {
        BEpsKind::En
    } else if critical {
        BEpsKind::QuarterZetaSq
    } else {
        BEpsKind::Zero
    };
    let conditions_hold = !(below || critical)
        || (2.0 * e + 4.0 * rho + 2.0 * sigma - 0.5 > 1.5 && 2.0 - 2.0 * sigma > 1.5 && rho + sigma > 0.5);
    Ok(RegimeExponents { epsilon, n, sigma, rho, r_star_lower, r_star_upper, b_eps_kind, conditions_hold })
}

impl RegimeExponents {
    /// `b_ε(ζ)`; the `e_n` branch needs the series and the constraint constant `A₀`.
    pub fn b_eps(&self, zeta: f64, series: Option<(&SeriesCoefficients, f64)>) -> Result<f64> {
        match self.b_eps_kind {
            BEpsKind::Zero => Ok(0.0),
            BEpsKind::QuarterZetaSq => Ok(0.25 * zeta * zeta),
            BEpsKind::En => {
                let (c, a0) = series.ok_or_else(|| invalid("b_eps needs the series when epsilon < 1/4"))?;
                if c.order() < self.n {
                    return Err(invalid("series order below the regime's n"));
                }
                Ok(e_n(&c.truncated(self.n), zeta, a0)?.value)
            }
        }
    }

    /// `ε = (1 − 2α) / (2(1 − α))`.
    pub fn epsilon_from_alpha(alpha: f64) -> f64 {
        (1.0 - 2.0 * alpha) / (2.0 * (1.0 - alpha))
    }
}
