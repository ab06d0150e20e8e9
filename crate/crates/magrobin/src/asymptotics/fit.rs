use serde::{Deserialize, Serialize};

use magrobin_core::num::fit_line;
use magrobin_core::series::{RegimeExponents, SeriesCoefficients};

use super::sweep::SweepRow;
use crate::error::{AppError, AppResult};

/// Least-squares fit of `log|R| = log C + r log h`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerFit {
    /// `None` when some `|R|` is below the numerical floor.
    pub exponent: Option<f64>,
    pub constant: Option<f64>,
    pub floor_limited: bool,
    /// `R` changes sign across the rows, so `|R|` mixes two branches.
    pub mixed_sign: bool,
}

pub fn fit_power(hs: &[f64], remainders: &[f64], floor: f64) -> AppResult<PowerFit> {
    if hs.len() != remainders.len() || hs.len() < 2 {
        return Err(AppError::Config("a power fit needs at least two matching points".into()));
    }
    let positive = remainders.iter().filter(|r| **r > 0.0).count();
    let mixed_sign = positive != 0 && positive != remainders.len();
    if remainders.iter().any(|r| !(r.abs() >= floor)) {
        return Ok(PowerFit { exponent: None, constant: None, floor_limited: true, mixed_sign });
    }
    let lx: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
    let ly: Vec<f64> = remainders.iter().map(|r| r.abs().ln()).collect();
    let (intercept, slope) = fit_line(&lx, &ly);
    Ok(PowerFit { exponent: Some(slope), constant: Some(intercept.exp()), floor_limited: false, mixed_sign })
}

/// `−h + b_ε(ζ)h − κ_max h^{3/2}`.
pub fn two_term_prediction(
    h: f64,
    zeta: f64,
    regime: &RegimeExponents,
    kappa_max: f64,
    series: Option<(&SeriesCoefficients, f64)>,
) -> AppResult<f64> {
    let b = regime.b_eps(zeta, series)?;
    Ok(-h + b * h - kappa_max * h.powf(1.5))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoTermFit {
    pub fit: PowerFit,
    pub predicted: Vec<f64>,
    pub remainders: Vec<f64>,
}

/// Remainder `R(h) = λ₁ − (−h + b_ε(ζ)h − κ_max h^{3/2})` and its power fit.
///
/// `floor` is the smallest `|R|` that is trusted (ten times the solver tolerance).
pub fn fit_two_term(
    rows: &[SweepRow],
    regime: &RegimeExponents,
    kappa_max: f64,
    series: Option<(&SeriesCoefficients, f64)>,
    floor: f64,
) -> AppResult<TwoTermFit> {
    if rows.len() < 4 {
        return Err(AppError::Config("fit_two_term needs at least 4 rows".into()));
    }
    let predicted = rows
        .iter()
        .map(|r| two_term_prediction(r.h, r.zeta, regime, kappa_max, series))
        .collect::<AppResult<Vec<f64>>>()?;
    let remainders: Vec<f64> = rows.iter().zip(&predicted).map(|(r, p)| r.lambda1 - p).collect();
    let hs: Vec<f64> = rows.iter().map(|r| r.h).collect();
    let fit = fit_power(&hs, &remainders, floor)?;
    Ok(TwoTermFit { fit, predicted, remainders })
}
