//! Variational trial states `χ₁(t/T) χ₁(s/S) w(t/h^{1/2}) e^{−iξ s/h^{1/2}}` centred at a
//! curvature maximum, evaluated as Rayleigh quotients of the assembled strip pencil.
//!
//! | regime   | `T`              | `S`          | profile `w`         | `ξ`        |
//! |----------|------------------|--------------|---------------------|------------|
//! | `ε < ¼`  | `h^{1/4+ε}`      | `h^{ε/2}`    | quasi-mode `w_n`    | `e_n` argmin |
//! | `ε = ¼`  | `h^{7/16}`       | `h^{1/8}`    | quasi-mode `w_1`    | `ζ/2`      |
//! | `ε > ¼`  | `h^{3/8}`        | `h^{1/8}`    | `√2 e^{−τ}`         | `0`        |
//!
//! The phase sign matches the strip gauge `Ã₁ ≈ −t`: the tangential symbol becomes
//! `h^{1/2}(ζτ − ξ)`.

use alloc::vec::Vec;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::strip::StripAssembly;
use super::MagRobinProblem;
use crate::error::{invalid, Result};
use crate::num::{cos, exp, powf, round, sin, sqrt};
use crate::series::{e_n, BEpsKind, PerturbationTable, RegimeExponents, SeriesCoefficients};

/// Inputs of a trial-state evaluation.
#[derive(Debug, Clone, Copy)]
pub struct TrialSetup<'a> {
    pub regime: &'a RegimeExponents,
    /// Longitudinal frequency `ξ`.
    pub xi: f64,
    /// Needed for `ε ≤ 1/4`.
    pub table: Option<&'a PerturbationTable>,
    /// Multiplies both cutoff lengths; `1` is the construction as stated.
    pub cutoff_stretch: f64,
}

impl<'a> TrialSetup<'a> {
    pub fn new(regime: &'a RegimeExponents, xi: f64, table: Option<&'a PerturbationTable>) -> Self {
        TrialSetup { regime, xi, table, cutoff_stretch: 1.0 }
    }

    /// Default `ξ`: the `e_n` minimizer, `ζ/2`, or `0` according to the regime.
    pub fn default_xi(regime: &RegimeExponents, zeta: f64, series: Option<(&SeriesCoefficients, f64)>) -> Result<f64> {
        match regime.b_eps_kind {
            BEpsKind::Zero => Ok(0.0),
            BEpsKind::QuarterZetaSq => Ok(0.5 * zeta),
            BEpsKind::En => {
                let (c, a0) = series.ok_or_else(|| invalid("the e_n minimizer needs the series"))?;
                if c.order() < regime.n {
                    return Err(invalid("series order below the regime's n"));
                }
                Ok(e_n(&c.truncated(regime.n), zeta, a0)?.xi_star)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialEnergy {
    pub energy: f64,
    pub xi: f64,
    /// Arc-length centre of the trial state.
    pub center: f64,
    pub t_cutoff: f64,
    pub s_cutoff: f64,
}

/// `C^∞` step: `0` for `y ≤ 0`, `1` for `y ≥ 1`.
fn smooth_step(y: f64) -> f64 {
    let f = |x: f64| if x > 0.0 { exp(-1.0 / x) } else { 0.0 };
    if y <= 0.0 {
        0.0
    } else if y >= 1.0 {
        1.0
    } else {
        f(y) / (f(y) + f(1.0 - y))
    }
}

/// `χ₁ = 1` on `[−½, ½]`, supported in `[−1, 1]`.
pub(crate) fn cutoff(x: f64) -> f64 {
    smooth_step(2.0 * (1.0 - x.abs()))
}

enum Profile {
    Table(Vec<f64>),
    Ground,
}

/// Nodal values of the trial state on the assembly's grid.
pub fn trial_state(p: &MagRobinProblem, asm: &StripAssembly, setup: &TrialSetup) -> Result<(Vec<Complex64>, TrialEnergy)> {
    let reg = setup.regime;
    let h = p.h;
    if !(setup.cutoff_stretch > 0.0) {
        return Err(invalid("cutoff stretch must be positive"));
    }
    let (t_exp, s_exp) = match reg.b_eps_kind {
        BEpsKind::En => (0.25 + reg.epsilon, 0.5 * reg.epsilon),
        BEpsKind::QuarterZetaSq => (7.0 / 16.0, 0.125),
        BEpsKind::Zero => (0.375, 0.125),
    };
    let profile = match reg.b_eps_kind {
        BEpsKind::Zero => Profile::Ground,
        kind => {
            let n = if kind == BEpsKind::En { reg.n } else { 1 };
            let table = setup.table.ok_or_else(|| invalid("trial state needs a perturbation table"))?;
            if table.order < n {
                return Err(invalid("perturbation table order below the regime's n"));
            }
            Profile::Table(table.quasimode_to(n, p.zeta, setup.xi))
        }
    };
    let t_cutoff = setup.cutoff_stretch * powf(h, t_exp);
    let s_cutoff = setup.cutoff_stretch * powf(h, s_exp);
    let g = &p.geometry;
    let grid = &asm.grid;
    let period = g.perimeter();
    if 2.0 * s_cutoff >= period {
        return Err(invalid("longitudinal cutoff wider than the boundary"));
    }
    let center = g.argmax().first();
    let scale = sqrt(h);
    let mut v = Vec::with_capacity(grid.unknowns());
    for j in 0..grid.n_t {
        let t = grid.t(j);
        let tau = t / scale;
        let radial = cutoff(t / t_cutoff)
            * match &profile {
                Profile::Ground => core::f64::consts::SQRT_2 * exp(-tau),
                Profile::Table(w) => setup.table.expect("checked above").quasimode_at(w, tau),
            };
        for i in 0..grid.n_s {
            let d = grid.s(g, i) - center;
            let k = round(d / period);
            let d = d - k * period;
            let amp = radial * cutoff(d / s_cutoff);
            let phase = -setup.xi * d / scale - k * grid.twist;
            v.push(Complex64::new(cos(phase), sin(phase)) * amp);
        }
    }
    let info = TrialEnergy { energy: f64::NAN, xi: setup.xi, center, t_cutoff, s_cutoff };
    Ok((v, info))
}

/// Rayleigh quotient `v*Kv / v*Wv` of the trial state; by min-max it is never below the
/// smallest eigenvalue of the same assembled pencil.
pub fn trial_energy(p: &MagRobinProblem, asm: &StripAssembly, setup: &TrialSetup) -> Result<TrialEnergy> {
    let (v, mut info) = trial_state(p, asm, setup)?;
    let norm = asm.matrix.norm(&v);
    if !(norm > 0.0) {
        return Err(invalid("trial state vanishes on the grid"));
    }
    info.energy = asm.matrix.energy(&v) / (norm * norm);
    Ok(info)
}
