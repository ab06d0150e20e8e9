//! Commands on planar domains: single solves, h-sweeps, fits, the diamagnetic gap,
//! localization and trial states.

use std::fmt::Write as _;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use serde_json::json;

use magrobin_core::geometry::DomainGeometry;
use magrobin_core::model::{theta as theta_fn, ThetaParams};
use magrobin_core::series::{regime_exponents, BEpsKind, RegimeExponents, SeriesCoefficients};
use magrobin_core::solver2d::{
    assemble_strip, solve_strip, trial_energy, GroundMode, MagRobinProblem, StripPolicy, TrialSetup,
};

use super::one_d::{obtain_a0, obtain_table};
use super::params::{DomainParams, FieldParams, LineGrid, SeriesSource, SolverParams};
use super::{CommandResult, Context, Outcome, Partial};
use crate::asymptotics::{
    diamag_gap, fit_power, interior_decay_rate, localization_profile, solve_with, sweep_lambda1,
    two_term_prediction, DiamagCase, DiamagInputs, SolverKind, SweepConfig, SweepResult, AGMON_ALPHAS,
};
use crate::error::{AppError, AppResult};
use crate::io::{self, SweepCsvRow, TableFile};

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct Solve2dParams {
    #[serde(flatten)]
    pub domain: DomainParams,
    #[serde(flatten)]
    pub field: FieldParams,
    #[serde(flatten)]
    pub solver: SolverParams,
    pub dump_eigenvector: bool,
}

fn mode_json(mode: &GroundMode) -> serde_json::Value {
    match mode {
        GroundMode::Disk { winding, modes, .. } => json!({ "kind": "disk", "winding": winding, "modes_scanned": modes.len() }),
        GroundMode::Strip { grid, discrete_lambda1, path, dimension, .. } => json!({
            "kind": "strip",
            "n_s": grid.n_s,
            "n_t": grid.n_t,
            "t_cut": grid.t_cut,
            "twist": grid.twist,
            "discrete_lambda1": discrete_lambda1,
            "path": path,
            "dimension": dimension,
        }),
    }
}

pub fn solve_2d(ctx: &Context, p: Solve2dParams) -> CommandResult {
    let g = p.domain.build()?;
    let (h, zeta) = (p.field.h()?, p.field.zeta()?);
    let problem = MagRobinProblem::new(g.clone(), h, zeta).map_err(AppError::from)?.with_disk_grid(p.solver.disk());
    let gs = solve_with(&problem, p.solver.solver, &p.solver.strip())?;
    if p.dump_eigenvector {
        io::write_csv(&ctx.out.join("eigenvector.csv"), &io::eigenvector_rows(&gs, &g))?;
    }
    Ok(Outcome {
        results: json!({
            "h": h,
            "zeta": zeta,
            "kappa_max": g.kappa_max(),
            "lambda1": gs.lambda1,
            "lambda2": gs.lambda2,
            "residual": gs.residual,
            "truncation_mass": gs.truncation_mass,
            "mode": mode_json(&gs.mode),
        }),
        summary: format!(
            "h = {h}, zeta = {zeta}: lambda1 = {:.12}, lambda2 = {:.12}, residual {:.2e}, truncation mass {:.2e}\n",
            gs.lambda1, gs.lambda2, gs.residual, gs.truncation_mass
        ),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepParams {
    #[serde(flatten)]
    pub domain: DomainParams,
    #[serde(flatten)]
    pub solver: SolverParams,
    pub epsilon: f64,
    pub c: f64,
    pub h_list: Vec<f64>,
    pub max_dimension: usize,
    /// Cap on the summed solve time; exceeding it fails the run after the sweep.
    pub max_wall_seconds: Option<f64>,
    /// Smallest trusted `|remainder|`.
    pub floor: f64,
    #[serde(flatten)]
    pub series: SeriesSource,
}

impl Default for SweepParams {
    fn default() -> Self {
        SweepParams {
            domain: DomainParams::default(),
            solver: SolverParams::default(),
            epsilon: 0.5,
            c: 1.0,
            h_list: vec![0.04, 0.02, 0.01, 0.005],
            max_dimension: 400_000,
            max_wall_seconds: None,
            floor: 1e-8,
            series: SeriesSource::default(),
        }
    }
}

/// The series is only loaded when `b_ε = e_n`.
fn regime_series(ctx: &Context, regime: &RegimeExponents, src: &SeriesSource) -> AppResult<Option<(TableFile, f64)>> {
    if regime.b_eps_kind != BEpsKind::En {
        return Ok(None);
    }
    let src = SeriesSource { order: src.order.max(regime.n), ..src.clone() };
    Ok(Some((obtain_table(ctx, &src)?, obtain_a0(&src)?)))
}

fn as_series(s: &Option<(TableFile, f64)>) -> Option<(&SeriesCoefficients, f64)> {
    s.as_ref().map(|(t, a0)| (&t.coefficients, *a0))
}

struct SweepRun {
    geometry: DomainGeometry,
    regime: RegimeExponents,
    result: SweepResult,
    csv: Vec<SweepCsvRow>,
}

fn run_sweep(ctx: &Context, p: &SweepParams, keep_states: bool) -> AppResult<SweepRun> {
    let spec = p.domain.spec()?;
    let geometry = spec.build()?;
    let regime = regime_exponents(p.epsilon)?;
    let series = regime_series(ctx, &regime, &p.series)?;
    let cfg = SweepConfig {
        strip: p.solver.strip(),
        disk: p.solver.disk(),
        max_dimension: p.max_dimension,
        jobs: ctx.jobs,
        ..SweepConfig::new(spec, p.epsilon, p.c, p.h_list.clone(), p.solver.solver)
    };
    let mut result = sweep_lambda1(&cfg, keep_states)?;
    if let Some(cap) = p.max_wall_seconds {
        let total: f64 = result.rows.iter().map(|r| r.wall_time).sum();
        if total > cap && result.failure.is_none() {
            result.failure = Some(format!("solves took {total:.1} s, above the cap of {cap} s"));
            result.failure_kind = Some("budget".into());
        }
    }
    let kappa = geometry.kappa_max();
    let csv = result
        .rows
        .iter()
        .map(|r| {
            let predicted = two_term_prediction(r.h, r.zeta, &regime, kappa, as_series(&series))?;
            Ok(SweepCsvRow {
                h: r.h,
                zeta: r.zeta,
                lambda1: r.lambda1,
                residual: r.residual,
                truncation_mass: r.truncation_mass,
                predicted,
                remainder: r.lambda1 - predicted,
            })
        })
        .collect::<AppResult<Vec<_>>>()?;
    Ok(SweepRun { geometry, regime, result, csv })
}

/// Partial results are still written when a row fails.
fn finish(outcome: Outcome, result: &SweepResult) -> CommandResult {
    let Some(msg) = result.failure.clone() else {
        return Ok(outcome);
    };
    let error = match result.failure_kind.as_deref() {
        Some("budget") => AppError::Budget(msg),
        Some("usage") | Some("config") => AppError::Config(msg),
        _ => AppError::Numerical(magrobin_core::Error::ScanExhausted(msg)),
    };
    Err(Box::new(Partial { outcome, error }))
}

pub fn sweep(ctx: &Context, p: SweepParams) -> CommandResult {
    let run = run_sweep(ctx, &p, false)?;
    io::write_csv(&ctx.out.join("sweep.csv"), &run.csv)?;
    let hs: Vec<f64> = run.csv.iter().map(|r| r.h).collect();
    let rs: Vec<f64> = run.csv.iter().map(|r| r.remainder).collect();
    let fit = if hs.len() >= 2 { Some(fit_power(&hs, &rs, p.floor)?) } else { None };
    let mut summary = String::new();
    for r in &run.csv {
        let _ = writeln!(summary, "h = {:<8} lambda1 = {:.12} predicted = {:.12} remainder = {:.4e}", r.h, r.lambda1, r.predicted, r.remainder);
    }
    match fit.as_ref().and_then(|f| f.exponent) {
        Some(e) => {
            let _ = writeln!(summary, "remainder exponent {e:.4} (needed at least {:.4})", run.regime.r_star_lower);
        }
        None => summary.push_str("remainder exponent unavailable\n"),
    }
    let lambda2: Vec<f64> = run.result.rows.iter().map(|r| r.lambda2).collect();
    let discrete: Vec<Option<f64>> = run.result.rows.iter().map(|r| r.discrete_lambda1).collect();
    let outcome = Outcome {
        results: json!({
            "epsilon": p.epsilon,
            "c": p.c,
            "kappa_max": run.geometry.kappa_max(),
            "regime": run.regime,
            "rows": run.csv,
            "lambda2": lambda2,
            "discrete_lambda1": discrete,
            "fit": fit,
            "failure": run.result.failure,
        }),
        summary,
    };
    finish(outcome, &run.result)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FitParams {
    /// A `sweep.csv`.
    pub input: Option<PathBuf>,
    pub floor: f64,
}

impl Default for FitParams {
    fn default() -> Self {
        FitParams { input: None, floor: 1e-8 }
    }
}

pub fn fit(_ctx: &Context, p: FitParams) -> CommandResult {
    let input = p.input.as_ref().ok_or_else(|| AppError::Usage("fit needs `input`".into()))?;
    let rows = io::read_sweep_csv(input)?;
    let hs: Vec<f64> = rows.iter().map(|r| r.h).collect();
    let rs: Vec<f64> = rows.iter().map(|r| r.remainder).collect();
    let f = fit_power(&hs, &rs, p.floor)?;
    let summary = match f.exponent {
        Some(e) => format!("exponent {e:.6}, constant {:.6e}\n", f.constant.unwrap_or(f64::NAN)),
        None => "remainders below the floor; no exponent\n".to_string(),
    };
    Ok(Outcome { results: serde_json::to_value(&f).map_err(AppError::from)?, summary })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DiamagParams {
    #[serde(flatten)]
    pub domain: DomainParams,
    #[serde(flatten)]
    pub solver: SolverParams,
    pub alpha: f64,
    /// `H = field_scale·|β|^{1/(1−α)}`.
    pub field_scale: f64,
    pub beta_list: Vec<f64>,
    pub c1: f64,
    pub c2: f64,
    #[serde(flatten)]
    pub series: SeriesSource,
}

impl Default for DiamagParams {
    fn default() -> Self {
        DiamagParams {
            domain: DomainParams::default(),
            solver: SolverParams::default(),
            alpha: 0.0,
            field_scale: 1.0,
            beta_list: vec![-4.0, -8.0, -16.0],
            c1: 0.5,
            c2: 2.0,
            series: SeriesSource::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
struct DiamagCsvRow {
    beta: f64,
    field: f64,
    h_prime: f64,
    zeta: f64,
    gap: f64,
    gap_ratio: f64,
    mu_field: f64,
    mu_zero: f64,
    predicted_gap: Option<f64>,
}

pub fn diamag(ctx: &Context, p: DiamagParams) -> CommandResult {
    let g = p.domain.build()?;
    let kappa = g.kappa_max();
    let case = DiamagCase::from_alpha(p.alpha);
    let series = if case == DiamagCase::FieldSecondOrder {
        Some((obtain_table(ctx, &p.series)?, obtain_a0(&p.series)?))
    } else {
        None
    };
    let theta_grid = LineGrid::default().build()?;
    // the Robin term enters the form as +γ|u|², the half-line Θ carries −γ|u(0)|²
    let theta = move |gamma: f64| -> AppResult<f64> { Ok(theta_fn(ThetaParams::new(-gamma), theta_grid)?.value) };
    let inputs = DiamagInputs { series: as_series(&series), theta: Some(&theta), band: Some((p.c1, p.c2)) };
    let (solver, policy, disk) = (p.solver.solver, p.solver.strip(), p.solver.disk());
    let lambda1 = |h: f64, zeta: f64| -> AppResult<f64> {
        let problem = MagRobinProblem::new(g.clone(), h, zeta)?.with_disk_grid(disk);
        Ok(solve_with(&problem, solver, &policy)?.lambda1)
    };
    let mut rows = Vec::new();
    let mut csv = Vec::new();
    let mut summary = String::new();
    for &beta in &p.beta_list {
        let field = p.field_scale * beta.abs().powf(1.0 / (1.0 - p.alpha));
        let r = diamag_gap(beta, field, p.alpha, kappa, inputs, lambda1)?;
        let gap_ratio = r.gap / (beta.abs() * kappa);
        let _ = writeln!(summary, "beta = {beta}: H = {field:.6}, gap = {:.8e}, gap/(|beta| kappa) = {gap_ratio:.6e}", r.gap);
        csv.push(DiamagCsvRow {
            beta,
            field,
            h_prime: r.h_prime,
            zeta: r.zeta,
            gap: r.gap,
            gap_ratio,
            mu_field: r.mu_field,
            mu_zero: r.mu_zero,
            predicted_gap: r.predicted_gap,
        });
        rows.push(r);
    }
    io::write_csv(&ctx.out.join("diamag.csv"), &csv)?;
    Ok(Outcome { results: json!({ "alpha": p.alpha, "case": case, "kappa_max": kappa, "rows": rows }), summary })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LocalizeParams {
    #[serde(flatten)]
    pub sweep: SweepParams,
    /// Defaults to the regime's `ρ`.
    pub rho: Option<f64>,
    pub eta_star: f64,
}

impl Default for LocalizeParams {
    fn default() -> Self {
        LocalizeParams { sweep: SweepParams::default(), rho: None, eta_star: 0.15 }
    }
}

pub fn localize(ctx: &Context, p: LocalizeParams) -> CommandResult {
    let run = run_sweep(ctx, &p.sweep, true)?;
    let rho = p.rho.unwrap_or(run.regime.rho);
    let mut profiles = Vec::new();
    for row in &run.result.rows {
        let state = row.state.as_ref().expect("states were kept");
        profiles.push(localization_profile(state, &run.geometry, row.h, rho, p.eta_star, &AGMON_ALPHAS)?);
    }
    let mut header: Vec<String> = ["h", "interior_mass", "bad_curvature_mass", "boundary_cap_fraction"].map(String::from).to_vec();
    header.extend(AGMON_ALPHAS.iter().map(|a| format!("agmon_{a}")));
    let mut columns = vec![
        profiles.iter().map(|q| q.h).collect(),
        profiles.iter().map(|q| q.interior_mass).collect(),
        profiles.iter().map(|q| q.bad_curvature_mass).collect(),
        profiles.iter().map(|q| q.boundary_cap_fraction).collect::<Vec<f64>>(),
    ];
    for k in 0..AGMON_ALPHAS.len() {
        columns.push(profiles.iter().map(|q| q.agmon[k].1).collect());
    }
    io::write_columns(&ctx.out.join("localize.csv"), &header, &columns)?;
    let decay_rate = interior_decay_rate(&profiles);
    let mut summary = String::new();
    for q in &profiles {
        let _ = writeln!(
            summary,
            "h = {:<8} interior mass {:.4e}, cap fraction {:.6}, bad-curvature mass {:.4e}",
            q.h, q.interior_mass, q.boundary_cap_fraction, q.bad_curvature_mass
        );
    }
    let _ = writeln!(summary, "interior decay rate c = {decay_rate:?}");
    let outcome = Outcome {
        results: json!({ "rho": rho, "eta_star": p.eta_star, "profiles": profiles, "decay_rate": decay_rate, "failure": run.result.failure }),
        summary,
    };
    finish(outcome, &run.result)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrialParams {
    #[serde(flatten)]
    pub domain: DomainParams,
    #[serde(flatten)]
    pub field: FieldParams,
    #[serde(flatten)]
    pub solver: SolverParams,
    /// Defaults to the regime's choice of `ξ`.
    pub xi: Option<f64>,
    pub cutoff_stretch: f64,
    /// Also solve on the same grid and report the discrete ground energy.
    pub compare: bool,
    #[serde(flatten)]
    pub series: SeriesSource,
}

impl Default for TrialParams {
    fn default() -> Self {
        TrialParams {
            domain: DomainParams::default(),
            field: FieldParams::default(),
            solver: SolverParams { solver: SolverKind::Strip, ..SolverParams::default() },
            xi: None,
            cutoff_stretch: 1.0,
            compare: true,
            series: SeriesSource::default(),
        }
    }
}

pub fn trial(ctx: &Context, p: TrialParams) -> CommandResult {
    let g = p.domain.build()?;
    let h = p.field.h()?;
    let zeta = p.field.zeta()?;
    let epsilon = p.field.epsilon().ok_or_else(|| AppError::Usage("trial needs `epsilon` and `c`".into()))?;
    let regime = regime_exponents(epsilon)?;
    // the critical regime needs the table for its profile even though b_ε = ζ²/4
    let table = if regime.b_eps_kind == BEpsKind::Zero {
        None
    } else {
        let src = SeriesSource { order: p.series.order.max(regime.n), ..p.series.clone() };
        Some((obtain_table(ctx, &src)?, obtain_a0(&src)?))
    };
    let series = as_series(&table);
    let problem = MagRobinProblem::new(g.clone(), h, zeta).map_err(AppError::from)?;
    let policy: StripPolicy = p.solver.strip();
    let (grid, discrete) = if p.compare {
        let gs = solve_strip(&problem, &policy).map_err(AppError::from)?;
        match gs.mode {
            GroundMode::Strip { grid, discrete_lambda1, .. } => (grid, Some((discrete_lambda1, gs.lambda1))),
            GroundMode::Disk { .. } => unreachable!("strip solver"),
        }
    } else {
        (policy.grid(&problem).map_err(AppError::from)?, None)
    };
    let asm = assemble_strip(&problem, &grid).map_err(AppError::from)?;
    let xi = match p.xi {
        Some(x) => x,
        None => TrialSetup::default_xi(&regime, zeta, series).map_err(AppError::from)?,
    };
    let mut setup = TrialSetup::new(&regime, xi, table.as_ref().map(|(t, _)| &t.table));
    setup.cutoff_stretch = p.cutoff_stretch;
    let te = trial_energy(&problem, &asm, &setup).map_err(AppError::from)?;
    let predicted = two_term_prediction(h, zeta, &regime, g.kappa_max(), series)?;
    let mut summary = format!("trial energy {:.12} (xi = {xi:.8}), remainder {:.4e}\n", te.energy, te.energy - predicted);
    if let Some((d, _)) = discrete {
        let _ = writeln!(summary, "discrete ground energy {d:.12}; trial minus ground {:.4e}", te.energy - d);
    }
    Ok(Outcome {
        results: json!({
            "h": h,
            "zeta": zeta,
            "epsilon": epsilon,
            "trial": te,
            "predicted": predicted,
            "remainder": te.energy - predicted,
            "discrete_lambda1": discrete.map(|d| d.0),
            "lambda1": discrete.map(|d| d.1),
            "upper_bound_holds": discrete.map(|d| te.energy >= d.0),
        }),
        summary,
    })
}
