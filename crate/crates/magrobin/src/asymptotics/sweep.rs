use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use magrobin_core::geometry::{DomainGeometry, DomainKind};
use magrobin_core::solver2d::{solve_disk, solve_strip, DiskGrid, GroundMode, GroundState2D, MagRobinProblem, StripPolicy};

use crate::error::{AppError, AppResult};

/// Serializable domain description: a shape and an optional tubular radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    pub shape: DomainKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t0: Option<f64>,
}

impl DomainSpec {
    pub fn disk(radius: f64) -> Self {
        DomainSpec { shape: DomainKind::Disk { radius }, t0: None }
    }

    pub fn ellipse(a_axis: f64, b_axis: f64) -> Self {
        DomainSpec { shape: DomainKind::Ellipse { a_axis, b_axis }, t0: None }
    }

    pub fn with_t0(mut self, t0: f64) -> Self {
        self.t0 = Some(t0);
        self
    }

    pub fn build(&self) -> AppResult<DomainGeometry> {
        let g = DomainGeometry::new(self.shape.clone())?;
        Ok(match self.t0 {
            Some(t0) => g.with_t0(t0)?,
            None => g,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverKind {
    Disk,
    Strip,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub domain: DomainSpec,
    pub epsilon: f64,
    /// `ζ = c·h^ε`.
    pub c: f64,
    pub h_list: Vec<f64>,
    pub solver: SolverKind,
    #[serde(default)]
    pub strip: StripPolicy,
    #[serde(default)]
    pub disk: DiskGrid,
    /// Largest strip matrix dimension allowed (counting the refined grid).
    pub max_dimension: usize,
    /// Worker threads; `0` uses the rayon default.
    #[serde(default)]
    pub jobs: usize,
}

impl SweepConfig {
    pub fn new(domain: DomainSpec, epsilon: f64, c: f64, h_list: Vec<f64>, solver: SolverKind) -> Self {
        SweepConfig {
            domain,
            epsilon,
            c,
            h_list,
            solver,
            strip: StripPolicy::default(),
            disk: DiskGrid::default(),
            max_dimension: 400_000,
            jobs: 0,
        }
    }

    pub fn validate(&self) -> AppResult<()> {
        if !(self.c >= 0.0) || !(self.epsilon > 0.0) {
            return Err(AppError::Config("sweep needs c >= 0 and epsilon > 0".into()));
        }
        if self.h_list.iter().any(|h| !(*h > 0.0 && *h < 1.0)) {
            return Err(AppError::Config("every h must lie in (0, 1)".into()));
        }
        if self.h_list.windows(2).any(|w| w[1] >= w[0]) {
            return Err(AppError::Config("h_list must be strictly decreasing".into()));
        }
        Ok(())
    }

    pub fn zeta(&self, h: f64) -> f64 {
        self.c * h.powf(self.epsilon)
    }

    pub fn problem(&self, h: f64) -> AppResult<MagRobinProblem> {
        let p = MagRobinProblem::new(self.domain.build()?, h, self.zeta(h))?;
        Ok(p.with_disk_grid(self.disk))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRow {
    pub h: f64,
    pub zeta: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub residual: f64,
    pub truncation_mass: f64,
    /// Strip solves: eigenvalue of the finest assembled matrix, before extrapolation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discrete_lambda1: Option<f64>,
    /// Kept out of result files so that reruns are byte-identical.
    #[serde(skip)]
    pub wall_time: f64,
    #[serde(skip)]
    pub state: Option<GroundState2D>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    /// First failing row, if any; rows before it are kept.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
    /// Error tag of the failure (see `AppError::kind`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure_kind: Option<String>,
}

/// Runs one solver problem.
pub fn solve_with(p: &MagRobinProblem, solver: SolverKind, policy: &StripPolicy) -> AppResult<GroundState2D> {
    Ok(match solver {
        SolverKind::Disk => solve_disk(p)?,
        SolverKind::Strip => solve_strip(p, policy)?,
    })
}

fn run_row(cfg: &SweepConfig, h: f64, keep_state: bool) -> AppResult<SweepRow> {
    let p = cfg.problem(h)?;
    if cfg.solver == SolverKind::Strip {
        let grid = match p.strip {
            Some(g) => g,
            None => cfg.strip.grid(&p)?,
        };
        let factor = if cfg.strip.richardson { 4 } else { 1 };
        if grid.unknowns() * factor > cfg.max_dimension {
            return Err(AppError::Budget(format!(
                "h = {h}: {} unknowns exceed the budget of {}",
                grid.unknowns() * factor,
                cfg.max_dimension
            )));
        }
    }
    let start = Instant::now();
    let gs = solve_with(&p, cfg.solver, &cfg.strip)?;
    let wall_time = start.elapsed().as_secs_f64();
    let discrete_lambda1 = match &gs.mode {
        GroundMode::Strip { discrete_lambda1, .. } => Some(*discrete_lambda1),
        GroundMode::Disk { .. } => None,
    };
    Ok(SweepRow {
        h,
        zeta: p.zeta,
        lambda1: gs.lambda1,
        lambda2: gs.lambda2,
        residual: gs.residual,
        truncation_mass: gs.truncation_mass,
        discrete_lambda1,
        wall_time,
        state: keep_state.then_some(gs),
    })
}

/// One solve per `h` with `ζ = c·h^ε`, fanned out over `cfg.jobs` workers.
///
/// Rows come back in `h_list` order; the first failure truncates the result there.
pub fn sweep_lambda1(cfg: &SweepConfig, keep_states: bool) -> AppResult<SweepResult> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| AppError::Config(format!("thread pool: {e}")))?;
    let outcomes: Vec<AppResult<SweepRow>> =
        pool.install(|| cfg.h_list.par_iter().map(|&h| run_row(cfg, h, keep_states)).collect());
    let mut rows = Vec::with_capacity(outcomes.len());
    let mut failure = None;
    let mut failure_kind = None;
    for (h, outcome) in cfg.h_list.iter().zip(outcomes) {
        match outcome {
            Ok(row) => rows.push(row),
            Err(e) => {
                failure = Some(format!("h = {h}: {e}"));
                failure_kind = Some(e.kind().to_string());
                break;
            }
        }
    }
    Ok(SweepResult { rows, failure, failure_kind })
}
