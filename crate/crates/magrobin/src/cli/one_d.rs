//! Half-line commands: model operators, Θ, A₀, perturbation tables and `e_n`.

use std::fmt::Write as _;
use std::fs;

use serde::{Deserialize, Serialize};
use serde_json::json;

use magrobin_core::model::{
    find_a0 as scan_a0, lambda_h00, mu_shifted_osc, solve_harm, solve_weighted, theta as theta_fn,
    weighted_lambda1_over_xi, DeltaProfile, HarmParams, SpectrumResult, ThetaParams, WeightedParams,
};
use magrobin_core::series::{build_table, e_n, SeriesCoefficients};

use super::params::{LineGrid, SeriesSource};
use super::{CommandResult, Context, Outcome};
use crate::error::{AppError, AppResult};
use crate::io::{self, TableFile, FORMAT_VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Op1d {
    Harm,
    H00,
    Osc,
    Weighted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Solve1dParams {
    pub op: Op1d,
    pub zeta: f64,
    pub xi: f64,
    pub k: usize,
    pub shift: f64,
    pub robin_gamma: f64,
    pub beta: f64,
    pub h: f64,
    pub m: f64,
    pub sigma_w: f64,
    pub delta: f64,
    pub bound_m: f64,
    pub delta_profile: DeltaProfile,
    /// Weighted operator: minimize `λ₁` over `ξ` instead of solving at `xi`.
    pub minimize_xi: bool,
    /// Ignored by `weighted`, whose grid spans `(0, h^{−δ})`.
    #[serde(flatten)]
    pub grid: LineGrid,
}

impl Default for Solve1dParams {
    fn default() -> Self {
        Solve1dParams {
            op: Op1d::Harm,
            zeta: 0.1,
            xi: 0.0,
            k: 2,
            shift: 0.0,
            robin_gamma: 1.0,
            beta: 0.0,
            h: 0.01,
            m: 0.0,
            sigma_w: 0.125,
            delta: 0.1,
            bound_m: 1.0,
            delta_profile: DeltaProfile::Metric,
            minimize_xi: false,
            grid: LineGrid::default(),
        }
    }
}

fn spectrum_json(s: &SpectrumResult) -> serde_json::Value {
    json!({ "values": s.values, "residuals": s.residuals, "tail_mass": s.tail_mass })
}

fn dump_vectors(ctx: &Context, s: &SpectrumResult) -> AppResult<()> {
    let tau: Vec<f64> = (0..s.grid.n_points()).map(|k| s.grid.node(k)).collect();
    let mut header = vec!["tau".to_string()];
    header.extend((1..=s.vectors.len()).map(|k| format!("u{k}")));
    let mut columns = vec![tau];
    columns.extend(s.vectors.iter().cloned());
    io::write_columns(&ctx.out.join("eigenvectors.csv"), &header, &columns)
}

fn values_summary(label: &str, values: &[f64]) -> String {
    let mut s = String::new();
    for (k, v) in values.iter().enumerate() {
        let _ = writeln!(s, "{label} lambda{} = {v:.12}", k + 1);
    }
    s
}

pub fn solve_1d(ctx: &Context, p: Solve1dParams) -> CommandResult {
    let grid = p.grid.build()?;
    let (results, summary) = match p.op {
        Op1d::Harm => {
            let s = solve_harm(HarmParams { zeta: p.zeta, xi: p.xi }, grid, p.k)?;
            dump_vectors(ctx, &s)?;
            (json!({ "op": p.op, "lambda1": s.lambda1(), "spectrum": spectrum_json(&s) }), values_summary("harm", &s.values))
        }
        Op1d::H00 => {
            let r = lambda_h00(grid)?;
            dump_vectors(ctx, &r.discrete)?;
            let summary = format!(
                "h00 exact -1, discrete {:.12}, extrapolated {:.12}, overlap {:.12}\n",
                r.discrete.lambda1(),
                r.extrapolated,
                r.overlap
            );
            let results = json!({
                "op": p.op,
                "lambda1": r.value,
                "discrete": r.discrete.lambda1(),
                "refined": r.refined_value,
                "extrapolated": r.extrapolated,
                "overlap": r.overlap,
            });
            (results, summary)
        }
        Op1d::Osc => {
            let mu = mu_shifted_osc(p.shift, p.robin_gamma, grid)?;
            (json!({ "op": p.op, "lambda1": mu }), format!("osc mu({}) = {mu:.12}\n", p.shift))
        }
        Op1d::Weighted => {
            let wp = WeightedParams {
                zeta: p.zeta,
                beta: p.beta,
                xi: p.xi,
                h: p.h,
                m: p.m,
                sigma_w: p.sigma_w,
                delta: p.delta,
                bound_m: p.bound_m,
                delta_profile: p.delta_profile,
            };
            let wgrid = wp.grid(p.grid.n_points)?;
            if p.minimize_xi {
                let w = weighted_lambda1_over_xi(wp, wgrid)?;
                let results = json!({ "op": p.op, "lambda1": w.value, "xi_star": w.argmin, "window": w.window, "extensions": w.extensions });
                (results, format!("weighted min over xi: lambda1 = {:.12} at xi = {:.8}\n", w.value, w.argmin))
            } else {
                let s = solve_weighted(wp, wgrid, p.k)?;
                dump_vectors(ctx, &s)?;
                (json!({ "op": p.op, "lambda1": s.lambda1(), "spectrum": spectrum_json(&s) }), values_summary("weighted", &s.values))
            }
        }
    };
    Ok(Outcome { results, summary })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ThetaCmd {
    pub gamma: f64,
    pub xi_lo: f64,
    pub xi_hi: f64,
    #[serde(flatten)]
    pub grid: LineGrid,
}

impl Default for ThetaCmd {
    fn default() -> Self {
        let t = ThetaParams::new(0.0);
        ThetaCmd { gamma: 0.0, xi_lo: t.xi_window.0, xi_hi: t.xi_window.1, grid: LineGrid::default() }
    }
}

pub fn theta(ctx: &Context, p: ThetaCmd) -> CommandResult {
    let r = theta_fn(ThetaParams { gamma: p.gamma, xi_window: (p.xi_lo, p.xi_hi) }, p.grid.build()?)?;
    let (xs, ys): (Vec<f64>, Vec<f64>) = r.search.trace.iter().copied().unzip();
    io::write_columns(&ctx.out.join("trace.csv"), &["xi".into(), "mu".into()], &[xs, ys])?;
    Ok(Outcome {
        results: json!({
            "gamma": r.gamma,
            "value": r.value,
            "xi_star": r.xi_star,
            "window": r.search.window,
            "extensions": r.search.extensions,
        }),
        summary: format!("Theta({}) = {:.12} at xi = {:.10}\n", r.gamma, r.value, r.xi_star),
    })
}

pub fn find_a0(_ctx: &Context, p: LineGrid) -> CommandResult {
    let r = scan_a0(p.build()?)?;
    Ok(Outcome {
        results: serde_json::to_value(r).map_err(AppError::from)?,
        summary: format!("A0 = {:.8} (mu(0) = {:.10}, mu(A0) = {:.10})\n", r.a0, r.mu_at_zero, r.mu_at_a0),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TableParams {
    pub order: usize,
    pub table_truncation: f64,
    pub table_points: usize,
}

impl Default for TableParams {
    fn default() -> Self {
        let s = SeriesSource::default();
        TableParams { order: s.order, table_truncation: s.table_truncation, table_points: s.table_points }
    }
}

fn build_table_file(order: usize, src: &SeriesSource) -> AppResult<TableFile> {
    let grid = src.grid()?;
    let coarse = build_table(order, grid)?;
    let fine = build_table(order, grid.refined())?;
    let coefficients = SeriesCoefficients::richardson(&coarse.coefficients, &fine.coefficients)?;
    Ok(TableFile { format_version: FORMAT_VERSION, order, grid, coefficients, table: fine })
}

/// The table named by `src.table`, else the cached one for `(order, grid)`, built on a miss.
pub(super) fn obtain_table(ctx: &Context, src: &SeriesSource) -> AppResult<TableFile> {
    if let Some(path) = &src.table {
        let file = TableFile::load(path)?;
        if file.order < src.order {
            return Err(AppError::Config(format!("{}: table order {} below {}", path.display(), file.order, src.order)));
        }
        return Ok(file);
    }
    let grid = src.grid()?;
    let path = io::table_cache_path(&ctx.cache, src.order, &grid);
    if path.exists() {
        return TableFile::load(&path);
    }
    let file = build_table_file(src.order, src)?;
    fs::create_dir_all(&ctx.cache)?;
    io::write_json(&path, &file)?;
    Ok(file)
}

/// `A₀` from the source, else from the threshold scan on the default half-line grid.
pub(super) fn obtain_a0(src: &SeriesSource) -> AppResult<f64> {
    match src.a0 {
        Some(a0) => Ok(a0),
        None => Ok(scan_a0(LineGrid::default().build()?)?.a0),
    }
}

pub fn perturb_table(ctx: &Context, p: TableParams) -> CommandResult {
    let src = SeriesSource { order: p.order, table_truncation: p.table_truncation, table_points: p.table_points, ..Default::default() };
    let file = obtain_table(ctx, &src)?;
    io::write_json(&ctx.out.join("table.json"), &file)?;
    let (mut js, mut ps, mut mus) = (Vec::new(), Vec::new(), Vec::new());
    let mut summary = String::new();
    for (j0, row) in file.coefficients.mu.iter().enumerate() {
        for (pp, mu) in row.iter().enumerate() {
            js.push((j0 + 1) as f64);
            ps.push(pp as f64);
            mus.push(*mu);
            let _ = writeln!(summary, "mu[{}][{pp}] = {mu:.10}", j0 + 1);
        }
    }
    io::write_columns(&ctx.out.join("coefficients.csv"), &["j".into(), "p".into(), "mu".into()], &[js, ps, mus])?;
    Ok(Outcome {
        results: json!({
            "order": file.order,
            "coefficients": file.coefficients.mu,
            "base_level": file.table.base_level,
        }),
        summary,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EnParams {
    pub zeta: f64,
    #[serde(flatten)]
    pub series: SeriesSource,
}

impl Default for EnParams {
    fn default() -> Self {
        EnParams { zeta: 0.1, series: SeriesSource::default() }
    }
}

pub fn en(ctx: &Context, p: EnParams) -> CommandResult {
    let file = obtain_table(ctx, &p.series)?;
    let a0 = obtain_a0(&p.series)?;
    let r = e_n(&file.coefficients.truncated(p.series.order), p.zeta, a0)?;
    let quarter = 0.25 * p.zeta * p.zeta;
    Ok(Outcome {
        results: json!({
            "zeta": p.zeta,
            "order": p.series.order,
            "a0": a0,
            "value": r.value,
            "xi_star": r.xi_star,
            "quarter_zeta_sq": quarter,
        }),
        summary: format!("e_{}({}) = {:.12} (zeta^2/4 = {quarter:.12}) at xi = {:.10}\n", p.series.order, p.zeta, r.value, r.xi_star),
    })
}
