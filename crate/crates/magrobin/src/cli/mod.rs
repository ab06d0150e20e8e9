//! Command-line front end. Every run resolves its parameters, writes `manifest.json`,
//! then `results.json`, the command's CSVs and `summary.txt` into the output directory.
//! Failures write `error.json` instead of results.

mod one_d;
mod params;
mod two_d;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, Parser, Subcommand};
use serde_json::{Map, Value};

use crate::error::{AppError, AppResult};
use crate::io::{self, Manifest, FORMAT_VERSION};

pub use params::{parse_pairs, RESERVED};

#[derive(Debug, Parser)]
#[command(
    name = "magrobin",
    version,
    about = "Ground states of the magnetic Robin Laplacian and their model operators",
    arg_required_else_help = true,
    subcommand_required = false,
    after_help = "Command parameters are `--key value` pairs (or flat `key = value` lines in --config); \
                  run `magrobin <command> --help` for the keys of a command."
)]
struct Cli {
    /// Output directory.
    #[arg(long, env = "MAGROBIN_OUT", default_value = "magrobin-out", global = true)]
    out: PathBuf,
    /// Worker threads for sweeps (0: one per core).
    #[arg(long, env = "MAGROBIN_JOBS", default_value_t = 0, global = true)]
    jobs: usize,
    /// Flat key-value parameter file; command-line keys take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Perturbation table cache (default: <out>/cache).
    #[arg(long, env = "MAGROBIN_CACHE", global = true)]
    cache: Option<PathBuf>,
    /// Replays the command and parameters recorded in a manifest.
    #[arg(long, conflicts_with = "config")]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Args)]
struct Pairs {
    #[arg(trailing_var_arg = true, allow_hyphen_values = true, num_args = 0.., value_name = "--KEY VALUE")]
    pairs: Vec<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Half-line model operators. Keys: op (harm|h00|osc|weighted), zeta, xi, k, shift,
    /// robin_gamma, beta, h, m, sigma_w, delta, bound_m, delta_profile, minimize_xi,
    /// truncation, n_points.
    #[command(name = "solve-1d")]
    Solve1d(Pairs),
    /// Θ(γ) minimized over ξ. Keys: gamma, xi_lo, xi_hi, truncation, n_points.
    Theta(Pairs),
    /// Threshold A₀ of the Robin oscillator. Keys: truncation, n_points.
    FindA0(Pairs),
    /// Expansion coefficients and correctors. Keys: order, table_truncation, table_points.
    PerturbTable(Pairs),
    /// e_n(ζ) from a (cached) table. Keys: zeta, order, table_truncation, table_points, table, a0.
    En(Pairs),
    /// One 2D ground state. Keys: domain, radius, a_axis, b_axis, boundary_csv, t0, h, zeta,
    /// epsilon, c, solver, strip_*, richardson, truncation_limit, tol, disk_*, dump_eigenvector.
    #[command(name = "solve-2d")]
    Solve2d(Pairs),
    /// λ₁ over an h-list with ζ = c·h^ε and the two-term remainder fit. Keys: solve-2d keys
    /// plus h_list, max_dimension, max_wall_seconds, floor and the series keys.
    Sweep(Pairs),
    /// Power fit of the remainder column of a sweep CSV. Keys: input, floor.
    Fit(Pairs),
    /// Diamagnetic gap along a β-list. Keys: domain keys, solver keys, alpha, field_scale,
    /// beta_list, c1, c2 and the series keys.
    Diamag(Pairs),
    /// Localization diagnostics over an h-sweep. Keys: sweep keys plus rho, eta_star.
    Localize(Pairs),
    /// Variational trial energy against the strip ground state. Keys: solve-2d keys plus xi,
    /// cutoff_stretch, compare and the series keys.
    Trial(Pairs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Solve1d(_) => "solve-1d",
            Command::Theta(_) => "theta",
            Command::FindA0(_) => "find-a0",
            Command::PerturbTable(_) => "perturb-table",
            Command::En(_) => "en",
            Command::Solve2d(_) => "solve-2d",
            Command::Sweep(_) => "sweep",
            Command::Fit(_) => "fit",
            Command::Diamag(_) => "diamag",
            Command::Localize(_) => "localize",
            Command::Trial(_) => "trial",
        }
    }

    fn pairs(&self) -> &[String] {
        match self {
            Command::Solve1d(p)
            | Command::Theta(p)
            | Command::FindA0(p)
            | Command::PerturbTable(p)
            | Command::En(p)
            | Command::Solve2d(p)
            | Command::Sweep(p)
            | Command::Fit(p)
            | Command::Diamag(p)
            | Command::Localize(p)
            | Command::Trial(p) => &p.pairs,
        }
    }
}

/// Launcher settings shared by every command.
pub(crate) struct Context {
    pub out: PathBuf,
    pub cache: PathBuf,
    pub jobs: usize,
}

/// What a command hands back for `results.json` and `summary.txt`.
pub(crate) struct Outcome {
    pub results: Value,
    pub summary: String,
}

/// A command that fails after producing partial results.
pub(crate) struct Partial {
    pub outcome: Outcome,
    pub error: AppError,
}

impl From<magrobin_core::Error> for Box<Partial> {
    fn from(error: magrobin_core::Error) -> Self {
        AppError::from(error).into()
    }
}

pub(crate) type CommandResult = Result<Outcome, Box<Partial>>;

impl From<AppError> for Box<Partial> {
    fn from(error: AppError) -> Self {
        Box::new(Partial { outcome: Outcome { results: Value::Null, summary: String::new() }, error })
    }
}

/// Exit status: 0 success, 1 numerical or IO failure, 2 usage or config error.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let (command, params, ctx) = match prepare(cli) {
        Ok(p) => p,
        Err(e) => return fail(None, &e),
    };
    match execute(&command, params, &ctx) {
        Ok(()) => 0,
        Err(e) => fail(Some(&ctx.out), &e),
    }
}

fn fail(out: Option<&Path>, e: &AppError) -> i32 {
    eprintln!("error: {e}");
    if let Some(out) = out {
        let report = serde_json::json!({ "error": e.kind(), "message": e.to_string() });
        let _ = fs::create_dir_all(out).map(|_| io::write_json(&out.join("error.json"), &report));
    }
    match e {
        AppError::Usage(_) | AppError::Config(_) => {
            if matches!(e, AppError::Usage(_)) {
                eprintln!("{}", Cli::command().render_usage());
            }
            2
        }
        _ => 1,
    }
}

fn prepare(cli: Cli) -> AppResult<(String, Map<String, Value>, Context)> {
    let (mut out, mut jobs, mut config, mut cache) = (cli.out, cli.jobs, cli.config, cli.cache);
    let (command, params) = match (&cli.command, &cli.manifest) {
        (Some(_), Some(_)) => return Err(AppError::Usage("--manifest replaces the subcommand".into())),
        (None, None) => return Err(AppError::Usage("missing subcommand".into())),
        (None, Some(path)) => {
            let m: Manifest = io::read_json(path)?;
            if m.format_version != FORMAT_VERSION {
                return Err(AppError::Config(format!("manifest format version {} is not supported", m.format_version)));
            }
            let Value::Object(map) = m.params else {
                return Err(AppError::Config("manifest params must be an object".into()));
            };
            (m.command, map)
        }
        (Some(cmd), None) => {
            let mut pairs = parse_pairs(cmd.pairs())?;
            // launcher flags written after the subcommand
            pairs.retain(|(k, v)| {
                match k.as_str() {
                    "out" => out = PathBuf::from(v),
                    "config" => config = Some(PathBuf::from(v)),
                    "cache" => cache = Some(PathBuf::from(v)),
                    "jobs" => match v.parse() {
                        Ok(j) => jobs = j,
                        Err(_) => return true,
                    },
                    _ => return true,
                }
                false
            });
            if let Some((k, _)) = pairs.iter().find(|(k, _)| RESERVED.contains(&k.as_str())) {
                return Err(AppError::Usage(format!("bad value for --{k}")));
            }
            (cmd.name().to_string(), params::merge(config.as_deref(), &pairs)?)
        }
    };
    let cache = cache.unwrap_or_else(|| out.join("cache"));
    Ok((command, params, Context { out, cache, jobs }))
}

type Runner = Box<dyn FnOnce(&Context) -> CommandResult>;

/// Resolves `P` now (so bad keys leave no artifacts); the runner records the manifest
/// and then executes `body`.
fn bind<P, F>(command: &str, params: Map<String, Value>, body: F) -> AppResult<Runner>
where
    P: Default + serde::Serialize + serde::de::DeserializeOwned + 'static,
    F: FnOnce(&Context, P) -> CommandResult + 'static,
{
    let p: P = params::resolve(params)?;
    let manifest = Manifest { format_version: FORMAT_VERSION, command: command.to_string(), params: serde_json::to_value(&p)? };
    Ok(Box::new(move |ctx: &Context| {
        io::write_json(&ctx.out.join("manifest.json"), &manifest)?;
        body(ctx, p)
    }))
}

fn execute(command: &str, params: Map<String, Value>, ctx: &Context) -> AppResult<()> {
    let run = match command {
        "solve-1d" => bind(command, params, one_d::solve_1d)?,
        "theta" => bind(command, params, one_d::theta)?,
        "find-a0" => bind(command, params, one_d::find_a0)?,
        "perturb-table" => bind(command, params, one_d::perturb_table)?,
        "en" => bind(command, params, one_d::en)?,
        "solve-2d" => bind(command, params, two_d::solve_2d)?,
        "sweep" => bind(command, params, two_d::sweep)?,
        "fit" => bind(command, params, two_d::fit)?,
        "diamag" => bind(command, params, two_d::diamag)?,
        "localize" => bind(command, params, two_d::localize)?,
        "trial" => bind(command, params, two_d::trial)?,
        other => return Err(AppError::Usage(format!("unknown command `{other}`"))),
    };
    let out = &ctx.out;
    fs::create_dir_all(out)?;
    let _ = fs::remove_file(out.join("error.json"));
    match run(ctx) {
        Ok(outcome) => write_outcome(out, &outcome),
        Err(partial) => {
            if !partial.outcome.results.is_null() {
                write_outcome(out, &partial.outcome)?;
            }
            Err(partial.error)
        }
    }
}

fn write_outcome(out: &Path, outcome: &Outcome) -> AppResult<()> {
    io::write_json(&out.join("results.json"), &outcome.results)?;
    fs::write(out.join("summary.txt"), &outcome.summary)?;
    Ok(())
}
