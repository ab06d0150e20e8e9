//! Command parameters: flat keys merged from a config file and `--key value` pairs,
//! validated against each command's parameter struct.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use magrobin_core::geometry::{DomainGeometry, DomainKind};
use magrobin_core::linalg::Grid1D;
use magrobin_core::solver2d::{DiskGrid, StripPolicy};

use crate::asymptotics::{DomainSpec, SolverKind};
use crate::error::{AppError, AppResult};
use crate::io;

/// Keys handled by the launcher rather than by a command.
pub const RESERVED: [&str; 4] = ["out", "jobs", "config", "cache"];

/// Splits `--key value` pairs (also `--key=value`); kebab-case keys become snake_case.
pub fn parse_pairs(args: &[String]) -> AppResult<Vec<(String, String)>> {
    let mut pairs = Vec::new();
    let mut it = args.iter();
    while let Some(arg) = it.next() {
        let Some(key) = arg.strip_prefix("--") else {
            return Err(AppError::Usage(format!("unexpected argument `{arg}`")));
        };
        let (key, value) = match key.split_once('=') {
            Some((k, v)) => (k.to_string(), v.to_string()),
            None => {
                let v = it.next().ok_or_else(|| AppError::Usage(format!("flag --{key} needs a value")))?;
                (key.to_string(), v.clone())
            }
        };
        pairs.push((key.replace('-', "_"), value));
    }
    Ok(pairs)
}

/// JSON literal if it parses as one, a list if it contains commas, otherwise a string.
fn literal(text: &str) -> Value {
    if let Ok(v) = serde_json::from_str::<Value>(text) {
        if !v.is_object() {
            return v;
        }
    }
    if text.contains(',') {
        return Value::Array(text.split(',').map(|s| literal(s.trim())).collect());
    }
    Value::String(text.to_string())
}

/// Config-file keys overlaid by command-line keys.
pub fn merge(config: Option<&Path>, pairs: &[(String, String)]) -> AppResult<Map<String, Value>> {
    let mut map = match config {
        Some(path) => match serde_json::to_value(io::read_flat_config(path)?)? {
            Value::Object(m) => m,
            _ => unreachable!("a table serializes to an object"),
        },
        None => Map::new(),
    };
    for (k, v) in pairs {
        map.insert(k.clone(), literal(v));
    }
    Ok(map)
}

/// Deserializes `P`, rejecting keys that `P` does not document.
pub fn resolve<P>(map: Map<String, Value>) -> AppResult<P>
where
    P: Default + Serialize + DeserializeOwned,
{
    let Value::Object(known) = serde_json::to_value(P::default())? else {
        unreachable!("parameter structs serialize to objects")
    };
    if let Some(k) = map.keys().find(|k| !known.contains_key(*k)) {
        let mut keys: Vec<&str> = known.keys().map(String::as_str).collect();
        keys.sort_unstable();
        return Err(AppError::Usage(format!("unknown key `{k}`; valid keys: {}", keys.join(", "))));
    }
    serde_json::from_value(Value::Object(map)).map_err(|e| AppError::Usage(format!("bad parameter: {e}")))
}

/// Half-line grid `n_points` nodes on `[0, truncation]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LineGrid {
    pub truncation: f64,
    pub n_points: usize,
}

impl Default for LineGrid {
    fn default() -> Self {
        LineGrid { truncation: 20.0, n_points: 4001 }
    }
}

impl LineGrid {
    pub fn build(&self) -> AppResult<Grid1D> {
        Ok(Grid1D::with_truncation(self.truncation, self.n_points)?)
    }
}

/// Perturbation table source: an explicit file, or the cache keyed by order and grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SeriesSource {
    pub order: usize,
    pub table_truncation: f64,
    pub table_points: usize,
    pub table: Option<PathBuf>,
    /// Overrides `A₀` from the threshold scan.
    pub a0: Option<f64>,
}

impl Default for SeriesSource {
    fn default() -> Self {
        SeriesSource { order: 2, table_truncation: 20.0, table_points: 2001, table: None, a0: None }
    }
}

impl SeriesSource {
    pub fn grid(&self) -> AppResult<Grid1D> {
        Ok(Grid1D::with_truncation(self.table_truncation, self.table_points)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainChoice {
    Disk,
    Ellipse,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DomainParams {
    pub domain: DomainChoice,
    pub radius: f64,
    pub a_axis: f64,
    pub b_axis: f64,
    /// Closed curve, one `x1,x2` point per row (for `domain = "sampled"`).
    pub boundary_csv: Option<PathBuf>,
    pub t0: Option<f64>,
}

impl Default for DomainParams {
    fn default() -> Self {
        DomainParams { domain: DomainChoice::Disk, radius: 1.0, a_axis: 2.0, b_axis: 1.0, boundary_csv: None, t0: None }
    }
}

impl DomainParams {
    pub fn spec(&self) -> AppResult<DomainSpec> {
        let shape = match self.domain {
            DomainChoice::Disk => DomainKind::Disk { radius: self.radius },
            DomainChoice::Ellipse => DomainKind::Ellipse { a_axis: self.a_axis, b_axis: self.b_axis },
            DomainChoice::Sampled => {
                let path = self
                    .boundary_csv
                    .as_ref()
                    .ok_or_else(|| AppError::Usage("domain = sampled needs boundary_csv".into()))?;
                DomainKind::Sampled { points: io::read_boundary_csv(path)? }
            }
        };
        Ok(DomainSpec { shape, t0: self.t0 })
    }

    pub fn build(&self) -> AppResult<DomainGeometry> {
        self.spec()?.build()
    }
}

/// Strip and disk discretization controls.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverParams {
    pub solver: SolverKind,
    pub strip_depth: f64,
    pub strip_min_depth: f64,
    pub strip_t_points: f64,
    pub strip_s_spacing: f64,
    pub richardson: bool,
    pub truncation_limit: f64,
    pub tol: f64,
    pub disk_points: f64,
    pub disk_depth: f64,
}

impl Default for SolverParams {
    fn default() -> Self {
        let s = StripPolicy::default();
        let d = DiskGrid::default();
        SolverParams {
            solver: SolverKind::Disk,
            strip_depth: s.depth,
            strip_min_depth: s.min_depth,
            strip_t_points: s.t_points_per_scale,
            strip_s_spacing: s.s_spacing,
            richardson: s.richardson,
            truncation_limit: s.truncation_limit,
            tol: s.tol,
            disk_points: d.points_per_scale,
            disk_depth: d.depth,
        }
    }
}

impl SolverParams {
    pub fn strip(&self) -> StripPolicy {
        StripPolicy {
            depth: self.strip_depth,
            min_depth: self.strip_min_depth,
            t_points_per_scale: self.strip_t_points,
            s_spacing: self.strip_s_spacing,
            richardson: self.richardson,
            truncation_limit: self.truncation_limit,
            tol: self.tol,
        }
    }

    pub fn disk(&self) -> DiskGrid {
        DiskGrid { points_per_scale: self.disk_points, depth: self.disk_depth }
    }
}

/// `ζ` given directly or as `c·h^ε`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct FieldParams {
    pub h: Option<f64>,
    pub zeta: Option<f64>,
    pub epsilon: Option<f64>,
    pub c: Option<f64>,
}

impl FieldParams {
    pub fn h(&self) -> AppResult<f64> {
        self.h.ok_or_else(|| AppError::Usage("missing key `h`".into()))
    }

    pub fn zeta(&self) -> AppResult<f64> {
        match (self.zeta, self.epsilon, self.c) {
            (Some(z), None, None) => Ok(z),
            (None, Some(e), Some(c)) => Ok(c * self.h()?.powf(e)),
            _ => Err(AppError::Usage("give either `zeta` or both `epsilon` and `c`".into())),
        }
    }

    /// `ε` of the regime, or `None` when `ζ` was given directly.
    pub fn epsilon(&self) -> Option<f64> {
        self.epsilon
    }
}
