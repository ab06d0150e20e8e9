//! File formats: flat config files, run manifests, perturbation table files and the
//! plot-ready CSVs.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use magrobin_core::linalg::Grid1D;
use magrobin_core::series::{PerturbationTable, SeriesCoefficients};
use magrobin_core::solver2d::{GroundMode, GroundState2D};
use magrobin_core::geometry::DomainGeometry;
use magrobin_core::Complex64;

use crate::error::{AppError, AppResult};

pub const FORMAT_VERSION: u32 = 1;

/// Reads a flat `key = value` file (TOML syntax, `#` comments). Values may be scalars or
/// arrays of scalars; sections and inline tables are rejected.
pub fn read_flat_config(path: &Path) -> AppResult<toml::Table> {
    let text = fs::read_to_string(path)?;
    parse_flat_config(&text)
}

pub fn parse_flat_config(text: &str) -> AppResult<toml::Table> {
    let table: toml::Table = toml::from_str(text).map_err(|e| AppError::Config(e.to_string()))?;
    for (key, value) in &table {
        let nested = match value {
            toml::Value::Table(_) => true,
            toml::Value::Array(items) => items.iter().any(|v| matches!(v, toml::Value::Table(_) | toml::Value::Array(_))),
            _ => false,
        };
        if nested {
            return Err(AppError::Config(format!("key `{key}`: nested values are not allowed")));
        }
    }
    Ok(table)
}

/// Pretty JSON with a trailing newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> AppResult<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> AppResult<T> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

/// Everything needed to replay a run: the subcommand and its fully resolved parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub format_version: u32,
    pub command: String,
    pub params: serde_json::Value,
}

/// A perturbation table together with its two-grid extrapolated coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableFile {
    pub format_version: u32,
    pub order: usize,
    /// Coarse grid; the stored table lives on its refinement.
    pub grid: Grid1D,
    /// Richardson combination of the coarse and fine coefficients.
    pub coefficients: SeriesCoefficients,
    pub table: PerturbationTable,
}

impl TableFile {
    pub fn load(path: &Path) -> AppResult<Self> {
        let file: TableFile = read_json(path)?;
        if file.format_version != FORMAT_VERSION {
            return Err(AppError::Config(format!(
                "{}: table format version {} is not supported",
                path.display(),
                file.format_version
            )));
        }
        Ok(file)
    }
}

/// Cache file name for a table of `order` built on `grid`; exact in the grid's bits.
pub fn table_cache_path(cache_dir: &Path, order: usize, grid: &Grid1D) -> PathBuf {
    cache_dir.join(format!("table-o{order}-n{}-d{:016x}.json", grid.n_points(), grid.spacing().to_bits()))
}

/// One line of `sweep.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCsvRow {
    pub h: f64,
    pub zeta: f64,
    pub lambda1: f64,
    pub residual: f64,
    pub truncation_mass: f64,
    pub predicted: f64,
    pub remainder: f64,
}

pub const SWEEP_HEADER: [&str; 7] = ["h", "zeta", "lambda1", "residual", "truncation_mass", "predicted", "remainder"];

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> AppResult<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_error)?;
    for row in rows {
        w.serialize(row).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_sweep_csv(path: &Path) -> AppResult<Vec<SweepCsvRow>> {
    let mut r = csv::Reader::from_path(path).map_err(csv_error)?;
    let header = r.headers().map_err(csv_error)?;
    if header.iter().ne(SWEEP_HEADER) {
        return Err(AppError::Config(format!("{}: unexpected sweep header", path.display())));
    }
    r.deserialize().map(|row| row.map_err(csv_error)).collect()
}

/// One node of an eigenvector dump.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenvectorRow {
    pub s: f64,
    pub t: f64,
    pub re: f64,
    pub im: f64,
    pub abs2: f64,
}

/// Nodes of a ground state in boundary coordinates. Disk states are radial: one row per
/// radius at `s = 0`.
pub fn eigenvector_rows(gs: &GroundState2D, g: &DomainGeometry) -> Vec<EigenvectorRow> {
    let row = |s: f64, t: f64, u: Complex64| EigenvectorRow { s, t, re: u.re, im: u.im, abs2: u.norm_sqr() };
    match &gs.mode {
        GroundMode::Strip { grid, values, .. } => (0..grid.n_t)
            .flat_map(|j| (0..grid.n_s).map(move |i| (i, j)))
            .map(|(i, j)| row(grid.s(g, i), grid.t(j), values[j * grid.n_s + i]))
            .collect(),
        GroundMode::Disk { radii, profile, .. } => {
            radii.iter().zip(profile).map(|(r, f)| row(0.0, radii[0] - r, Complex64::new(*f, 0.0))).collect()
        }
    }
}

/// Boundary points `x1,x2` per row; an optional non-numeric first row is a header.
pub fn read_boundary_csv(path: &Path) -> AppResult<Vec<(f64, f64)>> {
    let mut r = csv::ReaderBuilder::new().has_headers(false).comment(Some(b'#')).trim(csv::Trim::All).from_path(path).map_err(csv_error)?;
    let mut points = Vec::new();
    for (k, record) in r.records().enumerate() {
        let record = record.map_err(csv_error)?;
        if record.len() != 2 {
            return Err(AppError::Config(format!("{}: row {} needs two columns", path.display(), k + 1)));
        }
        match (record[0].parse::<f64>(), record[1].parse::<f64>()) {
            (Ok(x), Ok(y)) => points.push((x, y)),
            _ if k == 0 => continue,
            _ => return Err(AppError::Config(format!("{}: row {} is not numeric", path.display(), k + 1))),
        }
    }
    Ok(points)
}

fn csv_error(e: csv::Error) -> AppError {
    if e.is_io_error() {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => AppError::Io(io),
            _ => unreachable!("checked io kind"),
        }
    } else {
        AppError::Config(format!("csv: {e}"))
    }
}

/// Column-major numeric CSV with the given header.
pub fn write_columns(path: &Path, header: &[String], columns: &[Vec<f64>]) -> AppResult<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_error)?;
    w.write_record(header).map_err(csv_error)?;
    let rows = columns.iter().map(Vec::len).min().unwrap_or(0);
    for k in 0..rows {
        w.write_record(columns.iter().map(|c| c[k].to_string())).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}
