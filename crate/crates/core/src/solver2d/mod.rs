//! Ground states of `−(h∇ − iζA)²` with `curl A = 1` and a boundary term
//! `c_∂ ∫_{∂Ω} |u|²` in the form (`c_∂ = −h^{3/2}` for the attractive Robin problem).
//!
//! Two solvers: an exact angular reduction on disks, and a discretization of the
//! boundary strip `{t < t_cut}` in boundary coordinates for general smooth domains.

mod disk;
mod strip;
mod trial;

pub use disk::{solve_disk, DiskMode};
pub use strip::{assemble_strip, solve_strip, StripAssembly, StripPolicy};
pub use trial::{trial_energy, trial_state, TrialEnergy, TrialSetup};

use alloc::vec::Vec;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::geometry::{DomainGeometry, StripGrid};
use crate::linalg::SolvePath;
use crate::num::powf;

/// Radial resolution for the disk solver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskGrid {
    /// Nodes per boundary-layer width `h^{1/2}`.
    pub points_per_scale: f64,
    /// Radial depth kept, in units of `h^{1/2}` (capped at the radius).
    pub depth: f64,
}

impl Default for DiskGrid {
    fn default() -> Self {
        DiskGrid { points_per_scale: 60.0, depth: 16.0 }
    }
}

#[derive(Debug, Clone)]
pub struct MagRobinProblem {
    pub geometry: DomainGeometry,
    pub h: f64,
    /// Field strength multiplying the vector potential.
    pub zeta: f64,
    /// Coefficient of `∫_{∂Ω} |u|²` in the form.
    pub boundary_coefficient: f64,
    pub strip: Option<StripGrid>,
    pub disk: DiskGrid,
}

impl MagRobinProblem {
    /// The Robin problem with boundary coefficient `−h^{3/2}`.
    pub fn new(geometry: DomainGeometry, h: f64, zeta: f64) -> Result<Self> {
        if !(h > 0.0 && h < 1.0) {
            return Err(invalid("semiclassical parameter must lie in (0, 1)"));
        }
        Self::general(geometry, h, zeta, -powf(h, 1.5))
    }

    /// Arbitrary field strength and boundary coefficient, e.g. `h^{1+α}γ`.
    pub fn general(geometry: DomainGeometry, h: f64, zeta: f64, boundary_coefficient: f64) -> Result<Self> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(invalid("semiclassical parameter must be positive"));
        }
        if !(zeta >= 0.0) || !zeta.is_finite() || !boundary_coefficient.is_finite() {
            return Err(invalid("field strength must be nonnegative and coefficients finite"));
        }
        Ok(MagRobinProblem { geometry, h, zeta, boundary_coefficient, strip: None, disk: DiskGrid::default() })
    }

    pub fn with_strip(mut self, grid: StripGrid) -> Self {
        self.strip = Some(grid);
        self
    }

    pub fn with_disk_grid(mut self, disk: DiskGrid) -> Self {
        self.disk = disk;
        self
    }
}

/// How the ground state is represented.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum GroundMode {
    /// `u = f(r) e^{imθ}` in the symmetric gauge.
    Disk { winding: i64, radii: Vec<f64>, profile: Vec<f64>, modes: Vec<DiskMode> },
    /// Nodal values on the strip grid (row-major in `t`, `s` fastest), strip gauge.
    Strip {
        grid: StripGrid,
        values: Vec<Complex64>,
        /// Eigenvalue of the matrix on `grid` itself (before any extrapolation).
        discrete_lambda1: f64,
        path: SolvePath,
        dimension: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundState2D {
    pub lambda1: f64,
    /// Second eigenvalue (counted with multiplicity).
    pub lambda2: f64,
    pub residual: f64,
    /// Fraction of the mass in the deepest 10% of the retained `t`-range.
    pub truncation_mass: f64,
    pub mode: GroundMode,
}
