//! Disk: `u = f(r) e^{imθ}` in the symmetric gauge `A = (−y, x)/2` reduces the operator
//! to the radial forms
//! `∫ (h²|f'|² + (hm/r − ζr/2)² |f|²) r dr + c_∂ R |f(R)|²`,
//! discretized by finite volumes on `r_k = R − kΔ` with exact dual-cell masses `∫ r dr`.

use alloc::vec;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use super::{GroundMode, GroundState2D, MagRobinProblem};
use crate::error::{invalid, Error, Result};
use crate::geometry::DomainKind;
use crate::linalg::{smallest_eigenpairs, SymTridiagonal};
use crate::model::DEFAULT_TOL;
use crate::num::{round, sqrt};

/// Lowest two radial eigenvalues of one angular mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskMode {
    pub winding: i64,
    pub lambda1: f64,
    pub lambda2: f64,
}

const INITIAL_HALF_WIDTH: i64 = 4;
const MAX_HALF_WIDTH: i64 = 1 << 14;

struct Radial {
    radius: f64,
    spacing: f64,
    /// Nodes `0..n_free` carry unknowns.
    n_free: usize,
    /// `true` when the grid reaches the centre.
    full: bool,
}

impl Radial {
    fn new(p: &MagRobinProblem, radius: f64) -> Result<Self> {
        let scale = sqrt(p.h);
        let depth = (p.disk.depth * scale).min(radius);
        if !(p.disk.points_per_scale >= 4.0) || !(p.disk.depth >= 4.0) {
            return Err(invalid("disk grid needs at least 4 points per scale and depth >= 4"));
        }
        let cells = libm::ceil(depth / scale * p.disk.points_per_scale).max(8.0) as usize;
        let full = depth >= radius;
        Ok(Radial { radius, spacing: depth / cells as f64, n_free: cells, full })
    }

    fn r(&self, k: usize) -> f64 {
        (self.radius - k as f64 * self.spacing).max(0.0)
    }

    /// Tridiagonal pencil for winding `m`; the centre node is kept only for `m = 0`.
    fn pencil(&self, p: &MagRobinProblem, m: i64) -> Result<SymTridiagonal> {
        let d = self.spacing;
        let n = if self.full && m == 0 { self.n_free + 1 } else { self.n_free };
        let mut diag = vec![0.0; n];
        let mut off = vec![0.0; n - 1];
        let mut weight = vec![0.0; n];
        for k in 0..n {
            let r = self.r(k);
            weight[k] = if k == 0 {
                0.5 * d * (self.radius - 0.25 * d)
            } else if k == self.n_free {
                d * d / 8.0
            } else {
                d * r
            };
            let pot = if r > 0.0 { p.h * m as f64 / r - 0.5 * p.zeta * r } else { 0.0 };
            diag[k] += weight[k] * pot * pot;
        }
        // every edge k -> k+1 below the last free node, plus the edge into the Dirichlet node
        for k in 0..self.n_free {
            let c = p.h * p.h * (self.radius - (k as f64 + 0.5) * d) / d;
            diag[k] += c;
            if k + 1 < n {
                diag[k + 1] += c;
                off[k] = -c;
            }
        }
        diag[0] += p.boundary_coefficient * self.radius;
        SymTridiagonal::new(diag, off, Some(weight))
    }

    fn mode(&self, p: &MagRobinProblem, m: i64) -> Result<DiskMode> {
        let v = self.pencil(p, m)?.smallest_eigenvalues(2);
        Ok(DiskMode { winding: m, lambda1: v[0], lambda2: v[1] })
    }
}

/// Ground state of a disk problem by angular reduction.
///
/// The winding window starts at `m* = ζR²/(2h)` and doubles until both edge modes lie
/// above the current second eigenvalue; `WindowExhausted` past `|m − m*| = 16384`.
pub fn solve_disk(p: &MagRobinProblem) -> Result<GroundState2D> {
    let radius = match p.geometry.kind() {
        DomainKind::Disk { radius } => *radius,
        _ => return Err(invalid("solve_disk needs a disk")),
    };
    let grid = Radial::new(p, radius)?;
    let centre = round(p.zeta * radius * radius / (2.0 * p.h)) as i64;
    let mut modes: Vec<DiskMode> = Vec::new();
    let (mut lo, mut hi) = (centre, centre - 1);
    let mut half = INITIAL_HALF_WIDTH;
    loop {
        for m in (centre - half)..lo {
            modes.push(grid.mode(p, m)?);
        }
        for m in (hi + 1)..=(centre + half) {
            modes.push(grid.mode(p, m)?);
        }
        lo = centre - half;
        hi = centre + half;
        let (first, second) = lowest_two(&modes);
        let edge = modes
            .iter()
            .filter(|md| md.winding == lo || md.winding == hi)
            .fold(f64::INFINITY, |a, md| a.min(md.lambda1));
        let margin = 1e-3 * p.h;
        if edge > second + margin && edge > first.lambda1 + margin {
            break;
        }
        if half >= MAX_HALF_WIDTH {
            return Err(Error::WindowExhausted { lo, hi });
        }
        half *= 2;
    }
    modes.sort_by_key(|md| md.winding);
    let (best, second) = lowest_two(&modes);

    let pencil = grid.pencil(p, best.winding)?;
    let pairs = smallest_eigenpairs(&pencil, 1, DEFAULT_TOL)?;
    let pair = &pairs[0];
    let n = pair.vector.len();
    let radii: Vec<f64> = (0..n).map(|k| grid.r(k)).collect();
    // unit in ∫|f|² r dr · 2π
    let scale = 1.0 / sqrt(2.0 * core::f64::consts::PI);
    let mut profile: Vec<f64> = pair.vector.iter().map(|x| x * scale).collect();
    if profile[0] < 0.0 {
        profile.iter_mut().for_each(|x| *x = -*x);
    }
    let weight = pencil.weight.as_deref().expect("disk pencil has a mass");
    let deep = 0.9 * grid.n_free as f64 * grid.spacing;
    let total: f64 = (0..n).map(|k| weight[k] * pair.vector[k] * pair.vector[k]).sum();
    let tail: f64 = (0..n)
        .filter(|&k| k as f64 * grid.spacing >= deep)
        .map(|k| weight[k] * pair.vector[k] * pair.vector[k])
        .sum();

    Ok(GroundState2D {
        lambda1: pair.value,
        lambda2: second,
        residual: pair.residual,
        truncation_mass: tail / total,
        mode: GroundMode::Disk { winding: best.winding, radii, profile, modes },
    })
}

/// Lowest mode and the second eigenvalue over all modes (with multiplicity).
fn lowest_two(modes: &[DiskMode]) -> (DiskMode, f64) {
    let mut best = modes[0];
    for md in modes {
        if md.lambda1 < best.lambda1 {
            best = *md;
        }
    }
    let mut second = best.lambda2;
    for md in modes {
        if md.winding != best.winding {
            second = second.min(md.lambda1);
        }
    }
    (best, second)
}
