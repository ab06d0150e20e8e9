//! Boundary parametrizations and the boundary-coordinate strip.
//!
//! Arc length `s` runs counterclockwise, `t` is the distance to the boundary measured
//! inward, and the metric factor is `a(s, t) = 1 − t κ(s)`.

mod ellipse;
mod quad;
mod spline;

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::num::{golden_section, rem_euclid};
use ellipse::EllipseArc;
use spline::PeriodicCurve;

/// Shape of a simply connected smooth domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainKind {
    Disk { radius: f64 },
    Ellipse { a_axis: f64, b_axis: f64 },
    /// Closed curve through the points (closing segment implied).
    Sampled { points: Vec<(f64, f64)> },
}

#[derive(Debug, Clone)]
enum Repr {
    Disk,
    Ellipse(EllipseArc),
    Sampled(PeriodicCurve),
}

/// Where the curvature attains its maximum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Argmax {
    /// Constant curvature.
    Everywhere,
    /// Arc-length positions in `[0, perimeter)`, increasing.
    Points(Vec<f64>),
}

impl Argmax {
    /// First argmax position (`0` when the curvature is constant).
    pub fn first(&self) -> f64 {
        match self {
            Argmax::Everywhere => 0.0,
            Argmax::Points(p) => p[0],
        }
    }
}

#[derive(Debug, Clone)]
pub struct DomainGeometry {
    kind: DomainKind,
    repr: Repr,
    perimeter: f64,
    area: f64,
    kappa_max: f64,
    kappa_abs_max: f64,
    argmax: Argmax,
    t0: f64,
}

/// Samples per unit perimeter used to seed curvature extremum searches.
const SCAN_DENSITY: usize = 2000;

impl DomainGeometry {
    pub fn new(kind: DomainKind) -> Result<Self> {
        let (repr, perimeter, area) = match &kind {
            DomainKind::Disk { radius } => {
                if !(*radius > 0.0) || !radius.is_finite() {
                    return Err(invalid("disk radius must be positive"));
                }
                (Repr::Disk, 2.0 * PI * radius, PI * radius * radius)
            }
            DomainKind::Ellipse { a_axis, b_axis } => {
                if !(*a_axis > 0.0 && *b_axis > 0.0) || !(a_axis.is_finite() && b_axis.is_finite()) {
                    return Err(invalid("ellipse axes must be positive"));
                }
                let arc = EllipseArc::new(*a_axis, *b_axis);
                let p = arc.perimeter();
                (Repr::Ellipse(arc), p, PI * a_axis * b_axis)
            }
            DomainKind::Sampled { points } => {
                let c = PeriodicCurve::new(points)?;
                let (p, a) = (c.perimeter(), c.area());
                (Repr::Sampled(c), p, a)
            }
        };
        let mut g = DomainGeometry {
            kind,
            repr,
            perimeter,
            area,
            kappa_max: 0.0,
            kappa_abs_max: 0.0,
            argmax: Argmax::Everywhere,
            t0: 0.0,
        };
        g.locate_extrema();
        g.t0 = 0.5 / g.kappa_abs_max;
        Ok(g)
    }

    pub fn disk(radius: f64) -> Result<Self> {
        Self::new(DomainKind::Disk { radius })
    }

    pub fn ellipse(a_axis: f64, b_axis: f64) -> Result<Self> {
        Self::new(DomainKind::Ellipse { a_axis, b_axis })
    }

    pub fn sampled(points: Vec<(f64, f64)>) -> Result<Self> {
        Self::new(DomainKind::Sampled { points })
    }

    /// Replaces the tubular radius (default `0.5 / max|κ|`); needs `t0 · max|κ| < 1`.
    pub fn with_t0(mut self, t0: f64) -> Result<Self> {
        if !(t0 > 0.0) || !(t0 * self.kappa_abs_max < 1.0) {
            return Err(invalid("tubular radius must satisfy 0 < t0 and t0 * max|kappa| < 1"));
        }
        self.t0 = t0;
        Ok(self)
    }

    fn locate_extrema(&mut self) {
        match (&self.repr, &self.kind) {
            (Repr::Disk, DomainKind::Disk { radius }) => {
                self.kappa_max = 1.0 / radius;
                self.kappa_abs_max = self.kappa_max;
                self.argmax = Argmax::Everywhere;
            }
            (Repr::Ellipse(_), DomainKind::Ellipse { a_axis, b_axis }) => {
                let (a, b) = (*a_axis, *b_axis);
                if a == b {
                    self.kappa_max = 1.0 / a;
                    self.argmax = Argmax::Everywhere;
                } else if a > b {
                    self.kappa_max = a / (b * b);
                    self.argmax = Argmax::Points(vec![0.0, 0.5 * self.perimeter]);
                } else {
                    self.kappa_max = b / (a * a);
                    self.argmax = Argmax::Points(vec![0.25 * self.perimeter, 0.75 * self.perimeter]);
                }
                self.kappa_abs_max = self.kappa_max;
            }
            _ => self.locate_sampled_extrema(),
        }
    }

    fn locate_sampled_extrema(&mut self) {
        let p = self.perimeter;
        let n = ((p * SCAN_DENSITY as f64) as usize).max(400);
        let ds = p / n as f64;
        let ks: Vec<f64> = (0..n).map(|i| self.curvature(ds * i as f64)).collect();
        self.kappa_abs_max = ks.iter().fold(0.0f64, |m, k| m.max(k.abs()));
        let kmin = ks.iter().cloned().fold(f64::INFINITY, f64::min);
        let kmax = ks.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if kmax - kmin <= 1e-9 * kmax.abs().max(1.0) {
            self.kappa_max = kmax;
            self.argmax = Argmax::Everywhere;
            return;
        }
        let mut peaks: Vec<(f64, f64)> = Vec::new();
        for i in 0..n {
            let (l, c, r) = (ks[(i + n - 1) % n], ks[i], ks[(i + 1) % n]);
            if c >= l && c > r {
                let s0 = ds * i as f64;
                let (s, v) = golden_section(|s| -self.curvature(rem_euclid(s, p)), s0 - ds, s0 + ds, 1e-12);
                peaks.push((rem_euclid(s, p), -v));
            }
        }
        let best = peaks.iter().fold(f64::NEG_INFINITY, |m, x| m.max(x.1));
        let tol = 1e-8 * best.abs().max(1.0);
        let mut pts: Vec<f64> = peaks.iter().filter(|x| x.1 >= best - tol).map(|x| x.0).collect();
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        self.kappa_max = best;
        self.kappa_abs_max = self.kappa_abs_max.max(best.abs());
        self.argmax = Argmax::Points(pts);
    }

    pub fn kind(&self) -> &DomainKind {
        &self.kind
    }

    pub fn perimeter(&self) -> f64 {
        self.perimeter
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn kappa_max(&self) -> f64 {
        self.kappa_max
    }

    /// `max |κ|`, which bounds the admissible tubular radius.
    pub fn kappa_abs_max(&self) -> f64 {
        self.kappa_abs_max
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    /// Curvature at arc length `s` (periodic).
    pub fn curvature(&self, s: f64) -> f64 {
        let s = rem_euclid(s, self.perimeter);
        match (&self.repr, &self.kind) {
            (Repr::Disk, DomainKind::Disk { radius }) => 1.0 / radius,
            (Repr::Ellipse(e), _) => e.curvature_at_theta(e.theta(s)),
            (Repr::Sampled(c), _) => c.curvature(s),
            _ => unreachable!("representation matches kind"),
        }
    }

    /// Boundary point at arc length `s`.
    pub fn point(&self, s: f64) -> (f64, f64) {
        let s = rem_euclid(s, self.perimeter);
        match (&self.repr, &self.kind) {
            (Repr::Disk, DomainKind::Disk { radius }) => {
                let th = s / radius;
                (radius * crate::num::cos(th), radius * crate::num::sin(th))
            }
            (Repr::Ellipse(e), _) => e.point_at_theta(e.theta(s)),
            (Repr::Sampled(c), _) => c.point(s),
            _ => unreachable!("representation matches kind"),
        }
    }

    /// Metric factor `1 − t κ(s)`.
    pub fn metric(&self, s: f64, t: f64) -> f64 {
        1.0 - t * self.curvature(s)
    }

    pub fn argmax(&self) -> &Argmax {
        &self.argmax
    }

    /// Arc length of every sample of a sampled boundary.
    pub fn sample_arcs(&self) -> Option<&[f64]> {
        match &self.repr {
            Repr::Sampled(c) => Some(c.knot_arcs()),
            _ => None,
        }
    }
}

/// `(κ_max, argmax set)`.
pub fn curvature_max(g: &DomainGeometry) -> (f64, Argmax) {
    (g.kappa_max, g.argmax.clone())
}

/// The boundary-coordinate vector potential `(−t + t² κ(s)/2, 0)`, whose curl
/// `−∂_t A₁` equals the metric factor.
pub fn strip_gauge(g: &DomainGeometry, s: f64, t: f64) -> Result<(f64, f64)> {
    if !(0.0..=g.t0).contains(&t) {
        return Err(invalid("t must lie in [0, t0]"));
    }
    Ok((-t + 0.5 * t * t * g.curvature(s), 0.0))
}

/// Flux phase `(ζ/h)·|Ω| mod 2π`.
///
/// The boundary-coordinate gauge has no tangential component on the boundary, so a
/// function single-valued in a global gauge becomes twisted in the strip gauge: with the
/// counterclockwise arc length and the covariant derivative `h∂_s − iζA₁`,
/// `ũ(s + |∂Ω|, t) = e^{−iθ} ũ(s, t)`.
pub fn flux_twist(g: &DomainGeometry, h: f64, zeta: f64) -> f64 {
    rem_euclid(zeta / h * g.area, 2.0 * PI)
}

/// Tensor grid on `[0, |∂Ω|) × [0, t_cut]`; the row `t = t_cut` is a Dirichlet row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StripGrid {
    pub n_s: usize,
    pub n_t: usize,
    pub t_cut: f64,
    /// Wrap phase in `[0, 2π)`.
    pub twist: f64,
}

impl StripGrid {
    pub fn new(g: &DomainGeometry, n_s: usize, n_t: usize, t_cut: f64, twist: f64) -> Result<Self> {
        if n_s < 4 || n_s % 2 == 1 || n_t < 2 {
            return Err(invalid("strip grid needs even n_s >= 4 and n_t >= 2"));
        }
        if !(t_cut > 0.0) || t_cut > g.t0 * (1.0 + 1e-12) {
            return Err(invalid("t_cut must lie in (0, t0]"));
        }
        if !(0.0..2.0 * PI).contains(&twist) {
            return Err(invalid("twist must lie in [0, 2pi)"));
        }
        let grid = StripGrid { n_s, n_t, t_cut, twist };
        for i in 0..n_s {
            if !(g.metric(grid.s(g, i), t_cut) > 0.0) {
                return Err(invalid("metric factor must stay positive on the strip"));
            }
        }
        Ok(grid)
    }

    pub fn ds(&self, g: &DomainGeometry) -> f64 {
        g.perimeter / self.n_s as f64
    }

    pub fn dt(&self) -> f64 {
        self.t_cut / self.n_t as f64
    }

    pub fn s(&self, g: &DomainGeometry, i: usize) -> f64 {
        self.ds(g) * i as f64
    }

    pub fn t(&self, j: usize) -> f64 {
        self.dt() * j as f64
    }

    /// Free unknowns: rows `j = 0..n_t`, s-fastest.
    pub fn unknowns(&self) -> usize {
        self.n_s * self.n_t
    }
}
