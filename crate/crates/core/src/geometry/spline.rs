use alloc::vec;
use alloc::vec::Vec;

use super::quad::gauss8;
use crate::error::{invalid, Result};
use crate::linalg::TriLu;
use crate::num::hypot;

/// Closed curve through sample points: periodic cubic splines `x(u)`, `y(u)` in the
/// chord-length parameter, with arc-length tables per segment. Oriented counterclockwise.
#[derive(Debug, Clone)]
pub(crate) struct PeriodicCurve {
    knots: Vec<f64>,
    xs: Vec<f64>,
    ys: Vec<f64>,
    mx: Vec<f64>,
    my: Vec<f64>,
    /// Arc length at each knot, length `n + 1`.
    arc: Vec<f64>,
    area: f64,
}

/// Second derivatives of the periodic cubic spline through `(knots[i], y[i])`.
fn periodic_moments(h: &[f64], y: &[f64]) -> Vec<f64> {
    let n = y.len();
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n]; // off[i] couples i and i+1 (mod n)
    let mut rhs = vec![0.0; n];
    for i in 0..n {
        let hp = h[(i + n - 1) % n];
        let hi = h[i];
        diag[i] = (hp + hi) / 3.0;
        off[i] = hi / 6.0;
        rhs[i] = (y[(i + 1) % n] - y[i]) / hi - (y[i] - y[(i + n - 1) % n]) / hp;
    }
    // Sherman–Morrison on the cyclic corners off[n-1] (rows 0 and n-1)
    let corner = off[n - 1];
    let gamma = -diag[0];
    let mut d = diag.clone();
    d[0] -= gamma;
    d[n - 1] -= corner * corner / gamma;
    let e = &off[..n - 1];
    let lu = TriLu::new(e, &d, e, 1e-300);
    let mut x = rhs;
    lu.solve(&mut x);
    let mut z = vec![0.0; n];
    z[0] = gamma;
    z[n - 1] = corner;
    lu.solve(&mut z);
    let fact = (x[0] + corner * x[n - 1] / gamma) / (1.0 + z[0] + corner * z[n - 1] / gamma);
    for i in 0..n {
        x[i] -= fact * z[i];
    }
    x
}

impl PeriodicCurve {
    pub(crate) fn new(points: &[(f64, f64)]) -> Result<Self> {
        let mut pts: Vec<(f64, f64)> = points.to_vec();
        if pts.len() > 1 && pts[0] == pts[pts.len() - 1] {
            pts.pop();
        }
        let n = pts.len();
        if n < 8 {
            return Err(invalid("a sampled boundary needs at least 8 distinct points"));
        }
        if pts.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(invalid("boundary samples must be finite"));
        }
        let mut signed = 0.0;
        for i in 0..n {
            let (a, b) = (pts[i], pts[(i + 1) % n]);
            signed += a.0 * b.1 - b.0 * a.1;
        }
        if signed < 0.0 {
            pts.reverse();
        }
        let h: Vec<f64> = (0..n)
            .map(|i| {
                let (a, b) = (pts[i], pts[(i + 1) % n]);
                hypot(b.0 - a.0, b.1 - a.1)
            })
            .collect();
        if h.iter().any(|x| !(*x > 0.0)) {
            return Err(invalid("boundary samples must be distinct"));
        }
        let mut knots = vec![0.0; n + 1];
        for i in 0..n {
            knots[i + 1] = knots[i] + h[i];
        }
        let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
        let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
        let mx = periodic_moments(&h, &xs);
        let my = periodic_moments(&h, &ys);
        let mut c = PeriodicCurve { knots, xs, ys, mx, my, arc: vec![0.0; n + 1], area: 0.0 };
        let mut area = 0.0;
        for i in 0..n {
            let (a, b) = (c.knots[i], c.knots[i + 1]);
            let len = gauss8(|u| c.speed(u), a, b);
            c.arc[i + 1] = c.arc[i] + len;
            area += 0.5
                * gauss8(
                    |u| {
                        let (p, d, _) = c.eval(u);
                        p.0 * d.1 - p.1 * d.0
                    },
                    a,
                    b,
                );
        }
        c.area = area;
        Ok(c)
    }

    fn n(&self) -> usize {
        self.xs.len()
    }

    fn segment(&self, u: f64) -> usize {
        self.knots.partition_point(|k| *k <= u).clamp(1, self.n()) - 1
    }

    /// Position, first and second derivative at parameter `u ∈ [0, U]`.
    fn eval(&self, u: f64) -> ((f64, f64), (f64, f64), (f64, f64)) {
        let i = self.segment(u);
        let j = (i + 1) % self.n();
        let h = self.knots[i + 1] - self.knots[i];
        let (l, r) = (self.knots[i + 1] - u, u - self.knots[i]);
        let comp = |y: &[f64], m: &[f64]| {
            let c0 = y[i] / h - m[i] * h / 6.0;
            let c1 = y[j] / h - m[j] * h / 6.0;
            let v = m[i] * l * l * l / (6.0 * h) + m[j] * r * r * r / (6.0 * h) + c0 * l + c1 * r;
            let d = -m[i] * l * l / (2.0 * h) + m[j] * r * r / (2.0 * h) - c0 + c1;
            let dd = (m[i] * l + m[j] * r) / h;
            (v, d, dd)
        };
        let (x, dx, ddx) = comp(&self.xs, &self.mx);
        let (y, dy, ddy) = comp(&self.ys, &self.my);
        ((x, y), (dx, dy), (ddx, ddy))
    }

    fn speed(&self, u: f64) -> f64 {
        let (_, d, _) = self.eval(u);
        hypot(d.0, d.1)
    }

    pub(crate) fn perimeter(&self) -> f64 {
        self.arc[self.n()]
    }

    pub(crate) fn area(&self) -> f64 {
        self.area
    }

    /// Parameter `u` at arc length `s ∈ [0, perimeter)`.
    fn param(&self, s: f64) -> f64 {
        let i = self.arc.partition_point(|a| *a <= s).clamp(1, self.n()) - 1;
        let (a0, a1) = (self.arc[i], self.arc[i + 1]);
        let (k0, k1) = (self.knots[i], self.knots[i + 1]);
        let mut u = k0 + (s - a0) / (a1 - a0) * (k1 - k0);
        for _ in 0..30 {
            let f = a0 + gauss8(|v| self.speed(v), k0, u) - s;
            let step = f / self.speed(u);
            u = (u - step).clamp(k0, k1);
            if step.abs() < 1e-15 * k1.max(1.0) {
                break;
            }
        }
        u
    }

    pub(crate) fn curvature(&self, s: f64) -> f64 {
        let (_, d, dd) = self.eval(self.param(s));
        let sp = hypot(d.0, d.1);
        (d.0 * dd.1 - d.1 * dd.0) / (sp * sp * sp)
    }

    pub(crate) fn point(&self, s: f64) -> (f64, f64) {
        self.eval(self.param(s)).0
    }

    /// Arc length at every sample point.
    pub(crate) fn knot_arcs(&self) -> &[f64] {
        &self.arc[..self.n()]
    }
}

