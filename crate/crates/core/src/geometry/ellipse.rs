use alloc::vec::Vec;

use super::quad::gauss8;
use crate::num::{cos, floor, sin, sqrt};
use core::f64::consts::PI;

const PANELS: usize = 256;

/// Arc-length tables for `θ ↦ (a cos θ, b sin θ)`; `s = 0` at `θ = 0`.
#[derive(Debug, Clone)]
pub(crate) struct EllipseArc {
    a: f64,
    b: f64,
    /// `S(2πk/PANELS)`, `k = 0..=PANELS`.
    cumulative: Vec<f64>,
}

impl EllipseArc {
    pub(crate) fn new(a: f64, b: f64) -> Self {
        let d = 2.0 * PI / PANELS as f64;
        let mut cumulative = Vec::with_capacity(PANELS + 1);
        cumulative.push(0.0);
        let mut s = 0.0;
        for k in 0..PANELS {
            s += gauss8(|t| speed(a, b, t), d * k as f64, d * (k + 1) as f64);
            cumulative.push(s);
        }
        EllipseArc { a, b, cumulative }
    }

    pub(crate) fn perimeter(&self) -> f64 {
        self.cumulative[PANELS]
    }

    fn arc(&self, theta: f64) -> f64 {
        let d = 2.0 * PI / PANELS as f64;
        let k = ((theta / d) as usize).min(PANELS - 1);
        self.cumulative[k] + gauss8(|t| speed(self.a, self.b, t), d * k as f64, theta)
    }

    /// Parameter angle at arc length `s` (taken modulo the perimeter).
    pub(crate) fn theta(&self, s: f64) -> f64 {
        let p = self.perimeter();
        let turns = floor(s / p);
        let s0 = s - turns * p;
        let k = self.cumulative.partition_point(|c| *c <= s0).clamp(1, PANELS) - 1;
        let d = 2.0 * PI / PANELS as f64;
        let frac = (s0 - self.cumulative[k]) / (self.cumulative[k + 1] - self.cumulative[k]);
        let mut th = d * (k as f64 + frac);
        for _ in 0..30 {
            let step = (self.arc(th) - s0) / speed(self.a, self.b, th);
            th -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        th + turns * 2.0 * PI
    }

    pub(crate) fn curvature_at_theta(&self, th: f64) -> f64 {
        let (a, b) = (self.a, self.b);
        let q = a * a * sin(th) * sin(th) + b * b * cos(th) * cos(th);
        a * b / (q * sqrt(q))
    }

    pub(crate) fn point_at_theta(&self, th: f64) -> (f64, f64) {
        (self.a * cos(th), self.b * sin(th))
    }
}

fn speed(a: f64, b: f64, t: f64) -> f64 {
    sqrt(a * a * sin(t) * sin(t) + b * b * cos(t) * cos(t))
}
