use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use super::mu_shifted_osc;
use crate::error::{invalid, Error, Result};
use crate::linalg::Grid1D;
use crate::num::golden_section;

/// Boundary coupling `γ` (the form carries `−γ |u(0)|²`) and the initial search window
/// for the momentum `ξ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaParams {
    pub gamma: f64,
    pub xi_window: (f64, f64),
}

impl ThetaParams {
    pub fn new(gamma: f64) -> Self {
        ThetaParams { gamma, xi_window: (-1.0, 3.0) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowMinimum {
    pub argmin: f64,
    pub value: f64,
    /// Final window after extensions.
    pub window: (f64, f64),
    pub extensions: usize,
    /// Every coarse sample `(x, f(x))`, in evaluation order.
    pub trace: Vec<(f64, f64)>,
}

const MAX_EXTENSIONS: usize = 6;

/// Coarse scan of `[lo, hi]` with spacing `step`, golden-section refinement to `rel_tol`.
///
/// While the best sample sits on the window edge the window grows by its own width on
/// that side; after [`MAX_EXTENSIONS`] the search fails. `hard_bounds`, when present,
/// clip the window and a minimizer on a hard bound is accepted.
pub fn minimize_over_window<F>(
    mut f: F,
    window: (f64, f64),
    step: f64,
    rel_tol: f64,
    hard_bounds: Option<(f64, f64)>,
) -> Result<WindowMinimum>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut lo, mut hi) = window;
    if !(hi > lo) || !(step > 0.0) {
        return Err(invalid("minimization window must be nonempty with positive step"));
    }
    if let Some((a, b)) = hard_bounds {
        lo = lo.max(a);
        hi = hi.min(b);
    }
    let mut trace = Vec::new();
    let mut extensions = 0;
    loop {
        let n = (libm::ceil((hi - lo) / step) as usize).max(2);
        let dx = (hi - lo) / n as f64;
        let mut best = (0usize, f64::INFINITY);
        for i in 0..=n {
            let x = lo + dx * i as f64;
            let v = f(x)?;
            trace.push((x, v));
            if v < best.1 {
                best = (i, v);
            }
        }
        let at_lo = best.0 == 0 && hard_bounds.is_none_or(|(a, _)| lo > a);
        let at_hi = best.0 == n && hard_bounds.is_none_or(|(_, b)| hi < b);
        if at_lo || at_hi {
            if extensions == MAX_EXTENSIONS {
                return Err(Error::NoInteriorMinimum { lo, hi, argmin: lo + dx * best.0 as f64 });
            }
            extensions += 1;
            let width = hi - lo;
            if at_lo {
                lo -= width;
            } else {
                hi += width;
            }
            if let Some((a, b)) = hard_bounds {
                lo = lo.max(a);
                hi = hi.min(b);
            }
            continue;
        }
        let x0 = lo + dx * best.0 as f64;
        let (a, b) = ((x0 - dx).max(lo), (x0 + dx).min(hi));
        let mut failure = None;
        let (x, v) = golden_section(
            |x| match f(x) {
                Ok(v) => v,
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::INFINITY
                }
            },
            a,
            b,
            rel_tol,
        );
        if let Some(e) = failure {
            return Err(e);
        }
        let (argmin, value) = if v <= best.1 { (x, v) } else { (x0, best.1) };
        return Ok(WindowMinimum { argmin, value, window: (lo, hi), extensions, trace });
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaResult {
    pub gamma: f64,
    pub value: f64,
    pub xi_star: f64,
    pub search: WindowMinimum,
}

/// `Θ(γ) = min_ξ μ(ξ; γ)` for the shifted oscillator with boundary term `−γ |u(0)|²`.
pub fn theta(p: ThetaParams, grid: Grid1D) -> Result<ThetaResult> {
    let search = minimize_over_window(|xi| mu_shifted_osc(xi, p.gamma, grid), p.xi_window, 0.01, 1e-8, None)?;
    Ok(ThetaResult { gamma: p.gamma, value: search.value, xi_star: search.argmin, search })
}
