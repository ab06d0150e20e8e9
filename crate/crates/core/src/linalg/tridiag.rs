use alloc::vec;
use alloc::vec::Vec;

use super::EigenPair;
use crate::error::{invalid, Error, Result};
use crate::num::{sqrt, XorShift};

/// Symmetric tridiagonal stiffness `K` with an optional diagonal mass `W`.
///
/// The represented operator is `A = W⁻¹K`; without a weight it is `K` itself.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diagonal: Vec<f64>,
    pub off_diagonal: Vec<f64>,
    pub weight: Option<Vec<f64>>,
}

impl SymTridiagonal {
    pub fn new(diagonal: Vec<f64>, off_diagonal: Vec<f64>, weight: Option<Vec<f64>>) -> Result<Self> {
        let n = diagonal.len();
        if n == 0 || off_diagonal.len() + 1 != n {
            return Err(invalid("off-diagonal must be one shorter than the diagonal"));
        }
        if let Some(w) = &weight {
            if w.len() != n || w.iter().any(|x| !(*x > 0.0)) {
                return Err(invalid("weights must be positive and match the dimension"));
            }
        }
        Ok(SymTridiagonal { diagonal, off_diagonal, weight })
    }

    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    fn w(&self, i: usize) -> f64 {
        self.weight.as_ref().map_or(1.0, |w| w[i])
    }

    /// `K x`.
    pub fn apply_stiffness(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut acc = self.diagonal[i] * x[i];
            if i > 0 {
                acc += self.off_diagonal[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                acc += self.off_diagonal[i] * x[i + 1];
            }
            y[i] = acc;
        }
        y
    }

    /// `A x = W⁻¹ K x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = self.apply_stiffness(x);
        for (i, yi) in y.iter_mut().enumerate() {
            *yi /= self.w(i);
        }
        y
    }

    /// Weighted inner product `Σ x_k y_k w_k`.
    pub fn inner(&self, x: &[f64], y: &[f64]) -> f64 {
        x.iter().zip(y).enumerate().map(|(i, (a, b))| a * b * self.w(i)).sum()
    }

    pub fn norm(&self, x: &[f64]) -> f64 {
        sqrt(self.inner(x, x))
    }

    /// Symmetrically scaled standard form `S = W^{-1/2} K W^{-1/2}`.
    fn scaled(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.dim();
        let d = (0..n).map(|i| self.diagonal[i] / self.w(i)).collect();
        let e = (0..n.saturating_sub(1))
            .map(|i| self.off_diagonal[i] / sqrt(self.w(i) * self.w(i + 1)))
            .collect();
        (d, e)
    }

    /// The `count` smallest eigenvalues, by bisection only.
    pub fn smallest_eigenvalues(&self, count: usize) -> Vec<f64> {
        let (d, e) = self.scaled();
        let bounds = gershgorin(&d, &e);
        (0..count.min(d.len())).map(|i| bisect_kth(&d, &e, i, bounds)).collect()
    }
}

fn gershgorin(d: &[f64], e: &[f64]) -> (f64, f64) {
    let n = d.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { e[i - 1].abs() } else { 0.0 } + if i + 1 < n { e[i].abs() } else { 0.0 };
        lo = lo.min(d[i] - r);
        hi = hi.max(d[i] + r);
    }
    let pad = 1e-12 * (hi - lo).abs().max(hi.abs()).max(lo.abs()).max(1e-300);
    (lo - pad, hi + pad)
}

/// Number of eigenvalues of the tridiagonal `(d, e)` strictly below `x`.
fn sturm_count(d: &[f64], e: &[f64], x: f64, pivmin: f64) -> usize {
    let mut count = 0;
    let mut q = d[0] - x;
    if q.abs() < pivmin {
        q = -pivmin;
    }
    if q < 0.0 {
        count += 1;
    }
    for i in 1..d.len() {
        q = d[i] - x - e[i - 1] * e[i - 1] / q;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn pivmin(e: &[f64]) -> f64 {
    let emax = e.iter().fold(1.0f64, |m, x| m.max(x * x));
    f64::MIN_POSITIVE * emax * 4.0
}

/// The `k`-th (0-based) eigenvalue, bisected to floating-point resolution.
fn bisect_kth(d: &[f64], e: &[f64], k: usize, (mut lo, mut hi): (f64, f64)) -> f64 {
    let pm = pivmin(e);
    for _ in 0..256 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(d, e, mid, pm) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// LU factorization with partial pivoting of a general tridiagonal matrix.
pub(crate) struct TriLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl TriLu {
    /// Factor `tridiag(lower, diag, upper)`; pivots smaller than `guard` are replaced by it.
    pub(crate) fn new(lower: &[f64], diag: &[f64], upper: &[f64], guard: f64) -> Self {
        let n = diag.len();
        let mut dl = lower.to_vec();
        let mut d = diag.to_vec();
        let mut du = upper.to_vec();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i].abs() < guard {
                    d[i] = if d[i] < 0.0 { -guard } else { guard };
                }
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du[i + 1];
                }
                swapped[i] = true;
            }
        }
        if d[n - 1].abs() < guard {
            d[n - 1] = if d[n - 1] < 0.0 { -guard } else { guard };
        }
        TriLu { dl, d, du, du2, swapped }
    }

    pub(crate) fn solve(&self, b: &mut [f64]) {
        let n = self.d.len();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.dl[i] * b[i];
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[n - 1] /= self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}

fn residual_std(d: &[f64], e: &[f64], x: &[f64], lambda: f64) -> f64 {
    let n = d.len();
    let mut acc = 0.0;
    for i in 0..n {
        let mut r = (d[i] - lambda) * x[i];
        if i > 0 {
            r += e[i - 1] * x[i - 1];
        }
        if i + 1 < n {
            r += e[i] * x[i + 1];
        }
        acc += r * r;
    }
    sqrt(acc)
}

fn normalize(x: &mut [f64]) {
    let nrm = sqrt(x.iter().map(|v| v * v).sum());
    for v in x.iter_mut() {
        *v /= nrm;
    }
}

/// The `k` smallest eigenpairs of the pencil, in nondecreasing order.
///
/// Eigenvalues come from Sturm-sequence bisection, eigenvectors from inverse iteration
/// (re-orthogonalized inside clusters). Fails if an eigenvector residual stays above `tol`,
/// raised to `100 ε ‖A‖` where that is larger.
pub fn smallest_eigenpairs(matrix: &SymTridiagonal, k: usize, tol: f64) -> Result<Vec<EigenPair<f64>>> {
    let n = matrix.dim();
    if k > n {
        return Err(invalid("k exceeds the matrix dimension"));
    }
    if !(tol > 0.0) {
        return Err(invalid("tolerance must be positive"));
    }
    let (d, e) = matrix.scaled();
    let bounds = gershgorin(&d, &e);
    let norm = bounds.0.abs().max(bounds.1.abs()).max(f64::MIN_POSITIVE);
    let guard = f64::EPSILON * norm;
    let cluster = 1e-7 * norm;
    // residuals cannot go below roundoff in a matrix of this norm
    let tol = tol.max(100.0 * f64::EPSILON * norm);
    let mut vecs: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut out = Vec::with_capacity(k);
    let lower: Vec<f64> = e.clone();
    for idx in 0..k {
        let lambda = bisect_kth(&d, &e, idx, bounds);
        let shifted: Vec<f64> = d.iter().map(|x| x - lambda).collect();
        let lu = TriLu::new(&lower, &shifted, &e, guard);
        let mut rng = XorShift::new(0x5EED + idx as u64);
        let mut x: Vec<f64> = (0..n).map(|_| rng.next_f64()).collect();
        normalize(&mut x);
        let mut best = f64::INFINITY;
        let mut best_x = x.clone();
        for _ in 0..8 {
            lu.solve(&mut x);
            for (j, prev) in vecs.iter().enumerate() {
                let pair: &EigenPair<f64> = &out[j];
                if (pair.value - lambda).abs() <= cluster {
                    let dot: f64 = x.iter().zip(prev).map(|(a, b)| a * b).sum();
                    for (xi, pi) in x.iter_mut().zip(prev) {
                        *xi -= dot * pi;
                    }
                }
            }
            normalize(&mut x);
            let r = residual_std(&d, &e, &x, lambda);
            if r < best {
                best = r;
                best_x.copy_from_slice(&x);
            }
            if best <= 0.1 * tol {
                break;
            }
        }
        if !(best <= tol) {
            return Err(Error::NonConvergence { best_residual: best, iterations: 8 });
        }
        // fix the sign so that the largest-magnitude entry is positive
        let imax = best_x
            .iter()
            .enumerate()
            .fold((0, 0.0f64), |m, (i, v)| if v.abs() > m.1 { (i, v.abs()) } else { m })
            .0;
        if best_x[imax] < 0.0 {
            for v in best_x.iter_mut() {
                *v = -*v;
            }
        }
        vecs.push(best_x.clone());
        let vector = best_x.iter().enumerate().map(|(i, v)| v / sqrt(matrix.w(i))).collect();
        out.push(EigenPair { value: lambda, vector, residual: best });
    }
    Ok(out)
}

/// Result of [`deflated_solve`].
#[derive(Debug, Clone, PartialEq)]
pub struct DeflatedSolution {
    pub solution: Vec<f64>,
    /// `‖A x − P rhs‖` in the weighted norm.
    pub residual: f64,
}

/// Solve `A x = P rhs` with `x ⊥ kernel`, where `P` removes the `kernel` component.
///
/// Uses the bordered-system formula with two tridiagonal solves, which is exact when
/// `kernel` is an eigenvector of `A` and stays well-posed when `A` is singular along it.
pub fn deflated_solve(matrix: &SymTridiagonal, kernel: &[f64], rhs: &[f64]) -> Result<DeflatedSolution> {
    let n = matrix.dim();
    if kernel.len() != n || rhs.len() != n {
        return Err(invalid("kernel and rhs must match the matrix dimension"));
    }
    let (d, e) = matrix.scaled();
    let bounds = gershgorin(&d, &e);
    let norm = bounds.0.abs().max(bounds.1.abs()).max(1.0);
    if n >= 2 {
        let two = [bisect_kth(&d, &e, 0, bounds), bisect_kth(&d, &e, 1, bounds)];
        let threshold = sqrt(f64::EPSILON) * norm;
        if two[1].abs() <= threshold {
            return Err(Error::NearSingular { second_eigenvalue: two[1] });
        }
    }
    let kk = matrix.inner(kernel, kernel);
    let proj = |v: &mut [f64]| {
        let c = matrix.inner(v, kernel) / kk;
        for (vi, ki) in v.iter_mut().zip(kernel) {
            *vi -= c * ki;
        }
    };
    let mut prhs = rhs.to_vec();
    proj(&mut prhs);

    let lu = TriLu::new(&matrix.off_diagonal, &matrix.diagonal, &matrix.off_diagonal, f64::EPSILON * norm);
    // K y = W f
    let mut y1: Vec<f64> = prhs.iter().enumerate().map(|(i, f)| f * matrix.w(i)).collect();
    lu.solve(&mut y1);
    let mut y2: Vec<f64> = kernel.iter().enumerate().map(|(i, f)| f * matrix.w(i)).collect();
    lu.solve(&mut y2);
    let c = matrix.inner(&y1, kernel) / matrix.inner(&y2, kernel);
    let mut x: Vec<f64> = y1.iter().zip(&y2).map(|(a, b)| a - c * b).collect();
    proj(&mut x);

    let ax = matrix.apply(&x);
    let r: Vec<f64> = ax.iter().zip(&prhs).map(|(a, b)| a - b).collect();
    let residual = matrix.norm(&r);
    Ok(DeflatedSolution { solution: x, residual })
}
