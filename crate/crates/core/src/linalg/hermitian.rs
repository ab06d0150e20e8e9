use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{hermitian_jacobi, BandLdl, EigenPair};
use crate::error::{invalid, Error, Result};
use crate::num::{sqrt, XorShift};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
/// Problems up to this size are diagonalized densely.
const DENSE_LIMIT: usize = 96;
const MAX_KRYLOV: usize = 320;

/// Sparse Hermitian stiffness `K` with diagonal mass `W`, stored row-compressed.
#[derive(Debug, Clone)]
pub struct HermitianSparse {
    dimension: usize,
    row_start: Vec<usize>,
    columns: Vec<usize>,
    values: Vec<Complex64>,
    weight: Vec<f64>,
    bandwidth: usize,
}

impl HermitianSparse {
    /// Builds from triplets; duplicates are summed. Both triangles must be present and
    /// agree up to conjugation. `weight = None` means the identity mass.
    pub fn new(
        dimension: usize,
        mut entries: Vec<(usize, usize, Complex64)>,
        weight: Option<Vec<f64>>,
    ) -> Result<Self> {
        if dimension == 0 {
            return Err(invalid("empty matrix"));
        }
        let weight = weight.unwrap_or_else(|| vec![1.0; dimension]);
        if weight.len() != dimension || weight.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
            return Err(invalid("mass weights must be positive and match the dimension"));
        }
        if entries.iter().any(|&(i, j, z)| i >= dimension || j >= dimension || !z.is_finite()) {
            return Err(invalid("matrix entry out of range or not finite"));
        }
        entries.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut row_start = vec![0usize; dimension + 1];
        let mut columns = Vec::with_capacity(entries.len());
        let mut values: Vec<Complex64> = Vec::with_capacity(entries.len());
        let mut last: Option<(usize, usize)> = None;
        let mut bandwidth = 0;
        for (i, j, z) in entries {
            if last == Some((i, j)) {
                *values.last_mut().unwrap() += z;
                continue;
            }
            last = Some((i, j));
            columns.push(j);
            values.push(z);
            row_start[i + 1] += 1;
            bandwidth = bandwidth.max(i.abs_diff(j));
        }
        for i in 0..dimension {
            row_start[i + 1] += row_start[i];
        }
        let m = HermitianSparse { dimension, row_start, columns, values, weight, bandwidth };
        m.check_hermitian()?;
        Ok(m)
    }

    fn check_hermitian(&self) -> Result<()> {
        let scale = self.values.iter().fold(0.0f64, |a, z| a.max(z.norm()));
        for i in 0..self.dimension {
            for p in self.row_start[i]..self.row_start[i + 1] {
                let j = self.columns[p];
                let z = self.values[p];
                let t = self.get(j, i);
                if (z - t.conj()).norm() > 1e-12 * scale.max(1.0) {
                    return Err(invalid("matrix is not Hermitian"));
                }
            }
        }
        Ok(())
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        let row = &self.columns[self.row_start[i]..self.row_start[i + 1]];
        match row.binary_search(&j) {
            Ok(p) => self.values[self.row_start[i] + p],
            Err(_) => ZERO,
        }
    }

    pub fn dim(&self) -> usize {
        self.dimension
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    pub fn weight(&self) -> &[f64] {
        &self.weight
    }

    pub fn nonzeros(&self) -> usize {
        self.values.len()
    }

    /// `y = K x`.
    pub fn apply_stiffness(&self, x: &[Complex64], y: &mut [Complex64]) {
        for i in 0..self.dimension {
            let mut s = ZERO;
            for p in self.row_start[i]..self.row_start[i + 1] {
                s += self.values[p] * x[self.columns[p]];
            }
            y[i] = s;
        }
    }

    /// `⟨x, y⟩ = Σ w_i x_i ȳ_i`.
    pub fn inner(&self, x: &[Complex64], y: &[Complex64]) -> Complex64 {
        x.iter().zip(y).zip(&self.weight).map(|((a, b), w)| a * b.conj() * *w).sum()
    }

    pub fn norm(&self, x: &[Complex64]) -> f64 {
        sqrt(x.iter().zip(&self.weight).map(|(a, w)| a.norm_sqr() * w).sum())
    }

    /// Quadratic form `⟨K x, x⟩` (unweighted, real for Hermitian `K`).
    pub fn energy(&self, x: &[Complex64]) -> f64 {
        let mut y = vec![ZERO; self.dimension];
        self.apply_stiffness(x, &mut y);
        y.iter().zip(x).map(|(a, b)| (a * b.conj()).re).sum()
    }

    /// Weighted residual `‖W⁻¹K x − λ x‖` for a weighted-unit `x`.
    pub fn residual(&self, x: &[Complex64], lambda: f64) -> f64 {
        let mut y = vec![ZERO; self.dimension];
        self.apply_stiffness(x, &mut y);
        let mut s = 0.0;
        for i in 0..self.dimension {
            let r = y[i] - x[i] * (lambda * self.weight[i]);
            s += r.norm_sqr() / self.weight[i];
        }
        sqrt(s)
    }

    fn to_dense_scaled(&self) -> Vec<Complex64> {
        let n = self.dimension;
        let mut a = vec![ZERO; n * n];
        for i in 0..n {
            for p in self.row_start[i]..self.row_start[i + 1] {
                let j = self.columns[p];
                a[i * n + j] = self.values[p] / sqrt(self.weight[i] * self.weight[j]);
            }
        }
        a
    }

    fn factor_shifted(&self, shift: f64) -> Result<BandLdl> {
        let scale = self.values.iter().fold(0.0f64, |a, z| a.max(z.norm()))
            + shift.abs() * self.weight.iter().fold(0.0f64, |a, w| a.max(*w));
        BandLdl::factor(
            self.dimension,
            self.bandwidth,
            |i, j| {
                let z = self.get(i, j);
                if i == j {
                    z - shift * self.weight[i]
                } else {
                    z
                }
            },
            1e-13 * scale,
        )
    }
}

/// How the eigenpairs were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolvePath {
    Dense,
    ShiftInvert,
    Lanczos,
}

#[derive(Debug, Clone)]
pub struct HermitianSolve {
    pub pairs: Vec<EigenPair<Complex64>>,
    pub path: SolvePath,
    /// Shift actually factored (shift-invert path only).
    pub shift: Option<f64>,
    /// Operator applications spent in the Krylov iteration.
    pub iterations: usize,
}

/// `k` smallest eigenpairs of `W⁻¹K`.
///
/// With a `shift` the pencil `K − σW` is factored and Lanczos runs on its inverse; the
/// inertia of the factorization certifies that no eigenvalue below `σ` is missed. A
/// breakdown of the factorization (shift hits an eigenvalue) retries with a nudged
/// shift, then falls back to plain Lanczos on `W⁻¹K`.
pub fn hermitian_smallest(
    matrix: &HermitianSparse,
    k: usize,
    tol: f64,
    shift: Option<f64>,
) -> Result<HermitianSolve> {
    let n = matrix.dim();
    if k == 0 || k > n {
        return Err(invalid("requested eigenpair count must be in 1..=dim"));
    }
    if n <= DENSE_LIMIT {
        return Ok(dense_smallest(matrix, k));
    }
    if let Some(mut sigma) = shift {
        for attempt in 0..4 {
            match matrix.factor_shifted(sigma) {
                Ok(f) => match shift_invert(matrix, &f, sigma, k, tol) {
                    Ok(s) => return Ok(s),
                    Err(Error::Orthogonality { .. }) if attempt < 3 => {
                        // inertia disagrees with what was found: move the shift lower
                        sigma -= 0.05 * sigma.abs().max(1e-3) * (attempt + 1) as f64;
                    }
                    Err(e) => return Err(e),
                },
                Err(Error::FactorizationBreakdown { .. }) => {
                    sigma -= 1e-6 * sigma.abs().max(1.0);
                }
                Err(e) => return Err(e),
            }
        }
    }
    plain_lanczos(matrix, k, tol)
}

fn dense_smallest(matrix: &HermitianSparse, k: usize) -> HermitianSolve {
    let n = matrix.dim();
    let (vals, vecs) = hermitian_jacobi(&matrix.to_dense_scaled(), n);
    let pairs = (0..k)
        .map(|c| {
            let vector: Vec<Complex64> =
                (0..n).map(|r| vecs[r * n + c] / sqrt(matrix.weight[r])).collect();
            let residual = matrix.residual(&vector, vals[c]);
            EigenPair { value: vals[c], vector, residual }
        })
        .collect();
    HermitianSolve { pairs, path: SolvePath::Dense, shift: None, iterations: 0 }
}

fn shift_invert(
    matrix: &HermitianSparse,
    f: &BandLdl,
    sigma: f64,
    k: usize,
    tol: f64,
) -> Result<HermitianSolve> {
    let below = f.negative_pivots();
    let want = k.max(below);
    let w = &matrix.weight;
    let op = |x: &[Complex64], y: &mut [Complex64]| {
        for i in 0..x.len() {
            y[i] = x[i] * w[i];
        }
        f.solve(y);
    };
    let (mut locked, iterations) = lanczos_with_reruns(matrix, &op, |t| sigma + 1.0 / t, want, tol)?;
    let found_below = locked.iter().filter(|p| p.value < sigma).count();
    if found_below != below || locked.len() < k {
        return Err(Error::Orthogonality { overlap: found_below as f64 - below as f64 });
    }
    locked.truncate(k);
    Ok(HermitianSolve { pairs: locked, path: SolvePath::ShiftInvert, shift: Some(sigma), iterations })
}

/// Lanczos followed by deflated reruns: one start vector only sees one direction of a
/// degenerate eigenspace, so further copies are searched for against the locked pairs.
fn lanczos_with_reruns<Op, Map>(
    matrix: &HermitianSparse,
    op: &Op,
    to_value: Map,
    want: usize,
    tol: f64,
) -> Result<(Vec<EigenPair<Complex64>>, usize)>
where
    Op: Fn(&[Complex64], &mut [Complex64]),
    Map: Fn(f64) -> f64,
{
    let (mut locked, mut iterations) = lanczos(matrix, op, &to_value, want, tol, &[], 0)?;
    for pass in 1..4 {
        let kth = kth_value(&locked, want);
        let (extra, it) = lanczos(matrix, op, &to_value, want, tol, &locked, pass)?;
        iterations += it;
        let fresh: Vec<_> = extra.into_iter().filter(|p| p.value < kth).collect();
        if fresh.is_empty() {
            break;
        }
        locked.extend(fresh);
        locked.sort_by(|a, b| a.value.partial_cmp(&b.value).unwrap());
        locked.truncate(want);
    }
    Ok((locked, iterations))
}

fn kth_value(pairs: &[EigenPair<Complex64>], k: usize) -> f64 {
    if pairs.len() < k {
        f64::INFINITY
    } else {
        // a fresh copy must sit clearly below the current k-th value
        pairs[k - 1].value - 1e-9 * pairs[k - 1].value.abs().max(1e-6)
    }
}

fn plain_lanczos(matrix: &HermitianSparse, k: usize, tol: f64) -> Result<HermitianSolve> {
    let w = &matrix.weight;
    let op = |x: &[Complex64], y: &mut [Complex64]| {
        matrix.apply_stiffness(x, y);
        for i in 0..x.len() {
            y[i] /= w[i];
        }
    };
    let (mut pairs, iterations) = lanczos_with_reruns(matrix, &op, |t| t, k, tol)?;
    pairs.truncate(k);
    Ok(HermitianSolve { pairs, path: SolvePath::Lanczos, shift: None, iterations })
}

/// Lanczos with full reorthogonalization in the weighted inner product, deflated against
/// `locked`. `to_value` maps a Ritz value of the iterated operator to an eigenvalue of
/// `W⁻¹K`. Returns the `want` smallest converged pairs.
fn lanczos<Op, Map>(
    matrix: &HermitianSparse,
    op: &Op,
    to_value: Map,
    want: usize,
    tol: f64,
    locked: &[EigenPair<Complex64>],
    seed: u64,
) -> Result<(Vec<EigenPair<Complex64>>, usize)>
where
    Op: Fn(&[Complex64], &mut [Complex64]),
    Map: Fn(f64) -> f64,
{
    let n = matrix.dim();
    let free = n - locked.len();
    let m_max = MAX_KRYLOV.min(free);
    if m_max == 0 {
        return Ok((Vec::new(), 0));
    }
    let mut rng = XorShift::new(0x5eed + seed);
    let mut q0: Vec<Complex64> =
        (0..n).map(|_| Complex64::new(rng.next_f64(), rng.next_f64())).collect();
    for p in locked {
        project_out(matrix, &mut q0, &p.vector);
    }
    let nrm = matrix.norm(&q0);
    q0.iter_mut().for_each(|z| *z /= nrm);
    let mut basis: Vec<Vec<Complex64>> = vec![q0];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut wv = vec![ZERO; n];
    let mut best_residual = f64::INFINITY;
    let mut steps = 0;
    loop {
        let j = basis.len() - 1;
        op(&basis[j], &mut wv);
        steps += 1;
        let a = matrix.inner(&wv, &basis[j]).re;
        alpha.push(a);
        for _ in 0..2 {
            for q in basis.iter() {
                project_out(matrix, &mut wv, q);
            }
            for p in locked {
                project_out(matrix, &mut wv, &p.vector);
            }
        }
        let b = matrix.norm(&wv);
        let m = alpha.len();
        let exhausted = m >= m_max || b <= 1e-13 * a.abs().max(1e-300);
        if m >= want && (m % 8 == 0 || exhausted) {
            let ritz = ritz_pairs(matrix, &basis, &alpha, &beta, &to_value, want);
            best_residual = ritz.iter().map(|p| p.residual).fold(0.0, f64::max);
            if ritz.len() >= want && ritz.iter().all(|p| p.residual <= tol) {
                return Ok((ritz, steps));
            }
            if exhausted {
                let good: Vec<_> = ritz.into_iter().filter(|p| p.residual <= tol).collect();
                if exhausted && m < m_max && !good.is_empty() {
                    // invariant subspace: everything reachable from the start vector
                    return Ok((good, steps));
                }
                return Err(Error::NonConvergence { best_residual, iterations: steps });
            }
        } else if exhausted {
            return Err(Error::NonConvergence { best_residual, iterations: steps });
        }
        beta.push(b);
        let next: Vec<Complex64> = wv.iter().map(|z| z / b).collect();
        basis.push(next);
    }
}

fn project_out(matrix: &HermitianSparse, x: &mut [Complex64], q: &[Complex64]) {
    let c = matrix.inner(x, q);
    for (a, b) in x.iter_mut().zip(q) {
        *a -= c * b;
    }
}

/// Ritz pairs of the tridiagonal projection, mapped and sorted by eigenvalue of `W⁻¹K`;
/// residuals are recomputed against the original pencil.
fn ritz_pairs<Map: Fn(f64) -> f64>(
    matrix: &HermitianSparse,
    basis: &[Vec<Complex64>],
    alpha: &[f64],
    beta: &[f64],
    to_value: &Map,
    want: usize,
) -> Vec<EigenPair<Complex64>> {
    let m = alpha.len();
    let mut t = vec![ZERO; m * m];
    for i in 0..m {
        t[i * m + i] = Complex64::new(alpha[i], 0.0);
        if i + 1 < m {
            t[i * m + i + 1] = Complex64::new(beta[i], 0.0);
            t[(i + 1) * m + i] = Complex64::new(beta[i], 0.0);
        }
    }
    let (theta, z) = hermitian_jacobi(&t, m);
    let mut cand: Vec<(f64, usize)> = theta
        .iter()
        .enumerate()
        .filter(|(_, th)| th.abs() > 1e-300)
        .map(|(c, th)| (to_value(*th), c))
        .collect();
    cand.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    cand.truncate(want);
    let n = matrix.dim();
    cand.into_iter()
        .map(|(value, c)| {
            let mut x = vec![ZERO; n];
            for (r, q) in basis.iter().enumerate().take(m) {
                let zr = z[r * m + c];
                for (xi, qi) in x.iter_mut().zip(q) {
                    *xi += zr * qi;
                }
            }
            let nrm = matrix.norm(&x);
            x.iter_mut().for_each(|v| *v /= nrm);
            let value = rayleigh(matrix, &x).unwrap_or(value);
            let residual = matrix.residual(&x, value);
            EigenPair { value, vector: x, residual }
        })
        .collect()
}

fn rayleigh(matrix: &HermitianSparse, x: &[Complex64]) -> Option<f64> {
    let e = matrix.energy(x);
    let nn = matrix.norm(x);
    (nn > 0.0).then(|| e / (nn * nn))
}
