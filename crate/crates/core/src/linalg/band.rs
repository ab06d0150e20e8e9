use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// `L D Lᴴ` factorization of a banded Hermitian matrix without pivoting.
///
/// Works for indefinite matrices as long as no pivot vanishes; the signs of `D` give the
/// inertia (Sylvester), i.e. the number of eigenvalues below the shift that was applied.
#[derive(Debug, Clone)]
pub struct BandLdl {
    n: usize,
    bw: usize,
    // row i stores L[i, i-bw ..= i-1] at offsets 0..bw (entries with column < 0 unused)
    l: Vec<Complex64>,
    d: Vec<f64>,
}

/// `Σ x_m · conj(y_m)`.
#[inline]
fn dot_conj(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    let (mut r0, mut i0, mut r1, mut i1) = (0.0, 0.0, 0.0, 0.0);
    let mut xc = x.chunks_exact(2);
    let mut yc = y.chunks_exact(2);
    for (a, b) in (&mut xc).zip(&mut yc) {
        r0 += a[0].re * b[0].re + a[0].im * b[0].im;
        i0 += a[0].im * b[0].re - a[0].re * b[0].im;
        r1 += a[1].re * b[1].re + a[1].im * b[1].im;
        i1 += a[1].im * b[1].re - a[1].re * b[1].im;
    }
    for (a, b) in xc.remainder().iter().zip(yc.remainder()) {
        r0 += a.re * b.re + a.im * b.im;
        i0 += a.im * b.re - a.re * b.im;
    }
    Complex64::new(r0 + r1, i0 + i1)
}

/// `Σ x_m · y_m`.
#[inline]
fn dot(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    let (mut r0, mut i0, mut r1, mut i1) = (0.0, 0.0, 0.0, 0.0);
    let mut xc = x.chunks_exact(2);
    let mut yc = y.chunks_exact(2);
    for (a, b) in (&mut xc).zip(&mut yc) {
        r0 += a[0].re * b[0].re - a[0].im * b[0].im;
        i0 += a[0].im * b[0].re + a[0].re * b[0].im;
        r1 += a[1].re * b[1].re - a[1].im * b[1].im;
        i1 += a[1].im * b[1].re + a[1].re * b[1].im;
    }
    for (a, b) in xc.remainder().iter().zip(yc.remainder()) {
        r0 += a.re * b.re - a.im * b.im;
        i0 += a.im * b.re + a.re * b.im;
    }
    Complex64::new(r0 + r1, i0 + i1)
}

impl BandLdl {
    /// Factor the matrix whose lower band is provided by `lower(i, j)` for `i-bw ≤ j ≤ i`.
    pub fn factor<F>(n: usize, bw: usize, mut lower: F, guard: f64) -> Result<Self>
    where
        F: FnMut(usize, usize) -> Complex64,
    {
        let zero = Complex64::new(0.0, 0.0);
        let w = bw.max(1);
        let mut l = vec![zero; n * w];
        let mut d = vec![0.0; n];
        let mut g = vec![zero; w];
        for k in 0..n {
            let j0 = k.saturating_sub(bw);
            let row = k * w;
            for j in j0..k {
                let m0 = j0.max(j.saturating_sub(bw));
                // g[m - j0] = L_km d_m for m < j
                let jrow = j * w;
                let s = lower(k, j) - dot_conj(&g[m0 - j0..j - j0], &l[jrow + m0 + w - j..jrow + w]);
                let lkj = s / d[j];
                l[row + (j + w - k)] = lkj;
                g[j - j0] = lkj * d[j];
            }
            let mut dk = lower(k, k).re;
            for (lkm, gm) in l[row + j0 + w - k..row + w].iter().zip(&g[..k - j0]) {
                dk -= (lkm.conj() * gm).re;
            }
            if !(dk.abs() > guard) {
                return Err(Error::FactorizationBreakdown { row: k });
            }
            d[k] = dk;
        }
        Ok(BandLdl { n, bw: w, l, d })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Number of negative pivots.
    pub fn negative_pivots(&self) -> usize {
        self.d.iter().filter(|x| **x < 0.0).count()
    }

    pub fn solve(&self, b: &mut [Complex64]) {
        let (n, w) = (self.n, self.bw);
        for k in 0..n {
            let j0 = k.saturating_sub(w);
            let row = k * w;
            let s = dot(&self.l[row + j0 + w - k..row + w], &b[j0..k]);
            b[k] -= s;
        }
        for k in 0..n {
            b[k] /= self.d[k];
        }
        // column sweep of Lᴴ: once x_k is final, remove it from the rows above
        for k in (0..n).rev() {
            let xk = b[k];
            let j0 = k.saturating_sub(w);
            let row = k * w;
            for (bj, lkj) in b[j0..k].iter_mut().zip(&self.l[row + j0 + w - k..row + w]) {
                *bj -= lkj.conj() * xk;
            }
        }
    }
}
