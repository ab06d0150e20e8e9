use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::num::{atan2, cos, sin, sqrt};

/// Cyclic Jacobi diagonalization of a dense Hermitian matrix (row-major, `n×n`).
///
/// Returns eigenvalues in nondecreasing order and the matching orthonormal eigenvectors
/// as columns of a row-major `n×n` matrix.
pub fn hermitian_jacobi(a: &[Complex64], n: usize) -> (Vec<f64>, Vec<Complex64>) {
    let mut a = a.to_vec();
    let mut v = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        v[i * n + i] = Complex64::new(1.0, 0.0);
    }
    let idx = |r: usize, c: usize| r * n + c;
    for _sweep in 0..100 {
        let mut off = 0.0;
        let mut diag = 0.0;
        for r in 0..n {
            for c in 0..n {
                if r != c {
                    off += a[idx(r, c)].norm_sqr();
                } else {
                    diag += a[idx(r, c)].norm_sqr();
                }
            }
        }
        if off <= 1e-30 * diag.max(f64::MIN_POSITIVE) || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[idx(p, q)];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                let phase = apq / r;
                let app = a[idx(p, p)].re;
                let aqq = a[idx(q, q)].re;
                // U = D·G with D_qq = conj(phase) making the coupling real, G a real rotation
                let theta = 0.5 * atan2(2.0 * r, aqq - app);
                let (c, s) = (cos(theta), sin(theta));
                let upp = Complex64::new(c, 0.0);
                let upq = Complex64::new(s, 0.0);
                let uqp = Complex64::new(-s, 0.0) * phase.conj();
                let uqq = Complex64::new(c, 0.0) * phase.conj();
                for k in 0..n {
                    let akp = a[idx(k, p)];
                    let akq = a[idx(k, q)];
                    a[idx(k, p)] = akp * upp + akq * uqp;
                    a[idx(k, q)] = akp * upq + akq * uqq;
                }
                for k in 0..n {
                    let apk = a[idx(p, k)];
                    let aqk = a[idx(q, k)];
                    a[idx(p, k)] = upp.conj() * apk + uqp.conj() * aqk;
                    a[idx(q, k)] = upq.conj() * apk + uqq.conj() * aqk;
                }
                for k in 0..n {
                    let vkp = v[idx(k, p)];
                    let vkq = v[idx(k, q)];
                    v[idx(k, p)] = vkp * upp + vkq * uqp;
                    v[idx(k, q)] = vkp * upq + vkq * uqq;
                }
                a[idx(p, q)] = Complex64::new(0.0, 0.0);
                a[idx(q, p)] = Complex64::new(0.0, 0.0);
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[idx(i, i)].re.partial_cmp(&a[idx(j, j)].re).unwrap());
    let values = order.iter().map(|&i| a[idx(i, i)].re).collect();
    let mut vecs = vec![Complex64::new(0.0, 0.0); n * n];
    for (new_c, &old_c) in order.iter().enumerate() {
        let mut nrm = 0.0;
        for r in 0..n {
            nrm += v[idx(r, old_c)].norm_sqr();
        }
        let nrm = sqrt(nrm);
        for r in 0..n {
            vecs[idx(r, new_c)] = v[idx(r, old_c)] / nrm;
        }
    }
    (values, vecs)
}
