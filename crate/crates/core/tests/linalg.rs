use approx::assert_abs_diff_eq;
use magrobin_core::linalg::*;
use magrobin_core::Complex64;
use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;

/// Sorted spectrum of the dense symmetrized pencil `W^{−1/2} K W^{−1/2}`.
fn dense_tridiagonal_spectrum(d: &[f64], e: &[f64], w: &[f64]) -> Vec<f64> {
    let n = d.len();
    let m = DMatrix::from_fn(n, n, |i, j| {
        let k = if i == j {
            d[i]
        } else if i.abs_diff(j) == 1 {
            e[i.min(j)]
        } else {
            0.0
        };
        k / (w[i] * w[j]).sqrt()
    });
    let mut v: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Discrete magnetic ring `−(e^{iφ} shift) + V` with a potential well; banded Hermitian.
fn magnetic_ring(n: usize, phi: f64) -> (Vec<(usize, usize, Complex64)>, DMatrix<Complex64>) {
    let hop = Complex64::from_polar(-1.0, phi);
    let mut entries = Vec::new();
    for i in 0..n {
        let x = (i as f64 / n as f64 - 0.5) * 6.0;
        entries.push((i, i, Complex64::new(2.0 + x * x, 0.0)));
        if i + 1 < n {
            entries.push((i, i + 1, hop));
            entries.push((i + 1, i, hop.conj()));
        }
    }
    let mut dense = DMatrix::zeros(n, n);
    for &(i, j, z) in &entries {
        dense[(i, j)] += z;
    }
    (entries, dense)
}

#[test]
fn three_point_dirichlet_laplacian() {
    let m = SymTridiagonal::new(vec![2.0; 3], vec![-1.0; 2], None).unwrap();
    let p = smallest_eigenpairs(&m, 1, 1e-12).unwrap();
    assert_abs_diff_eq!(p[0].value, 2.0 - 2f64.sqrt(), epsilon = 1e-12);
    assert!(p[0].residual <= 1e-12);
    assert!(SymTridiagonal::new(vec![1.0; 3], vec![1.0; 3], None).is_err());
}

#[test]
fn hermitian_paths_agree_with_a_dense_oracle() {
    for n in [60, 400] {
        let (entries, dense) = magnetic_ring(n, 0.3);
        let a = HermitianSparse::new(n, entries, None).unwrap();
        let mut want: Vec<f64> = SymmetricEigen::new(dense).eigenvalues.iter().copied().collect();
        want.sort_by(f64::total_cmp);
        for shift in [None, Some(want[0] - 0.5)] {
            let s = hermitian_smallest(&a, 3, 1e-9, shift).unwrap();
            for (p, w) in s.pairs.iter().zip(&want) {
                assert_abs_diff_eq!(p.value, *w, epsilon = 1e-8);
                assert!(p.residual <= 1e-8, "n {n} path {:?}: {}", s.path, p.residual);
            }
        }
    }
}

#[test]
fn real_symmetric_hermitian_matches_tridiagonal() {
    // three equal wells: the ground level is threefold up to tunnelling
    let n = 200;
    let d: Vec<f64> = (0..n).map(|i| 2.0 + (i as f64 * 0.1).sin()).collect();
    let e = vec![-1.0; n - 1];
    let t = SymTridiagonal::new(d.clone(), e.clone(), None).unwrap();
    let mut entries: Vec<_> = d.iter().enumerate().map(|(i, v)| (i, i, Complex64::new(*v, 0.0))).collect();
    for i in 0..n - 1 {
        entries.push((i, i + 1, Complex64::new(e[i], 0.0)));
        entries.push((i + 1, i, Complex64::new(e[i], 0.0)));
    }
    let h = HermitianSparse::new(n, entries, None).unwrap();
    let a = smallest_eigenpairs(&t, 2, 1e-10).unwrap();
    let b = hermitian_smallest(&h, 2, 1e-10, None).unwrap();
    for (x, y) in a.iter().zip(&b.pairs) {
        assert_abs_diff_eq!(x.value, y.value, epsilon = 1e-9);
    }
}

#[test]
fn non_hermitian_input_is_rejected() {
    let entries = vec![(0, 1, Complex64::new(1.0, 1.0)), (1, 0, Complex64::new(1.0, 1.0))];
    assert!(HermitianSparse::new(2, entries, None).is_err());
}

#[test]
fn deflated_solve_stays_orthogonal_to_the_kernel() {
    let n = 300;
    // single well, so the kernel is simple
    let d: Vec<f64> = (0..n).map(|i| 2.0 + 1e-4 * (i as f64 - 150.0).powi(2)).collect();
    let m = SymTridiagonal::new(d, vec![-1.0; n - 1], None).unwrap();
    let ground = smallest_eigenpairs(&m, 1, 1e-12).unwrap().remove(0);
    let shifted = SymTridiagonal::new(m.diagonal.iter().map(|x| x - ground.value).collect(), m.off_diagonal.clone(), None).unwrap();
    let rhs: Vec<f64> = (0..n).map(|i| (i as f64 * 0.37).sin()).collect();
    let s = deflated_solve(&shifted, &ground.vector, &rhs).unwrap();
    let dot: f64 = s.solution.iter().zip(&ground.vector).map(|(a, b)| a * b).sum();
    let norm = s.solution.iter().map(|x| x * x).sum::<f64>().sqrt();
    assert!(dot.abs() <= 1e-12 * norm, "{dot}");
    assert!(s.residual <= 1e-8 * norm);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn tridiagonal_pencil_matches_dense(
        d in prop::collection::vec(-3.0f64..3.0, 12),
        e in prop::collection::vec(-2.0f64..2.0, 11),
        w in prop::collection::vec(0.2f64..2.0, 12),
    ) {
        let m = SymTridiagonal::new(d.clone(), e.clone(), Some(w.clone())).unwrap();
        let want = dense_tridiagonal_spectrum(&d, &e, &w);
        let got = smallest_eigenpairs(&m, 3, 1e-10).unwrap();
        for (p, x) in got.iter().zip(&want) {
            prop_assert!((p.value - x).abs() <= 1e-8, "{} vs {}", p.value, x);
        }
        prop_assert!(got.windows(2).all(|q| q[0].value <= q[1].value));
    }
}
