use approx::assert_abs_diff_eq;
use magrobin_core::linalg::Grid1D;
use magrobin_core::model::{richardson, solve_harm, HarmParams};
use magrobin_core::series::*;
use proptest::prelude::*;

fn table_grid() -> Grid1D {
    Grid1D::with_truncation(20.0, 2001).unwrap()
}

fn extrapolated(order: usize) -> SeriesCoefficients {
    let g = table_grid();
    let coarse = build_table(order, g).unwrap();
    let fine = build_table(order, g.refined()).unwrap();
    SeriesCoefficients::richardson(&coarse.coefficients, &fine.coefficients).unwrap()
}

/// Trapezoid inner product on the table grid.
fn dot(g: &Grid1D, a: &[f64], b: &[f64]) -> f64 {
    let n = a.len();
    (0..n)
        .map(|k| {
            let w = if k == 0 || k + 1 == n { 0.5 } else { 1.0 };
            w * g.spacing() * a[k] * b[k]
        })
        .sum()
}

/// Least-squares slope of `ln y` against `ln x`.
fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

#[test]
fn first_order_coefficients_are_half_minus_one_one() {
    let c = extrapolated(2);
    for (p, want) in [0.5, -1.0, 1.0].into_iter().enumerate() {
        assert_abs_diff_eq!(c.get(1, p), want, epsilon = 1e-6);
    }
    assert_eq!(SeriesCoefficients::first_order().mu[0], vec![0.5, -1.0, 1.0]);
}

#[test]
fn second_moment_of_the_ground_state_is_half() {
    let g = Grid1D::with_truncation(30.0, 30001).unwrap();
    let f: Vec<f64> = (0..g.n_points()).map(|k| g.node(k).powi(2)).collect();
    let u: Vec<f64> = (0..g.n_points()).map(|k| 2.0 * (-2.0 * g.node(k)).exp()).collect();
    assert_abs_diff_eq!(dot(&g, &f, &u), 0.5, epsilon = 1e-6);
}

#[test]
fn correctors_are_orthogonal_and_decay() {
    let t = build_table(2, table_grid()).unwrap();
    let g = t.grid;
    for row in &t.correctors {
        for u in row {
            assert!(dot(&g, u, &t.ground).abs() <= 1e-10);
            // |u(τ)| ≤ C e^{−τ/2} on the tail half, with C fitted and moderate
            let half = u.len() / 2;
            let scale = u.iter().map(|v| v.abs()).fold(1.0, f64::max);
            let c = (half..u.len()).map(|k| u[k].abs() * (0.5 * g.node(k)).exp()).fold(0.0, f64::max);
            assert!(c <= 1e3 * scale, "C = {c}");
        }
    }
    // the ξ² corrector has a vanishing source
    assert!(t.correctors[0][2].iter().all(|v| v.abs() <= 1e-10));
}

#[test]
fn series_polynomial_values() {
    let c = SeriesCoefficients::first_order();
    assert_eq!(lambda_series(&c, 0.0, 0.0), -1.0);
    assert_abs_diff_eq!(lambda_series(&c, 0.1, 0.05), -0.9975, epsilon = 1e-15);
    assert_abs_diff_eq!(f_n(&c, 0.2, 0.1), 0.01, epsilon = 1e-15);
}

#[test]
fn first_order_minimum_is_quarter_zeta_squared() {
    let c = SeriesCoefficients::first_order();
    for zeta in [0.02, 0.1, 0.3, 0.7] {
        let r = e_n(&c, zeta, 1.75).unwrap();
        assert_abs_diff_eq!(r.value, 0.25 * zeta * zeta, epsilon = 1e-10);
        assert_abs_diff_eq!(r.xi_star, 0.5 * zeta, epsilon = 1e-5);
    }
    assert!(e_n(&c, 0.0, 1.75).is_err());
}

#[test]
fn second_order_minimum_departs_at_fourth_order() {
    let c = extrapolated(2);
    let zetas: Vec<f64> = (1..=10).map(|k| 0.02 * k as f64).collect();
    let gaps: Vec<f64> = zetas.iter().map(|&z| (e_n(&c, z, 1.75).unwrap().value - 0.25 * z * z).abs()).collect();
    assert!(slope(&zetas, &gaps) >= 3.9, "{gaps:?}");
    let values: Vec<f64> = (1..50).map(|k| e_n(&c, 0.01 * k as f64, 1.75).unwrap().value).collect();
    assert!(values.windows(2).all(|w| w[1] >= w[0]));
    assert!(e_n(&c, 1e-4, 1.75).unwrap().value < 1e-8);
}

#[test]
fn first_order_series_matches_the_oscillator_to_fourth_order() {
    let c = SeriesCoefficients::first_order();
    let g = Grid1D::with_truncation(20.0, 4001).unwrap();
    let level = |z: f64, g: Grid1D| solve_harm(HarmParams { zeta: z, xi: z / 2.0 }, g, 1).unwrap().lambda1();
    let zetas: Vec<f64> = (0..10).map(|k| 0.02 * 10f64.powf(k as f64 / 9.0)).collect();
    let errs: Vec<f64> = zetas
        .iter()
        .map(|&z| (richardson(level(z, g), level(z, g.refined())) - lambda_series(&c, z, z / 2.0)).abs())
        .collect();
    assert!(slope(&zetas, &errs) >= 3.9, "{errs:?}");
}

#[test]
fn quasimode_residual_shrinks_at_order_four() {
    let t = build_table(1, table_grid()).unwrap();
    let zetas = [0.05, 0.1, 0.2];
    let res: Vec<f64> = zetas.iter().map(|&z| t.quasimode_residual(z, z / 2.0)).collect();
    assert!(slope(&zetas, &res) >= 3.5, "{res:?}");
}

#[test]
fn expansion_order_for_each_regime() {
    assert_eq!(smallest_n_for_eps(0.2).unwrap(), 1);
    assert_eq!(smallest_n_for_eps(0.1).unwrap(), 2);
    assert_eq!(smallest_n_for_eps(1.0 / 6.0).unwrap(), 1);
    assert!(smallest_n_for_eps(0.25).is_err());
    for alpha in [0.35, 0.4, 0.45] {
        let eps = RegimeExponents::epsilon_from_alpha(alpha);
        let n = smallest_n_for_eps(eps).unwrap();
        let cond = |n: usize| (n + 1) as f64 * (1.0 - 2.0 * alpha) / (1.0 - alpha) > 0.5;
        assert!(cond(n) && (n == 1 || !cond(n - 1)), "alpha {alpha}");
    }
}

#[test]
fn regime_exponent_rows() {
    let r = regime_exponents(0.125).unwrap();
    assert_abs_diff_eq!(r.sigma, 0.05, epsilon = 1e-15);
    assert_abs_diff_eq!(r.rho, 7.0 / 16.0, epsilon = 1e-15);
    assert_eq!((r.n, r.b_eps_kind), (2, BEpsKind::En));
    let r = regime_exponents(0.25).unwrap();
    assert_eq!((r.sigma, r.rho, r.b_eps_kind), (0.125, 7.0 / 16.0, BEpsKind::QuarterZetaSq));
    assert_abs_diff_eq!(r.b_eps(0.2, None).unwrap(), 0.01, epsilon = 1e-15);
    let r = regime_exponents(0.5).unwrap();
    assert_eq!((r.rho, r.r_star_lower, r.b_eps_kind), (0.125, 1.75, BEpsKind::Zero));
    assert!(regime_exponents(0.0).is_err());
}

proptest! {
    #[test]
    fn regime_bundle_invariants(eps in 0.01f64..1.0) {
        let r = regime_exponents(eps).unwrap();
        prop_assert!(r.rho > 0.0 && r.rho < 0.5);
        prop_assert!(r.sigma > 0.0 && r.sigma < 1.0);
        prop_assert!(r.r_star_upper > 1.5);
        // below 1/4 the exponent rows force ρ + σ < 1/2, so r* drops under 3/2
        let below = eps < 0.25 - 1e-12;
        prop_assert_eq!(r.conditions_hold, !below);
        prop_assert_eq!(r.r_star_lower > 1.5, !below);
        if eps < 0.25 {
            let n = r.n;
            prop_assert!((2 * n + 2) as f64 * eps > 0.5);
            prop_assert!(n == 1 || (2 * n) as f64 * eps <= 0.5);
        }
    }

    #[test]
    fn series_minimum_bounds_the_window(zeta in 0.01f64..0.5, t in -1.0f64..1.0) {
        let c = SeriesCoefficients::first_order();
        let a0 = 1.75;
        let e = e_n(&c, zeta, a0).unwrap().value;
        prop_assert!(f_n(&c, zeta, t * zeta * a0) >= e - 1e-12);
    }
}
