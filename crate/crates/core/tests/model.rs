use approx::assert_abs_diff_eq;
use magrobin_core::linalg::Grid1D;
use magrobin_core::model::*;
use proptest::prelude::*;

fn grid() -> Grid1D {
    Grid1D::with_truncation(20.0, 4001).unwrap()
}

#[test]
fn half_line_robin_ground_state_is_minus_one() {
    let r = lambda_h00(grid()).unwrap();
    assert_eq!(r.value, -1.0);
    assert_abs_diff_eq!(r.extrapolated, -1.0, epsilon = 1e-6);
    assert!(r.overlap >= 1.0 - 1e-8, "overlap {}", r.overlap);
    // √2 e^{−τ} has unit mass
    let g = Grid1D::with_truncation(30.0, 30001).unwrap();
    let mass: f64 = (0..g.n_points())
        .map(|k| {
            let w = if k == 0 || k + 1 == g.n_points() { 0.5 } else { 1.0 };
            w * g.spacing() * ground_state_h00(g.node(k)).powi(2)
        })
        .sum();
    assert_abs_diff_eq!(mass, 1.0, epsilon = 1e-6);
}

#[test]
fn oscillator_matches_first_order_series() {
    let s = solve_harm(HarmParams { zeta: 0.1, xi: 0.05 }, grid(), 2).unwrap();
    assert_abs_diff_eq!(s.lambda1(), -0.9975, epsilon = 1e-4);
    assert!(s.values[1] >= 0.0);
    assert!(s.residuals.iter().all(|r| *r <= DEFAULT_TOL));
}

#[test]
fn weak_field_oscillator_approaches_robin_level() {
    let s = solve_harm(HarmParams { zeta: 1e-3, xi: 0.0 }, grid(), 1).unwrap();
    assert_abs_diff_eq!(s.lambda1(), -1.0, epsilon = 1e-5);
}

#[test]
fn shifted_oscillator_limits() {
    let g = Grid1D::with_truncation(30.0, 6001).unwrap();
    assert_abs_diff_eq!(mu_shifted_osc(8.0, 1.0, g).unwrap(), 1.0, epsilon = 1e-3);
    assert!(mu_shifted_osc(-8.0, 1.0, g).unwrap() > 50.0);
}

#[test]
fn neumann_de_gennes_constant() {
    let t = theta(ThetaParams::new(0.0), grid()).unwrap();
    assert!(t.value > 0.0 && t.value < 1.0);
    assert_abs_diff_eq!(t.value, 0.5901, epsilon = 1e-3);
    assert!(t.xi_star > 0.0);
}

#[test]
fn theta_exceeds_minus_gamma_squared_and_decreases() {
    let g = Grid1D::with_truncation(20.0, 2001).unwrap();
    let gammas = [-1.0, -0.5, 0.0, 0.5];
    let values: Vec<f64> = gammas.iter().map(|&gm| theta(ThetaParams::new(gm), g).unwrap().value).collect();
    for (gm, v) in gammas.iter().zip(&values) {
        if *gm <= 0.0 {
            assert!(*v > -gm * gm);
        }
    }
    // the literal boundary term −γ|u(0)|² makes Θ decreasing in γ
    assert!(values.windows(2).all(|w| w[1] < w[0]), "{values:?}");
}

#[test]
fn theta_is_continuous() {
    let g = Grid1D::with_truncation(20.0, 2001).unwrap();
    for gm in [-2.0, -1.0, 0.0, 1.0, 2.0] {
        let a = theta(ThetaParams::new(gm), g).unwrap().value;
        let b = theta(ThetaParams::new(gm + 1e-3), g).unwrap().value;
        assert!((a - b).abs() <= 1e-2, "gamma {gm}: {a} vs {b}");
    }
}

#[test]
fn threshold_a0_solves_its_defining_equation() {
    let g = grid();
    let r = find_a0(g).unwrap();
    assert!(r.mu_at_zero < 0.5);
    assert_abs_diff_eq!(r.mu_at_a0, 0.5, epsilon = 1e-4);
    for a in [r.a0 + 0.1, r.a0 + 1.0, r.a0 + 3.0] {
        assert!(mu_shifted_osc(a, 1.0, g).unwrap() >= 0.5);
        assert!(mu_shifted_osc(-a, 1.0, g).unwrap() >= 0.5);
    }
    let zeta = 0.05;
    for xi in [r.a0 * zeta, -r.a0 * zeta] {
        let l = solve_harm(HarmParams { zeta, xi }, g, 1).unwrap().lambda1();
        assert!(l >= -1.0 + 1.5 * zeta * zeta, "xi {xi}: {l}");
    }
}

fn weighted(beta: f64, h: f64, zeta: f64, xi: f64, profile: DeltaProfile) -> WeightedParams {
    WeightedParams { zeta, beta, xi, h, m: 0.0, sigma_w: 0.125, delta: 0.4, bound_m: 1.0, delta_profile: profile }
}

#[test]
fn unweighted_family_is_the_cut_oscillator() {
    let p = weighted(0.0, 1e-4, 0.2, 0.1, DeltaProfile::Zero);
    let g = p.grid(2001).unwrap();
    let w = solve_weighted(p, g, 2).unwrap();
    let o = solve_harm(HarmParams { zeta: 0.2, xi: 0.1 }, g, 2).unwrap();
    for (a, b) in w.values.iter().zip(&o.values) {
        assert_abs_diff_eq!(a, b, epsilon = 1e-10);
    }
}

#[test]
fn weighted_second_level_stays_nearly_nonnegative() {
    for (beta, h) in [(0.5, 0.01), (1.0, 0.01), (1.0, 0.0025), (2.0, 0.0025)] {
        let p = WeightedParams { delta: 0.1, ..weighted(beta, h, 0.3, 0.15, DeltaProfile::Metric) };
        let s = solve_weighted(p, p.grid(2001).unwrap(), 2).unwrap();
        let scale = beta * h.powf(0.5 - p.delta);
        assert!(s.values[1] >= -5.0 * scale, "beta {beta} h {h}: {}", s.values[1]);
    }
}

#[test]
fn weighted_critical_regime_far_momenta_are_lifted() {
    let (h, delta) = (0.0025_f64, 0.1);
    let zeta = h.powf(0.25);
    let xi = (3.0 * 2.0 + 2.0) * h.powf(0.25 - delta);
    let p = WeightedParams { delta, ..weighted(0.5, h, zeta, xi, DeltaProfile::Metric) };
    let l = solve_weighted(p, p.grid(4001).unwrap(), 1).unwrap().lambda1();
    assert!(l >= -1.0 + h.powf(0.5 - 2.0 * delta), "{l}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn oscillator_levels_bracket_zero(zeta in 0.01f64..0.9, xi in -1.0f64..1.0) {
        let g = Grid1D::with_truncation(20.0, 1201).unwrap();
        let s = solve_harm(HarmParams { zeta, xi }, g, 2).unwrap();
        prop_assert!(s.values[0] >= -1.0 - 1e-9);
        prop_assert!(s.values[1] >= -1e-9);
        prop_assert!(s.values[0] <= s.values[1]);
    }

    #[test]
    fn a0_threshold_lifts_far_momenta(zeta in 0.02f64..0.3, margin in 1.0f64..3.0, sign in prop::bool::ANY) {
        let g = Grid1D::with_truncation(20.0, 2001).unwrap();
        let a0 = 1.7469;
        let xi = if sign { 1.0 } else { -1.0 } * margin * a0 * zeta;
        let l = solve_harm(HarmParams { zeta, xi }, g, 1).unwrap().lambda1();
        prop_assert!(l >= -1.0 + 1.5 * zeta * zeta);
    }
}
