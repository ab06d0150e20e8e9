use std::f64::consts::PI;

use approx::assert_abs_diff_eq;
use magrobin_core::geometry::*;
use proptest::prelude::*;

fn ellipse_points(a: f64, b: f64, n: usize) -> Vec<(f64, f64)> {
    (0..n).map(|k| 2.0 * PI * k as f64 / n as f64).map(|th| (a * th.cos(), b * th.sin())).collect()
}

#[test]
fn disk_values() {
    let g = DomainGeometry::disk(1.5).unwrap();
    assert_abs_diff_eq!(g.perimeter(), 3.0 * PI, epsilon = 1e-14);
    assert_abs_diff_eq!(g.area(), 2.25 * PI, epsilon = 1e-14);
    assert_abs_diff_eq!(g.curvature(0.7), 1.0 / 1.5, epsilon = 1e-15);
    let (k, argmax) = curvature_max(&DomainGeometry::disk(1.0).unwrap());
    assert_eq!((k, argmax), (1.0, Argmax::Everywhere));
    assert!(DomainGeometry::disk(0.0).is_err());
}

#[test]
fn ellipse_curvature_peaks_at_the_major_axis_ends() {
    let g = DomainGeometry::ellipse(2.0, 1.0).unwrap();
    assert_abs_diff_eq!(g.kappa_max(), 2.0, epsilon = 1e-10);
    let Argmax::Points(pts) = g.argmax().clone() else { panic!("ellipse has isolated maxima") };
    assert_eq!(pts.len(), 2);
    let p = g.perimeter();
    assert_abs_diff_eq!(pts[1] - pts[0], p / 2.0, epsilon = 1e-8);
    for s in pts {
        let (x, y) = g.point(s);
        assert_abs_diff_eq!(x.abs(), 2.0, epsilon = 1e-8);
        assert_abs_diff_eq!(y, 0.0, epsilon = 1e-4);
    }
    assert_abs_diff_eq!(g.area(), 2.0 * PI, epsilon = 1e-14);
}

#[test]
fn round_ellipse_is_the_disk() {
    let e = DomainGeometry::ellipse(1.0, 1.0).unwrap();
    let d = DomainGeometry::disk(1.0).unwrap();
    assert_abs_diff_eq!(e.perimeter(), d.perimeter(), epsilon = 1e-10);
    assert_abs_diff_eq!(e.kappa_max(), 1.0, epsilon = 1e-10);
    for s in [0.0, 1.0, 3.0, 5.5] {
        assert_abs_diff_eq!(e.curvature(s), 1.0, epsilon = 1e-10);
    }
}

#[test]
fn strip_gauge_values_and_curl() {
    let d = DomainGeometry::disk(1.0).unwrap();
    assert_eq!(strip_gauge(&d, 0.3, 0.0).unwrap(), (0.0, 0.0));
    assert_abs_diff_eq!(strip_gauge(&d, 0.3, 0.1).unwrap().0, -0.095, epsilon = 1e-15);
    assert!(strip_gauge(&d, 0.3, d.t0() + 0.1).is_err());
    assert!(strip_gauge(&d, 0.3, -0.01).is_err());
    let g = DomainGeometry::ellipse(2.0, 1.0).unwrap();
    let dt = 1e-4;
    for s in [0.0, 0.8, 2.1, 4.0] {
        for t in [0.05, 0.1, 0.2] {
            let a = |t| strip_gauge(&g, s, t).unwrap().0;
            let curl = -(a(t + dt) - a(t - dt)) / (2.0 * dt);
            assert_abs_diff_eq!(curl, g.metric(s, t), epsilon = 1e-8);
        }
    }
}

#[test]
fn flux_twist_cases() {
    let d = DomainGeometry::disk(1.0).unwrap();
    assert_eq!(flux_twist(&d, 0.01, 0.0), 0.0);
    // distance on the circle, since whole flux quanta may land just below 2π
    let circ = |x: f64| x.min(2.0 * PI - x);
    // ζπ/h = 2π·3 and 2π·1
    assert!(circ(flux_twist(&d, 0.05, 0.3)) <= 1e-9);
    assert!(circ(flux_twist(&d, 0.01, 0.02)) <= 1e-9);
    assert_abs_diff_eq!(flux_twist(&d, 0.1, 0.05), 0.5 * PI, epsilon = 1e-12);
    assert!((0.0..2.0 * PI).contains(&flux_twist(&d, 0.013, 0.37)));
}

#[test]
fn sampled_boundaries_reproduce_analytic_curvature() {
    let d = DomainGeometry::sampled(ellipse_points(1.0, 1.0, 12000)).unwrap();
    assert_abs_diff_eq!(d.perimeter(), 2.0 * PI, epsilon = 1e-6);
    let e = DomainGeometry::ellipse(2.0, 1.0).unwrap();
    let s = DomainGeometry::sampled(ellipse_points(2.0, 1.0, 12000)).unwrap();
    assert_abs_diff_eq!(s.perimeter(), e.perimeter(), epsilon = 1e-6);
    assert_abs_diff_eq!(s.kappa_max(), 2.0, epsilon = 1e-6);
    for k in 0..40 {
        let arc = e.perimeter() * k as f64 / 40.0;
        assert_abs_diff_eq!(s.curvature(arc), e.curvature(arc), epsilon = 1e-6);
        assert_abs_diff_eq!(d.curvature(arc), 1.0, epsilon = 1e-6);
    }
    assert_eq!(s.sample_arcs().unwrap().len(), 12000);
    assert!(DomainGeometry::sampled(vec![(0.0, 0.0), (1.0, 0.0)]).is_err());
}

#[test]
fn tubular_radius_is_checked() {
    let e = DomainGeometry::ellipse(2.0, 1.0).unwrap();
    assert_abs_diff_eq!(e.t0(), 0.25, epsilon = 1e-10);
    assert!(e.clone().with_t0(0.45).is_ok());
    assert!(e.with_t0(0.5).is_err());
}

#[test]
fn strip_grid_spacing() {
    let g = DomainGeometry::ellipse(2.0, 1.0).unwrap();
    let grid = StripGrid::new(&g, 64, 10, 0.2, 1.0).unwrap();
    assert_abs_diff_eq!(grid.ds(&g), g.perimeter() / 64.0, epsilon = 1e-15);
    assert_abs_diff_eq!(grid.dt(), 0.02, epsilon = 1e-15);
    assert_eq!(grid.unknowns(), 640);
    assert!(StripGrid::new(&g, 63, 10, 0.2, 1.0).is_err());
    assert!(StripGrid::new(&g, 64, 10, 0.3, 1.0).is_err());
    assert!(StripGrid::new(&g, 64, 10, 0.2, 7.0).is_err());
}

proptest! {
    #[test]
    fn metric_stays_positive_on_the_strip(a in 1.0f64..3.0, b in 0.5f64..1.0, s in 0.0f64..20.0, f in 0.0f64..1.0) {
        let g = DomainGeometry::ellipse(a, b).unwrap();
        prop_assert!(g.metric(s, f * g.t0()) >= 0.5 - 1e-9);
        let k = g.curvature(s);
        prop_assert!(k <= g.kappa_max() + 1e-9);
        prop_assert!((g.curvature(s + g.perimeter()) - k).abs() <= 1e-9);
    }
}
