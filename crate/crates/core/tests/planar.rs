use newton_extremal::planar::*;
use newton_extremal::quadrature::GaussLegendre;
use newton_extremal::{PlanarGeometry, PlanarGeometry32};
use std::f64::consts::PI;

#[test]
fn derivative_integrates_to_the_drop() {
    // trapezoid-free check: many plain GL panels on the gap against the radial formulas
    let g = PlanarGeometry::new(0.9, 2.4).unwrap();
    let (d, m) = g.d_and_m().unwrap();
    let gl = GaussLegendre::<f64>::new(32);
    // θ = ξ₁ + Δ sin²(πs/2) clusters nodes at both square-root ends
    let delta = g.xi2 - g.xi1;
    let integral = gl.integrate(0.0, 1.0, |s| {
        let t = g.xi1 + delta * (0.5 * PI * s).sin().powi(2);
        g.dp_dtheta(t).unwrap() * delta * PI * (0.5 * PI * s).sin() * (0.5 * PI * s).cos()
    });
    assert!((integral - (d - m)).abs() < 1e-6, "{integral} vs {}", d - m);
}

#[test]
fn boundary_values_follow_the_arcs() {
    let g = PlanarGeometry::new(0.5, 2.0).unwrap();
    let (d, m) = g.d_and_m().unwrap();
    assert!((g.boundary_value(0.2, d) - m).abs() < 1e-10);
    assert_eq!(g.boundary_value(2.5, d), d);
    let mid = g.boundary_value(1.2, d);
    assert!(d < mid && mid < m);
}

#[test]
fn moving_the_upper_edge_raises_d() {
    let g = PlanarGeometry::new(0.6, 2.3).unwrap();
    let g2 = PlanarGeometry::new(1.0, 2.3).unwrap();
    let (d, _) = g.d_and_m().unwrap();
    let (d2, _) = g2.d_and_m().unwrap();
    assert!(d2 > d);
    assert!(((d2 - d) - d_shift(&g, &g2)).abs() < 1e-12);
    assert!(check_322(&g, &g2, 1.0).unwrap() > 0.0);
    assert!(check_322(&g, &g2, 2.2).unwrap() > 0.0);
    let rep = check_323(&g, &g2, 60).unwrap();
    assert!(rep.max.abs() < 1e-10);
    assert!(rep.argmax == 0.0 || rep.argmax == PI);
    assert!(check_323(&g2, &g, 10).is_err());
}

#[test]
fn single_precision_geometry() {
    let g = PlanarGeometry32::new(0.6, 2.3).unwrap();
    let (d, m) = g.d_and_m().unwrap();
    let (d64, m64) = PlanarGeometry::new(0.6f32 as f64, 2.3f32 as f64).unwrap().d_and_m().unwrap();
    assert!((d as f64 - d64).abs() < 1e-5 && (m as f64 - m64).abs() < 1e-5);
}
