use newton_extremal::dirichlet::{build_extremal, build_single_cap, solve_omegas, CapGeometry, Discretization};
use newton_extremal::kelvin::*;
use newton_extremal::measure::Potential;
use std::f64::consts::PI;

fn axis_point(n: usize, r: f64, theta: f64) -> Vec<f64> {
    let mut x = vec![0.0; n];
    x[0] = r * theta.cos();
    x[1] = r * theta.sin();
    x
}

/// `(r, θ)` of a point, for feeding axisymmetric potentials.
fn polar(x: &[f64]) -> (f64, f64) {
    let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let rho = x[1..].iter().map(|v| v * v).sum::<f64>().sqrt();
    (r, rho.atan2(x[0]))
}

#[test]
fn lifted_harmonic_measures() {
    let g = CapGeometry::new(3, PI / 4.0, 3.0 * PI / 4.0).unwrap();
    let pair = solve_omegas(&g, &Discretization::default()).unwrap();
    let k = KelvinMap::new(3).unwrap();
    let w1 = |y: &[f64]| {
        k.lift(
            |x: &[f64]| {
                let (r, t) = polar(x);
                pair.omega1_at(r, t).unwrap()
            },
            y,
        )
        .unwrap()
    };
    let w2 = |y: &[f64]| {
        k.lift(
            |x: &[f64]| {
                let (r, t) = polar(x);
                pair.omega2_at(r, t).unwrap()
            },
            y,
        )
        .unwrap()
    };
    // the image of 0 carries the values at the origin
    let (o1, o2) = pair.at_origin();
    assert!((w1(&[0.5, 0.0, 0.0]) - o1).abs() < 1e-12);
    assert!((w2(&[0.5, 0.0, 0.0]) - o2).abs() < 1e-12);
    // the lower cap lands on the flat disk of radius cot(ξ₂/2)/2, where ω₁ vanishes
    let rho = image_radius(g.xi2);
    for s in [0.1, 0.5, 0.9] {
        assert!(w1(&[0.0, s * rho, 0.0]).abs() < 1e-9);
    }
    // and the sphere is the hyperplane: a point of the gap maps to y₁ = 0 outside that disk
    let y = k.forward(&axis_point(3, 1.0, 0.5 * (g.xi1 + g.xi2))).unwrap();
    assert!(y[0].abs() < 1e-15 && y[1].abs() > rho);
}

#[test]
fn slope_converges_to_the_limit() {
    let g = CapGeometry::new(4, PI / 4.0, 3.0 * PI / 4.0).unwrap();
    let sol = build_extremal(&g, &Discretization::default()).unwrap();
    let est = boundary_limit_check(&sol).unwrap();
    assert!(est.relative_error() < 1e-3, "{est:?}");
    assert_eq!(est.raw.len(), 9);
    // the solution really is flat on the lower cap
    assert!((sol.potential(1.0, 2.8).unwrap() - sol.d).abs() < 1e-9);
}

#[test]
fn single_cap_is_rejected() {
    let sol = build_single_cap(PI / 2.0, 3, &Discretization::default()).unwrap();
    assert!(boundary_limit_check(&sol).is_err());
}
