use newton_extremal::dirichlet::{build_extremal, CapGeometry, Discretization};
use newton_extremal::measure::*;
use std::f64::consts::PI;

#[test]
fn csv_round_trip_keeps_every_bit() {
    let m = AxisymMeasure::new(4)
        .unwrap()
        .with_atom(0.0, 0.2)
        .unwrap()
        .with_node(1.1, 0.1 / 3.0)
        .unwrap()
        .with_zonal(vec![0.05, 0.01, -0.003])
        .unwrap();
    let text = m.to_csv();
    let back = AxisymMeasure::from_csv(&text).unwrap();
    assert_eq!(back.to_csv(), text);
    for t in [0.3, 1.7, 3.0] {
        assert_eq!(back.potential(0.6, t).unwrap(), m.potential(0.6, t).unwrap());
    }
}

#[test]
fn csv_round_trip_of_a_solved_layer() {
    let g = CapGeometry::new(3, PI / 4.0, 3.0 * PI / 4.0).unwrap();
    let sol = build_extremal(&g, &Discretization::default()).unwrap();
    let text = sol.sigma.to_csv();
    assert!(text.contains("cap_upper") && text.contains("cap_lower"));
    let back = AxisymMeasure::from_csv(&text).unwrap();
    assert_eq!(back.potential(0.5, 1.0).unwrap(), sol.sigma.potential(0.5, 1.0).unwrap());
}

#[test]
fn malformed_csv_is_rejected() {
    assert!(AxisymMeasure::from_csv("theta,mass\n").is_err());
    assert!(AxisymMeasure::from_csv("kind,theta,mass\ndim,3,0\natom,x,1\n").is_err());
    assert!(AxisymMeasure::from_csv("kind,theta,mass\ndim,3,0\natom,1\n").is_err());
}

#[test]
fn newton_sphere_theorem() {
    for n in 3..7 {
        let u = AxisymMeasure::uniform(n).unwrap();
        for t in [0.0, 0.9, 2.5] {
            assert!((u.potential(0.4, t).unwrap() - 1.0).abs() < 1e-13);
            let outside = u.potential(2.0, t).unwrap();
            assert!((outside - 2f64.powi(2 - n as i32)).abs() < 1e-13);
        }
        let pm = AxisymMeasure::point_mass(n, 0.0).unwrap();
        assert!((pm.potential(1.0, PI).unwrap() - 2f64.powi(2 - n as i32)).abs() < 1e-15);
    }
}

#[test]
fn membership_of_simple_measures() {
    let grid = FeasibilityGrid::default();
    let n = 3;
    let u = AxisymMeasure::uniform(n).unwrap();
    assert!(membership_check(&u, 1.0 - 1e-6, 1.0 + 1e-6, &grid).member);
    let pm = AxisymMeasure::point_mass(n, 0.0).unwrap();
    let bounded = membership_check(&pm, 0.5, 50.0, &grid);
    assert!(!bounded.member && bounded.witness.is_some());
    assert!(membership_check(&pm, 0.5, f64::INFINITY, &grid).member);
}

#[test]
fn samples_are_feasible_and_deterministic() {
    let g = CapGeometry::new(3, PI / 3.0, 5.0 * PI / 6.0).unwrap();
    let sol = build_extremal(&g, &Discretization::default()).unwrap();
    let cfg = SamplerConfig::default();
    let grid = FeasibilityGrid::default();
    for seed in 0..10 {
        let p = sample_feasible(sol.d, sol.m, 3, seed, &cfg).unwrap();
        assert!(membership_check(&p, sol.d, sol.m, &grid).member, "seed {seed}");
        assert!((p.total_mass() - 1.0).abs() < 1e-12);
        let again = sample_feasible(sol.d, sol.m, 3, seed, &cfg).unwrap();
        assert_eq!(p.to_csv(), again.to_csv());
    }
    // a tight window leaves only near-uniform measures
    let p = sample_feasible(1.0 - 1e-4, 1.0 + 1e-4, 4, 1, &cfg).unwrap();
    assert!((p.potential(1.0, 0.0).unwrap() - 1.0).abs() < 1e-4);
}

#[test]
fn unit_mass_potentials_stay_above_the_floor() {
    let cfg = SamplerConfig::default();
    for seed in 0..10 {
        let p = sample_feasible(0.26, f64::INFINITY, 3, seed, &cfg).unwrap();
        let m = membership_check(&p, 0.5, f64::INFINITY, &FeasibilityGrid::default());
        assert!(m.min_ball >= 0.5 - 1e-12);
    }
}
