use newton_extremal::dirichlet::{build_l_extremal, Discretization};
use newton_extremal::massmove::*;
use newton_extremal::measure::{AxisymMeasure, Potential};
use std::f64::consts::PI;

fn plan(n: usize) -> MassMovePlan {
    MassMovePlan::new(AxisymMeasure::uniform(n).unwrap(), PI / 3.0, PI / 2.0, 5.0 * PI / 6.0, 10.0).unwrap()
}

#[test]
fn g_tilde_is_increasing_in_theta1() {
    for n in [3, 6] {
        let h = 1e-6;
        for j in 1..20 {
            let t = PI / 2.0 + (PI / 3.0) * j as f64 / 20.0;
            for eps in [-1e-3, 1e-3] {
                let a = g_tilde(t - h, eps, 10.0, n, MoveExponent::Kernel).unwrap();
                let b = g_tilde(t + h, eps, 10.0, n, MoveExponent::Kernel).unwrap();
                assert!(b > a);
            }
        }
    }
}

#[test]
fn moving_mass_keeps_the_total_and_gains_on_the_cap() {
    let p = plan(3);
    assert!(p.balance().abs() < 1e-13);
    for eps in [1e-4, 5e-4] {
        assert!((p.perturbed_potential(eps, 0.0, 0.0).unwrap() - 1.0).abs() < 1e-12);
        assert!(p.cap_gain(eps).unwrap() > 0.0);
    }
}

#[test]
fn derivative_is_positive_on_the_cap() {
    let p = plan(4);
    let thetas: Vec<f64> = (0..8).map(|k| PI / 3.0 * k as f64 / 7.0).collect();
    let rep = check_520(&p, &thetas, &[0.5, 1.0]).unwrap();
    assert!(rep.all_positive(), "{rep:?}");
    assert_eq!(rep.minimal_b, Some(10.0));
    // the other exponent moves potential off the cap
    let printed = check_520(&p.clone().with_exponent(MoveExponent::Printed), &thetas, &[1.0]).unwrap();
    assert_eq!(printed.positive, 0);
}

#[test]
fn ratio_derivative_is_positive_for_n3() {
    let grid: Vec<f64> = (0..12).map(|k| 0.1 + (PI - 0.2) * k as f64 / 11.0).collect();
    let rep = check_523(3, &grid, &grid, 0.05).unwrap();
    assert_eq!(rep.positive, rep.points);
}

#[test]
fn support_of_extremal_and_uniform() {
    let n = 3;
    let l = build_l_extremal(0.6, n, &Discretization::default()).unwrap();
    let rep = support_criterion(&l, &l.measure, 0.6, 0.5, 1e-8).unwrap();
    // the atom at θ = 0 sits inside [0, θ₀] and is allowed
    assert!(rep.offending_mass < 1e-8, "{rep:?}");
    assert!(rep.flat_from.unwrap() <= l.xi + 0.02);
    let u = AxisymMeasure::uniform(n).unwrap();
    let rep = support_criterion(&u, &u, 0.9, 0.5, 1e-8).unwrap();
    assert!(rep.offending_mass > 0.5);
    assert!(u.potential(1.0, 2.0).unwrap() > 0.9);
}
