mod common;

use newton_extremal::measure::{AxisymMeasure, Potential};
use newton_extremal::scalar::sphere_area;
use newton_extremal::star::*;
use proptest::prelude::*;
use std::f64::consts::PI;

#[test]
fn star_of_a_cap_indicator() {
    let s = Slice::new(3, 60).unwrap();
    let k0 = 20;
    let l: Vec<f64> = (0..60).map(|k| if k < k0 { 1.0 } else { 0.0 }).collect();
    let caps = s.cap_measures();
    let p = star(&l, &s, 1.0);
    for k in 0..=60 {
        assert!((p.values[k] - caps[k.min(k0)]).abs() < 1e-13);
    }
}

#[test]
fn monotone_data_matches_the_cap_integral() {
    let n = 4;
    let s = Slice::new(n, 128).unwrap();
    let f = |t: f64| 2.0 + t.cos();
    let l: Vec<f64> = s.mids.iter().map(|&t| f(t)).collect();
    let p = star(&l, &s, 0.5);
    // midpoint cells against the exact cap integral: second order in the cell width
    let band = sphere_area::<f64>(n - 2);
    for k in [16, 64, 128] {
        let t = s.edges[k];
        let exact = band * (2.0 * (t / 2.0 - (2.0 * t).sin() / 4.0) + t.sin().powi(3) / 3.0);
        assert!((p.values[k] - exact).abs() < 1e-3 * exact, "{} vs {exact}", p.values[k]);
    }
}

#[test]
fn means_of_simple_potentials() {
    let n = 3;
    let u = AxisymMeasure::uniform(n).unwrap();
    let area = sphere_area::<f64>(n - 1);
    assert!((convex_mean(&u, &Phi::Identity, 0.5).unwrap() - area).abs() < 1e-12);
    assert!((convex_mean(&u, &Phi::Square, 0.5).unwrap() - area).abs() < 1e-12);
    let pm = AxisymMeasure::point_mass(n, 0.0).unwrap();
    assert!((convex_mean(&pm, &Phi::Identity, 0.7).unwrap() - area).abs() < 1e-9);
    let top = pm.potential(0.7, 0.0).unwrap();
    assert_eq!(convex_mean(&pm, &Phi::Hinge(top), 0.7).unwrap(), 0.0);
}

#[test]
fn self_comparison_has_zero_margins() {
    let pm = AxisymMeasure::point_mass(3, 0.0).unwrap().mix(&AxisymMeasure::uniform(3).unwrap(), 0.5).unwrap();
    let s = Slice::new(3, 64).unwrap();
    let rep = dominance_check(&pm, &pm, &[0.5, 2.0], &s, &|_| vec![Phi::Identity, Phi::Exp, Phi::Hinge(1.0)]).unwrap();
    assert_eq!(rep.min_star_margin(), 0.0);
    assert_eq!(rep.min_relative_mean_margin(), 0.0);
    assert!(rep.to_csv().starts_with("r,theta_or_phi,margin,witness\n"));
    let cum = cumulative_profile(&pm, &AxisymMeasure::uniform(3).unwrap(), 0.6, &[0.0, PI], &[]).unwrap();
    assert_eq!(cum[0], 0.0);
    assert!(cum[1].abs() < 1e-10);
}

#[test]
fn brute_force_on_small_slices() {
    let values = [3, -1, 3, 7, 0, 2];
    let weights = [2, 5, 1, 3, 4, 2];
    let total: i64 = weights.iter().sum();
    let wf: Vec<f64> = weights.iter().map(|&w| w as f64).collect();
    let vf: Vec<f64> = values.iter().map(|&v| v as f64).collect();
    for m in 0..=total {
        let fast = star_cells(&vf, &wf, &[m as f64])[0];
        assert_eq!(fast, common::brute_force_star(&values, &weights, m) as f64, "m = {m}");
    }
}

proptest! {
    #[test]
    fn star_is_monotone_in_the_data(base in prop::collection::vec(-5.0f64..5.0, 12), bump in prop::collection::vec(0.0f64..2.0, 12)) {
        let s = Slice::new(3, 12).unwrap();
        let above: Vec<f64> = base.iter().zip(&bump).map(|(a, b)| a + b).collect();
        let lo = star(&base, &s, 1.0);
        let hi = star(&above, &s, 1.0);
        for (a, b) in lo.values.iter().zip(&hi.values) {
            prop_assert!(*a <= *b + 1e-12);
        }
    }

    #[test]
    fn star_is_concave_in_the_measure(values in prop::collection::vec(-5.0f64..5.0, 10)) {
        let w = vec![1.0; 10];
        let targets: Vec<f64> = (0..=20).map(|k| k as f64 / 2.0).collect();
        let v = star_cells(&values, &w, &targets);
        for t in v.windows(3) {
            prop_assert!(t[1] - t[0] >= t[2] - t[1] - 1e-12);
        }
    }
}
