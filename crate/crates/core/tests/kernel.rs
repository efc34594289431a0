mod common;

use newton_extremal::kernel::{dh_dtheta1_at_pi, eval_c_n};
use newton_extremal::{Kernel, Kernel32};
use std::f64::consts::PI;

#[test]
fn derivative_matches_the_four_dimensional_closed_form() {
    let k = Kernel::new(4).unwrap();
    for &(t, t1) in &[(0.4, 1.3), (2.0, 0.7), (1.0, 2.9), (2.6, 2.2)] {
        let h = 1e-5;
        let fd = (common::h4_closed(1.0, t + h, t1) - common::h4_closed(1.0, t - h, t1)) / (2.0 * h);
        let v = k.dh_dtheta(t, t1).unwrap();
        assert!(((v - fd) / fd).abs() < 1e-8, "({t}, {t1}): {v} vs {fd}");
        assert_eq!(v > 0.0, t < t1);
    }
}

#[test]
fn antipodal_derivative_against_extrapolated_differences() {
    for n in 3..7 {
        let k = Kernel::new(n).unwrap();
        let scale = eval_c_n::<f64>(n) * 2f64.powf(0.5 * n as f64 - 1.0);
        for t in [0.6, 1.5, 2.4] {
            // ∂h/∂θ at the antipode via θ₁ = π − ε, Richardson in ε
            let at = |e: f64| k.dh_dtheta(t, PI - e).unwrap() * scale;
            let (a, b) = (at(2e-3), at(1e-3));
            let extrapolated = 2.0 * b - a;
            let exact = dh_dtheta1_at_pi(t, n).unwrap();
            assert!(((extrapolated - exact) / exact).abs() < 1e-4, "n={n} t={t}: {extrapolated} vs {exact}");
        }
    }
}

#[test]
fn mixed_partial_away_from_the_diagonal() {
    let k = Kernel::new(5).unwrap();
    for &(t, t1) in &[(0.5, 2.0), (1.2, 1.6), (2.8, 0.3)] {
        let fd = common::fd_mixed(|x, y| k.h_unchecked(1.0, x, y), t, t1, 1e-4);
        let v = k.mixed_partial(t, t1).unwrap();
        assert!(v < 0.0 && ((v - fd) / fd).abs() < 1e-4, "{v} vs {fd}");
    }
}

#[test]
fn single_precision_kernel() {
    let k = Kernel32::new(4).unwrap();
    let v = k.h(0.5, 1.0, 2.0).unwrap() as f64;
    let exact = common::h4_closed(0.5, 1.0f32 as f64, 2.0f32 as f64);
    assert!(((v - exact) / exact).abs() < 1e-5);
}
