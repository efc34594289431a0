//! Independent reference values shared by the integration and acceptance tests.
#![allow(dead_code)]

use newton_extremal::quadrature::GaussLegendre;

/// Closed form of the four-dimensional kernel:
/// `h = ln(|x − e(θ₁+θ)|²/|x − e(θ₁−θ)|²) / (2r sinθ sinθ₁)` written with half-angle sines.
pub fn h4_closed(r: f64, t: f64, t1: f64) -> f64 {
    let minus = (1.0 - r).powi(2) + 4.0 * r * (0.5 * (t - t1)).sin().powi(2);
    let plus = (1.0 - r).powi(2) + 4.0 * r * (0.5 * (t + t1)).sin().powi(2);
    let b = 2.0 * r * t.sin() * t1.sin();
    if b < 1e-12 {
        return 2.0 / (1.0 + r * r - 2.0 * r * t.cos() * t1.cos());
    }
    (plus / minus).ln() / b
}

/// `∫₀^π (1 − x cosφ)^{−λ} sin^{k}φ dφ` by composite Gauss–Legendre, refined toward `φ = 0`
/// where the integrand peaks for `x` near 1.
pub fn series_by_quadrature(x: f64, lambda: f64, k: i32) -> f64 {
    let gl = GaussLegendre::<f64>::new(40);
    let pi = std::f64::consts::PI;
    let mut edges = vec![0.0];
    let mut w = 1e-3;
    while w < 0.5 {
        edges.push(w);
        w *= 2.0;
    }
    for j in 1..=8 {
        edges.push(0.5 + (pi - 0.5) * j as f64 / 8.0);
    }
    edges
        .windows(2)
        .map(|e| gl.integrate(e[0], e[1], |p| (1.0 - x * p.cos()).powf(-lambda) * p.sin().powi(k)))
        .sum()
}

/// Best `Σ v·w` over a set of total weight exactly `m`, one cell allowed fractionally, by
/// visiting every subset. The fractional cell `j` is drawn from outside the full set `S`, with
/// `W(S) ≤ m ≤ W(S) + w_j`. Subset sums come from two half tables so the inner loop is flat.
/// All arithmetic is exact in `i64`.
pub fn brute_force_star(values: &[i64], weights: &[i64], m: i64) -> i64 {
    let k = values.len();
    assert!(k < 31);
    let total: i64 = weights.iter().sum();
    let m = m.min(total);
    let table = |cells: &[usize]| -> Vec<(i64, i64)> {
        (0u32..1 << cells.len())
            .map(|mask| {
                cells.iter().enumerate().filter(|(b, _)| mask & (1 << b) != 0).fold((0, 0), |(w, v), (_, &i)| {
                    (w + weights[i], v + values[i] * weights[i])
                })
            })
            .collect()
    };
    let mut best = i64::MIN;
    for j in 0..k {
        let others: Vec<usize> = (0..k).filter(|&i| i != j).collect();
        let (lo, hi) = others.split_at(others.len() / 2);
        let (lo, hi) = (table(lo), table(hi));
        let (wj, vj) = (weights[j], values[j]);
        for &(wh, vh) in &hi {
            for &(wl, vl) in &lo {
                let w = wh + wl;
                if w <= m && m <= w + wj {
                    best = best.max(vh + vl + vj * (m - w));
                }
            }
        }
    }
    best
}

/// Central-difference mixed partial `∂²f/∂x∂y`.
pub fn fd_mixed(f: impl Fn(f64, f64) -> f64, x: f64, y: f64, h: f64) -> f64 {
    (f(x + h, y + h) - f(x + h, y - h) - f(x - h, y + h) + f(x - h, y - h)) / (4.0 * h * h)
}

/// Evenly spaced points on `[a, b]` including both ends.
pub fn linspace(a: f64, b: f64, count: usize) -> Vec<f64> {
    (0..count).map(|i| a + (b - a) * i as f64 / (count - 1) as f64).collect()
}
