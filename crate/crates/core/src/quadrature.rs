//! Gauss–Legendre rules and geometrically graded panel layouts.

use crate::scalar::Real;

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> GaussLegendre<T> {
    /// Builds an `order`-point rule by Newton iteration on the Legendre recurrence.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "quadrature order must be positive");
        let mut nodes = vec![T::zero(); order];
        let mut weights = vec![T::zero(); order];
        let n = order;
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            // Tricomi initial guess, refined in f64 then polished in T.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre_f64(n, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let mut xt = T::lit(x);
            let mut dpt = T::one();
            for _ in 0..3 {
                let (p, dp) = legendre::<T>(n, xt);
                xt = xt - p / dp;
                dpt = dp;
            }
            let (_, dp) = legendre::<T>(n, xt);
            if dp.is_finite() {
                dpt = dp;
            }
            let w = T::lit(2.0) / ((T::one() - xt * xt) * dpt * dpt);
            nodes[i] = -xt;
            weights[i] = w;
            nodes[n - 1 - i] = xt;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// Nodes and weights mapped onto `[a, b]`.
    pub fn mapped(&self, a: T, b: T) -> impl Iterator<Item = (T, T)> + '_ {
        let half = (b - a) / T::lit(2.0);
        let mid = (a + b) / T::lit(2.0);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: FnMut(T) -> T>(&self, a: T, b: T, mut f: F) -> T {
        self.mapped(a, b).fold(T::zero(), |acc, (x, w)| acc + w * f(x))
    }

    /// Composite rule over consecutive panels.
    pub fn integrate_panels<F: FnMut(T) -> T>(&self, panels: &[(T, T)], mut f: F) -> T {
        panels
            .iter()
            .map(|&(a, b)| self.integrate(a, b, &mut f))
            .fold(T::zero(), |acc, v| acc + v)
    }
}

fn legendre_f64(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn legendre<T: Real>(n: usize, x: T) -> (T, T) {
    let (mut p0, mut p1) = (T::one(), x);
    for k in 2..=n {
        let kf = T::from_usize_lossy(k);
        let p2 = ((T::lit(2.0) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (T::one(), T::zero());
    }
    let dp = T::from_usize_lossy(n) * (x * p1 - p0) / (x * x - T::one());
    (p1, dp)
}

/// Panels covering `[a, b]` whose widths grow geometrically (factor `ratio`) away from `center`,
/// starting at `smallest`. `center` is clamped into `[a, b]`.
pub fn graded_panels<T: Real>(a: T, b: T, center: T, smallest: T, ratio: T) -> Vec<(T, T)> {
    let c = center.max(a).min(b);
    let mut left = Vec::new();
    let mut width = smallest;
    let mut hi = c;
    while hi > a {
        let lo = if hi - a <= width * ratio { a } else { hi - width };
        left.push((lo, hi));
        hi = lo;
        width = width * ratio;
    }
    left.reverse();
    let mut width = smallest;
    let mut lo = c;
    while lo < b {
        let hi = if b - lo <= width * ratio { b } else { lo + width };
        left.push((lo, hi));
        lo = hi;
        width = width * ratio;
    }
    left
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        let q = GaussLegendre::<f64>::new(10);
        // degree 19 is exact for 10 nodes
        let v = q.integrate(-1.0, 1.0, |x| x.powi(18));
        assert!((v - 2.0 / 19.0).abs() < 1e-14);
        let w: f64 = q.weights().iter().sum();
        assert!((w - 2.0).abs() < 1e-14);
    }

    #[test]
    fn high_order_rule_is_accurate() {
        let q = GaussLegendre::<f64>::new(64);
        let v = q.integrate(0.0, std::f64::consts::PI, |x| x.sin());
        assert!((v - 2.0).abs() < 1e-14);
        let q32 = GaussLegendre::<f32>::new(16);
        let v32 = q32.integrate(0.0, 1.0, |x| x.exp());
        assert!((v32 - (1.0f32.exp() - 1.0)).abs() < 1e-5);
    }

    #[test]
    fn graded_panels_cover_interval() {
        let p = graded_panels(0.0, 1.0, 0.3, 1e-12, 2.0);
        assert_eq!(p.first().unwrap().0, 0.0);
        assert_eq!(p.last().unwrap().1, 1.0);
        for w in p.windows(2) {
            assert_eq!(w[0].1, w[1].0);
        }
        // log singularity at the grading center
        let q = GaussLegendre::<f64>::new(16);
        let v = q.integrate_panels(&p, |x: f64| (x - 0.3).abs().ln());
        let exact = 0.3 * 0.3f64.ln() - 0.3 + 0.7 * 0.7f64.ln() - 0.7;
        assert!((v - exact).abs() < 1e-10, "{v} vs {exact}");
    }
}
