//! The inversion `y = −(x − e₁)/|x − e₁|² − e₁/2`, which sends the unit sphere to the
//! hyperplane `{y₁ = 0}`, and the boundary slope of the extremal potential at the lower cap.

use nalgebra::{DMatrix, DVector};

use crate::dirichlet::ExtremalSolution;
use crate::error::{Error, Result};
use crate::measure::Potential;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KelvinMap {
    pub n: usize,
}

fn norm2<T: Real>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |acc, &x| acc + x * x)
}

fn to_f64<T: Real>(v: &[T]) -> Vec<f64> {
    v.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
}

impl KelvinMap {
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidArgument(format!("n must be >= 3, got {n}")));
        }
        Ok(Self { n })
    }

    fn check<T: Real>(&self, v: &[T]) -> Result<()> {
        if v.len() != self.n {
            return Err(Error::InvalidArgument(format!("point has {} coordinates, expected {}", v.len(), self.n)));
        }
        Ok(())
    }

    pub fn forward<T: Real>(&self, x: &[T]) -> Result<Vec<T>> {
        self.check(x)?;
        let mut d = x.to_vec();
        d[0] = d[0] - T::one();
        let q = norm2(&d);
        if q == T::zero() {
            return Err(Error::PoleInput(to_f64(x)));
        }
        let mut y: Vec<T> = d.iter().map(|&v| -v / q).collect();
        y[0] = y[0] - T::lit(0.5);
        Ok(y)
    }

    /// `x = e₁ − (y + e₁/2)/|y + e₁/2|²`
    pub fn inverse<T: Real>(&self, y: &[T]) -> Result<Vec<T>> {
        self.check(y)?;
        let mut s = y.to_vec();
        s[0] = s[0] + T::lit(0.5);
        let q = norm2(&s);
        if q == T::zero() {
            return Err(Error::PoleInput(to_f64(y)));
        }
        let mut x: Vec<T> = s.iter().map(|&v| -v / q).collect();
        x[0] = x[0] + T::one();
        Ok(x)
    }

    /// `|y + e₁/2|^{2−n} u(T⁻¹(y))`
    pub fn lift<T: Real>(&self, u: impl Fn(&[T]) -> T, y: &[T]) -> Result<T> {
        let x = self.inverse(y)?;
        let mut s = y.to_vec();
        s[0] = s[0] + T::lit(0.5);
        let factor = norm2(&s).sqrt().powi(2 - self.n as i32);
        Ok(factor * u(&x))
    }
}

/// Image radius `|y′|` of the sphere circle `{θ = ξ}`: `cot(ξ/2)/2`.
pub fn image_radius(xi: f64) -> f64 {
    0.5 / (0.5 * xi).tan()
}

/// Raw slopes and their extrapolated limit at `r → 1⁻, θ = ξ₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitEstimate {
    /// `(1 − r, (d − V(r, ξ₂))/(1 − r))`
    pub raw: Vec<(f64, f64)>,
    pub estimate: f64,
    /// `−(n−2)d/2`
    pub target: f64,
    /// Raw slopes move monotonically (diagnostic only).
    pub monotone: bool,
}

impl LimitEstimate {
    pub fn relative_error(&self) -> f64 {
        ((self.estimate - self.target) / self.target).abs()
    }
}

/// Fits `L + c₁h^{1/2} + c₂h + c₃h^{3/2}` to the slopes at `h = 2^{−k}`, `k = 4..12`.
pub fn boundary_limit_check(sol: &ExtremalSolution) -> Result<LimitEstimate> {
    if sol.is_single_cap() {
        return Err(Error::InvalidArgument("boundary limit needs xi2 < pi".into()));
    }
    let g = sol.geometry;
    let mut raw = Vec::new();
    for k in 4..=12 {
        let h = 2f64.powi(-k);
        let v = sol.potential(1.0 - h, g.xi2)?;
        raw.push((h, (sol.d - v) / h));
    }
    let rows = raw.len();
    let a = DMatrix::from_fn(rows, 4, |i, j| raw[i].0.powf(0.5 * j as f64));
    let b = DVector::from_iterator(rows, raw.iter().map(|p| p.1));
    let svd = a.clone().svd(true, true);
    let coef = svd
        .solve(&b, 1e-14)
        .map_err(|e| Error::QuadratureFailure(format!("extrapolation fit: {e}")))?;
    let estimate = coef[0];
    // solver noise amplified by 1/h at the finest node
    let noise = sol.residuals[0].max(sol.residuals[1]) / raw.last().unwrap().0;
    if noise > 1e-3 * estimate.abs() {
        return Err(Error::NoiseFloor(noise));
    }
    let diffs: Vec<f64> = raw.windows(2).map(|w| w[1].1 - w[0].1).collect();
    let monotone = diffs.iter().all(|&x| x >= 0.0) || diffs.iter().all(|&x| x <= 0.0);
    let target = -((g.n - 2) as f64) * sol.d / 2.0;
    Ok(LimitEstimate { raw, estimate, target, monotone })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn worked_points() {
        let k = KelvinMap::new(3).unwrap();
        assert_eq!(k.forward(&[0.0, 0.0, 0.0]).unwrap(), vec![0.5, 0.0, 0.0]);
        assert_eq!(k.forward(&[-1.0, 0.0, 0.0]).unwrap(), vec![0.0, 0.0, 0.0]);
        assert!(matches!(k.forward(&[1.0, 0.0, 0.0]), Err(Error::PoleInput(_))));
        assert!(matches!(k.inverse(&[-0.5, 0.0, 0.0]), Err(Error::PoleInput(_))));
        // a sphere point at angle ξ lands on {y₁ = 0} at radius cot(ξ/2)/2
        let xi = 2.0f64;
        let y = k.forward(&[xi.cos(), xi.sin(), 0.0]).unwrap();
        assert!(y[0].abs() < 1e-15);
        assert!((y[1].hypot(y[2]) - image_radius(xi)).abs() < 1e-15);
    }

    #[test]
    fn round_trip() {
        let k = KelvinMap::new(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let x: Vec<f64> = (0..4).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let back = k.inverse(&k.forward(&x).unwrap()).unwrap();
            for (a, b) in x.iter().zip(&back) {
                assert!((a - b).abs() < 1e-12);
            }
        }
        let x = [0.1f32, 0.2, -0.3, 0.4];
        let back = k.inverse(&k.forward(&x).unwrap()).unwrap();
        assert!((back[2] - x[2]).abs() < 1e-6);
    }

    #[test]
    fn lift_of_fundamental_solution_is_harmonic() {
        let k = KelvinMap::new(3).unwrap();
        let u = |x: &[f64]| norm2(x).sqrt().recip();
        let v = |y: &[f64]| k.lift(u, y).unwrap();
        // discrete Laplacian at a point away from the image of 0
        let y0 = [0.3, -0.7, 0.4];
        let h = 1e-3;
        let mut lap = -6.0 * v(&y0);
        for i in 0..3 {
            for s in [-h, h] {
                let mut y = y0;
                y[i] += s;
                lap += v(&y);
            }
        }
        assert!((lap / (h * h)).abs() < 1e-4, "{}", lap / (h * h));
    }
}
