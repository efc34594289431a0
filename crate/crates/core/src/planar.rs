//! The plane case in closed form. With `b = cos ξ₁`, `a = cos ξ₂` the extremal potential on
//! the unit circle satisfies `∂P/∂θ = Re[i((1 + z² − 2az)/(1 + z² − 2bz))^{1/2}]`, which is
//! zero on both arcs and `−((cos θ − a)/(b − cos θ))^{1/2}` on the gap. The potential is
//! normalized by `P(0) = 0`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarGeometry<T> {
    pub xi1: T,
    pub xi2: T,
}

impl<T: Real> PlanarGeometry<T> {
    pub fn new(xi1: T, xi2: T) -> Result<Self> {
        if !(T::zero() < xi1 && xi1 < xi2 && xi2 < T::PI()) {
            return Err(Error::InvalidArgument(format!("need 0 < xi1 < xi2 < pi, got ({xi1}, {xi2})")));
        }
        Ok(Self { xi1, xi2 })
    }

    pub fn a(&self) -> T {
        self.xi2.cos()
    }

    pub fn b(&self) -> T {
        self.xi1.cos()
    }

    /// `((cos θ − a)/(b − cos θ))^{1/2}` from the offsets `θ − ξ₁ > 0` and `ξ₂ − θ > 0`.
    fn gap_root(&self, theta: T, from1: T, to2: T) -> T {
        let half = T::lit(0.5);
        // cos θ − cos ξ₂ and cos ξ₁ − cos θ without cancellation
        let num = ((theta + self.xi2) * half).sin() * (to2 * half).sin();
        let den = ((theta + self.xi1) * half).sin() * (from1 * half).sin();
        (num / den).sqrt()
    }

    /// `∂P/∂θ(1, θ)`.
    pub fn dp_dtheta(&self, theta: T) -> Result<T> {
        if theta == self.xi1 || theta == self.xi2 {
            return Err(Error::BranchAmbiguity(theta.to_f64().unwrap_or(f64::NAN)));
        }
        if theta < self.xi1 || theta > self.xi2 {
            return Ok(T::zero());
        }
        Ok(-self.gap_root(theta, theta - self.xi1, self.xi2 - theta))
    }

    /// `((1 + z² − 2az)/(1 + z² − 2bz))^{1/2}` continued from `1` at `z = 0` along the segment
    /// `[0, z]`, in `steps` steps.
    pub fn continued_root(&self, z: Complex<T>, steps: usize) -> Complex<T> {
        let one = Complex::new(T::one(), T::zero());
        let two = T::lit(2.0);
        let ratio = |w: Complex<T>| (one + w * w - w * (two * self.a())) / (one + w * w - w * (two * self.b()));
        let mut prev = one;
        for k in 1..=steps {
            let w = z * T::from_usize_lossy(k) / T::from_usize_lossy(steps);
            let s = ratio(w).sqrt();
            prev = if (s - prev).norm() <= (s + prev).norm() { s } else { -s };
        }
        prev
    }

    /// `d` and `M` from the radial integrals
    /// `d = ∫₀¹ [((1 + r² + 2ar)/(1 + r² + 2br))^{1/2} − 1] dr/r`,
    /// `M = ∫₀¹ [((1 + r² − 2ar)/(1 + r² − 2br))^{1/2} − 1] dr/r`.
    pub fn d_and_m(&self) -> Result<(T, T)> {
        let d = radial(self.a(), self.b(), T::one())?;
        let m = radial(self.a(), self.b(), -T::one())?;
        Ok((d, m))
    }

    /// `∫_lo^hi f(θ, θ − ξ₁, ξ₂ − θ) dθ` for `ξ₁ ≤ lo < hi ≤ ξ₂` after `θ = lo + Δ(3s² − 2s³)`,
    /// which absorbs the square-root endpoint behavior at both ends.
    fn gap_integral(&self, lo: T, hi: T, f: impl Fn(T, T, T) -> T) -> T {
        let gl = GaussLegendre::<T>::new(48);
        let delta = hi - lo;
        let (two, three, six) = (T::lit(2.0), T::lit(3.0), T::lit(6.0));
        let mut acc = T::zero();
        for (s0, s1) in [(T::zero(), T::lit(0.5)), (T::lit(0.5), T::one())] {
            for (s, w) in gl.mapped(s0, s1) {
                let from_lo = delta * s * s * (three - two * s);
                let to_hi = delta * (T::one() - s) * (T::one() - s) * (T::one() + two * s);
                let theta = lo + from_lo;
                let from1 = if lo == self.xi1 { from_lo } else { theta - self.xi1 };
                let to2 = if hi == self.xi2 { to_hi } else { self.xi2 - theta };
                acc = acc + w * six * delta * s * (T::one() - s) * f(theta, from1, to2);
            }
        }
        acc
    }

    /// `M − d = −∫_{ξ₁}^{ξ₂} ∂P/∂θ dθ`.
    pub fn gap_drop(&self) -> T {
        self.gap_integral(self.xi1, self.xi2, |t, f1, t2| self.gap_root(t, f1, t2))
    }

    /// `P(1, θ)` from `P(1, π) = d`.
    pub fn boundary_value(&self, theta: T, d: T) -> T {
        if theta >= self.xi2 {
            return d;
        }
        let lo = theta.max(self.xi1);
        d + self.gap_integral(lo, self.xi2, |t, f1, t2| self.gap_root(t, f1, t2))
    }

    /// `∫₀^τ P(1, θ) dθ`.
    pub fn cumulative(&self, tau: T, d: T, m: T) -> T {
        let (x1, x2) = (self.xi1, self.xi2);
        if tau <= x1 {
            return m * tau;
        }
        let t = tau.min(x2);
        // ∫_{ξ₁}^t (P − d) = ∫ f(s) (min(s, t) − ξ₁) ds over the gap
        let root = |th: T, f1: T, t2: T| self.gap_root(th, f1, t2);
        let mut inner = self.gap_integral(x1, t, |th, f1, t2| root(th, f1, t2) * f1);
        if t < x2 {
            inner = inner + (t - x1) * self.gap_integral(t, x2, root);
        }
        m * x1 + d * (tau - x1) + inner
    }
}

fn radial<T: Real>(a: T, b: T, sign: T) -> Result<T> {
    let gl = GaussLegendre::<T>::new(64);
    let two = T::lit(2.0);
    let v = gl.integrate(T::zero(), T::one(), |r| {
        let base = T::one() + r * r;
        (((base + sign * two * a * r) / (base + sign * two * b * r)).sqrt() - T::one()) / r
    });
    if !v.is_finite() {
        return Err(Error::QuadratureFailure("radial integral is not finite".into()));
    }
    Ok(v)
}

/// The difference `d′ − d` as a single radial integral, for `ξ₁ < ξ₁′` and a shared `ξ₂`.
pub fn d_shift<T: Real>(g: &PlanarGeometry<T>, g2: &PlanarGeometry<T>) -> T {
    let gl = GaussLegendre::<T>::new(64);
    let two = T::lit(2.0);
    let (a, b, b2) = (g.a(), g.b(), g2.b());
    gl.integrate(T::zero(), T::one(), |r| {
        let base = T::one() + r * r;
        let num = base + two * a * r;
        ((num / (base + two * b2 * r)).sqrt() - (num / (base + two * b * r)).sqrt()) / r
    })
}

fn check_pair<T: Real>(g: &PlanarGeometry<T>, g2: &PlanarGeometry<T>) -> Result<()> {
    if g.xi2 != g2.xi2 || !(g.xi1 < g2.xi1) {
        return Err(Error::InvalidArgument("need xi1 < xi1' and a shared xi2".into()));
    }
    Ok(())
}

/// `∫_{θ₀}^{ξ₂} [((cos θ − a)/(b′ − cos θ))^{1/2} − ((cos θ − a)/(b − cos θ))^{1/2}] dθ`
/// for `ξ₁′ ≤ θ₀ < ξ₂`; positive.
pub fn check_322<T: Real>(g: &PlanarGeometry<T>, g2: &PlanarGeometry<T>, theta0: T) -> Result<T> {
    check_pair(g, g2)?;
    if !(g2.xi1 <= theta0 && theta0 < g.xi2) {
        return Err(Error::InvalidArgument("need xi1' <= theta0 < xi2".into()));
    }
    Ok(g2.gap_integral(theta0, g.xi2, |t, f1, t2| g2.gap_root(t, f1, t2) - g.gap_root(t, t - g.xi1, t2)))
}

/// Profile of `τ ↦ ∫₀^τ [P(1, θ, d′, M′) − P(1, θ, d, M)] dθ`.
#[derive(Debug, Clone, PartialEq)]
pub struct CumulativeReport<T> {
    pub taus: Vec<T>,
    pub values: Vec<T>,
    pub max: T,
    pub argmax: T,
}

/// The cumulative difference on `points + 1` equally spaced `τ` in `[0, π]`.
pub fn check_323<T: Real>(g: &PlanarGeometry<T>, g2: &PlanarGeometry<T>, points: usize) -> Result<CumulativeReport<T>> {
    check_pair(g, g2)?;
    let (d, m) = g.d_and_m()?;
    let (d2, m2) = g2.d_and_m()?;
    let taus: Vec<T> = (0..=points)
        .map(|k| T::PI() * T::from_usize_lossy(k) / T::from_usize_lossy(points))
        .collect();
    let values: Vec<T> = taus.iter().map(|&t| g2.cumulative(t, d2, m2) - g.cumulative(t, d, m)).collect();
    let (mut max, mut argmax) = (values[0], taus[0]);
    for (t, v) in taus.iter().zip(&values) {
        if *v > max {
            max = *v;
            argmax = *t;
        }
    }
    Ok(CumulativeReport { taus, values, max, argmax })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn derivative_vanishes_on_the_arcs() {
        let g = PlanarGeometry::new(0.7, 2.2).unwrap();
        for t in [0.1, 0.69, 2.21, 3.1] {
            assert_eq!(g.dp_dtheta(t).unwrap(), 0.0);
        }
        assert!(g.dp_dtheta(1.5).unwrap() < 0.0);
        assert!(matches!(g.dp_dtheta(0.7), Err(Error::BranchAmbiguity(_))));
    }

    #[test]
    fn branch_matches_continuation_from_the_origin() {
        let g = PlanarGeometry::new(0.7, 2.2).unwrap();
        for t in [0.3, 1.0, 1.5, 2.0, 2.8] {
            let z = Complex::from_polar(1.0 - 1e-9, t);
            let cont = (Complex::<f64>::i() * g.continued_root(z, 4000)).re;
            assert!((cont - g.dp_dtheta(t).unwrap()).abs() < 1e-4, "t={t}: {cont}");
        }
    }

    #[test]
    fn radial_values_agree_with_the_gap_integral() {
        for (x1, x2) in [(0.3, 1.2), (0.7, 2.2), (1.5, 3.0)] {
            let g = PlanarGeometry::new(x1, x2).unwrap();
            let (d, m) = g.d_and_m().unwrap();
            assert!(d < 0.0 && 0.0 < m);
            assert!(d > (0.25f64).ln());
            assert!(((m - d) - g.gap_drop()).abs() < 1e-10, "{} vs {}", m - d, g.gap_drop());
        }
    }

    #[test]
    fn boundary_mean_is_zero() {
        // ∫₀^π P(1, θ) dθ = π P(0) = 0
        let g = PlanarGeometry::new(0.6, 2.5).unwrap();
        let (d, m) = g.d_and_m().unwrap();
        assert!(g.cumulative(PI, d, m).abs() < 1e-10);
        assert!((g.boundary_value(0.3, d) - m).abs() < 1e-10);
        assert!((g.boundary_value(2.5, d) - d).abs() < 1e-15);
    }

    #[test]
    fn degenerate_shift_is_zero() {
        let g = PlanarGeometry::new(0.6, 2.5).unwrap();
        assert_eq!(d_shift(&g, &g), 0.0);
    }

    #[test]
    fn single_precision_geometry() {
        let g = PlanarGeometry::<f32>::new(0.7, 2.2).unwrap();
        let (d, m) = g.d_and_m().unwrap();
        let (d64, m64) = PlanarGeometry::<f64>::new(0.7, 2.2).unwrap().d_and_m().unwrap();
        assert!((d as f64 - d64).abs() < 1e-5 && (m as f64 - m64).abs() < 1e-5);
    }
}
