//! Mass moving: mass on `[τ₁, τ₂]` is scaled by `1 + ε` and pushed along `g̃(·, ε)`, mass on
//! `[τ₂, τ₃]` is scaled by `1 − ε` and pushed along `g̃(·, −ε)`. With equal masses on the two
//! pieces the total is unchanged.
//!
//! `g̃` solves `(1 + ε)[(1 + cos g̃)^s + B] = (1 + cos θ₁)^s + B`. The exponent `s` defaults to
//! `1 − n/2`, the one whose level sets are those of `h(1, π, ·)`; see [`MoveExponent`].

use crate::error::{Error, Result};
use crate::kernel::{dh_dtheta1_at_pi, KernelEval};
use crate::measure::{AxisymMeasure, Potential};
use crate::quadrature::{graded_panels, GaussLegendre};

/// Exponent `s` of the reparameterization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MoveExponent {
    /// `1 − n/2`
    #[default]
    Kernel,
    /// `1 − 2/n`; with this choice the ε-derivative on `[0, θ₀]` comes out negative.
    Printed,
}

impl MoveExponent {
    pub fn value(self, n: usize) -> f64 {
        let nf = n as f64;
        match self {
            MoveExponent::Kernel => 1.0 - nf / 2.0,
            MoveExponent::Printed => 1.0 - 2.0 / nf,
        }
    }
}

/// `(1 + cos θ)^s` via `2cos²(θ/2)`.
fn lift(theta: f64, s: f64) -> f64 {
    (2.0 * (0.5 * theta).cos().powi(2)).powf(s)
}

/// `g̃(θ₁, ε)`; errors when the solution leaves `(0, π)`.
pub fn g_tilde(theta1: f64, eps: f64, b: f64, n: usize, exponent: MoveExponent) -> Result<f64> {
    let s = exponent.value(n);
    let x = (lift(theta1, s) + b) / (1.0 + eps) - b;
    // range of (1 + cos g)^s over g ∈ (0, π)
    let top = 2f64.powf(s);
    let ok = if s > 0.0 { x > 0.0 && x < top } else { x > top };
    if !ok || !x.is_finite() {
        return Err(Error::OutOfRange(format!(
            "(1 + cos g)^s = {x} unreachable (theta1 = {theta1}, eps = {eps}, B = {b})"
        )));
    }
    // 1 + cos g = 2cos²(g/2)
    let c = (0.5 * x.powf(1.0 / s)).sqrt().min(1.0);
    Ok(2.0 * c.acos())
}

/// `|(1 + ε)[(1 + cos g̃)^s + B] − (1 + cos θ₁)^s − B|` relative to the right side.
pub fn inversion_residual(theta1: f64, eps: f64, b: f64, n: usize, exponent: MoveExponent) -> Result<f64> {
    let s = exponent.value(n);
    let g = g_tilde(theta1, eps, b, n, exponent)?;
    let rhs = lift(theta1, s) + b;
    Ok(((1.0 + eps) * (lift(g, s) + b) - rhs).abs() / rhs.abs())
}

#[derive(Debug, Clone)]
pub struct MassMovePlan {
    pub n: usize,
    pub theta0: f64,
    pub tau: [f64; 3],
    pub b: f64,
    pub eps0: f64,
    pub exponent: MoveExponent,
    pub base: AxisymMeasure,
    /// Rings of the base on `[τ₁, τ₂)` and `[τ₂, τ₃)`.
    pub left: Vec<(f64, f64)>,
    pub right: Vec<(f64, f64)>,
    kernel: KernelEval<f64>,
}

const RING_PIECES: usize = 2;

impl MassMovePlan {
    /// Chooses `τ₂` in `(τ₁, τ₃)` so the base puts equal mass on both sides.
    pub fn new(base: AxisymMeasure, theta0: f64, tau1: f64, tau3: f64, b: f64) -> Result<Self> {
        let pi = std::f64::consts::PI;
        if !(theta0 < tau1 && tau1 < tau3 && tau3 <= pi && b > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "need theta0 < tau1 < tau3 <= pi and B > 0, got ({theta0}, {tau1}, {tau3}, {b})"
            )));
        }
        let mass = |lo: f64, hi: f64| base.rings(lo, hi, RING_PIECES).iter().map(|r| r.1).sum::<f64>();
        let (mut lo, mut hi) = (tau1, tau3);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if mass(tau1, mid) < mass(mid, tau3) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let tau2 = 0.5 * (lo + hi);
        let left = base.rings(tau1, tau2, RING_PIECES);
        let right = base.rings(tau2, tau3, RING_PIECES);
        if left.is_empty() || right.is_empty() {
            return Err(Error::InvalidArgument("no base mass to move on [tau1, tau3]".into()));
        }
        let kernel = KernelEval::<f64>::new(base.n())?;
        Ok(Self {
            n: base.n(),
            theta0,
            tau: [tau1, tau2, tau3],
            b,
            eps0: 1e-3,
            exponent: MoveExponent::default(),
            base,
            left,
            right,
            kernel,
        })
    }

    pub fn with_b(mut self, b: f64) -> Self {
        self.b = b;
        self
    }

    pub fn with_exponent(mut self, e: MoveExponent) -> Self {
        self.exponent = e;
        self
    }

    /// `mass[τ₁, τ₂] − mass[τ₂, τ₃]`.
    pub fn balance(&self) -> f64 {
        self.left.iter().map(|r| r.1).sum::<f64>() - self.right.iter().map(|r| r.1).sum::<f64>()
    }

    /// The moved pieces `(1 ± ε) Σ w c_n h(r, θ, g̃(θ_i, ±ε))`.
    fn moved(&self, eps: f64, r: f64, theta: f64) -> Result<f64> {
        let cn = self.kernel.c_n();
        let mut acc = 0.0;
        for (rings, sign) in [(&self.left, 1.0), (&self.right, -1.0)] {
            let e = sign * eps;
            for &(t1, w) in rings.iter() {
                let g = if e == 0.0 { t1 } else { g_tilde(t1, e, self.b, self.n, self.exponent)? };
                acc += (1.0 + e) * w * cn * self.kernel.h(r, theta, g)?;
            }
        }
        Ok(acc)
    }

    /// `P̃_ε(r, θ)`; equals the base potential at `ε = 0`.
    pub fn perturbed_potential(&self, eps: f64, r: f64, theta: f64) -> Result<f64> {
        let base = self.base.potential(r, theta)?;
        if eps == 0.0 {
            return Ok(base);
        }
        Ok(base + self.moved(eps, r, theta)? - self.moved(0.0, r, theta)?)
    }

    /// `∂P̃_ε/∂ε` by central differences with step `10⁻⁴ ε₀`.
    pub fn d_eps(&self, eps: f64, r: f64, theta: f64) -> Result<f64> {
        let h = 1e-4 * self.eps0;
        Ok((self.moved(eps + h, r, theta)? - self.moved(eps - h, r, theta)?) / (2.0 * h))
    }

    /// Mean-value integral `∫₀^π ∂P̃_ε/∂ε(1, θ) sin^{n−2}θ dθ`, ring by ring: each ring
    /// contributes `d/dε[(1 ± ε) w K(g̃)]` with `K(θ₁) = c_n ∫₀^π h(1, θ, θ₁) sin^{n−2}θ dθ`.
    pub fn mean_value_defect(&self, eps: f64) -> Result<f64> {
        let gl = GaussLegendre::<f64>::new(16);
        let pi = std::f64::consts::PI;
        let cn = self.kernel.c_n();
        let k = |t1: f64| -> f64 {
            gl.integrate_panels(&graded_panels(0.0, pi, t1, 1e-12, 2.0), |t| {
                cn * self.kernel.h_with_delta(1.0, t, t1, t - t1) * t.sin().powi(self.n as i32 - 2)
            })
        };
        let h = 1e-4 * self.eps0;
        let mut acc = 0.0;
        for (rings, sign) in [(&self.left, 1.0), (&self.right, -1.0)] {
            for &(t1, w) in rings.iter() {
                let at = |e: f64| -> Result<f64> {
                    let e = sign * e;
                    Ok((1.0 + e) * w * k(g_tilde(t1, e, self.b, self.n, self.exponent)?))
                };
                acc += (at(eps + h)? - at(eps - h)?) / (2.0 * h);
            }
        }
        Ok(acc)
    }

    /// `∫₀^{θ₀} (P̃_ε − P̃)(1, θ) sin^{n−2}θ dθ`.
    pub fn cap_gain(&self, eps: f64) -> Result<f64> {
        let gl = GaussLegendre::<f64>::new(24);
        let mut acc = 0.0;
        for k in 0..8 {
            let a = self.theta0 * k as f64 / 8.0;
            let b = self.theta0 * (k + 1) as f64 / 8.0;
            for (t, w) in gl.mapped(a, b) {
                let diff = self.moved(eps, 1.0, t)? - self.moved(0.0, 1.0, t)?;
                acc += w * diff * t.sin().powi(self.n as i32 - 2);
            }
        }
        Ok(acc)
    }
}

/// Signs of `∂P̃_ε/∂ε` on a grid in `[0, θ₀]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Report520 {
    pub b: f64,
    pub points: usize,
    pub positive: usize,
    /// `(r, θ, ∂P̃_ε/∂ε)` at the smallest derivative.
    pub worst: (f64, f64, f64),
    /// Smallest `B` in the doubling sequence from the start value with all signs positive.
    pub minimal_b: Option<f64>,
}

impl Report520 {
    pub fn all_positive(&self) -> bool {
        self.points == self.positive
    }
}

fn scan_520(plan: &MassMovePlan, eps: f64, thetas: &[f64], radii: &[f64]) -> Result<Report520> {
    let mut worst = (0.0, 0.0, f64::INFINITY);
    let mut positive = 0;
    for &r in radii {
        for &t in thetas {
            let v = plan.d_eps(eps, r, t)?;
            if v > 0.0 {
                positive += 1;
            }
            if v < worst.2 {
                worst = (r, t, v);
            }
        }
    }
    Ok(Report520 { b: plan.b, points: thetas.len() * radii.len(), positive, worst, minimal_b: None })
}

/// Scans at `ε = ε₀/2` with the plan's `B`, then doubles `B` up to `10⁴` until every sign is
/// positive; the returned report is for the plan's own `B`.
pub fn check_520(plan: &MassMovePlan, thetas: &[f64], radii: &[f64]) -> Result<Report520> {
    let eps = 0.5 * plan.eps0;
    let mut report = scan_520(plan, eps, thetas, radii)?;
    let mut b = plan.b;
    while b <= 1e4 {
        let trial = if b == plan.b { report.clone() } else { scan_520(&plan.clone().with_b(b), eps, thetas, radii)? };
        if trial.all_positive() {
            report.minimal_b = Some(b);
            break;
        }
        b *= 2.0;
    }
    Ok(report)
}

/// Sign count of the `θ₁`-derivative of `∂h/∂θ₁(1, θ, θ₁) / ∂h/∂θ₁(1, π, θ₁)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Report523 {
    pub n: usize,
    pub points: usize,
    pub positive: usize,
    /// `(θ, θ₁, derivative)` at the smallest value.
    pub worst: (f64, f64, f64),
}

/// Grid points closer than `min_gap` to the diagonal are skipped.
pub fn check_523(n: usize, thetas: &[f64], theta1s: &[f64], min_gap: f64) -> Result<Report523> {
    let k = KernelEval::<f64>::new(n)?;
    let norm = k.c_n() * 2f64.powf(0.5 * n as f64 - 1.0);
    // h is symmetric in its angles, so ∂h/∂θ₁(1, θ, θ₁) is the observation-slot derivative
    let ratio = |t: f64, t1: f64| -> Result<f64> { Ok(k.dh_dtheta(t1, t)? * norm / dh_dtheta1_at_pi(t1, n)?) };
    let step = 1e-5;
    let mut report = Report523 { n, points: 0, positive: 0, worst: (0.0, 0.0, f64::INFINITY) };
    for &t in thetas {
        for &t1 in theta1s {
            if (t - t1).abs() < min_gap {
                continue;
            }
            let v = (ratio(t, t1 + step)? - ratio(t, t1 - step)?) / (2.0 * step);
            report.points += 1;
            if v > 0.0 {
                report.positive += 1;
            }
            if v < report.worst.2 {
                report.worst = (t, t1, v);
            }
        }
    }
    Ok(report)
}

/// `2t/(1 + t²)` with `t = tan(θ/2)/tan(θ₁/2)`.
pub fn hayman(theta: f64, theta1: f64) -> f64 {
    let t = (0.5 * theta).tan() / (0.5 * theta1).tan();
    2.0 * t / (1.0 + t * t)
}

/// Mass beyond `θ₀` sitting where the potential exceeds `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportReport {
    pub offending_mass: f64,
    /// Smallest grid angle past `θ₀` from which `|P(1, ·) − d| ≤ tol` through `π`.
    pub flat_from: Option<f64>,
}

pub fn support_criterion<P: Potential + ?Sized>(
    p: &P,
    measure: &AxisymMeasure,
    d: f64,
    theta0: f64,
    tol: f64,
) -> Result<SupportReport> {
    let pi = std::f64::consts::PI;
    let mut offending = 0.0;
    for (t, w) in measure.rings(theta0.next_up(), pi, RING_PIECES) {
        // singular points (atoms on the sphere) count as above d
        let v = p.potential(1.0, t).unwrap_or(f64::INFINITY);
        if v > d + tol {
            offending += w.abs();
        }
    }
    let grid = 256;
    let mut flat_from = None;
    for j in (0..=grid).rev() {
        let t = theta0 + (pi - theta0) * j as f64 / grid as f64;
        match p.potential(1.0, t) {
            Ok(v) if (v - d).abs() <= tol => flat_from = Some(t),
            _ => break,
        }
    }
    Ok(SupportReport { offending_mass: offending, flat_from })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_at_zero_eps() {
        for n in [3, 5] {
            for e in [MoveExponent::Kernel, MoveExponent::Printed] {
                let g = g_tilde(2.0, 0.0, 10.0, n, e).unwrap();
                assert!((g - 2.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn inversion_is_accurate_and_monotone() {
        for n in 3..9 {
            let mut prev = 0.0;
            for j in 1..40 {
                let t1 = 1.2 + 1.8 * j as f64 / 40.0;
                assert!(inversion_residual(t1, 1e-3, 10.0, n, MoveExponent::Kernel).unwrap() < 1e-12);
                let g = g_tilde(t1, 1e-3, 10.0, n, MoveExponent::Kernel).unwrap();
                assert!(g > prev);
                // mass on the left piece moves toward the cap around e₁
                assert!(g < t1);
                prev = g;
            }
        }
    }

    #[test]
    fn out_of_range_is_reported() {
        // the printed exponent cannot push 1 + cos g past 2
        assert!(matches!(g_tilde(0.01, -0.5, 10.0, 3, MoveExponent::Printed), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn hayman_substitution() {
        for &(t, t1) in &[(0.3f64, 1.2f64), (2.0, 0.5), (1.0, 3.0)] {
            let lhs = t.sin() * t1.sin() / (1.0 - t.cos() * t1.cos());
            assert!((lhs - hayman(t, t1)).abs() < 1e-14);
        }
    }

    #[test]
    fn plan_preserves_mass_and_base() {
        let u = AxisymMeasure::uniform(3).unwrap();
        let plan = MassMovePlan::new(u.clone(), 1.0, 1.5, 2.8, 10.0).unwrap();
        assert!(plan.balance().abs() < 1e-13);
        assert_eq!(plan.perturbed_potential(0.0, 0.5, 0.3).unwrap(), u.potential(0.5, 0.3).unwrap());
        // total mass: the potential at the origin
        let p0 = plan.perturbed_potential(5e-4, 0.0, 0.0).unwrap();
        assert!((p0 - 1.0).abs() < 1e-12);
    }
}
