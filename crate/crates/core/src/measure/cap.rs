//! Densities on a polar cap with an inverse square-root edge.
//!
//! On a cap `[lo, hi]` with its free edge at `ξ` the polar density is
//!
//! ```text
//! ρ(θ₁) = sin^{n−2}θ₁ · Σ_j c_j T_j(v(θ₁)) / √|cosθ₁ − cosξ|
//! ```
//!
//! where `v` maps `cosθ₁` affinely onto `[−1, 1]`. Integrals use `θ₁ = ξ ∓ t²`, which removes
//! the edge singularity; the log singularity of the kernel on the sphere is handled with
//! panels graded toward its image in `t`.

use crate::error::{Error, Result};
use crate::kernel::KernelEval;
use crate::quadrature::{graded_panels, GaussLegendre};

const SINGULAR_POWER: i32 = 10;

/// An integration panel in `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Panel {
    Plain(f64, f64),
    /// `[at, at + len]` (or `[at + len, at]` for `len < 0`) with a log singularity at `at`.
    Singular { at: f64, len: f64 },
}

/// Panels of `[a, b]` growing by `ratio` away from `center` (one of the ends), each at most
/// `max_width` wide.
fn push_split(out: &mut Vec<Panel>, a: f64, b: f64, ratio: f64, center: f64, max_width: f64) {
    if b <= a {
        return;
    }
    let raw = if ratio > 1.0 {
        let first = (b - a).min(max_width) * 0.5;
        graded_panels(a, b, center, first, ratio)
    } else {
        vec![(a, b)]
    };
    for (lo, hi) in raw {
        let pieces = ((hi - lo) / max_width).ceil().max(1.0) as usize;
        let w = (hi - lo) / pieces as f64;
        for k in 0..pieces {
            let x = lo + w * k as f64;
            let y = if k + 1 == pieces { hi } else { x + w };
            out.push(Panel::Plain(x, y));
        }
    }
}

/// Which end of the cap carries the free edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Edge {
    /// Cap `[lo, ξ]`, e.g. a cap around `e₁`.
    Upper,
    /// Cap `[ξ, hi]`, e.g. a cap around `−e₁`.
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapShape {
    pub lo: f64,
    pub hi: f64,
    pub edge: Edge,
}

/// Chebyshev values `T_0..T_{nb−1}` at `v`.
fn chebyshev(v: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    out[0] = 1.0;
    if out.len() > 1 {
        out[1] = v;
    }
    for j in 2..out.len() {
        out[j] = 2.0 * v * out[j - 1] - out[j - 2];
    }
}

impl CapShape {
    pub fn new(lo: f64, hi: f64, edge: Edge) -> Result<Self> {
        let pi = std::f64::consts::PI;
        if !(0.0 <= lo && lo < hi && hi <= pi) {
            return Err(Error::InvalidArgument(format!("cap needs 0 <= lo < hi <= pi, got [{lo}, {hi}]")));
        }
        match edge {
            Edge::Upper if hi >= pi => {
                return Err(Error::InvalidArgument("an upper edge must lie below pi".into()))
            }
            Edge::Lower if lo <= 0.0 => {
                return Err(Error::InvalidArgument("a lower edge must lie above 0".into()))
            }
            _ => {}
        }
        Ok(Self { lo, hi, edge })
    }

    pub fn edge_angle(&self) -> f64 {
        match self.edge {
            Edge::Upper => self.hi,
            Edge::Lower => self.lo,
        }
    }

    pub fn contains(&self, theta: f64) -> bool {
        self.lo <= theta && theta <= self.hi
    }

    pub fn t_max(&self) -> f64 {
        (self.hi - self.lo).sqrt()
    }

    pub fn theta_at(&self, t: f64) -> f64 {
        match self.edge {
            Edge::Upper => self.hi - t * t,
            Edge::Lower => self.lo + t * t,
        }
    }

    /// Inverse of `theta_at`, clamped to the cap.
    pub fn t_of(&self, theta: f64) -> f64 {
        let th = theta.clamp(self.lo, self.hi);
        (th - self.edge_angle()).abs().sqrt()
    }

    pub fn v_at(&self, theta1: f64) -> f64 {
        let (clo, chi) = (self.lo.cos(), self.hi.cos());
        (2.0 * (theta1.cos() - chi) / (clo - chi) - 1.0).clamp(-1.0, 1.0)
    }

    /// `v` at the free edge.
    pub fn v_edge(&self) -> f64 {
        match self.edge {
            Edge::Upper => -1.0,
            Edge::Lower => 1.0,
        }
    }

    /// `2t sin^{n−2}θ₁ / √|cosθ₁ − cosξ|` with `θ₁ = θ(t)`.
    pub fn weight_at(&self, n: usize, t: f64) -> f64 {
        self.weight_with(n, t, self.theta_at(t))
    }

    fn weight_with(&self, n: usize, t: f64, theta1: f64) -> f64 {
        let xi = self.edge_angle();
        let half = 0.5 * t * t;
        let outer = match self.edge {
            Edge::Upper => (xi - half).sin(),
            Edge::Lower => (xi + half).sin(),
        };
        let ratio = if half == 0.0 { 2.0f64.sqrt() } else { t / half.sin().sqrt() };
        // 2t / √(2 outer sin(t²/2))
        let base = 2.0 * ratio / (2.0 * outer).sqrt();
        base * theta1.sin().powi(n as i32 - 2)
    }

    /// Inverse square-root edge factor times `sin^{n−2}`: `ρ(θ₁) / g(v(θ₁))`.
    pub fn density_factor(&self, n: usize, theta1: f64) -> f64 {
        let xi = self.edge_angle();
        let diff = 2.0 * (0.5 * (xi + theta1)).sin() * (0.5 * (xi - theta1)).sin();
        theta1.sin().powi(n as i32 - 2) / diff.abs().sqrt()
    }

    /// Panels in `t` for the kernel at `(r, θ)`. On the sphere with `θ` on the cap the log
    /// singularity sits at `t*` and the two panels touching it are [`Panel::Singular`];
    /// otherwise panels are graded geometrically toward the nearest point of the singularity.
    pub fn panels(&self, r: f64, theta: f64) -> Vec<Panel> {
        let t_max = self.t_max();
        let max_width = t_max / 16.0;
        let tc = self.t_of(theta);
        let mut out = Vec::new();
        if r == 1.0 && self.contains(theta) {
            if tc > 0.0 {
                let len = tc.min(max_width);
                push_split(&mut out, 0.0, tc - len, 2.0, tc - len, max_width);
                out.push(Panel::Singular { at: tc, len: -len });
            }
            if tc < t_max {
                let len = (t_max - tc).min(max_width);
                out.push(Panel::Singular { at: tc, len });
                push_split(&mut out, tc + len, t_max, 2.0, tc + len, max_width);
            }
            return out;
        }
        let dist = if self.contains(theta) {
            (1.0 - r).abs()
        } else {
            let gap = if theta < self.lo { self.lo - theta } else { theta - self.hi };
            ((1.0 - r).powi(2) + gap * gap).sqrt()
        };
        let dt = dist / (2.0 * tc + dist.sqrt());
        let smallest = (0.5 * dt).max(1e-15 * t_max.max(1.0));
        for (a, b) in graded_panels(0.0, t_max, tc, smallest, 2.0) {
            push_split(&mut out, a, b, 1.0, a, max_width);
        }
        out
    }

    /// Nodes, weights and offsets `t − tc` in `t` for one panel.
    fn panel_nodes(panel: &Panel, gl: &GaussLegendre<f64>, tc: f64, mut f: impl FnMut(f64, f64, f64)) {
        match *panel {
            Panel::Plain(a, b) => {
                for (t, w) in gl.mapped(a, b) {
                    f(t, w, t - tc);
                }
            }
            Panel::Singular { at, len } => {
                // t = at + len s^q clusters nodes at the singular end
                let q = SINGULAR_POWER;
                for (s, w) in gl.mapped(0.0, 1.0) {
                    let sq = s.powi(q - 1);
                    let x = len * sq * s;
                    f(at + x, w * len.abs() * q as f64 * sq, x);
                }
            }
        }
    }

    /// `θ − θ₁(t)` given `x = t − t_θ` with `t_θ² = |θ − ξ|`; exact when `θ` is on the cap.
    fn angle_offset(&self, theta: f64, t: f64, x: f64, tc: f64, on_cap: bool) -> f64 {
        if !on_cap {
            return theta - self.theta_at(t);
        }
        // |θ − ξ| = tc², |θ₁ − ξ| = t², t² − tc² = x (t + tc)
        let diff = x * (t + tc);
        match self.edge {
            Edge::Upper => diff,
            Edge::Lower => -diff,
        }
    }

    /// `c_n ∫ h(r, θ, θ₁) T_j(v(θ₁)) ρ-factor dθ₁` for `j < nb`: potentials of the basis.
    pub fn kernel_moments(&self, kernel: &KernelEval<f64>, gl: &GaussLegendre<f64>, r: f64, theta: f64, nb: usize) -> Vec<f64> {
        let n = kernel.n();
        let cn = kernel.c_n();
        let mut out = vec![0.0; nb];
        let mut tj = vec![0.0; nb];
        let tc = self.t_of(theta);
        let on_cap = self.contains(theta);
        for panel in self.panels(r, theta) {
            Self::panel_nodes(&panel, gl, tc, |t, w, x| {
                let delta = self.angle_offset(theta, t, x, tc, on_cap);
                let th1 = if on_cap { (theta - delta).clamp(self.lo, self.hi) } else { self.theta_at(t) };
                let k = kernel.h_with_delta(r, theta, th1, delta);
                let f = cn * w * k * self.weight_with(n, t, th1);
                chebyshev(self.v_at(th1), &mut tj);
                for j in 0..nb {
                    out[j] += f * tj[j];
                }
            });
        }
        out
    }

    /// Masses of the basis densities.
    pub fn mass_moments(&self, n: usize, gl: &GaussLegendre<f64>, nb: usize) -> Vec<f64> {
        let t_max = self.t_max();
        let mut out = vec![0.0; nb];
        let mut tj = vec![0.0; nb];
        let pieces = 32;
        for k in 0..pieces {
            let a = t_max * k as f64 / pieces as f64;
            let b = t_max * (k + 1) as f64 / pieces as f64;
            for (t, w) in gl.mapped(a, b) {
                let f = w * self.weight_at(n, t);
                chebyshev(self.v_at(self.theta_at(t)), &mut tj);
                for j in 0..nb {
                    out[j] += f * tj[j];
                }
            }
        }
        out
    }
}

/// A cap density with Chebyshev coefficients. Coefficients may be signed.
#[derive(Debug, Clone, PartialEq)]
pub struct CapDensity {
    pub shape: CapShape,
    pub coeffs: Vec<f64>,
}

impl CapDensity {
    pub fn new(shape: CapShape, coeffs: Vec<f64>) -> Self {
        Self { shape, coeffs }
    }

    /// Smooth factor `g(v)`.
    pub fn g(&self, theta1: f64) -> f64 {
        let mut tj = vec![0.0; self.coeffs.len()];
        chebyshev(self.shape.v_at(theta1), &mut tj);
        tj.iter().zip(&self.coeffs).map(|(a, b)| a * b).sum()
    }

    /// `g` at the free edge; the coefficient of the inverse square-root singularity.
    pub fn edge_value(&self) -> f64 {
        let mut tj = vec![0.0; self.coeffs.len()];
        chebyshev(self.shape.v_edge(), &mut tj);
        tj.iter().zip(&self.coeffs).map(|(a, b)| a * b).sum()
    }

    /// Polar density `ρ(θ₁)`; zero off the cap.
    pub fn density(&self, n: usize, theta1: f64) -> f64 {
        if !self.shape.contains(theta1) || theta1 == self.shape.edge_angle() {
            return 0.0;
        }
        self.g(theta1) * self.shape.density_factor(n, theta1)
    }

    pub fn mass(&self, n: usize, gl: &GaussLegendre<f64>) -> f64 {
        let m = self.shape.mass_moments(n, gl, self.coeffs.len());
        m.iter().zip(&self.coeffs).map(|(a, b)| a * b).sum()
    }

    /// Rings `(θ₁, mass)` discretizing the part of the density on `[lo, hi]`.
    pub fn rings(&self, n: usize, gl: &GaussLegendre<f64>, lo: f64, hi: f64, pieces: usize) -> Vec<(f64, f64)> {
        let (a, b) = (lo.max(self.shape.lo), hi.min(self.shape.hi));
        if a >= b {
            return Vec::new();
        }
        let (ta, tb) = (self.shape.t_of(a), self.shape.t_of(b));
        let (t0, t1) = (ta.min(tb), ta.max(tb));
        let mut out = Vec::with_capacity(pieces * gl.order());
        for k in 0..pieces {
            let pa = t0 + (t1 - t0) * k as f64 / pieces as f64;
            let pb = t0 + (t1 - t0) * (k + 1) as f64 / pieces as f64;
            for (t, w) in gl.mapped(pa, pb) {
                let th = self.shape.theta_at(t);
                out.push((th, w * self.g(th) * self.shape.weight_at(n, t)));
            }
        }
        out
    }

    /// Total mass of the negative part, by quadrature in `t`.
    pub fn negative_variation(&self, n: usize, gl: &GaussLegendre<f64>) -> f64 {
        let t_max = self.shape.t_max();
        let pieces = 64;
        let mut neg = 0.0;
        for k in 0..pieces {
            let a = t_max * k as f64 / pieces as f64;
            let b = t_max * (k + 1) as f64 / pieces as f64;
            for (t, w) in gl.mapped(a, b) {
                let g = self.g(self.shape.theta_at(t));
                if g < 0.0 {
                    neg -= w * g * self.shape.weight_at(n, t);
                }
            }
        }
        neg
    }

    /// `c_n ∫ h(r, θ, θ₁) ρ(θ₁) dθ₁`
    pub fn potential(&self, kernel: &KernelEval<f64>, gl: &GaussLegendre<f64>, r: f64, theta: f64) -> f64 {
        let m = self.shape.kernel_moments(kernel, gl, r, theta, self.coeffs.len());
        m.iter().zip(&self.coeffs).map(|(a, b)| a * b).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn weight_matches_density_factor() {
        for edge in [Edge::Upper, Edge::Lower] {
            let s = CapShape::new(0.4, 1.7, edge).unwrap();
            for &t in &[0.01, 0.3, 1.0] {
                let th = s.theta_at(t);
                let direct = 2.0 * t * s.density_factor(5, th);
                assert!((s.weight_at(5, t) - direct).abs() < 1e-12 * direct);
            }
        }
    }

    #[test]
    fn mass_of_constant_density() {
        // g ≡ 1 on [0, ξ] in n = 3: ∫ sinθ/√(cosθ − cosξ) dθ = 2√(1 − cosξ)
        let xi = 1.1;
        let cap = CapDensity::new(CapShape::new(0.0, xi, Edge::Upper).unwrap(), vec![1.0]);
        let gl = GaussLegendre::new(16);
        assert!((cap.mass(3, &gl) - 2.0 * (1.0 - xi.cos()).sqrt()).abs() < 1e-13);
    }

    #[test]
    fn potential_at_origin_is_mass() {
        let k = KernelEval::<f64>::new(4).unwrap();
        let gl = GaussLegendre::new(16);
        let cap = CapDensity::new(CapShape::new(2.0, PI, Edge::Lower).unwrap(), vec![1.0, 0.3, -0.1]);
        let p = cap.potential(&k, &gl, 0.0, 0.7);
        assert!((p - cap.mass(4, &gl)).abs() < 1e-13);
    }

    #[test]
    fn singular_and_smooth_paths_agree_near_sphere() {
        // potential is continuous across r = 1
        let k = KernelEval::<f64>::new(3).unwrap();
        let gl = GaussLegendre::new(16);
        let cap = CapDensity::new(CapShape::new(0.0, 1.0, Edge::Upper).unwrap(), vec![1.0, 0.5]);
        let on = cap.potential(&k, &gl, 1.0, 0.5);
        let near = cap.potential(&k, &gl, 1.0 - 1e-9, 0.5);
        assert!((on - near).abs() < 1e-7, "{on} {near}");
    }
}
