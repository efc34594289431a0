//! Axisymmetric measures on the unit sphere, stored in reduced polar form on `[0, π]`.
//!
//! A measure combines rings (atoms), quadrature nodes, a zonal polynomial surface density and
//! cap densities with an inverse square-root edge. The potential is
//! `p(r, θ) = c_n ∫ h(r, θ, θ₁) dλ(θ₁)`, so a unit mass measure has `p(0) = 1`.

pub mod cap;
mod csv;
mod sample;
pub mod zonal;

pub use cap::{CapDensity, CapShape, Edge};
pub use sample::{sample_feasible, SamplerConfig};

use std::collections::HashMap;
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::kernel::KernelEval;
use crate::quadrature::GaussLegendre;
use crate::scalar::sphere_area;

/// Anything with an axisymmetric Newtonian potential.
pub trait Potential {
    fn dim(&self) -> usize;
    /// `p(r, θ)`; `Err(SingularPoint)` on a point of infinite potential.
    fn potential(&self, r: f64, theta: f64) -> Result<f64>;
}

#[derive(Debug, Clone)]
pub struct AxisymMeasure {
    n: usize,
    atoms: Vec<(f64, f64)>,
    nodes: Vec<(f64, f64)>,
    zonal: Vec<f64>,
    caps: Vec<CapDensity>,
    kernel: KernelEval<f64>,
    gl: GaussLegendre<f64>,
}

impl PartialEq for AxisymMeasure {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.atoms == other.atoms
            && self.nodes == other.nodes
            && self.zonal == other.zonal
            && self.caps == other.caps
    }
}

fn check_angle(theta: f64) -> Result<()> {
    if (0.0..=std::f64::consts::PI).contains(&theta) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("angle {theta} outside [0, pi]")))
    }
}

impl AxisymMeasure {
    /// Zero measure in dimension `n`.
    pub fn new(n: usize) -> Result<Self> {
        Ok(Self {
            n,
            atoms: Vec::new(),
            nodes: Vec::new(),
            zonal: Vec::new(),
            caps: Vec::new(),
            kernel: KernelEval::new(n)?,
            gl: GaussLegendre::new(24),
        })
    }

    /// Normalized surface measure.
    pub fn uniform(n: usize) -> Result<Self> {
        let area = sphere_area::<f64>(n - 1);
        Self::new(n)?.with_zonal(vec![1.0 / area])
    }

    /// Unit point mass at polar angle `theta` (a ring unless `theta ∈ {0, π}`).
    pub fn point_mass(n: usize, theta: f64) -> Result<Self> {
        Self::new(n)?.with_atom(theta, 1.0)
    }

    pub fn with_atom(mut self, theta: f64, mass: f64) -> Result<Self> {
        check_angle(theta)?;
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::InvalidArgument(format!("atom mass must be positive, got {mass}")));
        }
        self.atoms.push((theta, mass));
        Ok(self)
    }

    pub fn with_node(mut self, theta: f64, weight: f64) -> Result<Self> {
        check_angle(theta)?;
        if !(weight >= 0.0 && weight.is_finite()) {
            return Err(Error::InvalidArgument(format!("node weight must be >= 0, got {weight}")));
        }
        self.nodes.push((theta, weight));
        Ok(self)
    }

    /// Gegenbauer coefficients of the surface density (`λ = (n−2)/2`).
    pub fn with_zonal(mut self, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument("non-finite zonal coefficient".into()));
        }
        self.zonal = coeffs;
        Ok(self)
    }

    /// Cap densities may be signed; see [`AxisymMeasure::negative_variation`].
    pub fn with_cap(mut self, cap: CapDensity) -> Self {
        self.caps.push(cap);
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn nodes(&self) -> &[(f64, f64)] {
        &self.nodes
    }

    pub fn zonal(&self) -> &[f64] {
        &self.zonal
    }

    pub fn caps(&self) -> &[CapDensity] {
        &self.caps
    }

    pub fn kernel(&self) -> &KernelEval<f64> {
        &self.kernel
    }

    pub fn total_mass(&self) -> f64 {
        let area = sphere_area::<f64>(self.n - 1);
        let atoms: f64 = self.atoms.iter().map(|a| a.1).sum();
        let nodes: f64 = self.nodes.iter().map(|a| a.1).sum();
        let zonal = self.zonal.first().map_or(0.0, |f| f * area);
        let caps: f64 = self.caps.iter().map(|c| c.mass(self.n, &self.gl)).sum();
        atoms + nodes + zonal + caps
    }

    /// Rings `(θ₁, mass)` discretizing the part of the measure on `[lo, hi)` (closed at `π`).
    /// Atoms and nodes are passed through; densities use `pieces` Gauss–Legendre panels.
    pub fn rings(&self, lo: f64, hi: f64, pieces: usize) -> Vec<(f64, f64)> {
        let pi = std::f64::consts::PI;
        let inside = |t: f64| lo <= t && (t < hi || (hi >= pi && t <= pi));
        let mut out: Vec<(f64, f64)> = self.atoms.iter().chain(&self.nodes).copied().filter(|a| inside(a.0)).collect();
        if !self.zonal.is_empty() && lo < hi {
            let band = sphere_area::<f64>(self.n - 2);
            for k in 0..pieces {
                let a = lo + (hi - lo) * k as f64 / pieces as f64;
                let b = lo + (hi - lo) * (k + 1) as f64 / pieces as f64;
                for (t, w) in self.gl.mapped(a, b) {
                    let rho = zonal::density(self.n, &self.zonal, t);
                    out.push((t, w * band * rho * t.sin().powi(self.n as i32 - 2)));
                }
            }
        }
        for c in &self.caps {
            out.extend(c.rings(self.n, &self.gl, lo, hi, pieces));
        }
        out
    }

    /// Mass of the negative part of the cap densities.
    pub fn negative_variation(&self) -> f64 {
        self.caps.iter().map(|c| c.negative_variation(self.n, &self.gl)).sum()
    }

    /// Every component multiplied by `s > 0`.
    pub fn scaled(&self, s: f64) -> Self {
        let mut out = self.clone();
        out.atoms.iter_mut().for_each(|a| a.1 *= s);
        out.nodes.iter_mut().for_each(|a| a.1 *= s);
        out.zonal.iter_mut().for_each(|c| *c *= s);
        for c in &mut out.caps {
            c.coeffs.iter_mut().for_each(|x| *x *= s);
        }
        out
    }

    /// `(1 − t) self + t other`.
    pub fn mix(&self, other: &Self, t: f64) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::InvalidArgument("dimension mismatch".into()));
        }
        let a = self.scaled(1.0 - t);
        let b = other.scaled(t);
        let mut out = a.clone();
        out.atoms.extend(b.atoms);
        out.nodes.extend(b.nodes);
        if out.zonal.len() < b.zonal.len() {
            out.zonal.resize(b.zonal.len(), 0.0);
        }
        for (i, c) in b.zonal.iter().enumerate() {
            out.zonal[i] += c;
        }
        out.caps.extend(b.caps);
        out.atoms.retain(|a| a.1 > 0.0);
        Ok(out)
    }

    fn ring(&self, r: f64, theta: f64, theta1: f64) -> Result<f64> {
        let pi = std::f64::consts::PI;
        if theta1 == 0.0 || theta1 == pi {
            // |x ∓ e₁|^{2−n}, singular only at the pole itself
            let d = 0.5 * (theta - theta1);
            let q = (1.0 - r).powi(2) + 4.0 * r * d.sin().powi(2);
            if q == 0.0 {
                return Err(Error::SingularPoint { r, theta, theta1 });
            }
            return Ok(q.powf(1.0 - 0.5 * self.n as f64));
        }
        let excl = self.kernel.diag_exclusion();
        if r == 1.0 && (theta - theta1).abs() < excl {
            return Err(Error::SingularPoint { r, theta, theta1 });
        }
        Ok(self.kernel.c_n() * self.kernel.h_unchecked(r, theta, theta1))
    }
}

impl Potential for AxisymMeasure {
    fn dim(&self) -> usize {
        self.n
    }

    fn potential(&self, r: f64, theta: f64) -> Result<f64> {
        if r < 0.0 {
            return Err(Error::InvalidArgument(format!("radius must be >= 0, got {r}")));
        }
        check_angle(theta)?;
        let mut total = 0.0;
        for &(t1, m) in self.atoms.iter().chain(&self.nodes) {
            total += m * self.ring(r, theta, t1)?;
        }
        if !self.zonal.is_empty() {
            total += zonal::potential(self.n, &self.zonal, sphere_area(self.n - 1), r, theta);
        }
        for c in &self.caps {
            total += c.potential(&self.kernel, &self.gl, r, theta);
        }
        Ok(total)
    }
}

/// Caches `p(r, θ)` by exact argument bits; for comparing one costly potential against many.
/// Errors are not cached.
#[derive(Debug)]
pub struct Memo<'a, P: ?Sized> {
    inner: &'a P,
    seen: Mutex<HashMap<(u64, u64), f64>>,
}

impl<'a, P: Potential + ?Sized> Memo<'a, P> {
    pub fn new(inner: &'a P) -> Self {
        Self { inner, seen: Mutex::new(HashMap::new()) }
    }
}

impl<P: Potential + ?Sized> Potential for Memo<'_, P> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn potential(&self, r: f64, theta: f64) -> Result<f64> {
        let key = (r.to_bits(), theta.to_bits());
        if let Some(&v) = self.seen.lock().unwrap_or_else(|e| e.into_inner()).get(&key) {
            return Ok(v);
        }
        let v = self.inner.potential(r, theta)?;
        self.seen.lock().unwrap_or_else(|e| e.into_inner()).insert(key, v);
        Ok(v)
    }
}

/// Difference `pos − neg` of two measures.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedAxisymMeasure {
    pub pos: AxisymMeasure,
    pub neg: AxisymMeasure,
}

impl SignedAxisymMeasure {
    pub fn total_mass(&self) -> f64 {
        self.pos.total_mass() - self.neg.total_mass()
    }

    pub fn total_variation(&self) -> f64 {
        self.pos.total_mass() + self.neg.total_mass()
    }
}

impl Potential for SignedAxisymMeasure {
    fn dim(&self) -> usize {
        self.pos.n
    }

    fn potential(&self, r: f64, theta: f64) -> Result<f64> {
        Ok(self.pos.potential(r, theta)? - self.neg.potential(r, theta)?)
    }
}

/// Evaluation grid for membership in `F_d^M`.
#[derive(Debug, Clone)]
pub struct FeasibilityGrid {
    pub radii: usize,
    pub angles: usize,
    /// Shell offset: extra rows at `r = 1 ± shell`.
    pub shell: f64,
    pub tol: f64,
}

impl Default for FeasibilityGrid {
    fn default() -> Self {
        Self { radii: 24, angles: 96, shell: 1e-3, tol: 1e-9 }
    }
}

/// Outcome of a membership test. `witness` is the first violating `(r, θ, p)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Membership {
    pub member: bool,
    pub min_ball: f64,
    pub max_all: f64,
    pub witness: Option<(f64, f64, f64)>,
}

/// Checks `d ≤ p` on the closed unit ball and `p ≤ M` everywhere on the grid. Points of
/// infinite potential count as `+∞`. `M = f64::INFINITY` disables the upper bound.
pub fn membership_check<P: Potential + ?Sized>(p: &P, d: f64, big_m: f64, grid: &FeasibilityGrid) -> Membership {
    let pi = std::f64::consts::PI;
    let mut radii: Vec<f64> = (0..grid.radii).map(|i| i as f64 / (grid.radii - 1) as f64).collect();
    radii.push(1.0 - grid.shell);
    let outer = 1.0 + grid.shell;
    let mut out = Membership { member: true, min_ball: f64::INFINITY, max_all: f64::NEG_INFINITY, witness: None };
    let flag = |out: &mut Membership, r: f64, t: f64, v: f64| {
        if out.witness.is_none() {
            out.witness = Some((r, t, v));
        }
        out.member = false;
    };
    for &r in radii.iter().chain(std::iter::once(&outer)) {
        for j in 0..grid.angles {
            let t = pi * j as f64 / (grid.angles - 1) as f64;
            let v = p.potential(r, t).unwrap_or(f64::INFINITY);
            if r <= 1.0 {
                out.min_ball = out.min_ball.min(v);
                if v < d - grid.tol {
                    flag(&mut out, r, t, v);
                }
            }
            out.max_all = out.max_all.max(v);
            if v > big_m + grid.tol {
                flag(&mut out, r, t, v);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn uniform_potential_is_newtonian() {
        for n in 3..7 {
            let u = AxisymMeasure::uniform(n).unwrap();
            assert!((u.total_mass() - 1.0).abs() < 1e-14);
            assert!((u.potential(0.6, 1.0).unwrap() - 1.0).abs() < 1e-14);
            let r: f64 = 1.7;
            assert!((u.potential(r, 2.0).unwrap() - r.powf(2.0 - n as f64)).abs() < 1e-14);
        }
    }

    #[test]
    fn point_mass_at_antipode() {
        for n in 3..7 {
            let p = AxisymMeasure::point_mass(n, 0.0).unwrap();
            let v = p.potential(1.0, PI).unwrap();
            assert!((v - 2f64.powf(2.0 - n as f64)).abs() < 1e-14);
            assert!(p.potential(1.0, 0.0).is_err());
        }
    }

    #[test]
    fn ring_uses_kernel_normalization() {
        // a ring at the equator seen from the origin
        let m = AxisymMeasure::point_mass(5, PI / 2.0).unwrap();
        assert!((m.potential(0.0, 0.3).unwrap() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn membership_examples() {
        let grid = FeasibilityGrid { radii: 16, angles: 33, ..Default::default() };
        let u = AxisymMeasure::uniform(3).unwrap();
        assert!(membership_check(&u, 1.0 - 1e-6, 1.0 + 1e-6, &grid).member);
        let pm = AxisymMeasure::point_mass(3, 0.0).unwrap();
        let res = membership_check(&pm, 0.5, 100.0, &grid);
        assert!(!res.member);
        assert!(res.witness.is_some());
        assert!(membership_check(&pm, 0.5, f64::INFINITY, &grid).member);
    }

    #[test]
    fn signed_measure_difference() {
        let pos = AxisymMeasure::uniform(4).unwrap();
        let neg = AxisymMeasure::point_mass(4, PI).unwrap().scaled(0.25);
        let s = SignedAxisymMeasure { pos, neg };
        assert!((s.total_mass() - 0.75).abs() < 1e-14);
        assert!((s.total_variation() - 1.25).abs() < 1e-14);
        assert!((s.potential(0.0, 1.0).unwrap() - 0.75).abs() < 1e-14);
    }
}
