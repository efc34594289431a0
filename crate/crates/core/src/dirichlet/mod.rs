//! Two-cap Dirichlet problems and the extremal potentials built from them.
//!
//! `ω₁` (resp. `ω₂`) is harmonic off `E₁ ∪ E₂`, equals 1 on `E₁` (resp. `E₂`), 0 on the other
//! cap and vanishes at infinity. Each is the potential of a signed single layer on the caps,
//! found by least-squares collocation in an edge-weighted Chebyshev basis.

mod extremal;
mod lextremal;
mod probe;
mod solve;

pub use extremal::{build_extremal, build_single_cap, gamma_of, ExtremalSolution, GammaReport};
pub use lextremal::{build_l_extremal, LExtremal};
pub use probe::{injectivity_probe, InjectivityReport};
pub use solve::{collocate, collocation_angles, CollocationResult, Discretization};

use crate::error::{Error, Result};
use crate::kernel::KernelEval;
use crate::measure::{AxisymMeasure, CapDensity, CapShape, Edge, Potential, SignedAxisymMeasure};

/// Dimension and cap angles: `E₁ = {θ ≤ ξ₁}`, `E₂ = {θ ≥ ξ₂}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapGeometry {
    pub n: usize,
    pub xi1: f64,
    pub xi2: f64,
}

impl CapGeometry {
    pub fn new(n: usize, xi1: f64, xi2: f64) -> Result<Self> {
        let pi = std::f64::consts::PI;
        if n < 3 {
            return Err(Error::InvalidArgument(format!("n must be >= 3, got {n}")));
        }
        if !(0.0 <= xi1 && xi1 < xi2 && xi2 <= pi) {
            return Err(Error::InvalidArgument(format!(
                "need 0 <= xi1 < xi2 <= pi, got ({xi1}, {xi2})"
            )));
        }
        Ok(Self { n, xi1, xi2 })
    }

    pub fn cap1(&self) -> Result<CapShape> {
        CapShape::new(0.0, self.xi1, Edge::Upper)
    }

    pub fn cap2(&self) -> Result<CapShape> {
        CapShape::new(self.xi2, std::f64::consts::PI, Edge::Lower)
    }

    /// Is `θ` (on the sphere) in the open gap `(ξ₁, ξ₂)`?
    pub fn in_gap(&self, theta: f64) -> bool {
        self.xi1 < theta && theta < self.xi2
    }
}

/// `ω₁`, `ω₂` as signed layers: `pos` holds the `E₁` part and `neg` the negated `E₂` part of
/// `ω₁`; for `ω₂` the roles are swapped.
#[derive(Debug, Clone)]
pub struct HarmonicPair {
    pub geometry: CapGeometry,
    pub omega1: SignedAxisymMeasure,
    pub omega2: SignedAxisymMeasure,
    /// Max collocation residual of `ω₁` and `ω₂`.
    pub residuals: [f64; 2],
    pub rank: usize,
    /// Coefficients `[ω_i][cap]`.
    coeffs: [[Vec<f64>; 2]; 2],
    shapes: [CapShape; 2],
}

impl HarmonicPair {
    /// The single layer of `α ω₁ + β ω₂` as one measure with two signed caps.
    pub fn combination(&self, alpha: f64, beta: f64) -> Result<AxisymMeasure> {
        let mut m = AxisymMeasure::new(self.geometry.n)?;
        for cap in 0..2 {
            let c: Vec<f64> = self.coeffs[0][cap]
                .iter()
                .zip(&self.coeffs[1][cap])
                .map(|(x, y)| alpha * x + beta * y)
                .collect();
            m = m.with_cap(CapDensity::new(self.shapes[cap], c));
        }
        Ok(m)
    }

    pub fn omega1_at(&self, r: f64, theta: f64) -> Result<f64> {
        self.omega1.potential(r, theta)
    }

    pub fn omega2_at(&self, r: f64, theta: f64) -> Result<f64> {
        self.omega2.potential(r, theta)
    }

    /// `ω_i(0)` from total masses.
    pub fn at_origin(&self) -> (f64, f64) {
        (self.omega1.total_mass(), self.omega2.total_mass())
    }

    /// Edge coefficient of `ω_i` at the free edge `ξ₂` of `E₂`.
    pub fn edge2(&self, i: usize) -> f64 {
        CapDensity::new(self.shapes[1], self.coeffs[i][1].clone()).edge_value()
    }
}

/// Solves for `ω₁`, `ω₂` on a nondegenerate geometry (`0 < ξ₁`, `ξ₂ < π`).
pub fn solve_omegas(geom: &CapGeometry, disc: &Discretization) -> Result<HarmonicPair> {
    let pi = std::f64::consts::PI;
    if !(geom.xi1 > 0.0 && geom.xi2 < pi) {
        return Err(Error::InvalidArgument("solve_omegas needs 0 < xi1 and xi2 < pi".into()));
    }
    let kernel = KernelEval::<f64>::new(geom.n)?;
    let shapes = [geom.cap1()?, geom.cap2()?];
    let one = |cap: usize, _: f64| if cap == 0 { 1.0 } else { 0.0 };
    let two = |cap: usize, _: f64| if cap == 1 { 1.0 } else { 0.0 };
    let sol = collocate(&kernel, &shapes, disc, &[&one, &two])?;
    for &r in &sol.residuals {
        if r > disc.residual_tol {
            return Err(Error::ResidualTooLarge { residual: r, tol: disc.residual_tol });
        }
    }
    let n = geom.n;
    let layer = |coeffs: &[f64], shape: CapShape, sign: f64| -> Result<AxisymMeasure> {
        Ok(AxisymMeasure::new(n)?
            .with_cap(CapDensity::new(shape, coeffs.iter().map(|c| sign * c).collect())))
    };
    let c = &sol.coeffs;
    let omega1 = SignedAxisymMeasure {
        pos: layer(&c[0][0], shapes[0], 1.0)?,
        neg: layer(&c[0][1], shapes[1], -1.0)?,
    };
    let omega2 = SignedAxisymMeasure {
        pos: layer(&c[1][1], shapes[1], 1.0)?,
        neg: layer(&c[1][0], shapes[0], -1.0)?,
    };
    Ok(HarmonicPair {
        geometry: *geom,
        omega1,
        omega2,
        residuals: [sol.residuals[0], sol.residuals[1]],
        rank: sol.rank,
        coeffs: [
            [c[0][0].clone(), c[0][1].clone()],
            [c[1][0].clone(), c[1][1].clone()],
        ],
        shapes,
    })
}
