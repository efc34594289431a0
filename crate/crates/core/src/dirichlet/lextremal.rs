//! The `M = ∞` extremal: a point mass `α` at `e₁` plus a layer on `[ξ₂′, π]` holding the
//! potential at `d` there, with the layer density vanishing at its edge.

use super::{collocate, Discretization};
use crate::error::{Error, Result};
use crate::kernel::KernelEval;
use crate::measure::{AxisymMeasure, CapDensity, CapShape, Edge, Potential};

#[derive(Debug, Clone)]
pub struct LExtremal {
    pub n: usize,
    pub d: f64,
    /// Edge of the lower cap; `π` for the pure point mass.
    pub xi: f64,
    pub alpha: f64,
    pub measure: AxisymMeasure,
    /// Max collocation residual of the two cap solves.
    pub residual: f64,
}

impl Potential for LExtremal {
    fn dim(&self) -> usize {
        self.n
    }

    fn potential(&self, r: f64, theta: f64) -> Result<f64> {
        self.measure.potential(r, theta)
    }
}

struct CapSolve {
    alpha: f64,
    /// Edge coefficient of the cap density `d ρ₁ − α ρₑ`.
    edge: f64,
    cap: CapDensity,
    residual: f64,
}

fn solve_at(kernel: &KernelEval<f64>, d: f64, xi: f64, disc: &Discretization) -> Result<CapSolve> {
    let n = kernel.n();
    let shape = CapShape::new(xi, std::f64::consts::PI, Edge::Lower)?;
    let one = |_: usize, _: f64| 1.0;
    // |x − e₁|^{2−n} on the sphere
    let atom = |_: usize, t: f64| (2.0 * (0.5 * t).sin()).powf(2.0 - n as f64);
    let sol = collocate(kernel, &[shape], disc, &[&one, &atom])?;
    let c1 = CapDensity::new(shape, sol.coeffs[0][0].clone());
    let ce = CapDensity::new(shape, sol.coeffs[1][0].clone());
    let gl = crate::quadrature::GaussLegendre::new(24);
    let (m1, me) = (c1.mass(n, &gl), ce.mass(n, &gl));
    let alpha = (1.0 - d * m1) / (1.0 - me);
    let coeffs: Vec<f64> = c1.coeffs.iter().zip(&ce.coeffs).map(|(a, b)| d * a - alpha * b).collect();
    let cap = CapDensity::new(shape, coeffs);
    Ok(CapSolve {
        alpha,
        edge: cap.edge_value(),
        cap,
        residual: sol.residuals[0].max(sol.residuals[1]),
    })
}

/// Builds `P(·, d, ∞)` for `2^{2−n} ≤ d < 1`.
pub fn build_l_extremal(d: f64, n: usize, disc: &Discretization) -> Result<LExtremal> {
    let floor = 2f64.powf(2.0 - n as f64);
    let pi = std::f64::consts::PI;
    if !(d >= floor && d < 1.0) {
        return Err(Error::InvalidArgument(format!("need 2^(2-n) <= d < 1, got {d}")));
    }
    if d == floor {
        return Ok(LExtremal {
            n,
            d,
            xi: pi,
            alpha: 1.0,
            measure: AxisymMeasure::point_mass(n, 0.0)?,
            residual: 0.0,
        });
    }
    let kernel = KernelEval::<f64>::new(n)?;
    let (mut lo, mut hi) = (0.1, pi - 0.1);
    let mut f_lo = solve_at(&kernel, d, lo, disc)?.edge;
    let f_hi = solve_at(&kernel, d, hi, disc)?.edge;
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::BisectionFailure(format!(
            "edge coefficient has one sign on [{lo}, {hi}] ({f_lo:e}, {f_hi:e})"
        )));
    }
    for _ in 0..60 {
        if hi - lo < 1e-13 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let f = solve_at(&kernel, d, mid, disc)?.edge;
        if f.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f;
        } else {
            hi = mid;
        }
    }
    let xi = 0.5 * (lo + hi);
    let s = solve_at(&kernel, d, xi, disc)?;
    if !(s.alpha > 0.0 && s.alpha < 1.0) {
        return Err(Error::BisectionFailure(format!("atom mass {} outside (0, 1)", s.alpha)));
    }
    let measure = AxisymMeasure::new(n)?.with_atom(0.0, s.alpha)?.with_cap(s.cap);
    let neg = measure.negative_variation();
    if neg > 1e-6 {
        return Err(Error::NegativeDensity(neg));
    }
    Ok(LExtremal { n, d, xi, alpha: s.alpha, measure, residual: s.residual })
}
