//! Collocation for single-layer densities on polar caps.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::kernel::KernelEval;
use crate::measure::CapShape;
use crate::quadrature::GaussLegendre;

/// Discretization knobs for the first-kind solves.
#[derive(Debug, Clone, PartialEq)]
pub struct Discretization {
    /// Chebyshev basis size per cap.
    pub basis: usize,
    /// Collocation points per basis function.
    pub oversample: usize,
    /// Relative singular value cutoff.
    pub svd_cutoff: f64,
    /// Largest accepted collocation residual.
    pub residual_tol: f64,
}

impl Default for Discretization {
    fn default() -> Self {
        Self { basis: 16, oversample: 2, svd_cutoff: 1e-12, residual_tol: 1e-6 }
    }
}

impl Discretization {
    pub fn doubled(&self) -> Self {
        Self { basis: 2 * self.basis, ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.basis < 2 || self.oversample < 1 {
            return Err(Error::InvalidArgument("basis >= 2 and oversample >= 1 required".into()));
        }
        if !(self.svd_cutoff > 0.0 && self.residual_tol > 0.0) {
            return Err(Error::InvalidArgument("tolerances must be positive".into()));
        }
        Ok(())
    }
}

/// Chebyshev–Lobatto points in `v`, mapped back to angles on the cap.
pub fn collocation_angles(shape: &CapShape, count: usize) -> Vec<f64> {
    let (clo, chi) = (shape.lo.cos(), shape.hi.cos());
    (0..count)
        .map(|k| {
            let v = (std::f64::consts::PI * k as f64 / (count - 1) as f64).cos();
            let c = chi + 0.5 * (v + 1.0) * (clo - chi);
            c.clamp(-1.0, 1.0).acos().clamp(shape.lo, shape.hi)
        })
        .collect()
}

/// Least-squares solution of the collocation system on `shapes` for several right-hand
/// sides. `rhs[k](i, θ)` is the target on cap `i` at angle `θ`.
pub struct CollocationResult {
    /// `coeffs[k][i]`: coefficients on cap `i` for right-hand side `k`.
    pub coeffs: Vec<Vec<Vec<f64>>>,
    /// Max absolute residual on the collocation rows, per right-hand side.
    pub residuals: Vec<f64>,
    pub rank: usize,
}

pub fn collocate(
    kernel: &KernelEval<f64>,
    shapes: &[CapShape],
    disc: &Discretization,
    rhs: &[&dyn Fn(usize, f64) -> f64],
) -> Result<CollocationResult> {
    disc.validate()?;
    let nb = disc.basis;
    let gl = GaussLegendre::new(24);
    let mut rows: Vec<(usize, f64)> = Vec::new();
    for (i, s) in shapes.iter().enumerate() {
        for th in collocation_angles(s, disc.oversample * nb) {
            rows.push((i, th));
        }
    }
    let cols = nb * shapes.len();
    let mut a = DMatrix::<f64>::zeros(rows.len(), cols);
    for (row, &(_, th)) in rows.iter().enumerate() {
        for (i, s) in shapes.iter().enumerate() {
            let m = s.kernel_moments(kernel, &gl, 1.0, th, nb);
            for j in 0..nb {
                a[(row, i * nb + j)] = m[j];
            }
        }
    }
    let mut b = DMatrix::<f64>::zeros(rows.len(), rhs.len());
    for (row, &(i, th)) in rows.iter().enumerate() {
        for (k, f) in rhs.iter().enumerate() {
            b[(row, k)] = f(i, th);
        }
    }
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let eps = disc.svd_cutoff * smax;
    let rank = svd.rank(eps);
    if rank == 0 {
        return Err(Error::IllConditioned { rank, cols });
    }
    let x = svd
        .solve(&b, eps)
        .map_err(|e| Error::InvalidArgument(format!("svd solve: {e}")))?;
    let res = &a * &x - &b;
    let mut coeffs = Vec::with_capacity(rhs.len());
    let mut residuals = Vec::with_capacity(rhs.len());
    for k in 0..rhs.len() {
        let col: DVector<f64> = x.column(k).into_owned();
        coeffs.push((0..shapes.len()).map(|i| col.as_slice()[i * nb..(i + 1) * nb].to_vec()).collect());
        residuals.push(res.column(k).amax());
    }
    Ok(CollocationResult { coeffs, residuals, rank })
}
