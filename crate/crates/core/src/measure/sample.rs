//! Seeded random members of `F_d^M`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{zonal, AxisymMeasure, Potential};
use crate::error::{Error, Result};
use crate::scalar::sphere_area;

#[derive(Debug, Clone)]
pub struct SamplerConfig {
    /// Highest polynomial degree of a bump.
    pub max_degree: usize,
    /// Number of bumps mixed in before shrinking toward uniform.
    pub bumps: usize,
    /// Required slack inside `(d, M)` on the sphere.
    pub margin: f64,
    /// Shrink steps toward the uniform measure before giving up.
    pub attempts: usize,
    /// θ-grid used for the sphere scan.
    pub scan: usize,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self { max_degree: 10, bumps: 3, margin: 1e-6, attempts: 60, scan: 1024 }
    }
}

/// Unit-mass density `∝ b(cosθ)` from a nonnegative polynomial bump.
fn bump(n: usize, degree: usize, kind: u8, u0: f64) -> Vec<f64> {
    let shape = move |t: f64| {
        let u = t.cos();
        match kind {
            0 => ((1.0 + u) / 2.0).powi(degree as i32),
            1 => ((1.0 - u) / 2.0).powi(degree as i32),
            _ => (1.0 - ((u - u0) / 2.0).powi(2)).powi(degree as i32 / 2),
        }
    };
    let coeffs = zonal::project(n, degree, 96, shape);
    let mass = coeffs[0] * sphere_area::<f64>(n - 1);
    coeffs.iter().map(|c| c / mass).collect()
}

/// Smallest and largest `p(1, θ)` on a grid; exact bounds for the ball when `p` is harmonic
/// inside and continuous up to the sphere.
fn sphere_range(m: &AxisymMeasure, scan: usize) -> (f64, f64) {
    let pi = std::f64::consts::PI;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for j in 0..=scan {
        let t = pi * j as f64 / scan as f64;
        let v = m.potential(1.0, t).unwrap_or(f64::INFINITY);
        lo = lo.min(v);
        hi = hi.max(v);
    }
    (lo, hi)
}

/// A random unit-mass measure with `d ≤ p` on the ball and `p ≤ M`. With `M = ∞` the sample
/// may carry a point mass at `e₁`. Deterministic in `seed`.
pub fn sample_feasible(d: f64, big_m: f64, n: usize, seed: u64, cfg: &SamplerConfig) -> Result<AxisymMeasure> {
    if !(d < 1.0 && big_m > 1.0) {
        return Err(Error::InvalidArgument(format!("need d < 1 < M, got d = {d}, M = {big_m}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let uniform = AxisymMeasure::uniform(n)?;
    let mut weights: Vec<f64> = (0..=cfg.bumps).map(|_| -rng.gen::<f64>().max(1e-300).ln()).collect();
    let with_atom = big_m.is_infinite() && rng.gen_bool(0.5);
    let atom = if with_atom { rng.gen_range(0.05..0.6) } else { 0.0 };
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w *= (1.0 - atom) / total);

    let mut coeffs = vec![weights[0] / sphere_area::<f64>(n - 1)];
    for w in &weights[1..] {
        let degree = rng.gen_range(1..=cfg.max_degree);
        let kind = rng.gen_range(0..3u8);
        let u0 = rng.gen_range(-1.0..1.0);
        let b = bump(n, degree, kind, u0);
        if coeffs.len() < b.len() {
            coeffs.resize(b.len(), 0.0);
        }
        for (i, c) in b.iter().enumerate() {
            coeffs[i] += w * c;
        }
    }
    let mut m = AxisymMeasure::new(n)?.with_zonal(coeffs)?;
    if with_atom {
        m = m.with_atom(0.0, atom)?;
    }

    let mut t = 0.0;
    for _ in 0..cfg.attempts {
        let cand = if t == 0.0 { m.clone() } else { m.mix(&uniform, t)? };
        let (lo, hi) = sphere_range(&cand, cfg.scan);
        if lo >= d + cfg.margin && hi <= big_m - cfg.margin {
            return Ok(cand);
        }
        t = 0.5 * (1.0 + t);
    }
    Err(Error::FeasibilityTimeout(cfg.attempts))
}
