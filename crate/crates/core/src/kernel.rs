//! The axisymmetric sphere kernel
//!
//! ```text
//! h(r, θ, θ₁) = ∫₀^π (1 + r² − 2rψ)^{1−n/2} sin^{n−3}φ dφ,   ψ = cosθ cosθ₁ + cosφ sinθ sinθ₁
//! ```
//!
//! together with its angular derivatives at `r = 1` and the hypergeometric series `A`, `B`, `C`
//! used to write the mixed partial `∂²h/∂θ∂θ₁(1, θ, θ₁)` as a single series `D`.
//!
//! Two independent routes are kept on purpose: φ-quadrature (graded toward the near-singular
//! end `φ = 0`) and the power series in `(a/b)²`.

use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;
use crate::scalar::{sin_power_integral, Real};

/// `ψ(θ, θ₁, φ)`, the cosine of the angle between two sphere points.
pub fn eval_psi<T: Real>(theta: T, theta1: T, phi: T) -> T {
    theta.cos() * theta1.cos() + phi.cos() * theta.sin() * theta1.sin()
}

/// Normalizing constant with `c_n h(0, ·, ·) = 1`.
pub fn eval_c_n<T: Real>(n: usize) -> T {
    assert!(n >= 3, "c_n is defined for n >= 3");
    T::one() / sin_power_integral::<T>(n - 3)
}

/// `(n/2 − 1) sinθ (1 + cosθ)^{−n/2}`.
///
/// This is `c_n 2^{n/2−1} ∂h/∂θ(1, θ, π)`: the derivative in the observation angle with the
/// source ring collapsed to the antipode `−e₁`. By the symmetry of `h` it is also
/// `c_n 2^{n/2−1} ∂h/∂θ₁(1, π, θ₁)` at `θ₁ = θ`.
pub fn dh_dtheta1_at_pi<T: Real>(theta: T, n: usize) -> Result<T> {
    if !(theta > T::zero() && theta < T::PI()) {
        return Err(Error::InvalidArgument(format!(
            "theta must lie in (0, pi), got {theta}"
        )));
    }
    let half = T::lit(0.5);
    let m = T::from_usize_lossy(n) * half;
    let c = (theta * half).cos();
    let one_plus_cos = T::lit(2.0) * c * c;
    let v = (m - T::one()) * theta.sin() * one_plus_cos.powf(-m);
    if !v.is_finite() {
        return Err(Error::Overflow(format!(
            "(1 + cos theta)^(-n/2) at theta = {theta}"
        )));
    }
    Ok(v)
}

/// Quadrature and series configuration for one dimension `n`.
#[derive(Debug, Clone)]
pub struct KernelEval<T> {
    n: usize,
    quad_order: usize,
    series_tol: T,
    max_terms: usize,
    diag_exclusion: T,
    ratio_guard: T,
    full: GaussLegendre<T>,
    panel: GaussLegendre<T>,
    sin_norm: T,
}

/// Sums of the three series at one `(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesState<T> {
    /// `sinθ sinθ₁`
    pub a: T,
    /// `1 − cosθ cosθ₁`
    pub b: T,
    pub sum_a: T,
    pub sum_b: T,
    pub sum_c: T,
    /// Number of terms summed (shared by the three series).
    pub terms: usize,
}

impl<T: Real> KernelEval<T> {
    pub const DEFAULT_QUAD_ORDER: usize = 64;
    pub const DEFAULT_MAX_TERMS: usize = 100_000;

    pub fn new(n: usize) -> Result<Self> {
        Self::with_config(n, Self::DEFAULT_QUAD_ORDER, T::lit(1e-17), Self::DEFAULT_MAX_TERMS)
    }

    pub fn with_config(n: usize, quad_order: usize, series_tol: T, max_terms: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidArgument(format!("kernel needs n >= 3, got {n}")));
        }
        if quad_order < 16 {
            return Err(Error::InvalidArgument(format!(
                "quad_order must be >= 16, got {quad_order}"
            )));
        }
        if !(series_tol > T::zero() && series_tol < T::lit(1e-4)) {
            return Err(Error::InvalidArgument(format!(
                "series_tol must lie in (0, 1e-4), got {series_tol}"
            )));
        }
        if max_terms < 8 {
            return Err(Error::InvalidArgument(format!("max_terms must be >= 8, got {max_terms}")));
        }
        Ok(Self {
            n,
            quad_order,
            series_tol,
            max_terms,
            diag_exclusion: T::lit(1e-3),
            ratio_guard: T::lit(0.999),
            full: GaussLegendre::new(quad_order),
            panel: GaussLegendre::new(20),
            sin_norm: sin_power_integral(n - 3),
        })
    }

    /// Radius around the diagonal `θ = θ₁` (at `r = 1`) that the checked entry points reject.
    pub fn with_diag_exclusion(mut self, radius: T) -> Self {
        self.diag_exclusion = radius;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn quad_order(&self) -> usize {
        self.quad_order
    }

    pub fn diag_exclusion(&self) -> T {
        self.diag_exclusion
    }

    /// `half_dim = n/2`
    fn half_dim(&self) -> T {
        T::from_usize_lossy(self.n) * T::lit(0.5)
    }

    /// `∫₀^π sin^{n−3}φ dφ = 1/c_n`.
    pub fn sin_norm(&self) -> T {
        self.sin_norm
    }

    pub fn c_n(&self) -> T {
        T::one() / self.sin_norm
    }

    /// `∫₀^π (q0 + s2 (1 − cosφ))^{−p} sin^{n−3}φ dφ` with `p = two_p/2`. Near the
    /// singularity (small `q0/s2`) the substitution `φ = w sinh u` flattens the peak at `φ = 0`.
    fn phi_integral(&self, q0: T, s2: T, two_p: i32) -> T {
        let k = (self.n - 3) as i32;
        if s2 <= T::zero() {
            return neg_half_pow(q0, two_p) * self.sin_norm;
        }
        let two = T::lit(2.0);
        let width = (two * q0 / s2).sqrt();
        let pi = T::PI();
        if width >= T::one() {
            return self.full.integrate(T::zero(), pi, |phi| {
                let sh = (phi / two).sin();
                neg_half_pow(q0 + s2 * two * sh * sh, two_p) * phi.sin().powi(k)
            });
        }
        let u_max = (pi / width).asinh();
        let pieces = (u_max / two).to_f64().unwrap_or(1.0).ceil().max(1.0) as usize;
        let du = u_max / T::from_usize_lossy(pieces);
        let mut total = T::zero();
        for j in 0..pieces {
            let lo = du * T::from_usize_lossy(j);
            total = total
                + self.panel.integrate(lo, lo + du, |u| {
                    let phi = (width * u.sinh()).min(pi);
                    let sh = (phi / two).sin();
                    neg_half_pow(q0 + s2 * two * sh * sh, two_p) * phi.sin().powi(k) * width * u.cosh()
                });
        }
        total
    }

    /// `h(r, θ, θ₁)` without the diagonal guard. Infinite exactly on the singularity.
    pub fn h_unchecked(&self, r: T, theta: T, theta1: T) -> T {
        self.h_with_delta(r, theta, theta1, theta - theta1)
    }

    /// As [`KernelEval::h_unchecked`] with `delta = θ − θ₁` supplied by the caller, who may
    /// know it to full relative precision when `θ₁` is very close to `θ`.
    pub fn h_with_delta(&self, r: T, theta: T, theta1: T, delta: T) -> T {
        let two = T::lit(2.0);
        let d = (delta / two).sin();
        let q0 = (T::one() - r) * (T::one() - r) + T::lit(4.0) * r * d * d;
        let s2 = two * r * (theta.sin() * theta1.sin()).max(T::zero());
        if q0 <= T::zero() {
            return T::infinity();
        }
        self.phi_integral(q0, s2, self.n as i32 - 2)
    }

    /// Kernel value; rejects points within the diagonal exclusion radius at `r = 1`.
    pub fn h(&self, r: T, theta: T, theta1: T) -> Result<T> {
        if r < T::zero() {
            return Err(Error::InvalidArgument(format!("radius must be >= 0, got {r}")));
        }
        if r == T::one() && (theta - theta1).abs() < self.diag_exclusion {
            return Err(singular(r, theta, theta1));
        }
        let v = self.h_unchecked(r, theta, theta1);
        if !v.is_finite() || v <= T::zero() {
            return Err(Error::Divergent { n: self.n });
        }
        Ok(v)
    }

    /// `∫₀^π (1 − ψ)^{−n/2} sin^{n−3}φ dφ`.
    pub fn f_integral(&self, theta: T, theta1: T) -> T {
        let two = T::lit(2.0);
        let d = ((theta - theta1) / two).sin();
        let q0 = T::lit(4.0) * d * d;
        let s2 = two * (theta.sin() * theta1.sin()).max(T::zero());
        let m = self.half_dim();
        two.powf(m) * self.phi_integral(q0, s2, self.n as i32)
    }

    /// `∂h/∂θ(1, θ, θ₁)` from the rewritten first derivative
    /// `−(n/2−1)cotθ h + (n−2)2^{−n/2}(cosθ − cosθ₁)/sinθ ∫(1−ψ)^{−n/2} sin^{n−3}φ dφ`.
    pub fn dh_dtheta(&self, theta: T, theta1: T) -> Result<T> {
        if theta == T::zero() || theta == T::PI() {
            // h(1, ·, θ₁) is even about both poles
            return Ok(T::zero());
        }
        if !(theta > T::zero() && theta < T::PI()) {
            return Err(Error::InvalidArgument(format!("theta must lie in [0, pi], got {theta}")));
        }
        if (theta - theta1).abs() < self.diag_exclusion {
            return Err(singular(T::one(), theta, theta1));
        }
        Ok(self.dh_dtheta_unchecked(theta, theta1))
    }

    pub(crate) fn dh_dtheta_unchecked(&self, theta: T, theta1: T) -> T {
        let two = T::lit(2.0);
        let m = self.half_dim();
        let h = self.h_unchecked(T::one(), theta, theta1);
        let d = ((theta - theta1) / two).sin();
        let q0 = T::lit(4.0) * d * d;
        let s2 = two * (theta.sin() * theta1.sin()).max(T::zero());
        let g = self.phi_integral(q0, s2, self.n as i32);
        let cos_diff = -two * ((theta + theta1) / two).sin() * d;
        let n = T::from_usize_lossy(self.n);
        -(m - T::one()) * h * theta.cos() / theta.sin() + (n - two) * cos_diff / theta.sin() * g
    }

    /// Sums `A`, `B`, `C`: `Σ_l (λ)_{2l} Γ(n/2−1)Γ(l+1/2) / ((2l)! Γ(n/2+l−1/2)) (a/b)^{2l}`
    /// for `λ = n/2 − 1, n/2, n/2 + 1`.
    pub fn series_abc(&self, a: T, b: T) -> Result<SeriesState<T>> {
        if !(a >= T::zero() && a < b && b <= T::lit(2.0) + T::epsilon()) {
            return Err(Error::InvalidArgument(format!(
                "series needs 0 <= a < b <= 2, got a = {a}, b = {b}"
            )));
        }
        let x = a / b;
        if x > self.ratio_guard {
            return Err(Error::SlowConvergence {
                ratio: x.to_f64().unwrap_or(f64::NAN),
                terms: 0,
            });
        }
        let x2 = x * x;
        let m = self.half_dim();
        let lambdas = [m - T::one(), m, m + T::one()];
        let mut terms = [self.sin_norm; 3];
        let mut sums = [self.sin_norm; 3];
        let half = T::lit(0.5);
        let two = T::lit(2.0);
        for l in 0..self.max_terms {
            let lf = T::from_usize_lossy(l);
            let common =
                (lf + half) / ((two * lf + T::one()) * (two * lf + two) * (m + lf - half)) * x2;
            let mut done = true;
            for j in 0..3 {
                let lam = lambdas[j];
                terms[j] = terms[j] * (lam + two * lf) * (lam + two * lf + T::one()) * common;
                sums[j] = sums[j] + terms[j];
                if terms[j].abs() >= self.series_tol * sums[j].abs() {
                    done = false;
                }
            }
            if done {
                return Ok(SeriesState {
                    a,
                    b,
                    sum_a: sums[0],
                    sum_b: sums[1],
                    sum_c: sums[2],
                    terms: l + 2,
                });
            }
        }
        Err(Error::SlowConvergence {
            ratio: x.to_f64().unwrap_or(f64::NAN),
            terms: self.max_terms,
        })
    }

    /// `D` at `(θ, θ₁)`; negative away from the diagonal.
    pub fn eval_d(&self, theta: T, theta1: T) -> Result<T> {
        let (a, b) = ab(theta, theta1);
        let s = self.series_abc(a, b)?;
        Ok(d_from_series(&s, self.half_dim()) / self.sin_norm)
    }

    /// `∂²h/∂θ∂θ₁(1, θ, θ₁)` reconstructed from `D`.
    pub fn mixed_partial(&self, theta: T, theta1: T) -> Result<T> {
        if !(theta > T::zero() && theta < T::PI() && theta1 > T::zero() && theta1 < T::PI()) {
            return Err(Error::InvalidArgument("angles must lie in (0, pi)".into()));
        }
        let (_, b) = ab(theta, theta1);
        let m = self.half_dim();
        let d = self.eval_d(theta, theta1)?;
        Ok((m - T::one()) * self.sin_norm * d
            / ((T::lit(2.0) * b).powf(m - T::one()) * theta.sin() * theta1.sin()))
    }

    /// `A_l / A_0`, the normalized coefficient of `(a/b)^{2l}` in `A`.
    pub fn a_coefficient(&self, l: usize) -> T {
        let m = self.half_dim();
        let (half, two) = (T::lit(0.5), T::lit(2.0));
        let mut c = T::one();
        for k in 0..l {
            let kf = T::from_usize_lossy(k);
            c = c * (m - T::one() + two * kf) * (m + two * kf) * (kf + half)
                / ((two * kf + T::one()) * (two * kf + two) * (m + kf - half));
        }
        c
    }

    /// The pair `(T_l¹, T_l²)` of the even-dimensional decomposition of `D`
    /// (`D = Σ_l T_l¹ + T_l²`, with `T_0¹ = 0`).
    pub fn term_t(&self, l: usize, a: T, b: T) -> Result<(T, T)> {
        if !self.n.is_multiple_of(2) {
            return Err(Error::OddDimension(self.n));
        }
        let m = self.half_dim();
        let lf = T::from_usize_lossy(l);
        let two = T::lit(2.0);
        let x2 = (a / b) * (a / b);
        let scale = self.a_coefficient(l) * x2.powi(l as i32);
        let first = two * lf * b
            - T::lit(4.0) * lf
            - (two * lf / m) * (two * lf - T::one())
            - two * lf * (m + two * lf - T::one()) / (m * (m - T::one()));
        let p = m + two * lf - T::one();
        let second = -(a * a / b) * p + p * (m + two * lf) / (m - T::one()) * (a * a / (b * b));
        Ok((first * scale, second * scale))
    }
}

/// `x^{−two_p/2}` for integer `two_p ≥ 0`.
fn neg_half_pow<T: Real>(x: T, two_p: i32) -> T {
    let whole = x.powi(two_p / 2);
    if two_p % 2 == 0 {
        T::one() / whole
    } else {
        T::one() / (whole * x.sqrt())
    }
}

/// `(a, b) = (sinθ sinθ₁, 1 − cosθ cosθ₁)`
pub fn ab<T: Real>(theta: T, theta1: T) -> (T, T) {
    (theta.sin() * theta1.sin(), T::one() - theta.cos() * theta1.cos())
}

fn d_from_series<T: Real>(s: &SeriesState<T>, m: T) -> T {
    let (a, b) = (s.a, s.b);
    let one = T::one();
    b * (m - one) * (s.sum_b - s.sum_a) + (m - one) * (s.sum_a - s.sum_c) + (s.sum_b - s.sum_c)
        - (m - one) * (a * a / b) * s.sum_b
        + m * (a * a / (b * b)) * s.sum_c
}

fn singular<T: Real>(r: T, theta: T, theta1: T) -> Error {
    Error::SingularPoint {
        r: r.to_f64().unwrap_or(f64::NAN),
        theta: theta.to_f64().unwrap_or(f64::NAN),
        theta1: theta1.to_f64().unwrap_or(f64::NAN),
    }
}
