//! Scalar abstraction shared by the generic numerical kernels.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating point scalar the kernel, quadrature, Kelvin and planar code is generic over.
pub trait Real: Float + FloatConst + FromPrimitive + Debug + Display + Send + Sync + 'static {
    /// Lossy conversion from an `f64` literal.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable in scalar type")
    }

    fn from_usize_lossy(v: usize) -> Self {
        Self::from_usize(v).expect("integer representable in scalar type")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `∫₀^π sin^k φ dφ` via the Wallis recurrence.
pub fn sin_power_integral<T: Real>(k: usize) -> T {
    let mut even = T::PI();
    let mut odd = T::lit(2.0);
    if k == 0 {
        return even;
    }
    if k == 1 {
        return odd;
    }
    let mut j = 2;
    loop {
        let ratio = T::from_usize_lossy(j - 1) / T::from_usize_lossy(j);
        if j % 2 == 0 {
            even = even * ratio;
        } else {
            odd = odd * ratio;
        }
        if j == k {
            return if k.is_multiple_of(2) { even } else { odd };
        }
        j += 1;
    }
}

/// Surface area of the unit sphere `S^k ⊂ R^{k+1}`.
pub fn sphere_area<T: Real>(k: usize) -> T {
    // |S^0| = 2, |S^1| = 2π, |S^k| = 2π/(k-1) |S^{k-2}|
    let two_pi = T::lit(2.0) * T::PI();
    let mut area = if k.is_multiple_of(2) { T::lit(2.0) } else { two_pi };
    let mut j = if k.is_multiple_of(2) { 2 } else { 3 };
    while j <= k {
        area = area * two_pi / T::from_usize_lossy(j - 1);
        j += 2;
    }
    area
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn wallis_matches_closed_forms() {
        assert!((sin_power_integral::<f64>(0) - PI).abs() < 1e-15);
        assert!((sin_power_integral::<f64>(1) - 2.0).abs() < 1e-15);
        assert!((sin_power_integral::<f64>(2) - PI / 2.0).abs() < 1e-15);
        assert!((sin_power_integral::<f64>(3) - 4.0 / 3.0).abs() < 1e-15);
        assert!((sin_power_integral::<f64>(5) - 16.0 / 15.0).abs() < 1e-15);
    }

    #[test]
    fn sphere_areas() {
        assert!((sphere_area::<f64>(1) - 2.0 * PI).abs() < 1e-14);
        assert!((sphere_area::<f64>(2) - 4.0 * PI).abs() < 1e-14);
        assert!((sphere_area::<f64>(3) - 2.0 * PI * PI).abs() < 1e-13);
        // |S^{n-1}| = |S^{n-2}| ∫ sin^{n-2}
        for n in 3..9 {
            let lhs = sphere_area::<f64>(n - 1);
            let rhs = sphere_area::<f64>(n - 2) * sin_power_integral::<f64>(n - 2);
            assert!((lhs - rhs).abs() < 1e-12 * lhs);
        }
    }
}
