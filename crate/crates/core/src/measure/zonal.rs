//! Zonal polynomial surface densities and their potentials in closed form.

/// `C_k^λ(x)` for `k = 0..=deg` by the three-term recurrence.
pub fn gegenbauer_all(lambda: f64, deg: usize, x: f64) -> Vec<f64> {
    let mut c = Vec::with_capacity(deg + 1);
    c.push(1.0);
    if deg == 0 {
        return c;
    }
    c.push(2.0 * lambda * x);
    for k in 2..=deg {
        let kf = k as f64;
        let v = (2.0 * x * (kf + lambda - 1.0) * c[k - 1] - (kf + 2.0 * lambda - 2.0) * c[k - 2]) / kf;
        c.push(v);
    }
    c
}

/// `λ = (n − 2)/2`
pub fn lambda_of(n: usize) -> f64 {
    (n as f64 - 2.0) / 2.0
}

/// Surface density `f(y) = Σ f_k C_k^λ(y₁)` at `y₁ = cosθ`.
pub fn density(n: usize, coeffs: &[f64], theta: f64) -> f64 {
    if coeffs.is_empty() {
        return 0.0;
    }
    let c = gegenbauer_all(lambda_of(n), coeffs.len() - 1, theta.cos());
    coeffs.iter().zip(&c).map(|(f, g)| f * g).sum()
}

/// Potential `∫|x − y|^{2−n} f(y) dH(y)` at polar `(r, θ)`, summed degree by degree.
pub fn potential(n: usize, coeffs: &[f64], sphere_area: f64, r: f64, theta: f64) -> f64 {
    if coeffs.is_empty() {
        return 0.0;
    }
    let lam = lambda_of(n);
    let c = gegenbauer_all(lam, coeffs.len() - 1, theta.cos());
    let (rho, scale) = if r <= 1.0 { (r, 1.0) } else { (1.0 / r, r.powf(2.0 - n as f64)) };
    let mut pow = 1.0;
    let mut total = 0.0;
    for (k, (f, g)) in coeffs.iter().zip(&c).enumerate() {
        total += f * lam / (k as f64 + lam) * pow * g;
        pow *= rho;
    }
    total * sphere_area * scale
}

/// Gegenbauer coefficients of a zonal function sampled through `f(θ)`, projected with
/// Gauss–Legendre in `θ` (weight `sin^{n−2}θ`). Exact for polynomials in `cosθ` of degree
/// `≤ deg` once `order` is large enough.
pub fn project(n: usize, deg: usize, order: usize, f: impl Fn(f64) -> f64) -> Vec<f64> {
    use crate::quadrature::GaussLegendre;
    let q = GaussLegendre::<f64>::new(order);
    let lam = lambda_of(n);
    let mut num = vec![0.0; deg + 1];
    let mut den = vec![0.0; deg + 1];
    for (x, w) in q.mapped(0.0, std::f64::consts::PI) {
        let weight = w * x.sin().powi(n as i32 - 2);
        let c = gegenbauer_all(lam, deg, x.cos());
        let fx = f(x);
        for k in 0..=deg {
            num[k] += weight * fx * c[k];
            den[k] += weight * c[k] * c[k];
        }
    }
    num.iter().zip(&den).map(|(a, b)| a / b).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_special_case() {
        let x: f64 = 0.3;
        let c = gegenbauer_all(0.5, 3, x);
        assert!((c[2] - (3.0 * x * x - 1.0) / 2.0).abs() < 1e-15);
        assert!((c[3] - (5.0 * x.powi(3) - 3.0 * x) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn projection_round_trip() {
        let coeffs = [0.2, -0.1, 0.05, 0.01];
        let back = project(5, 3, 24, |t| density(5, &coeffs, t));
        for (a, b) in coeffs.iter().zip(&back) {
            assert!((a - b).abs() < 1e-14);
        }
    }
}
