//! The `*` function of axisymmetric data, convex means and the comparisons built on them.
//!
//! For `l` on the slice `{|x| = r}`, `l*(r, θ)` is the largest integral of `l` over a set of
//! the same surface measure as the cap `{θ' ≤ θ}`. On a cell discretization this is the
//! integral of the decreasing rearrangement: cells sorted by value, the last one fractional.

use num_traits::Num;

use crate::error::{Error, Result};
use crate::measure::Potential;
use crate::quadrature::{graded_panels, GaussLegendre};
use crate::scalar::sphere_area;

/// Best total of `values` over a set of cells of total weight `target`, for each target.
///
/// Cells are taken in decreasing value order (stable), the last one fractionally. Targets
/// beyond the total weight are clamped to it.
pub fn star_cells<T: Num + PartialOrd + Copy>(values: &[T], weights: &[T], targets: &[T]) -> Vec<T> {
    assert_eq!(values.len(), weights.len());
    let mut order: Vec<usize> = (0..values.len()).collect();
    // stable, so ties keep their slice order
    order.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).unwrap_or(std::cmp::Ordering::Equal));
    targets
        .iter()
        .map(|&m| {
            let (mut acc, mut used) = (T::zero(), T::zero());
            for &i in &order {
                let rest = m - used;
                if !(rest > T::zero()) {
                    break;
                }
                if weights[i] <= rest {
                    acc = acc + values[i] * weights[i];
                    used = used + weights[i];
                } else {
                    acc = acc + values[i] * rest;
                    used = m;
                }
            }
            acc
        })
        .collect()
}

/// Uniform cells on `[0, π]` with their surface measures on the unit sphere.
#[derive(Debug, Clone)]
pub struct Slice {
    pub n: usize,
    /// Cell edges `θ_k = kπ/cells`.
    pub edges: Vec<f64>,
    pub mids: Vec<f64>,
    /// `|S^{n−2}| ∫_cell sin^{n−2}`.
    pub weights: Vec<f64>,
}

impl Slice {
    pub fn new(n: usize, cells: usize) -> Result<Self> {
        if n < 3 || cells == 0 {
            return Err(Error::InvalidArgument(format!("slice needs n >= 3 and cells > 0, got ({n}, {cells})")));
        }
        let pi = std::f64::consts::PI;
        let gl = GaussLegendre::<f64>::new(16);
        let band = sphere_area::<f64>(n - 2);
        let edges: Vec<f64> = (0..=cells).map(|k| pi * k as f64 / cells as f64).collect();
        let mids = edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        let weights = edges
            .windows(2)
            .map(|w| band * gl.integrate(w[0], w[1], |t| t.sin().powi(n as i32 - 2)))
            .collect();
        Ok(Self { n, edges, mids, weights })
    }

    /// Cap measures at the cell edges.
    pub fn cap_measures(&self) -> Vec<f64> {
        let mut acc = 0.0;
        let mut out = vec![0.0];
        for w in &self.weights {
            acc += w;
            out.push(acc);
        }
        out
    }
}

/// `l*(r, ·)` at the cell edges.
#[derive(Debug, Clone, PartialEq)]
pub struct StarProfile {
    pub r: f64,
    pub theta: Vec<f64>,
    pub values: Vec<f64>,
}

/// Star of cell-midpoint samples `l`.
pub fn star(l: &[f64], slice: &Slice, r: f64) -> StarProfile {
    let values = star_cells(l, &slice.weights, &slice.cap_measures());
    StarProfile { r, theta: slice.edges.clone(), values }
}

/// Star of a potential on the slice of radius `r`.
pub fn star_of<P: Potential + ?Sized>(p: &P, slice: &Slice, r: f64) -> Result<StarProfile> {
    let l = slice.mids.iter().map(|&t| p.potential(r, t)).collect::<Result<Vec<_>>>()?;
    Ok(star(&l, slice, r))
}

/// Convex nondecreasing test functions.
#[derive(Debug, Clone, PartialEq)]
pub enum Phi {
    Identity,
    Square,
    Exp,
    /// `(t − c)₊`
    Hinge(f64),
    /// Linear interpolation through `(t, Φ(t))` knots, extended linearly past both ends.
    PiecewiseLinear(Vec<(f64, f64)>),
}

impl Phi {
    pub fn apply(&self, t: f64) -> f64 {
        match self {
            Phi::Identity => t,
            Phi::Square => t * t,
            Phi::Exp => t.exp(),
            Phi::Hinge(c) => (t - c).max(0.0),
            Phi::PiecewiseLinear(k) => {
                if k.len() == 1 {
                    return k[0].1;
                }
                let j = k.partition_point(|p| p.0 <= t).clamp(1, k.len() - 1);
                let ((x0, y0), (x1, y1)) = (k[j - 1], k[j]);
                y0 + (y1 - y0) * (t - x0) / (x1 - x0)
            }
        }
    }

    pub fn tag(&self) -> String {
        match self {
            Phi::Identity => "identity".into(),
            Phi::Square => "square".into(),
            Phi::Exp => "exp".into(),
            Phi::Hinge(c) => format!("hinge({c})"),
            Phi::PiecewiseLinear(k) => format!("pwl({})", k.len()),
        }
    }
}

/// Panels on `[0, π]`: uniform of width `π/32`, refined geometrically toward each breakpoint.
fn slice_panels(breaks: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let pi = std::f64::consts::PI;
    let mut cuts: Vec<f64> = (0..=32).map(|k| pi * k as f64 / 32.0).collect();
    for &(at, smallest) in breaks {
        for (a, b) in graded_panels(0.0, pi, at, smallest, 2.0) {
            cuts.push(a);
            cuts.push(b);
        }
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    cuts.windows(2).map(|w| (w[0], w[1])).collect()
}

fn slice_integral(n: usize, breaks: &[(f64, f64)], mut f: impl FnMut(f64) -> Result<f64>) -> Result<f64> {
    let gl = GaussLegendre::<f64>::new(16);
    let band = sphere_area::<f64>(n - 2);
    let mut acc = 0.0;
    for (a, b) in slice_panels(breaks) {
        for (t, w) in gl.mapped(a, b) {
            acc += w * f(t)? * t.sin().powi(n as i32 - 2);
        }
    }
    Ok(band * acc)
}

/// `∫_{S^{n−1}} Φ(p(ry)) dH^{n−1}(y)`, by composite Gauss–Legendre in `θ` refined toward the
/// poles on a scale of `|1 − r|` (where atoms at the poles peak).
pub fn convex_mean<P: Potential + ?Sized>(p: &P, phi: &Phi, r: f64) -> Result<f64> {
    let pi = std::f64::consts::PI;
    let s = (0.25 * (1.0 - r).abs()).max(1e-3);
    let v = slice_integral(p.dim(), &[(0.0, s), (pi, s)], |t| Ok(phi.apply(p.potential(r, t)?)))?;
    if !v.is_finite() {
        return Err(Error::Overflow(format!("{} mean at r = {r}", phi.tag())));
    }
    Ok(v)
}

/// `∫_{cap θ₀} (P − p)(ry) dH^{n−1}(y)`; `breaks` are angles where either profile has a kink.
pub fn cumulative_compare<P: Potential + ?Sized, Q: Potential + ?Sized>(
    p: &P,
    big_p: &Q,
    r: f64,
    theta0: f64,
    breaks: &[f64],
) -> Result<f64> {
    Ok(cumulative_profile(p, big_p, r, &[theta0], breaks)?[0])
}

/// `∫₀^τ (P − p)(r, θ) sin^{n−2}θ dθ · |S^{n−2}|` for each `τ` in `taus`.
pub fn cumulative_profile<P: Potential + ?Sized, Q: Potential + ?Sized>(
    p: &P,
    big_p: &Q,
    r: f64,
    taus: &[f64],
    breaks: &[f64],
) -> Result<Vec<f64>> {
    let n = p.dim();
    let gl = GaussLegendre::<f64>::new(16);
    let band = sphere_area::<f64>(n - 2);
    let mut b: Vec<(f64, f64)> = breaks.iter().map(|&t| (t, 1e-9)).collect();
    b.push((0.0, 1e-3));
    b.push((std::f64::consts::PI, 1e-3));
    let mut cuts: Vec<f64> = slice_panels(&b).iter().map(|p| p.0).collect();
    cuts.push(std::f64::consts::PI);
    cuts.extend(taus.iter().copied());
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();
    let mut running = vec![0.0];
    for w in cuts.windows(2) {
        let mut acc = 0.0;
        for (t, wt) in gl.mapped(w[0], w[1]) {
            acc += wt * (big_p.potential(r, t)? - p.potential(r, t)?) * t.sin().powi(n as i32 - 2);
        }
        running.push(running.last().unwrap() + band * acc);
    }
    Ok(taus
        .iter()
        .map(|&tau| {
            let k = cuts.partition_point(|&c| c < tau);
            running[k]
        })
        .collect())
}

/// Margins of `P` over `p`: star margins `min_θ (P* − p*)` and convex-mean margins.
#[derive(Debug, Clone, PartialEq)]
pub struct DominanceReport {
    /// `(r, min_θ (P* − p*), argmin θ)`
    pub star: Vec<(f64, f64, f64)>,
    /// `(r, Φ tag, ∫Φ(P) − ∫Φ(p), ∫Φ(P))`
    pub means: Vec<(f64, String, f64, f64)>,
}

impl DominanceReport {
    pub fn min_star_margin(&self) -> f64 {
        self.star.iter().map(|s| s.1).fold(f64::INFINITY, f64::min)
    }

    /// Worst mean margin relative to `max(1, |∫Φ(P)|)`.
    pub fn min_relative_mean_margin(&self) -> f64 {
        self.means.iter().map(|m| m.2 / m.3.abs().max(1.0)).fold(f64::INFINITY, f64::min)
    }

    /// Rows `r,theta_or_phi,margin,witness`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("r,theta_or_phi,margin,witness\n");
        for (r, m, t) in &self.star {
            s.push_str(&format!("{r},{t},{m},star\n"));
        }
        for (r, tag, m, v) in &self.means {
            s.push_str(&format!("{r},{tag},{m},{v}\n"));
        }
        s
    }
}

/// Compares `p` against `P` on each radius; `phis(r)` lists the test functions for that radius.
pub fn dominance_check<P: Potential + ?Sized, Q: Potential + ?Sized>(
    p: &P,
    big_p: &Q,
    radii: &[f64],
    slice: &Slice,
    phis: &dyn Fn(f64) -> Vec<Phi>,
) -> Result<DominanceReport> {
    let mut report = DominanceReport { star: Vec::new(), means: Vec::new() };
    for &r in radii {
        let a = star_of(big_p, slice, r)?;
        let b = star_of(p, slice, r)?;
        let (mut worst, mut at) = (f64::INFINITY, 0.0);
        for k in 0..a.values.len() {
            let m = a.values[k] - b.values[k];
            if m < worst {
                worst = m;
                at = a.theta[k];
            }
        }
        report.star.push((r, worst, at));
        for phi in phis(r) {
            let big = convex_mean(big_p, &phi, r)?;
            let small = convex_mean(p, &phi, r)?;
            report.means.push((r, phi.tag(), big - small, big));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::AxisymMeasure;

    #[test]
    fn star_of_a_constant_is_the_cap_measure() {
        let s = Slice::new(4, 64).unwrap();
        let p = star(&vec![2.5; 64], &s, 0.5);
        for (v, m) in p.values.iter().zip(s.cap_measures()) {
            assert!((v - 2.5 * m).abs() < 1e-12);
        }
        let total: f64 = s.weights.iter().sum();
        assert!((total - sphere_area::<f64>(3)).abs() < 1e-12);
    }

    #[test]
    fn star_of_a_cap_indicator() {
        let s = Slice::new(3, 40).unwrap();
        // cap of the first 10 cells
        let l: Vec<f64> = (0..40).map(|k| if k < 10 { 1.0 } else { 0.0 }).collect();
        let p = star(&l, &s, 1.0);
        let caps = s.cap_measures();
        for k in 0..=40 {
            assert!((p.values[k] - caps[k.min(10)]).abs() < 1e-13);
        }
    }

    #[test]
    fn star_of_decreasing_data_is_the_cumulative_integral() {
        let s = Slice::new(5, 128).unwrap();
        let l: Vec<f64> = s.mids.iter().map(|t| 1.0 + t.cos()).collect();
        let p = star(&l, &s, 0.3);
        let mut acc = 0.0;
        for k in 0..128 {
            acc += l[k] * s.weights[k];
            assert!((p.values[k + 1] - acc).abs() < 1e-12);
        }
        // total: |S³| ∫₀^π (1 + cos t) sin³t dt = 2π² · 4/3
        let pi = std::f64::consts::PI;
        assert!((p.values[128] - 2.0 * pi * pi * 4.0 / 3.0).abs() < 1e-3);
    }

    #[test]
    fn star_is_monotone() {
        let s = Slice::new(3, 50).unwrap();
        let l: Vec<f64> = s.mids.iter().map(|t| (3.0 * t).sin()).collect();
        let m: Vec<f64> = l.iter().map(|v| v + 0.1).collect();
        let (a, b) = (star(&l, &s, 1.0), star(&m, &s, 1.0));
        for k in 0..a.values.len() {
            assert!(a.values[k] <= b.values[k]);
        }
        assert_eq!(a.values[0], 0.0);
    }

    #[test]
    fn convex_means_of_uniform() {
        let u = AxisymMeasure::uniform(4).unwrap();
        let area = sphere_area::<f64>(3);
        for phi in [Phi::Identity, Phi::Square] {
            assert!((convex_mean(&u, &phi, 0.5).unwrap() - area).abs() < 1e-12);
        }
        assert_eq!(convex_mean(&u, &Phi::Hinge(1.0), 0.5).unwrap(), 0.0);
        // outside, u = r^{2−n}
        let v = convex_mean(&u, &Phi::Exp, 2.0).unwrap();
        assert!((v - area * 0.25f64.exp()).abs() < 1e-11);
    }

    #[test]
    fn piecewise_linear_phi() {
        let phi = Phi::PiecewiseLinear(vec![(0.0, 0.0), (1.0, 1.0), (2.0, 3.0)]);
        assert_eq!(phi.apply(0.5), 0.5);
        assert_eq!(phi.apply(1.5), 2.0);
        assert_eq!(phi.apply(3.0), 5.0);
        assert_eq!(phi.apply(-1.0), -1.0);
    }

    #[test]
    fn cumulative_compare_endpoints() {
        let a = AxisymMeasure::point_mass(3, 0.7).unwrap();
        let b = AxisymMeasure::uniform(3).unwrap();
        assert_eq!(cumulative_compare(&a, &b, 0.5, 0.0, &[]).unwrap(), 0.0);
        let full = cumulative_compare(&a, &b, 0.5, std::f64::consts::PI, &[]).unwrap();
        assert!(full.abs() < 1e-11, "{full}");
    }
}
