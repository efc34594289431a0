use super::{collocate, solve_omegas, CapGeometry, Discretization, HarmonicPair};
use crate::error::{Error, Result};
use crate::kernel::KernelEval;
use crate::measure::{AxisymMeasure, CapDensity, Potential};

/// `γ` and the diagnostics of the ratio `ω₁/(1 − ω₂)` on `(ξ₁, ξ₂)` at `r = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaReport {
    /// From the edge coefficients at `ξ₂`: the combination `γω₂ + ω₁` has a density that
    /// vanishes at the edge.
    pub gamma: f64,
    /// Smallest ratio found by grid scan plus golden-section refinement.
    pub scan_min: f64,
    pub argmin: f64,
    /// Ratio non-increasing along the scan grid.
    pub monotone: bool,
}

/// Locates `γ`; the ratio scan backs the claim that the infimum sits at `ξ₂`.
pub fn gamma_of(pair: &HarmonicPair) -> Result<GammaReport> {
    let g = pair.geometry;
    let e1 = pair.edge2(0);
    let e2 = pair.edge2(1);
    if e2 == 0.0 {
        return Err(Error::DegenerateRatio(0.0));
    }
    let gamma = -e1 / e2;
    let ratio = |t: f64| -> Result<f64> {
        let w1 = pair.omega1_at(1.0, t)?;
        let den = 1.0 - pair.omega2_at(1.0, t)?;
        if den < 1e-12 {
            return Err(Error::DegenerateRatio(den));
        }
        Ok(w1 / den)
    };
    let count = 64;
    let width = g.xi2 - g.xi1;
    let mut best = (f64::INFINITY, 0.0);
    let mut prev = f64::INFINITY;
    let mut monotone = true;
    // stop short of ξ₂ where the ratio is 0/0
    let stop = width / 2048.0;
    for j in 0..=count {
        let t = g.xi1 + stop + (width - 2.0 * stop) * j as f64 / count as f64;
        let v = ratio(t)?;
        if v > prev + 1e-9 {
            monotone = false;
        }
        prev = v;
        if v < best.0 {
            best = (v, t);
        }
    }
    // golden-section refinement inside the bracketing cell
    let h = (width - 2.0 * stop) / count as f64;
    let (mut lo, mut hi) = ((best.1 - h).max(g.xi1 + stop), (best.1 + h).min(g.xi2 - stop));
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..40 {
        let a = hi - phi * (hi - lo);
        let b = lo + phi * (hi - lo);
        if ratio(a)? < ratio(b)? {
            hi = b;
        } else {
            lo = a;
        }
    }
    let t = 0.5 * (lo + hi);
    let v = ratio(t)?;
    if v < best.0 {
        best = (v, t);
    }
    Ok(GammaReport { gamma, scan_min: best.0, argmin: best.1, monotone })
}

/// The extremal potential `V = a(γω₂ + ω₁)` and its data.
#[derive(Debug, Clone)]
pub struct ExtremalSolution {
    pub geometry: CapGeometry,
    pub d: f64,
    pub m: f64,
    pub gamma: f64,
    pub a: f64,
    /// Representing layer of `V`; cap densities may carry small negative parts.
    pub sigma: AxisymMeasure,
    pub residuals: [f64; 2],
    /// Ratio scan behind `γ`; absent for single caps.
    pub gamma_report: Option<GammaReport>,
}

impl Potential for ExtremalSolution {
    fn dim(&self) -> usize {
        self.geometry.n
    }

    fn potential(&self, r: f64, theta: f64) -> Result<f64> {
        self.sigma.potential(r, theta)
    }
}

impl ExtremalSolution {
    /// Single-cap solutions have `E₂ = {−e₁}`.
    pub fn is_single_cap(&self) -> bool {
        self.geometry.xi2 >= std::f64::consts::PI
    }

    /// `V(0)`, from the total mass.
    pub fn value_at_origin(&self) -> f64 {
        self.sigma.total_mass()
    }

    pub fn negative_variation(&self) -> f64 {
        self.sigma.negative_variation()
    }

    /// Max of `|V − M|` on `E₁` and `|V − d|` on `E₂` at `count` points per cap placed
    /// between the collocation nodes.
    pub fn boundary_residual(&self, count: usize) -> Result<f64> {
        let g = self.geometry;
        let mut worst: f64 = 0.0;
        for k in 0..count {
            let s = (k as f64 + 0.37) / count as f64;
            let t1 = g.xi1 * s;
            worst = worst.max((self.potential(1.0, t1)? - self.m).abs());
            if !self.is_single_cap() {
                let t2 = g.xi2 + (std::f64::consts::PI - g.xi2) * s;
                worst = worst.max((self.potential(1.0, t2)? - self.d).abs());
            }
        }
        Ok(worst)
    }

    /// Summary rows `key,value`.
    pub fn to_csv(&self) -> String {
        let g = self.geometry;
        let mut s = String::from("key,value\n");
        let rows: [(&str, f64); 10] = [
            ("n", g.n as f64),
            ("xi1", g.xi1),
            ("xi2", g.xi2),
            ("d", self.d),
            ("M", self.m),
            ("gamma", self.gamma),
            ("a", self.a),
            ("residual_omega1", self.residuals[0]),
            ("residual_omega2", self.residuals[1]),
            ("sigma_negative_variation", self.negative_variation()),
        ];
        for (k, v) in rows {
            s.push_str(&format!("{k},{v}\n"));
        }
        s
    }
}

/// `V = a(γω₂ + ω₁)` with `V(0) = 1`, `M = a`, `d = aγ`.
pub fn build_extremal(geom: &CapGeometry, disc: &Discretization) -> Result<ExtremalSolution> {
    let pair = solve_omegas(geom, disc)?;
    let report = gamma_of(&pair)?;
    let gamma = report.gamma;
    let (w1, w2) = pair.at_origin();
    let a = 1.0 / (gamma * w2 + w1);
    let sigma = pair.combination(a, a * gamma)?;
    let sol = ExtremalSolution {
        geometry: *geom,
        d: a * gamma,
        m: a,
        gamma,
        a,
        sigma,
        residuals: pair.residuals,
        gamma_report: Some(report),
    };
    let neg = sol.negative_variation();
    if neg > 1e-3 {
        return Err(Error::NegativeSigma(neg));
    }
    Ok(sol)
}

/// The `ξ₂ = π` case: `P = Mω₁` for the single cap `E₁ = [0, ξ₁]`.
pub fn build_single_cap(xi1: f64, n: usize, disc: &Discretization) -> Result<ExtremalSolution> {
    let pi = std::f64::consts::PI;
    if xi1 >= pi {
        if n < 3 {
            return Err(Error::InvalidArgument(format!("n must be >= 3, got {n}")));
        }
        // E₁ is the whole sphere; E₂ degenerates to the pole
        let geometry = CapGeometry { n, xi1: pi, xi2: pi };
        // the whole sphere: ω₁ ≡ 1 inside
        return Ok(ExtremalSolution {
            geometry,
            d: 1.0,
            m: 1.0,
            gamma: 1.0,
            a: 1.0,
            sigma: AxisymMeasure::uniform(n)?,
            residuals: [0.0, 0.0],
            gamma_report: None,
        });
    }
    if xi1 <= 0.0 {
        return Err(Error::InvalidArgument("single cap needs xi1 > 0".into()));
    }
    let geometry = CapGeometry::new(n, xi1, pi)?;
    let kernel = KernelEval::<f64>::new(n)?;
    let shape = geometry.cap1()?;
    let one = |_: usize, _: f64| 1.0;
    let sol = collocate(&kernel, &[shape], disc, &[&one])?;
    if sol.residuals[0] > disc.residual_tol {
        return Err(Error::ResidualTooLarge { residual: sol.residuals[0], tol: disc.residual_tol });
    }
    let omega = AxisymMeasure::new(n)?.with_cap(CapDensity::new(shape, sol.coeffs[0][0].clone()));
    let big_m = 1.0 / omega.total_mass();
    let sigma = omega.scaled(big_m);
    let d = sigma.potential(1.0, pi)?;
    Ok(ExtremalSolution {
        geometry,
        d,
        m: big_m,
        gamma: d / big_m,
        a: big_m,
        sigma,
        residuals: [sol.residuals[0], 0.0],
        gamma_report: None,
    })
}
