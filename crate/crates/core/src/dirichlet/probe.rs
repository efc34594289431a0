use super::{build_extremal, CapGeometry, Discretization};
use crate::error::Result;

/// `(ξ₁, ξ₂) ↦ (d, M)` over a list of geometries.
#[derive(Debug, Clone)]
pub struct InjectivityReport {
    /// `(geometry, d, M)`
    pub rows: Vec<(CapGeometry, f64, f64)>,
    /// Index pairs whose `(d, M)` agree within the separation threshold.
    pub collisions: Vec<(usize, usize)>,
    /// Along each run of equal `ξ₂` sorted by `ξ₁`: does `d/M` increase?
    pub ratio_increasing: bool,
    /// Along the same runs: does `M` decrease?
    pub m_decreasing: bool,
    /// Exploratory: does `d` increase along the runs? Never asserted.
    pub d_increasing: bool,
}

pub fn injectivity_probe(geoms: &[CapGeometry], disc: &Discretization, separation: f64) -> Result<InjectivityReport> {
    let mut rows = Vec::with_capacity(geoms.len());
    for g in geoms {
        let s = build_extremal(g, disc)?;
        rows.push((*g, s.d, s.m));
    }
    let mut collisions = Vec::new();
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            let (gi, di, mi) = rows[i];
            let (gj, dj, mj) = rows[j];
            if gi == gj {
                continue;
            }
            if (di - dj).abs() <= separation && (mi - mj).abs() <= separation {
                collisions.push((i, j));
            }
        }
    }
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by(|&a, &b| {
        let (ga, gb) = (rows[a].0, rows[b].0);
        (ga.n, ga.xi2, ga.xi1).partial_cmp(&(gb.n, gb.xi2, gb.xi1)).unwrap()
    });
    let (mut ratio_increasing, mut m_decreasing, mut d_increasing) = (true, true, true);
    for w in order.windows(2) {
        let (a, b) = (rows[w[0]], rows[w[1]]);
        if a.0.n != b.0.n || a.0.xi2 != b.0.xi2 {
            continue;
        }
        ratio_increasing &= b.1 / b.2 > a.1 / a.2;
        m_decreasing &= b.2 < a.2;
        d_increasing &= b.1 > a.1;
    }
    Ok(InjectivityReport { rows, collisions, ratio_increasing, m_decreasing, d_increasing })
}
