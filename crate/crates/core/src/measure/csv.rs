//! Plain-text serialization: header `kind,theta,mass`, one row per component.
//!
//! Rows: `dim,n,0`, `atom,θ,m`, `node,θ,w`, `zonal,k,f_k`, `cap_upper,lo,hi` or
//! `cap_lower,lo,hi` followed by that cap's `cheb,j,c_j` rows. Floats use the shortest
//! representation that parses back to the same bits.

use super::{AxisymMeasure, CapDensity, CapShape, Edge};
use crate::error::{Error, Result};

pub const HEADER: &str = "kind,theta,mass";

impl AxisymMeasure {
    pub fn to_csv(&self) -> String {
        let mut s = String::from(HEADER);
        s.push('\n');
        s.push_str(&format!("dim,{},0\n", self.n));
        for (t, m) in &self.atoms {
            s.push_str(&format!("atom,{t},{m}\n"));
        }
        for (t, w) in &self.nodes {
            s.push_str(&format!("node,{t},{w}\n"));
        }
        for (k, f) in self.zonal.iter().enumerate() {
            s.push_str(&format!("zonal,{k},{f}\n"));
        }
        for c in &self.caps {
            let kind = match c.shape.edge {
                Edge::Upper => "cap_upper",
                Edge::Lower => "cap_lower",
            };
            s.push_str(&format!("{kind},{},{}\n", c.shape.lo, c.shape.hi));
            for (j, x) in c.coeffs.iter().enumerate() {
                s.push_str(&format!("cheb,{j},{x}\n"));
            }
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, h)) if h.trim() == HEADER => {}
            _ => return Err(Error::Csv(format!("missing header `{HEADER}`"))),
        }
        let mut out: Option<AxisymMeasure> = None;
        let mut zonal = Vec::new();
        for (i, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 3 {
                return Err(Error::Csv(format!("line {}: expected 3 columns", i + 1)));
            }
            let num = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Csv(format!("line {}: {e}", i + 1)))
            };
            let (a, b) = (num(cols[1])?, num(cols[2])?);
            if cols[0] == "dim" {
                if out.is_some() {
                    return Err(Error::Csv("duplicate dim row".into()));
                }
                out = Some(AxisymMeasure::new(a as usize)?);
                continue;
            }
            let m = out
                .as_mut()
                .ok_or_else(|| Error::Csv("dim row must come first".into()))?;
            match cols[0] {
                "atom" => *m = m.clone().with_atom(a, b)?,
                "node" => *m = m.clone().with_node(a, b)?,
                "zonal" => {
                    if a as usize != zonal.len() {
                        return Err(Error::Csv(format!("line {}: zonal degrees out of order", i + 1)));
                    }
                    zonal.push(b);
                }
                "cap_upper" | "cap_lower" => {
                    let edge = if cols[0] == "cap_upper" { Edge::Upper } else { Edge::Lower };
                    m.caps.push(CapDensity::new(CapShape::new(a, b, edge)?, Vec::new()));
                }
                "cheb" => {
                    let cap = m
                        .caps
                        .last_mut()
                        .ok_or_else(|| Error::Csv(format!("line {}: cheb row before a cap", i + 1)))?;
                    if a as usize != cap.coeffs.len() {
                        return Err(Error::Csv(format!("line {}: cheb indices out of order", i + 1)));
                    }
                    cap.coeffs.push(b);
                }
                other => return Err(Error::Csv(format!("line {}: unknown kind `{other}`", i + 1))),
            }
        }
        let m = out.ok_or_else(|| Error::Csv("no dim row".into()))?;
        m.with_zonal(zonal)
    }
}
