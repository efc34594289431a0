//! CSV tables, pass/fail checks and minimal SVG figures.

use std::fmt::Write as _;

/// A CSV table; rendered with a header row and LF line endings.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

fn field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for row in std::iter::once(&self.header).chain(&self.rows) {
            let line: Vec<String> = row.iter().map(|f| field(f)).collect();
            s.push_str(&line.join(","));
            s.push('\n');
        }
        s
    }
}

/// Shorthand for a CSV row out of displayable values.
#[macro_export]
macro_rules! row {
    ($($x:expr),* $(,)?) => { vec![$(format!("{}", $x)),*] };
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    AtMost,
    AtLeast,
}

/// One asserted quantity. `location` carries the inputs needed to re-evaluate it.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub bound: Bound,
    pub limit: f64,
    pub location: String,
}

impl Check {
    pub fn at_most(name: &str, value: f64, limit: f64, location: impl Into<String>) -> Self {
        Self { name: name.into(), value, bound: Bound::AtMost, limit, location: location.into() }
    }

    pub fn at_least(name: &str, value: f64, limit: f64, location: impl Into<String>) -> Self {
        Self { name: name.into(), value, bound: Bound::AtLeast, limit, location: location.into() }
    }

    pub fn passed(&self) -> bool {
        match self.bound {
            Bound::AtMost => self.value <= self.limit,
            Bound::AtLeast => self.value >= self.limit,
        }
    }

    fn relation(&self) -> &'static str {
        match self.bound {
            Bound::AtMost => "<=",
            Bound::AtLeast => ">=",
        }
    }

    pub fn row(&self, scenario: &str) -> Vec<String> {
        row![scenario, self.name, self.value, self.relation(), self.limit, if self.passed() { "pass" } else { "FAIL" }, self.location]
    }
}

pub const CHECK_HEADER: [&str; 7] = ["scenario", "check", "value", "relation", "limit", "status", "location"];

/// One line per series; `y` values that are not finite are dropped.
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<(String, Vec<(f64, f64)>)>,
}

const W: f64 = 640.0;
const H: f64 = 400.0;
const PAD: f64 = 56.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn span(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-300 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

impl Plot {
    pub fn render(&self) -> String {
        let pts = || self.series.iter().flat_map(|s| s.1.iter()).filter(|p| p.0.is_finite() && p.1.is_finite());
        let (x0, x1) = span(pts().map(|p| p.0));
        let (y0, y1) = span(pts().map(|p| p.1));
        let sx = |x: f64| PAD + (x - x0) / (x1 - x0) * (W - 2.0 * PAD);
        let sy = |y: f64| H - PAD - (y - y0) / (y1 - y0) * (H - 2.0 * PAD);
        let mut s = String::new();
        let _ = writeln!(s, "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">");
        let _ = writeln!(s, "<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>");
        let _ = writeln!(s, "<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">{}</text>", W / 2.0, escape(&self.title));
        let _ = writeln!(
            s,
            "<rect x=\"{PAD}\" y=\"{PAD}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#444\"/>",
            W - 2.0 * PAD,
            H - 2.0 * PAD
        );
        for (v, anchor) in [(x0, "start"), (x1, "end")] {
            let _ = writeln!(s, "<text x=\"{:.1}\" y=\"{}\" text-anchor=\"{anchor}\" font-size=\"11\">{v:.4}</text>", sx(v), H - PAD + 16.0);
        }
        for v in [y0, y1] {
            let _ = writeln!(s, "<text x=\"{}\" y=\"{:.1}\" text-anchor=\"end\" font-size=\"11\">{v:.4}</text>", PAD - 4.0, sy(v) + 4.0);
        }
        let _ = writeln!(s, "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"12\">{}</text>", W / 2.0, H - 12.0, escape(&self.x_label));
        let _ = writeln!(
            s,
            "<text x=\"14\" y=\"{}\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 14 {})\">{}</text>",
            H / 2.0,
            H / 2.0,
            escape(&self.y_label)
        );
        for (k, (label, points)) in self.series.iter().enumerate() {
            let color = COLORS[k % COLORS.len()];
            let coords: Vec<String> = points
                .iter()
                .filter(|p| p.0.is_finite() && p.1.is_finite())
                .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                .collect();
            let _ = writeln!(s, "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>", coords.join(" "));
            let _ = writeln!(
                s,
                "<text x=\"{}\" y=\"{}\" font-size=\"11\" fill=\"{color}\">{}</text>",
                PAD + 8.0,
                PAD + 16.0 + 14.0 * k as f64,
                escape(label)
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

/// Sign map of `values[i][j]` over an `x × y` grid: blue negative, red non-negative,
/// grey for skipped cells (`None`).
pub fn sign_heatmap(title: &str, values: &[Vec<Option<f64>>]) -> String {
    let rows = values.len().max(1);
    let cols = values.iter().map(|r| r.len()).max().unwrap_or(1).max(1);
    let cw = (W - 2.0 * PAD) / cols as f64;
    let ch = (H - 2.0 * PAD) / rows as f64;
    let mut s = String::new();
    let _ = writeln!(s, "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">");
    let _ = writeln!(s, "<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>");
    let _ = writeln!(s, "<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">{}</text>", W / 2.0, escape(title));
    for (i, row) in values.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let fill = match v {
                None => "#dddddd",
                Some(x) if *x < 0.0 => "#3b6fb6",
                Some(_) => "#c0392b",
            };
            // θ₁ increases upward
            let y = H - PAD - (i + 1) as f64 * ch;
            let _ = writeln!(s, "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"{fill}\"/>", PAD + j as f64 * cw, y, cw, ch);
        }
    }
    let _ = writeln!(s, "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"12\">theta</text>", W / 2.0, H - 16.0);
    let _ = writeln!(s, "<text x=\"14\" y=\"{}\" font-size=\"12\" transform=\"rotate(-90 14 {})\">theta1</text>", H / 2.0, H / 2.0);
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quotes_only_when_needed() {
        let mut t = Table::new(&["a", "b"]);
        t.push(row![1.5, "x,y"]);
        t.push(row!["say \"hi\"", 2]);
        assert_eq!(t.render(), "a,b\n1.5,\"x,y\"\n\"say \"\"hi\"\"\",2\n");
    }

    #[test]
    fn checks_compare_in_the_right_direction() {
        assert!(Check::at_most("x", 1.0, 1.0, "").passed());
        assert!(!Check::at_most("x", 1.1, 1.0, "").passed());
        assert!(Check::at_least("x", -1e-12, -1e-9, "").passed());
        assert!(!Check::at_least("x", f64::NAN, 0.0, "").passed());
    }

    #[test]
    fn svg_is_well_formed_enough() {
        let p = Plot {
            title: "P(1, θ) <profile>".into(),
            x_label: "theta".into(),
            y_label: "P".into(),
            series: vec![("a".into(), vec![(0.0, 1.0), (1.0, f64::INFINITY), (2.0, 0.5)])],
        };
        let s = p.render();
        assert!(s.starts_with("<svg") && s.ends_with("</svg>\n"));
        assert!(s.contains("&lt;profile&gt;"));
        assert_eq!(s.matches("<polyline").count(), 1);
        let h = sign_heatmap("D", &[vec![Some(-1.0), None], vec![Some(1.0), Some(-2.0)]]);
        assert_eq!(h.matches("#3b6fb6").count(), 2);
    }
}
