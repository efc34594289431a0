//! INI-style configuration: `[section]` headers, `key = value` lines, `#` or `;` comments.
//!
//! Every section must name a scenario (or `general`) and every key must be consumed by the
//! scenario that owns it, so typos fail loudly before anything runs.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

pub const SECTIONS: [&str; 8] = ["general", "prop41", "build-extremal", "thm12", "ineq19", "kelvin-limit", "planar", "massmove"];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    pub sections: BTreeMap<String, BTreeMap<String, String>>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Config::default();
        let mut current: Option<String> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split(['#', ';']).next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at = |msg: String| ConfigError(format!("line {}: {msg}", i + 1));
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest.strip_suffix(']').ok_or_else(|| at(format!("unterminated section header `{line}`")))?.trim();
                if !SECTIONS.contains(&name) {
                    return Err(at(format!("unknown section `{name}`")));
                }
                if cfg.sections.contains_key(name) {
                    return Err(at(format!("section `{name}` appears twice")));
                }
                cfg.sections.insert(name.to_string(), BTreeMap::new());
                current = Some(name.to_string());
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| at(format!("expected `key = value`, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() || value.is_empty() {
                return Err(at(format!("empty key or value in `{line}`")));
            }
            let section = current.as_ref().ok_or_else(|| at("key outside of any section".into()))?;
            let entries = cfg.sections.get_mut(section).expect("section inserted above");
            if entries.insert(key.to_string(), value.to_string()).is_some() {
                return Err(at(format!("key `{key}` repeated in [{section}]")));
            }
        }
        Ok(cfg)
    }

    pub fn section(&self, name: &str) -> Params {
        Params { section: name.to_string(), entries: self.sections.get(name).cloned().unwrap_or_default() }
    }
}

/// Keys of one section, consumed as they are read; leftovers are an error.
#[derive(Debug, Clone)]
pub struct Params {
    section: String,
    entries: BTreeMap<String, String>,
}

/// A number, `pi`, or `pi*x` / `x*pi` / `pi/x`.
fn number(s: &str) -> Option<f64> {
    let s = s.trim();
    if s == "pi" {
        return Some(PI);
    }
    if let Some(rest) = s.strip_prefix("pi/") {
        return rest.trim().parse::<f64>().ok().map(|x| PI / x);
    }
    if let Some(rest) = s.strip_prefix("pi*") {
        return rest.trim().parse::<f64>().ok().map(|x| PI * x);
    }
    if let Some(rest) = s.strip_suffix("*pi") {
        return rest.trim().parse::<f64>().ok().map(|x| PI * x);
    }
    s.parse::<f64>().ok()
}

impl Params {
    fn bad(&self, key: &str, why: &str) -> ConfigError {
        ConfigError(format!("[{}] {key}: {why}", self.section))
    }

    pub fn f64(&mut self, key: &str, default: f64) -> Result<f64, ConfigError> {
        match self.entries.remove(key) {
            None => Ok(default),
            Some(v) => number(&v).filter(|x| x.is_finite()).ok_or_else(|| self.bad(key, &format!("`{v}` is not a number"))),
        }
    }

    /// Strictly positive number, for tolerances and step sizes.
    pub fn positive(&mut self, key: &str, default: f64) -> Result<f64, ConfigError> {
        let v = self.f64(key, default)?;
        if v > 0.0 {
            Ok(v)
        } else {
            Err(self.bad(key, "must be positive"))
        }
    }

    pub fn usize(&mut self, key: &str, default: usize) -> Result<usize, ConfigError> {
        match self.entries.remove(key) {
            None => Ok(default),
            Some(v) => v.parse::<usize>().map_err(|_| self.bad(key, &format!("`{v}` is not a non-negative integer"))),
        }
    }

    pub fn list(&mut self, key: &str, default: &[f64]) -> Result<Vec<f64>, ConfigError> {
        match self.entries.remove(key) {
            None => Ok(default.to_vec()),
            Some(v) => v
                .split(',')
                .map(|x| number(x).filter(|y| y.is_finite()).ok_or_else(|| self.bad(key, &format!("`{x}` is not a number"))))
                .collect(),
        }
    }

    pub fn seed(&mut self) -> Result<Option<u64>, ConfigError> {
        match self.entries.remove("seed") {
            None => Ok(None),
            Some(v) => v.parse::<u64>().map(Some).map_err(|_| self.bad("seed", &format!("`{v}` is not an unsigned integer"))),
        }
    }

    pub fn string(&mut self, key: &str) -> Option<String> {
        self.entries.remove(key)
    }

    /// Fails on any key nobody asked for.
    pub fn finish(self) -> Result<(), ConfigError> {
        match self.entries.keys().next() {
            None => Ok(()),
            Some(k) => Err(ConfigError(format!("[{}] unknown key `{k}`", self.section))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections_and_comments() {
        let cfg = Config::parse("# top\n[general]\nseed = 7 ; inline\n\n[planar]\nxi1 = pi/4\nxi2=2.5\n").unwrap();
        let mut p = cfg.section("planar");
        assert!((p.f64("xi1", 0.0).unwrap() - PI / 4.0).abs() < 1e-15);
        assert_eq!(p.f64("xi2", 0.0).unwrap(), 2.5);
        assert_eq!(p.f64("missing", 1.5).unwrap(), 1.5);
        p.finish().unwrap();
        assert_eq!(cfg.section("general").seed().unwrap(), Some(7));
    }

    #[test]
    fn rejects_malformed_input() {
        for text in ["[nope]\n", "[planar\n", "x = 1\n", "[planar]\nxi1\n", "[planar]\na=1\na=2\n", "[planar]\n[planar]\n"] {
            assert!(Config::parse(text).is_err(), "{text:?}");
        }
        let cfg = Config::parse("[planar]\nxi1 = abc\ntol = -1\ntypo = 3\n").unwrap();
        let mut p = cfg.section("planar");
        assert!(p.f64("xi1", 0.0).is_err());
        assert!(p.positive("tol", 1.0).is_err());
        assert!(p.finish().is_err());
    }

    #[test]
    fn numbers_with_pi() {
        assert_eq!(number("pi"), Some(PI));
        assert_eq!(number("0.5*pi"), Some(0.5 * PI));
        assert_eq!(number("pi*2"), Some(2.0 * PI));
        assert_eq!(number("pi/0"), Some(f64::INFINITY));
        assert_eq!(number("x"), None);
    }
}
