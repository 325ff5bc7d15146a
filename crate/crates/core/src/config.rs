//! Experiment configuration and its flat `key = value` file format.
//!
//! Blank lines and lines whose first non-blank character is `#` are
//! ignored. Every other line is `key = value`; the value runs to the end of
//! the line with surrounding whitespace trimmed. Optional values are written
//! as `none`. Floats are written in Rust's shortest round-trip form, so
//! `from_text(&c.to_text()) == c`.

use std::fmt::Write as _;
use std::path::PathBuf;

use crate::entropy::{DEFAULT_BURN_IN, DEFAULT_SEED};
use crate::error::{Error, Result};
use crate::ltm::LtmParams;
use crate::polyline::DEFAULT_VERTEX_BUDGET;

pub const DEFAULT_SNAPSHOT_LIMIT: usize = 200_000;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub alpha: f64,
    pub beta: f64,
    pub k: i64,
    pub ell: i64,
    /// Seed segment endpoints `x0, y0, x1, y1`.
    pub seed: [f64; 4],
    pub n_iter: usize,
    pub out_dir: PathBuf,
    /// Cells per side for the slope field.
    pub grid: usize,
    /// Worker threads; `None` uses every core.
    pub threads: Option<usize>,
    /// Seed for randomly drawn seed segments.
    pub rng_seed: u64,
    /// Extra random positive-slope seed segments for the kink census.
    pub random_seeds: usize,
    pub vertex_budget: usize,
    /// Snapshots with more vertices than this are not written.
    pub snapshot_limit: usize,
    pub burn_in: usize,
    /// Vertex window for the kink census; `None` follows the whole line.
    pub census_window: Option<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            alpha: 0.5,
            beta: 0.5,
            k: 1,
            ell: 1,
            seed: DEFAULT_SEED,
            n_iter: 12,
            out_dir: PathBuf::from("out"),
            grid: 64,
            threads: None,
            rng_seed: 1,
            random_seeds: 0,
            vertex_budget: DEFAULT_VERTEX_BUDGET,
            snapshot_limit: DEFAULT_SNAPSHOT_LIMIT,
            burn_in: DEFAULT_BURN_IN,
            census_window: None,
        }
    }
}

fn opt_to_text(v: Option<usize>) -> String {
    v.map_or_else(|| "none".to_string(), |n| n.to_string())
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("bad value for {key}: {value:?}")))
}

fn parse_opt(key: &str, value: &str) -> Result<Option<usize>> {
    if value == "none" {
        Ok(None)
    } else {
        parse_num(key, value).map(Some)
    }
}

/// Parse `x0,y0,x1,y1`.
pub fn parse_seed(value: &str) -> Result<[f64; 4]> {
    let parts: Vec<&str> = value.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(Error::Config(format!(
            "seed needs 4 comma-separated numbers, got {value:?}"
        )));
    }
    let mut out = [0.0; 4];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = parse_num("seed", p)?;
    }
    Ok(out)
}

impl ExperimentConfig {
    pub fn params(&self) -> Result<LtmParams> {
        LtmParams::new(self.alpha, self.beta, self.k, self.ell)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from("# twistfold experiment\n");
        let [x0, y0, x1, y1] = self.seed;
        let _ = writeln!(s, "alpha = {}", self.alpha);
        let _ = writeln!(s, "beta = {}", self.beta);
        let _ = writeln!(s, "k = {}", self.k);
        let _ = writeln!(s, "ell = {}", self.ell);
        let _ = writeln!(s, "seed = {x0},{y0},{x1},{y1}");
        let _ = writeln!(s, "n_iter = {}", self.n_iter);
        let _ = writeln!(s, "out_dir = {}", self.out_dir.display());
        let _ = writeln!(s, "grid = {}", self.grid);
        let _ = writeln!(s, "threads = {}", opt_to_text(self.threads));
        let _ = writeln!(s, "rng_seed = {}", self.rng_seed);
        let _ = writeln!(s, "random_seeds = {}", self.random_seeds);
        let _ = writeln!(s, "vertex_budget = {}", self.vertex_budget);
        let _ = writeln!(s, "snapshot_limit = {}", self.snapshot_limit);
        let _ = writeln!(s, "burn_in = {}", self.burn_in);
        let _ = writeln!(s, "census_window = {}", opt_to_text(self.census_window));
        s
    }

    /// Parse a config file; keys not present keep their defaults.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut c = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected key = value", lineno + 1))
            })?;
            c.set(key.trim(), value.trim())?;
        }
        Ok(c)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "alpha" => self.alpha = parse_num(key, value)?,
            "beta" => self.beta = parse_num(key, value)?,
            "k" => self.k = parse_num(key, value)?,
            "ell" => self.ell = parse_num(key, value)?,
            "seed" => self.seed = parse_seed(value)?,
            "n_iter" => self.n_iter = parse_num(key, value)?,
            "out_dir" => self.out_dir = PathBuf::from(value),
            "grid" => self.grid = parse_num(key, value)?,
            "threads" => self.threads = parse_opt(key, value)?,
            "rng_seed" => self.rng_seed = parse_num(key, value)?,
            "random_seeds" => self.random_seeds = parse_num(key, value)?,
            "vertex_budget" => self.vertex_budget = parse_num(key, value)?,
            "snapshot_limit" => self.snapshot_limit = parse_num(key, value)?,
            "burn_in" => self.burn_in = parse_num(key, value)?,
            "census_window" => self.census_window = parse_opt(key, value)?,
            _ => return Err(Error::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_round_trips() {
        let c = ExperimentConfig::default();
        assert_eq!(ExperimentConfig::from_text(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn partial_file_keeps_defaults() {
        let c = ExperimentConfig::from_text("# co-rotating\n\n  ell = -5\nn_iter=8\n").unwrap();
        assert_eq!(c.ell, -5);
        assert_eq!(c.n_iter, 8);
        assert_eq!(c.alpha, 0.5);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            ExperimentConfig::from_text("gamma = 1"),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            ExperimentConfig::from_text("alpha"),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            ExperimentConfig::from_text("k = 1.5"),
            Err(Error::Config(_))
        ));
        assert!(matches!(parse_seed("0.1,0.2,0.3"), Err(Error::Config(_))));
    }
}
