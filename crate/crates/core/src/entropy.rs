//! Topological entropy from material-line growth.

use crate::error::{Error, Result};
use crate::linalg::Vec2;
use crate::ltm::LtmParams;
use crate::polyline::{advect_with_budget, length, Polyline, DEFAULT_VERTEX_BUDGET};

/// Default seed: a horizontal segment inside the horizontal strip.
pub const DEFAULT_SEED: [f64; 4] = [0.05, 0.25, 0.45, 0.25];

pub const DEFAULT_BURN_IN: usize = 2;

pub fn default_seed_line() -> Polyline {
    let [x0, y0, x1, y1] = DEFAULT_SEED;
    Polyline::segment(Vec2::new(x0, y0), Vec2::new(x1, y1)).expect("distinct endpoints")
}

/// Line lengths per iteration and the fitted growth rate.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthSeries {
    /// Length after iterations `0..=n`.
    pub lengths: Vec<f64>,
    /// Vertex count after iterations `0..=n`; empty when fitted from bare lengths.
    pub vertex_counts: Vec<usize>,
    /// Least-squares slope of `ln(length)` against iteration.
    pub h_flow: f64,
    /// Number of points in the fit.
    pub fit_window: usize,
    /// Standard error of the fitted slope.
    pub fit_stderr: f64,
}

/// Fit `ln(length)` against the iteration index over the final `window`
/// points after `burn_in`; `None` uses every point after the burn-in.
pub fn estimate_entropy(
    series: &[f64],
    burn_in: usize,
    window: Option<usize>,
) -> Result<GrowthSeries> {
    if series.len() <= burn_in + 2 {
        return Err(Error::InsufficientData(format!(
            "{} lengths with burn-in {burn_in}; need more than {}",
            series.len(),
            burn_in + 2
        )));
    }
    if let Some((index, &value)) = series.iter().enumerate().find(|(_, &v)| v.is_nan() || v <= 0.0) {
        return Err(Error::NonPositiveLength { index, value });
    }
    let available = series.len() - burn_in;
    let n = window.map_or(available, |w| w.min(available));
    if n < 3 {
        return Err(Error::InsufficientData(format!("fit window of {n} points")));
    }
    let first = series.len() - n;
    let xs: Vec<f64> = (first..series.len()).map(|i| i as f64).collect();
    let ys: Vec<f64> = series[first..].iter().map(|l| l.ln()).collect();
    let nf = n as f64;
    let x_mean = xs.iter().sum::<f64>() / nf;
    let y_mean = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - x_mean).powi(2)).sum();
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - x_mean) * (y - y_mean))
        .sum();
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    let ssr: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let stderr = (ssr / (nf - 2.0) / sxx).sqrt();
    Ok(GrowthSeries {
        lengths: series.to_vec(),
        vertex_counts: Vec::new(),
        h_flow: slope,
        fit_window: n,
        fit_stderr: stderr,
    })
}

/// Repeated advection of a material line.
pub struct Evolution {
    params: LtmParams,
    line: Polyline,
    iteration: usize,
    vertex_budget: usize,
}

impl Evolution {
    pub fn new(params: LtmParams, seed: Polyline) -> Result<Self> {
        seed.check_domain(&params)?;
        Ok(Self {
            params,
            line: seed,
            iteration: 0,
            vertex_budget: DEFAULT_VERTEX_BUDGET,
        })
    }

    pub fn with_vertex_budget(mut self, budget: usize) -> Self {
        self.vertex_budget = budget;
        self
    }

    pub fn params(&self) -> &LtmParams {
        &self.params
    }

    pub fn line(&self) -> &Polyline {
        &self.line
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn step(&mut self) -> Result<&Polyline> {
        self.line = advect_with_budget(&self.params, &self.line, self.vertex_budget)?;
        self.iteration += 1;
        Ok(&self.line)
    }

    /// Replace the tracked line by a contiguous piece of it.
    pub fn restrict(&mut self, start: usize, count: usize) -> Result<()> {
        self.line = self.line.window(start, count)?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthOptions {
    pub burn_in: usize,
    pub window: Option<usize>,
    pub vertex_budget: usize,
}

impl Default for GrowthOptions {
    fn default() -> Self {
        Self {
            burn_in: DEFAULT_BURN_IN,
            window: None,
            vertex_budget: DEFAULT_VERTEX_BUDGET,
        }
    }
}

pub fn run_growth_experiment(
    params: &LtmParams,
    seed: &Polyline,
    n_iter: usize,
) -> Result<GrowthSeries> {
    run_growth_experiment_with(params, seed, n_iter, &GrowthOptions::default(), |_, _| {
        Ok(())
    })
}

/// Advect `n_iter` times, recording lengths; `observe` sees every line,
/// including the seed at iteration 0.
pub fn run_growth_experiment_with(
    params: &LtmParams,
    seed: &Polyline,
    n_iter: usize,
    opts: &GrowthOptions,
    mut observe: impl FnMut(usize, &Polyline) -> Result<()>,
) -> Result<GrowthSeries> {
    if n_iter < 3 {
        return Err(Error::InsufficientData(format!(
            "n_iter = {n_iter}; need at least 3"
        )));
    }
    let mut evo = Evolution::new(*params, seed.clone())?.with_vertex_budget(opts.vertex_budget);
    let mut lengths = vec![length(evo.line())];
    let mut counts = vec![evo.line().vertex_count()];
    observe(0, evo.line())?;
    for i in 1..=n_iter {
        let line = evo.step()?;
        lengths.push(length(line));
        counts.push(line.vertex_count());
        observe(i, line)?;
    }
    let burn_in = opts.burn_in.min(n_iter - 2);
    let mut series = estimate_entropy(&lengths, burn_in, opts.window)?;
    series.vertex_counts = counts;
    Ok(series)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::ltm_lower_bound;

    #[test]
    fn exact_exponential_fit() {
        let series: Vec<f64> = (0..=10).map(|n| 2.0 * (0.962 * n as f64).exp()).collect();
        let g = estimate_entropy(&series, 2, None).unwrap();
        assert!((g.h_flow - 0.962).abs() < 1e-12);
        assert_eq!(g.fit_window, 9);
        assert!(g.fit_stderr < 1e-12);
    }

    #[test]
    fn constant_series_has_zero_rate() {
        let g = estimate_entropy(&[3.0; 8], 2, None).unwrap();
        assert_eq!(g.h_flow, 0.0);
    }

    #[test]
    fn window_limits_fit() {
        let mut series: Vec<f64> = (0..=10).map(|n| (n as f64).exp()).collect();
        series[3] = 1e6; // outside the last 4 points
        let g = estimate_entropy(&series, 2, Some(4)).unwrap();
        assert!((g.h_flow - 1.0).abs() < 1e-12);
        assert_eq!(g.fit_window, 4);
    }

    #[test]
    fn error_paths() {
        assert!(matches!(
            estimate_entropy(&[1.0, 2.0, 3.0], 1, None),
            Err(Error::InsufficientData(_))
        ));
        assert!(matches!(
            estimate_entropy(&[1.0, 2.0, 0.0, 4.0, 5.0], 1, None),
            Err(Error::NonPositiveLength { index: 2, .. })
        ));
        let p = LtmParams::cat_map();
        assert!(matches!(
            run_growth_experiment(&p, &default_seed_line(), 0),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn cat_map_rate_is_the_eigenvalue() {
        let p = LtmParams::cat_map();
        let g = run_growth_experiment(&p, &default_seed_line(), 10).unwrap();
        let bound = ltm_lower_bound(&p).unwrap();
        assert!((g.h_flow - bound).abs() / bound < 0.01, "{}", g.h_flow);
        assert!(g.vertex_counts.iter().all(|&n| n == 2));
    }

    #[test]
    fn deterministic() {
        let p = LtmParams::new(0.5, 0.5, 1, -5).unwrap();
        let a = run_growth_experiment(&p, &default_seed_line(), 4).unwrap();
        let b = run_growth_experiment(&p, &default_seed_line(), 4).unwrap();
        assert_eq!(a, b);
    }
}
