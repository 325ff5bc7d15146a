use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use twistfold::braid::{burau_matrix, h_rods, ltm_lower_bound, BraidWord};
use twistfold::config::ExperimentConfig;
use twistfold::entropy::{run_growth_experiment_with, GrowthOptions};
use twistfold::kinks::{
    bends_or_none, kink_census_with, random_positive_seed, BendClass, CensusOptions,
};
use twistfold::manifold::unstable_slope;
use twistfold::{Error, LtmParams, Polyline, Region, TorusPoint, Vec2};

use super::output::{self, sig6, SlopeRow};
use super::{usage, Failure};

pub fn entropy_bound(text: &str) -> Result<(), Failure> {
    let word: BraidWord = text.parse()?;
    let m = burau_matrix(&word)?;
    let bound = h_rods(&word)?;
    let rho = m.to_mat2().spectral_radius();
    println!("word:            {word}");
    println!("burau matrix:    {m}");
    println!("trace, det:      {}, {}", m.trace(), m.det());
    println!("spectral radius: {}", sig6(rho));
    println!("h_rods:          {}", sig6(bound.h_rods));
    println!("class:           {}", bound.classification);
    Ok(())
}

fn hyperbolic_params(c: &ExperimentConfig) -> Result<LtmParams, Failure> {
    let p = c.params()?;
    if !p.is_hyperbolic() {
        return Err(Error::NonHyperbolicParams(format!(
            "k={}, ell={} give a map without uniform stretching",
            p.k(),
            p.ell()
        ))
        .into());
    }
    Ok(p)
}

fn seed_line(c: &ExperimentConfig) -> Result<Polyline, Failure> {
    let [x0, y0, x1, y1] = c.seed;
    Ok(Polyline::segment(Vec2::new(x0, y0), Vec2::new(x1, y1))?)
}

pub fn ltm_run(c: &ExperimentConfig) -> Result<(), Failure> {
    let p = hyperbolic_params(c)?;
    let seed = seed_line(c)?;
    // The cat-map bound can be vacuous even when the twist map is hyperbolic.
    let bound = match ltm_lower_bound(&p) {
        Ok(b) => Some(b),
        Err(Error::NonHyperbolicBound) => None,
        Err(e) => return Err(e.into()),
    };
    let dir = &c.out_dir;
    std::fs::create_dir_all(dir.join("snapshots"))?;

    let mut kinks_out = output::create(&dir.join("kinks.csv"))?;
    output::kinks_header(&mut kinks_out)?;
    let mut last_drawn: Option<(usize, Polyline)> = None;
    let mut total_kinks = 0usize;
    let mut io_err: Option<std::io::Error> = None;
    let opts = GrowthOptions {
        burn_in: c.burn_in,
        window: None,
        vertex_budget: c.vertex_budget,
    };
    let series = run_growth_experiment_with(&p, &seed, c.n_iter, &opts, |i, line| {
        let bends = bends_or_none(line)?;
        total_kinks += bends.iter().filter(|b| b.class == BendClass::Kink).count();
        let mut write = || -> std::io::Result<()> {
            output::write_kink_rows(&mut kinks_out, i, &bends)?;
            if line.vertex_count() <= c.snapshot_limit {
                let path = dir.join("snapshots").join(format!("iter_{i:03}.csv"));
                output::write_snapshot(&path, &p, i, line)?;
            }
            Ok(())
        };
        if let Err(e) = write() {
            io_err.get_or_insert(e);
        }
        if line.vertex_count() <= c.snapshot_limit {
            last_drawn = Some((i, line.clone()));
        }
        Ok(())
    })?;
    if let Some(e) = io_err {
        return Err(e.into());
    }
    kinks_out.flush()?;
    output::write_growth(&dir.join("growth.csv"), &series.lengths)?;
    if let Some((_, line)) = &last_drawn {
        output::write_svg(&dir.join("snapshot_final.svg"), &p, line)?;
    }

    println!(
        "params:        alpha={} beta={} k={} ell={} ({})",
        sig6(p.alpha()),
        sig6(p.beta()),
        p.k(),
        p.ell(),
        match p.rotation() {
            twistfold::Rotation::CounterRotating => "counter-rotating",
            twistfold::Rotation::CoRotating => "co-rotating",
        }
    );
    println!("iterations:    {}", c.n_iter);
    println!(
        "final length:  {}",
        sig6(*series.lengths.last().expect("non-empty"))
    );
    println!(
        "vertices:      {}",
        series.vertex_counts.last().expect("non-empty")
    );
    println!(
        "h_flow:        {} (fit over {} points, stderr {})",
        sig6(series.h_flow),
        series.fit_window,
        sig6(series.fit_stderr)
    );
    match bound {
        Some(b) => {
            println!("h_lower_bound: {}", sig6(b));
            println!(
                "gap:           {}%",
                sig6(100.0 * (series.h_flow - b) / series.h_flow)
            );
            println!("bound/h_flow:  {}%", sig6(100.0 * b / series.h_flow));
        }
        None => println!("h_lower_bound: none (cat matrix has spectral radius 1)"),
    }
    println!("kinks:         {total_kinks}");
    match last_drawn {
        Some((i, _)) => println!("svg:           iteration {i}"),
        None => println!("svg:           skipped (every iterate above snapshot limit)"),
    }
    Ok(())
}

pub fn slope_field(c: &ExperimentConfig) -> Result<(), Failure> {
    if c.grid < 2 {
        return Err(usage(format!("--grid must be at least 2, got {}", c.grid)));
    }
    let p = hyperbolic_params(c)?;
    let n = c.grid;
    let rows: Vec<Vec<SlopeRow>> = (0..n)
        .into_par_iter()
        .map(|j| {
            let y = (j as f64 + 0.5) / n as f64;
            let mut row = Vec::new();
            for i in 0..n {
                let x = (i as f64 + 0.5) / n as f64;
                let z = TorusPoint::new(x, y);
                if p.classify_region(z) == Region::Outside {
                    continue;
                }
                match unstable_slope(&p, z) {
                    Ok(s) => row.push(SlopeRow::Sample(s)),
                    Err(Error::SingularOrbit { step }) => {
                        row.push(SlopeRow::Singular { x, y, step })
                    }
                    Err(e) => return Err(e),
                }
            }
            Ok(row)
        })
        .collect::<Result<_, Error>>()?;
    let rows: Vec<SlopeRow> = rows.into_iter().flatten().collect();
    output::write_slope_field(&c.out_dir.join("slope_field.csv"), &p, &rows)?;

    let samples: Vec<_> = rows
        .iter()
        .filter_map(|r| match r {
            SlopeRow::Sample(s) => Some(s),
            SlopeRow::Singular { .. } => None,
        })
        .collect();
    let converged = samples.iter().filter(|s| s.converged).count();
    let (lo, hi) = samples
        .iter()
        .filter(|s| s.converged)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| {
            (lo.min(s.slope), hi.max(s.slope))
        });
    println!("points:        {}", rows.len());
    println!("converged:     {converged}");
    println!("unconverged:   {}", samples.len() - converged);
    println!("singular:      {}", rows.len() - samples.len());
    if converged > 0 {
        println!("slope range:   [{}, {}]", sig6(lo), sig6(hi));
    }
    Ok(())
}

pub fn kinks(c: &ExperimentConfig) -> Result<(), Failure> {
    let p = hyperbolic_params(c)?;
    let mut seeds = vec![seed_line(c)?];
    let mut rng = ChaCha8Rng::seed_from_u64(c.rng_seed);
    seeds.extend((0..c.random_seeds).map(|_| random_positive_seed(&p, &mut rng)));
    let opts = CensusOptions {
        vertex_budget: c.vertex_budget,
        window: c.census_window,
    };
    let dir = &c.out_dir;
    let mut census_out = output::create(&dir.join("kink_census.csv"))?;
    writeln!(census_out, "{}", output::params_comment(&p))?;
    writeln!(census_out, "seed,iter,kinks,vertices")?;
    let mut kinks_out = output::create(&dir.join("kinks.csv"))?;
    output::kinks_header(&mut kinks_out)?;

    let mut with_kinks = 0usize;
    for (s, seed) in seeds.iter().enumerate() {
        let mut rows = Vec::new();
        let mut io_err = None;
        let census = kink_census_with(&p, seed, c.n_iter, &opts, |i, line, bends| {
            rows.push(line.vertex_count());
            if s == 0 {
                if let Err(e) = output::write_kink_rows(&mut kinks_out, i, bends) {
                    io_err.get_or_insert(e);
                }
            }
            Ok(())
        })?;
        if let Some(e) = io_err {
            return Err(e.into());
        }
        for ((i, k), v) in census.iter().zip(&rows) {
            writeln!(census_out, "{s},{i},{k},{v}")?;
        }
        let total: usize = census.iter().map(|(_, k)| k).sum();
        let first = census.iter().find(|(_, k)| *k > 0).map(|(i, _)| *i);
        if total > 0 {
            with_kinks += 1;
        }
        let ends = seed.cover_vertices();
        let (a, b) = (ends[0], ends[ends.len() - 1]);
        let first = first.map_or(String::new(), |i| format!(", first at iteration {i}"));
        println!(
            "seed {s} ({},{})-({},{}): {total} kinks{first}",
            sig6(a.x),
            sig6(a.y),
            sig6(b.x),
            sig6(b.y),
        );
    }
    census_out.flush()?;
    kinks_out.flush()?;
    println!("seeds with kinks: {with_kinks} of {}", seeds.len());
    Ok(())
}
