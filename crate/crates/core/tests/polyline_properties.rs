mod common;

use common::*;
use rand::Rng;
use twistfold::braid::ltm_lower_bound;
use twistfold::entropy::{
    default_seed_line, run_growth_experiment, run_growth_experiment_with, GrowthOptions,
};
use twistfold::polyline::{advect, length, refine_at_boundaries};
use twistfold::{LtmParams, Polyline, Vec2};

/// Random segment of length `len` lying in the domain.
fn random_segment(p: &LtmParams, len: f64, rng: &mut impl Rng) -> Polyline {
    loop {
        let z = random_in_domain(p, rng);
        let theta: f64 = rng.gen::<f64>() * std::f64::consts::TAU;
        let a = Vec2::new(z.x(), z.y());
        let b = a + Vec2::new(theta.cos(), theta.sin()).scale(len);
        let line = Polyline::segment(a, b).unwrap();
        if refine_at_boundaries(p, &line).is_ok() {
            return line;
        }
    }
}

fn subdivide(line: &Polyline) -> Polyline {
    let verts = line.cover_vertices();
    let mut out = Vec::with_capacity(2 * verts.len());
    for w in verts.windows(2) {
        out.push(w[0]);
        out.push(w[0] + (w[1] - w[0]).scale(0.5));
    }
    out.push(*verts.last().unwrap());
    Polyline::open(&out).unwrap()
}

#[test]
fn extra_vertices_do_not_change_lengths() {
    let mut r = rng(11);
    for p in hyperbolic_sets() {
        for _ in 0..5 {
            let seed = refine_at_boundaries(&p, &random_segment(&p, 0.2, &mut r)).unwrap();
            let mut a = seed.clone();
            let mut b = subdivide(&seed);
            for _ in 0..4 {
                a = advect(&p, &a).unwrap();
                b = advect(&p, &b).unwrap();
                if a.vertex_count() > 200_000 {
                    break;
                }
                let (la, lb) = (length(&a), length(&b));
                assert!(
                    (la - lb).abs() <= 1e-10 * la.max(1.0),
                    "{p:?}: {la} vs {lb}"
                );
            }
        }
    }
}

#[test]
fn lengths_grow_after_burn_in() {
    let mut r = rng(12);
    for p in hyperbolic_sets() {
        for _ in 0..5 {
            let seed = random_segment(&p, 0.1, &mut r);
            let mut line = seed;
            let mut lengths = vec![length(&line)];
            for _ in 0..7 {
                line = advect(&p, &line).unwrap();
                lengths.push(length(&line));
                if line.vertex_count() > 200_000 {
                    break;
                }
            }
            for n in 3..lengths.len() - 1 {
                assert!(lengths[n + 1] > lengths[n], "{p:?} n={n}: {lengths:?}");
            }
        }
    }
}

#[test]
fn growth_rate_respects_lower_bound() {
    for (p, n_iter) in [
        (params(0.5, 0.5, 1, 1), 12),
        (params(0.5, 0.5, 1, -5), 8),
        (params(0.5, 0.5, 2, 1), 10),
        (params(0.7, 0.6, -2, 3), 8),
        (params(0.3, 0.8, 1, 1), 10),
    ] {
        let opts = GrowthOptions::default();
        let g = run_growth_experiment_with(&p, &default_seed_line(), n_iter, &opts, |_, _| Ok(()))
            .unwrap();
        let bound = ltm_lower_bound(&p).unwrap();
        assert!(
            g.h_flow >= bound - 0.02,
            "{p:?}: h_flow {} < {bound}",
            g.h_flow
        );
    }
}

#[test]
fn cat_map_rate_is_exact() {
    let p = LtmParams::cat_map();
    let g = run_growth_experiment(&p, &default_seed_line(), 10).unwrap();
    let expect = ((3.0 + 5f64.sqrt()) / 2.0).ln();
    assert!((g.h_flow - expect).abs() <= 0.01 * expect);
}
