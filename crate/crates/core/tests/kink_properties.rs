mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use twistfold::entropy::default_seed_line;
use twistfold::kinks::{
    kink_arm_images, kink_census, kink_census_with, kink_zone_interval, predict_then_confirm,
    random_positive_seed, CensusOptions,
};
use twistfold::polyline::refine_at_boundaries;
use twistfold::{Polyline, Vec2};

const GRID: [f64; 3] = [0.3, 0.5, 0.8];

proptest! {
    #[test]
    fn zone_slopes_fold_into_the_fourth_quadrant(
        ai in 0usize..3, bi in 0usize..3, ell in prop::sample::select(vec![-5i64, -7, -9]),
        frac in 0.0f64..1.0,
    ) {
        let p = params(GRID[ai], GRID[bi], 1, ell);
        let (lo, hi) = kink_zone_interval(&p);
        // slope in (lo, hi]
        let s = hi - frac * (hi - lo);
        prop_assume!(s > lo);
        let (u, v) = kink_arm_images(&p, s);
        prop_assert!(u.x > 0.0 && u.y < 0.0, "{:?}", u);
        prop_assert!(v.x > 0.0 && v.y <= 0.0, "{:?}", v);
        prop_assert!(u.dot(v) > 0.0);
    }
}

/// A short segment crossing the seam at `x = x0` through height `y`.
fn crossing(x0: f64, y: f64, slope: f64, half: f64) -> Polyline {
    let a = Vec2::new(x0 - half, y - half * slope);
    let b = Vec2::new(x0 + half, y + half * slope);
    Polyline::segment(a, b).unwrap()
}

#[test]
fn predictions_are_confirmed() {
    let mut r = rng(31);
    let mut predicted = 0;
    while predicted < 200 {
        let p = params(
            GRID[r.gen_range(0..3)],
            GRID[r.gen_range(0..3)],
            1,
            [-5, -7][r.gen_range(0..2)],
        );
        let (lo, _) = kink_zone_interval(&p);
        let s = lo * r.gen::<f64>();
        let x0 = if r.gen() { p.alpha() } else { 1.0 };
        let y = p.beta() * r.gen_range(0.05..0.95);
        let line = crossing(x0, y, s, 1e-3);
        let Ok(line) = refine_at_boundaries(&p, &line) else {
            continue;
        };
        for q in predict_then_confirm(&p, &line).unwrap() {
            assert!(q.confirmed, "{p:?} slope {s}: {q:?}");
            predicted += 1;
        }
    }
}

#[test]
fn positive_slopes_never_kink() {
    let mut r = rng(32);
    let opts = CensusOptions {
        window: Some(5_000),
        ..Default::default()
    };
    for _ in 0..12 {
        let p = params(
            GRID[r.gen_range(0..3)],
            GRID[r.gen_range(0..3)],
            r.gen_range(1..=3),
            r.gen_range(1..=3),
        );
        let seed = random_positive_seed(&p, &mut r);
        let census = kink_census_with(&p, &seed, 6, &opts, |_, _, _| Ok(())).unwrap();
        assert!(census.iter().all(|&(_, n)| n == 0), "{p:?} {census:?}");
    }
}

#[test]
fn co_rotating_lines_kink_quickly() {
    for ell in [-5, -7] {
        for a in GRID {
            for b in GRID {
                let p = params(a, b, 1, ell);
                let census = kink_census(&p, &default_seed_line(), 3).unwrap();
                assert!(census.iter().any(|&(_, n)| n > 0), "{p:?} {census:?}");
            }
        }
    }
}
