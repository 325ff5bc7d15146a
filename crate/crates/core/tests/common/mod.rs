#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twistfold::{LtmParams, Region, TorusPoint};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn params(alpha: f64, beta: f64, k: i64, ell: i64) -> LtmParams {
    LtmParams::new(alpha, beta, k, ell).unwrap()
}

/// A spread of hyperbolic parameter sets of both rotation types.
pub fn hyperbolic_sets() -> Vec<LtmParams> {
    vec![
        params(0.5, 0.5, 1, 1),
        params(0.5, 0.5, 1, -5),
        params(0.3, 0.8, 2, 3),
        params(0.8, 0.3, 1, -7),
        params(0.3, 0.3, 3, 1),
        params(0.7, 0.6, -2, 3),
        params(1.0, 1.0, 1, 1),
    ]
}

pub fn random_in_domain(p: &LtmParams, rng: &mut impl Rng) -> TorusPoint {
    loop {
        let z = TorusPoint::new(rng.gen::<f64>(), rng.gen::<f64>());
        if p.classify_region(z) != Region::Outside {
            return z;
        }
    }
}

/// In-domain point at least `margin` from every region boundary.
pub fn random_regular(p: &LtmParams, margin: f64, rng: &mut impl Rng) -> TorusPoint {
    loop {
        let z = random_in_domain(p, rng);
        if p.boundary_distance(z) >= margin {
            return z;
        }
    }
}
