//! Bend classification and kink (acute fold) detection on material lines.

use rand::Rng;
use rayon::prelude::*;

use crate::entropy::Evolution;
use crate::error::{Error, Result};
use crate::linalg::Vec2;
use crate::ltm::{wrap_unit, LtmParams, Region, TorusPoint, EPS_SING};
use crate::polyline::{advect_tracked, refine_at_boundaries, Polyline, DEFAULT_VERTEX_BUDGET};

pub const TOL_BEND: f64 = 1e-10;
pub const TOL_STRAIGHT: f64 = 1e-10;
/// Edges shorter than this make a bend angle meaningless.
pub const MIN_EDGE: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BendClass {
    Straight,
    Obtuse,
    Kink,
}

impl BendClass {
    pub fn classify(turn_dot: f64) -> Self {
        if turn_dot < -TOL_BEND {
            BendClass::Kink
        } else if (1.0 - turn_dot).abs() < TOL_STRAIGHT {
            BendClass::Straight
        } else {
            BendClass::Obtuse
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BendClass::Straight => "straight",
            BendClass::Obtuse => "obtuse",
            BendClass::Kink => "kink",
        }
    }
}

impl std::fmt::Display for BendClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BendReport {
    pub vertex_index: usize,
    pub location: TorusPoint,
    /// Cosine of the angle between the incoming and outgoing edges.
    pub turn_dot: f64,
    pub class: BendClass,
}

/// Cosine between consecutive lifted edges.
pub fn turn_dot(e1: Vec2, e2: Vec2) -> f64 {
    (e1.dot(e2) / (e1.norm() * e2.norm())).clamp(-1.0, 1.0)
}

/// Edges `(incoming, outgoing)` at vertex `i`, if it has both.
fn incident_edges(line: &Polyline, i: usize) -> Option<(Vec2, Vec2)> {
    let steps = line.steps();
    let n = line.vertex_count();
    if line.is_closed() {
        Some((steps[(i + n - 1) % n], steps[i]))
    } else if i == 0 || i + 1 >= n {
        None
    } else {
        Some((steps[i - 1], steps[i]))
    }
}

/// Classify the bend at every vertex that has two incident edges.
pub fn detect_bends(line: &Polyline) -> Result<Vec<BendReport>> {
    if line.vertex_count() < 3 {
        return Err(Error::InvalidPolyline(format!(
            "bend detection needs at least 3 vertices, got {}",
            line.vertex_count()
        )));
    }
    if let Some((index, s)) = line
        .steps()
        .iter()
        .enumerate()
        .find(|(_, s)| s.norm().is_nan() || s.norm() < MIN_EDGE)
    {
        return Err(Error::DegenerateSegment {
            index,
            length: s.norm(),
        });
    }
    let (lo, hi) = if line.is_closed() {
        (0, line.vertex_count())
    } else {
        (1, line.vertex_count() - 1)
    };
    let anchors = line.anchors();
    Ok((lo..hi)
        .into_par_iter()
        .map(|i| {
            let (e1, e2) = incident_edges(line, i).expect("interior vertex");
            let td = turn_dot(e1, e2);
            BendReport {
                vertex_index: i,
                location: TorusPoint::new(anchors[i].x, anchors[i].y),
                turn_dot: td,
                class: BendClass::classify(td),
            }
        })
        .collect())
}

/// Like [`detect_bends`], but a bare segment simply has no bends.
pub fn bends_or_none(line: &Polyline) -> Result<Vec<BendReport>> {
    if line.vertex_count() < 3 {
        Ok(Vec::new())
    } else {
        detect_bends(line)
    }
}

fn near_mod1(v: f64, c: f64, tol: f64) -> bool {
    let d = wrap_unit(v - c);
    d.min(1.0 - d) < tol
}

/// Whether `z` sits on the seam between the L-region and the
/// horizontal-only region: `x = 0` or `x = alpha` with `0 <= y <= beta`.
pub fn on_rl_rh_boundary(params: &LtmParams, z: TorusPoint) -> bool {
    let on_line = near_mod1(z.x(), 0.0, EPS_SING) || near_mod1(z.x(), params.alpha(), EPS_SING);
    on_line && z.y() >= -EPS_SING && z.y() <= params.beta() + EPS_SING
}

/// Open kink-zone interval `(-kappa - 1/lambda, 0]` as `(lo, hi)`.
pub fn kink_zone_interval(params: &LtmParams) -> (f64, f64) {
    (-params.kappa() - 1.0 / params.lambda(), 0.0)
}

/// A line through a boundary point `z` with this slope folds acutely on
/// the next iterate. Stated for `k > 0`.
pub fn kink_zone_predicate(params: &LtmParams, z: TorusPoint, slope: f64) -> Result<bool> {
    params.require_corotating_hyperbolic()?;
    if params.k() < 0 {
        return Err(Error::InvalidParams(format!(
            "kink zone is stated for k > 0, got k={}",
            params.k()
        )));
    }
    let (lo, hi) = kink_zone_interval(params);
    Ok(on_rl_rh_boundary(params, z) && slope > lo && slope <= hi)
}

/// Images of the two arms leaving a seam point with slope `slope`: the
/// left arm `(-1, -slope)` under `L` and the right arm `(1, slope)` under
/// `H`. For slopes in the kink zone both point into the closed fourth
/// quadrant, so the angle between them is acute.
pub fn kink_arm_images(params: &LtmParams, slope: f64) -> (Vec2, Vec2) {
    let (_, h, l) = params.shear_matrices();
    (
        l.apply(Vec2::new(-1.0, -slope)),
        h.apply(Vec2::new(1.0, slope)),
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CensusOptions {
    pub vertex_budget: usize,
    /// Keep at most this many vertices (a contiguous middle piece) between
    /// iterations; `None` advects the whole line.
    pub window: Option<usize>,
}

impl Default for CensusOptions {
    fn default() -> Self {
        Self {
            vertex_budget: DEFAULT_VERTEX_BUDGET,
            window: None,
        }
    }
}

/// `(iteration, kink_count)` for iterations `1..=n_iter`.
pub fn kink_census(
    params: &LtmParams,
    seed: &Polyline,
    n_iter: usize,
) -> Result<Vec<(usize, usize)>> {
    kink_census_with(
        params,
        seed,
        n_iter,
        &CensusOptions::default(),
        |_, _, _| Ok(()),
    )
}

/// Census with options; `observe` receives each iterate and its bends.
/// A windowed census counts kinks only on the retained piece, so its counts
/// are lower bounds for the full line.
pub fn kink_census_with(
    params: &LtmParams,
    seed: &Polyline,
    n_iter: usize,
    opts: &CensusOptions,
    mut observe: impl FnMut(usize, &Polyline, &[BendReport]) -> Result<()>,
) -> Result<Vec<(usize, usize)>> {
    let mut evo = Evolution::new(*params, seed.clone())?.with_vertex_budget(opts.vertex_budget);
    let mut out = Vec::with_capacity(n_iter);
    for i in 1..=n_iter {
        if let Some(w) = opts.window {
            let n = evo.line().vertex_count();
            if n > w.max(2) && !evo.line().is_closed() {
                let w = w.max(2);
                evo.restrict((n - w) / 2, w)?;
            }
        }
        let line = evo.step()?;
        let bends = bends_or_none(line)?;
        let kinks = bends.iter().filter(|b| b.class == BendClass::Kink).count();
        observe(i, line, &bends)?;
        out.push((i, kinks));
    }
    Ok(out)
}

/// Random seed segment of positive slope lying in the domain: direction
/// angle in `[0.05, 1.5]` radians, length in `[0.02, 0.2]`.
pub fn random_positive_seed(params: &LtmParams, rng: &mut impl Rng) -> Polyline {
    loop {
        let a = Vec2::new(rng.gen(), rng.gen());
        if !params.in_domain(TorusPoint::new(a.x, a.y)) {
            continue;
        }
        let theta: f64 = rng.gen_range(0.05..=1.5);
        let len: f64 = rng.gen_range(0.02..=0.2);
        let b = a + Vec2::new(theta.cos(), theta.sin()).scale(len);
        let line = Polyline::segment(a, b).expect("positive length");
        if refine_at_boundaries(params, &line).is_ok() {
            return line;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    /// Boundary vertex in the input line.
    pub predicted_vertex: usize,
    /// Its image in the advected line.
    pub image_vertex: usize,
    pub image_turn_dot: f64,
    pub confirmed: bool,
}

/// Region of the open edge starting at `p` with lifted step `s`.
fn edge_region(params: &LtmParams, p: Vec2, s: Vec2) -> Region {
    let m = p + s.scale(0.5);
    params.classify_region(TorusPoint::new(m.x, m.y))
}

/// Find boundary vertices where the line crosses from the L-region to the
/// horizontal-only region (or back) with a slope in the kink zone on both
/// sides, then advect once and check that each image vertex is a kink.
/// The line should already be refined at region boundaries.
pub fn predict_then_confirm(params: &LtmParams, line: &Polyline) -> Result<Vec<Prediction>> {
    params.require_corotating_hyperbolic()?;
    let anchors = line.anchors();
    let mut predicted = Vec::new();
    for (i, &a) in anchors.iter().enumerate() {
        let Some((e1, e2)) = incident_edges(line, i) else {
            continue;
        };
        let z = TorusPoint::new(a.x, a.y);
        if !kink_zone_predicate(params, z, e1.slope())?
            || !kink_zone_predicate(params, z, e2.slope())?
        {
            continue;
        }
        let before = edge_region(params, a - e1, e1);
        let after = edge_region(params, a, e2);
        let crosses = matches!(
            (before, after),
            (Region::RL, Region::RH) | (Region::RH, Region::RL)
        );
        if crosses {
            predicted.push(i);
        }
    }
    if predicted.is_empty() {
        return Ok(Vec::new());
    }
    let tracked = advect_tracked(params, line)?;
    Ok(predicted
        .into_iter()
        .map(|i| {
            let j = tracked.vertex_map[i];
            let td = incident_edges(&tracked.line, j).map_or(f64::NAN, |(a, b)| turn_dot(a, b));
            Prediction {
                predicted_vertex: i,
                image_vertex: j,
                image_turn_dot: td,
                confirmed: BendClass::classify(td) == BendClass::Kink,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::default_seed_line;

    fn v(x: f64, y: f64) -> Vec2 {
        Vec2::new(x, y)
    }

    fn co() -> LtmParams {
        LtmParams::new(0.5, 0.5, 1, -5).unwrap()
    }

    #[test]
    fn constructed_acute_angle_is_kink() {
        let line = Polyline::open(&[v(0.0, 0.0), v(0.1, 0.0), v(0.05, 0.01)]).unwrap();
        let b = detect_bends(&line).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].vertex_index, 1);
        assert!(b[0].turn_dot < 0.0);
        assert_eq!(b[0].class, BendClass::Kink);
    }

    #[test]
    fn collinear_is_straight_and_right_angle_is_obtuse() {
        let line = Polyline::open(&[v(0.1, 0.1), v(0.2, 0.2), v(0.4, 0.4)]).unwrap();
        assert_eq!(detect_bends(&line).unwrap()[0].class, BendClass::Straight);
        let line = Polyline::open(&[v(0.1, 0.1), v(0.2, 0.1), v(0.2, 0.3)]).unwrap();
        assert_eq!(detect_bends(&line).unwrap()[0].class, BendClass::Obtuse);
    }

    #[test]
    fn closed_line_reports_every_vertex() {
        let line = Polyline::closed(&[v(0.1, 0.1), v(0.3, 0.1), v(0.3, 0.3), v(0.1, 0.3)]).unwrap();
        let b = detect_bends(&line).unwrap();
        assert_eq!(
            b.iter().map(|r| r.vertex_index).collect::<Vec<_>>(),
            vec![0, 1, 2, 3]
        );
        assert!(b.iter().all(|r| r.class == BendClass::Obtuse));
        // every corner of a triangle is acute
        let tri = Polyline::closed(&[v(0.1, 0.1), v(0.3, 0.1), v(0.2, 0.3)]).unwrap();
        assert!(detect_bends(&tri)
            .unwrap()
            .iter()
            .all(|r| r.class == BendClass::Kink));
    }

    #[test]
    fn wrap_does_not_fake_a_kink() {
        // Crosses x = 1 in the cover; reduced positions jump but edges do not.
        let line = Polyline::open(&[v(0.9, 0.2), v(1.05, 0.25), v(1.2, 0.3)]).unwrap();
        assert_eq!(detect_bends(&line).unwrap()[0].class, BendClass::Straight);
    }

    #[test]
    fn degenerate_and_short_lines() {
        let line = Polyline::open(&[v(0.1, 0.1), v(0.1 + 1e-15, 0.1), v(0.3, 0.3)]).unwrap();
        assert!(matches!(
            detect_bends(&line),
            Err(Error::DegenerateSegment { index: 0, .. })
        ));
        let seg = default_seed_line();
        assert!(matches!(detect_bends(&seg), Err(Error::InvalidPolyline(_))));
    }

    #[test]
    fn kink_zone_examples() {
        let p = co();
        assert!((p.kappa() - 2.0).abs() < 1e-15 && (p.lambda() + 10.0).abs() < 1e-15);
        let (lo, hi) = kink_zone_interval(&p);
        assert!((lo + 1.9).abs() < 1e-14 && hi == 0.0);
        let z = TorusPoint::new(0.5, 0.2);
        assert!(kink_zone_predicate(&p, z, -0.1).unwrap());
        assert!(!kink_zone_predicate(&p, z, 0.5).unwrap());
        assert!(kink_zone_predicate(&p, z, 0.0).unwrap());
        assert!(!kink_zone_predicate(&p, z, -1.9).unwrap());
        assert!(kink_zone_predicate(&p, TorusPoint::new(0.0, 0.3), -1.0).unwrap());
        assert!(!kink_zone_predicate(&p, TorusPoint::new(0.5, 0.7), -0.1).unwrap());
        let interior = TorusPoint::new(0.1, 0.1);
        assert_eq!(p.classify_region(interior), Region::RL);
        assert!(!kink_zone_predicate(&p, interior, -0.1).unwrap());
    }

    #[test]
    fn kink_zone_rejects_other_params() {
        let counter = LtmParams::new(0.5, 0.5, 1, 1).unwrap();
        let z = TorusPoint::new(0.5, 0.2);
        assert!(matches!(
            kink_zone_predicate(&counter, z, -0.1),
            Err(Error::NonHyperbolicParams(_))
        ));
        let weak = LtmParams::new(0.5, 0.5, 1, -1).unwrap();
        assert!(matches!(
            kink_zone_predicate(&weak, z, -0.1),
            Err(Error::NonHyperbolicParams(_))
        ));
    }

    #[test]
    fn census_examples() {
        let counter = LtmParams::new(0.5, 0.5, 1, 1).unwrap();
        let c = kink_census(&counter, &default_seed_line(), 10).unwrap();
        assert_eq!(c.len(), 10);
        assert!(c.iter().all(|&(_, n)| n == 0), "{c:?}");

        let c = kink_census(&co(), &default_seed_line(), 2).unwrap();
        assert!(c.iter().any(|&(_, n)| n >= 1), "{c:?}");

        let c = kink_census(&LtmParams::cat_map(), &default_seed_line(), 5).unwrap();
        assert!(c.iter().all(|&(_, n)| n == 0));
    }

    #[test]
    fn census_is_deterministic_and_window_is_a_lower_bound() {
        let p = co();
        let seed = default_seed_line();
        let full = kink_census(&p, &seed, 3).unwrap();
        assert_eq!(full, kink_census(&p, &seed, 3).unwrap());
        let opts = CensusOptions {
            window: Some(50),
            ..Default::default()
        };
        let win = kink_census_with(&p, &seed, 3, &opts, |_, _, _| Ok(())).unwrap();
        for (a, b) in full.iter().zip(&win) {
            assert!(b.1 <= a.1);
        }
    }

    #[test]
    fn default_seed_crossing_is_predicted_and_confirmed() {
        let p = LtmParams::new(0.3, 0.5, 1, -5).unwrap();
        let line = refine_at_boundaries(&p, &default_seed_line()).unwrap();
        let preds = predict_then_confirm(&p, &line).unwrap();
        assert!(!preds.is_empty());
        assert!(preds.iter().all(|q| q.confirmed), "{preds:?}");
    }

    #[test]
    fn no_crossings_no_predictions() {
        let p = co();
        let line = Polyline::segment(v(0.1, 0.1), v(0.3, 0.05)).unwrap();
        assert!(predict_then_confirm(&p, &line).unwrap().is_empty());
    }

    #[test]
    fn cone_slopes_qualify() {
        let p = co();
        let cone = crate::manifold::cone_spec(&p).unwrap();
        let (lo, _) = kink_zone_interval(&p);
        assert!(cone.m_star > lo);
        for s in [cone.m_star, cone.m_star / 2.0, 0.0] {
            let a = v(0.5 - 0.05, 0.2 - 0.05 * s);
            let b = v(0.5 + 0.05, 0.2 + 0.05 * s);
            let line = refine_at_boundaries(&p, &Polyline::segment(a, b).unwrap()).unwrap();
            let preds = predict_then_confirm(&p, &line).unwrap();
            assert_eq!(preds.len(), 1, "slope {s}");
            assert!(preds[0].confirmed);
        }
    }
}
