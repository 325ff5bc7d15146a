//! Unstable-manifold slopes of the twist map.
//!
//! Following a point backwards emits a word in the inverse shears,
//! `H^-n1 V^-m1 H^-n2 V^-m2 ...`. Pushing a tangent vector forward along that
//! orbit turns the run lengths into the continued fraction
//!
//! ```text
//! S_u = 1 / (lambda n1 + 1 / (kappa m1 + 1 / (lambda n2 + 1 / (kappa m2 + ...))))
//! ```
//!
//! whose limit is the slope of the unstable direction. For counter-rotating
//! maps every partial quotient is positive; for co-rotating maps with
//! `kappa * lambda < -4` the equivalent fraction with unit denominators has
//! every numerator after the first below 1/4 in magnitude, so both converge.

use crate::error::{Error, Result};
use crate::linalg::Vec2;
use crate::ltm::{LtmParams, Rotation, TorusPoint, EPS_SING};

/// Successive convergents closer than this (relative to `max(1, |s|)`) count as converged.
pub const TOL_CF: f64 = 1e-12;
pub const DEPTH_MAX: usize = 200;

/// Generic start vector for the push-forward construction.
pub const ORACLE_START: Vec2 = Vec2::new(1.0, 0.37);

/// Run lengths of the backward itinerary: `n1` inverse horizontal shears,
/// then alternating `(m_i, n_{i+1})` runs, then possibly an unfinished
/// vertical run.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BackwardCode {
    /// Zero exactly when the base point lies outside the horizontal strip.
    pub n1: u32,
    pub pairs: Vec<(u32, u32)>,
    pub tail: Option<u32>,
}

impl BackwardCode {
    pub fn push_h(&mut self) {
        if let Some(m) = self.tail.take() {
            self.pairs.push((m, 1));
        } else if let Some(last) = self.pairs.last_mut() {
            last.1 += 1;
        } else {
            self.n1 += 1;
        }
    }

    pub fn push_v(&mut self) {
        match self.tail.as_mut() {
            Some(m) => *m += 1,
            None => self.tail = Some(1),
        }
    }

    pub fn letter_count(&self) -> u32 {
        self.n1 + self.pairs.iter().map(|(m, n)| m + n).sum::<u32>() + self.tail.unwrap_or(0)
    }

    /// Partial quotients `lambda n1, kappa m1, lambda n2, ...`.
    pub fn partial_quotients(&self, params: &LtmParams) -> Vec<f64> {
        let (kappa, lambda) = (params.kappa(), params.lambda());
        let mut q = Vec::with_capacity(2 * self.pairs.len() + 2);
        q.push(lambda * self.n1 as f64);
        for &(m, n) in &self.pairs {
            q.push(kappa * m as f64);
            q.push(lambda * n as f64);
        }
        if let Some(m) = self.tail {
            q.push(kappa * m as f64);
        }
        q
    }
}

/// `q0 + 1/(q1 + 1/(... + 1/q_last))`, evaluated from the innermost term.
fn backward_recurrence(q: &[f64]) -> Result<f64> {
    let (&last, rest) = q.split_last().ok_or(Error::EmptyCode)?;
    let mut t = last;
    for &a in rest.iter().rev() {
        if t == 0.0 {
            return Err(Error::ZeroDenominator);
        }
        t = a + 1.0 / t;
    }
    Ok(t)
}

/// Finite convergent of the slope fraction for a truncated code.
pub fn slope_continued_fraction(params: &LtmParams, code: &BackwardCode) -> Result<f64> {
    let q = code.partial_quotients(params);
    if code.n1 == 0 {
        // starts with a vertical run: kappa m1 + 1/(lambda n2 + ...)
        backward_recurrence(&q[1..])
    } else {
        let t = backward_recurrence(&q)?;
        if t == 0.0 {
            return Err(Error::ZeroDenominator);
        }
        Ok(1.0 / t)
    }
}

/// `c1 / (1 + c2 / (1 + ... c_p))` with `c1 = 1/q1`, `c_i = 1/(q_{i-1} q_i)`.
fn unit_denominator_form(q: &[f64]) -> Result<(f64, Vec<f64>)> {
    if q.is_empty() {
        return Err(Error::EmptyCode);
    }
    if q.contains(&0.0) {
        return Err(Error::ZeroDenominator);
    }
    let numerators: Vec<f64> = q
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            if i == 0 {
                1.0 / a
            } else {
                1.0 / (q[i - 1] * a)
            }
        })
        .collect();
    let mut t = 1.0;
    for &c in numerators[1..].iter().rev() {
        if t == 0.0 {
            return Err(Error::ZeroDenominator);
        }
        t = 1.0 + c / t;
    }
    if t == 0.0 {
        return Err(Error::ZeroDenominator);
    }
    Ok((numerators[0] / t, numerators))
}

/// The same convergent evaluated through the equivalent fraction with unit
/// denominators. Returns the value and the numerators after the first,
/// which are the quantities bounded by 1/4 when `kappa * lambda < -4`.
pub fn slope_unit_denominator_form(
    params: &LtmParams,
    code: &BackwardCode,
) -> Result<(f64, Vec<f64>)> {
    let q = code.partial_quotients(params);
    if code.n1 == 0 {
        let (&head, rest) = q[1..].split_first().ok_or(Error::EmptyCode)?;
        if rest.is_empty() {
            return Ok((head, Vec::new()));
        }
        let (value, numerators) = unit_denominator_form(rest)?;
        Ok((head + value, numerators[1..].to_vec()))
    } else {
        let (value, numerators) = unit_denominator_form(&q)?;
        Ok((value, numerators[1..].to_vec()))
    }
}

fn check_regular(params: &LtmParams, z: TorusPoint, step: usize) -> Result<()> {
    if params.boundary_distance(z) < EPS_SING {
        Err(Error::SingularOrbit { step })
    } else {
        Ok(())
    }
}

/// Follow `z` back `depth` steps and record the inverse-shear letters.
pub fn backward_code(params: &LtmParams, z: TorusPoint, depth: usize) -> Result<BackwardCode> {
    if depth == 0 {
        return Err(Error::InsufficientData("depth must be at least 1".into()));
    }
    let mut code = BackwardCode::default();
    let mut cur = z;
    check_regular(params, cur, 0)?;
    for step in 1..=depth {
        cur = backward_step(params, cur, &mut code)?;
        check_regular(params, cur, step)?;
    }
    Ok(code)
}

fn backward_step(params: &LtmParams, z: TorusPoint, code: &mut BackwardCode) -> Result<TorusPoint> {
    let (prev, undo_h, undo_v) = params.backward_with_letters(z)?;
    if undo_h {
        code.push_h();
    }
    if undo_v {
        code.push_v();
    }
    Ok(prev)
}

/// Slope of `ORACLE_START` pushed forward through the tangent maps along
/// the `depth`-step backward orbit of `z`.
pub fn slope_pushforward_oracle(params: &LtmParams, z: TorusPoint, depth: usize) -> Result<f64> {
    if depth == 0 {
        return Err(Error::InsufficientData("depth must be at least 1".into()));
    }
    check_regular(params, z, 0)?;
    let mut orbit = Vec::with_capacity(depth);
    let mut cur = z;
    for _ in 0..depth {
        cur = params.backward(cur)?;
        orbit.push(cur);
    }
    let mut w = ORACLE_START;
    for (i, p) in orbit.iter().enumerate().rev() {
        let jac = params.jacobian(*p).map_err(|e| match e {
            Error::OnBoundary { .. } => Error::SingularOrbit { step: i + 1 },
            other => other,
        })?;
        w = jac.apply(w);
        w = w.scale(1.0 / w.norm());
    }
    if w.x.abs() < 1e-300 {
        return Err(Error::DegenerateVector);
    }
    Ok(w.slope())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeSample {
    pub point: TorusPoint,
    pub slope: f64,
    pub depth_used: usize,
    pub converged: bool,
}

/// Unstable slope at `z`, deepening the backward code until successive
/// convergents agree to `TOL_CF` or `DEPTH_MAX` is reached.
pub fn unstable_slope(params: &LtmParams, z: TorusPoint) -> Result<SlopeSample> {
    params.require_hyperbolic()?;
    let mut code = BackwardCode::default();
    let mut cur = z;
    check_regular(params, cur, 0)?;
    let mut prev: Option<f64> = None;
    let mut last = f64::NAN;
    for depth in 1..=DEPTH_MAX {
        cur = backward_step(params, cur, &mut code)?;
        check_regular(params, cur, depth)?;
        let value = match slope_continued_fraction(params, &code) {
            Ok(v) => v,
            Err(Error::ZeroDenominator) => {
                prev = None;
                continue;
            }
            Err(e) => return Err(e),
        };
        last = value;
        if let Some(p) = prev {
            if (value - p).abs() <= TOL_CF * value.abs().max(1.0) {
                return Ok(SlopeSample {
                    point: z,
                    slope: value,
                    depth_used: depth,
                    converged: true,
                });
            }
        }
        prev = Some(value);
    }
    Ok(SlopeSample {
        point: z,
        slope: last,
        depth_used: DEPTH_MAX,
        converged: false,
    })
}

/// Slope of the expanding eigenvector of `L` and the two cones it bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeSpec {
    pub m_star: f64,
    pub kappa: f64,
}

impl ConeSpec {
    /// Slopes of the cone used on the horizontal strip, `[m_star, 0]`.
    pub fn interval_c(&self) -> (f64, f64) {
        (self.m_star, 0.0)
    }

    /// Lower end of `[m_star + kappa, inf)`, the cone off the horizontal strip.
    pub fn interval_c_tilde_start(&self) -> f64 {
        self.m_star + self.kappa
    }

    pub fn in_c(&self, slope: f64, tol: f64) -> bool {
        slope >= self.m_star - tol && slope <= tol
    }

    pub fn in_c_tilde(&self, slope: f64, tol: f64) -> bool {
        slope >= self.interval_c_tilde_start() - tol
    }
}

pub fn cone_spec(params: &LtmParams) -> Result<ConeSpec> {
    params.require_corotating_hyperbolic()?;
    let (kappa, lambda) = (params.kappa(), params.lambda());
    let p = kappa * lambda;
    let root = (p * (p + 4.0)).sqrt();
    let first = 2.0 * kappa / (p - root);
    let second = -(p + root) / (2.0 * lambda);
    if (first - second).abs() > 1e-12 * first.abs().max(1.0) {
        return Err(Error::InvalidParams(format!(
            "closed forms for the eigenvector slope disagree: {first} vs {second}"
        )));
    }
    let (_, _, l) = params.shear_matrices();
    let image = l.apply(Vec2::new(1.0, first));
    let stretch = image.x;
    if (image.y - stretch * first).abs() > 1e-9 * image.norm() || stretch.abs() <= 1.0 {
        return Err(Error::InvalidParams("eigenvector check failed".into()));
    }
    Ok(ConeSpec {
        m_star: first,
        kappa,
    })
}

/// One block of the slope fraction, `tau -> 1/(lambda n + 1/(kappa m + tau))`.
pub fn slope_block(params: &LtmParams, m: u32, n: u32, tau: f64) -> f64 {
    let (kappa, lambda) = (params.kappa(), params.lambda());
    let inner = kappa * m as f64 + tau;
    inner / (lambda * n as f64 * inner + 1.0)
}

/// Image of the boundary of `D = {w : |w - m*/2| <= -m*/2}` under one block
/// of the slope fraction, as a circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskImage {
    pub center: f64,
    pub radius: f64,
}

impl DiskImage {
    /// `|center - m*/2| + radius - (-m*/2)`; non-positive when the image
    /// disk sits inside `D`.
    pub fn containment_slack(&self, m_star: f64) -> f64 {
        (self.center - 0.5 * m_star).abs() + self.radius + 0.5 * m_star
    }
}

pub fn hillam_thron_disk_image(params: &LtmParams, m: u32, n: u32) -> Result<DiskImage> {
    let cones = cone_spec(params)?;
    if m == 0 || n == 0 {
        return Err(Error::InvalidParams(
            "run lengths must be at least 1".into(),
        ));
    }
    let (kappa, lambda) = (params.kappa(), params.lambda());
    let (mf, nf) = (m as f64, n as f64);
    let ms = cones.m_star;
    let a = 1.0 + kappa * lambda * mf * nf;
    let b = 1.0 + lambda * nf * (ms + kappa * mf);
    let center = 0.5 * (kappa * mf / a + (ms + kappa * mf) / b);
    let radius = ms / (2.0 * a * b.abs());
    Ok(DiskImage { center, radius })
}

/// Whether the shears keep `w` in its quadrant cone (first or third open
/// quadrant). Vectors in neither cone are trivially accepted.
pub fn quadrant_cone_invariant(params: &LtmParams, w: Vec2) -> Result<bool> {
    if params.rotation() != Rotation::CounterRotating || params.k() < 0 {
        return Err(Error::InvalidParams(
            "quadrant cones need k, ell > 0".into(),
        ));
    }
    let (v, h, _) = params.shear_matrices();
    let in_c1 = |u: Vec2| u.x > 0.0 && u.y > 0.0;
    let in_c3 = |u: Vec2| u.x < 0.0 && u.y < 0.0;
    let images = [v.apply(w), h.apply(w)];
    if in_c1(w) {
        Ok(images.iter().all(|&u| in_c1(u)))
    } else if in_c3(w) {
        Ok(images.iter().all(|&u| in_c3(u)))
    } else {
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn co() -> LtmParams {
        LtmParams::new(0.5, 0.5, 1, -5).unwrap()
    }

    const GOLDEN_CONJ: f64 = 0.618_033_988_749_894_9;

    #[test]
    fn code_builder_runs() {
        let mut c = BackwardCode::default();
        for l in "HHVVVHVV".chars() {
            if l == 'H' {
                c.push_h()
            } else {
                c.push_v()
            }
        }
        assert_eq!(c.n1, 2);
        assert_eq!(c.pairs, vec![(3, 1)]);
        assert_eq!(c.tail, Some(2));
        assert_eq!(c.letter_count(), 8);
    }

    #[test]
    fn cat_map_code_alternates() {
        let c = backward_code(&LtmParams::cat_map(), TorusPoint::new(0.3, 0.7), 5).unwrap();
        assert_eq!(c.n1, 1);
        assert_eq!(c.pairs, vec![(1, 1); 4]);
        assert_eq!(c.tail, Some(1));
    }

    #[test]
    fn code_off_horizontal_strip_starts_vertical() {
        // (0.25, 0.9) is above the horizontal strip of height 1/2
        let c = backward_code(&co(), TorusPoint::new(0.25, 0.9), 3).unwrap();
        assert_eq!(c.n1, 0);
    }

    #[test]
    fn boundary_point_is_singular() {
        let r = backward_code(&co(), TorusPoint::new(0.5, 0.3), 3);
        assert_eq!(r, Err(Error::SingularOrbit { step: 0 }));
    }

    #[test]
    fn two_level_fraction() {
        let code = BackwardCode {
            n1: 1,
            pairs: vec![],
            tail: Some(1),
        };
        let v = slope_continued_fraction(&LtmParams::cat_map(), &code).unwrap();
        assert_eq!(v, 0.5);
    }

    #[test]
    fn deep_cat_map_fraction_is_golden() {
        let code = BackwardCode {
            n1: 1,
            pairs: vec![(1, 1); 40],
            tail: Some(1),
        };
        let v = slope_continued_fraction(&LtmParams::cat_map(), &code).unwrap();
        assert!((v - GOLDEN_CONJ).abs() < 1e-14);
    }

    #[test]
    fn corotating_all_ones_lands_in_cone() {
        let code = BackwardCode {
            n1: 1,
            pairs: vec![(1, 1); 40],
            tail: Some(1),
        };
        let v = slope_continued_fraction(&co(), &code).unwrap();
        let cones = cone_spec(&co()).unwrap();
        assert!(cones.in_c(v, 0.0), "{v}");
        // all-ones code is the eigenvector of L itself
        assert!((v - cones.m_star).abs() < 1e-12);
    }

    #[test]
    fn empty_code_is_an_error() {
        assert_eq!(
            slope_continued_fraction(&co(), &BackwardCode::default()),
            Err(Error::EmptyCode)
        );
    }

    #[test]
    fn unit_denominator_form_matches() {
        let p = co();
        let code = BackwardCode {
            n1: 2,
            pairs: vec![(1, 3), (2, 1), (1, 1)],
            tail: Some(4),
        };
        let direct = slope_continued_fraction(&p, &code).unwrap();
        let (value, numerators) = slope_unit_denominator_form(&p, &code).unwrap();
        assert!((direct - value).abs() < 1e-15);
        assert!(numerators.iter().all(|c| c.abs() < 0.25));

        let shifted = BackwardCode { n1: 0, ..code };
        let direct = slope_continued_fraction(&p, &shifted).unwrap();
        let (value, numerators) = slope_unit_denominator_form(&p, &shifted).unwrap();
        assert!((direct - value).abs() < 1e-14);
        assert!(numerators.iter().all(|c| c.abs() < 0.25));
    }

    #[test]
    fn oracle_on_cat_map() {
        let s = slope_pushforward_oracle(&LtmParams::cat_map(), TorusPoint::new(0.31, 0.67), 30)
            .unwrap();
        assert!((s - GOLDEN_CONJ).abs() < 1e-10);
    }

    #[test]
    fn oracle_depth_one_from_rh() {
        let p = co();
        let pre = TorusPoint::new(0.7, 0.2);
        let z = p.forward(pre).unwrap();
        let s = slope_pushforward_oracle(&p, z, 1).unwrap();
        let expected = 0.37 / (1.0 + p.lambda() * 0.37);
        assert!((s - expected).abs() < 1e-14);
    }

    #[test]
    fn unstable_slope_examples() {
        let p = co();
        let cones = cone_spec(&p).unwrap();
        let s = unstable_slope(&p, TorusPoint::new(0.7123, 0.2071)).unwrap();
        assert!(s.converged);
        assert!(cones.in_c(s.slope, 1e-12), "{}", s.slope);
        let s = unstable_slope(&p, TorusPoint::new(0.2137, 0.8091)).unwrap();
        assert!(s.converged);
        assert!(s.slope >= 1.894_427 - 1e-6, "{}", s.slope);

        let ctr = LtmParams::new(0.5, 0.5, 1, 1).unwrap();
        let s = unstable_slope(&ctr, TorusPoint::new(0.3119, 0.2871)).unwrap();
        assert!(s.converged && s.slope > 0.0);

        let weak = LtmParams::new(1.0, 1.0, 1, -3).unwrap();
        assert!(matches!(
            unstable_slope(&weak, TorusPoint::new(0.3, 0.3)),
            Err(Error::NonHyperbolicParams(_))
        ));
    }

    #[test]
    fn cone_spec_example() {
        let c = cone_spec(&co()).unwrap();
        assert!((c.m_star - (-0.105_572_809)).abs() < 1e-9);
        assert!((c.interval_c_tilde_start() - 1.894_427_191).abs() < 1e-9);
        assert!(cone_spec(&LtmParams::new(0.5, 0.5, 1, 1).unwrap()).is_err());
    }

    #[test]
    fn disk_fixed_point_and_containment() {
        let p = co();
        let ms = cone_spec(&p).unwrap().m_star;
        assert!((slope_block(&p, 1, 1, ms) - ms).abs() < 1e-15);
        let d = hillam_thron_disk_image(&p, 1, 1).unwrap();
        assert!(d.containment_slack(ms) <= 1e-12);
        assert!(hillam_thron_disk_image(&p, 0, 1).is_err());
    }

    #[test]
    fn quadrant_cones() {
        let p = LtmParams::new(0.5, 0.5, 1, 1).unwrap();
        assert_eq!(quadrant_cone_invariant(&p, Vec2::new(1.0, 1.0)), Ok(true));
        assert_eq!(quadrant_cone_invariant(&p, Vec2::new(-1.0, -1.0)), Ok(true));
        assert_eq!(quadrant_cone_invariant(&p, Vec2::new(1.0, -1.0)), Ok(true));
        assert!(quadrant_cone_invariant(&co(), Vec2::new(1.0, 1.0)).is_err());
    }
}
