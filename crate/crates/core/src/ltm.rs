//! The toral linked twist map: parameters, region partition, forward and
//! backward iteration, and tangent maps.
//!
//! The map is the composition of a vertical shear supported on the strip
//! `0 <= x <= alpha` followed by a horizontal shear supported on the strip
//! `0 <= y <= beta`. Points see one of three linear maps depending on which
//! shears touch them: `V` only, `H` only, or `L = H V`.

use crate::error::{Error, Result};
use crate::linalg::{Mat2, Vec2};

/// Torus distance below which a point is treated as singular.
pub const EPS_SING: f64 = 1e-10;

/// Reduce a coordinate into `[0, 1)`; an exact `1.0` (or anything that
/// rounds to it) becomes `0.0`.
#[inline]
pub fn wrap_unit(v: f64) -> f64 {
    let r = v.rem_euclid(1.0);
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// Signed distance from `v` to the nearest integer translate of `c`.
#[inline]
fn periodic_offset(v: f64, c: f64) -> f64 {
    let d = (v - c).rem_euclid(1.0);
    if d > 0.5 {
        d - 1.0
    } else {
        d
    }
}

/// Point on the flat torus, always reduced into the unit square.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusPoint {
    x: f64,
    y: f64,
}

impl TorusPoint {
    pub fn new(x: f64, y: f64) -> Self {
        Self {
            x: wrap_unit(x),
            y: wrap_unit(y),
        }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn as_vec(&self) -> Vec2 {
        Vec2::new(self.x, self.y)
    }

    /// Euclidean distance on the torus.
    pub fn torus_distance(&self, other: &TorusPoint) -> f64 {
        periodic_offset(self.x, other.x).hypot(periodic_offset(self.y, other.y))
    }
}

impl From<Vec2> for TorusPoint {
    fn from(v: Vec2) -> Self {
        TorusPoint::new(v.x, v.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    /// Vertical shear only.
    RV,
    /// Horizontal shear only.
    RH,
    /// Both shears.
    RL,
    /// Fixed by both shears; not part of the map's domain.
    Outside,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rotation {
    /// `k * ell > 0`.
    CounterRotating,
    /// `k * ell < 0`.
    CoRotating,
}

/// Strip widths and integer shear strengths of a toral linked twist map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LtmParams {
    alpha: f64,
    beta: f64,
    k: i64,
    ell: i64,
}

impl LtmParams {
    pub fn new(alpha: f64, beta: f64, k: i64, ell: i64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::InvalidParams(format!(
                "alpha = {alpha} not in (0, 1]"
            )));
        }
        if !(beta > 0.0 && beta <= 1.0) {
            return Err(Error::InvalidParams(format!("beta = {beta} not in (0, 1]")));
        }
        if k == 0 || ell == 0 {
            return Err(Error::InvalidParams("k and ell must be nonzero".into()));
        }
        Ok(Self {
            alpha,
            beta,
            k,
            ell,
        })
    }

    /// The generalized cat map `[[2,1],[1,1]]`.
    pub fn cat_map() -> Self {
        Self {
            alpha: 1.0,
            beta: 1.0,
            k: 1,
            ell: 1,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn ell(&self) -> i64 {
        self.ell
    }

    /// Vertical shear rate `k / alpha`.
    pub fn kappa(&self) -> f64 {
        self.k as f64 / self.alpha
    }

    /// Horizontal shear rate `ell / beta`.
    pub fn lambda(&self) -> f64 {
        self.ell as f64 / self.beta
    }

    pub fn rotation(&self) -> Rotation {
        if self.k * self.ell > 0 {
            Rotation::CounterRotating
        } else {
            Rotation::CoRotating
        }
    }

    /// Counter-rotating, or co-rotating with `kappa * lambda < -4`.
    pub fn is_hyperbolic(&self) -> bool {
        match self.rotation() {
            Rotation::CounterRotating => true,
            Rotation::CoRotating => self.kappa() * self.lambda() < -4.0,
        }
    }

    pub(crate) fn require_hyperbolic(&self) -> Result<()> {
        if self.is_hyperbolic() {
            Ok(())
        } else {
            Err(Error::NonHyperbolicParams(format!(
                "kappa*lambda = {} (co-rotating maps need < -4)",
                self.kappa() * self.lambda()
            )))
        }
    }

    pub(crate) fn require_corotating_hyperbolic(&self) -> Result<()> {
        if self.rotation() == Rotation::CoRotating && self.kappa() * self.lambda() < -4.0 {
            Ok(())
        } else {
            Err(Error::NonHyperbolicParams(format!(
                "need a co-rotating map with kappa*lambda < -4, got k={}, ell={}, kappa*lambda={}",
                self.k,
                self.ell,
                self.kappa() * self.lambda()
            )))
        }
    }

    /// `(V, H, L)` with `L = H V`.
    pub fn shear_matrices(&self) -> (Mat2, Mat2, Mat2) {
        let kappa = self.kappa();
        let lambda = self.lambda();
        let v = Mat2::new(1.0, 0.0, kappa, 1.0);
        let h = Mat2::new(1.0, lambda, 0.0, 1.0);
        let l = Mat2::new(1.0 + kappa * lambda, lambda, kappa, 1.0);
        (v, h, l)
    }

    pub fn region_matrix(&self, region: Region) -> Option<Mat2> {
        let (v, h, l) = self.shear_matrices();
        match region {
            Region::RV => Some(v),
            Region::RH => Some(h),
            Region::RL => Some(l),
            Region::Outside => None,
        }
    }

    /// Region of `z`, following the mixed strict/non-strict inequalities of
    /// the set definitions literally.
    pub fn classify_region(&self, z: TorusPoint) -> Region {
        let (x, y) = (z.x, z.y);
        if x <= self.alpha {
            let sheared = wrap_unit(y + self.kappa() * x);
            if sheared <= self.beta {
                Region::RL
            } else {
                Region::RV
            }
        } else if y <= self.beta {
            Region::RH
        } else {
            Region::Outside
        }
    }

    pub fn in_domain(&self, z: TorusPoint) -> bool {
        self.classify_region(z) != Region::Outside
    }

    pub fn forward(&self, z: TorusPoint) -> Result<TorusPoint> {
        let (x, y) = (z.x, z.y);
        if x <= self.alpha {
            let y1 = wrap_unit(y + self.kappa() * x);
            if y1 <= self.beta {
                Ok(TorusPoint::new(x + self.lambda() * y1, y1))
            } else {
                Ok(TorusPoint { x, y: y1 })
            }
        } else if y <= self.beta {
            Ok(TorusPoint::new(x + self.lambda() * y, y))
        } else {
            Err(Error::OutsideDomain { x, y })
        }
    }

    /// Inverse map: undo the horizontal shear, then the vertical one.
    pub fn backward(&self, z: TorusPoint) -> Result<TorusPoint> {
        self.backward_with_letters(z).map(|(p, _, _)| p)
    }

    /// Inverse step plus which inverse shears were applied, `(H^-1, V^-1)`.
    pub(crate) fn backward_with_letters(&self, z: TorusPoint) -> Result<(TorusPoint, bool, bool)> {
        if !self.in_domain(z) {
            return Err(Error::OutsideDomain { x: z.x, y: z.y });
        }
        let (mut x, mut y) = (z.x, z.y);
        let undo_h = y <= self.beta;
        if undo_h {
            x = wrap_unit(x - self.lambda() * y);
        }
        let undo_v = x <= self.alpha;
        if undo_v {
            y = wrap_unit(y - self.kappa() * x);
        }
        Ok((TorusPoint { x, y }, undo_h, undo_v))
    }

    pub fn jacobian(&self, z: TorusPoint) -> Result<Mat2> {
        let region = self.classify_region(z);
        if region == Region::Outside {
            return Err(Error::OutsideDomain { x: z.x, y: z.y });
        }
        if self.boundary_distance(z) < EPS_SING {
            return Err(Error::OnBoundary { x: z.x, y: z.y });
        }
        Ok(self.region_matrix(region).expect("in-domain region"))
    }

    pub(crate) fn has_vertical_lines(&self) -> bool {
        self.alpha < 1.0
    }

    pub(crate) fn has_horizontal_lines(&self) -> bool {
        self.alpha < 1.0 && self.beta < 1.0
    }

    pub(crate) fn has_sheared_lines(&self) -> bool {
        self.beta < 1.0
    }

    /// Torus distance from `z` to the nearest region boundary:
    /// the lines `x = 0, alpha`, the segments `y = 0, beta` over
    /// `alpha <= x <= 1`, and the sheared segments `y + kappa x = 0, beta`
    /// over `0 <= x <= alpha`. Infinite when the map is globally linear.
    pub fn boundary_distance(&self, z: TorusPoint) -> f64 {
        let mut best = f64::INFINITY;
        if self.has_vertical_lines() {
            for c in [0.0, self.alpha] {
                best = best.min(periodic_offset(z.x, c).abs());
            }
        }
        if self.has_horizontal_lines() {
            for c in [0.0, self.beta] {
                for sx in [-1.0, 0.0, 1.0] {
                    for sy in [-1.0, 0.0, 1.0] {
                        let p = Vec2::new(z.x + sx, z.y + sy);
                        let d =
                            point_segment_distance(p, Vec2::new(self.alpha, c), Vec2::new(1.0, c));
                        best = best.min(d);
                    }
                }
            }
        }
        if self.has_sheared_lines() {
            let k = self.k as f64;
            let span = self.k.unsigned_abs() as i64 + 2;
            for c in [0.0, self.beta] {
                for sx in [-1.0, 0.0, 1.0] {
                    let p = Vec2::new(z.x + sx, z.y);
                    let base = (p.y - c).floor() as i64;
                    for j in (base - span)..=(base + span) {
                        let y0 = c + j as f64;
                        let d = point_segment_distance(
                            p,
                            Vec2::new(0.0, y0),
                            Vec2::new(self.alpha, y0 - k),
                        );
                        best = best.min(d);
                    }
                }
            }
        }
        best
    }
}

fn point_segment_distance(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    let t = if len2 == 0.0 {
        0.0
    } else {
        ((p - a).dot(ab) / len2).clamp(0.0, 1.0)
    };
    (p - (a + ab.scale(t))).norm()
}
