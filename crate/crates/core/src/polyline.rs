//! Material lines and their exact advection under the twist map.
//!
//! A [`Polyline`] stores each vertex reduced onto the torus together with the
//! lifted displacement to the next vertex. Positions therefore keep full
//! absolute precision no matter how far the line has wound around the torus,
//! and edge directions keep full relative precision, which is what the
//! length and bend computations consume.
//!
//! Because the map is piecewise linear, splitting every edge where it
//! crosses a region boundary and mapping each piece with its region's matrix
//! gives the image line with no interpolation error.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{CompensatedSum, Vec2};
use crate::ltm::{wrap_unit, LtmParams, Region, TorusPoint};

/// Pieces shorter than this are folded into a neighbour during refinement.
pub const MIN_PIECE: f64 = 1e-12;

/// Default cap on the number of vertices an advected line may carry.
pub const DEFAULT_VERTEX_BUDGET: usize = 50_000_000;

const CHUNK: usize = 4096;

/// A material line in the universal cover of the torus.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    /// Vertex positions reduced into the unit square.
    anchors: Vec<Vec2>,
    /// `steps[i]` is the lifted edge from vertex `i` to vertex `i + 1`
    /// (to vertex 0 for the closing edge of a closed line).
    steps: Vec<Vec2>,
    closed: bool,
}

fn reduce(v: Vec2) -> Vec2 {
    Vec2::new(wrap_unit(v.x), wrap_unit(v.y))
}

impl Polyline {
    /// Open line through the given lifted vertices.
    pub fn open(vertices: &[Vec2]) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidPolyline(
                "an open line needs at least 2 vertices".into(),
            ));
        }
        Self::from_cover(vertices, false)
    }

    /// Closed loop through the given lifted vertices; the closing edge runs
    /// from the last vertex back to the first.
    pub fn closed(vertices: &[Vec2]) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidPolyline(
                "a closed line needs at least 3 vertices".into(),
            ));
        }
        Self::from_cover(vertices, true)
    }

    pub fn segment(a: Vec2, b: Vec2) -> Result<Self> {
        Self::open(&[a, b])
    }

    fn from_cover(vertices: &[Vec2], closed: bool) -> Result<Self> {
        let n = vertices.len();
        let edges = if closed { n } else { n - 1 };
        let steps: Vec<Vec2> = (0..edges)
            .map(|i| vertices[(i + 1) % n] - vertices[i])
            .collect();
        if let Some(i) = steps.iter().position(|s| s.x == 0.0 && s.y == 0.0) {
            return Err(Error::InvalidPolyline(format!(
                "vertices {i} and {} coincide",
                (i + 1) % n
            )));
        }
        Ok(Self {
            anchors: vertices.iter().map(|&v| reduce(v)).collect(),
            steps,
            closed,
        })
    }

    pub(crate) fn from_parts(anchors: Vec<Vec2>, steps: Vec<Vec2>, closed: bool) -> Self {
        debug_assert_eq!(
            steps.len(),
            if closed {
                anchors.len()
            } else {
                anchors.len() - 1
            }
        );
        Self {
            anchors,
            steps,
            closed,
        }
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn vertex_count(&self) -> usize {
        self.anchors.len()
    }

    pub fn segment_count(&self) -> usize {
        self.steps.len()
    }

    /// Vertices reduced onto the torus.
    pub fn anchors(&self) -> &[Vec2] {
        &self.anchors
    }

    /// Lifted edge vectors.
    pub fn steps(&self) -> &[Vec2] {
        &self.steps
    }

    /// Lifted vertices, starting from the first vertex's reduced position.
    pub fn cover_vertices(&self) -> Vec<Vec2> {
        let mut out = Vec::with_capacity(self.anchors.len());
        let mut p = self.anchors[0];
        out.push(p);
        for s in &self.steps[..self.anchors.len() - 1] {
            p = p + *s;
            out.push(p);
        }
        out
    }

    /// Check that every vertex lies in the map's domain.
    pub fn check_domain(&self, params: &LtmParams) -> Result<()> {
        for a in &self.anchors {
            let z = TorusPoint::new(a.x, a.y);
            if !params.in_domain(z) {
                return Err(Error::OutsideDomain { x: z.x(), y: z.y() });
            }
        }
        Ok(())
    }

    /// Contiguous open sub-line covering vertices `start .. start + count`.
    pub fn window(&self, start: usize, count: usize) -> Result<Polyline> {
        let end = start + count;
        if count < 2 || end > self.anchors.len() {
            return Err(Error::InvalidPolyline(format!(
                "window {start}..{end} invalid for {} vertices",
                self.anchors.len()
            )));
        }
        Ok(Self {
            anchors: self.anchors[start..end].to_vec(),
            steps: self.steps[start..end - 1].to_vec(),
            closed: false,
        })
    }

    /// Drop vertices whose incident edges are parallel to within
    /// `tol_radians`. Lengths are unchanged; bend classification at the
    /// remaining vertices is unaffected.
    pub fn merge_collinear(&self, tol_radians: f64) -> Polyline {
        let n = self.anchors.len();
        let mut anchors = Vec::with_capacity(n);
        let mut steps: Vec<Vec2> = Vec::with_capacity(self.steps.len());
        anchors.push(self.anchors[0]);
        steps.push(self.steps[0]);
        for i in 1..self.steps.len() {
            let prev = *steps.last().expect("non-empty");
            let next = self.steps[i];
            let cross = prev.x * next.y - prev.y * next.x;
            let angle = cross.atan2(prev.dot(next)).abs();
            if angle < tol_radians {
                *steps.last_mut().expect("non-empty") = prev + next;
            } else {
                anchors.push(self.anchors[i]);
                steps.push(next);
            }
        }
        if !self.closed {
            anchors.push(self.anchors[n - 1]);
        }
        Polyline {
            anchors,
            steps,
            closed: self.closed,
        }
    }
}

/// Total lifted arc length, summed in edge order with compensation.
pub fn length(line: &Polyline) -> f64 {
    line.steps
        .iter()
        .map(|s| s.norm())
        .collect::<CompensatedSum>()
        .value()
}

/// Which boundary family a cut lies on; used to snap the cut exactly.
#[derive(Debug, Clone, Copy)]
enum Snap {
    X(f64),
    Y(f64),
    /// `y + kappa (x - shift)` equals the first value, where `shift` is the
    /// integer part of x in the cover.
    Sheared(f64, f64),
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    /// Start point, unreduced, relative to the same lift as the edge.
    start: Vec2,
    step: Vec2,
    region: Region,
}

/// Parameter values in `(0, 1)` where `origin + t * dir` hits `c + j`.
fn family_cuts(origin: f64, dir: f64, c: f64, mut push: impl FnMut(f64, f64)) {
    if dir == 0.0 {
        return;
    }
    let end = origin + dir;
    let (lo, hi) = if dir > 0.0 {
        (origin, end)
    } else {
        (end, origin)
    };
    let first = (lo - c).ceil() as i64;
    let last = (hi - c).floor() as i64;
    for j in first..=last {
        let value = c + j as f64;
        let t = (value - origin) / dir;
        if t > 0.0 && t < 1.0 {
            push(t, value);
        }
    }
}

fn region_with_nudge(params: &LtmParams, p: Vec2) -> Result<Region> {
    let z = TorusPoint::new(p.x, p.y);
    let region = params.classify_region(z);
    if region != Region::Outside {
        return Ok(region);
    }
    // A piece running along the edge of the domain; take the side that is in it.
    const NUDGE: f64 = 1e-9;
    if params.boundary_distance(z) < NUDGE {
        for (dx, dy) in [(0.0, -NUDGE), (0.0, NUDGE), (-NUDGE, 0.0), (NUDGE, 0.0)] {
            let r = params.classify_region(TorusPoint::new(p.x + dx, p.y + dy));
            if r != Region::Outside {
                return Ok(r);
            }
        }
    }
    Err(Error::SegmentOutsideDomain { x: z.x(), y: z.y() })
}

/// Split the edge `anchor -> anchor + step` where it changes region.
fn split_edge(params: &LtmParams, anchor: Vec2, step: Vec2, out: &mut Vec<Piece>) -> Result<()> {
    let mut cuts: Vec<(f64, Snap)> = Vec::new();
    if params.has_vertical_lines() {
        for c in [0.0, params.alpha()] {
            family_cuts(anchor.x, step.x, c, |t, v| cuts.push((t, Snap::X(v))));
        }
    }
    if params.has_horizontal_lines() {
        for c in [0.0, params.beta()] {
            family_cuts(anchor.y, step.y, c, |t, v| cuts.push((t, Snap::Y(v))));
        }
    }
    let kappa = params.kappa();
    if params.has_sheared_lines() {
        // `y + kappa x` uses x reduced mod 1, so evaluate it cell by cell.
        let dg = step.y + kappa * step.x;
        let (x_lo, x_hi) = if step.x >= 0.0 {
            (anchor.x, anchor.x + step.x)
        } else {
            (anchor.x + step.x, anchor.x)
        };
        for cell in (x_lo.floor() as i64)..=(x_hi.floor() as i64) {
            let shift = cell as f64;
            let (t_a, t_b) = if step.x == 0.0 {
                (0.0, 1.0)
            } else {
                let ta = (shift - anchor.x) / step.x;
                let tb = (shift + 1.0 - anchor.x) / step.x;
                (ta.min(tb), ta.max(tb))
            };
            let g0 = anchor.y + kappa * (anchor.x - shift);
            for c in [0.0, params.beta()] {
                family_cuts(g0, dg, c, |t, v| {
                    if t >= t_a && t <= t_b {
                        cuts.push((t, Snap::Sheared(v, shift)));
                    }
                });
            }
        }
    }

    let end = anchor + step;
    if cuts.is_empty() {
        let region = region_with_nudge(params, anchor + step.scale(0.5))?;
        out.push(Piece {
            start: anchor,
            step,
            region,
        });
        return Ok(());
    }
    cuts.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut points = Vec::with_capacity(cuts.len() + 2);
    points.push(anchor);
    for &(t, snap) in &cuts {
        let p = match snap {
            Snap::X(x) => Vec2::new(x, anchor.y + t * step.y),
            Snap::Y(y) => Vec2::new(anchor.x + t * step.x, y),
            Snap::Sheared(g, shift) => {
                let x = anchor.x + t * step.x;
                Vec2::new(x, g - kappa * (x - shift))
            }
        };
        points.push(p);
    }
    points.push(end);

    // Fold tiny pieces into their longer neighbour.
    loop {
        let pieces = points.len() - 1;
        if pieces == 1 {
            break;
        }
        let lens: Vec<f64> = points.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
        let Some(i) = lens.iter().position(|&l| l < MIN_PIECE) else {
            break;
        };
        // remove the interior point shared with the chosen neighbour
        let remove = if i == 0 {
            1
        } else if i == pieces - 1 || lens[i - 1] >= lens[i + 1] {
            i
        } else {
            i + 1
        };
        points.remove(remove);
    }

    let mut regions = Vec::with_capacity(points.len() - 1);
    for w in points.windows(2) {
        regions.push(region_with_nudge(params, w[0] + (w[1] - w[0]).scale(0.5))?);
    }

    let mut start = points[0];
    let mut region = regions[0];
    for i in 1..regions.len() {
        if regions[i] != region {
            let cut = points[i];
            out.push(Piece {
                start,
                step: cut - start,
                region,
            });
            start = cut;
            region = regions[i];
        }
    }
    out.push(Piece {
        start,
        step: end - start,
        region,
    });
    Ok(())
}

struct Chunk {
    anchors: Vec<Vec2>,
    steps: Vec<Vec2>,
    counts: Vec<u32>,
}

fn process_edges(
    params: &LtmParams,
    line: &Polyline,
    range: std::ops::Range<usize>,
    map: bool,
) -> Result<Chunk> {
    let mut chunk = Chunk {
        anchors: Vec::with_capacity(range.len() * 2),
        steps: Vec::with_capacity(range.len() * 2),
        counts: Vec::with_capacity(range.len()),
    };
    let mut pieces = Vec::new();
    for i in range {
        pieces.clear();
        split_edge(params, line.anchors[i], line.steps[i], &mut pieces)?;
        chunk.counts.push(pieces.len() as u32);
        for (j, piece) in pieces.iter().enumerate() {
            // the first piece starts at the stored anchor itself
            let start = if j == 0 {
                line.anchors[i]
            } else {
                reduce(piece.start)
            };
            if map {
                let image = params.forward(TorusPoint::new(start.x, start.y))?;
                let matrix = params.region_matrix(piece.region).expect("in-domain piece");
                chunk.anchors.push(image.as_vec());
                chunk.steps.push(matrix.apply(piece.step));
            } else {
                chunk.anchors.push(start);
                chunk.steps.push(piece.step);
            }
        }
    }
    Ok(chunk)
}

/// Result of an advection that also tracks where old vertices went.
pub struct Tracked {
    pub line: Polyline,
    /// `vertex_map[i]` is the index in `line` of the image of old vertex `i`.
    pub vertex_map: Vec<usize>,
}

fn transform(params: &LtmParams, line: &Polyline, map: bool, budget: usize) -> Result<Tracked> {
    let edges = line.steps.len();
    let ranges: Vec<_> = (0..edges)
        .step_by(CHUNK)
        .map(|s| s..(s + CHUNK).min(edges))
        .collect();
    let chunks: Vec<Chunk> = ranges
        .into_par_iter()
        .map(|r| process_edges(params, line, r, map))
        .collect::<Result<_>>()?;

    let total: usize =
        chunks.iter().map(|c| c.anchors.len()).sum::<usize>() + usize::from(!line.closed);
    if total > budget {
        return Err(Error::VertexBudgetExceeded {
            count: total,
            budget,
        });
    }
    let mut anchors = Vec::with_capacity(total);
    let mut steps = Vec::with_capacity(total);
    let mut vertex_map = Vec::with_capacity(line.anchors.len());
    for c in chunks {
        let mut next = anchors.len();
        for &n in &c.counts {
            vertex_map.push(next);
            next += n as usize;
        }
        anchors.extend(c.anchors);
        steps.extend(c.steps);
    }
    if !line.closed {
        let last = *line.anchors.last().expect("non-empty");
        let end = if map {
            params.forward(TorusPoint::new(last.x, last.y))?.as_vec()
        } else {
            last
        };
        vertex_map.push(anchors.len());
        anchors.push(end);
    }
    Ok(Tracked {
        line: Polyline::from_parts(anchors, steps, line.closed),
        vertex_map,
    })
}

/// Insert a vertex wherever an edge changes region. Crossings of boundary
/// lines that separate two pieces of the same region are not kept, since
/// the map is affine across them.
pub fn refine_at_boundaries(params: &LtmParams, line: &Polyline) -> Result<Polyline> {
    transform(params, line, false, usize::MAX).map(|t| t.line)
}

/// One application of the map to a material line.
pub fn advect(params: &LtmParams, line: &Polyline) -> Result<Polyline> {
    advect_with_budget(params, line, DEFAULT_VERTEX_BUDGET)
}

pub fn advect_with_budget(params: &LtmParams, line: &Polyline, budget: usize) -> Result<Polyline> {
    transform(params, line, true, budget).map(|t| t.line)
}

/// Advect and report where each old vertex landed in the new line.
pub fn advect_tracked(params: &LtmParams, line: &Polyline) -> Result<Tracked> {
    transform(params, line, true, DEFAULT_VERTEX_BUDGET)
}
