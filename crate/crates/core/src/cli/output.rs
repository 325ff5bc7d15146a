//! CSV, SVG and number formatting for command output.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use twistfold::kinks::{BendClass, BendReport};
use twistfold::manifold::SlopeSample;
use twistfold::{LtmParams, Polyline, Vec2};

/// `x` to 6 significant digits, `%g` style.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return x.to_string();
    }
    let e = x.abs().log10().floor() as i32;
    if !(-4..6).contains(&e) {
        return format!("{x:.5e}");
    }
    let s = format!("{:.*}", (5 - e).max(0) as usize, x);
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn create(path: &Path) -> io::Result<BufWriter<File>> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

pub fn params_comment(p: &LtmParams) -> String {
    format!(
        "# alpha={} beta={} k={} ell={}",
        p.alpha(),
        p.beta(),
        p.k(),
        p.ell()
    )
}

pub fn write_growth(path: &Path, lengths: &[f64]) -> io::Result<()> {
    let mut w = create(path)?;
    writeln!(w, "iter,length,log_length")?;
    for (i, l) in lengths.iter().enumerate() {
        writeln!(w, "{i},{l:?},{:?}", l.ln())?;
    }
    w.flush()
}

pub fn kinks_header(w: &mut impl Write) -> io::Result<()> {
    writeln!(w, "iter,vertex_index,x,y,turn_dot,class")
}

/// Append the kink rows of one iterate.
pub fn write_kink_rows(w: &mut impl Write, iter: usize, bends: &[BendReport]) -> io::Result<()> {
    for b in bends.iter().filter(|b| b.class == BendClass::Kink) {
        writeln!(
            w,
            "{iter},{},{:?},{:?},{:?},{}",
            b.vertex_index,
            b.location.x(),
            b.location.y(),
            b.turn_dot,
            b.class
        )?;
    }
    Ok(())
}

/// Vertices reduced onto the torus, one `x,y` row each.
pub fn write_snapshot(path: &Path, p: &LtmParams, iter: usize, line: &Polyline) -> io::Result<()> {
    let mut w = create(path)?;
    writeln!(
        w,
        "{} iter={iter} closed={}",
        params_comment(p),
        line.is_closed()
    )?;
    writeln!(w, "x,y")?;
    for a in line.anchors() {
        writeln!(w, "{:?},{:?}", a.x, a.y)?;
    }
    w.flush()
}

pub enum SlopeRow {
    Sample(SlopeSample),
    Singular { x: f64, y: f64, step: usize },
}

pub fn write_slope_field(path: &Path, p: &LtmParams, rows: &[SlopeRow]) -> io::Result<()> {
    let mut w = create(path)?;
    writeln!(w, "{}", params_comment(p))?;
    writeln!(w, "x,y,slope,converged,depth")?;
    for r in rows {
        match r {
            SlopeRow::Sample(s) => writeln!(
                w,
                "{:?},{:?},{:?},{},{}",
                s.point.x(),
                s.point.y(),
                s.slope,
                s.converged,
                s.depth_used
            )?,
            SlopeRow::Singular { x, y, step } => writeln!(w, "{x:?},{y:?},NaN,singular,{step}")?,
        }
    }
    w.flush()
}

/// Split the lifted segment `a -> a + s` where it crosses integer grid
/// lines and return the pieces translated into the unit square.
fn unit_square_pieces(a: Vec2, s: Vec2) -> Vec<(Vec2, Vec2)> {
    let mut ts = vec![0.0, 1.0];
    for (o, d) in [(a.x, s.x), (a.y, s.y)] {
        if d != 0.0 {
            let (lo, hi) = if d > 0.0 { (o, o + d) } else { (o + d, o) };
            for j in (lo.floor() as i64 + 1)..=(hi.ceil() as i64 - 1) {
                ts.push((j as f64 - o) / d);
            }
        }
    }
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    ts.windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| {
            let p0 = a + s.scale(w[0]);
            let p1 = a + s.scale(w[1]);
            let mid = a + s.scale(0.5 * (w[0] + w[1]));
            let shift = Vec2::new(mid.x.floor(), mid.y.floor());
            (p0 - shift, p1 - shift)
        })
        .collect()
}

fn boundary_lines(p: &LtmParams) -> Vec<(Vec2, Vec2)> {
    let mut out = Vec::new();
    let (alpha, beta, kappa) = (p.alpha(), p.beta(), p.kappa());
    if alpha < 1.0 {
        out.push((Vec2::new(alpha, 0.0), Vec2::new(alpha, 1.0)));
        if beta < 1.0 {
            out.push((Vec2::new(alpha, beta), Vec2::new(1.0, beta)));
        }
    }
    if beta < 1.0 {
        // y + kappa x = c over 0 <= x <= alpha, folded into the square
        for c in [0.0, beta] {
            out.extend(unit_square_pieces(
                Vec2::new(0.0, c),
                Vec2::new(alpha, -kappa * alpha),
            ));
        }
    }
    out
}

/// Render the line on the unit square with region boundaries dashed.
pub fn write_svg(path: &Path, p: &LtmParams, line: &Polyline) -> io::Result<()> {
    let mut d = String::new();
    let mut pen: Option<Vec2> = None;
    let anchors = line.anchors();
    for (a, s) in anchors.iter().zip(line.steps()) {
        for (q0, q1) in unit_square_pieces(*a, *s) {
            let joined = pen.is_some_and(|c| (c - q0).norm() < 1e-12);
            if !joined {
                let _ = write!(d, "M{:.6} {:.6}", q0.x, q0.y);
            }
            let _ = write!(d, "L{:.6} {:.6}", q1.x, q1.y);
            pen = Some(q1);
        }
    }
    let mut w = create(path)?;
    writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 1 1" width="800" height="800">"#
    )?;
    writeln!(w, "<!-- {} -->", &params_comment(p)[2..])?;
    writeln!(w, r#"<g transform="matrix(1 0 0 -1 0 1)">"#)?;
    writeln!(
        w,
        r#"<rect x="0" y="0" width="1" height="1" fill="white" stroke="black" stroke-width="1" vector-effect="non-scaling-stroke"/>"#
    )?;
    for (a, b) in boundary_lines(p) {
        writeln!(
            w,
            r#"<line x1="{:.6}" y1="{:.6}" x2="{:.6}" y2="{:.6}" stroke="gray" stroke-width="1" stroke-dasharray="4 3" vector-effect="non-scaling-stroke"/>"#,
            a.x, a.y, b.x, b.y
        )?;
    }
    writeln!(
        w,
        r#"<path d="{d}" fill="none" stroke="black" stroke-width="0.6" vector-effect="non-scaling-stroke"/>"#
    )?;
    writeln!(w, "</g>\n</svg>")?;
    w.flush()
}
