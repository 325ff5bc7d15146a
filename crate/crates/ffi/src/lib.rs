//! C interface to `twistfold`.
//!
//! Every fallible function returns a [`TfStatus`] and writes its result
//! through out-pointers, which are left untouched on failure. The message
//! for the most recent failure on the calling thread is available from
//! [`tf_last_error_message`]. Handles are opaque; free each one exactly
//! once with its matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use twistfold::braid::{h_rods, ltm_lower_bound, BraidClass, BraidWord};
use twistfold::kinks::{bends_or_none, BendClass};
use twistfold::manifold::unstable_slope;
use twistfold::polyline::{advect_with_budget, length, DEFAULT_VERTEX_BUDGET};
use twistfold::{Error, LtmParams, Polyline, Region, TorusPoint, Vec2};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParams = 2,
    OutsideDomain = 3,
    Singular = 4,
    NonHyperbolic = 5,
    BraidParse = 6,
    Overflow = 7,
    InvalidPolyline = 8,
    BudgetExceeded = 9,
    Numerical = 10,
    InvalidUtf8 = 11,
    Panic = 12,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TfRegion {
    Rv = 0,
    Rh = 1,
    Rl = 2,
    Outside = 3,
}

/// Map parameters.
pub struct TfLtm(LtmParams);

/// Material line in the universal cover.
pub struct TfPolyline(Polyline);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> TfStatus {
    match e {
        Error::InvalidParams(_) | Error::Config(_) => TfStatus::InvalidParams,
        Error::OutsideDomain { .. } | Error::SegmentOutsideDomain { .. } => TfStatus::OutsideDomain,
        Error::OnBoundary { .. } | Error::SingularOrbit { .. } => TfStatus::Singular,
        Error::NonHyperbolicParams(_) | Error::NonHyperbolicBound => TfStatus::NonHyperbolic,
        Error::EmptyWord | Error::BraidParse(_) => TfStatus::BraidParse,
        Error::Overflow => TfStatus::Overflow,
        Error::InvalidPolyline(_) | Error::DegenerateSegment { .. } => TfStatus::InvalidPolyline,
        Error::VertexBudgetExceeded { .. } => TfStatus::BudgetExceeded,
        Error::InsufficientData(_)
        | Error::NonPositiveLength { .. }
        | Error::ZeroDenominator
        | Error::EmptyCode
        | Error::DegenerateVector => TfStatus::Numerical,
    }
}

struct Fail(TfStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(TfStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> TfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TfStatus::Ok,
        Ok(Err(Fail(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            TfStatus::Panic
        }
    }
}

unsafe fn get<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

/// Message for the last failure on this thread, or an empty string. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn tf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn tf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn tf_ltm_new(
    alpha: f64,
    beta: f64,
    k: i64,
    ell: i64,
    out: *mut *mut TfLtm,
) -> TfStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let p = LtmParams::new(alpha, beta, k, ell)?;
        put(out, Box::into_raw(Box::new(TfLtm(p))), "out")
    })
}

/// Parameters of the cat map (`alpha = beta = 1`, `k = ell = 1`).
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn tf_ltm_cat_map(out: *mut *mut TfLtm) -> TfStatus {
    guard(|| {
        put(
            out,
            Box::into_raw(Box::new(TfLtm(LtmParams::cat_map()))),
            "out",
        )
    })
}

/// # Safety
/// `ltm` must be null or a handle from `tf_ltm_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tf_ltm_free(ltm: *mut TfLtm) {
    if !ltm.is_null() {
        drop(Box::from_raw(ltm));
    }
}

/// # Safety
/// `ltm` must be a live handle; the out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_ltm_forward(
    ltm: *const TfLtm,
    x: f64,
    y: f64,
    out_x: *mut f64,
    out_y: *mut f64,
) -> TfStatus {
    guard(|| {
        let p = &get(ltm, "ltm")?.0;
        if out_x.is_null() || out_y.is_null() {
            return Err(null("output"));
        }
        let z = p.forward(TorusPoint::new(x, y))?;
        put(out_x, z.x(), "out_x")?;
        put(out_y, z.y(), "out_y")
    })
}

/// # Safety
/// `ltm` must be a live handle; the out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_ltm_backward(
    ltm: *const TfLtm,
    x: f64,
    y: f64,
    out_x: *mut f64,
    out_y: *mut f64,
) -> TfStatus {
    guard(|| {
        let p = &get(ltm, "ltm")?.0;
        if out_x.is_null() || out_y.is_null() {
            return Err(null("output"));
        }
        let z = p.backward(TorusPoint::new(x, y))?;
        put(out_x, z.x(), "out_x")?;
        put(out_y, z.y(), "out_y")
    })
}

/// # Safety
/// `ltm` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_ltm_classify_region(
    ltm: *const TfLtm,
    x: f64,
    y: f64,
    out: *mut TfRegion,
) -> TfStatus {
    guard(|| {
        let p = &get(ltm, "ltm")?.0;
        let r = match p.classify_region(TorusPoint::new(x, y)) {
            Region::RV => TfRegion::Rv,
            Region::RH => TfRegion::Rh,
            Region::RL => TfRegion::Rl,
            Region::Outside => TfRegion::Outside,
        };
        put(out, r, "out")
    })
}

/// Unstable-manifold slope at `(x, y)`. `out_depth` and `out_converged`
/// may be null.
///
/// # Safety
/// `ltm` must be a live handle; `out_slope` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_ltm_unstable_slope(
    ltm: *const TfLtm,
    x: f64,
    y: f64,
    out_slope: *mut f64,
    out_depth: *mut usize,
    out_converged: *mut bool,
) -> TfStatus {
    guard(|| {
        let p = &get(ltm, "ltm")?.0;
        if out_slope.is_null() {
            return Err(null("out_slope"));
        }
        let s = unstable_slope(p, TorusPoint::new(x, y))?;
        put(out_slope, s.slope, "out_slope")?;
        if !out_depth.is_null() {
            out_depth.write(s.depth_used);
        }
        if !out_converged.is_null() {
            out_converged.write(s.converged);
        }
        Ok(())
    })
}

/// Entropy bound from the associated cat map.
///
/// # Safety
/// `ltm` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_ltm_lower_bound(ltm: *const TfLtm, out: *mut f64) -> TfStatus {
    guard(|| {
        let p = &get(ltm, "ltm")?.0;
        let b = ltm_lower_bound(p)?;
        put(out, b, "out")
    })
}

/// Entropy bound of a 3-strand braid word such as `"s1 s2^-1"`.
/// `out_pseudo_anosov` may be null.
///
/// # Safety
/// `word` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_h_rods(
    word: *const c_char,
    out: *mut f64,
    out_pseudo_anosov: *mut bool,
) -> TfStatus {
    guard(|| {
        if word.is_null() {
            return Err(null("word"));
        }
        let text = CStr::from_ptr(word)
            .to_str()
            .map_err(|e| Fail(TfStatus::InvalidUtf8, e.to_string()))?;
        let word: BraidWord = text.parse()?;
        let b = h_rods(&word)?;
        put(out, b.h_rods, "out")?;
        if !out_pseudo_anosov.is_null() {
            out_pseudo_anosov.write(b.classification == BraidClass::PseudoAnosov);
        }
        Ok(())
    })
}

/// Straight segment between two lifted points.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn tf_polyline_segment(
    x0: f64,
    y0: f64,
    x1: f64,
    y1: f64,
    out: *mut *mut TfPolyline,
) -> TfStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let line = Polyline::segment(Vec2::new(x0, y0), Vec2::new(x1, y1))?;
        put(out, Box::into_raw(Box::new(TfPolyline(line))), "out")
    })
}

/// Image of `line` under one map application, as a new handle. A zero
/// `vertex_budget` selects the library default.
///
/// # Safety
/// `ltm` and `line` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_polyline_advect(
    ltm: *const TfLtm,
    line: *const TfPolyline,
    vertex_budget: usize,
    out: *mut *mut TfPolyline,
) -> TfStatus {
    guard(|| {
        let p = &get(ltm, "ltm")?.0;
        let l = &get(line, "line")?.0;
        if out.is_null() {
            return Err(null("out"));
        }
        let budget = if vertex_budget == 0 {
            DEFAULT_VERTEX_BUDGET
        } else {
            vertex_budget
        };
        let next = advect_with_budget(p, l, budget)?;
        put(out, Box::into_raw(Box::new(TfPolyline(next))), "out")
    })
}

/// # Safety
/// `line` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_polyline_length(line: *const TfPolyline, out: *mut f64) -> TfStatus {
    guard(|| put(out, length(&get(line, "line")?.0), "out"))
}

/// # Safety
/// `line` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_polyline_vertex_count(
    line: *const TfPolyline,
    out: *mut usize,
) -> TfStatus {
    guard(|| put(out, get(line, "line")?.0.vertex_count(), "out"))
}

/// Number of interior vertices whose bend is acute.
///
/// # Safety
/// `line` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_polyline_kink_count(
    line: *const TfPolyline,
    out: *mut usize,
) -> TfStatus {
    guard(|| {
        let bends = bends_or_none(&get(line, "line")?.0)?;
        put(
            out,
            bends.iter().filter(|b| b.class == BendClass::Kink).count(),
            "out",
        )
    })
}

/// Copy up to `capacity` lifted vertices into `xy` as interleaved
/// `x, y` pairs. `out_written` receives the number of vertices copied;
/// pass a null `xy` to query the count alone.
///
/// # Safety
/// `line` must be a live handle; `xy` must be null or hold `2 * capacity`
/// doubles; `out_written` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_polyline_vertices(
    line: *const TfPolyline,
    xy: *mut f64,
    capacity: usize,
    out_written: *mut usize,
) -> TfStatus {
    guard(|| {
        let l = &get(line, "line")?.0;
        if xy.is_null() {
            return put(out_written, l.vertex_count(), "out_written");
        }
        if out_written.is_null() {
            return Err(null("out_written"));
        }
        let verts = l.cover_vertices();
        let n = verts.len().min(capacity);
        let dst = std::slice::from_raw_parts_mut(xy, 2 * n);
        for (pair, v) in dst.chunks_exact_mut(2).zip(&verts) {
            pair[0] = v.x;
            pair[1] = v.y;
        }
        put(out_written, n, "out_written")
    })
}

/// # Safety
/// `line` must be null or a live handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tf_polyline_free(line: *mut TfPolyline) {
    if !line.is_null() {
        drop(Box::from_raw(line));
    }
}
