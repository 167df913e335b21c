//! Deterministic sampling of the loci |F(n s)| = c in the complex plane for
//! the four tagged functions, avoiding zeros and poles.
//!
//! The canonical sample is the first hit of a horizontal line scan in a
//! fixed order (bottom line upward, left to right), refined by safeguarded
//! root finding; curve families come from predictor-corrector continuation.

use crate::crossbreed::{row_assignment_with, Scheme};
use crate::hybrid::HybridConstants;
use crate::roots;
use crate::specfun::{self, complex_pair, quarter_periods, Complex, FunctionTag, SpecFunError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Scan resolution in the n*s coordinate (the function argument).
const SCAN_STEP: f64 = 0.05;
/// Vertical spacing of scan lines in the n*s coordinate.
const LINE_STEP: f64 = 0.1;
/// Locus acceptance: |achieved - target| <= LOCUS_RTOL * target.
const LOCUS_RTOL: f64 = 1e-10;
/// Refinement target, one safety decade tighter than the acceptance.
const REFINE_RTOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LocusError {
    #[error("target {target:e} not positive")]
    BadTarget { target: f64 },
    #[error(
        "no point with |{func}({n} s)| = {target:e} found scanning \
         [{re_min}, {re_max}] x [{im_min}, {im_max}] (n s coordinates)"
    )]
    NotFound {
        func: &'static str,
        n: u32,
        target: f64,
        re_min: f64,
        re_max: f64,
        im_min: f64,
        im_max: f64,
    },
    #[error("continuation step failed after 5 halvings at ({re}, {im})")]
    StepFailure { re: f64, im: f64 },
    #[error("locus search slot {slot} ({func}) failed: {source}")]
    FamilySlot {
        slot: usize,
        func: &'static str,
        source: Box<LocusError>,
    },
    #[error("evaluator failure: {0}")]
    SpecFun(#[from] SpecFunError),
}

/// Axis-aligned search rectangle in the s plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

/// How a sample is produced: [`find_locus_point`] always performs the
/// canonical first-hit line scan (a continuation run needs a scan hit to
/// start from); `Continuation` marks requests whose results feed
/// [`trace_locus`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    LineScan,
    Continuation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocusRequest {
    pub tag: FunctionTag,
    pub n: u32,
    pub target_c: f64,
    pub search_region: Region,
    pub strategy: Strategy,
}

/// A point s with |F(n s)| = target_c, achieved to LOCUS_RTOL relative.
/// `search_id` records the deterministic provenance of the sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocusPoint {
    pub tag: FunctionTag,
    pub n: u32,
    pub target_c: f64,
    #[serde(with = "complex_pair")]
    pub s: Complex,
    pub achieved: f64,
    pub search_id: String,
}

impl LocusPoint {
    /// Fresh re-evaluation of |F(n s)| at the stored point.
    pub fn revalidate(&self) -> Result<f64, SpecFunError> {
        specfun::eval_abs(self.tag, self.n, self.s)
    }
}

/// Default search region for a tag and multiplier: a fixed, pole-free window
/// in the n*s plane (chosen to span the realizable constant range of the
/// hybrid identities), scaled by 1/n into the s plane.
pub fn default_region(tag: FunctionTag, n: u32) -> Region {
    let nf = n as f64;
    let (re_min, re_max, im_min, im_max) = match tag {
        FunctionTag::Zeta => (0.1, 6.0, 0.0, 16.0),
        FunctionTag::Gamma => (0.2, 6.0, 0.0, 5.0),
        FunctionTag::JacobiCn { k_sq } => {
            let (k, kp) = quarter_periods(k_sq).expect("admissible modulus");
            (0.02, 4.0 * k - 0.02, 0.0, 0.95 * kp)
        }
        FunctionTag::BesselJ { .. } => (0.1, 10.0, 0.0, 5.0),
    };
    Region {
        re_min: re_min / nf,
        re_max: re_max / nf,
        im_min: im_min / nf,
        im_max: im_max / nf,
    }
}

fn eval_w(tag: FunctionTag, w: Complex) -> Option<f64> {
    // evaluate |F| at a point of the n*s plane; None marks unusable nodes
    let v = match tag {
        FunctionTag::Zeta => specfun::eval_zeta(w).map(|z| z.norm()),
        FunctionTag::Gamma => specfun::eval_gamma(w).map(|z| z.norm()),
        FunctionTag::JacobiCn { k_sq } => specfun::eval_cn(w, k_sq).map(|z| z.norm()),
        FunctionTag::BesselJ { p } => specfun::eval_bessel_j(p, w).map(|z| z.norm()),
    };
    match v {
        Ok(x) if x.is_finite() && x < 1e12 => Some(x),
        _ => None,
    }
}

/// First hit of the line scan, in deterministic order.
pub fn find_locus_point(req: &LocusRequest) -> Result<LocusPoint, LocusError> {
    let c = req.target_c;
    if !(c > 0.0 && c.is_finite()) {
        return Err(LocusError::BadTarget { target: c });
    }
    let nf = req.n as f64;
    // scan in the n*s plane for resolution independent of the multiplier
    let (a_re, b_re) = (req.search_region.re_min * nf, req.search_region.re_max * nf);
    let (a_im, b_im) = (req.search_region.im_min * nf, req.search_region.im_max * nf);
    let cols = ((b_re - a_re) / SCAN_STEP).round() as usize + 1;
    let lines = ((b_im - a_im) / LINE_STEP).round() as usize + 1;
    for j in 0..lines {
        let im = a_im + j as f64 * LINE_STEP;
        if im > b_im + 1e-12 {
            break;
        }
        let mut prev: Option<(f64, f64)> = None;
        for i in 0..cols {
            let re = a_re + i as f64 * SCAN_STEP;
            if re > b_re + 1e-12 {
                break;
            }
            let g = match eval_w(req.tag, Complex::new(re, im)) {
                Some(v) => v - c,
                None => {
                    prev = None;
                    continue;
                }
            };
            if g.abs() <= REFINE_RTOL * c {
                return Ok(make_point(
                    req,
                    Complex::new(re, im),
                    format!("scan:l{j}:i{i}"),
                ));
            }
            if let Some((pre, pg)) = prev {
                if pg * g < 0.0 {
                    if let Some(root) = refine_on_line(req.tag, c, pre, re, im) {
                        return Ok(make_point(
                            req,
                            Complex::new(root, im),
                            format!("scan:l{j}:i{i}"),
                        ));
                    }
                }
            }
            prev = Some((re, g));
        }
    }
    let func = req.tag.symbol();
    Err(LocusError::NotFound {
        func,
        n: req.n,
        target: c,
        re_min: a_re,
        re_max: b_re,
        im_min: a_im,
        im_max: b_im,
    })
}

fn refine_on_line(tag: FunctionTag, c: f64, lo: f64, hi: f64, im: f64) -> Option<f64> {
    let f = |x: f64| match eval_w(tag, Complex::new(x, im)) {
        Some(v) => v - c,
        None => f64::NAN,
    };
    let x = roots::brent(f, lo, hi, 1e-14 * hi.abs().max(1.0)).ok()?;
    let v = eval_w(tag, Complex::new(x, im))?;
    if (v - c).abs() <= LOCUS_RTOL * c {
        Some(x)
    } else {
        None
    }
}

fn make_point(req: &LocusRequest, w: Complex, search_id: String) -> LocusPoint {
    let nf = req.n as f64;
    let s = w / nf;
    let achieved = specfun::eval_abs(req.tag, req.n, s).expect("refined point is evaluable");
    LocusPoint {
        tag: req.tag,
        n: req.n,
        target_c: req.target_c,
        s,
        achieved,
        search_id,
    }
}

/// Gradient of |F| in the n*s plane by central differences.
fn grad(tag: FunctionTag, w: Complex, h: f64) -> Option<(f64, f64)> {
    let gx = (eval_w(tag, w + Complex::new(h, 0.0))? - eval_w(tag, w - Complex::new(h, 0.0))?)
        / (2.0 * h);
    let gy = (eval_w(tag, w + Complex::new(0.0, h))? - eval_w(tag, w - Complex::new(0.0, h))?)
        / (2.0 * h);
    Some((gx, gy))
}

/// Predictor-corrector continuation along the level curve through `start`.
/// Steps are tangent moves of length `step_len` (in the s plane) corrected
/// back onto the locus along the gradient direction; halts early near poles
/// and zeros, after returning to the start (closed curve), or after `steps`
/// points.
pub fn trace_locus(
    start: &LocusPoint,
    steps: usize,
    step_len: f64,
) -> Result<Vec<LocusPoint>, LocusError> {
    assert!(
        step_len > 0.0 && step_len <= 0.1,
        "step length capped at 0.1"
    );
    let c = start.target_c;
    let nf = start.n as f64;
    let mut w = start.s * nf;
    let step_w = step_len * nf; // tangent step in the n*s plane
    let fd = 1e-6;
    let mut out = Vec::with_capacity(steps);
    let mut dir_prev: Option<(f64, f64)> = None;
    let w0 = w;
    for k in 0..steps {
        let (gx, gy) = match grad(start.tag, w, fd) {
            Some(g) => g,
            None => break, // pole/zero proximity
        };
        let gn = (gx * gx + gy * gy).sqrt();
        if gn < 1e-12 {
            break; // critical point of |F|; tangent undefined
        }
        // tangent: perpendicular to the gradient, oriented consistently
        let mut tx = -gy / gn;
        let mut ty = gx / gn;
        if let Some((px, py)) = dir_prev {
            if tx * px + ty * py < 0.0 {
                tx = -tx;
                ty = -ty;
            }
        }
        let mut placed = false;
        let mut h = step_w;
        for _ in 0..=5 {
            let pred = w + Complex::new(tx * h, ty * h);
            if let Some(corr) = correct(start.tag, c, pred, h) {
                w = corr;
                dir_prev = Some((tx, ty));
                placed = true;
                break;
            }
            h *= 0.5;
        }
        if !placed {
            return Err(LocusError::StepFailure { re: w.re, im: w.im });
        }
        let s = w / nf;
        let achieved = specfun::eval_abs(start.tag, start.n, s)?;
        out.push(LocusPoint {
            tag: start.tag,
            n: start.n,
            target_c: c,
            s,
            achieved,
            search_id: format!("{}:trace{}", start.search_id, k),
        });
        if k >= 2 && (w - w0).norm() < step_w {
            break; // closed curve: back at the start
        }
    }
    Ok(out)
}

/// Corrector: re-solve |F| = c along the gradient line through `pred`.
fn correct(tag: FunctionTag, c: f64, pred: Complex, span: f64) -> Option<Complex> {
    let (gx, gy) = grad(tag, pred, 1e-6)?;
    let gn = (gx * gx + gy * gy).sqrt();
    if gn < 1e-12 {
        return None;
    }
    let (ux, uy) = (gx / gn, gy / gn);
    let f = |t: f64| match eval_w(tag, pred + Complex::new(ux * t, uy * t)) {
        Some(v) => v - c,
        None => f64::NAN,
    };
    // expanding bracket around the predictor, capped at 0.8 * span so a
    // corrected point stays within 2 * step_len of its predecessor
    let mut half = 0.2 * span;
    for _ in 0..3 {
        let (flo, fhi) = (f(-half), f(half));
        if flo.is_nan() || fhi.is_nan() {
            return None;
        }
        if flo * fhi <= 0.0 {
            let t = roots::brent(f, -half, half, 1e-15 * span.max(1e-12)).ok()?;
            let root = pred + Complex::new(ux * t, uy * t);
            let v = eval_w(tag, root)?;
            return if (v - c).abs() <= LOCUS_RTOL * c {
                Some(root)
            } else {
                None
            };
        }
        half *= 2.0;
    }
    None
}

/// The four locus points backing one row of equations: slot i carries the
/// i-th constant of `h`, with the function assignment given by the scheme
/// (fixed for Simple, rotated by the row residue for Cyclic). Parameters at
/// their defaults (k^2 = 1/2, p = 0).
pub fn build_locus_family(
    h: &HybridConstants,
    scheme: Scheme,
    row: u32,
) -> Result<[LocusPoint; 4], LocusError> {
    build_locus_family_with(
        h,
        scheme,
        row,
        crate::crossbreed::DEFAULT_K_SQ,
        crate::crossbreed::DEFAULT_P,
    )
}

/// [`build_locus_family`] with explicit cn modulus and Bessel order.
pub fn build_locus_family_with(
    h: &HybridConstants,
    scheme: Scheme,
    row: u32,
    k_sq: f64,
    p: i32,
) -> Result<[LocusPoint; 4], LocusError> {
    assert!(row >= 1, "rows are 1-based");
    let q = match scheme {
        Scheme::Simple => 1,
        Scheme::Cyclic => ((row - 1) % 4 + 1) as u8,
    };
    let tags = row_assignment_with(q, k_sq, p).expect("residue is 1..=4");
    let targets = h.targets();
    let mut out = Vec::with_capacity(4);
    for slot in 0..4 {
        let req = LocusRequest {
            tag: tags[slot],
            n: row,
            target_c: targets[slot],
            search_region: default_region(tags[slot], row),
            strategy: Strategy::LineScan,
        };
        let p = find_locus_point(&req).map_err(|e| LocusError::FamilySlot {
            slot: slot + 1,
            func: tags[slot].symbol(),
            source: Box::new(e),
        })?;
        out.push(p);
    }
    Ok(out.try_into().expect("exactly four slots"))
}
