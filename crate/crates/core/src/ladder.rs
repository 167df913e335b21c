//! A computable model of the slowly increasing function phi1 whose
//! derivative is |zeta(1/2+it)|^2 / omega(t), together with its inverse
//! (reverse iteration of segments) and the gap law between a segment and its
//! reverse iterate.
//!
//! Every exact identity downstream holds for ANY continuous positive-a.e.
//! derivative, so the model preserves exactness; only the asymptotic gap law
//! depends on the omega normalization.

use crate::quad::{self, QuadError};
use crate::roots::{self, RootError};
use crate::specfun::{self, SpecFunError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const EULER_GAMMA: f64 = 0.5772156649015329;
/// Smallest admitted segment index L.
pub const L0: u32 = 30;
/// Checkpoint spacing of the cached integral table.
const CHECKPOINT_SPACING: f64 = std::f64::consts::FRAC_PI_4;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LadderError {
    #[error("ordinate {t} below the model anchor {anchor}")]
    BelowAnchor { t: f64, anchor: f64 },
    #[error("ordinate {t} beyond the model coverage {t_max}")]
    BeyondCoverage { t: f64, t_max: f64 },
    #[error("target {target} below phi1(anchor) = {phi_anchor}")]
    BelowRange { target: f64, phi_anchor: f64 },
    #[error("bracket failure inverting phi1 at {target}: {source}")]
    Bracket { target: f64, source: RootError },
    #[error("quadrature failure: {0}")]
    Quadrature(#[from] QuadError),
    #[error("evaluator failure: {0}")]
    SpecFun(#[from] SpecFunError),
    #[error("invalid segment [{a}, {b}]")]
    BadSegment { a: f64, b: f64 },
    #[error("segment start {a} is not pi L for an integer L >= {l0}", l0 = L0)]
    NotBaseSegment { a: f64 },
}

/// Normalization of the derivative denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OmegaVariant {
    /// omega(t) = ln t.
    LeadingLog,
    /// omega(t) = ln(t / 2 pi) + 1 + gamma, which matches the local mean of
    /// |zeta(1/2+it)|^2 up to a relative defect of (1 - gamma)/ln t, so the
    /// model reproduces the first-order gap growth of the reverse iteration.
    Calibrated,
}

/// A closed ordinate interval [a, b] on the critical line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SegmentInterval {
    pub a: f64,
    pub b: f64,
}

impl SegmentInterval {
    pub fn new(a: f64, b: f64) -> Result<Self, LadderError> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(LadderError::BadSegment { a, b });
        }
        Ok(SegmentInterval { a, b })
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    pub fn contains_open(&self, x: f64) -> bool {
        x > self.a && x < self.b
    }
}

/// Immutable model of phi1: once the checkpoint table is built, every
/// operation is read-only and safe for concurrent use.
#[derive(Debug, Clone)]
pub struct LadderModel {
    variant: OmegaVariant,
    anchor_t0: f64,
    quad_tol: f64,
    /// (t_i, phi1(t_i)) at spacing pi/4 from the anchor.
    checkpoints: Vec<(f64, f64)>,
}

impl LadderModel {
    /// Build a model covering ordinates up to `t_max` with default anchor 10
    /// and quadrature tolerance 1e-10.
    pub fn new(variant: OmegaVariant, t_max: f64) -> Result<Self, LadderError> {
        Self::with_params(variant, 10.0, 1e-10, t_max)
    }

    pub fn with_params(
        variant: OmegaVariant,
        anchor_t0: f64,
        quad_tol: f64,
        t_max: f64,
    ) -> Result<Self, LadderError> {
        assert!(anchor_t0 >= 10.0, "anchor must be >= 10");
        assert!(quad_tol > 0.0 && quad_tol <= 1e-6, "tolerance out of range");
        if t_max <= anchor_t0 || !t_max.is_finite() {
            return Err(LadderError::BadSegment {
                a: anchor_t0,
                b: t_max,
            });
        }
        // boundary calibration: t0 - phi1(t0) = (1 - gamma) t0 / ln t0
        let phi_anchor = anchor_t0 - (1.0 - EULER_GAMMA) * anchor_t0 / anchor_t0.ln();
        let n = ((t_max - anchor_t0) / CHECKPOINT_SPACING).ceil() as usize + 1;
        let mut checkpoints = Vec::with_capacity(n + 1);
        checkpoints.push((anchor_t0, phi_anchor));
        let mut model = LadderModel {
            variant,
            anchor_t0,
            quad_tol,
            checkpoints,
        };
        let mut acc = phi_anchor;
        for i in 1..=n {
            let a = anchor_t0 + (i - 1) as f64 * CHECKPOINT_SPACING;
            let b = anchor_t0 + i as f64 * CHECKPOINT_SPACING;
            acc += model.integrate_z2(a, b)?;
            model.checkpoints.push((b, acc));
        }
        Ok(model)
    }

    pub fn variant(&self) -> OmegaVariant {
        self.variant
    }

    pub fn anchor_t0(&self) -> f64 {
        self.anchor_t0
    }

    pub fn quad_tol(&self) -> f64 {
        self.quad_tol
    }

    /// Largest covered ordinate.
    pub fn t_max(&self) -> f64 {
        self.checkpoints.last().unwrap().0
    }

    /// omega(t); positive on the whole covered range.
    pub fn omega(&self, t: f64) -> Result<f64, LadderError> {
        if t < self.anchor_t0 {
            return Err(LadderError::BelowAnchor {
                t,
                anchor: self.anchor_t0,
            });
        }
        Ok(match self.variant {
            OmegaVariant::LeadingLog => t.ln(),
            OmegaVariant::Calibrated => (t / (2.0 * std::f64::consts::PI)).ln() + 1.0 + EULER_GAMMA,
        })
    }

    /// The model derivative |zeta(1/2+it)|^2 / omega(t); vanishes exactly at
    /// the critical-line zero ordinates.
    pub fn z_tilde_sq(&self, t: f64) -> Result<f64, LadderError> {
        let w = self.omega(t)?;
        Ok(specfun::eval_zeta_critical_sq(t)? / w)
    }

    fn z2_unchecked(&self, t: f64) -> f64 {
        // interior helper: inputs are already range-checked by callers
        let w = match self.variant {
            OmegaVariant::LeadingLog => t.ln(),
            OmegaVariant::Calibrated => (t / (2.0 * std::f64::consts::PI)).ln() + 1.0 + EULER_GAMMA,
        };
        specfun::eval_zeta_critical_sq(t).expect("ordinate validated by caller") / w
    }

    /// Integral of the derivative over [a, b], with forced subdivision at
    /// detected zero touches.
    fn integrate_z2(&self, a: f64, b: f64) -> Result<f64, LadderError> {
        let mut f = |t: f64| self.z2_unchecked(t);
        let seeds = quad::detect_dips(&mut f, a, b, 17, 1e-2);
        Ok(quad::integrate_seeded(&mut f, a, b, self.quad_tol, &seeds)?)
    }

    /// phi1(t) = phi1(anchor) + integral of the derivative, via the nearest
    /// checkpoint at or below t.
    pub fn phi1(&self, t: f64) -> Result<f64, LadderError> {
        if t < self.anchor_t0 {
            return Err(LadderError::BelowAnchor {
                t,
                anchor: self.anchor_t0,
            });
        }
        if t > self.t_max() + 1e-9 {
            return Err(LadderError::BeyondCoverage {
                t,
                t_max: self.t_max(),
            });
        }
        let idx =
            (((t - self.anchor_t0) / CHECKPOINT_SPACING) as usize).min(self.checkpoints.len() - 1);
        let (ct, cphi) = self.checkpoints[idx];
        if t == ct {
            return Ok(cphi);
        }
        if t > ct {
            Ok(cphi + self.integrate_z2(ct, t)?)
        } else {
            // only reachable through float edge cases at checkpoint boundaries
            Ok(cphi - self.integrate_z2(t, ct)?)
        }
    }

    /// Inverse of phi1: the unique x with phi1(x) = target (smallest solution
    /// if the derivative is flat at the root to within tolerance).
    pub fn phi1_inverse(&self, target: f64) -> Result<f64, LadderError> {
        let phi_anchor = self.checkpoints[0].1;
        if target < phi_anchor {
            return Err(LadderError::BelowRange { target, phi_anchor });
        }
        // bracket from the checkpoint table
        let idx = match self
            .checkpoints
            .binary_search_by(|(_, p)| p.partial_cmp(&target).unwrap())
        {
            Ok(i) => i,
            Err(i) => i,
        };
        if idx >= self.checkpoints.len() {
            return Err(LadderError::BeyondCoverage {
                t: target,
                t_max: self.t_max(),
            });
        }
        let lo = if idx == 0 {
            self.checkpoints[0].0
        } else {
            self.checkpoints[idx - 1].0
        };
        let hi = self.checkpoints[idx].0;
        let f = |x: f64| self.phi1(x).expect("bracket stays inside coverage") - target;
        let xtol = 1e-13 * hi.abs().max(1.0);
        let mut x = roots::brent(f, lo, hi, xtol)
            .map_err(|source| LadderError::Bracket { target, source })?;
        // flat-spot tie break (derivative vanishing at the root): take the
        // smallest solution. Expanding steps cross the flat region in
        // logarithmically many evaluations, then a bisection pass sharpens
        // the left edge.
        let atol = 1e-12 * target.abs().max(1.0);
        let meets =
            |x: f64| -> Result<bool, LadderError> { Ok((self.phi1(x)? - target).abs() <= atol) };
        let mut step = 16.0 * xtol;
        while x - step >= lo && meets(x - step)? {
            x -= step;
            step *= 2.0;
        }
        if step > 32.0 * xtol {
            // x meets the target, x - step does not (or hit the bracket edge)
            let mut bad = (x - step).max(lo);
            let mut good = x;
            while good - bad > 16.0 * xtol {
                let mid = 0.5 * (good + bad);
                if meets(mid)? {
                    good = mid;
                } else {
                    bad = mid;
                }
            }
            x = good;
        }
        Ok(x)
    }

    /// The reverse iterate of a segment: preimages of both endpoints.
    pub fn reverse_iterate(&self, seg: SegmentInterval) -> Result<SegmentInterval, LadderError> {
        let a = self.phi1_inverse(seg.a)?;
        let b = self.phi1_inverse(seg.b)?;
        SegmentInterval::new(a, b)
    }

    /// Gap between a base segment [pi L, pi L + U] (integer L >= L0) and its
    /// reverse iterate.
    pub fn rho_distance(&self, seg: SegmentInterval) -> Result<f64, LadderError> {
        let l = (seg.a / std::f64::consts::PI).round();
        if l < L0 as f64 || (seg.a - std::f64::consts::PI * l).abs() > 1e-6 {
            return Err(LadderError::NotBaseSegment { a: seg.a });
        }
        let rev = self.reverse_iterate(seg)?;
        Ok(rev.a - seg.b)
    }

    /// Integral of g(phi1(t)) * Z~^2(t) over [a, b]; the change-of-variables
    /// engine used by the hybrid constants. Callers pass g in terms of the
    /// base variable.
    pub fn integrate_pushforward<G: Fn(f64) -> f64>(
        &self,
        seg: SegmentInterval,
        g: G,
    ) -> Result<f64, LadderError> {
        let mut err: Option<LadderError> = None;
        let mut f = |t: f64| {
            if err.is_some() {
                return 0.0;
            }
            match self.phi1(t) {
                Ok(p) => g(p) * self.z2_unchecked(t),
                Err(e) => {
                    err = Some(e);
                    0.0
                }
            }
        };
        let seeds = quad::detect_dips(&mut f, seg.a, seg.b, 17, 1e-2);
        let v = quad::integrate_seeded(&mut f, seg.a, seg.b, self.quad_tol, &seeds)?;
        match err {
            Some(e) => Err(e),
            None => Ok(v),
        }
    }

    /// Integral of g(phi1(t)) (without the derivative weight) over [a, b].
    pub fn integrate_composed<G: Fn(f64) -> f64>(
        &self,
        seg: SegmentInterval,
        g: G,
    ) -> Result<f64, LadderError> {
        let mut err: Option<LadderError> = None;
        let mut f = |t: f64| {
            if err.is_some() {
                return 0.0;
            }
            match self.phi1(t) {
                Ok(p) => g(p),
                Err(e) => {
                    err = Some(e);
                    0.0
                }
            }
        };
        let v = quad::integrate(&mut f, seg.a, seg.b, self.quad_tol)?;
        match err {
            Some(e) => Err(e),
            None => Ok(v),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;
    use std::sync::OnceLock;

    fn model() -> &'static LadderModel {
        static M: OnceLock<LadderModel> = OnceLock::new();
        M.get_or_init(|| LadderModel::new(OmegaVariant::Calibrated, 420.0).unwrap())
    }

    #[test]
    fn omega_definitions() {
        let m = LadderModel::new(OmegaVariant::LeadingLog, 11.0).unwrap();
        // omega is a closed form; model coverage only limits phi1
        let t = std::f64::consts::E.powi(10);
        assert!((m.omega(t).unwrap() - 10.0).abs() < 1e-12);
        let c = LadderModel::new(OmegaVariant::Calibrated, 11.0).unwrap();
        let te = 2.0 * PI * std::f64::consts::E;
        assert!((c.omega(te).unwrap() - (2.0 + EULER_GAMMA)).abs() < 1e-12);
        // variants stay within 2.5 of each other over the desk range
        for &t in &[100.0f64, 1e3, 1e4, 1e5, 1e6] {
            let d = (t.ln() - ((t / (2.0 * PI)).ln() + 1.0 + EULER_GAMMA)).abs();
            assert!(d < 2.5);
        }
        assert!(m.omega(5.0).is_err());
    }

    #[test]
    fn derivative_vanishes_at_first_zero() {
        // reference ordinate: mpmath zetazero(1)
        let z = model().z_tilde_sq(14.134725141734695).unwrap();
        assert!((0.0..1e-12).contains(&z));
    }

    #[test]
    fn derivative_reference_value() {
        // |zeta(1/2+100i)|^2 (reference: mpmath) over omega(100)
        let m = model();
        let want = 7.250617438969464 / ((100.0 / (2.0 * PI)).ln() + 1.0 + EULER_GAMMA);
        assert!((m.z_tilde_sq(100.0).unwrap() - want).abs() < 1e-8 * want);
    }

    #[test]
    fn anchor_calibration_and_monotonicity() {
        let m = model();
        let t0 = m.anchor_t0();
        let want = t0 - (1.0 - EULER_GAMMA) * t0 / t0.ln();
        assert_eq!(m.phi1(t0).unwrap(), want);
        let mut prev = f64::MIN;
        let mut t = t0;
        while t < 400.0 {
            let p = m.phi1(t).unwrap();
            // strict: the derivative has only isolated zeros, so any grid
            // with spacing >= 0.5 sees strictly increasing values
            assert!(p > prev, "phi1 not strictly monotone at t={t}");
            assert!(t - p > 0.0, "t - phi1(t) must stay positive at t={t}");
            prev = p;
            t += 0.5;
        }
    }

    #[test]
    fn inverse_flat_spot_returns_smallest_solution() {
        // the derivative vanishes at the first critical-line zero ordinate;
        // targets hitting the flat spot must resolve to its left edge
        let m = model();
        let t_zero = 14.134725141734695;
        let target = m.phi1(t_zero).unwrap();
        let x = m.phi1_inverse(target).unwrap();
        assert!((m.phi1(x).unwrap() - target).abs() <= 1e-9 * target);
        assert!(
            x <= t_zero + 1e-6,
            "expected the smallest solution (left of the flat spot), got {x} vs {t_zero}"
        );
    }

    #[test]
    fn inverse_round_trip() {
        let m = model();
        let target = PI * 100.0;
        let x = m.phi1_inverse(target).unwrap();
        assert!(x > target, "reverse iterate must lie to the right");
        let back = m.phi1(x).unwrap();
        assert!((back - target).abs() <= 1e-9 * target);
    }

    #[test]
    fn reverse_iterate_brackets_base() {
        let m = model();
        let seg = SegmentInterval::new(PI * 100.0, PI * 100.0 + 1.0).unwrap();
        let rev = m.reverse_iterate(seg).unwrap();
        assert!(rev.a > seg.b, "components must be disconnected");
        let fa = m.phi1(rev.a).unwrap();
        let fb = m.phi1(rev.b).unwrap();
        assert!((fa - seg.a).abs() <= 1e-9 * seg.a);
        assert!((fb - seg.b).abs() <= 1e-9 * seg.b);
        // fundamental theorem: integral of the derivative over the reverse
        // iterate equals the base length
        let len = m.integrate_pushforward(rev, |_| 1.0).unwrap();
        assert!((len - seg.length()).abs() < 1e-7 * seg.length().max(1.0));
    }

    #[test]
    fn rho_positive_and_segment_guard() {
        let m = model();
        let seg = SegmentInterval::new(PI * 100.0, PI * 100.0 + 0.8).unwrap();
        let rho = m.rho_distance(seg).unwrap();
        assert!(rho > 0.0);
        let bad = SegmentInterval::new(100.0, 101.0).unwrap();
        assert!(matches!(
            m.rho_distance(bad),
            Err(LadderError::NotBaseSegment { .. })
        ));
    }

    #[test]
    fn change_of_variables_identity() {
        // integral over the reverse iterate of g(phi1) Z~^2 equals the
        // integral of g over the base segment
        let m = model();
        let seg = SegmentInterval::new(PI * 100.0, PI * 100.0 + 1.2).unwrap();
        let rev = m.reverse_iterate(seg).unwrap();
        for (g, exact) in [
            (
                Box::new(|_u: f64| 1.0) as Box<dyn Fn(f64) -> f64>,
                seg.length(),
            ),
            (
                Box::new(|u: f64| u.sin().powi(2)) as Box<dyn Fn(f64) -> f64>,
                0.5 * seg.length() - 0.25 * ((2.0 * seg.b).sin() - (2.0 * seg.a).sin()),
            ),
        ] {
            let lhs = m.integrate_pushforward(rev, &*g).unwrap();
            assert!(
                (lhs - exact).abs() <= 1e-7 * exact.abs().max(1e-3),
                "change of variables violated: {lhs} vs {exact}"
            );
        }
    }

    #[test]
    fn coverage_errors() {
        let m = model();
        assert!(matches!(m.phi1(5.0), Err(LadderError::BelowAnchor { .. })));
        assert!(matches!(
            m.phi1(1e6),
            Err(LadderError::BeyondCoverage { .. })
        ));
        assert!(matches!(
            m.phi1_inverse(1.0),
            Err(LadderError::BelowRange { .. })
        ));
    }
}
