//! Complex evaluation of the four functions whose moduli are matched to the
//! hybrid-formula constants: the Riemann zeta function, the gamma function,
//! the Jacobi elliptic cn and the Bessel function of the first kind.
//!
//! All evaluators are plain `f64`/`Complex64` routines with documented
//! validated ranges; arguments outside those ranges are rejected rather than
//! silently degraded. Accuracy was referenced against a multi-precision
//! oracle (see `tests/data/oracle.json`).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

mod bessel;
mod gamma;
mod jacobi;
mod zeta;

pub use bessel::eval_bessel_j;
pub use gamma::eval_gamma;
pub use jacobi::{eval_cn, eval_sn, quarter_periods};
pub use zeta::{eval_zeta, eval_zeta_critical_sq};

pub type Complex = Complex64;

/// serde adapter storing a complex number as `[re, im]`.
pub mod complex_pair {
    use super::Complex;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex::new(re, im))
    }
}

/// Which of the four functions a locus or equation factor refers to.
/// `k_sq` is the squared modulus of cn (strictly inside (0,1)); `p` is the
/// integer Bessel order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "func", rename_all = "snake_case")]
pub enum FunctionTag {
    Zeta,
    Gamma,
    JacobiCn { k_sq: f64 },
    BesselJ { p: i32 },
}

impl FunctionTag {
    /// Short symbol used in CSV output and reports.
    pub fn symbol(&self) -> &'static str {
        match self {
            FunctionTag::Zeta => "zeta",
            FunctionTag::Gamma => "gamma",
            FunctionTag::JacobiCn { .. } => "cn",
            FunctionTag::BesselJ { .. } => "besselj",
        }
    }

    /// Discriminant ignoring parameters, for structural comparisons.
    pub fn kind(&self) -> u8 {
        match self {
            FunctionTag::Zeta => 0,
            FunctionTag::Gamma => 1,
            FunctionTag::JacobiCn { .. } => 2,
            FunctionTag::BesselJ { .. } => 3,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecFunError {
    #[error("pole of {func} at ({}, {})", point.re, point.im)]
    Pole { func: &'static str, point: Complex },
    #[error("{func} overflows at ({}, {})", point.re, point.im)]
    Overflow { func: &'static str, point: Complex },
    #[error("argument within {radius:e} of a pole of {func}")]
    PoleProximity { func: &'static str, radius: f64 },
    #[error("{func}: {what} outside validated range")]
    Domain {
        func: &'static str,
        what: &'static str,
    },
}

pub type SpecFunResult<T> = Result<T, SpecFunError>;

/// |F(n s)| for the tagged function; the uniform dispatcher behind every
/// locus target and equation factor.
pub fn eval_abs(tag: FunctionTag, n: u32, s: Complex) -> SpecFunResult<f64> {
    debug_assert!(n >= 1);
    let w = Complex::new(n as f64 * s.re, n as f64 * s.im);
    let v = match tag {
        FunctionTag::Zeta => eval_zeta(w)?.norm(),
        FunctionTag::Gamma => eval_gamma(w)?.norm(),
        FunctionTag::JacobiCn { k_sq } => eval_cn(w, k_sq)?.norm(),
        FunctionTag::BesselJ { p } => eval_bessel_j(p, w)?.norm(),
    };
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn dispatcher_classical_values() {
        assert!(
            (eval_abs(FunctionTag::Gamma, 1, Complex::new(1.0, 0.0)).unwrap() - 1.0).abs() < 1e-14
        );
        assert!(
            (eval_abs(FunctionTag::BesselJ { p: 0 }, 2, Complex::new(0.0, 0.0)).unwrap() - 1.0)
                .abs()
                < 1e-14
        );
        let z2 = eval_abs(FunctionTag::Zeta, 1, Complex::new(2.0, 0.0)).unwrap();
        assert!((z2 - PI * PI / 6.0).abs() < 1e-12);
    }

    #[test]
    fn dispatcher_propagates_pole() {
        let e = eval_abs(FunctionTag::Zeta, 2, Complex::new(0.5, 0.0));
        assert!(matches!(e, Err(SpecFunError::Pole { .. })));
    }

    #[test]
    fn conjugate_symmetry_all_four() {
        // F(conj s) = conj F(s) for real parameters
        let pts = [
            Complex::new(1.3, 0.7),
            Complex::new(2.2, -1.4),
            Complex::new(0.4, 2.0),
        ];
        for s in pts {
            let c = s.conj();
            let z1 = eval_zeta(s).unwrap();
            assert!((eval_zeta(c).unwrap() - z1.conj()).norm() <= 1e-12 * z1.norm());
            let g1 = eval_gamma(s).unwrap();
            assert!((eval_gamma(c).unwrap() - g1.conj()).norm() <= 1e-12 * g1.norm());
            let b1 = eval_bessel_j(1, s).unwrap();
            assert!((eval_bessel_j(1, c).unwrap() - b1.conj()).norm() <= 1e-12 * b1.norm());
            let j1 = eval_cn(s, 0.5).unwrap();
            assert!((eval_cn(c, 0.5).unwrap() - j1.conj()).norm() <= 1e-12 * j1.norm());
        }
    }
}
