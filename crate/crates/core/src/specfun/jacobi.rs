//! Jacobi elliptic cn (and sn) for complex arguments via theta quotients,
//! with the nome from the arithmetic-geometric mean and lattice reduction of
//! the argument onto the fundamental cell.

use super::{Complex, SpecFunError, SpecFunResult};
use std::f64::consts::PI;

/// Rejection radius around the pole lattice of cn.
const POLE_RADIUS: f64 = 1e-8;

fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        let (an, bn) = (0.5 * (a + b), (a * b).sqrt());
        if (an - bn).abs() <= 4.0 * f64::EPSILON * an {
            return 0.5 * (an + bn);
        }
        a = an;
        b = bn;
    }
    0.5 * (a + b)
}

/// Quarter periods (K, K') for squared modulus k_sq in (0,1).
pub fn quarter_periods(k_sq: f64) -> SpecFunResult<(f64, f64)> {
    if !(k_sq > 0.0 && k_sq < 1.0) {
        return Err(SpecFunError::Domain {
            func: "cn",
            what: "squared modulus",
        });
    }
    let k = 0.5 * PI / agm(1.0, (1.0 - k_sq).sqrt());
    let kp = 0.5 * PI / agm(1.0, k_sq.sqrt());
    Ok((k, kp))
}

struct ThetaCtx {
    big_k: f64,
    big_kp: f64,
    q: f64,
    th2_0: f64,
    th3_0: f64,
    th4_0: f64,
}

fn theta_ctx(k_sq: f64) -> SpecFunResult<ThetaCtx> {
    let (big_k, big_kp) = quarter_periods(k_sq)?;
    let q = (-PI * big_kp / big_k).exp();
    // null values
    let mut th2_0 = 0.0;
    let mut th3_0 = 1.0;
    let mut th4_0 = 1.0;
    for n in 0..40 {
        let nf = n as f64;
        let t2 = q.powf((nf + 0.5) * (nf + 0.5));
        th2_0 += 2.0 * t2;
        if n >= 1 {
            let t = q.powf(nf * nf);
            th3_0 += 2.0 * t;
            th4_0 += 2.0 * if n % 2 == 1 { -t } else { t };
            if t < 1e-18 {
                break;
            }
        }
    }
    Ok(ThetaCtx {
        big_k,
        big_kp,
        q,
        th2_0,
        th3_0,
        th4_0,
    })
}

fn cos_c(z: Complex) -> Complex {
    Complex::new(z.re.cos() * z.im.cosh(), -z.re.sin() * z.im.sinh())
}

fn sin_c(z: Complex) -> Complex {
    Complex::new(z.re.sin() * z.im.cosh(), z.re.cos() * z.im.sinh())
}

fn theta2(z: Complex, q: f64) -> Complex {
    let mut acc = Complex::new(0.0, 0.0);
    for n in 0..40u32 {
        let nf = n as f64;
        let w = q.powf((nf + 0.5) * (nf + 0.5));
        if w == 0.0 {
            break;
        }
        let term = 2.0 * w * cos_c((2.0 * nf + 1.0) * z);
        acc += term;
        if n > 2 && term.norm_sqr() <= 1e-36 * acc.norm_sqr().max(1.0) {
            break;
        }
    }
    acc
}

fn theta1(z: Complex, q: f64) -> Complex {
    let mut acc = Complex::new(0.0, 0.0);
    for n in 0..40u32 {
        let nf = n as f64;
        let w = q.powf((nf + 0.5) * (nf + 0.5));
        if w == 0.0 {
            break;
        }
        let sign = if n % 2 == 1 { -1.0 } else { 1.0 };
        let term = 2.0 * sign * w * sin_c((2.0 * nf + 1.0) * z);
        acc += term;
        if n > 2 && term.norm_sqr() <= 1e-36 * acc.norm_sqr().max(1.0) {
            break;
        }
    }
    acc
}

fn theta34(z: Complex, q: f64) -> (Complex, Complex) {
    let mut t3 = Complex::new(1.0, 0.0);
    let mut t4 = Complex::new(1.0, 0.0);
    for n in 1..40u32 {
        let nf = n as f64;
        let w = q.powf(nf * nf);
        if w == 0.0 {
            break;
        }
        let term = 2.0 * w * cos_c(2.0 * nf * z);
        t3 += term;
        t4 += if n % 2 == 1 { -term } else { term };
        if n > 2 && term.norm_sqr() <= 1e-36 * t3.norm_sqr().max(1.0) {
            break;
        }
    }
    (t3, t4)
}

/// Reduce u by the period lattice (4K, 4iK') of cn.
fn reduce(u: Complex, big_k: f64, big_kp: f64) -> Complex {
    let mre = (u.re / (4.0 * big_k)).round();
    let mim = (u.im / (4.0 * big_kp)).round();
    Complex::new(u.re - 4.0 * big_k * mre, u.im - 4.0 * big_kp * mim)
}

/// Distance from the (reduced) argument to the pole lattice
/// { 2mK + (2n+1) i K' } of cn.
fn pole_distance(u: Complex, big_k: f64, big_kp: f64) -> f64 {
    let mut best = f64::MAX;
    let m0 = (u.re / (2.0 * big_k)).round() as i64;
    let n0 = ((u.im - big_kp) / (2.0 * big_kp)).round() as i64;
    for dm in -1..=1 {
        for dn in -1..=1 {
            let px = 2.0 * big_k * (m0 + dm) as f64;
            let py = big_kp * (2 * (n0 + dn) + 1) as f64;
            let d = ((u.re - px).powi(2) + (u.im - py).powi(2)).sqrt();
            best = best.min(d);
        }
    }
    best
}

/// cn(u, k) for complex u and squared modulus k_sq in (0,1).
///
/// Evaluated as (theta4(0)/theta2(0)) * theta2(v)/theta4(v) with
/// v = pi u / (2K); arguments are first reduced by the period lattice, so
/// accuracy is uniform across periods. Arguments within 1e-8 of a lattice
/// pole are rejected.
pub fn eval_cn(u: Complex, k_sq: f64) -> SpecFunResult<Complex> {
    if !u.re.is_finite() || !u.im.is_finite() {
        return Err(SpecFunError::Domain {
            func: "cn",
            what: "non-finite argument",
        });
    }
    if u.norm() > 1e8 {
        return Err(SpecFunError::Domain {
            func: "cn",
            what: "modulus of argument",
        });
    }
    let ctx = theta_ctx(k_sq)?;
    let ur = reduce(u, ctx.big_k, ctx.big_kp);
    if pole_distance(ur, ctx.big_k, ctx.big_kp) < POLE_RADIUS {
        return Err(SpecFunError::PoleProximity {
            func: "cn",
            radius: POLE_RADIUS,
        });
    }
    let v = ur * (0.5 * PI / ctx.big_k);
    let t2 = theta2(v, ctx.q);
    let (_t3, t4) = theta34(v, ctx.q);
    Ok((ctx.th4_0 / ctx.th2_0) * t2 / t4)
}

/// sn(u, k); same machinery, used for the cn^2 + sn^2 = 1 checks and exposed
/// alongside cn.
pub fn eval_sn(u: Complex, k_sq: f64) -> SpecFunResult<Complex> {
    if !u.re.is_finite() || !u.im.is_finite() {
        return Err(SpecFunError::Domain {
            func: "cn",
            what: "non-finite argument",
        });
    }
    if u.norm() > 1e8 {
        return Err(SpecFunError::Domain {
            func: "cn",
            what: "modulus of argument",
        });
    }
    let ctx = theta_ctx(k_sq)?;
    // sn has period 4K in re and 2iK' in im; the cn lattice reduction is a
    // sublattice to stay on, except sn(u + 4iK') = sn(u) holds as well.
    let ur = reduce(u, ctx.big_k, ctx.big_kp);
    if pole_distance(ur, ctx.big_k, ctx.big_kp) < POLE_RADIUS {
        return Err(SpecFunError::PoleProximity {
            func: "cn",
            radius: POLE_RADIUS,
        });
    }
    let v = ur * (0.5 * PI / ctx.big_k);
    let t1 = theta1(v, ctx.q);
    let (_t3, t4) = theta34(v, ctx.q);
    Ok((ctx.th3_0 / ctx.th2_0) * t1 / t4)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quarter_period_reference() {
        // reference: mpmath ellipk(0.5)
        let (k, kp) = quarter_periods(0.5).unwrap();
        assert!((k - 1.8540746773013719).abs() < 1e-13);
        assert!((kp - 1.8540746773013719).abs() < 1e-13); // self-dual at k^2 = 1/2
    }

    #[test]
    fn cn_at_zero_is_one() {
        for k_sq in [0.2, 0.5, 0.8, 0.95] {
            let v = eval_cn(Complex::new(0.0, 0.0), k_sq).unwrap();
            assert!((v - Complex::new(1.0, 0.0)).norm() < 1e-13, "k_sq={k_sq}");
        }
    }

    #[test]
    fn cn_vanishes_at_quarter_period() {
        let (k, _) = quarter_periods(0.37).unwrap();
        let v = eval_cn(Complex::new(k, 0.0), 0.37).unwrap();
        assert!(v.norm() < 1e-12);
    }

    #[test]
    fn reference_complex_value() {
        // reference: mpmath ellipfun('cn', 0.7+0.3i, 0.5)
        let v = eval_cn(Complex::new(0.7, 0.3), 0.5).unwrap();
        let want = Complex::new(0.8023857348166064, -0.17276926419464717);
        assert!((v - want).norm() < 1e-12 * want.norm());
        // cn^2 + sn^2 = 1 at the same point
        let s = eval_sn(Complex::new(0.7, 0.3), 0.5).unwrap();
        assert!((v * v + s * s - Complex::new(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn pythagorean_identity_random() {
        let mut state = 0x1f83d9abfb41bd6bu64;
        let mut unit = || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let mut checked = 0;
        while checked < 100 {
            let k_sq = 0.05 + 0.9 * unit();
            let u = Complex::new(-6.0 + 12.0 * unit(), -3.0 + 6.0 * unit());
            let (cn, sn) = match (eval_cn(u, k_sq), eval_sn(u, k_sq)) {
                (Ok(c), Ok(s)) => (c, s),
                _ => continue, // pole proximity
            };
            let lhs = cn * cn + sn * sn;
            let scale = cn.norm_sqr().max(sn.norm_sqr()).max(1.0);
            assert!(
                (lhs - Complex::new(1.0, 0.0)).norm() <= 1e-10 * scale,
                "identity violated at u={u}, k_sq={k_sq}: {lhs}"
            );
            checked += 1;
        }
    }

    #[test]
    fn periodicity_and_pole_rejection() {
        let k_sq = 0.5;
        let (k, kp) = quarter_periods(k_sq).unwrap();
        let u = Complex::new(0.9, 0.2);
        let a = eval_cn(u, k_sq).unwrap();
        let b = eval_cn(u + Complex::new(4.0 * k, 4.0 * kp), k_sq).unwrap();
        assert!((a - b).norm() < 1e-11 * a.norm().max(1.0));
        assert!(matches!(
            eval_cn(Complex::new(0.0, kp), k_sq),
            Err(SpecFunError::PoleProximity { .. })
        ));
    }

    #[test]
    fn imaginary_transform_cross_check() {
        // cn(iy, k) = 1 / cn(y, k') with k'^2 = 1 - k^2
        let y = 0.62;
        let a = eval_cn(Complex::new(0.0, y), 0.3).unwrap();
        let b = eval_cn(Complex::new(y, 0.0), 0.7).unwrap();
        let prod = a * b;
        assert!((prod - Complex::new(1.0, 0.0)).norm() < 1e-11);
    }

    #[test]
    fn modulus_domain_rejected() {
        assert!(eval_cn(Complex::new(0.3, 0.0), 0.0).is_err());
        assert!(eval_cn(Complex::new(0.3, 0.0), 1.0).is_err());
    }
}
