//! Bracketed one-dimensional root finding: uniform-scan bracketing plus a
//! safeguarded Brent refinement.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RootError {
    #[error("no sign change found on [{a}, {b}] ({n} points scanned)")]
    BracketFailure { a: f64, b: f64, n: usize },
    #[error("root refinement did not converge on [{a}, {b}]")]
    NoConvergence { a: f64, b: f64 },
}

/// Brent's method on a bracketing interval [a, b] with f(a) f(b) <= 0.
/// `xtol` is the absolute x tolerance added to a relative machine term.
pub fn brent<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, xtol: f64) -> Result<f64, RootError> {
    let (mut a, mut b) = (a, b);
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa * fb > 0.0 {
        return Err(RootError::BracketFailure { a, b, n: 2 });
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb.abs() > fc.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // inverse quadratic / secant step
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 {
            d
        } else if xm > 0.0 {
            tol1
        } else {
            -tol1
        };
        fb = f(b);
        if (fb > 0.0) == (fc > 0.0) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
    }
    Err(RootError::NoConvergence { a, b })
}

/// Scan [a, b] on `n` uniform points left to right and refine the FIRST
/// bracketed sign change of `f`; returns the smallest root in scan order.
/// Points where `valid` is false (e.g. near a pole) break brackets.
pub fn first_root_scanned<F, V>(
    mut f: F,
    mut valid: V,
    a: f64,
    b: f64,
    n: usize,
    xtol: f64,
) -> Result<f64, RootError>
where
    F: FnMut(f64) -> f64,
    V: FnMut(f64) -> bool,
{
    assert!(n >= 2);
    let h = (b - a) / (n - 1) as f64;
    let mut prev: Option<(f64, f64)> = None;
    for i in 0..n {
        let x = a + i as f64 * h;
        if !valid(x) {
            prev = None;
            continue;
        }
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if let Some((px, pfx)) = prev {
            if pfx * fx < 0.0 {
                return brent(&mut f, px, x, xtol);
            }
        }
        prev = Some((x, fx));
    }
    Err(RootError::BracketFailure { a, b, n })
}
