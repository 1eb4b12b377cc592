//! Bracketing scan and bracketed refinement for scalar roots.

use crate::error::{Error, Result};

/// A sign change of `f` on `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

/// Scans `f` on a uniform grid of `points` cells over `(0, upper]` and returns
/// every cell whose endpoints differ in sign, in increasing order.
///
/// A cell whose midpoint has the opposite sign to both endpoints hides two
/// roots; that is reported as [`Error::DegenerateBracket`].
pub fn scan_brackets<F>(f: F, lower: f64, upper: f64, points: usize) -> Result<Vec<Bracket>>
where
    F: Fn(f64) -> f64,
{
    let step = (upper - lower) / points as f64;
    let mut out = Vec::new();
    let mut x_prev = lower + step;
    let mut f_prev = f(x_prev);
    for i in 2..=points {
        let x = lower + step * i as f64;
        let fx = f(x);
        if f_prev == 0.0 {
            out.push(Bracket {
                lo: x_prev,
                hi: x_prev,
                f_lo: 0.0,
                f_hi: 0.0,
            });
        } else if f_prev.signum() != fx.signum() && fx != 0.0 {
            out.push(Bracket {
                lo: x_prev,
                hi: x,
                f_lo: f_prev,
                f_hi: fx,
            });
        } else if fx != 0.0 {
            let mid = f(0.5 * (x_prev + x));
            if mid != 0.0 && mid.signum() != fx.signum() {
                return Err(Error::DegenerateBracket { k_lo: x_prev, k_hi: x });
            }
        }
        x_prev = x;
        f_prev = fx;
    }
    Ok(out)
}

/// Brent's method (inverse quadratic / secant steps safeguarded by bisection)
/// on a sign-changing bracket. Stops when the bracket is narrower than
/// `rel_tol * |x|`.
pub fn refine<F>(f: F, bracket: Bracket, rel_tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if bracket.f_lo == 0.0 {
        return Ok(bracket.lo);
    }
    if bracket.f_hi == 0.0 {
        return Ok(bracket.hi);
    }
    let (mut a, mut b) = (bracket.lo, bracket.hi);
    let (mut fa, mut fb) = (bracket.f_lo, bracket.f_hi);
    if fa.signum() == fb.signum() {
        return Err(Error::NotConverged {
            what: "root refinement",
            detail: format!("no sign change on [{a}, {b}]"),
        });
    }
    if fa.abs() < fb.abs() {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut bisected = true;
    for _ in 0..200 {
        let tol = rel_tol * b.abs().max(f64::MIN_POSITIVE) + f64::EPSILON * b.abs();
        if fb == 0.0 || (b - a).abs() <= tol {
            return Ok(b);
        }
        let mut s = if fa != fc && fb != fc {
            a * fb * fc / ((fa - fb) * (fa - fc))
                + b * fa * fc / ((fb - fa) * (fb - fc))
                + c * fa * fb / ((fc - fa) * (fc - fb))
        } else {
            b - fb * (b - a) / (fb - fa)
        };
        let lo = (3.0 * a + b) / 4.0;
        let outside = !((s > lo.min(b)) && (s < lo.max(b)));
        let slow = if bisected {
            (s - b).abs() >= (b - c).abs() / 2.0 || (b - c).abs() < tol
        } else {
            (s - b).abs() >= (c - d).abs() / 2.0 || (c - d).abs() < tol
        };
        if outside || slow {
            s = 0.5 * (a + b);
            bisected = true;
        } else {
            bisected = false;
        }
        let fs = f(s);
        d = c;
        c = b;
        fc = fb;
        if fa.signum() != fs.signum() {
            b = s;
            fb = fs;
        } else {
            a = s;
            fa = fs;
        }
        if fa.abs() < fb.abs() {
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut fa, &mut fb);
        }
    }
    Err(Error::NotConverged {
        what: "root refinement",
        detail: format!("bracket [{a}, {b}] after 200 iterations"),
    })
}

/// Bisection on a monotone predicate-free scalar function; used where the
/// caller only needs a bracketed crossing of a target value.
pub fn bisect<F>(f: F, mut lo: f64, mut hi: f64, abs_tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NotConverged {
            what: "bisection",
            detail: format!("target not bracketed on [{lo}, {hi}]"),
        });
    }
    while (hi - lo).abs() > abs_tol {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == f_lo.signum() {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
