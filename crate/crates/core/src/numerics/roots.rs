//! Inversion of strictly increasing scalar functions.

use crate::error::{Error, Result};
use crate::numerics::Interval;

/// Maximum number of width doublings per side during bracket expansion.
pub const MAX_DOUBLINGS: u32 = 64;

/// Solves `g(x) = target` for strictly increasing `g`.
///
/// The starting bracket is widened geometrically (the step doubles each
/// time) on whichever side fails to straddle the target, then refined with
/// Brent's method. Returns once `|g(x) - target| <= tol` or the bracket has
/// shrunk to a few ulps; `tol = 0` therefore asks for full precision.
pub fn invert_monotone<G>(g: G, target: f64, bracket: Interval, tol: f64) -> Result<f64>
where
    G: Fn(f64) -> f64,
{
    if !target.is_finite() {
        return Err(Error::Domain(format!("target must be finite, got {target}")));
    }
    if !bracket.is_finite() {
        return Err(Error::Domain("initial bracket must be finite".into()));
    }
    let eval = |x: f64| -> Result<f64> {
        let v = g(x);
        if v.is_nan() {
            Err(Error::Domain(format!("monotone function returned NaN at {x}")))
        } else {
            Ok(v - target)
        }
    };

    let (mut lo, mut hi) = (bracket.lower, bracket.upper);
    let mut f_lo = eval(lo)?;
    let mut step = hi - lo;
    let mut doublings = 0;
    while f_lo > 0.0 {
        if doublings == MAX_DOUBLINGS {
            return Err(Error::Bracket { target, doublings });
        }
        hi = lo;
        lo -= step;
        step *= 2.0;
        doublings += 1;
        f_lo = eval(lo)?;
    }
    let mut f_hi = eval(hi)?;
    let mut step = hi - lo;
    let mut doublings = 0;
    while f_hi < 0.0 {
        if doublings == MAX_DOUBLINGS {
            return Err(Error::Bracket { target, doublings });
        }
        lo = hi;
        f_lo = f_hi;
        hi += step;
        step *= 2.0;
        doublings += 1;
        f_hi = eval(hi)?;
    }
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    brent(eval, lo, hi, f_lo, f_hi, tol)
}

fn brent<H>(h: H, a0: f64, b0: f64, fa0: f64, fb0: f64, ftol: f64) -> Result<f64>
where
    H: Fn(f64) -> Result<f64>,
{
    let (mut a, mut b, mut fa, mut fb) = (a0, b0, fa0, fb0);
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..500 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let xtol = 2.0 * f64::EPSILON * b.abs() + f64::MIN_POSITIVE;
        let m = 0.5 * (c - b);
        if fb == 0.0 || fb.abs() <= ftol || m.abs() <= xtol {
            return Ok(b);
        }
        if e.abs() >= xtol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (xtol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > xtol { d } else { xtol.copysign(m) };
        fb = h(b)?;
    }
    Ok(b)
}
