//! Bracketed root finding.

/// Bisects a sign change of `f` on `[lo, hi]` down to adjacent floats.
///
/// `f(lo)` and `f(hi)` must have opposite signs (or one of them be zero).
/// Returns the endpoint on the `lo` side of the final bracket.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let lo_sign = f(lo) < 0.0;
    for _ in 0..2200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Solves `f(x) = 0` for increasing `f` with `f(lo) < 0 < f(hi)`, using
/// Newton steps from `df` and falling back to bisection whenever a step
/// leaves the bracket. Stops when the step or the bracket is below
/// `xtol`. Returns `(root, iterations)`.
pub fn newton_bisect<F, D>(f: F, df: D, mut lo: f64, mut hi: f64, xtol: f64) -> (f64, u32)
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let mut x = 0.5 * (lo + hi);
    for it in 1..=200 {
        let fx = f(x);
        if fx == 0.0 {
            return (x, it);
        }
        if fx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let d = df(x);
        let newton = x - fx / d;
        let next = if d.is_finite() && d > 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        let step = (next - x).abs();
        x = next;
        if step <= xtol || (hi - lo) <= xtol {
            return (x, it);
        }
    }
    (x, 200)
}
