//! One-dimensional root and minimum finding used by the analytic body oracles.

/// Search horizon, in units of the caller's scale, beyond which a bracket is treated as infinite.
pub const HORIZON: f64 = 1e15;

/// Bisection for a sign change of `f` on `[lo, hi]`; `pos_at_hi` tells which end is positive.
pub fn bisect(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64, pos_at_hi: bool) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = f(mid);
        let pos = v > 0.0 || (v.is_nan() && pos_at_hi);
        if pos == pos_at_hi {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Minimizer of a convex function given its non-decreasing derivative `df`.
/// Returns `+-inf` when the function keeps decreasing past the horizon.
pub fn convex_argmin(df: &dyn Fn(f64) -> f64, x0: f64, scale: f64) -> f64 {
    let d0 = df(x0);
    if d0 == 0.0 {
        return x0;
    }
    let dir = if d0 < 0.0 { 1.0 } else { -1.0 };
    let mut prev = x0;
    let mut step = scale;
    loop {
        let x = x0 + dir * step;
        let d = df(x);
        // an exact zero far out is usually underflow, so only a strict sign change counts
        let crossed = if dir > 0.0 { d > 0.0 || d.is_nan() } else { d < 0.0 || d.is_nan() };
        if crossed {
            let (lo, hi) = if dir > 0.0 { (prev, x) } else { (x, prev) };
            return bisect(df, lo, hi, true);
        }
        prev = x;
        step *= 2.0;
        if step > HORIZON * scale {
            return dir * f64::INFINITY;
        }
    }
}

/// Walks from `from` (where `f <= 0`) in direction `dir` until `f > 0`, then bisects.
/// Returns `+-inf` if `f` stays non-positive up to the horizon.
pub fn expand_root(f: &dyn Fn(f64) -> f64, from: f64, dir: f64, scale: f64) -> f64 {
    let mut prev = from;
    let mut step = scale;
    loop {
        let x = from + dir * step;
        let v = f(x);
        if !(v <= 0.0) {
            let (lo, hi) = if dir > 0.0 { (prev, x) } else { (x, prev) };
            return bisect(f, lo, hi, dir > 0.0);
        }
        prev = x;
        step *= 2.0;
        if step > HORIZON * scale {
            return dir * f64::INFINITY;
        }
    }
}

/// The sublevel set `{f <= 0}` of a convex function as a closed interval with possibly
/// infinite ends, or `None` if empty.
pub fn convex_sublevel(
    f: &dyn Fn(f64) -> f64,
    df: &dyn Fn(f64) -> f64,
    x0: f64,
    scale: f64,
) -> Option<(f64, f64)> {
    let m = convex_argmin(df, x0, scale);
    let mf = if m.is_finite() { m } else { x0 + m.signum() * HORIZON * scale };
    if !(f(mf) <= 0.0) {
        return None;
    }
    // when the minimizer is at infinity, search from x0 so the horizon is not exhausted
    let end = |dir: f64| {
        if m == -dir * f64::INFINITY && !(f(x0) <= 0.0) {
            let (a, b) = if dir < 0.0 { (x0, mf) } else { (mf, x0) };
            bisect(f, a, b, dir > 0.0)
        } else {
            expand_root(f, if m.is_finite() { mf } else { x0 }, dir, scale)
        }
    };
    let lo = if m == f64::NEG_INFINITY { m } else { end(-1.0) };
    let hi = if m == f64::INFINITY { m } else { end(1.0) };
    Some((lo, hi))
}

/// Golden-section minimization of a unimodal function on `[a, b]`.
pub fn golden_min(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..iters {
        if (b - a).abs() <= 1e-15 * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Minimizes a convex function on `[a, b]` with possibly infinite ends by bracketing first.
pub fn convex_min_on(f: &dyn Fn(f64) -> f64, a: f64, b: f64, scale: f64) -> (f64, f64) {
    let (mut lo, mut hi) = (a, b);
    if !lo.is_finite() || !hi.is_finite() {
        let x0 = if lo.is_finite() {
            lo
        } else if hi.is_finite() {
            hi
        } else {
            0.0
        };
        let fx = f(x0);
        for dir in [-1.0, 1.0] {
            let bound = if dir < 0.0 { lo } else { hi };
            if bound.is_finite() {
                continue;
            }
            let mut step = scale;
            let mut best = fx;
            let mut x = x0;
            loop {
                let y = x0 + dir * step;
                let fy = f(y);
                if !(fy < best) || step > HORIZON * scale {
                    if dir < 0.0 {
                        lo = y;
                    } else {
                        hi = y;
                    }
                    break;
                }
                best = fy;
                x = y;
                step *= 2.0;
            }
            let _ = x;
        }
    }
    golden_min(f, lo, hi, 200)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sublevel_of_parabola() {
        let f = |x: f64| x * x - 4.0;
        let df = |x: f64| 2.0 * x;
        let (lo, hi) = convex_sublevel(&f, &df, 0.3, 1.0).unwrap();
        assert!((lo + 2.0).abs() < 1e-12 && (hi - 2.0).abs() < 1e-12);
        assert!(convex_sublevel(&|x: f64| x * x + 1.0, &df, 0.0, 1.0).is_none());
    }

    #[test]
    fn sublevel_unbounded() {
        let f = |x: f64| (-x).exp() - 1.0;
        let df = |x: f64| -(-x).exp();
        let (lo, hi) = convex_sublevel(&f, &df, 0.0, 1.0).unwrap();
        assert!(lo.abs() < 1e-12);
        assert_eq!(hi, f64::INFINITY);
    }

    #[test]
    fn golden_finds_minimum() {
        let (x, _) = convex_min_on(&|x: f64| (x - 3.5).powi(2), f64::NEG_INFINITY, f64::INFINITY, 1.0);
        assert!((x - 3.5).abs() < 1e-7);
    }
}
