use super::vec2::Vec2;
use crate::scalar::Real;
use serde::{Deserialize, Serialize};

/// The closed half-plane `{p : normal . p <= offset}` with a unit normal.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfPlane<T = f64> {
    pub normal: Vec2<T>,
    pub offset: T,
}

impl<T: Real> HalfPlane<T> {
    /// Normalizes `normal`; `offset` is rescaled with it.
    pub fn new(normal: Vec2<T>, offset: T) -> Self {
        let n = normal.norm();
        HalfPlane { normal: normal / n, offset: offset / n }
    }

    /// Half-plane with outward `normal` whose boundary passes through `p`.
    pub fn through(normal: Vec2<T>, p: Vec2<T>) -> Self {
        let n = normal.normalized();
        HalfPlane { normal: n, offset: n.dot(p) }
    }

    pub fn value(&self, p: Vec2<T>) -> T {
        self.normal.dot(p) - self.offset
    }

    pub fn contains(&self, p: Vec2<T>, tol: T) -> bool {
        self.value(p) <= tol
    }

    /// Foot of the perpendicular from the origin; origin of the boundary parametrization.
    pub fn anchor(&self) -> Vec2<T> {
        self.normal * self.offset
    }

    /// Boundary direction with the half-plane on the left.
    pub fn direction(&self) -> Vec2<T> {
        self.normal.perp()
    }

    pub fn point_at(&self, s: T) -> Vec2<T> {
        self.anchor() + self.direction() * s
    }

    pub fn param_of(&self, p: Vec2<T>) -> T {
        self.direction().dot(p)
    }

    pub fn translated(&self, by: Vec2<T>) -> Self {
        HalfPlane { normal: self.normal, offset: self.offset + self.normal.dot(by) }
    }
}

/// Portion of the boundary line of `hps[index]` lying in the intersection of all of `hps`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge<T = f64> {
    pub index: usize,
    pub s0: T,
    pub s1: T,
}

/// Clips the boundary line of `hp` by every half-plane in `others` (skipping `skip`).
/// Returns the parameter interval along `hp.point_at`, or `None` if empty.
pub fn clip_line<T: Real>(
    hp: &HalfPlane<T>,
    others: &[HalfPlane<T>],
    skip: Option<usize>,
    tol: T,
) -> Option<(T, T)> {
    let base = hp.anchor();
    let d = hp.direction();
    let mut lo = T::neg_infinity();
    let mut hi = T::infinity();
    for (j, o) in others.iter().enumerate() {
        if Some(j) == skip {
            continue;
        }
        let a = o.normal.dot(d);
        let b = o.offset - o.normal.dot(base);
        if a.abs() <= T::lit(1e-14) {
            if b < -tol {
                return None;
            }
            continue;
        }
        let s = b / a;
        if a > T::zero() {
            hi = hi.min(s);
        } else {
            lo = lo.max(s);
        }
        if lo > hi + tol {
            return None;
        }
    }
    if lo > hi {
        let m = (lo + hi) / T::lit(2.0);
        return Some((m, m));
    }
    Some((lo, hi))
}

/// Drops duplicate normals, keeping the tighter offset.
pub fn dedupe<T: Real>(hps: &[HalfPlane<T>]) -> Vec<HalfPlane<T>> {
    let mut v: Vec<HalfPlane<T>> = hps.to_vec();
    v.sort_by(|a, b| a.normal.angle().partial_cmp(&b.normal.angle()).unwrap());
    let mut out: Vec<HalfPlane<T>> = Vec::with_capacity(v.len());
    let eps = T::lit(1e-13);
    for h in v {
        if let Some(last) = out.last_mut() {
            if (last.normal - h.normal).norm() <= eps {
                if h.offset < last.offset {
                    *last = h;
                }
                continue;
            }
        }
        out.push(h);
    }
    if out.len() > 1 {
        let (first, last) = (out[0], out[out.len() - 1]);
        if (first.normal - last.normal).norm() <= eps {
            let keep = if first.offset <= last.offset { first } else { last };
            out[0] = keep;
            out.pop();
        }
    }
    out
}

/// Boundary edges of a half-plane intersection, one per irredundant half-plane.
/// Edges of length below `min_len` are dropped.
pub fn edges<T: Real>(hps: &[HalfPlane<T>], tol: T, min_len: T) -> Vec<Edge<T>> {
    let mut out = Vec::new();
    for (i, h) in hps.iter().enumerate() {
        if let Some((s0, s1)) = clip_line(h, hps, Some(i), tol) {
            if s1 - s0 > min_len {
                out.push(Edge { index: i, s0, s1 });
            }
        }
    }
    out
}

/// Irredundant subset of `hps` describing the same intersection (dedupes, then keeps
/// half-planes that contribute a boundary edge). Empty input or empty intersection
/// yields an empty list.
pub fn prune<T: Real>(hps: &[HalfPlane<T>], tol: T) -> Vec<HalfPlane<T>> {
    let d = dedupe(hps);
    let e = edges(&d, tol, tol);
    e.iter().map(|e| d[e.index]).collect()
}

/// Convex hull by the monotone chain; counterclockwise, no collinear points.
pub fn convex_hull<T: Real>(pts: &[Vec2<T>]) -> Vec<Vec2<T>> {
    let mut p: Vec<Vec2<T>> = pts.iter().copied().filter(|q| q.is_finite()).collect();
    p.sort_by(|a, b| a.x.partial_cmp(&b.x).unwrap().then(a.y.partial_cmp(&b.y).unwrap()));
    p.dedup();
    if p.len() < 3 {
        return p;
    }
    let mut h: Vec<Vec2<T>> = Vec::with_capacity(2 * p.len());
    for pass in 0..2 {
        let start = h.len();
        let iter: Box<dyn Iterator<Item = &Vec2<T>>> =
            if pass == 0 { Box::new(p.iter()) } else { Box::new(p.iter().rev()) };
        for &q in iter {
            while h.len() >= start + 2 {
                let a = h[h.len() - 2];
                let b = h[h.len() - 1];
                if (b - a).cross(q - a) <= T::zero() {
                    h.pop();
                } else {
                    break;
                }
            }
            h.push(q);
        }
        h.pop();
    }
    h
}

/// Whether `p` lies in the closed convex polygon with counterclockwise vertices `poly`.
pub fn polygon_contains<T: Real>(poly: &[Vec2<T>], p: Vec2<T>, tol: T) -> bool {
    let n = poly.len();
    if n < 3 {
        return false;
    }
    (0..n).all(|i| {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let e = b - a;
        e.cross(p - a) >= -tol * e.norm()
    })
}
