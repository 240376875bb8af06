use super::cone::{Cone2, ConeKind};
use super::halfplane::HalfPlane;
use super::profile::Profile;
use super::vec2::Vec2;
use crate::numeric::{bisect, convex_argmin, convex_sublevel, expand_root, golden_min, HORIZON};
use std::f64::consts::PI;

/// Invertible affine map `q -> M q + t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Affine {
    pub m: [[f64; 2]; 2],
    pub t: Vec2,
}

impl Affine {
    pub fn identity() -> Self {
        Affine { m: [[1.0, 0.0], [0.0, 1.0]], t: Vec2::zero() }
    }

    pub fn from_rows(r: [[f64; 3]; 2]) -> Self {
        Affine { m: [[r[0][0], r[0][1]], [r[1][0], r[1][1]]], t: Vec2::new(r[0][2], r[1][2]) }
    }

    pub fn to_rows(&self) -> [[f64; 3]; 2] {
        [[self.m[0][0], self.m[0][1], self.t.x], [self.m[1][0], self.m[1][1], self.t.y]]
    }

    pub fn lin(&self, d: Vec2) -> Vec2 {
        Vec2::new(self.m[0][0] * d.x + self.m[0][1] * d.y, self.m[1][0] * d.x + self.m[1][1] * d.y)
    }

    pub fn apply(&self, q: Vec2) -> Vec2 {
        self.lin(q) + self.t
    }

    /// `M^T n`
    pub fn lin_t(&self, n: Vec2) -> Vec2 {
        Vec2::new(self.m[0][0] * n.x + self.m[1][0] * n.y, self.m[0][1] * n.x + self.m[1][1] * n.y)
    }

    pub fn det(&self) -> f64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn inverse(&self) -> Option<Affine> {
        let d = self.det();
        if !(d.abs() > 1e-300) || !d.is_finite() {
            return None;
        }
        let m = [[self.m[1][1] / d, -self.m[0][1] / d], [-self.m[1][0] / d, self.m[0][0] / d]];
        let inv = Affine { m, t: Vec2::zero() };
        let t = -inv.lin(self.t);
        Some(Affine { m, t })
    }

    /// `M^T M`
    pub fn gram(&self) -> [[f64; 2]; 2] {
        let c0 = Vec2::new(self.m[0][0], self.m[1][0]);
        let c1 = Vec2::new(self.m[0][1], self.m[1][1]);
        [[c0.dot(c0), c0.dot(c1)], [c0.dot(c1), c1.dot(c1)]]
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &Affine) -> Affine {
        let c0 = self.lin(Vec2::new(other.m[0][0], other.m[1][0]));
        let c1 = self.lin(Vec2::new(other.m[0][1], other.m[1][1]));
        Affine { m: [[c0.x, c1.x], [c0.y, c1.y]], t: self.apply(other.t) }
    }

    /// Largest singular value of `M` (operator norm).
    pub fn sigma_max(&self) -> f64 {
        let g = self.gram();
        let tr = g[0][0] + g[1][1];
        let det = self.det().powi(2);
        let disc = ((tr * tr) / 4.0 - det).max(0.0).sqrt();
        (tr / 2.0 + disc).sqrt()
    }

    /// Whether `M` is a rotation or reflection times a positive scale.
    pub fn is_similarity(&self, tol: f64) -> bool {
        let g = self.gram();
        let s = 0.5 * (g[0][0] + g[1][1]);
        s > 0.0 && (g[0][0] - s).abs() <= tol * s && (g[1][1] - s).abs() <= tol * s && g[0][1].abs() <= tol * s
    }

    /// Smallest singular value of `M`.
    pub fn sigma_min(&self) -> f64 {
        let g = self.gram();
        let tr = g[0][0] + g[1][1];
        let det = self.det().powi(2);
        let disc = ((tr * tr) / 4.0 - det).max(0.0).sqrt();
        let lo = tr / 2.0 - disc;
        if lo > 0.0 {
            lo.sqrt()
        } else {
            // cancellation: use det / sigma_max
            let hi = (tr / 2.0 + disc).sqrt();
            self.det().abs() / hi
        }
    }
}

/// Epigraph of a convex profile pushed forward by an affine map.
#[derive(Clone, Debug, PartialEq)]
pub struct Epigraph {
    pub profile: Profile,
    pub map: Affine,
    inv: Affine,
}

impl Epigraph {
    pub fn new(profile: Profile, map: Affine) -> Option<Self> {
        let inv = map.inverse()?;
        Some(Epigraph { profile, map, inv })
    }

    pub fn local(&self, p: Vec2) -> Vec2 {
        self.inv.apply(p)
    }

    pub fn point(&self, u: f64) -> Vec2 {
        self.map.apply(Vec2::new(u, self.profile.g(u)))
    }

    pub fn normal(&self, u: f64) -> Vec2 {
        self.inv.lin_t(Vec2::new(self.profile.dg(u), -1.0)).normalized()
    }

    /// Lower bound on the distance from `p` to the epigraph (0 inside), from the tangent
    /// line below `p`.
    pub fn distance_lower_bound(&self, p: Vec2) -> f64 {
        let q = self.local(p);
        let viol = self.profile.g(q.x) - q.y;
        if !(viol > 0.0) {
            return 0.0;
        }
        let n = self.inv.lin_t(Vec2::new(self.profile.dg(q.x), -1.0)).norm();
        viol / n
    }

    /// Roots of `u -> n . point(u) - c`.
    fn level_roots(&self, n: Vec2, c: f64) -> Vec<f64> {
        let ab = self.map.lin_t(n);
        let k = n.dot(self.map.t) - c;
        let (a, b) = (ab.x, ab.y);
        let g = &self.profile;
        if b == 0.0 {
            return if a != 0.0 { vec![-k / a] } else { vec![] };
        }
        let s = b.signum();
        let f = |u: f64| s * (a * u + b * g.g(u) + k);
        let df = |u: f64| s * (a + b * g.dg(u));
        match convex_sublevel(&f, &df, 0.0, 1.0) {
            None => vec![],
            Some((lo, hi)) => [lo, hi].into_iter().filter(|x| x.is_finite()).collect(),
        }
    }

    fn line_interval(&self, p0: Vec2, d: Vec2) -> Option<(f64, f64)> {
        let q0 = self.local(p0);
        let dq = self.inv.lin(d);
        let g = &self.profile;
        if dq.x == 0.0 {
            // vertical in local coordinates
            let gv = g.g(q0.x);
            return if dq.y > 0.0 {
                Some(((gv - q0.y) / dq.y, f64::INFINITY))
            } else if dq.y < 0.0 {
                Some((f64::NEG_INFINITY, (gv - q0.y) / dq.y))
            } else if q0.y >= gv {
                Some((f64::NEG_INFINITY, f64::INFINITY))
            } else {
                None
            };
        }
        let f = |s: f64| g.g(q0.x + s * dq.x) - (q0.y + s * dq.y);
        let df = |s: f64| g.dg(q0.x + s * dq.x) * dq.x - dq.y;
        convex_sublevel(&f, &df, 0.0, 1.0 / dq.norm().max(1e-300))
    }

    /// Nearest point of the epigraph to an exterior point `p`; returns `(point, u)`.
    fn project_exterior(&self, p: Vec2) -> (Vec2, f64) {
        let q = self.local(p);
        let gm = self.map.gram();
        let g = &self.profile;
        let phi = |u: f64| gm[1][0] * (u - q.x) + gm[1][1] * (g.g(u) - q.y);
        let dphi = |u: f64| gm[1][0] + gm[1][1] * g.dg(u);
        let w = |u: f64| {
            let r = Vec2::new(u - q.x, g.g(u) - q.y);
            let a = gm[0][0] * r.x + gm[0][1] * r.y;
            let b = gm[1][0] * r.x + gm[1][1] * r.y;
            a + g.dg(u) * b
        };
        let mut roots: Vec<f64> = Vec::new();
        match convex_sublevel(&phi, &dphi, q.x, 1.0) {
            None => roots.push(increasing_root(&w, q.x)),
            Some((a, b)) => {
                if a.is_finite() && w(a) >= 0.0 {
                    let x = expand_neg(&w, a);
                    if x.is_finite() {
                        roots.push(x);
                    }
                }
                if b.is_finite() && w(b) <= 0.0 {
                    let x = expand_root(&w, b, 1.0, 1.0);
                    if x.is_finite() {
                        roots.push(x);
                    }
                }
            }
        }
        // the vertical foot is always a feasible fallback
        roots.push(q.x);
        let mut best = (self.point(q.x), q.x);
        let mut bd = f64::INFINITY;
        for u in roots {
            if !u.is_finite() {
                continue;
            }
            let z = self.point(u);
            let d = z.dist(p);
            if d < bd {
                bd = d;
                best = (z, u);
            }
        }
        best
    }

    /// Range of local parameters whose boundary points can lie within `radius` of `center`.
    pub fn param_window(&self, center: Vec2, radius: f64) -> (f64, f64) {
        let q = self.local(center);
        let span = radius / self.map.sigma_min();
        (q.x - span, q.x + span)
    }
}

/// w(u) >= 0 at `a`, increasing: walk left until negative, then bisect.
fn expand_neg(w: &dyn Fn(f64) -> f64, a: f64) -> f64 {
    let neg = |u: f64| -w(u);
    // -w <= 0 at a; find where -w > 0 to the left
    expand_root(&neg, a, -1.0, 1.0)
}

/// Root of an increasing function on the whole line.
fn increasing_root(w: &dyn Fn(f64) -> f64, x0: f64) -> f64 {
    let v = w(x0);
    if v == 0.0 {
        return x0;
    }
    if v < 0.0 {
        expand_root(w, x0, 1.0, 1.0)
    } else {
        expand_neg(w, x0)
    }
}

/// The unbounded-or-not smooth part of a body boundary.
#[derive(Clone, Debug, PartialEq)]
pub enum Base {
    Disk { center: Vec2, radius: f64 },
    Epigraph(Epigraph),
}

impl Base {
    pub fn is_cyclic(&self) -> bool {
        matches!(self, Base::Disk { .. })
    }

    pub fn contains(&self, p: Vec2) -> bool {
        match self {
            Base::Disk { center, radius } => p.dist(*center) <= *radius,
            Base::Epigraph(e) => {
                let q = e.local(p);
                q.y >= e.profile.g(q.x)
            }
        }
    }

    pub fn point(&self, t: f64) -> Vec2 {
        match self {
            Base::Disk { center, radius } => *center + Vec2::from_angle(t) * *radius,
            Base::Epigraph(e) => e.point(t),
        }
    }

    pub fn normal(&self, t: f64) -> Vec2 {
        match self {
            Base::Disk { .. } => Vec2::from_angle(t),
            Base::Epigraph(e) => e.normal(t),
        }
    }

    /// A point of the interior.
    pub fn reference(&self) -> Vec2 {
        match self {
            Base::Disk { center, .. } => *center,
            Base::Epigraph(e) => e.map.apply(Vec2::new(0.0, e.profile.g(0.0) + 1.0)),
        }
    }

    /// Cheap lower bound on the distance to the base.
    pub fn distance_lower_bound(&self, p: Vec2) -> f64 {
        match self {
            Base::Disk { center, radius } => (p.dist(*center) - radius).max(0.0),
            Base::Epigraph(e) => e.distance_lower_bound(p),
        }
    }

    /// Parameters where the boundary curve meets the boundary line of `hp`.
    pub fn cut_roots(&self, hp: &HalfPlane) -> Vec<f64> {
        match self {
            Base::Disk { center, radius } => {
                let kappa = (hp.offset - hp.normal.dot(*center)) / radius;
                if kappa.abs() > 1.0 {
                    return vec![];
                }
                let th = hp.normal.angle();
                let a = kappa.acos();
                vec![wrap(th - a), wrap(th + a)]
            }
            Base::Epigraph(e) => e.level_roots(hp.normal, hp.offset),
        }
    }

    /// Parameter interval `{s : p0 + s d in base}`.
    pub fn line_interval(&self, p0: Vec2, d: Vec2) -> Option<(f64, f64)> {
        match self {
            Base::Disk { center, radius } => {
                let a = d.dot(d);
                let w = p0 - *center;
                let b = 2.0 * d.dot(w);
                let c = w.dot(w) - radius * radius;
                let disc = b * b - 4.0 * a * c;
                if disc < 0.0 || a == 0.0 {
                    return if a == 0.0 && c <= 0.0 {
                        Some((f64::NEG_INFINITY, f64::INFINITY))
                    } else {
                        None
                    };
                }
                let q = -0.5 * (b + b.signum() * disc.sqrt());
                if q == 0.0 {
                    return Some((0.0, 0.0));
                }
                let (s1, s2) = (q / a, c / q);
                Some((s1.min(s2), s1.max(s2)))
            }
            Base::Epigraph(e) => e.line_interval(p0, d),
        }
    }

    /// Nearest point of the base to `p` (which must lie outside the base).
    pub fn project_exterior(&self, p: Vec2) -> (Vec2, f64) {
        match self {
            Base::Disk { center, .. } => {
                let w = p - *center;
                let t = if w.norm() == 0.0 { 0.0 } else { w.angle() };
                (self.point(t), t)
            }
            Base::Epigraph(e) => e.project_exterior(p),
        }
    }

    /// Nearest point to `p` on the boundary arc `[t0, t1]`, searching only where the
    /// distance can be below `bound`. Returns `(t, point, distance)`.
    pub fn nearest_on_arc(&self, p: Vec2, t0: f64, t1: f64, bound: f64) -> (f64, Vec2, f64) {
        match self {
            Base::Disk { center, radius } => {
                let w = p - *center;
                let mut cands = vec![t0, t1];
                if w.norm() > 0.0 {
                    let th = w.angle();
                    let k = ((t0 - th) / (2.0 * PI)).ceil();
                    let th = th + 2.0 * PI * k;
                    if th <= t1 {
                        cands.push(th);
                    }
                } else {
                    return (t0, self.point(t0), *radius);
                }
                best_of(self, p, &cands)
            }
            Base::Epigraph(e) => {
                let q = e.local(p);
                let mut bound = bound;
                let foot = q.x.clamp(t0, t1);
                let fd = e.point(foot).dist(p);
                if !(bound < fd) {
                    bound = fd;
                }
                let span = bound / e.map.sigma_min() + 1e-12 * (1.0 + q.x.abs());
                let lo = t0.max(q.x - span);
                let hi = t1.min(q.x + span);
                if !(lo <= hi) {
                    return (foot, e.point(foot), fd);
                }
                let n = 96;
                let dist = |u: f64| e.point(u).dist(p);
                let mut vals: Vec<(f64, f64)> = (0..=n)
                    .map(|i| {
                        let u = lo + (hi - lo) * i as f64 / n as f64;
                        (u, dist(u))
                    })
                    .collect();
                vals.push((foot, fd));
                vals.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
                let mut best = (foot, fd);
                let m = vals.len();
                for i in 0..m {
                    let l = if i > 0 { vals[i - 1].1 } else { f64::INFINITY };
                    let r = if i + 1 < m { vals[i + 1].1 } else { f64::INFINITY };
                    if vals[i].1 <= l && vals[i].1 <= r {
                        let a = if i > 0 { vals[i - 1].0 } else { vals[i].0 };
                        let b = if i + 1 < m { vals[i + 1].0 } else { vals[i].0 };
                        let (u, d) = if b > a { golden_min(&dist, a, b, 120) } else { vals[i] };
                        let (u, d) = if vals[i].1 < d { vals[i] } else { (u, d) };
                        if d < best.1 {
                            best = (u, d);
                        }
                    }
                }
                (best.0, e.point(best.0), best.1)
            }
        }
    }

    /// Supremum of `n . point(t)` over `t in [t0, t1]` and a maximizer when attained.
    pub fn arc_support(&self, n: Vec2, t0: f64, t1: f64) -> (f64, Option<f64>) {
        match self {
            Base::Disk { center, radius } => {
                let th = n.angle();
                let k = ((t0 - th) / (2.0 * PI)).ceil();
                let th = th + 2.0 * PI * k;
                if th <= t1 {
                    return (n.dot(*center) + radius * n.norm(), Some(th));
                }
                let (a, b) = (n.dot(self.point(t0)), n.dot(self.point(t1)));
                if a >= b {
                    (a, Some(t0))
                } else {
                    (b, Some(t1))
                }
            }
            Base::Epigraph(e) => {
                let ab = e.map.lin_t(n);
                let k = n.dot(e.map.t);
                let g = &e.profile;
                let val = |u: f64| ab.x * u + if ab.y != 0.0 { ab.y * g.g(u) } else { 0.0 } + k;
                let at = |u: f64| -> (f64, Option<f64>) {
                    if u.is_finite() {
                        return (val(u), Some(u));
                    }
                    // limit at an infinite end: either it settles or it diverges
                    let near = val(u.signum() * 1e7);
                    let far = val(u.signum() * HORIZON * 0.1);
                    if !(far <= near + 1.0) {
                        (f64::INFINITY, None)
                    } else {
                        (far, None)
                    }
                };
                if ab.y < 0.0 {
                    // concave: maximize by the derivative of its negative
                    let dneg = |u: f64| -(ab.x + ab.y * g.dg(u));
                    let x0 = if t0.is_finite() && t1.is_finite() {
                        0.5 * (t0 + t1)
                    } else if t0.is_finite() {
                        t0
                    } else if t1.is_finite() {
                        t1
                    } else {
                        0.0
                    };
                    let m = convex_argmin(&dneg, x0, 1.0);
                    at(m.clamp(t0, t1))
                } else {
                    let (a, b) = (at(t0), at(t1));
                    if a.0 >= b.0 {
                        a
                    } else {
                        b
                    }
                }
            }
        }
    }

    /// Recession cone at the origin.
    pub fn recession(&self) -> Cone2 {
        let o = Vec2::zero();
        match self {
            Base::Disk { .. } => Cone2::point(o),
            Base::Epigraph(e) => {
                let lc = e.profile.local_recession();
                let [d0, d1] = lc.dirs;
                let (m0, m1) = (e.map.lin(d0), e.map.lin(d1));
                let pos = e.map.det() > 0.0;
                match lc.kind {
                    ConeKind::Ray => Cone2::ray(o, m0),
                    ConeKind::HalfPlane => Cone2::half_plane(o, if pos { m0 } else { -m0 }),
                    ConeKind::Sector => {
                        if pos {
                            Cone2::span(o, m0, m1)
                        } else {
                            Cone2::span(o, m1, m0)
                        }
                    }
                    _ => lc,
                }
            }
        }
    }

    /// Root-finding helper exposed for arcs: the parameter in `[a, b]` where
    /// `f(point(t))` changes sign, `f(point(a)) <= 0 < f(point(b))` or reversed.
    pub fn bisect_param(&self, f: &dyn Fn(Vec2) -> f64, a: f64, b: f64) -> f64 {
        let fa = f(self.point(a));
        let h = |t: f64| f(self.point(t));
        bisect(&h, a, b, !(fa > 0.0))
    }
}

fn best_of(base: &Base, p: Vec2, cands: &[f64]) -> (f64, Vec2, f64) {
    let mut best = (cands[0], base.point(cands[0]), f64::INFINITY);
    for &t in cands {
        let z = base.point(t);
        let d = z.dist(p);
        if d < best.2 {
            best = (t, z, d);
        }
    }
    best
}

pub fn wrap(t: f64) -> f64 {
    let r = t.rem_euclid(2.0 * PI);
    if r >= 2.0 * PI {
        0.0
    } else {
        r
    }
}
