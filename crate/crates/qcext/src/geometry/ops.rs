use super::arc::{ArcPart, BoundaryArc};
use super::body::Body2;
use super::cone::{Cone2, ConeKind};
use super::halfplane::HalfPlane;
use super::vec2::Vec2;
use crate::numeric::bisect;
use crate::{Error, Result, Settings};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Slope estimate of `t -> d(x0 + t v, C)` at infinity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeEstimate {
    pub slope: f64,
    /// The last two slope iterates.
    pub last: [f64; 2],
    /// Largest `t` used.
    pub t_max: f64,
}

/// Whether the ray `x0 + R+ v` meets the interior of `c`.
pub fn ray_meets_interior(c: &Body2, x0: Vec2, v: Vec2, tol: f64) -> bool {
    let Some((lo, hi)) = c.line_interval(x0, v) else { return false };
    let lo = lo.max(0.0);
    if !(hi >= lo) {
        return false;
    }
    let probes: Vec<f64> = if hi.is_finite() {
        vec![0.5 * (lo + hi), lo + 0.25 * (hi - lo), lo + 0.75 * (hi - lo)]
    } else {
        vec![lo + 1.0, lo + 1e3, lo + 1e6]
    };
    probes.iter().any(|&s| c.interior_distance(x0 + v * s) > tol)
}

/// `lim d(x0 + t v, C) / t` from slopes `(phi(2t) - phi(t)) / t` with `t` doubling from 1.
pub fn asymptotic_slope(x0: Vec2, v: Vec2, c: &Body2, settings: &Settings) -> Result<SlopeEstimate> {
    let v = v.normalized();
    if ray_meets_interior(c, x0, v, settings.tol) {
        return Err(Error::RayMeetsInterior);
    }
    let phi = |t: f64| c.project(x0 + v * t).1;
    let mut t = 1.0;
    let mut f_t = phi(t);
    let mut prev: Option<f64> = None;
    let mut last = [f64::NAN, f64::NAN];
    while t < (1u64 << 20) as f64 {
        let f2 = phi(2.0 * t);
        let s = (f2 - f_t) / t;
        last = [last[1], s];
        if let Some(p) = prev {
            let scale = s.abs().max(p.abs()).max(1e-300);
            if (s - p).abs() < settings.slope_rel * scale {
                t *= 2.0;
                break;
            }
        }
        prev = Some(s);
        f_t = f2;
        t *= 2.0;
    }
    Ok(SlopeEstimate { slope: last[1], last, t_max: t })
}

/// Tests whether `v` is an asymptotic direction; returns a base point of a witnessing ray.
pub fn is_asymptotic_direction(c: &Body2, v: Vec2, settings: &Settings) -> (bool, Option<Vec2>) {
    let v = v.normalized();
    if c.is_bounded() || !c.recession_cone().contains_dir(v, 1e-9) {
        return (false, None);
    }
    // the ray must lie on or outside a supporting line parallel to v
    for n in [v.perp(), -v.perp()] {
        let h = c.support(n);
        if !h.is_finite() {
            continue;
        }
        let w = c.witness();
        let x0 = w + n * (h - n.dot(w));
        if let Ok(est) = asymptotic_slope(x0, v, c, settings) {
            if est.slope.abs() < settings.slope_zero {
                return (true, Some(x0));
            }
        }
    }
    (false, None)
}

/// Candidate directions: only boundary directions of the recession cone can be asymptotic.
pub fn asymptotic_directions(c: &Body2, settings: &Settings) -> Vec<(Vec2, Vec2)> {
    let rec = c.recession_cone();
    let [d0, d1] = rec.dirs;
    let cands: Vec<Vec2> = match rec.kind {
        ConeKind::Point | ConeKind::Full => vec![],
        ConeKind::Ray => vec![d0],
        ConeKind::Sector | ConeKind::HalfPlane | ConeKind::Line => vec![d0, d1],
    };
    let mut out = Vec::new();
    for v in cands {
        if let (true, Some(x0)) = is_asymptotic_direction(c, v, settings) {
            out.push((v, x0));
        }
    }
    out
}

fn check_boundary(c: &Body2, x: Vec2, tol: f64) -> Result<()> {
    if c.inside(x) {
        if c.boundary_distance(x) > tol {
            return Err(Error::InteriorPoint);
        }
    } else {
        let d = c.project(x).1;
        if d > tol {
            return Err(Error::NotOnBoundary(d));
        }
    }
    Ok(())
}

/// Sampled modulus of local rotundity `inf d((x+y)/2, bd C)` over `y` in the boundary
/// with `|x - y| = eps`, from `2 n` angular samples of the circle around `x`.
pub fn delta_modulus(c: &Body2, x: Vec2, eps: f64, n: usize, tol: f64) -> Result<f64> {
    check_boundary(c, x, tol)?;
    let r = c.inradius();
    if !(eps >= 0.0 && eps < 2.0 * r) {
        return Err(Error::OutOfRange(format!("eps = {eps} must lie in [0, {})", 2.0 * r)));
    }
    if eps == 0.0 {
        return Ok(0.0);
    }
    for k in [2 * n.max(8), 8 * n.max(8)] {
        let at = |th: f64| x + Vec2::from_angle(th) * eps;
        let ins: Vec<bool> = (0..=k).map(|i| c.inside(at(2.0 * PI * i as f64 / k as f64))).collect();
        let mut best = f64::INFINITY;
        for i in 0..k {
            if ins[i] == ins[i + 1] {
                continue;
            }
            let (a, b) = (2.0 * PI * i as f64 / k as f64, 2.0 * PI * (i + 1) as f64 / k as f64);
            // positive outside
            let f = |th: f64| if c.inside(at(th)) { -1.0 } else { 1.0 };
            let th = bisect(&f, a, b, !ins[i + 1]);
            let y = at(th);
            let m = x.lerp(y, 0.5);
            let d = c.boundary_distance(m);
            best = best.min(d);
        }
        if best.is_finite() {
            return Ok(best.min(eps / 2.0));
        }
    }
    Err(Error::OutOfRange("no boundary point found at distance eps".into()))
}

/// Rotundity evidence for a body.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotundityProbe {
    /// Smallest sampled `delta(x, eps)`.
    pub min_delta: f64,
    pub eps: f64,
    /// Longest boundary segment (infinite for a boundary half-line).
    pub longest_segment: f64,
    pub rotund: bool,
}

/// Boundary segments of positive length as `(piece index, face)` endpoints.
pub fn boundary_segments(c: &Body2, min_len: f64) -> Vec<(usize, f64, f64)> {
    c.pieces()
        .iter()
        .enumerate()
        .filter_map(|(i, p)| {
            let (a, b) = p.range();
            (p.is_seg() && b - a > min_len).then_some((i, a, b))
        })
        .collect()
}

/// Samples `delta(x, r/2)` on a boundary net within the default window and looks for
/// boundary segments.
pub fn rotundity_probe(c: &Body2, settings: &Settings) -> RotundityProbe {
    let (center, rad) = c.window(settings.sample_mult);
    let eps = 0.5 * c.inradius();
    let net = c.sample_boundary(center, rad, 64);
    let mut min_delta = f64::INFINITY;
    for bp in &net {
        if let Ok(d) = delta_modulus(c, bp.p, eps, 64, settings.tol.max(1e-9)) {
            min_delta = min_delta.min(d);
        }
    }
    let longest = boundary_segments(c, settings.tol).iter().map(|(_, a, b)| b - a).fold(0.0, f64::max);
    RotundityProbe { min_delta, eps, longest_segment: longest, rotund: min_delta > settings.tol && longest == 0.0 }
}

/// `c(z, E)`, the closed cone generated by `E` from `z`.
pub fn cone_from(z: Vec2, e: &Body2, tol: f64) -> Result<Cone2> {
    if e.inside(z) {
        if e.boundary_distance(z) > tol {
            return Err(Error::InteriorPoint);
        }
        return Ok(k_cone_dirs(e, z, tol)?);
    }
    let (q, d) = e.project(z);
    if d <= tol {
        return Ok(k_cone_dirs(e, z, tol)?);
    }
    let (t0, t1) = tangent_dirs(z, e, q);
    Ok(Cone2::span(z, t0, t1))
}

fn k_cone_dirs(e: &Body2, x: Vec2, tol: f64) -> Result<Cone2> {
    let arc = e.supporting_normals(x, tol)?;
    let cones = [Cone2::half_plane(x, arc.from.perp()), Cone2::half_plane(x, arc.to.perp())];
    Ok(Cone2::intersect_all(x, &cones))
}

/// Clockwise-most and counterclockwise-most directions from an exterior `z` whose rays
/// meet `e`; `q` is the projection of `z`.
pub fn tangent_dirs(z: Vec2, e: &Body2, q: Vec2) -> (Vec2, Vec2) {
    let d0 = (q - z).normalized();
    let meets = |psi: f64| {
        let d = Vec2::new(d0.x * psi.cos() - d0.y * psi.sin(), d0.x * psi.sin() + d0.y * psi.cos());
        match e.line_interval(z, d) {
            Some((_, hi)) => hi >= 0.0,
            None => false,
        }
    };
    let edge = |sign: f64| {
        let (mut lo, mut hi) = (0.0, 0.5 * PI);
        for _ in 0..64 {
            let mid = 0.5 * (lo + hi);
            if meets(sign * mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let a = sign * lo;
        Vec2::new(d0.x * a.cos() - d0.y * a.sin(), d0.x * a.sin() + d0.y * a.cos())
    };
    (edge(-1.0), edge(1.0))
}

/// `Gamma_C(z)`: points of `C` on the two tangent lines from an exterior `z`.
pub fn gamma_set(z: Vec2, c: &Body2, tol: f64) -> Result<BoundaryArc> {
    if c.contains(z, tol) {
        return Err(Error::Hypothesis("z must lie outside C".into()));
    }
    let (q, _) = c.project(z);
    let (t0, t1) = tangent_dirs(z, c, q);
    let mut arc = BoundaryArc::empty(c.clone());
    for n in [-t0.perp(), t1.perp()] {
        let Some(face) = c.support_face(n) else { continue };
        arc.parts.extend(locate_face(c, face.a, face.b, n));
    }
    if arc.is_empty() {
        return Err(Error::Hypothesis("tangency set is empty (asymptotic direction?)".into()));
    }
    Ok(arc)
}

/// Boundary parts covering the face `[a, b]` with outward normal `n`.
fn locate_face(c: &Body2, a: Vec2, b: Vec2, n: Vec2) -> Vec<ArcPart> {
    if a.dist(b) > 1e-12 * (1.0 + a.norm()) {
        for (i, p) in c.pieces().iter().enumerate() {
            if let super::body::Piece::Seg { cut, .. } = *p {
                let h = &c.cuts()[cut];
                if h.normal.dot(n) > 1.0 - 1e-9 {
                    let (sa, sb) = (h.param_of(a), h.param_of(b));
                    return vec![ArcPart { piece: i, t0: sa.min(sb), t1: sa.max(sb) }];
                }
            }
        }
    }
    let (i, t, _, _) = c.nearest_boundary(a);
    vec![ArcPart { piece: i, t0: t, t1: t }]
}

/// Membership in `K(x, C)` given its half-planes.
pub fn in_halfplanes(hps: &[HalfPlane], p: Vec2, tol: f64) -> bool {
    hps.iter().all(|h| h.value(p) <= tol)
}
