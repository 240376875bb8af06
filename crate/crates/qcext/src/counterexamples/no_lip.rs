use super::{monotone_tail_start, ProjectionMap};
use crate::geometry::{Affine, Body2, HalfPlane, HalfPlaneSpec, Vec2};
use crate::levelset::{compose_projection, staircase_qc_capped, QCFunction};
use crate::{Error, Result, Settings};
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Line `v = intercept + slope * u` in frame coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameLine {
    pub intercept: f64,
    pub slope: f64,
}

impl FrameLine {
    fn halfplane(&self) -> HalfPlane {
        // slope * u - v <= -intercept
        HalfPlane::new(Vec2::new(self.slope, -1.0), -self.intercept)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoLipCertificate {
    /// Outward normal of the chosen supporting line of `E`.
    pub normal: [f64; 2],
    /// World to frame map as rows `[a, b, c]`; the frame puts `C` in `{v ≥ 0}` with
    /// `(0, 0)` on the boundary and `(0, 1)` inside.
    pub frame: [[f64; 3]; 2],
    /// Length scale of the frame; Lipschitz bounds in world units are `scale * K_k`.
    pub scale: f64,
    pub projection: ProjectionMap,
    pub eps: f64,
    pub theta: f64,
    /// `(z, g(z))` at `z = ε / 2^k`, `k = 0..=k_max + 1`.
    pub profile: Vec<[f64; 2]>,
    /// `δ(ε / 2^k)` with `δ(z) = g(z)/2 - g(z/2)`.
    pub delta: Vec<f64>,
    /// `α_k = 4^{-k}`, `k = 0..=k_max + 1`.
    pub alphas: Vec<f64>,
    /// Staircase levels `β_k`.
    pub levels: Vec<f64>,
    /// The two cuts that carve `D_k` out of `C`.
    pub bodies: Vec<Vec<HalfPlaneSpec>>,
    /// `l_k`, `k = 0..=k_max + 1`.
    pub lines: Vec<FrameLine>,
    pub p: Vec<[f64; 2]>,
    pub q: Vec<[f64; 2]>,
    /// `d(Q_k, P_k) = 2δ(ε/2^k) + α_{k+1}`.
    pub pq_dist: Vec<f64>,
    /// Measured `d(l_{k+1}, D_k)`.
    pub line_dist: Vec<f64>,
    /// `K_k = θε / (2^{k+3} (2δ(ε/2^k) + α_{k+1}))`.
    pub k_bound: Vec<f64>,
    /// `2^k (2δ(ε/2^k) + α_{k+1})`.
    pub product: Vec<f64>,
}

impl NoLipCertificate {
    /// Whether `K_k` increases strictly on `lo..=hi`.
    pub fn k_increasing(&self, lo: usize, hi: usize) -> bool {
        (lo..hi).all(|k| self.k_bound[k + 1] > self.k_bound[k])
    }

    pub fn k_ratio(&self, k: usize) -> f64 {
        self.k_bound[k + 1] / self.k_bound[k]
    }

    pub fn product_tail_start(&self) -> Option<usize> {
        monotone_tail_start(&self.product)
    }

    /// `d(l_{k+1}, D_k) ≤ d(Q_k, P_k)` on every row, up to `tol`.
    pub fn line_bound_holds(&self, tol: f64) -> bool {
        self.line_dist.iter().zip(&self.pq_dist).all(|(l, q)| *l <= q + tol)
    }
}

/// `s(θ_{i-1}) + s(θ_{i+1}) - 2 cos Δ s(θ_i)` for the support function `s`, the discrete
/// radius of curvature at a normal; infinite support on either side gives `None`.
fn curvature_gap(e: &Body2, n: Vec2, step: f64) -> Option<f64> {
    let a = n.angle();
    let s = [a - step, a, a + step].map(|t| e.support(Vec2::from_angle(t)));
    s.iter().all(|v| v.is_finite()).then(|| s[0] + s[2] - 2.0 * step.cos() * s[1])
}

/// Supporting normal with the largest curvature gap over a 64-direction scan (plus the
/// cut normals), ties to the lowest angle from `+x`.
fn pick_normal(e: &Body2) -> Vec2 {
    let step = TAU / 64.0;
    let mut cands: Vec<Vec2> = (0..64).map(|i| Vec2::from_angle(step * i as f64)).collect();
    cands.extend(e.cuts().iter().map(|h| h.normal));
    let angle = |n: &Vec2| n.angle().rem_euclid(TAU);
    cands.sort_by(|a, b| angle(a).total_cmp(&angle(b)));
    let mut best: Option<(Vec2, f64)> = None;
    for n in &cands {
        let Some(g) = curvature_gap(e, *n, step) else { continue };
        match best {
            Some((_, b)) if g <= b + 1e-9 * b.abs().max(1e-300) => {}
            _ => best = Some((*n, g)),
        }
    }
    if let Some((n, _)) = best {
        return n;
    }
    if let Some(n) = cands.iter().find(|n| e.support(**n).is_finite()) {
        return *n;
    }
    let (idx, t, _, _) = e.nearest_boundary(e.witness());
    e.piece_normal(&e.pieces()[idx], t).normalized()
}

/// Distance between the line `l` and a convex body, from the support function.
fn line_body_distance(l: &HalfPlane, d: &Body2) -> f64 {
    let hi = d.support(l.normal);
    let lo = -d.support(-l.normal);
    if l.offset > hi {
        l.offset - hi
    } else if l.offset < lo {
        lo - l.offset
    } else {
        0.0
    }
}

/// A Lipschitz quasiconvex function on `E` with no Lipschitz quasiconvex extension, and
/// the table of lower bounds that any extension's Lipschitz constant must exceed.
pub fn gen_no_lip(e: &Body2, settings: &Settings) -> Result<(QCFunction, NoLipCertificate)> {
    let picked = pick_normal(e);
    let face = e.support_face(picked).ok_or_else(|| Error::Hypothesis("supporting line has no contact point".into()))?;
    let o = if face.bounded { face.midpoint() } else { face.a };
    // at a corner, the bisecting normal is the one whose reverse enters the body
    let n = match e.supporting_normals(o, 1e-9 * (1.0 + o.norm())) {
        Ok(arc) if !arc.is_singleton(1e-9) => Vec2::from_angle(arc.from.angle() + 0.5 * arc.opening()),
        _ => picked,
    };
    let scale = if e.interior_distance(o - n) > settings.tol {
        1.0
    } else {
        match e.line_interval(o, -n) {
            Some((_, hi)) if hi.is_finite() && hi > 0.0 => 2.0 / hi,
            Some((_, hi)) if hi > 0.0 => 1.0,
            _ => return Err(Error::Hypothesis("inward normal ray misses the interior".into())),
        }
    };
    let u = n.perp();
    let m = [[scale * u.x, scale * u.y], [-scale * n.x, -scale * n.y]];
    let lin = Affine { m, t: Vec2::zero() };
    let frame = Affine { m, t: -lin.lin(o) };
    let c = e.mapped(&frame)?;

    let g = |z: f64| -> Option<f64> {
        let (lo, _) = c.line_interval(Vec2::new(z, 0.0), Vec2::new(0.0, 1.0))?;
        lo.is_finite().then_some(lo.max(0.0))
    };
    let mut z_max = 0.0;
    for i in 1..=256 {
        let z = i as f64 / 256.0;
        match g(z) {
            Some(v) if v <= 1.0 => z_max = z,
            _ => break,
        }
    }
    if !(z_max > 0.0) {
        return Err(Error::Hypothesis("boundary is not a graph to the right of the contact point".into()));
    }
    let eps = 0.5 * z_max;
    let projection = ProjectionMap::identity();
    let theta = projection.theta;

    let k_max = settings.k_max.max(2);
    let zs: Vec<f64> = (0..=k_max + 2).map(|k| eps / 2f64.powi(k as i32)).collect();
    let gs: Vec<f64> = zs.iter().map(|&z| g(z).expect("g is defined on [0, ε]")).collect();
    let alphas: Vec<f64> = (0..=k_max + 1).map(|k| 0.25f64.powi(k as i32)).collect();
    let delta: Vec<f64> = (0..=k_max).map(|k| gs[k] / 2.0 - gs[k + 1]).collect();
    let lines: Vec<FrameLine> = (0..=k_max + 1)
        .map(|k| FrameLine { intercept: alphas[k], slope: (gs[k] - alphas[k]) / zs[k] })
        .collect();
    let cuts: Vec<Vec<HalfPlane>> = (0..=k_max)
        .map(|k| vec![HalfPlane::new(Vec2::new(-1.0, 0.0), -0.75 * zs[k]), lines[k].halfplane()])
        .collect();
    let bodies = cuts.iter().map(|h| c.cut(h)).collect::<Result<Vec<_>>>()?;

    let levels: Vec<f64> = (0..=k_max).map(|k| eps / 4.0 * (2.0 - 2f64.powi(1 - k as i32))).collect();
    let gaps: Vec<f64> = (0..k_max).map(|k| eps / 2f64.powi(k as i32 + 2)).collect();
    let stair = staircase_qc_capped(&c, &bodies, &levels, &gaps, Some(eps / 2.0), settings)?;
    let f = compose_projection(&stair, &frame, Some(e.clone()));

    let mut cert = NoLipCertificate {
        normal: n.into(),
        frame: frame.to_rows(),
        scale,
        projection,
        eps,
        theta,
        profile: zs.iter().zip(&gs).map(|(z, g)| [*z, *g]).collect(),
        delta,
        alphas,
        levels,
        bodies: cuts.iter().map(|hs| hs.iter().map(Into::into).collect()).collect(),
        lines,
        p: Vec::new(),
        q: Vec::new(),
        pq_dist: Vec::new(),
        line_dist: Vec::new(),
        k_bound: Vec::new(),
        product: Vec::new(),
    };
    for k in 0..=k_max {
        let z = zs[k];
        let d = 2.0 * cert.delta[k] + cert.alphas[k + 1];
        cert.p.push([z, gs[k]]);
        cert.q.push([z, 2.0 * gs[k + 1] - cert.alphas[k + 1]]);
        cert.pq_dist.push(d);
        cert.line_dist.push(line_body_distance(&cert.lines[k + 1].halfplane(), &bodies[k]));
        cert.k_bound.push(theta * eps / (2f64.powi(k as i32 + 3) * d));
        cert.product.push(2f64.powi(k as i32) * d);
    }
    Ok((f, cert))
}
