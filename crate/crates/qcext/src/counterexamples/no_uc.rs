use super::monotone_tail_start;
use crate::geometry::{asymptotic_directions, rotundity_probe, Body2, HalfPlaneSpec, Vec2};
use crate::levelset::{tilde_f, FnKind, QCFunction};
use crate::numeric::bisect;
use crate::{Error, Result, Settings};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoUCCertificate {
    /// Point where `h` vanishes; interior to `C`.
    pub origin: [f64; 2],
    /// Unit normal of the functional `h(y) = h . (y - origin)`.
    pub h: [f64; 2],
    /// Unit-spaced boundary points `y_1, y_2, ...`.
    pub points: Vec<[f64; 2]>,
    /// `α_n = h(y_n)`.
    pub alphas: Vec<f64>,
    pub beta: f64,
    /// `H_{2k}` for `k = 1, 2, ...`.
    pub halfplanes: Vec<HalfPlaneSpec>,
    /// `gap_k = |y_{2k+1} + y_{2k-1} - 2 y_{2k}|` for `k = 1..k_max`.
    pub gaps: Vec<f64>,
    /// `α_{n+1} - α_n`.
    pub level_gaps: Vec<f64>,
}

impl NoUCCertificate {
    pub fn min_level_gap(&self) -> f64 {
        self.level_gaps.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Index (0-based into `gaps`) from which the gap table is non-increasing.
    pub fn gap_tail_start(&self) -> Option<usize> {
        monotone_tail_start(&self.gaps)
    }

    pub fn last_gap(&self) -> f64 {
        self.gaps.last().copied().unwrap_or(f64::NAN)
    }
}

/// Boundary point on the line `h = α`, on the side of `dir`.
fn branch(c: &Body2, origin: Vec2, h: Vec2, dir: Vec2, alpha: f64) -> Option<Vec2> {
    let p = origin + h * alpha;
    let (_, hi) = c.line_interval(p, dir)?;
    hi.is_finite().then(|| p + dir * hi)
}

/// A Lipschitz quasiconvex function on an unbounded rotund body without asymptotic
/// directions that has no uniformly continuous quasiconvex extension.
pub fn gen_no_uc(c: &Body2, settings: &Settings) -> Result<(QCFunction, NoUCCertificate)> {
    if c.is_bounded() {
        return Err(Error::Hypothesis("unbounded: body is bounded".into()));
    }
    if !rotundity_probe(c, settings).rotund {
        return Err(Error::Hypothesis("rotund: body has a flat boundary piece".into()));
    }
    if !asymptotic_directions(c, settings).is_empty() {
        return Err(Error::Hypothesis("no asymptotic direction: body has one".into()));
    }
    let origin = if c.interior_distance(Vec2::zero()) > settings.tol { Vec2::zero() } else { c.witness() };
    let v = c
        .recession_cone()
        .interior_dir()
        .ok_or_else(|| Error::Hypothesis("unbounded: recession cone is trivial".into()))?;
    let (lo, _) = c.line_interval(origin, v).ok_or_else(|| Error::Hypothesis("origin is not in the body".into()))?;
    if !lo.is_finite() {
        return Err(Error::Hypothesis("no asymptotic direction: body contains a line".into()));
    }
    let c0 = origin + v * lo;
    let (idx, t, _, _) = c.nearest_boundary(c0);
    let h = -c.piece_normal(&c.pieces()[idx], t).normalized();
    let dir = -h.perp();
    let gamma = |a: f64| branch(c, origin, h, dir, a);
    let missing = || Error::Hypothesis("no asymptotic direction: boundary branch ends".into());

    let n_points = 2 * settings.k_max.max(1) + 2;
    let mut alphas = vec![0.0];
    let mut points = vec![gamma(0.0).ok_or_else(missing)?];
    while points.len() < n_points {
        let (a, y) = (*alphas.last().unwrap(), *points.last().unwrap());
        let dist = |x: f64| gamma(x).map_or(f64::NAN, |p| p.dist(y) - 1.0);
        if !(dist(a + 1.0) >= 0.0) {
            return Err(missing());
        }
        let next = bisect(&dist, a, a + 1.0, true);
        alphas.push(next);
        points.push(gamma(next).ok_or_else(missing)?);
    }

    // smallest local ratio dα / |dΓ| along the computed stretch
    let top = *alphas.last().unwrap();
    let samples = 4096;
    let mut beta = f64::INFINITY;
    for i in 0..=samples {
        let a = top * i as f64 / samples as f64;
        let d = 1e-6 * (1.0 + a);
        if let (Some(p), Some(q)) = (gamma(a), gamma(a + d)) {
            beta = beta.min(d / p.dist(q));
        }
    }

    let f = tilde_f(c, h, origin, &points, Some(beta))?;
    let FnKind::TildeF(t) = f.kind() else { unreachable!("tilde_f builds a TildeF") };
    let halfplanes = t.halfplanes().iter().skip(1).step_by(2).map(Into::into).collect();
    let alphas = t.alphas().to_vec();
    let gaps = (1..=settings.k_max.max(1))
        .map(|k| (points[2 * k] + points[2 * k - 2] - points[2 * k - 1] * 2.0).norm())
        .collect();
    let cert = NoUCCertificate {
        origin: origin.into(),
        h: h.into(),
        points: points.iter().map(|p| (*p).into()).collect(),
        level_gaps: alphas.windows(2).map(|w| w[1] - w[0]).collect(),
        alphas,
        beta,
        halfplanes,
        gaps,
    };
    Ok((f, cert))
}
