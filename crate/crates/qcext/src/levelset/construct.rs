use super::{FnKind, FunctionSpec, LevelFamily, QCFunction};
use crate::extension::relative_boundary;
use crate::geometry::base::Affine;
use crate::geometry::{BoundaryArc, Body2, HalfPlane, Piece, Vec2};
use crate::numeric::{convex_min_on, golden_min};
use crate::{Error, Result, Settings};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

/// Distance-ramp staircase over nested bodies `D_k` with levels `β_k` and gaps `s_k`.
#[derive(Clone, Debug)]
pub struct Staircase {
    ambient: Body2,
    bodies: Vec<Body2>,
    levels: Vec<f64>,
    gaps: Vec<f64>,
    residual: Option<f64>,
}

impl Staircase {
    pub fn bodies(&self) -> &[Body2] {
        &self.bodies
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn gaps(&self) -> &[f64] {
        &self.gaps
    }

    pub fn ambient(&self) -> &Body2 {
        &self.ambient
    }

    /// `β_k` on `D_k`; `β_k + d(x, D_k)` up to `β_{k+1}` on `D_{k+1} \ D_k`; past the last
    /// body the ramp continues, capped by the residual value when one is set.
    pub fn eval(&self, x: Vec2) -> f64 {
        let n = self.bodies.len();
        // closed membership up to rounding, so points on a shared boundary stay put
        let tol = 1e-12 * (1.0 + x.norm());
        let first = {
            let (mut lo, mut hi) = (0usize, n);
            while lo < hi {
                let mid = (lo + hi) / 2;
                if self.bodies[mid].contains(x, tol) {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            lo
        };
        if first == 0 {
            return self.levels[0];
        }
        let j = first - 1;
        let d = self.bodies[j].project(x).1;
        if first < n {
            (self.levels[j] + d).min(self.levels[first])
        } else {
            let v = self.levels[j] + d;
            self.residual.map_or(v, |r| v.min(r))
        }
    }

    pub fn to_spec(&self) -> FunctionSpec {
        FunctionSpec::Staircase {
            ambient: self.ambient.spec().clone(),
            bodies: self.bodies.iter().map(|b| b.spec().clone()).collect(),
            levels: self.levels.clone(),
            gaps: self.gaps.clone(),
            residual: self.residual,
        }
    }
}

/// Infimum of `d(p, target)` over the parts of `arc`, truncating unbounded parts at `reach`.
pub fn arc_distance_to_body(arc: &BoundaryArc, target: &Body2, reach: f64) -> f64 {
    let mut best = f64::INFINITY;
    for part in &arc.parts {
        let piece = arc.part_piece(part);
        let phi = |t: f64| target.project(arc.point(part, t)).1;
        let v = match piece {
            // distance to a convex set is convex along a line
            Piece::Seg { .. } => convex_min_on(&phi, part.t0, part.t1, 1.0).1,
            Piece::Arc { .. } => {
                let (mut a, mut b) = (part.t0, part.t1);
                if !a.is_finite() && !b.is_finite() {
                    a = -reach;
                    b = reach;
                } else if !a.is_finite() {
                    a = b - reach;
                } else if !b.is_finite() {
                    b = a + reach;
                }
                if a == b {
                    phi(a)
                } else {
                    let m = 128;
                    let ts: Vec<f64> = (0..=m).map(|i| a + (b - a) * i as f64 / m as f64).collect();
                    let vals: Vec<f64> = ts.iter().map(|&t| phi(t)).collect();
                    let i = (0..=m).min_by(|&i, &j| vals[i].partial_cmp(&vals[j]).unwrap()).unwrap();
                    let (lo, hi) = (ts[i.saturating_sub(1)], ts[(i + 1).min(m)]);
                    golden_min(&phi, lo, hi, 80).1.min(vals[i])
                }
            }
        };
        best = best.min(v);
    }
    best
}

/// `d(C \ D_{k+1}, D_k)` measured along the relative boundary of `D_{k+1}` in `C`.
pub fn gap_distance(inner: &Body2, outer: &Body2, ambient: &Body2, settings: &Settings) -> Result<f64> {
    let rb = relative_boundary(outer, ambient, settings)?;
    if rb.is_empty() {
        return Ok(f64::INFINITY);
    }
    let reach = settings.window_mult * ambient.inradius();
    Ok(arc_distance_to_body(&rb, inner, reach))
}

/// [`staircase_qc_capped`] without a residual cap.
pub fn staircase_qc(ambient: &Body2, bodies: &[Body2], levels: &[f64], gaps: &[f64], settings: &Settings) -> Result<QCFunction> {
    staircase_qc_capped(ambient, bodies, levels, gaps, None, settings)
}

/// 1-Lipschitz quasiconvex staircase with `[f ≤ β_k]_C = D_k`. Requires `D_k` nested,
/// `β_{k+1} - β_k = s_k > 0` and `d(C \ D_{k+1}, D_k) ≥ s_k` (checked numerically).
/// `residual` caps the value beyond the last body.
pub fn staircase_qc_capped(
    ambient: &Body2,
    bodies: &[Body2],
    levels: &[f64],
    gaps: &[f64],
    residual: Option<f64>,
    settings: &Settings,
) -> Result<QCFunction> {
    if bodies.is_empty() || bodies.len() != levels.len() || gaps.len() + 1 != bodies.len() {
        return Err(Error::Malformed("staircase needs K bodies, K levels and K-1 gaps".into()));
    }
    for (k, &s) in gaps.iter().enumerate() {
        let diff = levels[k + 1] - levels[k];
        if !(s > 0.0) || (diff - s).abs() > 1e-9 * s.abs().max(diff.abs()) + 1e-15 {
            return Err(Error::Malformed(format!("level step {k} must equal the positive gap {s}")));
        }
    }
    if let Some(r) = residual {
        if !(r >= levels[levels.len() - 1]) {
            return Err(Error::Malformed("residual value must not undercut the last level".into()));
        }
    }
    let fam = LevelFamily::new(ambient.clone(), levels.iter().copied().zip(bodies.iter().cloned()).collect())?;
    fam.check_nested(64, settings)?;
    for k in 0..gaps.len() {
        let measured = gap_distance(&bodies[k], &bodies[k + 1], ambient, settings)?;
        let required = gaps[k];
        if measured < required * (1.0 - 1e-9) - settings.tol {
            return Err(Error::GapViolation { index: k, measured, required });
        }
    }
    let st = Staircase {
        ambient: ambient.clone(),
        bodies: bodies.to_vec(),
        levels: levels.to_vec(),
        gaps: gaps.to_vec(),
        residual,
    };
    Ok(QCFunction::new(Some(ambient.clone()), FnKind::Staircase(Arc::new(st))).with_lipschitz(1.0))
}

/// The three-case function built from unit-spaced boundary points `y_1, y_2, ...` with
/// levels `α_n = h(y_n)` (`α_1 = 0`) and half-planes `H_n` bounded by the line through
/// `y_n, y_{n+1}` on the side of the origin.
#[derive(Clone, Debug)]
pub struct TildeF {
    domain: Body2,
    normal: Vec2,
    origin: Vec2,
    points: Vec<Vec2>,
    alphas: Vec<f64>,
    halfplanes: Vec<HalfPlane>,
    beta: f64,
}

impl TildeF {
    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn points(&self) -> &[Vec2] {
        &self.points
    }

    /// `H_n` for `n = 1..N-1` (index `n - 1`).
    pub fn halfplanes(&self) -> &[HalfPlane] {
        &self.halfplanes
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn h(&self, y: Vec2) -> f64 {
        self.normal.dot(y - self.origin)
    }

    /// Value past the last complete ramp-plateau pair.
    pub fn top(&self) -> f64 {
        let k = (self.points.len() - 1) / 2;
        self.alpha(2 * k + 1)
    }

    fn alpha(&self, n: usize) -> f64 {
        self.alphas[n - 1]
    }

    pub fn eval(&self, y: Vec2) -> f64 {
        let hv = self.h(y);
        if hv < 0.0 {
            return 0.0;
        }
        let kmax = (self.points.len() - 1) / 2;
        if hv >= self.alpha(2 * kmax + 1) {
            return self.top();
        }
        // largest k with α_{2k-1} ≤ h(y)
        let mut k = 1;
        while k < kmax && self.alpha(2 * k + 1) <= hv {
            k += 1;
        }
        let (a0, a1, a2) = (self.alpha(2 * k - 1), self.alpha(2 * k), self.alpha(2 * k + 1));
        if hv < a1 {
            a0 + (a2 - a0) * (hv - a0) / (a1 - a0)
        } else {
            a2 + self.halfplanes[2 * k - 1].value(y).max(0.0)
        }
    }

    pub fn to_spec(&self) -> FunctionSpec {
        FunctionSpec::TildeF {
            domain: self.domain.spec().clone(),
            h: self.normal.into(),
            origin: self.origin.into(),
            points: self.points.iter().map(|p| (*p).into()).collect(),
            beta: Some(self.beta),
        }
    }
}

/// Builds `tilde_f` on `domain` from the normal of `h`, the origin (where `h` vanishes and
/// which every `H_n` contains), and the points `y_n`. `beta` defaults to the smallest
/// sampled ratio `(α_{n+1} - α_n) / |y_{n+1} - y_n|`.
pub fn tilde_f(domain: &Body2, h: Vec2, origin: Vec2, points: &[Vec2], beta: Option<f64>) -> Result<QCFunction> {
    let bad = |m: &str| Err(Error::Malformed(m.to_string()));
    if points.len() < 3 {
        return bad("tilde_f needs at least three points");
    }
    if !(h.norm() > 0.0) || !h.is_finite() || !origin.is_finite() || points.iter().any(|p| !p.is_finite()) {
        return bad("tilde_f data must be finite with a nonzero normal");
    }
    let normal = h.normalized();
    let alphas: Vec<f64> = points.iter().map(|y| normal.dot(*y - origin)).collect();
    if alphas[0].abs() > 1e-9 * (1.0 + points[0].norm()) {
        return bad("the first point must satisfy h(y_1) = 0");
    }
    if alphas.windows(2).any(|w| !(w[0] < w[1])) {
        return bad("levels h(y_n) must increase strictly");
    }
    let mut halfplanes = Vec::new();
    for w in points.windows(2) {
        let d = w[1] - w[0];
        let mut n = d.perp();
        if n.dot(origin - w[0]) > 0.0 {
            n = -n;
        }
        let hp = HalfPlane::through(n, w[0]);
        if !(hp.value(origin) < 0.0) {
            return bad("the origin lies on a line through consecutive points");
        }
        halfplanes.push(hp);
    }
    let sampled = points
        .windows(2)
        .zip(alphas.windows(2))
        .map(|(p, a)| (a[1] - a[0]) / p[0].dist(p[1]))
        .fold(f64::INFINITY, f64::min);
    let beta = beta.unwrap_or(sampled);
    if !(beta > 0.0) {
        return bad("beta must be positive");
    }
    let t = TildeF { domain: domain.clone(), normal, origin, points: points.to_vec(), alphas, halfplanes, beta };
    Ok(QCFunction::new(Some(domain.clone()), FnKind::TildeF(Arc::new(t))).with_lipschitz(2.0 / beta))
}

/// `f ∘ P`. The Lipschitz constant, when known, is scaled by the operator norm of `P`.
pub fn compose_projection(f: &QCFunction, p: &Affine, domain: Option<Body2>) -> QCFunction {
    let mut g = QCFunction::new(domain, FnKind::Composed { inner: Box::new(f.clone()), map: *p });
    g.lipschitz = f.lipschitz.map(|l| l * p.sigma_max());
    g
}

/// Constant continuation of a function on the interval `[lo, hi]` of the first axis.
pub fn extend_line_constant(f: &QCFunction, lo: f64, hi: f64) -> Result<QCFunction> {
    if !(lo <= hi) {
        return Err(Error::Malformed("interval must be nonempty".into()));
    }
    let mut g = QCFunction::new(None, FnKind::LineConstant { inner: Box::new(f.clone()), lo, hi });
    g.lipschitz = f.lipschitz;
    Ok(g)
}

/// `F(x) = inf_{u ∈ C} f(u) + L |x - u|` for convex `L`-Lipschitz `f` on `C`, from boundary
/// and interior samples refined by a projected pattern search. Errors if a sampled spot
/// check finds `f` not convex or not `L`-Lipschitz.
pub fn mcshane_extend(f: &QCFunction, c: &Body2, l: f64, seed: u64, settings: &Settings) -> Result<QCFunction> {
    if !(l >= 0.0) {
        return Err(Error::Malformed("Lipschitz constant must be nonnegative".into()));
    }
    let (center, radius) = c.window(settings.sample_mult);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let interior = c.sample_interior(&mut rng, center, radius, 512);
    for _ in 0..256 {
        if interior.len() < 2 {
            break;
        }
        let x = interior[rng.gen_range(0..interior.len())];
        let y = interior[rng.gen_range(0..interior.len())];
        let (fx, fy) = (f.eval(x), f.eval(y));
        let slack = 1e-9 * (1.0 + fx.abs() + fy.abs());
        if (fx - fy).abs() > l * x.dist(y) * (1.0 + 1e-9) + slack {
            return Err(Error::Hypothesis(format!("f is not {l}-Lipschitz on the samples")));
        }
        if f.eval(x.lerp(y, 0.5)) > 0.5 * (fx + fy) + slack {
            return Err(Error::Hypothesis("f is not convex on the samples".into()));
        }
    }
    let mut samples: Vec<Vec2> = c.sample_boundary(center, radius, settings.resolution).iter().map(|b| b.p).collect();
    samples.extend(interior);
    let vals: Vec<f64> = samples.iter().map(|u| f.eval(*u)).collect();
    let (ff, cc) = (f.clone(), c.clone());
    let step0 = radius / 64.0;
    let eval = move |x: Vec2| -> f64 {
        if cc.inside(x) {
            return ff.eval(x);
        }
        let phi = |u: Vec2| ff.eval(u) + l * x.dist(u);
        let q = cc.project(x).0;
        let mut best = (q, phi(q));
        for (u, v) in samples.iter().zip(&vals) {
            let s = v + l * x.dist(*u);
            if s < best.1 {
                best = (*u, s);
            }
        }
        let mut step = step0.max(1e-3 * best.0.dist(x));
        for _ in 0..200 {
            let mut moved = false;
            for k in 0..8 {
                let cand = cc.project(best.0 + Vec2::from_angle(k as f64 * std::f64::consts::FRAC_PI_4) * step).0;
                let s = phi(cand);
                if s < best.1 {
                    best = (cand, s);
                    moved = true;
                }
            }
            if !moved {
                step *= 0.5;
                if step < 1e-13 * (1.0 + best.0.norm()) {
                    break;
                }
            }
        }
        best.1
    };
    Ok(QCFunction::from_closure("mcshane", None, eval).with_lipschitz(l))
}
