//! The cone operator `e(B)` and the level-set extension `F` of a quasiconvex function.
//!
//! `e(B)` is the intersection of the supporting cones `K(y, B)` over the relative boundary
//! `∂_C B`; it meets `C` exactly in `B`. Extending every sublevel body of a family and
//! reading off the first extended body that contains a point gives `F`.

use crate::geometry::{asymptotic_directions, rotundity_probe, ArcPart, BoundaryArc, Body2, HalfPlane, Piece, Vec2};
use crate::geometry::halfplane::prune;
use crate::levelset::{LevelFamily, SENTINEL};
use crate::numeric::bisect;
use crate::{Error, Result, Settings};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::sync::{Arc, OnceLock};

fn same_halfplane(a: &HalfPlane, b: &HalfPlane) -> bool {
    a.normal.dot(b.normal) > 1.0 - 1e-14 && (a.offset - b.offset).abs() <= 1e-12 * (1.0 + a.offset.abs())
}

/// Sampled check of `B ⊆ C`, with an exact shortcut when `B` is `C` cut by extra half-planes.
fn check_subset(b: &Body2, c: &Body2, settings: &Settings) -> Result<()> {
    let same_base = b.base() == c.base();
    if same_base && c.cuts().iter().all(|h| b.cuts().iter().any(|g| same_halfplane(g, h))) {
        return Ok(());
    }
    let radius = settings.sample_mult * b.inradius().max(c.inradius());
    for bp in b.sample_boundary(b.witness(), radius, 256) {
        if !c.contains(bp.p, settings.tol.max(1e-9) * (1.0 + bp.p.norm())) {
            return Err(Error::Hypothesis("B is not contained in C".into()));
        }
    }
    Ok(())
}

/// `∂_C B`, the closure of `int C ∩ ∂B`, as parts of the boundary pieces of `B`.
pub fn relative_boundary(b: &Body2, c: &Body2, settings: &Settings) -> Result<BoundaryArc> {
    check_subset(b, c, settings)?;
    let tol = settings.tol;
    let mut arc = BoundaryArc::empty(b.clone());
    let reach = settings.window_mult * c.inradius().max(b.inradius());
    let interior = |p: Vec2| c.interior_distance(p) > tol * (1.0 + p.norm());
    for (i, piece) in b.pieces().iter().enumerate() {
        match *piece {
            Piece::Seg { cut, s0, s1 } => {
                let h = b.cuts()[cut];
                if c.cuts().iter().any(|g| same_halfplane(g, &h)) {
                    continue;
                }
                let Some((c0, c1)) = c.line_interval(h.anchor(), h.direction()) else { continue };
                let (lo, hi) = (s0.max(c0), s1.min(c1));
                if !(lo <= hi) {
                    continue;
                }
                let mid = match (lo.is_finite(), hi.is_finite()) {
                    (true, true) => 0.5 * (lo + hi),
                    // far enough out that the depth is not lost against |p|
                    (true, false) => lo + lo.abs().max(1.0),
                    (false, true) => hi - hi.abs().max(1.0),
                    (false, false) => h.param_of(c.witness()),
                };
                if interior(h.point_at(mid)) {
                    arc.parts.push(ArcPart { piece: i, t0: lo, t1: hi });
                }
            }
            Piece::Arc { t0, t1 } => {
                if b.base() == c.base() {
                    continue;
                }
                arc.parts.extend(interior_runs(b, i, t0, t1, reach, &interior));
            }
        }
    }
    Ok(arc)
}

/// Maximal runs of an arc piece whose points are interior to `C`, located by sampling and
/// bisection of the run ends. Ends that stay interior up to the reach remain infinite.
fn interior_runs(b: &Body2, i: usize, t0: f64, t1: f64, reach: f64, interior: &dyn Fn(Vec2) -> bool) -> Vec<ArcPart> {
    let piece = b.pieces()[i];
    let at = |t: f64| b.piece_point(&piece, t);
    let (a, z) = match (t0.is_finite(), t1.is_finite()) {
        (true, true) => (t0, t1),
        (true, false) => (t0, t0 + reach),
        (false, true) => (t1 - reach, t1),
        (false, false) => (-reach, reach),
    };
    let m = 256;
    let ts: Vec<f64> = (0..=m).map(|k| a + (z - a) * k as f64 / m as f64).collect();
    let inside: Vec<bool> = ts.iter().map(|&t| interior(at(t))).collect();
    let edge = |lo: f64, hi: f64, inside_at_hi: bool| {
        bisect(&|t: f64| if interior(at(t)) == inside_at_hi { 1.0 } else { -1.0 }, lo, hi, true)
    };
    let mut out = Vec::new();
    let mut k = 0;
    while k <= m {
        if !inside[k] {
            k += 1;
            continue;
        }
        let start = if k == 0 { t0 } else { edge(ts[k - 1], ts[k], true) };
        let mut j = k;
        while j < m && inside[j + 1] {
            j += 1;
        }
        let end = if j == m { t1 } else { edge(ts[j], ts[j + 1], false) };
        out.push(ArcPart { piece: i, t0: start, t1: end });
        k = j + 1;
    }
    out
}

/// `e(∅) = ∅` and `e(C) = ℝ²` are carried as flags.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Special {
    None,
    Empty,
    Plane,
}

/// `e(B)` as an irredundant list of half-planes.
#[derive(Clone, Debug)]
pub struct ExtendedBody {
    pub source: Option<Body2>,
    pub ambient: Body2,
    pub halfplanes: Vec<HalfPlane>,
    pub special: Special,
}

#[derive(Serialize)]
struct ExtendedRecord<'a> {
    special: Special,
    halfplanes: Vec<crate::geometry::HalfPlaneSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    source: Option<&'a crate::geometry::BodySpec>,
}

impl ExtendedBody {
    pub fn empty(ambient: &Body2) -> ExtendedBody {
        ExtendedBody { source: None, ambient: ambient.clone(), halfplanes: Vec::new(), special: Special::Empty }
    }

    pub fn contains(&self, p: Vec2, tol: f64) -> bool {
        match self.special {
            Special::Empty => false,
            Special::Plane => true,
            Special::None => self.halfplanes.iter().all(|h| h.value(p) <= tol),
        }
    }

    /// Strict membership with margin `tau` on every half-plane.
    pub fn interior_contains(&self, p: Vec2, tau: f64) -> bool {
        match self.special {
            Special::Empty => false,
            Special::Plane => true,
            Special::None => self.halfplanes.iter().all(|h| h.value(p) < -tau),
        }
    }

    /// Smallest margin `min_h -h(p)`; infinite for the plane, negative outside.
    pub fn margin(&self, p: Vec2) -> f64 {
        match self.special {
            Special::Empty => f64::NEG_INFINITY,
            Special::Plane => f64::INFINITY,
            Special::None => self.halfplanes.iter().map(|h| -h.value(p)).fold(f64::INFINITY, f64::min),
        }
    }

    /// The half-planes as a body, when `e(B)` is a proper subset of the plane.
    pub fn as_body(&self) -> Option<Body2> {
        match self.special {
            Special::None => Body2::halfplanes(&self.halfplanes).ok(),
            _ => None,
        }
    }

    pub fn to_json(&self) -> String {
        let rec = ExtendedRecord {
            special: self.special,
            halfplanes: self.halfplanes.iter().map(Into::into).collect(),
            source: self.source.as_ref().map(|b| b.spec()),
        };
        serde_json::to_string(&rec).expect("extended body serializes")
    }
}

/// `e(B)` for `B ⊆ C`. Every sampled point of `∂_C B` contributes its supporting
/// half-planes; finite part ends contribute both extreme normals.
pub fn extend_body(b: &Body2, c: &Body2, settings: &Settings) -> Result<ExtendedBody> {
    let rb = relative_boundary(b, c, settings)?;
    if rb.is_empty() {
        return Ok(ExtendedBody { source: Some(b.clone()), ambient: c.clone(), halfplanes: Vec::new(), special: Special::Plane });
    }
    let reach = settings.window_mult * c.inradius().max(b.inradius());
    let mut hps = Vec::new();
    for part in &rb.parts {
        let piece = b.pieces()[part.piece];
        match piece {
            Piece::Seg { cut, .. } => hps.push(b.cuts()[cut]),
            Piece::Arc { .. } => {
                let single = BoundaryArc { parent: b.clone(), parts: vec![*part] };
                let n = settings.resolution.max(2);
                let (a, z) = (part.t0, part.t1);
                let (a, z) = match (a.is_finite(), z.is_finite()) {
                    (true, true) => (a, z),
                    (true, false) => (a, a + reach),
                    (false, true) => (z - reach, z),
                    (false, false) => (-reach, reach),
                };
                for k in 0..n {
                    let t = a + (z - a) * k as f64 / (n - 1) as f64;
                    hps.push(HalfPlane::through(b.piece_normal(&piece, t), single.point(part, t)));
                }
            }
        }
        for t in [part.t0, part.t1] {
            if t.is_finite() {
                let y = rb.point(part, t);
                let arc = b.supporting_normals(y, settings.tol.max(1e-9) * (1.0 + y.norm()))?;
                hps.push(HalfPlane::through(arc.from, y));
                hps.push(HalfPlane::through(arc.to, y));
            }
        }
    }
    let halfplanes = prune(&hps, settings.tol);
    if halfplanes.is_empty() {
        return Err(Error::InvalidBody("extended body has an empty description".into()));
    }
    Ok(ExtendedBody { source: Some(b.clone()), ambient: c.clone(), halfplanes, special: Special::None })
}

/// Regularity the extension can be expected to have, from the ambient body's geometry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtensionGrade {
    /// Rotund ambient without asymptotic directions.
    Continuous,
    /// Ambient with a boundary segment; only upper semicontinuity is available.
    UscOnly,
    /// Ambient with an asymptotic direction; no quasiconvex extension need exist.
    Unsupported,
}

impl ExtensionGrade {
    pub fn tag(&self) -> &'static str {
        match self {
            ExtensionGrade::Continuous => "continuous",
            ExtensionGrade::UscOnly => "usc-only",
            ExtensionGrade::Unsupported => "unsupported",
        }
    }

    pub fn of(c: &Body2, settings: &Settings) -> ExtensionGrade {
        if !asymptotic_directions(c, settings).is_empty() {
            ExtensionGrade::Unsupported
        } else if rotundity_probe(c, settings).rotund {
            ExtensionGrade::Continuous
        } else {
            ExtensionGrade::UscOnly
        }
    }
}

/// The extension `F` of a level family. Extended bodies are built on first use.
pub struct ExtensionResult {
    family: Arc<LevelFamily>,
    extended: Vec<OnceLock<std::result::Result<ExtendedBody, Error>>>,
    grade: ExtensionGrade,
    settings: Settings,
}

impl ExtensionResult {
    pub fn family(&self) -> &LevelFamily {
        &self.family
    }

    pub fn grade(&self) -> ExtensionGrade {
        self.grade
    }

    pub fn settings(&self) -> &Settings {
        &self.settings
    }

    /// `e(B_k)`.
    pub fn extended(&self, k: usize) -> Result<&ExtendedBody> {
        let fam = &self.family;
        self.extended[k]
            .get_or_init(|| extend_body(&fam.bodies()[k], fam.ambient(), &self.settings))
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Smallest `k` with `x ∈ e(B_k)` (closed, within the tolerance), by binary search
    /// since the extended bodies increase with `k`.
    pub fn covering_index(&self, x: Vec2) -> Result<usize> {
        let n = self.family.len();
        let tol = self.settings.tol * (1.0 + x.norm());
        if !self.extended(n - 1)?.contains(x, tol) {
            return Err(Error::NotCovered(n - 1));
        }
        let (mut lo, mut hi) = (0usize, n - 1);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.extended(mid)?.contains(x, tol) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Ok(lo)
    }

    /// `F(x)`: the step value on `C`, otherwise the level of the first extended body
    /// containing `x`; [`SENTINEL`] when none does.
    pub fn eval(&self, x: Vec2) -> f64 {
        if self.family.ambient().inside(x) {
            return self.family.step(x, 0.0);
        }
        match self.covering_index(x) {
            Ok(k) => self.family.levels()[k],
            Err(_) => SENTINEL,
        }
    }

    /// Row-major `n x n` grid of `F` on the nodes from `lo` to `hi` inclusive.
    pub fn grid(&self, lo: Vec2, hi: Vec2, n: usize) -> Vec<f64> {
        let step = |a: f64, b: f64, i: usize| if n < 2 { a } else { a + (b - a) * i as f64 / (n - 1) as f64 };
        (0..n * n)
            .into_par_iter()
            .map(|idx| self.eval(Vec2::new(step(lo.x, hi.x, idx % n), step(lo.y, hi.y, idx / n))))
            .collect()
    }
}

/// Extends the step function of `fam`. Only nestedness is required; the grade records
/// what regularity the ambient body allows.
pub fn extend_function(fam: LevelFamily, settings: &Settings) -> Result<ExtensionResult> {
    fam.check_nested(64, settings)?;
    let grade = ExtensionGrade::of(fam.ambient(), settings);
    Ok(extension_with_grade(fam, grade, settings))
}

/// [`extend_function`] without the nestedness check and with a caller-supplied grade.
pub fn extension_with_grade(fam: LevelFamily, grade: ExtensionGrade, settings: &Settings) -> ExtensionResult {
    let extended = (0..fam.len()).map(|_| OnceLock::new()).collect();
    ExtensionResult { family: Arc::new(fam), extended, grade, settings: *settings }
}

/// Smallest `k` with `x ∈ e(B_k)` for a family that exhausts `C`.
pub fn covering_index(fam: &LevelFamily, x: Vec2, settings: &Settings) -> Result<usize> {
    extension_with_grade(fam.clone(), ExtensionGrade::Continuous, settings).covering_index(x)
}
