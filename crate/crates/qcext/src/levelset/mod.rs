//! Quasiconvex functions through their sublevel sets.
//!
//! A [`LevelFamily`] is a finite nested list of bodies with increasing levels; its step
//! evaluation is the smallest level whose body contains the point. [`QCFunction`] wraps
//! the explicit constructions (staircase, `tilde_f`, compositions) as evaluation oracles.

mod construct;
mod diagnostics;

pub use construct::*;
pub use diagnostics::*;

use crate::extension::relative_boundary;
use crate::geometry::base::Affine;
use crate::geometry::{Body2, BodySpec, Vec2};
use crate::{Error, Result, Settings};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fmt;
use std::sync::Arc;

/// Stand-in for `+inf` in step evaluations. Never used in arithmetic.
pub const SENTINEL: f64 = f64::MAX;

/// Lowercase hex SHA-256 of `bytes`.
pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Nested bodies `B_0 ⊆ B_1 ⊆ ...` of an ambient body with strictly increasing levels.
#[derive(Clone, Debug)]
pub struct LevelFamily {
    ambient: Body2,
    levels: Vec<f64>,
    bodies: Vec<Body2>,
}

#[derive(Serialize)]
struct FamilyRecord<'a> {
    ambient: &'a BodySpec,
    bodies: Vec<&'a BodySpec>,
    levels: &'a [f64],
}

impl LevelFamily {
    /// Checks the level order only; see [`LevelFamily::check_nested`] for containment.
    pub fn new(ambient: Body2, entries: Vec<(f64, Body2)>) -> Result<LevelFamily> {
        if entries.is_empty() {
            return Err(Error::Malformed("level family needs at least one entry".into()));
        }
        let (levels, bodies): (Vec<f64>, Vec<Body2>) = entries.into_iter().unzip();
        if levels.iter().any(|a| !a.is_finite()) {
            return Err(Error::Malformed("levels must be finite".into()));
        }
        if let Some(i) = levels.windows(2).position(|w| !(w[0] < w[1])) {
            return Err(Error::Malformed(format!("levels must increase strictly (index {})", i + 1)));
        }
        Ok(LevelFamily { ambient, levels, bodies })
    }

    pub fn ambient(&self) -> &Body2 {
        &self.ambient
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn bodies(&self) -> &[Body2] {
        &self.bodies
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Largest difference of consecutive levels (0 for a single level).
    pub fn max_gap(&self) -> f64 {
        self.levels.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
    }

    /// Sampled check of `B_k ⊆ B_{k+1}` and `B_k ⊆ C`.
    pub fn check_nested(&self, samples: usize, settings: &Settings) -> Result<()> {
        let scale = settings.sample_mult * self.ambient.inradius();
        for k in 0..self.bodies.len() {
            let b = &self.bodies[k];
            let next = if k + 1 < self.bodies.len() { &self.bodies[k + 1] } else { &self.ambient };
            let radius = scale.max(settings.sample_mult * b.inradius());
            for bp in b.sample_boundary(b.witness(), radius, samples) {
                let tol = settings.tol.max(1e-9) * (1.0 + bp.p.norm());
                if !next.contains(bp.p, tol) {
                    return Err(Error::NotNested(k));
                }
            }
        }
        Ok(())
    }

    /// Sampled margins `d(∂_C B_k, ∂_C B_{k+1})`, one per consecutive pair; infinite when
    /// either relative boundary is empty.
    pub fn strict_margins(&self, samples: usize, settings: &Settings) -> Result<Vec<f64>> {
        let (center, radius) = self.ambient.window(settings.sample_mult);
        let mut out = Vec::new();
        for k in 0..self.bodies.len().saturating_sub(1) {
            let rb0 = relative_boundary(&self.bodies[k], &self.ambient, settings)?;
            let rb1 = relative_boundary(&self.bodies[k + 1], &self.ambient, settings)?;
            if rb0.is_empty() || rb1.is_empty() {
                out.push(f64::INFINITY);
                continue;
            }
            let reach = radius + center.dist(self.bodies[k].witness());
            let m = rb0.sample(samples, reach).iter().map(|p| rb1.distance(*p)).fold(f64::INFINITY, f64::min);
            out.push(m);
        }
        Ok(out)
    }

    /// Index of the smallest body containing `x` (within `tol`), assuming nestedness.
    pub fn index_of(&self, x: Vec2, tol: f64) -> Option<usize> {
        let n = self.bodies.len();
        if !self.bodies[n - 1].contains(x, tol) {
            return None;
        }
        let (mut lo, mut hi) = (0usize, n - 1);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.bodies[mid].contains(x, tol) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Some(lo)
    }

    /// Step evaluation without the domain check; [`SENTINEL`] when no body contains `x`.
    pub fn step(&self, x: Vec2, tol: f64) -> f64 {
        self.index_of(x, tol).map_or(SENTINEL, |k| self.levels[k])
    }

    /// `inf {α_k : x ∈ B_k}` for `x` in the ambient body.
    pub fn eval_levels(&self, x: Vec2, tol: f64) -> Result<f64> {
        if !self.ambient.contains(x, tol) {
            return Err(Error::OutsideDomain);
        }
        Ok(self.step(x, tol))
    }

    pub fn to_spec(&self) -> FunctionSpec {
        FunctionSpec::Levels {
            ambient: self.ambient.spec().clone(),
            bodies: self.bodies.iter().map(|b| b.spec().clone()).collect(),
            levels: self.levels.clone(),
        }
    }

    /// SHA-256 of the canonical JSON of the family.
    pub fn hash(&self) -> String {
        let rec = FamilyRecord {
            ambient: self.ambient.spec(),
            bodies: self.bodies.iter().map(|b| b.spec()).collect(),
            levels: &self.levels,
        };
        sha256_hex(serde_json::to_string(&rec).expect("family serializes").as_bytes())
    }
}

/// Non-decreasing table `(t_i, ω(t_i))` with `ω(0) = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModulusTable {
    pub t: Vec<f64>,
    pub omega: Vec<f64>,
}

impl ModulusTable {
    /// Value at the largest grid point not exceeding `t`.
    pub fn at(&self, t: f64) -> f64 {
        match self.t.iter().rposition(|&s| s <= t) {
            Some(i) => self.omega[i],
            None => 0.0,
        }
    }

    /// `max ω(t) / t` over the positive grid points.
    pub fn max_ratio(&self) -> f64 {
        self.t.iter().zip(&self.omega).filter(|(t, _)| **t > 0.0).map(|(t, w)| w / t).fold(0.0, f64::max)
    }
}

/// The evaluation rule behind a [`QCFunction`].
#[derive(Clone)]
pub enum FnKind {
    Constant(f64),
    Levels(Arc<LevelFamily>),
    Staircase(Arc<Staircase>),
    TildeF(Arc<TildeF>),
    /// `inner ∘ map`
    Composed { inner: Box<QCFunction>, map: Affine },
    /// `t -> inner(clamp(t, lo, hi))` on the first coordinate.
    LineConstant { inner: Box<QCFunction>, lo: f64, hi: f64 },
    Closure { name: String, f: Arc<dyn Fn(Vec2) -> f64 + Send + Sync> },
}

/// Quasiconvex function given by an evaluation oracle, with optional metadata.
#[derive(Clone)]
pub struct QCFunction {
    domain: Option<Body2>,
    kind: FnKind,
    pub lipschitz: Option<f64>,
    pub modulus: Option<ModulusTable>,
}

impl fmt::Debug for QCFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QCFunction")
            .field("kind", &self.name())
            .field("bounded_domain", &self.domain.as_ref().map(|d| d.is_bounded()))
            .field("lipschitz", &self.lipschitz)
            .finish()
    }
}

impl QCFunction {
    pub fn new(domain: Option<Body2>, kind: FnKind) -> Self {
        QCFunction { domain, kind, lipschitz: None, modulus: None }
    }

    pub fn constant(value: f64, domain: Option<Body2>) -> Self {
        let mut f = QCFunction::new(domain, FnKind::Constant(value));
        f.lipschitz = Some(0.0);
        f
    }

    pub fn from_closure(name: &str, domain: Option<Body2>, f: impl Fn(Vec2) -> f64 + Send + Sync + 'static) -> Self {
        QCFunction::new(domain, FnKind::Closure { name: name.to_string(), f: Arc::new(f) })
    }

    /// Step function of a family.
    pub fn from_family(fam: LevelFamily) -> Self {
        QCFunction::new(Some(fam.ambient().clone()), FnKind::Levels(Arc::new(fam)))
    }

    pub fn with_lipschitz(mut self, l: f64) -> Self {
        self.lipschitz = Some(l);
        self
    }

    pub fn domain(&self) -> Option<&Body2> {
        self.domain.as_ref()
    }

    pub fn kind(&self) -> &FnKind {
        &self.kind
    }

    pub fn name(&self) -> &str {
        match &self.kind {
            FnKind::Constant(_) => "constant",
            FnKind::Levels(_) => "levels",
            FnKind::Staircase(_) => "staircase",
            FnKind::TildeF(_) => "tilde_f",
            FnKind::Composed { .. } => "composed",
            FnKind::LineConstant { .. } => "line_constant",
            FnKind::Closure { name, .. } => name,
        }
    }

    /// Evaluates the defining formula at any point, ignoring the domain.
    pub fn eval(&self, x: Vec2) -> f64 {
        match &self.kind {
            FnKind::Constant(c) => *c,
            FnKind::Levels(fam) => fam.step(x, 0.0),
            FnKind::Staircase(s) => s.eval(x),
            FnKind::TildeF(t) => t.eval(x),
            FnKind::Composed { inner, map } => inner.eval(map.apply(x)),
            FnKind::LineConstant { inner, lo, hi } => inner.eval(Vec2::new(x.x.clamp(*lo, *hi), 0.0)),
            FnKind::Closure { f, .. } => f(x),
        }
    }

    /// Evaluates after checking membership in the domain.
    pub fn eval_checked(&self, x: Vec2, tol: f64) -> Result<f64> {
        if let Some(d) = &self.domain {
            if !d.contains(x, tol) {
                return Err(Error::OutsideDomain);
            }
        }
        Ok(self.eval(x))
    }

    /// Serializable description, when the function has one.
    pub fn to_spec(&self) -> Option<FunctionSpec> {
        Some(match &self.kind {
            FnKind::Constant(c) => FunctionSpec::Constant { value: *c, domain: self.domain.as_ref().map(|d| d.spec().clone()) },
            FnKind::Levels(fam) => fam.to_spec(),
            FnKind::Staircase(s) => s.to_spec(),
            FnKind::TildeF(t) => t.to_spec(),
            FnKind::Composed { inner, map } => FunctionSpec::Composed {
                inner: Box::new(inner.to_spec()?),
                proj: map.to_rows().iter().map(|r| r.to_vec()).collect(),
                domain: self.domain.as_ref().map(|d| d.spec().clone()),
            },
            FnKind::LineConstant { inner, lo, hi } => {
                FunctionSpec::LineConstant { inner: Box::new(inner.to_spec()?), interval: [*lo, *hi] }
            }
            FnKind::Closure { name, .. } if name == crate::counterexamples::USC_NAME => FunctionSpec::UscRectangle {},
            FnKind::Closure { .. } => return None,
        })
    }

    pub fn from_spec(spec: &FunctionSpec, settings: &Settings) -> Result<QCFunction> {
        let body = |s: &BodySpec| Body2::from_spec(s.clone());
        match spec {
            FunctionSpec::Constant { value, domain } => {
                Ok(QCFunction::constant(*value, domain.as_ref().map(body).transpose()?))
            }
            FunctionSpec::Levels { ambient, bodies, levels } => {
                let fam = family_from_specs(ambient, bodies, levels)?;
                fam.check_nested(64, settings)?;
                Ok(QCFunction::from_family(fam))
            }
            FunctionSpec::Staircase { ambient, bodies, levels, gaps, residual } => {
                let amb = body(ambient)?;
                let bs = bodies.iter().map(body).collect::<Result<Vec<_>>>()?;
                staircase_qc_capped(&amb, &bs, levels, gaps, *residual, settings)
            }
            FunctionSpec::TildeF { domain, h, origin, points, beta } => {
                let pts: Vec<Vec2> = points.iter().map(|p| Vec2::from(*p)).collect();
                tilde_f(&body(domain)?, Vec2::from(*h), Vec2::from(*origin), &pts, *beta)
            }
            FunctionSpec::Composed { inner, proj, domain } => {
                let f = QCFunction::from_spec(inner, settings)?;
                let map = affine_from_rows(proj)?;
                Ok(compose_projection(&f, &map, domain.as_ref().map(body).transpose()?))
            }
            FunctionSpec::LineConstant { inner, interval } => {
                let f = QCFunction::from_spec(inner, settings)?;
                extend_line_constant(&f, interval[0], interval[1])
            }
            FunctionSpec::UscRectangle {} => Ok(crate::counterexamples::gen_usc_counterexample().0),
        }
    }
}

/// Builds a family from JSON parts.
pub fn family_from_specs(ambient: &BodySpec, bodies: &[BodySpec], levels: &[f64]) -> Result<LevelFamily> {
    if bodies.len() != levels.len() {
        return Err(Error::Malformed("bodies and levels differ in length".into()));
    }
    let amb = Body2::from_spec(ambient.clone())?;
    let bs = bodies.iter().map(|s| Body2::from_spec(s.clone())).collect::<Result<Vec<_>>>()?;
    LevelFamily::new(amb, levels.iter().copied().zip(bs).collect())
}

/// Affine map from one or two rows of length 2 (linear) or 3 (with translation). A single
/// row maps to the first coordinate of a line.
pub fn affine_from_rows(rows: &[Vec<f64>]) -> Result<Affine> {
    let row = |r: &Vec<f64>| -> Result<[f64; 3]> {
        match r.len() {
            2 => Ok([r[0], r[1], 0.0]),
            3 => Ok([r[0], r[1], r[2]]),
            _ => Err(Error::Malformed("projection rows need 2 or 3 entries".into())),
        }
    };
    let (r0, r1) = match rows.len() {
        1 => (row(&rows[0])?, [0.0; 3]),
        2 => (row(&rows[0])?, row(&rows[1])?),
        _ => return Err(Error::Malformed("projection needs one or two rows".into())),
    };
    if r0.iter().chain(&r1).any(|x| !x.is_finite()) {
        return Err(Error::Malformed("projection entries must be finite".into()));
    }
    Ok(Affine::from_rows([r0, r1]))
}

/// Function JSON schema.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionSpec {
    Constant {
        value: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        domain: Option<BodySpec>,
    },
    /// Step function of a level family.
    Levels { ambient: BodySpec, bodies: Vec<BodySpec>, levels: Vec<f64> },
    Staircase {
        ambient: BodySpec,
        bodies: Vec<BodySpec>,
        levels: Vec<f64>,
        gaps: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        residual: Option<f64>,
    },
    TildeF {
        domain: BodySpec,
        /// Normal of the functional `h`.
        h: [f64; 2],
        /// Point where `h` vanishes (the origin of the construction).
        origin: [f64; 2],
        points: Vec<[f64; 2]>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        beta: Option<f64>,
    },
    Composed {
        inner: Box<FunctionSpec>,
        proj: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        domain: Option<BodySpec>,
    },
    LineConstant { inner: Box<FunctionSpec>, interval: [f64; 2] },
    UscRectangle {},
}
