//! Seeded property suites over every module, the acceptance criteria, and body fuzzing.

pub mod criteria;
mod suites;

use crate::geometry::halfplane::convex_hull;
use crate::geometry::{BodySpec, HalfPlane, HalfPlaneSpec, ProfileKind, ProfileParams};
use crate::levelset::sha256_hex;
use crate::{Body2, Error, Result, Vec2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::time::Instant;

pub use criteria::{all_criteria, CriterionOutcome};

pub const SUITES: [&str; 5] = ["geometry", "levelset", "extension", "counterexamples", "end_to_end"];

/// Sample counts for a suite run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    /// Cases per geometric predicate.
    pub cases: usize,
    /// Segment triples per quasiconvexity check.
    pub triples: usize,
    /// Side of the continuity grid.
    pub grid: usize,
    /// Adds the known non-quasiconvex `|xy|` case to the levelset suite.
    pub planted: bool,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { cases: 10_000, triples: 100_000, grid: 1024, planted: false }
    }
}

impl Budget {
    /// Small budget for smoke runs.
    pub fn quick() -> Self {
        Budget { cases: 400, triples: 4_000, grid: 128, planted: false }
    }

    pub fn with_planted(mut self, planted: bool) -> Self {
        self.planted = planted;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    /// Index of the case within its check, for stable ordering.
    pub case: usize,
    pub check: String,
    /// Minimized witness coordinates; their meaning depends on the check.
    pub witness: Vec<f64>,
    pub detail: String,
}

impl Failure {
    pub fn new(check: &str, case: usize, witness: Vec<f64>, detail: impl Into<String>) -> Self {
        Failure { case, check: check.to_string(), witness, detail: detail.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub cases: usize,
    pub failures: Vec<Failure>,
    pub wall_time_ms: u128,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// SHA-256 of everything but the wall time.
    pub fn content_hash(&self) -> String {
        let content = (&self.suite, self.seed, self.cases, &self.failures);
        sha256_hex(serde_json::to_string(&content).expect("report serializes").as_bytes())
    }
}

/// Case counter and failure list shared by the checks of one suite.
#[derive(Default)]
pub(crate) struct Log {
    pub cases: usize,
    pub failures: Vec<Failure>,
}

impl Log {
    /// Records `n` cases and whichever of them failed.
    pub fn add(&mut self, n: usize, failures: impl IntoIterator<Item = Failure>) {
        self.cases += n;
        self.failures.extend(failures);
    }

    pub fn check(&mut self, name: &str, ok: bool, witness: Vec<f64>, detail: impl Into<String>) {
        self.cases += 1;
        if !ok {
            self.failures.push(Failure::new(name, 0, witness, detail));
        }
    }
}

/// Runs one named suite. Reports are deterministic in `(name, seed, budget)` apart from
/// the wall time.
pub fn run_suite(name: &str, seed: u64, budget: &Budget) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut log = Log::default();
    match name {
        "geometry" => suites::geometry(seed, budget, &mut log)?,
        "levelset" => suites::levelset(seed, budget, &mut log)?,
        "extension" => suites::extension(seed, budget, &mut log)?,
        "counterexamples" => suites::counterexamples(seed, budget, &mut log)?,
        "end_to_end" => {
            for c in all_criteria(seed, budget) {
                log.check(&format!("criterion_{}", c.id), c.passed, c.metrics.iter().map(|m| m.1).collect(), c.detail);
            }
        }
        other => return Err(Error::UnknownSuite(other.to_string())),
    }
    Ok(SuiteReport {
        suite: name.to_string(),
        seed,
        cases: log.cases,
        failures: log.failures,
        wall_time_ms: start.elapsed().as_millis(),
    })
}

/// Moves a failing witness toward `anchor` by bisection on the segment between them and
/// returns the closest point found that still fails. At most `steps` predicate calls.
pub fn minimize_witness(fails: &dyn Fn(&[f64]) -> bool, witness: &[f64], anchor: &[f64], steps: usize) -> Vec<f64> {
    let at = |t: f64| -> Vec<f64> { witness.iter().zip(anchor).map(|(w, a)| a + t * (w - a)).collect() };
    if fails(anchor) {
        return anchor.to_vec();
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..steps {
        let mid = 0.5 * (lo + hi);
        if fails(&at(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    at(hi)
}

fn gaussian_points(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Vec<Vec2> {
    (0..n)
        .map(|_| {
            let x: f64 = rng.sample(StandardNormal);
            let y: f64 = rng.sample(StandardNormal);
            Vec2::new(x, y) * scale
        })
        .collect()
}

/// Convex polygon from the hull of Gaussian points, retried until the hull has interior.
pub fn random_polygon(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Body2 {
    loop {
        let hull = convex_hull(&gaussian_points(rng, n.max(3), scale));
        if hull.len() >= 3 {
            if let Ok(b) = Body2::polygon(&hull) {
                return b;
            }
        }
    }
}

fn random_halfplanes(rng: &mut ChaCha8Rng) -> Body2 {
    loop {
        let k = rng.gen_range(1..=6);
        let hps: Vec<HalfPlane> = (0..k)
            .map(|_| HalfPlane::new(Vec2::from_angle(rng.gen_range(0.0..std::f64::consts::TAU)), rng.gen_range(0.3..3.0)))
            .collect();
        if let Ok(b) = Body2::halfplanes(&hps) {
            return b;
        }
    }
}

fn random_analytic(rng: &mut ChaCha8Rng) -> Body2 {
    loop {
        let th: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let (c, s) = (th.cos(), th.sin());
        let t = Vec2::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let cut = |rng: &mut ChaCha8Rng| HalfPlaneSpec {
            normal: Vec2::from_angle(rng.gen_range(0.0..std::f64::consts::TAU)).into(),
            offset: 0.0,
        };
        let spec = match rng.gen_range(0..3) {
            0 => {
                let r = rng.gen_range(0.5..3.0);
                let mut h = cut(rng);
                h.offset = Vec2::from(h.normal).dot(t) + rng.gen_range(0.1..0.9) * r;
                BodySpec::Disk { center: t.into(), radius: r, cuts: vec![h] }
            }
            k => BodySpec::Epigraph {
                profile: if k == 1 { ProfileKind::Parabola } else { ProfileKind::Cosh },
                params: ProfileParams { a: Some(rng.gen_range(0.3..3.0)), c: Some(rng.gen_range(-3.0..-0.5)), coeffs: None },
                transform: Some([[c, -s, t.x], [s, c, t.y]]),
                cuts: vec![],
            },
        };
        if let Ok(b) = Body2::from_spec(spec) {
            return b;
        }
    }
}

/// Random polygons, half-plane intersections and transformed analytic bodies, cycling
/// through the three kinds. Every body contains its own witness point.
pub fn fuzz_bodies(seed: u64, n: usize) -> Vec<Body2> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| match i % 3 {
            0 => {
                let (k, scale) = (rng.gen_range(3..16), rng.gen_range(0.5..4.0));
                random_polygon(&mut rng, k, scale)
            }
            1 => random_halfplanes(&mut rng),
            _ => random_analytic(&mut rng),
        })
        .collect()
}
