use super::ModulusTable;
use crate::geometry::{Body2, Vec2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Where sample points are drawn: a body clipped to a disk window, or an axis-aligned box.
#[derive(Clone, Debug)]
pub enum SampleDomain {
    Body { body: Body2, center: Vec2, radius: f64 },
    Rect { lo: Vec2, hi: Vec2 },
}

impl SampleDomain {
    /// The body's default window, `sample_mult` inscribed radii around its witness.
    pub fn body(body: &Body2, mult: f64) -> SampleDomain {
        let (center, radius) = body.window(mult);
        SampleDomain::Body { body: body.clone(), center, radius }
    }

    pub fn rect(x0: f64, x1: f64, y0: f64, y1: f64) -> SampleDomain {
        SampleDomain::Rect { lo: Vec2::new(x0, y0), hi: Vec2::new(x1, y1) }
    }

    /// Diameter of the sampling window.
    pub fn scale(&self) -> f64 {
        match self {
            SampleDomain::Body { radius, .. } => 2.0 * radius,
            SampleDomain::Rect { lo, hi } => lo.dist(*hi),
        }
    }

    pub fn contains(&self, p: Vec2) -> bool {
        match self {
            SampleDomain::Body { body, center, radius } => p.dist(*center) <= *radius && body.inside(p),
            SampleDomain::Rect { lo, hi } => p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y,
        }
    }

    /// Uniform sample by rejection; `None` if the window misses the domain after many tries.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Option<Vec2> {
        match self {
            SampleDomain::Body { body, center, radius } => body.sample_interior(rng, *center, *radius, 1).pop(),
            SampleDomain::Rect { lo, hi } => Some(Vec2::new(rng.gen_range(lo.x..=hi.x), rng.gen_range(lo.y..=hi.y))),
        }
    }

    fn clamp(&self, p: Vec2) -> Option<Vec2> {
        match self {
            SampleDomain::Rect { lo, hi } => Some(Vec2::new(p.x.clamp(lo.x, hi.x), p.y.clamp(lo.y, hi.y))),
            _ => self.contains(p).then_some(p),
        }
    }
}

/// One sampled triple with `f(λx + (1-λ)y) - max(f(x), f(y)) = excess`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QcViolation {
    pub x: Vec2,
    pub y: Vec2,
    pub lambda: f64,
    pub excess: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QcReport {
    pub triples: usize,
    pub violations: usize,
    /// Largest excess among the flagged triples, after local refinement.
    pub worst: Option<QcViolation>,
}

impl QcReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

fn excess(f: &(dyn Fn(Vec2) -> f64 + Sync), x: Vec2, y: Vec2, lambda: f64) -> f64 {
    f(x * lambda + y * (1.0 - lambda)) - f(x).max(f(y))
}

/// Segment test of quasiconvexity: flags triples with `f(λx + (1-λ)y) > max(f(x), f(y)) + tol`.
/// Triples are drawn sequentially from the seed, so the report depends only on the seed.
pub fn quasiconvex_check(
    f: &(dyn Fn(Vec2) -> f64 + Sync),
    domain: &SampleDomain,
    n_triples: usize,
    seed: u64,
    tol: f64,
) -> QcReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut triples = Vec::with_capacity(n_triples);
    for _ in 0..n_triples {
        let (Some(x), Some(y)) = (domain.sample(&mut rng), domain.sample(&mut rng)) else { break };
        triples.push((x, y, rng.gen_range(0.0..1.0)));
    }
    let scored: Vec<f64> = triples.par_iter().map(|&(x, y, l)| excess(f, x, y, l)).collect();
    let flagged: Vec<usize> = (0..scored.len()).filter(|&i| scored[i] > tol).collect();
    let worst = flagged.iter().copied().max_by(|&a, &b| scored[a].total_cmp(&scored[b])).map(|i| {
        let (x, y, lambda) = triples[i];
        refine(f, domain, QcViolation { x, y, lambda, excess: scored[i] })
    });
    QcReport { triples: triples.len(), violations: flagged.len(), worst }
}

/// Coordinate pattern search on `(x, y, λ)` that only accepts larger excess.
fn refine(f: &(dyn Fn(Vec2) -> f64 + Sync), domain: &SampleDomain, mut best: QcViolation) -> QcViolation {
    let mut step = 0.05 * domain.scale();
    let mut lstep = 0.1;
    for _ in 0..400 {
        let mut moved = false;
        for k in 0..10 {
            let mut cand = best;
            let s = if k % 2 == 0 { step } else { -step };
            match k / 2 {
                0 => cand.x.x += s,
                1 => cand.x.y += s,
                2 => cand.y.x += s,
                3 => cand.y.y += s,
                _ => cand.lambda = (cand.lambda + if k % 2 == 0 { lstep } else { -lstep }).clamp(1e-6, 1.0 - 1e-6),
            }
            let (Some(x), Some(y)) = (domain.clamp(cand.x), domain.clamp(cand.y)) else { continue };
            cand.x = x;
            cand.y = y;
            cand.excess = excess(f, x, y, cand.lambda);
            if cand.excess > best.excess {
                best = cand;
                moved = true;
            }
        }
        if !moved {
            step *= 0.5;
            lstep *= 0.5;
            if step < 1e-12 * domain.scale() {
                break;
            }
        }
    }
    best
}

fn sample_pairs(domain: &SampleDomain, pairs: usize, reach: f64, seed: u64) -> Vec<(Vec2, Vec2, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(pairs);
    let mut tries = 0;
    while out.len() < pairs && tries < 50 * pairs.max(1) {
        tries += 1;
        let Some(x) = domain.sample(&mut rng) else { break };
        let r = rng.gen_range(0.0..=reach);
        let y = x + Vec2::from_angle(rng.gen_range(0.0..std::f64::consts::TAU)) * r;
        if domain.contains(y) {
            out.push((x, y, x.dist(y)));
        }
    }
    out
}

/// Empirical modulus: `ω(t_i) = max |f(x) - f(y)|` over sampled pairs with `|x - y| ≤ t_i`.
/// The grid is sorted and gets a leading zero.
pub fn modulus_estimate(
    f: &(dyn Fn(Vec2) -> f64 + Sync),
    domain: &SampleDomain,
    grid: &[f64],
    pair_samples: usize,
    seed: u64,
) -> ModulusTable {
    let mut t: Vec<f64> = grid.iter().copied().filter(|s| *s > 0.0).collect();
    t.sort_by(f64::total_cmp);
    t.insert(0, 0.0);
    let t_max = *t.last().unwrap();
    let pairs = sample_pairs(domain, pair_samples, t_max, seed);
    let diffs: Vec<(f64, f64)> = pairs.par_iter().map(|&(x, y, r)| (r, (f(x) - f(y)).abs())).collect();
    let mut omega = vec![0.0; t.len()];
    for (r, d) in diffs {
        let i = t.partition_point(|&s| s < r);
        if i < t.len() {
            omega[i] = f64::max(omega[i], d);
        }
    }
    for i in 1..omega.len() {
        omega[i] = omega[i].max(omega[i - 1]);
    }
    ModulusTable { t, omega }
}

/// Largest sampled slope `|f(x) - f(y)| / |x - y|` over pairs at most 1% of the window apart.
pub fn lipschitz_estimate(f: &(dyn Fn(Vec2) -> f64 + Sync), domain: &SampleDomain, pair_samples: usize, seed: u64) -> f64 {
    let reach = 0.01 * domain.scale();
    sample_pairs(domain, pair_samples, reach, seed)
        .par_iter()
        .filter(|(_, _, r)| *r > 0.0)
        .map(|&(x, y, r)| (f(x) - f(y)).abs() / r)
        .reduce(|| 0.0, f64::max)
}
