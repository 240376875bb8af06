//! The eight acceptance criteria as functions returning measured metrics.

use super::{random_polygon, Budget};
use crate::counterexamples::{characterize, gen_no_lip, gen_no_uc, gen_usc_counterexample, witness_all, ExtClass, Grade};
use crate::extension::{extend_body, extend_function, extension_with_grade, ExtensionGrade, ExtensionResult, Special};
use crate::geometry::{catalog, Piece};
use crate::levelset::{quasiconvex_check, LevelFamily, SampleDomain};
use crate::{Body2, HalfPlane, Result, Settings, Vec2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const C1_WINDOW: f64 = 20.0;
pub const C1_QC_TOL: f64 = 1e-9;
pub const C2_HAUSDORFF_STEPS: f64 = 5.0;
pub const C2_HALF_DISK_TOL: f64 = 1e-6;
pub const C2_PROBES: usize = 16;
pub const C3_WINDOW: f64 = 50.0;
pub const C3_LEVELS: usize = 16_384;
pub const C3_DOWN_LEVELS: usize = 64;
pub const C4_K_MAX: usize = 20;
pub const C4_RATIO: (f64, f64) = (1.8, 2.2);
pub const C4_RATIO_FROM: usize = 12;
pub const C4_PRODUCT_MAX: f64 = 1e-4;
pub const C5_K_MAX: usize = 64;
pub const C5_GAP_MAX: f64 = 0.05;
pub const C5_BETA_MIN: f64 = 0.5;
/// Floor on the continuity grid of criteria 1 and 6. F is a step function, so coarser
/// grids put corners of neighbouring extended bodies in one cell.
pub const GRID_MIN: usize = 1024;
pub const C8_MIN_EXCESS: f64 = 0.2;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub title: String,
    pub passed: bool,
    pub metrics: Vec<(String, f64)>,
    pub detail: String,
}

impl CriterionOutcome {
    pub fn metric(&self, name: &str) -> Option<f64> {
        self.metrics.iter().find(|(n, _)| n == name).map(|m| m.1)
    }

    /// `PASS criterion N: title (metrics)` or `FAIL ...`.
    pub fn line(&self) -> String {
        let m: Vec<String> = self.metrics.iter().map(|(n, v)| format!("{n}={v:.6e}")).collect();
        let tag = if self.passed { "PASS" } else { "FAIL" };
        format!("{tag} criterion {}: {} [{}] {}", self.id, self.title, m.join(", "), self.detail)
    }
}

fn outcome(id: u8, title: &str, r: Result<(bool, Vec<(&str, f64)>, String)>) -> CriterionOutcome {
    match r {
        Ok((passed, metrics, detail)) => CriterionOutcome {
            id,
            title: title.into(),
            passed,
            metrics: metrics.into_iter().map(|(n, v)| (n.to_string(), v)).collect(),
            detail,
        },
        Err(e) => CriterionOutcome { id, title: title.into(), passed: false, metrics: vec![], detail: format!("error: {e}") },
    }
}

fn hp(nx: f64, ny: f64, c: f64) -> HalfPlane {
    HalfPlane::new(Vec2::new(nx, ny), c)
}

/// Rejection samples of `c` inside the square `[-r, r]^2`.
fn sample_square(c: &Body2, r: f64, n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec2> {
    let mut out = Vec::with_capacity(n);
    let mut tries = 0;
    while out.len() < n && tries < 1000 * n.max(1) {
        tries += 1;
        let p = Vec2::new(rng.gen_range(-r..=r), rng.gen_range(-r..=r));
        if c.inside(p) {
            out.push(p);
        }
    }
    out
}

/// `B_k = C ∩ {v ≤ (k+1)^2 - 1}` for `k = 0..10` and `B_11 = C`, with `α_k = k`.
pub fn parabola_squares_family() -> Result<LevelFamily> {
    let c = catalog::parabola();
    let mut entries = Vec::new();
    for k in 0..11 {
        let top = ((k + 1) * (k + 1)) as f64 - 1.0;
        entries.push((k as f64, c.cut(&[hp(0.0, 1.0, top)])?));
    }
    entries.push((11.0, c.clone()));
    LevelFamily::new(c, entries)
}

/// Largest difference between horizontally or vertically adjacent grid values.
pub fn max_adjacent_jump(grid: &[f64], n: usize) -> f64 {
    (0..n * n)
        .into_par_iter()
        .map(|i| {
            let (x, y) = (i % n, i / n);
            let mut m: f64 = 0.0;
            if x + 1 < n {
                m = m.max((grid[i + 1] - grid[i]).abs());
            }
            if y + 1 < n {
                m = m.max((grid[i + n] - grid[i]).abs());
            }
            m
        })
        .reduce(|| 0.0, f64::max)
}

/// Extension identity on sampled points, quasiconvexity on the window, and (for the
/// continuous grade) the grid jump bound. Returns `(max |F - f|, violations, max jump)`.
pub fn extension_properties(
    ext: &ExtensionResult,
    window: f64,
    points: usize,
    triples: usize,
    grid: usize,
    seed: u64,
) -> (f64, usize, Option<f64>) {
    let fam = ext.family();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = sample_square(fam.ambient(), window, points, &mut rng);
    let diff = pts
        .par_iter()
        .map(|&p| match fam.eval_levels(p, 0.0) {
            Ok(v) => (ext.eval(p) - v).abs(),
            Err(_) => f64::INFINITY,
        })
        .reduce(|| 0.0, f64::max);
    let f = |x: Vec2| ext.eval(x);
    let qc = quasiconvex_check(&f, &SampleDomain::rect(-window, window, -window, window), triples, seed ^ 0x5eed, C1_QC_TOL);
    let jump = (ext.grade() == ExtensionGrade::Continuous).then(|| {
        let g = ext.grid(Vec2::new(-window, -window), Vec2::new(window, window), grid);
        max_adjacent_jump(&g, grid)
    });
    (diff, qc.violations, jump)
}

pub fn criterion_1(seed: u64, budget: &Budget) -> CriterionOutcome {
    outcome(1, "extension identity and regularity on the parabola", (|| {
        let s = Settings::default();
        let fam = parabola_squares_family()?;
        let gap = fam.max_gap();
        let ext = extend_function(fam, &s)?;
        let (diff, violations, jump) = extension_properties(&ext, C1_WINDOW, budget.triples, budget.triples, budget.grid.max(GRID_MIN), seed);
        let jump = jump.unwrap_or(f64::INFINITY);
        let passed = diff == 0.0 && violations == 0 && jump <= gap;
        let detail = format!("grade {}", ext.grade().tag());
        Ok((passed, vec![("max_abs_diff", diff), ("qc_violations", violations as f64), ("max_jump", jump), ("max_gap", gap)], detail))
    })())
}

fn seg_perimeter(b: &Body2) -> f64 {
    b.pieces()
        .iter()
        .map(|p| match *p {
            Piece::Seg { s0, s1, .. } => s1 - s0,
            Piece::Arc { .. } => f64::NAN,
        })
        .sum()
}

fn seg_vertices(b: &Body2) -> Vec<Vec2> {
    b.pieces()
        .iter()
        .flat_map(|p| match *p {
            Piece::Seg { cut, s0, s1 } => vec![b.cuts()[cut].point_at(s0), b.cuts()[cut].point_at(s1)],
            Piece::Arc { .. } => vec![],
        })
        .collect()
}

struct Instance {
    hausdorff_ratio: f64,
    monotone_fail: usize,
    segment_fail: usize,
    probes: usize,
}

/// One polygon-in-polygon instance: `B = C ∩ wedge at an interior point`, and a larger
/// `B2` from loosened wedge offsets.
fn polygon_instance(seed: u64, settings: &Settings) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = random_polygon(&mut rng, 12, 3.0);
    let (center, radius) = c.window(1.0);
    let p = c.sample_interior(&mut rng, center, radius, 1)[0];
    let a: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let n1 = Vec2::from_angle(a);
    let n2 = Vec2::from_angle(a + rng.gen_range(-2.5..2.5));
    let cuts = [HalfPlane::through(n1, p), HalfPlane::through(n2, p)];
    let b = c.cut(&cuts)?;
    let loosen: Vec<HalfPlane> = cuts.iter().map(|h| HalfPlane::new(h.normal, h.offset + rng.gen_range(0.0..1.0))).collect();
    let b2 = c.cut(&loosen)?;
    let e = extend_body(&b, &c, settings)?;
    let e2 = extend_body(&b2, &c, settings)?;

    let step = seg_perimeter(&b) / settings.resolution as f64;
    let hausdorff = match e.special {
        Special::None => c.cut(&e.halfplanes).map_or(f64::INFINITY, |ec| {
            seg_vertices(&ec).iter().map(|v| b.project(*v).1).fold(0.0, f64::max)
        }),
        _ => f64::INFINITY,
    };

    // probes drawn around C at three times its extent
    let (wc, wr) = (center, 3.0 * (radius + c.inradius()) + 3.0);
    let mut monotone_fail = 0;
    let mut segment_fail = 0;
    let mut probes = 0;
    let mut tries = 0;
    while probes < C2_PROBES && tries < 20_000 {
        tries += 1;
        let x = wc + Vec2::new(rng.gen_range(-wr..=wr), rng.gen_range(-wr..=wr));
        if !e.interior_contains(x, 1e-9) {
            continue;
        }
        probes += 1;
        if !e2.contains(x, 1e-9 * (1.0 + x.norm())) {
            monotone_fail += 1;
        }
        if c.inside(x) {
            continue;
        }
        let y = loop {
            let y = c.sample_interior(&mut rng, center, radius, 1)[0];
            if !b.inside(y) {
                break Some(y);
            }
            if c.pieces().is_empty() {
                break None;
            }
        };
        if let Some(y) = y {
            let meets = b.line_interval(x, y - x).is_some_and(|(lo, hi)| hi >= -1e-9 && lo <= 1.0 + 1e-9);
            if !meets {
                segment_fail += 1;
            }
        }
    }
    Ok(Instance { hausdorff_ratio: hausdorff / step, monotone_fail, segment_fail, probes })
}

fn half_disk_deviation(settings: &Settings) -> Result<f64> {
    let c = catalog::unit_disk();
    let b = c.cut(&[hp(1.0, 0.0, 0.0)])?;
    let e = extend_body(&b, &c, settings)?;
    let want = [hp(1.0, 0.0, 0.0), hp(0.0, 1.0, 1.0), hp(0.0, -1.0, 1.0)];
    if e.halfplanes.len() != want.len() {
        return Ok(f64::INFINITY);
    }
    let mut worst: f64 = 0.0;
    for w in want {
        let got = e.halfplanes.iter().map(|h| h.normal.dist(w.normal) + (h.offset - w.offset).abs()).fold(f64::INFINITY, f64::min);
        worst = worst.max(got);
    }
    Ok(worst)
}

pub fn criterion_2(seed: u64, budget: &Budget) -> CriterionOutcome {
    outcome(2, "operator contracts on polygon-in-polygon instances", (|| {
        let s = Settings::default();
        let n = (budget.cases / 20).max(1);
        let runs: Vec<Result<Instance>> = (0..n).into_par_iter().map(|i| polygon_instance(seed.wrapping_add(i as u64), &s)).collect();
        let mut worst_ratio: f64 = 0.0;
        let (mut mono, mut seg, mut probes) = (0, 0, 0);
        for r in runs {
            let r = r?;
            worst_ratio = worst_ratio.max(r.hausdorff_ratio);
            mono += r.monotone_fail;
            seg += r.segment_fail;
            probes += r.probes;
        }
        let dev = half_disk_deviation(&s)?;
        let passed = worst_ratio <= C2_HAUSDORFF_STEPS && mono == 0 && seg == 0 && dev <= C2_HALF_DISK_TOL && probes > 0;
        Ok((
            passed,
            vec![
                ("instances", n as f64),
                ("max_hausdorff_steps", worst_ratio),
                ("monotonicity_failures", mono as f64),
                ("segment_failures", seg as f64),
                ("probes", probes as f64),
                ("half_disk_deviation", dev),
            ],
            String::new(),
        ))
    })())
}

pub fn criterion_3(seed: u64, budget: &Budget) -> CriterionOutcome {
    outcome(3, "covering index and empty intersection on the parabola", (|| {
        let s = Settings::default();
        let c = catalog::parabola();
        let up = (0..C3_LEVELS)
            .map(|k| Ok((k as f64, c.cut(&[hp(0.0, 1.0, k as f64)])?)))
            .collect::<Result<Vec<_>>>()?;
        let ext = extension_with_grade(LevelFamily::new(c.clone(), up)?, ExtensionGrade::Continuous, &s);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = C3_WINDOW;
        let pts: Vec<Vec2> = (0..budget.cases).map(|_| Vec2::new(rng.gen_range(-r..=r), rng.gen_range(-r..=r))).collect();
        let idx: Vec<Option<usize>> = pts.iter().map(|&p| ext.covering_index(p).ok()).collect();
        let uncovered = idx.iter().filter(|i| i.is_none()).count();
        let max_index = idx.iter().flatten().copied().max().unwrap_or(0);

        let down = (0..C3_DOWN_LEVELS)
            .map(|k| extend_body(&c.cut(&[hp(0.0, -1.0, -(k as f64))])?, &c, &s))
            .collect::<Result<Vec<_>>>()?;
        let not_excluded = pts
            .par_iter()
            .filter(|&&p| down.iter().all(|e| e.contains(p, s.tol * (1.0 + p.norm()))))
            .count();
        Ok((
            uncovered == 0 && not_excluded == 0,
            vec![
                ("points", pts.len() as f64),
                ("uncovered", uncovered as f64),
                ("max_covering_index", max_index as f64),
                ("not_excluded", not_excluded as f64),
            ],
            String::new(),
        ))
    })())
}

pub fn criterion_4(_seed: u64, _budget: &Budget) -> CriterionOutcome {
    outcome(4, "no-Lipschitz certificate trend on the unit disk", (|| {
        let s = Settings { k_max: C4_K_MAX, ..Settings::default() };
        let (_, cert) = gen_no_lip(&catalog::unit_disk(), &s)?;
        let increasing = cert.k_increasing(2, C4_K_MAX);
        let ratios: Vec<f64> = (C4_RATIO_FROM..C4_K_MAX).map(|k| cert.k_ratio(k)).collect();
        let rmin = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        let rmax = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let decreasing = cert.product.windows(2).all(|w| w[1] < w[0]);
        let last = cert.product[C4_K_MAX];
        let passed = increasing && rmin >= C4_RATIO.0 && rmax <= C4_RATIO.1 && decreasing && last < C4_PRODUCT_MAX;
        Ok((
            passed,
            vec![
                ("k_increasing", increasing as u8 as f64),
                ("ratio_min", rmin),
                ("ratio_max", rmax),
                ("product_decreasing", decreasing as u8 as f64),
                ("product_last", last),
                ("K_last", cert.k_bound[C4_K_MAX]),
            ],
            String::new(),
        ))
    })())
}

pub fn criterion_5(_seed: u64, _budget: &Budget) -> CriterionOutcome {
    outcome(5, "no-UC certificate trend on the parabola", (|| {
        let s = Settings { k_max: C5_K_MAX, ..Settings::default() };
        let (_, cert) = gen_no_uc(&catalog::parabola(), &s)?;
        let tail = cert.gap_tail_start();
        let last = cert.last_gap();
        let min_gap = cert.min_level_gap();
        let eventually = tail.is_some_and(|t| t <= cert.gaps.len() / 2);
        let passed = eventually && last < C5_GAP_MAX && min_gap >= cert.beta && cert.beta >= C5_BETA_MIN;
        Ok((
            passed,
            vec![
                ("tail_start", tail.map_or(f64::NAN, |t| (t + 1) as f64)),
                ("gap_last", last),
                ("min_level_gap", min_gap),
                ("beta", cert.beta),
            ],
            String::new(),
        ))
    })())
}

/// `B_k = C ∩ {y ≤ c_k}` with `c_k` spread over the vertical extent of `C` (squares
/// above the bottom when unbounded, which keeps extended corners apart), closed by `C`.
pub fn test_family(c: &Body2, levels: usize) -> Result<LevelFamily> {
    let lo = -c.support(Vec2::new(0.0, -1.0));
    let hi = c.support(Vec2::new(0.0, 1.0));
    let top = |k: usize| if hi.is_finite() { lo + (k + 1) as f64 * (hi - lo) / levels as f64 } else { lo + ((k + 1) * (k + 1)) as f64 };
    let mut entries = (0..levels - 1)
        .map(|k| Ok((k as f64, c.cut(&[hp(0.0, 1.0, top(k))])?)))
        .collect::<Result<Vec<_>>>()?;
    entries.push(((levels - 1) as f64, c.clone()));
    LevelFamily::new(c.clone(), entries)
}

pub fn criterion_6(seed: u64, budget: &Budget) -> CriterionOutcome {
    outcome(6, "classifier agreement on the canonical quartet", (|| {
        let s = Settings::default();
        let quartet = [
            ("disk", catalog::unit_disk(), ExtClass::UcExtendable),
            ("parabola", catalog::parabola(), ExtClass::CExtendable),
            ("square", catalog::square(), ExtClass::QcExtendable),
            ("exp_hypograph", catalog::exp_hypograph(), ExtClass::NotQcExtendable),
        ];
        let mut wrong = Vec::new();
        let (mut generators, mut suites) = (0, 0);
        for (name, c, want) in quartet {
            let cls = characterize(&c, &s);
            if cls.class != want {
                wrong.push(format!("{name}: {} != {}", cls.class, want));
            }
            match witness_all(&c, &cls, &s) {
                Ok(w) => generators += w.len(),
                Err(e) => wrong.push(format!("{name}: {e}")),
            }
            if cls.grants(Grade::Quasiconvex) {
                let ext = extend_function(test_family(&c, 6)?, &s)?;
                let (diff, viol, jump) = extension_properties(&ext, 10.0, budget.cases / 5, budget.cases, budget.grid.max(GRID_MIN), seed);
                let gap = ext.family().max_gap();
                let ok = diff == 0.0 && viol == 0 && jump.is_none_or(|j| j <= gap);
                let continuous_needed = cls.grants(Grade::Continuous) && jump.is_none();
                if !ok || continuous_needed {
                    wrong.push(format!("{name}: property suite (diff {diff}, violations {viol}, jump {jump:?})"));
                }
                suites += 1;
            }
        }
        Ok((
            wrong.is_empty(),
            vec![("generators_run", generators as f64), ("property_suites_run", suites as f64)],
            wrong.join("; "),
        ))
    })())
}

pub fn criterion_7(seed: u64, budget: &Budget) -> CriterionOutcome {
    outcome(7, "upper semicontinuous counterexample wiring", (|| {
        let (f, w) = gen_usc_counterexample();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst: f64 = 0.0;
        let mut bad = 0;
        let samples = (budget.cases / 10).max(1);
        for _ in 0..samples {
            // s on the segment, b in the ε-ball at (0, -1); (0, 0) = b/4 + 3s/4
            let eps: f64 = rng.gen_range(1e-6..=0.5);
            let sx = rng.gen_range(0.0..1.0f64).max(1e-300) * eps / 6.0;
            let s = Vec2::new(sx, 1.0 / 3.0);
            let b = Vec2::new(-3.0 * sx, -1.0);
            let comb = b * 0.25 + s * 0.75;
            worst = worst.max(comb.norm());
            let in_ball = b.dist(Vec2::new(0.0, -1.0)) <= eps;
            if !in_ball || f.eval(s) >= 0.5 || !(sx > 0.0 && sx < 1.0) {
                bad += 1;
            }
        }
        let origin = f.eval(Vec2::zero());
        let passed = w.f_bottom == 0.0 && w.f_origin == 1.0 && bad == 0 && worst <= 1e-15 && origin > 0.5;
        Ok((
            passed,
            vec![("f_bottom", w.f_bottom), ("f_origin", w.f_origin), ("samples", samples as f64), ("max_combination_residual", worst)],
            String::new(),
        ))
    })())
}

pub fn criterion_8(seed: u64, budget: &Budget) -> CriterionOutcome {
    outcome(8, "planted |xy| failure is flagged", (|| {
        let f = |p: Vec2| (p.x * p.y).abs();
        let r = quasiconvex_check(&f, &SampleDomain::rect(-1.0, 1.0, -1.0, 1.0), budget.cases, seed, C1_QC_TOL);
        let excess = r.worst.map_or(0.0, |w| w.excess);
        Ok((
            excess >= C8_MIN_EXCESS,
            vec![("triples", r.triples as f64), ("violations", r.violations as f64), ("worst_excess", excess)],
            String::new(),
        ))
    })())
}

pub fn all_criteria(seed: u64, budget: &Budget) -> Vec<CriterionOutcome> {
    vec![
        criterion_1(seed, budget),
        criterion_2(seed, budget),
        criterion_3(seed, budget),
        criterion_4(seed, budget),
        criterion_5(seed, budget),
        criterion_6(seed, budget),
        criterion_7(seed, budget),
        criterion_8(seed, budget),
    ]
}
