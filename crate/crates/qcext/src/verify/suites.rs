use super::criteria::{max_adjacent_jump, parabola_squares_family};
use super::{fuzz_bodies, minimize_witness, random_polygon, Budget, Failure, Log};
use crate::counterexamples::{characterize, gen_no_lip, gen_no_qc, gen_no_uc, gen_non_rotund, ExtClass, Grade};
use crate::extension::{extend_body, extend_function, Special};
use crate::geometry::{asymptotic_directions, catalog, delta_modulus, gamma_set, Affine, ConeKind};
use crate::levelset::{
    compose_projection, mcshane_extend, modulus_estimate, quasiconvex_check, tilde_f, FnKind, LevelFamily, QCFunction,
    SampleDomain,
};
use crate::{Body2, HalfPlane, Result, Settings, Vec2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const POINTS_PER_BODY: usize = 20;

fn rng_for(seed: u64, i: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (i as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn xy(p: Vec2) -> Vec<f64> {
    vec![p.x, p.y]
}

fn rel(p: Vec2) -> f64 {
    1e-7 * (1.0 + p.norm())
}

/// Per-body geometric checks; returns `(cases, failures)`.
fn geometry_body(b: &Body2, case: usize, seed: u64, s: &Settings) -> (usize, Vec<Failure>) {
    let mut rng = rng_for(seed, case);
    let mut fails = Vec::new();
    let mut cases = 0;
    let (center, radius) = b.window(s.sample_mult);
    let anchor = b.witness();

    cases += 1;
    let trivial = b.recession_cone().kind == ConeKind::Point;
    if trivial != b.is_bounded() {
        fails.push(Failure::new("recession_trivial_iff_bounded", case, xy(anchor), format!("bounded {}", b.is_bounded())));
    }

    let inner = b.sample_interior(&mut rng, center, radius, POINTS_PER_BODY);
    for _ in 0..POINTS_PER_BODY {
        let p = center + Vec2::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)) * radius;
        cases += 1;
        let idem = |v: &[f64]| {
            let p = Vec2::new(v[0], v[1]);
            let (q, _) = b.project(p);
            let (q2, d2) = b.project(q);
            d2 > rel(q) || q2.dist(q) > rel(q)
        };
        if idem(&xy(p)) {
            let w = minimize_witness(&idem, &xy(p), &xy(anchor), 40);
            fails.push(Failure::new("project_idempotent", case, w, "projection moved a projected point"));
        }
        if b.inside(p) {
            continue;
        }
        let (q, d) = b.project(p);
        // p - q loses ~ulp(|q|)/d of direction, which tilts n into the recession cone
        if d <= 1e-4 * (1.0 + q.norm()) {
            continue;
        }
        let n = (p - q).normalized();
        cases += 1;
        let sup = b.support(n);
        let bad_support = (sup - n.dot(q)).abs() > rel(q) || inner.iter().any(|x| n.dot(*x) > sup + rel(*x));
        if bad_support {
            fails.push(Failure::new("supporting_inequality", case, xy(p), format!("support {sup} vs {}", n.dot(q))));
        }
        cases += 1;
        match b.k_cone(q, 1e-7 * (1.0 + q.norm())) {
            Ok(k) => {
                if let Some(x) = inner.iter().find(|x| !k.contains(**x, rel(**x))) {
                    fails.push(Failure::new("k_cone_contains_body", case, xy(*x), format!("apex {q:?}")));
                }
            }
            Err(e) => fails.push(Failure::new("k_cone_contains_body", case, xy(q), e.to_string())),
        }
        if b.is_bounded() {
            cases += 1;
            match gamma_set(p, b, s.tol) {
                Ok(arc) => {
                    // tangency points are seen from p without crossing the interior
                    let hidden = arc.endpoints().into_iter().find(|x| {
                        b.line_interval(p, *x - p).is_some_and(|(lo, hi)| hi > lo + 1e-6 && lo < 1.0 - 1e-6)
                    });
                    if !arc.is_bounded() || hidden.is_some() {
                        fails.push(Failure::new("gamma_set_tangent", case, xy(p), format!("hidden {hidden:?}")));
                    }
                }
                Err(e) => fails.push(Failure::new("gamma_set_tangent", case, xy(p), e.to_string())),
            }
        }
    }

    // δ(x, ·) is non-decreasing at one boundary point
    let (_, _, x, _) = b.nearest_boundary(anchor);
    let r = b.inradius();
    if r.is_finite() && r > 0.0 {
        cases += 1;
        let eps: Vec<f64> = (0..6).map(|i| 1.9 * r * (i + 1) as f64 / 6.0).collect();
        let ds: Result<Vec<f64>> = eps.iter().map(|e| delta_modulus(b, x, *e, 64, 1e-7 * (1.0 + x.norm()))).collect();
        match ds {
            Ok(ds) if ds.windows(2).all(|w| w[1] >= w[0] - 1e-9 * (1.0 + r)) => {}
            Ok(ds) => fails.push(Failure::new("delta_monotone", case, xy(x), format!("{ds:?}"))),
            Err(e) => fails.push(Failure::new("delta_monotone", case, xy(x), e.to_string())),
        }
    }

    // without asymptotic directions every finite support value is attained, and the
    // sublevel cut below it is bounded
    if !b.is_bounded() && asymptotic_directions(b, s).is_empty() {
        for i in 0..16 {
            let n = Vec2::from_angle(i as f64 * std::f64::consts::TAU / 16.0);
            let sup = b.support(n);
            if !sup.is_finite() {
                continue;
            }
            cases += 1;
            let face = b.support_face(n);
            let cut_bounded = b.cut(&[HalfPlane::new(-n, -(sup - 1.0))]).map(|c| c.is_bounded());
            let attained = face.is_some_and(|f| (n.dot(f.a) - sup).abs() <= rel(f.a));
            if !attained || (face.is_some_and(|f| f.bounded) && cut_bounded != Ok(true)) {
                fails.push(Failure::new("support_attained", case, xy(n), format!("support {sup}")));
            }
        }
    }
    (cases, fails)
}

pub(crate) fn geometry(seed: u64, budget: &Budget, log: &mut Log) -> Result<()> {
    let s = Settings::default();
    let mut bodies = vec![catalog::unit_disk(), catalog::parabola(), catalog::cosh_body(), catalog::square()];
    bodies.extend(fuzz_bodies(seed, (budget.cases / POINTS_PER_BODY).max(3)));
    let results: Vec<(usize, Vec<Failure>)> =
        bodies.par_iter().enumerate().map(|(i, b)| geometry_body(b, i, seed, &s)).collect();
    for (n, f) in results {
        log.add(n, f);
    }
    Ok(())
}

fn staircase_of(f: &QCFunction) -> Option<&crate::levelset::Staircase> {
    match f.kind() {
        FnKind::Staircase(s) => Some(s),
        FnKind::Composed { inner, .. } => staircase_of(inner),
        _ => None,
    }
}

pub(crate) fn levelset(seed: u64, budget: &Budget, log: &mut Log) -> Result<()> {
    let s = Settings { k_max: 8, ..Settings::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let per = (budget.cases / 10).max(10);

    // {f ≤ β_k} recovers D_k for the staircase behind the no-Lipschitz function
    let (f, _) = gen_no_lip(&catalog::unit_disk(), &s)?;
    let stair = staircase_of(&f).expect("gen_no_lip builds a staircase");
    let amb = stair.ambient();
    let (center, radius) = amb.window(2.0);
    let pts = amb.sample_interior(&mut rng, center, radius, per);
    let mut fails = Vec::new();
    for (k, (d, beta)) in stair.bodies().iter().zip(stair.levels()).enumerate() {
        for (i, &x) in pts.iter().enumerate() {
            let v = stair.eval(x);
            let wrong = (d.interior_distance(x) > 1e-9 && v > beta + 1e-12) || (d.project(x).1 > 1e-9 && v <= *beta);
            if wrong {
                fails.push(Failure::new("sublevel_recovery", k * pts.len() + i, xy(x), format!("f = {v}, level {beta}")));
            }
        }
    }
    log.add(pts.len() * stair.bodies().len(), fails);

    // tilde_f is (2/β) h-continuous along random pairs
    let (g, cert) = gen_no_uc(&catalog::parabola(), &s)?;
    let lip = 2.0 / cert.beta;
    let dom = SampleDomain::body(&catalog::parabola(), 8.0);
    let mut fails = Vec::new();
    for i in 0..per {
        let (Some(x), Some(y)) = (dom.sample(&mut rng), dom.sample(&mut rng)) else { continue };
        let y = x.lerp(y, rng.gen_range(0.0..0.2));
        let bound = lip * x.dist(y) + 1e-9;
        if (g.eval(x) - g.eval(y)).abs() > bound {
            fails.push(Failure::new("tilde_f_continuity", i, vec![x.x, x.y, y.x, y.y], format!("bound {bound}")));
        }
    }
    log.add(per, fails);
    let direct = tilde_f(
        &catalog::parabola(),
        Vec2::from(cert.h),
        Vec2::from(cert.origin),
        &cert.points.iter().map(|p| Vec2::from(*p)).collect::<Vec<_>>(),
        Some(cert.beta),
    )?;
    let x = Vec2::new(3.0, 10.0);
    log.check("tilde_f_rebuild", direct.eval(x) == g.eval(x), xy(x), "rebuilt tilde_f disagrees");

    // precomposing with a linear map keeps the quasiconvexity verdict
    let rect = SampleDomain::rect(-1.0, 1.0, -1.0, 1.0);
    let triples = (budget.triples / 10).max(100);
    for (name, base, qc) in [
        ("norm", QCFunction::from_closure("norm", None, |p: Vec2| p.norm()), true),
        ("abs_xy", QCFunction::from_closure("abs_xy", None, |p: Vec2| (p.x * p.y).abs()), false),
    ] {
        let m = [[rng.gen_range(0.5..2.0), rng.gen_range(-0.5..0.5)], [rng.gen_range(-0.5..0.5), rng.gen_range(0.5..2.0)]];
        let a = Affine { m, t: Vec2::zero() };
        let h = compose_projection(&base, &a, None);
        let r = quasiconvex_check(&|p| h.eval(p), &rect, triples, seed, 1e-9);
        log.check(&format!("compose_keeps_qc_{name}"), r.passed() == qc, vec![m[0][0], m[0][1], m[1][0], m[1][1]], format!("{} violations", r.violations));
    }

    // McShane of |x - a| on the disk agrees with it on the disk
    let disk = catalog::unit_disk();
    let a = Vec2::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
    let base = QCFunction::from_closure("dist_a", Some(disk.clone()), move |p: Vec2| p.dist(a));
    let ext = mcshane_extend(&base, &disk, 1.0, seed, &s)?;
    let probes = disk.sample_interior(&mut rng, Vec2::zero(), 1.0, per);
    let fails = probes
        .iter()
        .enumerate()
        .filter(|(_, p)| (ext.eval(**p) - p.dist(a)).abs() > 1e-6)
        .map(|(i, p)| Failure::new("mcshane_agrees", i, xy(*p), format!("{} vs {}", ext.eval(*p), p.dist(a))))
        .collect::<Vec<_>>();
    log.add(probes.len(), fails);

    // the sampled modulus of the norm is bounded by t
    let ts: Vec<f64> = (1..=8).map(|i| 0.05 * i as f64).collect();
    let table = modulus_estimate(&|p: Vec2| p.norm(), &rect, &ts, triples, seed);
    let over = table.t.iter().zip(&table.omega).find(|(t, w)| **w > **t + 1e-12);
    log.check("modulus_bound", over.is_none(), over.map_or(vec![], |(t, w)| vec![*t, *w]), "ω(t) > t");

    if budget.planted {
        let r = quasiconvex_check(&|p: Vec2| (p.x * p.y).abs(), &rect, triples, seed, 1e-9);
        let w = r.worst.map_or(vec![], |w| vec![w.x.x, w.x.y, w.y.x, w.y.y, w.lambda]);
        log.check("planted_abs_xy", r.passed(), w, "|xy| is not quasiconvex");
    }
    Ok(())
}

/// `B = C ∩ {wedge at p}` inside a random polygon, with a loosened copy.
fn polygon_pair(rng: &mut ChaCha8Rng) -> Result<(Body2, Body2, Body2)> {
    let c = random_polygon(rng, 10, 2.0);
    let (center, radius) = c.window(1.0);
    let p = c.sample_interior(rng, center, radius, 1)[0];
    let a: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let cuts = [
        HalfPlane::through(Vec2::from_angle(a), p),
        HalfPlane::through(Vec2::from_angle(a + rng.gen_range(-2.5..2.5)), p),
    ];
    let b = c.cut(&cuts)?;
    let loose: Vec<HalfPlane> = cuts.iter().map(|h| HalfPlane::new(h.normal, h.offset + rng.gen_range(0.05..1.0))).collect();
    let b2 = c.cut(&loose)?;
    Ok((c, b, b2))
}

pub(crate) fn extension(seed: u64, budget: &Budget, log: &mut Log) -> Result<()> {
    let s = Settings::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let instances = (budget.cases / 100).max(4);

    let mut fails = Vec::new();
    let mut cases = 0;
    for i in 0..instances {
        let (c, b, b2) = polygon_pair(&mut rng)?;
        let e = extend_body(&b, &c, &s)?;
        let e2 = extend_body(&b2, &c, &s)?;
        let (center, radius) = c.window(1.0);
        let wr = 3.0 * radius + 3.0;
        // e(B) ∩ C = B
        for x in c.sample_interior(&mut rng, center, radius, POINTS_PER_BODY) {
            cases += 1;
            let in_e = e.contains(x, 1e-9);
            let in_b = b.contains(x, 1e-9);
            if in_e != in_b && b.project(x).1 > 1e-6 && e.margin(x).abs() > 1e-6 {
                fails.push(Failure::new("trace_on_ambient", i, xy(x), format!("e {in_e}, B {in_b}")));
            }
        }
        for _ in 0..POINTS_PER_BODY {
            let x = center + Vec2::new(rng.gen_range(-wr..=wr), rng.gen_range(-wr..=wr));
            if !e.interior_contains(x, 1e-9) {
                continue;
            }
            cases += 1;
            if !e2.contains(x, 1e-9 * (1.0 + x.norm())) {
                fails.push(Failure::new("monotone", i, xy(x), "e(B) ⊄ e(B2)"));
            }
            if c.inside(x) {
                continue;
            }
            let y = c.sample_interior(&mut rng, center, radius, 8).into_iter().find(|y| !b.inside(*y));
            if let Some(y) = y {
                cases += 1;
                let meets = b.line_interval(x, y - x).is_some_and(|(lo, hi)| hi >= -1e-9 && lo <= 1.0 + 1e-9);
                if !meets {
                    fails.push(Failure::new("segment_meets_body", i, vec![x.x, x.y, y.x, y.y], "segment misses B"));
                }
            }
        }
    }
    log.add(cases, fails);

    // strict monotonicity on the parabola: e(B_k) sits inside the interior of e(B_{k+1})
    let c = catalog::parabola();
    let mut prev: Option<crate::extension::ExtendedBody> = None;
    for k in 0..6 {
        let cur = extend_body(&c.cut(&[HalfPlane::new(Vec2::new(0.0, 1.0), k as f64)])?, &c, &s)?;
        if let Some(p) = &prev {
            let body = p.as_body();
            let probe = body.as_ref().map(|bb| bb.sample_boundary(bb.witness(), 30.0, 32)).unwrap_or_default();
            let worst = probe.iter().map(|bp| cur.margin(bp.p)).fold(f64::INFINITY, f64::min);
            log.check("strict_monotone", worst > 0.0, vec![k as f64, worst], "boundary of e(B_k) touches e(B_{k+1})");
        }
        prev = Some(cur);
    }

    // the downward family has empty intersection of extended bodies
    let down: Vec<_> = (0..32)
        .map(|k| extend_body(&c.cut(&[HalfPlane::new(Vec2::new(0.0, -1.0), -(k as f64))])?, &c, &s))
        .collect::<Result<_>>()?;
    let mut fails = Vec::new();
    for i in 0..POINTS_PER_BODY {
        let x = Vec2::new(rng.gen_range(-25.0..25.0), rng.gen_range(-25.0..25.0));
        if down.iter().all(|e| e.contains(x, 1e-9) && e.special != Special::Empty) {
            fails.push(Failure::new("empty_intersection", i, xy(x), "point in every e(B_k)"));
        }
    }
    log.add(POINTS_PER_BODY, fails);

    // identity, quasiconvexity and continuity of F on the parabola family
    let fam = parabola_squares_family()?;
    let gap = fam.max_gap();
    let ext = extend_function(fam, &s)?;
    let pts = catalog::parabola().sample_interior(&mut rng, Vec2::new(0.0, 10.0), 15.0, per_points(budget));
    let fails = pts
        .iter()
        .enumerate()
        .filter_map(|(i, p)| {
            let want = ext.family().eval_levels(*p, 0.0).ok()?;
            (ext.eval(*p) != want).then(|| Failure::new("identity", i, xy(*p), format!("{} vs {want}", ext.eval(*p))))
        })
        .collect::<Vec<_>>();
    log.add(pts.len(), fails);
    let r = quasiconvex_check(&|p| ext.eval(p), &SampleDomain::rect(-20.0, 20.0, -20.0, 20.0), budget.triples, seed, 1e-9);
    let w = r.worst.map_or(vec![], |w| vec![w.x.x, w.x.y, w.y.x, w.y.y, w.lambda]);
    log.check("extension_qc", r.passed(), w, format!("{} violations", r.violations));
    // F is a step function, so the grid must resolve the corners of e(B_k); a small
    // window keeps that true at quick budgets
    let n = budget.grid.max(8);
    let jump = max_adjacent_jump(&ext.grid(Vec2::new(-5.0, -5.0), Vec2::new(5.0, 5.0), n), n);
    log.check("grid_continuity", jump <= gap, vec![jump, gap], "grid jump exceeds the level gap");
    Ok(())
}

fn per_points(budget: &Budget) -> usize {
    (budget.cases / 4).max(50)
}

pub(crate) fn counterexamples(seed: u64, budget: &Budget, log: &mut Log) -> Result<()> {
    let s = Settings { k_max: 12, ..Settings::default() };
    let mut bodies = vec![catalog::unit_disk(), catalog::square(), catalog::parabola()];
    bodies.extend(fuzz_bodies(seed, (budget.cases / 1000).max(3)));
    for (i, b) in bodies.iter().enumerate() {
        match gen_no_lip(b, &s) {
            Ok((_, cert)) => {
                let ok = cert.line_bound_holds(1e-9) && cert.k_bound.iter().all(|k| *k > 0.0 && k.is_finite());
                log.check("no_lip_certificate", ok, vec![i as f64], "line bound or K_k invalid");
            }
            Err(e) => log.check("no_lip_certificate", false, vec![i as f64], e.to_string()),
        }
    }

    let (_, cert) = gen_no_uc(&catalog::parabola(), &s)?;
    log.check("no_uc_gaps", cert.min_level_gap() >= cert.beta * (1.0 - 1e-6), vec![cert.min_level_gap(), cert.beta], "level gap below β");

    let (_, cert) = gen_no_qc(&catalog::exp_hypograph(), &s)?;
    log.check("no_qc_forcing", cert.holds(), vec![cert.min_increment()], "forcing rows fail");
    let tri = Body2::polygon(&[Vec2::new(0.0, 1.0), Vec2::new(1.0, -3.0), Vec2::new(2.0, 1.0)])?;
    for (name, c) in [("square", catalog::square()), ("triangle", tri)] {
        let (_, cert) = gen_non_rotund(&c, &s)?;
        log.check(&format!("non_rotund_{name}"), cert.holds(), vec![cert.min_increment()], "forcing rows fail");
    }

    // the classifier and the generators agree on what is possible
    for b in &bodies {
        let cls = characterize(b, &s);
        let consistent = match cls.class {
            ExtClass::UcExtendable => b.is_bounded() && cls.grants(Grade::Continuous),
            ExtClass::CExtendable => !cls.grants(Grade::UniformlyContinuous) && cls.grants(Grade::Quasiconvex),
            ExtClass::QcExtendable => !cls.grants(Grade::Continuous),
            ExtClass::NotQcExtendable => cls.predicates.has_asymptotic_direction,
            ExtClass::Trivial => cls.predicates.affine,
        };
        log.check("classifier_consistent", consistent, vec![], format!("{}", cls.class));
    }

    quotient_bound(&s, log)
}

/// For the disk staircase extended by `F`: moving from the contact point of `D_k` to its
/// projection on `l_{k+1}` must raise `F` by at least `β_{k+1} - β_k`.
fn quotient_bound(s: &Settings, log: &mut Log) -> Result<()> {
    let (f, cert) = gen_no_lip(&catalog::unit_disk(), s)?;
    let stair = staircase_of(&f).expect("gen_no_lip builds a staircase");
    let c = stair.ambient().clone();
    let entries: Vec<(f64, Body2)> = stair.levels().iter().copied().zip(stair.bodies().iter().cloned()).collect();
    let mut entries = entries;
    let top = entries.last().map_or(0.0, |e| e.0) + cert.eps;
    entries.push((top, c.clone()));
    let ext = extend_function(LevelFamily::new(c, entries)?, s)?;
    for k in 0..cert.lines.len().saturating_sub(1).min(stair.bodies().len() - 1) {
        let d = &stair.bodies()[k];
        let l = cert.lines[k + 1];
        let n = Vec2::new(l.slope, -1.0).normalized();
        let Some(face) = d.support_face(n) else { continue };
        let eta = cert.line_dist[k];
        if eta <= 1e3 * s.tol {
            continue;
        }
        let p = face.a - n * s.tol;
        let off = -l.intercept / Vec2::new(l.slope, -1.0).norm();
        let q = p - n * (n.dot(p) - off) + n * 1e-3 * eta;
        let rise = ext.eval(q) - ext.eval(p);
        let need = stair.levels()[k + 1] - stair.levels()[k];
        log.check("quotient_bound", rise >= need - 1e-12, vec![k as f64, rise, need], "F rises too little between l_k and D_k");
    }
    Ok(())
}

