use proptest::prelude::*;
use qcext::extension::{extend_body, extend_function};
use qcext::geometry::halfplane::convex_hull;
use qcext::geometry::{catalog, Affine};
use qcext::levelset::{quasiconvex_check, staircase_qc, LevelFamily, SampleDomain};
use qcext::verify::minimize_witness;
use qcext::{Body2, HalfPlane, Settings, Vec2};

fn point() -> impl Strategy<Value = Vec2> {
    (-5.0..5.0f64, -5.0..5.0f64).prop_map(|(x, y)| Vec2::new(x, y))
}

fn polygon() -> impl Strategy<Value = Body2> {
    prop::collection::vec(point(), 3..12).prop_filter_map("degenerate hull", |pts| {
        let hull = convex_hull(&pts);
        if hull.len() < 3 {
            return None;
        }
        Body2::polygon(&hull).ok().filter(|b| b.inradius() > 1e-3)
    })
}

fn parabola_tops() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.2..3.0f64, 1..6).prop_map(|steps| {
        steps
            .iter()
            .scan(-0.5, |t, s| {
                *t += s;
                Some(*t)
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn projection_is_idempotent_and_nearest(b in polygon(), p in point(), q in point()) {
        let (x, d) = b.project(p);
        prop_assert!(b.contains(x, 1e-9));
        let (x2, d2) = b.project(x);
        prop_assert!(d2 <= 1e-9 && x2.dist(x) <= 1e-9);
        prop_assert!((d - p.dist(x)).abs() <= 1e-9);
        // any point of the body is at least as far
        let (y, _) = b.project(q);
        prop_assert!(p.dist(y) >= d - 1e-9);
    }

    #[test]
    fn support_bounds_members(b in polygon(), a in 0.0..std::f64::consts::TAU, p in point()) {
        let n = Vec2::from_angle(a);
        let s = b.support(n);
        let (x, _) = b.project(p);
        prop_assert!(n.dot(x) <= s + 1e-9);
        let f = b.support_face(n).unwrap();
        prop_assert!((n.dot(f.a) - s).abs() <= 1e-9 && (n.dot(f.b) - s).abs() <= 1e-9);
    }

    #[test]
    fn halfplane_normal_is_unit(x in -10.0..10.0f64, y in -10.0..10.0f64, c in -5.0..5.0f64, p in point()) {
        prop_assume!(x.hypot(y) > 1e-3);
        let h = HalfPlane::new(Vec2::new(x, y), c);
        prop_assert!((h.normal.norm() - 1.0).abs() < 1e-12);
        let raw = (x * p.x + y * p.y - c) / x.hypot(y);
        prop_assert!((h.value(p) - raw).abs() < 1e-9);
    }

    #[test]
    fn affine_inverse_round_trips(m in prop::array::uniform4(-3.0..3.0f64), t in point(), p in point()) {
        let a = Affine::from_rows([[m[0], m[1], t.x], [m[2], m[3], t.y]]);
        prop_assume!(a.det().abs() > 1e-2);
        let back = a.inverse().unwrap().apply(a.apply(p));
        prop_assert!(back.dist(p) < 1e-8 * (1.0 + p.norm()) / a.det().abs().min(1.0));
        prop_assert!(a.sigma_min() <= a.sigma_max() + 1e-12);
    }

    #[test]
    fn extension_agrees_with_family_on_ambient(tops in parabola_tops(), p in point()) {
        let c = catalog::parabola();
        let mut entries: Vec<(f64, Body2)> = tops
            .iter()
            .enumerate()
            .map(|(k, t)| (k as f64, c.cut(&[HalfPlane::new(Vec2::new(0.0, 1.0), *t)]).unwrap()))
            .collect();
        entries.push((tops.len() as f64, c.clone()));
        let fam = LevelFamily::new(c.clone(), entries).unwrap();
        let ext = extend_function(fam.clone(), &Settings::default()).unwrap();
        if c.inside(p) {
            prop_assert_eq!(ext.eval(p), fam.eval_levels(p, 0.0).unwrap());
        }
        // F is non-decreasing in the level index it reports
        let k = ext.covering_index(p).unwrap();
        prop_assert_eq!(ext.eval(p), fam.levels()[k]);
    }

    #[test]
    fn extended_bodies_are_monotone(t0 in -0.5..4.0f64, dt in 0.1..4.0f64, p in point()) {
        let c = catalog::parabola();
        let s = Settings::default();
        let cut = |t: f64| c.cut(&[HalfPlane::new(Vec2::new(0.0, 1.0), t)]).unwrap();
        let e0 = extend_body(&cut(t0), &c, &s).unwrap();
        let e1 = extend_body(&cut(t0 + dt), &c, &s).unwrap();
        if e0.contains(p, 0.0) {
            prop_assert!(e1.contains(p, 1e-9));
        }
        // closed form {v ≤ t, v ≥ 2a|u| - a² - 1}, a = √(t + 1)
        let a = (t0 + 1.0).sqrt();
        let inside = p.y <= t0 && p.y >= 2.0 * a * p.x.abs() - a * a - 1.0;
        let margin = (p.y - t0).abs().min((p.y - (2.0 * a * p.x.abs() - a * a - 1.0)).abs() / (1.0 + 4.0 * a * a).sqrt());
        if margin > 1e-6 {
            prop_assert_eq!(e0.contains(p, 0.0), inside);
        }
    }

    #[test]
    fn staircase_on_disks_matches_shifted_norm(steps in prop::collection::vec(0.2..1.0f64, 1..5), p in point()) {
        let mut radii = vec![0.3];
        for s in &steps {
            radii.push(radii.last().unwrap() + s);
        }
        let outer = radii.last().unwrap() + 1.0;
        let disk = |r: f64| Body2::disk(Vec2::zero(), r).unwrap();
        let bodies: Vec<Body2> = radii.iter().map(|r| disk(*r)).collect();
        let levels: Vec<f64> = radii.iter().map(|r| r - radii[0]).collect();
        let f = staircase_qc(&disk(outer), &bodies, &levels, &steps, &Settings::default()).unwrap();
        if p.norm() <= outer {
            prop_assert!((f.eval(p) - (p.norm() - radii[0]).max(0.0)).abs() < 1e-9);
        }
    }

    #[test]
    fn minimized_witness_fails(r in 0.5..3.0f64, w in point()) {
        let fails = |v: &[f64]| v[0].hypot(v[1]) > r;
        prop_assume!(fails(&[w.x, w.y]));
        let m = minimize_witness(&fails, &[w.x, w.y], &[0.0, 0.0], 30);
        prop_assert!(fails(&m));
        prop_assert!(m[0].hypot(m[1]) <= w.norm() + 1e-12);
    }

    #[test]
    fn convex_functions_pass_the_segment_test(a in -2.0..2.0f64, b in -2.0..2.0f64, seed in 0u64..1000) {
        let f = move |p: Vec2| a * p.x + b * p.y + p.norm2();
        let r = quasiconvex_check(&f, &SampleDomain::rect(-1.0, 1.0, -1.0, 1.0), 500, seed, 1e-9);
        prop_assert!(r.passed());
    }
}
