use qcext::geometry::{catalog, Affine};
use qcext::levelset::*;
use qcext::{Body2, Error, Settings, Vec2};

fn disk(r: f64) -> Body2 {
    Body2::disk(Vec2::zero(), r).unwrap()
}

#[test]
fn sha256_known_vector() {
    assert_eq!(sha256_hex(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

#[test]
fn family_levels_must_increase() {
    let e = LevelFamily::new(disk(3.0), vec![(1.0, disk(1.0)), (1.0, disk(2.0))]);
    assert!(matches!(e, Err(Error::Malformed(_))));
    assert!(LevelFamily::new(disk(3.0), vec![]).is_err());
    assert!(LevelFamily::new(disk(3.0), vec![(f64::NAN, disk(1.0))]).is_err());
}

#[test]
fn family_step_values() {
    let fam = LevelFamily::new(disk(3.0), vec![(0.0, disk(1.0)), (5.0, disk(2.0))]).unwrap();
    assert_eq!(fam.step(Vec2::new(0.5, 0.0), 0.0), 0.0);
    assert_eq!(fam.step(Vec2::new(1.0, 0.0), 0.0), 0.0);
    assert_eq!(fam.step(Vec2::new(1.5, 0.0), 0.0), 5.0);
    assert_eq!(fam.step(Vec2::new(2.5, 0.0), 0.0), SENTINEL);
    assert!(matches!(fam.eval_levels(Vec2::new(4.0, 0.0), 0.0), Err(Error::OutsideDomain)));
    assert_eq!(fam.max_gap(), 5.0);
    fam.check_nested(64, &Settings::default()).unwrap();
    let bad = LevelFamily::new(disk(3.0), vec![(0.0, disk(2.0)), (1.0, disk(1.0))]).unwrap();
    assert!(matches!(bad.check_nested(64, &Settings::default()), Err(Error::NotNested(0))));
}

#[test]
fn gap_distance_of_concentric_disks() {
    let d = gap_distance(&disk(1.0), &disk(2.5), &disk(4.0), &Settings::default()).unwrap();
    assert!((d - 1.5).abs() < 1e-9, "{d}");
    // the outer body reaching the ambient boundary leaves only the inner arc
    let d = gap_distance(&disk(1.0), &disk(4.0), &disk(4.0), &Settings::default()).unwrap();
    assert_eq!(d, f64::INFINITY);
}

#[test]
fn staircase_on_concentric_disks_is_a_shifted_norm() {
    let s = Settings::default();
    let radii = [0.5, 1.0, 2.0, 2.5];
    let bodies: Vec<Body2> = radii.iter().map(|r| disk(*r)).collect();
    let levels: Vec<f64> = radii.iter().map(|r| r - 0.5).collect();
    let gaps: Vec<f64> = radii.windows(2).map(|w| w[1] - w[0]).collect();
    let f = staircase_qc(&disk(4.0), &bodies, &levels, &gaps, &s).unwrap();
    assert_eq!(f.lipschitz, Some(1.0));
    for (x, y) in [(0.0f64, 0.0f64), (0.3, 0.1), (0.8, -0.4), (1.7, 0.2), (0.0, 2.2), (-3.0, 1.0)] {
        let p = Vec2::new(x, y);
        let want = (p.norm() - 0.5).max(0.0);
        assert!((f.eval(p) - want).abs() < 1e-9, "{p:?}: {} vs {want}", f.eval(p));
    }
    let capped = staircase_qc_capped(&disk(4.0), &bodies, &levels, &gaps, Some(2.5), &s).unwrap();
    assert_eq!(capped.eval(Vec2::new(3.9, 0.0)), 2.5);
}

#[test]
fn staircase_rejects_bad_gaps() {
    let s = Settings::default();
    let bodies = [disk(1.0), disk(2.0)];
    let e = staircase_qc(&disk(4.0), &bodies, &[0.0, 1.5], &[1.5], &s);
    assert!(matches!(e, Err(Error::GapViolation { index: 0, .. })), "{e:?}");
    assert!(staircase_qc(&disk(4.0), &bodies, &[0.0, 1.0], &[0.5], &s).is_err());
    assert!(staircase_qc(&disk(4.0), &bodies, &[0.0], &[], &s).is_err());
}

#[test]
fn tilde_f_levels_and_beta() {
    let pts = [Vec2::new(0.0, 0.0), Vec2::new(1.0, 1.0), Vec2::new(2.0, 4.0)];
    let f = tilde_f(&catalog::parabola(), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0), &pts, None).unwrap();
    let FnKind::TildeF(t) = f.kind() else { panic!("not tilde_f") };
    assert_eq!(t.alphas(), &[0.0, 1.0, 2.0]);
    assert_eq!(t.halfplanes().len(), 2);
    // min over (1 / √2, 1 / √10)
    assert!((t.beta() - 1.0 / 10f64.sqrt()).abs() < 1e-15);
    assert!((f.lipschitz.unwrap() - 2.0 * 10f64.sqrt()).abs() < 1e-12);
}

#[test]
fn tilde_f_rejects_bad_data() {
    let c = catalog::parabola();
    let h = Vec2::new(1.0, 0.0);
    let o = Vec2::new(0.0, 1.0);
    let two = [Vec2::new(0.0, 0.0), Vec2::new(1.0, 1.0)];
    assert!(tilde_f(&c, h, o, &two, None).is_err());
    let shifted = [Vec2::new(0.5, 0.25), Vec2::new(1.0, 1.0), Vec2::new(2.0, 4.0)];
    assert!(tilde_f(&c, h, o, &shifted, None).is_err());
    let back = [Vec2::new(0.0, 0.0), Vec2::new(2.0, 4.0), Vec2::new(1.0, 1.0)];
    assert!(tilde_f(&c, h, o, &back, None).is_err());
}

#[test]
fn compose_projection_scales() {
    let f = QCFunction::from_closure("norm", None, |p: Vec2| p.norm()).with_lipschitz(1.0);
    let a = Affine::from_rows([[2.0, 0.0, 1.0], [0.0, 2.0, 0.0]]);
    let g = compose_projection(&f, &a, None);
    assert_eq!(g.eval(Vec2::new(1.0, 1.0)), Vec2::new(3.0, 2.0).norm());
    assert_eq!(g.lipschitz, Some(2.0));
}

#[test]
fn mcshane_of_distance_is_distance() {
    let c = catalog::unit_disk();
    let a = Vec2::new(0.2, -0.3);
    let f = QCFunction::from_closure("dist", Some(c.clone()), move |p: Vec2| p.dist(a));
    let g = mcshane_extend(&f, &c, 1.0, 1, &Settings::default()).unwrap();
    for p in [Vec2::new(0.0, 0.0), Vec2::new(0.9, 0.1), Vec2::new(2.0, 1.0), Vec2::new(-3.0, 0.5)] {
        assert!((g.eval(p) - p.dist(a)).abs() < 1e-6, "{p:?}");
    }
}

#[test]
fn mcshane_rejects_negative_constant() {
    let c = catalog::unit_disk();
    let f = QCFunction::constant(0.0, Some(c.clone()));
    assert!(mcshane_extend(&f, &c, -1.0, 1, &Settings::default()).is_err());
}

#[test]
fn quasiconvex_check_oracles() {
    let dom = SampleDomain::rect(-1.0, 1.0, -1.0, 1.0);
    let r = quasiconvex_check(&|p: Vec2| p.norm(), &dom, 5000, 3, 1e-9);
    assert!(r.passed());
    assert_eq!(r.triples, 5000);
    // sup of the excess for |xy| on the square is 1/4, e.g. (1,0), (0,1), λ = 1/2
    let r = quasiconvex_check(&|p: Vec2| (p.x * p.y).abs(), &dom, 5000, 3, 1e-9);
    let w = r.worst.unwrap();
    assert!(w.excess > 0.2 && w.excess <= 0.25 + 1e-12, "{}", w.excess);
    let again = quasiconvex_check(&|p: Vec2| (p.x * p.y).abs(), &dom, 5000, 3, 1e-9);
    assert_eq!(r, again);
}

#[test]
fn modulus_and_lipschitz_of_norm() {
    let dom = SampleDomain::rect(-2.0, 2.0, -2.0, 2.0);
    let grid = [0.1, 0.2, 0.4, 0.8];
    let m = modulus_estimate(&|p: Vec2| p.norm(), &dom, &grid, 4000, 9);
    assert!(m.omega.windows(2).all(|w| w[1] >= w[0]));
    assert!(m.max_ratio() <= 1.0 + 1e-12);
    assert_eq!(m.at(0.0), 0.0);
    let l = lipschitz_estimate(&|p: Vec2| 3.0 * p.x, &dom, 2000, 9);
    assert!(l <= 3.0 + 1e-9 && l > 2.5, "{l}");
}

#[test]
fn function_spec_round_trip() {
    let s = Settings::default();
    let bodies = [disk(1.0), disk(2.0)];
    let f = staircase_qc(&disk(4.0), &bodies, &[0.0, 1.0], &[1.0], &s).unwrap();
    let spec = f.to_spec().unwrap();
    let json = serde_json::to_string(&spec).unwrap();
    let back: FunctionSpec = serde_json::from_str(&json).unwrap();
    assert_eq!(back, spec);
    let g = QCFunction::from_spec(&back, &s).unwrap();
    for p in [Vec2::new(0.3, 0.0), Vec2::new(1.5, 0.5), Vec2::new(3.0, -1.0)] {
        assert_eq!(f.eval(p), g.eval(p));
    }
    assert!(QCFunction::from_closure("anon", None, |_| 0.0).to_spec().is_none());
}

#[test]
fn affine_rows_validation() {
    assert!(affine_from_rows(&[vec![1.0, 0.0]]).is_ok());
    assert!(affine_from_rows(&[vec![1.0, 0.0, 2.0], vec![0.0, 1.0, 3.0]]).is_ok());
    assert!(affine_from_rows(&[vec![1.0]]).is_err());
    assert!(affine_from_rows(&[vec![f64::NAN, 0.0]]).is_err());
    assert!(affine_from_rows(&[]).is_err());
}
