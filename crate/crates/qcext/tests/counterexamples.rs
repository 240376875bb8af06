use qcext::counterexamples::*;
use qcext::geometry::catalog;
use qcext::{Body2, Settings, Vec2};

fn settings(k_max: usize) -> Settings {
    Settings { k_max, ..Settings::default() }
}

#[test]
fn projection_gauge() {
    let p = ProjectionMap::from_rows(&[[2.0, 0.0], [0.0, 0.5]]).unwrap();
    assert!((p.theta - 0.5).abs() < 1e-15);
    let p = ProjectionMap::from_rows(&[[3.0, 4.0]]).unwrap();
    assert!((p.theta - 5.0).abs() < 1e-15);
    assert!(ProjectionMap::from_rows(&[[1.0, 2.0], [2.0, 4.0]]).is_err());
    assert_eq!(ProjectionMap::identity().theta, 1.0);
}

#[test]
fn no_lip_disk_matches_closed_form() {
    let (f, cert) = gen_no_lip(&catalog::unit_disk(), &settings(20)).unwrap();
    assert_eq!(cert.normal, [1.0, 0.0]);
    assert_eq!(cert.scale, 1.0);
    assert_eq!(cert.eps, 0.5);
    for (k, d) in cert.delta.iter().enumerate().take(12) {
        let z = cert.eps / 2f64.powi(k as i32);
        let g = |z: f64| 1.0 - (1.0 - z * z).sqrt();
        let want = g(z) / 2.0 - g(z / 2.0);
        assert!((d - want).abs() < 1e-12, "k = {k}: {d} vs {want}");
    }
    // K_k -> θε 2^k / (2 (1 + ε²))
    let k = 20;
    let want = 0.5 * 2f64.powi(k) / (2.0 * 1.25);
    assert!((cert.k_bound[k as usize] / want - 1.0).abs() < 1e-3);
    assert!(cert.k_increasing(2, 20));
    assert!(cert.line_bound_holds(1e-12));
    // the staircase lives on the disk: 0 deep inside D_0, ε/2 near the contact point
    assert_eq!(f.eval(Vec2::new(0.0, 0.9)), 0.0);
    assert!((f.eval(Vec2::new(0.999, 0.0)) - 0.25).abs() < 1e-12);
}

#[test]
fn no_lip_square_grows_like_powers_of_two() {
    let (_, cert) = gen_no_lip(&catalog::square(), &settings(12)).unwrap();
    assert!(cert.delta.iter().all(|d| d.abs() < 1e-15));
    for k in 0..=12 {
        let want = cert.theta * cert.eps / (2f64.powi(k + 3) * 0.25f64.powi(k + 1));
        assert!((cert.k_bound[k as usize] / want - 1.0).abs() < 1e-12);
    }
}

#[test]
fn no_uc_parabola() {
    let (f, cert) = gen_no_uc(&catalog::parabola(), &settings(24)).unwrap();
    assert!(cert.points[0][0] - 1.0 < 1e-12 && cert.points[0][1].abs() < 1e-12);
    for w in cert.points.windows(2) {
        assert!((Vec2::from(w[0]).dist(Vec2::from(w[1])) - 1.0).abs() < 1e-9);
    }
    assert!((cert.beta - 2.0 / 5f64.sqrt()).abs() < 1e-4);
    assert!(cert.min_level_gap() >= cert.beta * (1.0 - 1e-6));
    assert_eq!(cert.gap_tail_start(), Some(0));
    assert_eq!(f.eval(Vec2::new(0.0, -0.5)), 0.0);
}

#[test]
fn no_uc_cosh_decays_faster() {
    let s = settings(16);
    let (_, p) = gen_no_uc(&catalog::parabola(), &s).unwrap();
    let (_, c) = gen_no_uc(&catalog::cosh_body(), &s).unwrap();
    assert!(c.last_gap() < p.last_gap());
}

#[test]
fn no_uc_hypotheses() {
    let s = settings(8);
    assert!(matches!(gen_no_uc(&catalog::unit_disk(), &s), Err(qcext::Error::Hypothesis(m)) if m.contains("unbounded")));
    assert!(matches!(gen_no_uc(&catalog::exp_hypograph(), &s), Err(qcext::Error::Hypothesis(_))));
}

#[test]
fn no_qc_hypograph_forcing() {
    let (f, cert) = gen_no_qc(&catalog::exp_hypograph(), &settings(24)).unwrap();
    assert!(cert.holds());
    assert_eq!(cert.rows.len(), NO_QC_WEDGES - 1);
    assert!(cert.min_increment() > 0.0);
    assert!(cert.levels.windows(2).all(|w| w[1] > w[0]));
    assert!(f.lipschitz.unwrap() > 0.0);
}

#[test]
fn no_qc_rejects_bodies_without_asymptotes() {
    let s = settings(8);
    assert!(gen_no_qc(&catalog::unit_disk(), &s).is_err());
    assert!(gen_no_qc(&catalog::parabola(), &s).is_err());
}

#[test]
fn non_rotund_triangle_and_square() {
    let s = settings(10);
    let tri = Body2::polygon(&[Vec2::new(0.0, 1.0), Vec2::new(1.0, -3.0), Vec2::new(2.0, 1.0)]).unwrap();
    for c in [tri, catalog::square()] {
        let (_, cert) = gen_non_rotund(&c, &s).unwrap();
        assert!(cert.holds());
        let (lo, hi) = cert.jump.unwrap();
        assert_eq!(lo, 0.0);
        assert!(hi > lo);
    }
    assert!(gen_non_rotund(&catalog::unit_disk(), &s).is_err());
}

#[test]
fn classifier_quartet() {
    let s = settings(8);
    let cases = [
        (catalog::unit_disk(), ExtClass::UcExtendable),
        (catalog::parabola(), ExtClass::CExtendable),
        (catalog::square(), ExtClass::QcExtendable),
        (catalog::exp_hypograph(), ExtClass::NotQcExtendable),
    ];
    for (c, want) in cases {
        let cls = characterize(&c, &s);
        assert_eq!(cls.class, want);
        witness_all(&c, &cls, &s).unwrap();
    }
}

#[test]
fn half_plane_is_not_qc_extendable() {
    let c = Body2::halfplanes(&[qcext::HalfPlane::new(Vec2::new(0.0, 1.0), 0.0)]).unwrap();
    assert_eq!(characterize(&c, &Settings::default()).class, ExtClass::NotQcExtendable);
}

#[test]
fn usc_witness_values() {
    let (f, w) = gen_usc_counterexample();
    assert_eq!(w.f_bottom, 0.0);
    assert_eq!(w.f_origin, 1.0);
    assert_eq!(f.eval(Vec2::new(0.5, 0.5)), 0.5);
}
