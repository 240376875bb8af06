use qcext::extension::{covering_index, extend_body, extend_function, relative_boundary, ExtensionGrade, Special};
use qcext::geometry::catalog;
use qcext::levelset::LevelFamily;
use qcext::{Body2, HalfPlane, Settings, Vec2};

fn hp(nx: f64, ny: f64, c: f64) -> HalfPlane {
    HalfPlane::new(Vec2::new(nx, ny), c)
}

fn parabola_family(levels: &[f64]) -> LevelFamily {
    let c = catalog::parabola();
    let entries = levels.iter().map(|&k| (k, c.cut(&[hp(0.0, 1.0, k)]).unwrap())).collect();
    LevelFamily::new(c, entries).unwrap()
}

#[test]
fn relative_boundary_interior_body_is_whole_boundary() {
    let s = Settings::default();
    let c = Body2::rect(-10.0, 10.0, -10.0, 10.0).unwrap();
    let b = catalog::square();
    let rb = relative_boundary(&b, &c, &s).unwrap();
    assert_eq!(rb.parts.len(), 4);
    assert!((rb.length() - 8.0).abs() < 1e-12);
}

#[test]
fn relative_boundary_of_half_disk_is_the_diameter() {
    let s = Settings::default();
    let c = catalog::unit_disk();
    let b = c.cut(&[hp(1.0, 0.0, 0.0)]).unwrap();
    let rb = relative_boundary(&b, &c, &s).unwrap();
    assert_eq!(rb.parts.len(), 1);
    let mut ends = rb.endpoints();
    ends.sort_by(|a, b| a.y.total_cmp(&b.y));
    assert!(ends[0].dist(Vec2::new(0.0, -1.0)) < 1e-12);
    assert!(ends[1].dist(Vec2::new(0.0, 1.0)) < 1e-12);
    assert!(relative_boundary(&c, &c, &s).unwrap().is_empty());
}

#[test]
fn relative_boundary_rejects_non_subset() {
    let s = Settings::default();
    let c = catalog::unit_disk();
    let b = Body2::rect(0.0, 2.0, 0.0, 2.0).unwrap();
    assert!(relative_boundary(&b, &c, &s).is_err());
}

#[test]
fn extend_square_inside_square_is_itself() {
    let s = Settings::default();
    let c = Body2::rect(-10.0, 10.0, -10.0, 10.0).unwrap();
    let e = extend_body(&catalog::square(), &c, &s).unwrap();
    assert_eq!(e.halfplanes.len(), 4);
    for p in [Vec2::new(1.0, 1.0), Vec2::new(-1.0, 0.5), Vec2::new(0.0, 0.0)] {
        assert!(e.contains(p, 1e-12));
    }
    for p in [Vec2::new(1.01, 0.0), Vec2::new(0.0, -1.01)] {
        assert!(!e.contains(p, 1e-12));
    }
}

#[test]
fn extend_half_plane_in_half_plane() {
    let s = Settings::default();
    let c = Body2::halfplanes(&[hp(0.0, 1.0, 1.0)]).unwrap();
    let b = Body2::halfplanes(&[hp(0.0, 1.0, 0.0)]).unwrap();
    let e = extend_body(&b, &c, &s).unwrap();
    assert_eq!(e.halfplanes.len(), 1);
    assert!((e.halfplanes[0].normal.y - 1.0).abs() < 1e-15 && e.halfplanes[0].offset.abs() < 1e-15);
}

#[test]
fn extend_half_disk_closed_form() {
    let s = Settings::default();
    let c = catalog::unit_disk();
    let b = c.cut(&[hp(1.0, 0.0, 0.0)]).unwrap();
    let e = extend_body(&b, &c, &s).unwrap();
    assert_eq!(e.special, Special::None);
    assert_eq!(e.halfplanes.len(), 3);
    let expect = [hp(1.0, 0.0, 0.0), hp(0.0, 1.0, 1.0), hp(0.0, -1.0, 1.0)];
    for want in expect {
        let got = e.halfplanes.iter().find(|h| h.normal.dot(want.normal) > 0.999).unwrap();
        assert!(got.normal.dist(want.normal) < 1e-6 && (got.offset - want.offset).abs() < 1e-6);
    }
    assert!(extend_body(&c, &c, &s).unwrap().special == Special::Plane);
}

#[test]
fn covering_index_parabola() {
    let s = Settings::default();
    let levels: Vec<f64> = (0..40).map(|k| k as f64).collect();
    let fam = parabola_family(&levels);
    assert_eq!(covering_index(&fam, Vec2::new(0.0, 0.0), &s).unwrap(), 0);
    // e(B_k) = {v <= k, v >= 2a|u| - a^2 - 1} with a = sqrt(k + 1)
    let k = covering_index(&fam, Vec2::new(0.0, -5.0), &s).unwrap();
    assert_eq!(k, 3);
    let k = covering_index(&fam, Vec2::new(2.0, -5.0), &s).unwrap();
    // a^2 - 4a - 4 >= 0 first holds at a^2 = 24
    assert_eq!(k, 23);
}

#[test]
fn covering_index_fails_above_asymptote() {
    let s = Settings::default();
    let c = catalog::exp_hypograph();
    // t-axis along x; the asymptote is s = 1
    let levels: Vec<f64> = (0..20).map(|k| k as f64).collect();
    let entries = levels.iter().map(|&k| (k, c.cut(&[hp(1.0, 0.0, k)]).unwrap())).collect();
    let fam = LevelFamily::new(c, entries).unwrap();
    let err = covering_index(&fam, Vec2::new(0.0, 1.5), &s).unwrap_err();
    assert_eq!(err, qcext::Error::NotCovered(19));
}

#[test]
fn extension_matches_family_on_c() {
    let s = Settings::default();
    let fam = parabola_family(&[0.0, 1.0, 3.0, 8.0]);
    let ext = extend_function(fam.clone(), &s).unwrap();
    assert_eq!(ext.grade(), ExtensionGrade::Continuous);
    for p in [Vec2::new(0.0, 0.5), Vec2::new(1.0, 2.5), Vec2::new(-2.0, 7.0), Vec2::new(0.2, -0.5)] {
        assert_eq!(ext.eval(p), fam.step(p, 0.0));
    }
    assert_eq!(ext.eval(Vec2::new(0.0, -3.0)), 1.0);
    assert_eq!(ext.eval(Vec2::new(0.0, -1.5)), 0.0);
}
