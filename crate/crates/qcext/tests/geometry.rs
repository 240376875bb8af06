use approx::assert_abs_diff_eq;
use qcext::geometry::catalog::{exp_hypograph, parabola, square, unit_disk};
use qcext::geometry::*;
use qcext::Settings;

fn v(x: f64, y: f64) -> Vec2 {
    Vec2::new(x, y)
}

/// Brute-force nearest boundary point of the parabola body by dense sampling plus
/// golden-section refinement.
fn parabola_projection_oracle(p: Vec2) -> (Vec2, f64) {
    let dist = |u: f64| v(u, u * u - 1.0).dist(p);
    let n = 200_000;
    let (mut bu, mut bd) = (0.0, f64::INFINITY);
    for i in 0..=n {
        let u = -10.0 + 20.0 * i as f64 / n as f64;
        let d = dist(u);
        if d < bd {
            bu = u;
            bd = d;
        }
    }
    let (mut a, mut b) = (bu - 1e-4, bu + 1e-4);
    let r = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..200 {
        let c = b - r * (b - a);
        let d = a + r * (b - a);
        if dist(c) < dist(d) {
            b = d;
        } else {
            a = c;
        }
    }
    let u = 0.5 * (a + b);
    (v(u, u * u - 1.0), dist(u))
}

#[test]
fn contains_examples() {
    let d = unit_disk();
    assert!(d.contains(v(0.0, 0.0), 1e-9));
    assert!(!d.contains(v(2.0, 0.0), 1e-9));
    assert!(parabola().contains(v(0.0, -1.0), 1e-9));
    assert!(d.contains(v(1.0 + 5e-10, 0.0), 1e-9));
    assert!(!d.contains(v(1.0 + 5e-9, 0.0), 1e-9));
}

#[test]
fn project_examples() {
    let (q, d) = unit_disk().project(v(0.0, 2.0));
    assert_abs_diff_eq!(q.x, 0.0, epsilon = 1e-12);
    assert_abs_diff_eq!(q.y, 1.0, epsilon = 1e-12);
    assert_abs_diff_eq!(d, 1.0, epsilon = 1e-12);
    let p = v(0.3, -0.2);
    assert_eq!(unit_disk().project(p), (p, 0.0));
    let (q, d) = parabola().project(v(0.0, -2.0));
    let (qo, dout) = parabola_projection_oracle(v(0.0, -2.0));
    assert_abs_diff_eq!(d, 1.0, epsilon = 1e-9);
    assert_abs_diff_eq!(d, dout, epsilon = 1e-9);
    assert_abs_diff_eq!(q.dist(qo), 0.0, epsilon = 1e-6);
}

#[test]
fn project_matches_oracle_on_parabola_exterior() {
    let c = parabola();
    for &(x, y) in &[(3.0, 0.0), (-2.0, -3.5), (0.5, -0.9), (7.0, 20.0), (-1.3, 0.2), (0.05, -5.0)] {
        let p = v(x, y);
        let (_, d) = c.project(p);
        let (_, dout) = parabola_projection_oracle(p);
        assert!((d - dout).abs() < 1e-8, "p={p:?} d={d} oracle={dout}");
    }
}

#[test]
fn support_examples() {
    assert_abs_diff_eq!(unit_disk().support(v(0.0, 1.0)), 1.0, epsilon = 1e-12);
    assert_eq!(parabola().support(v(0.0, 1.0)), f64::INFINITY);
    assert_abs_diff_eq!(parabola().support(v(0.0, -1.0)), 1.0, epsilon = 1e-12);
    let f = parabola().support_face(v(0.0, -1.0)).unwrap();
    assert_abs_diff_eq!(f.a.dist(v(0.0, -1.0)), 0.0, epsilon = 1e-9);
    // sup over the hypograph in direction (0, 1) is 1 but not attained
    let e = exp_hypograph();
    assert_abs_diff_eq!(e.support(v(0.0, 1.0)), 1.0, epsilon = 1e-12);
    assert!(e.support_face(v(0.0, 1.0)).is_none());
    let sq = square().support_face(v(1.0, 0.0)).unwrap();
    assert_abs_diff_eq!(sq.length(), 2.0, epsilon = 1e-12);
}

#[test]
fn supporting_normal_examples() {
    let a = unit_disk().supporting_normals(v(1.0, 0.0), 1e-9).unwrap();
    assert!(a.is_singleton(1e-12));
    assert_abs_diff_eq!(a.from.x, 1.0, epsilon = 1e-12);
    let a = square().supporting_normals(v(1.0, 1.0), 1e-9).unwrap();
    assert_abs_diff_eq!(a.from.dist(v(1.0, 0.0)), 0.0, epsilon = 1e-12);
    assert_abs_diff_eq!(a.to.dist(v(0.0, 1.0)), 0.0, epsilon = 1e-12);
    let hp = Body2::halfplanes(&[HalfPlane::new(v(0.0, 1.0), 1.0)]).unwrap();
    let a = hp.supporting_normals(v(5.0, 1.0), 1e-9).unwrap();
    assert!(a.is_singleton(1e-12));
    assert_abs_diff_eq!(a.from.y, 1.0, epsilon = 1e-12);
    assert!(matches!(unit_disk().supporting_normals(v(0.0, 0.0), 1e-9), Err(qcext::Error::InteriorPoint)));
    assert!(matches!(unit_disk().supporting_normals(v(3.0, 0.0), 1e-9), Err(qcext::Error::NotOnBoundary(_))));
}

/// Recession directions by testing `c + t v in C` for large `t` over sampled directions.
fn recession_oracle(c: &Body2) -> Vec<Vec2> {
    let w = c.witness();
    (0..720)
        .map(|i| Vec2::from_angle(i as f64 * std::f64::consts::PI / 360.0))
        .filter(|d| c.inside(w + *d * 1e6))
        .collect()
}

#[test]
fn recession_examples() {
    assert!(unit_disk().recession_cone().is_trivial());
    assert!(unit_disk().is_bounded());
    let r = parabola().recession_cone();
    assert_eq!(r.kind, ConeKind::Ray);
    assert_abs_diff_eq!(r.dirs[0].dist(v(0.0, 1.0)), 0.0, epsilon = 1e-12);
    let o = recession_oracle(&parabola());
    assert!(o.iter().all(|d| r.contains_dir(*d, 1e-3)));
    let r = exp_hypograph().recession_cone();
    assert_eq!(r.kind, ConeKind::Sector);
    assert!(r.contains_dir(v(1.0, 0.0), 1e-12) && r.contains_dir(v(0.0, -1.0), 1e-12));
    assert!(!r.contains_dir(v(-0.1, -1.0), 1e-12) && !r.contains_dir(v(1.0, 0.1), 1e-12));
    for d in recession_oracle(&exp_hypograph()) {
        assert!(r.contains_dir(d, 1e-9), "{d:?}");
    }
    assert!(square().recession_cone().is_trivial());
}

#[test]
fn asymptotic_slope_examples() {
    let s = Settings::default();
    let e = asymptotic_slope(v(0.0, 1.0), v(1.0, 0.0), &exp_hypograph(), &s).unwrap();
    assert!(e.slope.abs() < 1e-4);
    let e = asymptotic_slope(v(0.0, 2.0), v(1.0, 0.0), &unit_disk(), &s).unwrap();
    assert_abs_diff_eq!(e.slope, 1.0, epsilon = 1e-4);
    let e = asymptotic_slope(v(2.0, 0.0), v(1.0, 0.0), &parabola(), &s).unwrap();
    assert!(e.slope > 0.1);
    assert!(asymptotic_slope(v(0.0, -5.0), v(0.0, 1.0), &parabola(), &s).is_err());
}

#[test]
fn asymptotic_direction_examples() {
    let s = Settings::default();
    let (yes, x0) = is_asymptotic_direction(&exp_hypograph(), v(1.0, 0.0), &s);
    assert!(yes);
    assert_abs_diff_eq!(x0.unwrap().y, 1.0, epsilon = 1e-9);
    assert_eq!(is_asymptotic_direction(&parabola(), v(0.0, 1.0), &s), (false, None));
    for i in 0..16 {
        let d = Vec2::from_angle(i as f64 * 0.4);
        assert_eq!(is_asymptotic_direction(&unit_disk(), d, &s), (false, None));
        assert_eq!(is_asymptotic_direction(&square(), d, &s), (false, None));
    }
    assert!(asymptotic_directions(&parabola(), &s).is_empty());
    assert_eq!(asymptotic_directions(&exp_hypograph(), &s).len(), 1);
}

#[test]
fn delta_examples() {
    let d = delta_modulus(&unit_disk(), v(1.0, 0.0), 1.0, 2048, 1e-9).unwrap();
    assert_abs_diff_eq!(d, 1.0 - 3f64.sqrt() / 2.0, epsilon = 1e-9);
    let d = delta_modulus(&square(), v(1.0, 0.0), 0.5, 2048, 1e-9).unwrap();
    assert_abs_diff_eq!(d, 0.0, epsilon = 1e-12);
    assert_eq!(delta_modulus(&parabola(), v(0.0, -1.0), 0.0, 2048, 1e-9).unwrap(), 0.0);
    assert!(delta_modulus(&unit_disk(), v(1.0, 0.0), 2.5, 2048, 1e-9).is_err());
    assert!(delta_modulus(&unit_disk(), v(1.0, 0.0), -0.1, 2048, 1e-9).is_err());
}

#[test]
fn delta_resolution_converges() {
    for c in [unit_disk(), parabola(), square()] {
        let bs = c.sample_boundary(c.witness(), 3.0, 12);
        for bp in bs {
            let a = delta_modulus(&c, bp.p, 0.3, 2048, 1e-9).unwrap();
            let b = delta_modulus(&c, bp.p, 0.3, 4096, 1e-9).unwrap();
            assert!((a - b).abs() < 1e-4);
        }
    }
}

#[test]
fn cone_from_examples() {
    let c = cone_from(v(0.0, 2.0), &unit_disk(), 1e-9).unwrap();
    let t = v(3f64.sqrt() / 2.0, 0.5) - v(0.0, 2.0);
    let t2 = v(-3f64.sqrt() / 2.0, 0.5) - v(0.0, 2.0);
    let (t, t2) = (t.normalized(), t2.normalized());
    let hit = |d: Vec2| c.dirs.iter().any(|e| e.dist(d) < 1e-9);
    assert!(hit(t) && hit(t2));
    let c = cone_from(v(0.0, -2.0), &parabola(), 1e-9).unwrap();
    assert!(hit_dir(&c, (v(1.0, 0.0) - v(0.0, -2.0)).normalized()));
    assert!(hit_dir(&c, (v(-1.0, 0.0) - v(0.0, -2.0)).normalized()));
    let c = cone_from(v(1.0, 0.0), &unit_disk(), 1e-9).unwrap();
    assert_eq!(c.kind, ConeKind::HalfPlane);
    assert!(cone_from(v(0.0, 0.0), &unit_disk(), 1e-9).is_err());
}

fn hit_dir(c: &Cone2, d: Vec2) -> bool {
    c.dirs.iter().any(|e| e.dist(d) < 1e-8)
}

#[test]
fn gamma_set_examples() {
    let g = gamma_set(v(0.0, 2.0), &unit_disk(), 1e-9).unwrap();
    let pts = g.endpoints();
    let s = 3f64.sqrt() / 2.0;
    for q in [v(s, 0.5), v(-s, 0.5)] {
        assert!(pts.iter().any(|p| p.dist(q) < 1e-8), "{pts:?}");
    }
    let g = gamma_set(v(0.0, -2.0), &parabola(), 1e-9).unwrap();
    let pts = g.endpoints();
    for q in [v(1.0, 0.0), v(-1.0, 0.0)] {
        assert!(pts.iter().any(|p| p.dist(q) < 1e-7), "{pts:?}");
    }
    let g = gamma_set(v(2.0, 2.0), &square(), 1e-9).unwrap();
    let pts = g.endpoints();
    for q in [v(1.0, -1.0), v(-1.0, 1.0)] {
        assert!(pts.iter().any(|p| p.dist(q) < 1e-9), "{pts:?}");
    }
    assert!(g.is_bounded());
    assert!(gamma_set(v(0.0, 0.0), &unit_disk(), 1e-9).is_err());
}

#[test]
fn k_cone_examples() {
    let k = unit_disk().k_cone(v(1.0, 0.0), 1e-9).unwrap();
    assert_eq!(k.cuts().len(), 1);
    assert!(k.contains(v(1.0, 100.0), 0.0) && !k.contains(v(1.0 + 1e-6, 0.0), 0.0));
    let k = square().k_cone(v(1.0, 1.0), 1e-9).unwrap();
    assert_eq!(k.cuts().len(), 2);
    assert!(k.contains(v(1.0, -50.0), 0.0) && k.contains(v(-50.0, 1.0), 0.0) && !k.contains(v(1.1, 0.0), 0.0));
    let k = parabola().k_cone(v(0.0, -1.0), 1e-9).unwrap();
    assert_abs_diff_eq!(k.cuts()[0].normal.y, -1.0, epsilon = 1e-12);
    assert_abs_diff_eq!(k.cuts()[0].offset, 1.0, epsilon = 1e-12);
}

#[test]
fn json_round_trip_and_validation() {
    for c in [unit_disk(), parabola(), exp_hypograph(), square()] {
        let j = c.to_json();
        let d = Body2::from_json(&j).unwrap();
        assert_eq!(d.to_json(), j);
    }
    let bad = r#"{"kind":"polychain","vertices":[[0,0],[1,1],[1,0],[0,1]]}"#;
    assert!(Body2::from_json(bad).is_err());
    let col = r#"{"kind":"polychain","vertices":[[0,0],[1,0],[2,0],[0,1]]}"#;
    assert!(Body2::from_json(col).is_err());
    let plane = r#"{"kind":"halfplanes","items":[]}"#;
    assert!(Body2::from_json(plane).is_err());
    let empty = r#"{"kind":"halfplanes","items":[{"normal":[1,0],"offset":-1},{"normal":[-1,0],"offset":-1}]}"#;
    assert!(Body2::from_json(empty).is_err());
    let thin = r#"{"kind":"halfplanes","items":[{"normal":[1,0],"offset":0},{"normal":[-1,0],"offset":0}]}"#;
    assert!(Body2::from_json(thin).is_err());
    let wedge = r#"{"kind":"polychain","vertices":[[0,0]],"rays":[[-1,1],[1,1]]}"#;
    let w = Body2::from_json(wedge).unwrap();
    assert!(w.inside(v(0.0, 1.0)) && !w.inside(v(0.0, -0.1)));
    assert_eq!(w.recession_cone().kind, ConeKind::Sector);
    let poly = r#"{"kind":"epigraph","profile":"custom_poly","params":{"coeffs":[0,0,1]},"transform":[[1,0,0],[0,1,-1]]}"#;
    let p = Body2::from_json(poly).unwrap();
    assert!(p.inside(v(0.0, -0.99)) && !p.inside(v(0.0, -1.01)));
}

#[test]
fn cut_bodies_have_expected_pieces() {
    let half = unit_disk().cut(&[HalfPlane::new(v(1.0, 0.0), 0.0)]).unwrap();
    assert_eq!(half.pieces().len(), 2);
    assert!(!half.inside(v(0.1, 0.0)) && half.inside(v(-0.1, 0.0)));
    let (q, d) = half.project(v(0.5, 0.0));
    assert_abs_diff_eq!(q.x, 0.0, epsilon = 1e-12);
    assert_abs_diff_eq!(d, 0.5, epsilon = 1e-12);
    let (q, _) = half.project(v(1.0, 2.0));
    assert_abs_diff_eq!(q.dist(v(0.0, 1.0)), 0.0, epsilon = 1e-12);
    let strip = parabola().cut(&[HalfPlane::new(v(0.0, 1.0), 3.0)]).unwrap();
    assert!(strip.is_bounded());
    assert_abs_diff_eq!(strip.support(v(1.0, 0.0)), 2.0, epsilon = 1e-9);
}
