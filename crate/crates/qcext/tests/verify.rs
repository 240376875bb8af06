use qcext::verify::*;
use qcext::Error;

fn assert_clean(r: &SuiteReport) {
    assert!(r.passed(), "{} failures: {:#?}", r.suite, &r.failures[..r.failures.len().min(5)]);
    assert!(r.cases > 0);
}

#[test]
fn geometry_suite_quick() {
    assert_clean(&run_suite("geometry", 7, &Budget::quick()).unwrap());
}

#[test]
fn levelset_suite_quick() {
    assert_clean(&run_suite("levelset", 7, &Budget::quick()).unwrap());
}

#[test]
fn extension_suite_quick() {
    assert_clean(&run_suite("extension", 7, &Budget::quick()).unwrap());
}

#[test]
fn counterexamples_suite_quick() {
    assert_clean(&run_suite("counterexamples", 7, &Budget::quick()).unwrap());
}

#[test]
fn reports_are_deterministic() {
    let a = run_suite("geometry", 11, &Budget::quick()).unwrap();
    let b = run_suite("geometry", 11, &Budget::quick()).unwrap();
    assert_eq!(a.content_hash(), b.content_hash());
    let c = run_suite("geometry", 12, &Budget::quick()).unwrap();
    assert_ne!(a.content_hash(), c.content_hash());
}

#[test]
fn planted_case_is_the_only_failure() {
    let r = run_suite("levelset", 3, &Budget::quick().with_planted(true)).unwrap();
    assert_eq!(r.failures.len(), 1);
    assert_eq!(r.failures[0].check, "planted_abs_xy");
    assert_eq!(r.failures[0].witness.len(), 5);
}

#[test]
fn unknown_suite() {
    assert!(matches!(run_suite("nope", 0, &Budget::quick()), Err(Error::UnknownSuite(s)) if s == "nope"));
}

#[test]
fn fuzz_bodies_are_seeded_and_contain_their_witness() {
    let a = fuzz_bodies(5, 30);
    let b = fuzz_bodies(5, 30);
    assert_eq!(a.len(), 30);
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.to_json(), y.to_json());
        assert!(x.contains(x.witness(), 1e-9));
    }
    for body in a.iter().filter(|b| b.is_bounded()) {
        assert_eq!(body.recession_cone().kind, qcext::ConeKind::Point);
    }
}

#[test]
fn minimized_witness_still_fails() {
    // fails outside the unit disk; the anchor passes
    let fails = |v: &[f64]| v[0] * v[0] + v[1] * v[1] > 1.0;
    let w = minimize_witness(&fails, &[3.0, 4.0], &[0.0, 0.0], 60);
    assert!(fails(&w));
    assert!((w[0].hypot(w[1]) - 1.0).abs() < 1e-9);
    assert_eq!(minimize_witness(&fails, &[3.0, 4.0], &[2.0, 0.0], 10), vec![2.0, 0.0]);
}
