use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn qcext(args: &[&str]) -> Output {
    qcext_env(args, &[])
}

fn qcext_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qcext"));
    cmd.args(args);
    for k in ["QCEXT_TOL", "QCEXT_RESOLUTION", "QCEXT_WINDOW", "QCEXT_SEED", "QCEXT_KMAX", "QCEXT_GRID"] {
        cmd.env_remove(k);
    }
    cmd.envs(env.iter().copied());
    cmd.output().expect("run qcext")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "exit {:?}: {}", o.status.code(), String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(o)).unwrap()
}

/// `(x, y, F)` rows of an `extend` CSV, skipping comments and the header.
fn csv_rows(text: &str) -> Vec<[f64; 3]> {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with('x'))
        .map(|l| {
            let v: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
            [v[0], v[1], v[2]]
        })
        .collect()
}

fn header<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines().find_map(|l| l.strip_prefix(&format!("# {key}="))).unwrap()
}

#[test]
fn body_make_validate_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["body", "make", "disk", "1", "-2", "0.5"],
        vec!["body", "make", "rect", "-1", "2", "0", "3"],
        vec!["body", "make", "polygon", "0", "0", "2", "0", "1", "1"],
        vec!["body", "make", "halfplanes", "0", "-1", "0", "1", "0", "2"],
        vec!["body", "make", "parabola"],
    ] {
        let made = stdout(&qcext(&args));
        let path = dir.path().join("b.json");
        fs::write(&path, &made).unwrap();
        let again = stdout(&qcext(&["body", "validate", path.to_str().unwrap()]));
        assert_eq!(made, again, "{args:?}");
    }
}

#[test]
fn non_convex_polygon_is_rejected() {
    let o = qcext(&["body", "make", "polygon", "0", "0", "2", "0", "1", "0.2", "1", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("convex"));
}

#[test]
fn parabola_info() {
    let v = json(&qcext(&["body", "info", "parabola"]));
    assert_eq!(v["bounded"], false);
    assert_eq!(v["rotund"], true);
    assert_eq!(v["polyhedral"], false);
    assert_eq!(v["recession_cone"]["kind"], "ray");
    assert!(v["asymptotic_directions"].as_array().unwrap().is_empty());
    let v = json(&qcext(&["body", "info", "exp"]));
    assert!(!v["asymptotic_directions"].as_array().unwrap().is_empty());
}

#[test]
fn constant_extends_to_a_constant() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.json");
    fs::write(&f, r#"{"kind":"constant","value":2.5}"#).unwrap();
    let text = stdout(&qcext(&["--grid", "12", "extend", "--function", f.to_str().unwrap(), "--body", "disk"]));
    assert_eq!(header(&text, "grid"), "12");
    assert_eq!(header(&text, "grade"), "continuous");
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 144);
    assert!(rows.iter().all(|r| r[2] == 2.5));
}

#[test]
fn rectangle_function_is_usc_only() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.json");
    let svg = dir.path().join("f.svg");
    fs::write(&f, r#"{"kind":"usc_rectangle"}"#).unwrap();
    let text = stdout(&qcext(&["--grid", "16", "extend", "--function", f.to_str().unwrap(), "--svg", svg.to_str().unwrap()]));
    assert_eq!(header(&text, "grade"), "usc-only");
    assert_eq!(header(&text, "family_hash").len(), 64);
    let rows = csv_rows(&text);
    assert!(rows.iter().all(|r| (0.0..=1.0).contains(&r[2])));
    assert!(fs::read_to_string(&svg).unwrap().starts_with("<svg"));
}

#[test]
fn extend_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.json");
    fs::write(&f, r#"{"kind":"usc_rectangle"}"#).unwrap();
    let a = stdout(&qcext(&["--grid", "8", "extend", "--function", f.to_str().unwrap()]));
    let b = stdout(&qcext(&["--grid", "8", "extend", "--function", f.to_str().unwrap()]));
    assert_eq!(a, b);
}

#[test]
fn certify_no_lip_writes_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cert");
    stdout(&qcext(&["--kmax", "8", "--out", out.to_str().unwrap(), "certify", "no-lip"]));
    let cert: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("certificate.json")).unwrap()).unwrap();
    assert_eq!(cert["certificate"], "no_lip");
    let table = fs::read_to_string(out.join("k_table.csv")).unwrap();
    let mut lines = table.lines();
    assert_eq!(lines.next().unwrap(), "k,z,g,delta,alpha_next,level,pq_dist,line_dist,K,product");
    let products: Vec<f64> = lines.map(|l| l.rsplit(',').next().unwrap().parse().unwrap()).collect();
    // rows k = 0..=k_max
    assert_eq!(products.len(), 9);
    assert!(products.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn certify_reports_failed_hypothesis() {
    let o = qcext(&["certify", "no-uc", "--body", "disk"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unbounded"));
    let o = qcext(&["certify", "no-qc", "--body", "parabola"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn certify_usc_prints_witness() {
    let v = json(&qcext(&["certify", "usc"]));
    assert_eq!(v["certificate"], "usc");
    assert!(v["witness"].is_object());
}

#[test]
fn characterize_quartet() {
    for (body, class) in [("disk", "UC_EXTENDABLE"), ("parabola", "C_EXTENDABLE"), ("square", "QC_EXTENDABLE"), ("exp", "NOT_QC_EXTENDABLE")] {
        let text = stdout(&qcext(&["characterize", body]));
        assert_eq!(text.lines().next().unwrap(), class, "{body}");
    }
}

#[test]
fn verify_quick_suite() {
    let o = qcext(&["verify", "levelset", "--budget", "quick"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["seed"], 0);
    let o = qcext(&["verify", "levelset", "--budget", "quick", "--planted"]);
    assert_eq!(o.status.code(), Some(1));
    let o = qcext(&["verify", "nonsense", "--budget", "quick"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn flags_override_environment() {
    let run = |args: &[&str], env: &[(&str, &str)]| {
        let v: serde_json::Value = serde_json::from_str(&stdout(&qcext_env(args, env))).unwrap();
        v["seed"].as_u64().unwrap()
    };
    let args = ["verify", "levelset", "--budget", "quick"];
    assert_eq!(run(&args, &[("QCEXT_SEED", "7")]), 7);
    let with_flag = ["--seed", "3", "verify", "levelset", "--budget", "quick"];
    assert_eq!(run(&with_flag, &[("QCEXT_SEED", "7")]), 3);
    let o = qcext_env(&["body", "info", "disk"], &[("QCEXT_TOL", "-1")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn plots_are_svg() {
    let dir = tempfile::tempdir().unwrap();
    for fig in ["tilde-f", "sets", "extension"] {
        let path = dir.path().join(format!("{fig}.svg"));
        stdout(&qcext(&["--grid", "96", "--out", path.to_str().unwrap(), "plot", fig]));
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("<svg") && text.trim_end().ends_with("</svg>"), "{fig}");
        assert!(text.matches("<path").count() >= 3, "{fig}");
    }
    assert!(!Path::new("tilde-f.svg").exists());
}
