mod svg;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use qcext::counterexamples::{characterize, gen_usc_counterexample, Certificate, Generator, ForcingCertificate, NoLipCertificate, NoUCCertificate};
use qcext::extension::{extend_function, ExtensionResult};
use qcext::geometry::{asymptotic_directions, catalog, rotundity_probe, BodySpec, HalfPlaneSpec};
use qcext::levelset::{family_from_specs, FnKind, FunctionSpec, LevelFamily, SENTINEL};
use qcext::verify::{criteria::parabola_squares_family, run_suite, Budget, SUITES};
use qcext::{Body2, HalfPlane, Settings, Vec2};
use serde_json::json;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use svg::Svg;

#[derive(Parser, Debug)]
#[command(name = "qcext", version, about = "Quasiconvex extension of functions on planar convex bodies")]
struct Cli {
    #[command(flatten)]
    cfg: RunConfig,
    #[command(subcommand)]
    cmd: Command,
}

/// Shared numeric options. Flags win over `QCEXT_*` variables, which win over defaults.
#[derive(Args, Debug, Clone)]
struct RunConfig {
    /// Absolute tolerance for geometric predicates.
    #[arg(long, global = true, env = "QCEXT_TOL", default_value_t = 1e-9)]
    tol: f64,
    /// Boundary samples per body.
    #[arg(long, global = true, env = "QCEXT_RESOLUTION", default_value_t = 2048)]
    resolution: usize,
    /// Working window for unbounded geometry, in inscribed radii.
    #[arg(long, global = true, env = "QCEXT_WINDOW", default_value_t = 1024.0)]
    window: f64,
    #[arg(long, global = true, env = "QCEXT_SEED", default_value_t = 0)]
    seed: u64,
    /// Certificate rows.
    #[arg(long, global = true, env = "QCEXT_KMAX", default_value_t = 24)]
    kmax: usize,
    /// Grid side for CSV and SVG output.
    #[arg(long, global = true, env = "QCEXT_GRID", default_value_t = 256)]
    grid: usize,
    /// Output file (a directory for `certify`); stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

impl RunConfig {
    fn settings(&self) -> Result<Settings> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            bail!("--tol must be positive and finite");
        }
        if !(self.window > 0.0 && self.window.is_finite()) {
            bail!("--window must be positive and finite");
        }
        if self.resolution == 0 || self.kmax == 0 || self.grid < 2 {
            bail!("--resolution and --kmax must be positive and --grid at least 2");
        }
        Ok(Settings { tol: self.tol, resolution: self.resolution, window_mult: self.window, k_max: self.kmax, ..Settings::default() })
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build, validate or describe a body.
    Body {
        #[command(subcommand)]
        action: BodyCmd,
    },
    /// Extend a function given as JSON and write the grid of F as CSV.
    Extend {
        /// Function JSON file, or `-` for stdin.
        #[arg(long)]
        function: String,
        /// Domain for functions that carry none (catalog name or JSON file).
        #[arg(long)]
        body: Option<String>,
        /// Also write a contour plot.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Run a counterexample generator and write its certificate.
    Certify {
        #[arg(value_enum)]
        kind: CertKind,
        /// Catalog name or JSON file; each kind has a default body.
        #[arg(long)]
        body: Option<String>,
    },
    /// Print the extendability class of a body and its predicates.
    Characterize { body: String },
    /// Run a property suite (or `all`) and write the JSON report; exits 1 on failures.
    Verify {
        #[arg(default_value = "all")]
        suite: String,
        #[arg(long, value_enum, default_value_t = BudgetArg::Full)]
        budget: BudgetArg,
        /// Add the known non-quasiconvex case to the levelset suite.
        #[arg(long)]
        planted: bool,
    },
    /// Draw one of the construction figures as SVG.
    Plot {
        #[arg(value_enum)]
        figure: Figure,
        #[arg(long)]
        body: Option<String>,
        /// Function JSON for the `extension` figure; defaults to the parabola family.
        #[arg(long)]
        function: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
enum BodyCmd {
    /// `disk|rect|polygon|halfplanes VALUES...`, or a catalog name.
    Make {
        kind: String,
        #[arg(allow_negative_numbers = true)]
        values: Vec<f64>,
    },
    /// Parse body JSON (file or `-`) and print it canonically.
    Validate { input: String },
    /// Predicates of a body.
    Info { body: String },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CertKind {
    NoQc,
    NonRotund,
    NoUc,
    NoLip,
    Usc,
}

#[derive(Clone, Copy, Debug, PartialEq, ValueEnum)]
enum BudgetArg {
    Quick,
    Full,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Figure {
    /// tilde f of the no-UC construction on the parabola.
    TildeF,
    /// The sets D_k of the no-Lipschitz construction on the disk.
    Sets,
    /// Level curves of an extension.
    Extension,
}

/// 17 significant digits, so values reparse bit for bit.
fn f17(x: f64) -> String {
    if x == SENTINEL {
        "inf".into()
    } else {
        format!("{x:.16e}")
    }
}

fn read_input(src: &str) -> Result<String> {
    if src == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(src).with_context(|| format!("reading {src}"))
    }
}

fn load_body(src: &str) -> Result<Body2> {
    if let Some(b) = catalog::by_name(src) {
        return Ok(b);
    }
    Ok(Body2::from_json(&read_input(src)?)?)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn make_body(kind: &str, v: &[f64]) -> Result<Body2> {
    let pairs = |what: &str, k: usize| -> Result<()> {
        if v.is_empty() || v.len() % k != 0 {
            bail!("{what} needs values in groups of {k}");
        }
        Ok(())
    };
    Ok(match kind {
        "disk" if v.is_empty() => catalog::unit_disk(),
        "disk" => {
            if v.len() != 3 {
                bail!("disk needs CX CY R");
            }
            Body2::disk(Vec2::new(v[0], v[1]), v[2])?
        }
        "rect" => {
            if v.len() != 4 {
                bail!("rect needs X0 X1 Y0 Y1");
            }
            Body2::rect(v[0], v[1], v[2], v[3])?
        }
        "polygon" => {
            pairs("polygon", 2)?;
            Body2::polygon(&v.chunks(2).map(|c| Vec2::new(c[0], c[1])).collect::<Vec<_>>())?
        }
        "halfplanes" => {
            pairs("halfplanes", 3)?;
            let hs = v
                .chunks(3)
                .map(|c| HalfPlaneSpec { normal: [c[0], c[1]], offset: c[2] }.to_halfplane())
                .collect::<qcext::Result<Vec<HalfPlane>>>()?;
            Body2::halfplanes(&hs)?
        }
        name => match catalog::by_name(name) {
            Some(b) if v.is_empty() => b,
            _ => bail!("unknown body kind `{name}`"),
        },
    })
}

fn body_info(b: &Body2, s: &Settings) -> serde_json::Value {
    let probe = rotundity_probe(b, s);
    let rec = b.recession_cone();
    let asym: Vec<_> = if b.is_bounded() {
        vec![]
    } else {
        asymptotic_directions(b, s).into_iter().map(|(v, x0)| json!({"direction": [v.x, v.y], "anchor": [x0.x, x0.y]})).collect()
    };
    json!({
        "body": serde_json::from_str::<serde_json::Value>(&b.to_json()).expect("body JSON"),
        "bounded": b.is_bounded(),
        "polyhedral": b.is_polyhedral(),
        "inradius": b.inradius(),
        "rotund": probe.rotund,
        "min_delta": probe.min_delta,
        "longest_segment": probe.longest_segment,
        "recession_cone": {
            "kind": format!("{:?}", rec.kind).to_lowercase(),
            "dirs": [[rec.dirs[0].x, rec.dirs[0].y], [rec.dirs[1].x, rec.dirs[1].y]],
        },
        "asymptotic_directions": asym,
    })
}

/// Number of closed sublevel bodies used for the rectangle function.
const USC_LEVELS: usize = 8;

/// Level family whose extension `extend` writes. Staircases are closed by the ambient
/// body at the residual (or one more gap); the rectangle function by its closed sublevels.
fn family_for(spec: &FunctionSpec, body: Option<Body2>, s: &Settings) -> Result<LevelFamily> {
    let fam = match spec {
        FunctionSpec::Constant { value, domain } => {
            let amb = match (domain, body) {
                (Some(d), _) => Body2::from_spec(d.clone())?,
                (None, Some(b)) => b,
                (None, None) => bail!("a constant without a domain needs --body"),
            };
            LevelFamily::new(amb.clone(), vec![(*value, amb)])?
        }
        FunctionSpec::Levels { ambient, bodies, levels } => family_from_specs(ambient, bodies, levels)?,
        FunctionSpec::Staircase { ambient, bodies, levels, gaps, residual } => {
            let mut bodies = bodies.clone();
            let mut levels = levels.clone();
            let last = *levels.last().context("staircase without levels")?;
            let top = residual.unwrap_or(last + gaps.iter().copied().fold(0.0, f64::max).max(1.0));
            if top > last {
                bodies.push(ambient.clone());
                levels.push(top);
            }
            family_from_specs(ambient, &bodies, &levels)?
        }
        FunctionSpec::UscRectangle {} => {
            let c = Body2::rect(0.0, 1.0, -1.0, 1.0)?;
            let mut entries = Vec::new();
            for j in 0..USC_LEVELS {
                let t = j as f64 / USC_LEVELS as f64;
                entries.push((t, Body2::rect(0.0, 1.0, -1.0, t)?));
            }
            entries.push((1.0, c.clone()));
            LevelFamily::new(c, entries)?
        }
        other => {
            let kind = serde_json::to_value(other)?.get("kind").and_then(|k| k.as_str().map(String::from)).unwrap_or_default();
            bail!("function kind `{kind}` has no level-family form; use levels, staircase, constant or usc_rectangle")
        }
    };
    fam.check_nested(64, s)?;
    Ok(fam)
}

fn grid_bounds(fam: &LevelFamily, s: &Settings) -> (Vec2, Vec2, Vec2, f64) {
    let (center, radius) = fam.ambient().window(s.sample_mult);
    let r = if radius.is_finite() && radius > 0.0 { radius } else { 10.0 };
    (center - Vec2::new(r, r), center + Vec2::new(r, r), center, r)
}

fn extension_svg(ext: &ExtensionResult, lo: Vec2, hi: Vec2, values: &[f64], n: usize) -> String {
    let fam = ext.family();
    let mut plot = Svg::new(lo, hi);
    let step = |a: f64, b: f64, i: usize| a + (b - a) * i as f64 / (n - 1) as f64;
    let sd: Vec<f64> = (0..n * n)
        .map(|i| fam.ambient().signed_distance(Vec2::new(step(lo.x, hi.x, i % n), step(lo.y, hi.y, i / n))))
        .collect();
    plot.segments(&svg::contour(&sd, n, lo, hi, 0.0), "black", 1.4, false);
    for (k, w) in fam.levels().windows(2).enumerate() {
        let mid = 0.5 * (w[0] + w[1]);
        plot.segments(&svg::contour(values, n, lo, hi, mid), svg::color(k), 1.0, false);
    }
    plot.caption(&format!("level curves of F between consecutive levels ({} levels, grade {})", fam.len(), ext.grade().tag()));
    plot.finish()
}

fn cmd_extend(cfg: &RunConfig, s: &Settings, function: &str, body: Option<&str>, svg_out: Option<&Path>) -> Result<()> {
    let spec: FunctionSpec = serde_json::from_str(&read_input(function)?).context("parsing function JSON")?;
    let body = body.map(load_body).transpose()?;
    let fam = family_for(&spec, body, s)?;
    let hash = fam.hash();
    let ext = extend_function(fam, s)?;
    let (lo, hi, center, r) = grid_bounds(ext.family(), s);
    let n = cfg.grid;
    let values = ext.grid(lo, hi, n);

    let mut buf = Vec::new();
    writeln!(buf, "# family_hash={hash}")?;
    writeln!(buf, "# window={},{},{}", f17(center.x), f17(center.y), f17(r))?;
    writeln!(buf, "# resolution={}", s.resolution)?;
    writeln!(buf, "# grid={n}")?;
    writeln!(buf, "# grade={}", ext.grade().tag())?;
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record(["x", "y", "F"])?;
        for (i, v) in values.iter().enumerate() {
            let x = lo.x + (hi.x - lo.x) * (i % n) as f64 / (n - 1) as f64;
            let y = lo.y + (hi.y - lo.y) * (i / n) as f64 / (n - 1) as f64;
            w.write_record([f17(x), f17(y), f17(*v)])?;
        }
        w.flush()?;
    }
    emit(cfg.out.as_deref(), std::str::from_utf8(&buf)?)?;
    if let Some(p) = svg_out {
        fs::write(p, extension_svg(&ext, lo, hi, &values, n)).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

fn write_table(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
    w.write_record(header)?;
    for r in rows {
        w.write_record(r.iter().map(|x| f17(*x)))?;
    }
    w.flush()?;
    Ok(())
}

fn forcing_tables(dir: &Path, c: &ForcingCertificate) -> Result<()> {
    let header = ["index", "level", "normal_x", "normal_y", "offset", "chord", "witness_x", "witness_y", "witness_margin"];
    let rows = c.rows.iter().map(|r| {
        vec![r.index as f64, r.level, r.halfplane.normal[0], r.halfplane.normal[1], r.halfplane.offset, r.chord, r.witness[0], r.witness[1], r.witness_margin]
    });
    write_table(&dir.join("rows.csv"), &header, rows)
}

fn no_uc_tables(dir: &Path, c: &NoUCCertificate) -> Result<()> {
    let pts = c.points.iter().zip(&c.alphas).enumerate().map(|(n, (p, a))| vec![(n + 1) as f64, p[0], p[1], *a]);
    write_table(&dir.join("points.csv"), &["n", "y_x", "y_y", "alpha"], pts)?;
    let gaps = c.gaps.iter().enumerate().map(|(k, g)| vec![(k + 1) as f64, *g]);
    write_table(&dir.join("gaps.csv"), &["k", "gap"], gaps)
}

fn no_lip_tables(dir: &Path, c: &NoLipCertificate) -> Result<()> {
    let header = ["k", "z", "g", "delta", "alpha_next", "level", "pq_dist", "line_dist", "K", "product"];
    let rows = (0..c.delta.len()).map(|k| {
        vec![
            k as f64,
            c.profile[k][0],
            c.profile[k][1],
            c.delta[k],
            c.alphas[k + 1],
            c.levels[k],
            c.pq_dist[k],
            c.line_dist[k],
            c.k_bound[k],
            c.product[k],
        ]
    });
    write_table(&dir.join("k_table.csv"), &header, rows)
}

fn cmd_certify(cfg: &RunConfig, s: &Settings, kind: CertKind, body: Option<&str>) -> Result<()> {
    let gen = match kind {
        CertKind::NoQc => Generator::NoQc,
        CertKind::NonRotund => Generator::NonRotund,
        CertKind::NoUc => Generator::NoUc,
        CertKind::NoLip => Generator::NoLip,
        CertKind::Usc => {
            if body.is_some() {
                bail!("usc uses the fixed rectangle and takes no --body");
            }
            let (_, w) = gen_usc_counterexample();
            let text = serde_json::to_string_pretty(&json!({"certificate": "usc", "witness": w}))?;
            return match &cfg.out {
                Some(dir) => {
                    fs::create_dir_all(dir)?;
                    fs::write(dir.join("certificate.json"), text)?;
                    let pts = [[0.0, -1.0], [0.0, 0.0], [0.5, 1.0 / 3.0]];
                    let rows = pts.iter().map(|p| vec![p[0], p[1], qcext::counterexamples::usc_value(Vec2::new(p[0], p[1]))]);
                    write_table(&dir.join("values.csv"), &["x", "y", "f"], rows)
                }
                None => emit(None, &(text + "\n")),
            };
        }
    };
    let default = match gen {
        Generator::NoQc => "exp_hypograph",
        Generator::NonRotund => "square",
        Generator::NoUc => "parabola",
        Generator::NoLip => "disk",
    };
    let c = load_body(body.unwrap_or(default))?;
    let (_, cert) = gen.run(&c, s).with_context(|| format!("certify {}", gen.name()))?;
    let text = serde_json::to_string_pretty(&cert)?;
    let Some(dir) = &cfg.out else { return emit(None, &(text + "\n")) };
    fs::create_dir_all(dir)?;
    fs::write(dir.join("certificate.json"), &text)?;
    match &cert {
        Certificate::Forcing(c) => forcing_tables(dir, c)?,
        Certificate::NoUc(c) => no_uc_tables(dir, c)?,
        Certificate::NoLip(c) => no_lip_tables(dir, c)?,
    }
    Ok(())
}

fn cmd_verify(cfg: &RunConfig, suite: &str, budget: BudgetArg, planted: bool) -> Result<bool> {
    let b = if budget == BudgetArg::Quick { Budget::quick() } else { Budget::default() }.with_planted(planted);
    let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite] };
    let mut reports = Vec::new();
    for name in names {
        let r = run_suite(name, cfg.seed, &b)?;
        eprintln!("{}: {} cases, {} failures, {} ms", r.suite, r.cases, r.failures.len(), r.wall_time_ms);
        reports.push(r);
    }
    let passed = reports.iter().all(|r| r.passed());
    let hashes: Vec<String> = reports.iter().map(|r| r.content_hash()).collect();
    let doc = json!({"seed": cfg.seed, "budget": b, "passed": passed, "content_hashes": hashes, "suites": reports});
    emit(cfg.out.as_deref(), &(serde_json::to_string_pretty(&doc)? + "\n"))?;
    Ok(passed)
}

fn bounds_of(pts: &[Vec2], margin: f64) -> (Vec2, Vec2) {
    let lo = pts.iter().fold(Vec2::new(f64::INFINITY, f64::INFINITY), |a, p| Vec2::new(a.x.min(p.x), a.y.min(p.y)));
    let hi = pts.iter().fold(Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY), |a, p| Vec2::new(a.x.max(p.x), a.y.max(p.y)));
    (lo - Vec2::new(margin, margin), hi + Vec2::new(margin, margin))
}

fn sample_grid(lo: Vec2, hi: Vec2, n: usize, f: impl Fn(Vec2) -> f64) -> Vec<f64> {
    (0..n * n)
        .map(|i| {
            let x = lo.x + (hi.x - lo.x) * (i % n) as f64 / (n - 1) as f64;
            let y = lo.y + (hi.y - lo.y) * (i / n) as f64 / (n - 1) as f64;
            f(Vec2::new(x, y))
        })
        .collect()
}

/// The dashed line through `a` and `b`, clipped to a long segment.
fn long_line(plot: &mut Svg, a: Vec2, b: Vec2, reach: f64) {
    let d = (b - a).normalized() * reach;
    plot.line(a - d, a + d, "gray", true);
}

fn plot_tilde_f(s: &Settings, body: &Body2, n: usize) -> Result<String> {
    let gen = Generator::NoUc;
    let (f, cert) = gen.run(body, s).context("plot tilde-f")?;
    let Certificate::NoUc(cert) = cert else { unreachable!() };
    let shown: Vec<Vec2> = cert.points.iter().take(9).map(|p| Vec2::from(*p)).collect();
    let mut frame = shown.clone();
    frame.push(Vec2::from(cert.origin));
    let (lo, hi) = bounds_of(&frame, 1.0);
    let side = (hi.x - lo.x).max(hi.y - lo.y);
    let hi = lo + Vec2::new(side, side);
    let mut plot = Svg::new(lo, hi);
    let sd = sample_grid(lo, hi, n, |p| body.signed_distance(p));
    plot.segments(&svg::contour(&sd, n, lo, hi, 0.0), "black", 1.4, false);
    let values = sample_grid(lo, hi, n, |p| if body.inside(p) { f.eval(p) } else { f64::NAN });
    for (k, a) in cert.alphas.iter().enumerate().skip(1).step_by(2).take(4) {
        plot.segments(&svg::contour(&values, n, lo, hi, *a - 1e-9), svg::color(k), 1.0, false);
    }
    for w in shown.windows(2).step_by(2) {
        long_line(&mut plot, w[0], w[1], side);
    }
    for (i, p) in shown.iter().enumerate() {
        plot.dot(*p, &format!("y{}", i + 1));
    }
    plot.dot(Vec2::from(cert.origin), "0");
    plot.caption(&format!("tilde f on the body: level curves at odd levels, lines through y_n, y_n+1 (beta = {:.4})", cert.beta));
    Ok(plot.finish())
}

fn plot_sets(s: &Settings, body: &Body2, n: usize) -> Result<String> {
    let s = Settings { k_max: s.k_max.min(6), ..*s };
    let (f, cert) = Generator::NoLip.run(body, &s).context("plot sets")?;
    let Certificate::NoLip(cert) = cert else { unreachable!() };
    let FnKind::Composed { inner, .. } = f.kind() else { bail!("no-lip function is not composed") };
    let FnKind::Staircase(stair) = inner.kind() else { bail!("no-lip function has no staircase") };
    let e = (2.0 * cert.eps).max(1.0) + 0.1;
    let (lo, hi) = (Vec2::new(-0.1, -0.1), Vec2::new(e, e));
    let mut plot = Svg::new(lo, hi);
    let sd = sample_grid(lo, hi, n, |p| stair.ambient().signed_distance(p));
    plot.segments(&svg::contour(&sd, n, lo, hi, 0.0), "black", 1.4, false);
    for (k, d) in stair.bodies().iter().enumerate() {
        let sd = sample_grid(lo, hi, n, |p| d.signed_distance(p));
        plot.segments(&svg::contour(&sd, n, lo, hi, 0.0), svg::color(k), 1.0, false);
    }
    for l in cert.lines.iter().take(4) {
        long_line(&mut plot, Vec2::new(0.0, l.intercept), Vec2::new(1.0, l.intercept + l.slope), 2.0 * e);
    }
    for (k, (p, q)) in cert.p.iter().zip(&cert.q).enumerate().take(4) {
        plot.dot(Vec2::from(*p), &format!("P{k}"));
        plot.dot(Vec2::from(*q), &format!("Q{k}"));
    }
    plot.caption(&format!("D_k in frame coordinates with the lines l_k (eps = {:.4})", cert.eps));
    Ok(plot.finish())
}

fn cmd_plot(cfg: &RunConfig, s: &Settings, figure: Figure, body: Option<&str>, function: Option<&str>) -> Result<()> {
    let n = cfg.grid;
    let text = match figure {
        Figure::TildeF => plot_tilde_f(s, &load_body(body.unwrap_or("parabola"))?, n)?,
        Figure::Sets => plot_sets(s, &load_body(body.unwrap_or("disk"))?, n)?,
        Figure::Extension => {
            let fam = match function {
                Some(src) => {
                    let spec: FunctionSpec = serde_json::from_str(&read_input(src)?)?;
                    family_for(&spec, body.map(load_body).transpose()?, s)?
                }
                None => parabola_squares_family()?,
            };
            let ext = extend_function(fam, s)?;
            let (lo, hi, _, _) = grid_bounds(ext.family(), s);
            let values = ext.grid(lo, hi, n);
            extension_svg(&ext, lo, hi, &values, n)
        }
    };
    emit(cfg.out.as_deref(), &text)
}

fn run(cli: Cli) -> Result<bool> {
    let s = cli.cfg.settings()?;
    let cfg = &cli.cfg;
    match cli.cmd {
        Command::Body { action } => {
            let text = match action {
                BodyCmd::Make { kind, values } => make_body(&kind, &values)?.to_json(),
                BodyCmd::Validate { input } => {
                    let spec: BodySpec = serde_json::from_str(&read_input(&input)?).context("parsing body JSON")?;
                    Body2::from_spec(spec)?.to_json()
                }
                BodyCmd::Info { body } => serde_json::to_string_pretty(&body_info(&load_body(&body)?, &s))?,
            };
            emit(cfg.out.as_deref(), &(text + "\n"))?;
        }
        Command::Extend { function, body, svg } => cmd_extend(cfg, &s, &function, body.as_deref(), svg.as_deref())?,
        Command::Certify { kind, body } => cmd_certify(cfg, &s, kind, body.as_deref())?,
        Command::Characterize { body } => {
            let cls = characterize(&load_body(&body)?, &s);
            let text = format!("{}\n{}\n", cls.class, serde_json::to_string_pretty(&cls)?);
            emit(cfg.out.as_deref(), &text)?;
        }
        Command::Verify { suite, budget, planted } => return cmd_verify(cfg, &suite, budget, planted),
        Command::Plot { figure, body, function } => cmd_plot(cfg, &s, figure, body.as_deref(), function.as_deref())?,
    }
    Ok(true)
}

fn main() {
    match run(Cli::parse()) {
        Ok(true) => {}
        Ok(false) => std::process::exit(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(2);
        }
    }
}
