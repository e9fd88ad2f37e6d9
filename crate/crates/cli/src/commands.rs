//! The subcommands. Each resolves its parameters, runs the library and
//! emits one JSON report.

use std::fs::File;
use std::path::{Path, PathBuf};

use clap::Args;
use serde_json::{json, Value};

use orbit_lift::analysis::{
    critical_exponent_scan, lp_derivative_norm, norms::holder_quotient, p_grid, weak_lp_quasinorm_regular, ScanFamily,
    ScanOptions,
};
use orbit_lift::covers::select_cover;
use orbit_lift::io;
use orbit_lift::lifting::{continuous_radical, continuous_roots, lift_grid_2d, tuple_distance, Grid2DOutcome};
use orbit_lift::reduction::{
    check_admissible, check_derivative_bounds, dominant_index, maximal_admissible_interval, radical_selections,
};
use orbit_lift::{Curve, Grid, Lift, LiftConfig, Refinement, Spec, Tuple, C};

use crate::config::{parse_usizes, Resolver};
use crate::preset::PolyCurve;
use crate::{warn, Cli, CliError, Command, Common, SCHEMA};

type Oracle<'a> = &'a (dyn Fn(f64) -> Vec<C<f64>> + Sync);

pub fn run(cli: Cli) -> Result<(), CliError> {
    let mut r = Resolver::from_file(cli.common.config.as_deref())?;
    let (name, result) = match cli.command {
        Command::Radical(a) => ("radical", radical(&mut r, &cli.common, a)?),
        Command::Roots(a) => ("roots", roots(&mut r, &cli.common, a)?),
        Command::Scan(a) => ("scan", scan(&mut r, &cli.common, a)?),
        Command::Cover(a) => ("cover", cover(&mut r, a)?),
        Command::Verify(a) => ("verify", verify(&mut r, a)?),
        Command::Qdist(a) => ("qdist", qdist(&mut r, a)?),
        Command::Grid2d(a) => ("grid2d", grid2d(&mut r, &cli.common, a)?),
    };
    let Output { report, files, failure } = result;
    let doc = json!({
        "schema": SCHEMA,
        "command": name,
        "config": Value::Object(r.into_map()),
        "result": report,
    });
    let text = serde_json::to_string_pretty(&doc).expect("reports serialize");
    println!("{text}");
    if let Some(dir) = &cli.common.out {
        std::fs::create_dir_all(dir).map_err(|e| CliError::input(format!("{}: {e}", dir.display())))?;
        write_file(&dir.join("report.json"), text.as_bytes())?;
        for (file, bytes) in files {
            write_file(&dir.join(file), &bytes)?;
        }
    }
    match failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

struct Output {
    report: Value,
    /// Extra tables written to `--out`.
    files: Vec<(&'static str, Vec<u8>)>,
    /// Reported after the report itself has been printed.
    failure: Option<CliError>,
}

impl Output {
    fn new(report: Value) -> Self {
        Self {
            report,
            files: Vec::new(),
            failure: None,
        }
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn open(path: &Path) -> Result<File, CliError> {
    File::open(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn read_curve(path: &Path) -> Result<Curve, CliError> {
    io::read_curve(open(path)?).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn lift_config(r: &mut Resolver, c: &Common) -> Result<LiftConfig<f64>, CliError> {
    let d = LiftConfig::<f64>::default();
    Ok(LiftConfig {
        tol: r.value("tol", c.tol, d.tol)?,
        zero_tol: r.value("zero_tol", c.zero_tol, d.zero_tol)?,
        max_depth: r.value("max_depth", c.max_depth, d.max_depth)?,
        ..d
    })
}

fn exponents(r: &mut Resolver, flag: Option<String>) -> Result<Vec<f64>, CliError> {
    let ps = r.reals("p", flag, "1,1.5")?;
    if ps.iter().any(|p| !(*p >= 1.0)) {
        return Err(CliError::input("`p`: exponents must be >= 1"));
    }
    Ok(ps)
}

/// A curve read from CSV, or a polynomial preset sampled uniformly.
struct Source {
    curve: Curve,
    poly: Option<PolyCurve>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct SourceArgs {
    /// CSV curve `t,re_1,im_1,...`.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Interval `a,b` for a polynomial preset.
    #[arg(long)]
    interval: Option<String>,
    /// Uniform nodes for a polynomial preset.
    #[arg(long)]
    nodes: Option<usize>,
}

fn source(r: &mut Resolver, args: &SourceArgs, key: &str, preset: Option<String>) -> Result<Source, CliError> {
    let input = r.optional("input", args.input.as_ref().map(|p| p.display().to_string()))?;
    let preset = r.optional(key, preset)?;
    match (input, preset) {
        (Some(path), None) => Ok(Source {
            curve: read_curve(Path::new(&path))?,
            poly: None,
        }),
        (None, Some(raw)) => {
            let poly = PolyCurve::parse(key, &raw)?;
            let iv = r.reals("interval", args.interval.clone(), "-1,1")?;
            if iv.len() != 2 {
                return Err(CliError::input("`interval`: expected `a,b`"));
            }
            let n = r.value("nodes", args.nodes, 201)?;
            let grid = Grid::uniform(iv[0], iv[1], n)?;
            let p = poly.clone();
            Ok(Source {
                curve: Curve::from_fn(grid, move |t| p.eval(t))?,
                poly: Some(poly),
            })
        }
        (Some(_), Some(_)) => Err(CliError::input(format!("give either `input` or `{key}`, not both"))),
        (None, None) => Err(CliError::input(format!("one of `input` or `{key}` is required"))),
    }
}

fn norms(curve: &Curve, ps: &[f64], holder_alpha: f64, zero_tol: f64) -> Result<Value, CliError> {
    let mut lp = Vec::new();
    let mut weak = Vec::new();
    for &p in ps {
        lp.push(lp_derivative_norm(curve, p)?.value);
        weak.push(weak_lp_quasinorm_regular(curve, p, zero_tol)?.value);
    }
    Ok(json!({
        "p": ps,
        "lp": lp,
        "weak_lp": weak,
        "holder_alpha": holder_alpha,
        "holder": holder_quotient(curve, holder_alpha),
    }))
}

/// Lifts on `levels` successive refinements and measures every level.
fn lift_levels(
    src: &Source,
    levels: usize,
    ps: &[f64],
    cfg: &LiftConfig<f64>,
    alpha: f64,
    lift: impl Fn(&Curve, Option<Oracle<'_>>) -> orbit_lift::Result<Lift>,
) -> Result<(Vec<Value>, Lift), CliError> {
    if levels == 0 {
        return Err(CliError::input("`levels` must be >= 1"));
    }
    let eval = src.poly.clone().map(|p| move |t: f64| p.eval(t));
    let oracle: Option<Oracle<'_>> = eval.as_ref().map(|f| f as Oracle<'_>);
    let mut curve = src.curve.clone();
    let mut rows = Vec::new();
    let mut last = None;
    for level in 0..levels {
        if level > 0 {
            let mode = match oracle {
                Some(o) => Refinement::Oracle(o),
                None => Refinement::Interpolate,
            };
            curve = curve.refine_all(mode)?;
        }
        let l = lift(&curve, oracle)?;
        rows.push(json!({
            "level": level,
            "grid_size": l.len(),
            "synthetic_nodes": curve.synthetic_count(),
            "residual": l.residual,
            "refinement_level": l.refinement_level,
            "unresolved_cells": l.unresolved_cells,
            "norms": norms(&l.curve, ps, alpha, cfg.zero_tol)?,
        }));
        last = Some(l);
    }
    Ok((rows, last.expect("levels >= 1")))
}

fn lift_csv(lift: &Lift) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    io::write_lift(lift, &mut buf)?;
    Ok(buf)
}

#[derive(Args, Debug)]
pub struct RadicalArgs {
    /// Degree of the root.
    #[arg(long)]
    d: Option<usize>,
    /// Polynomial preset `c0,c1,...` for g instead of `--input`.
    #[arg(long)]
    g: Option<String>,
    #[command(flatten)]
    source: SourceArgs,
    /// Comma-separated exponents.
    #[arg(long)]
    p: Option<String>,
    /// Number of refinement levels measured.
    #[arg(long)]
    levels: Option<usize>,
}

fn radical(r: &mut Resolver, c: &Common, a: RadicalArgs) -> Result<Output, CliError> {
    let cfg = lift_config(r, c)?;
    let d = r.value("d", a.d, 2)?;
    if d == 0 {
        return Err(CliError::input("`d` must be >= 1"));
    }
    let src = source(r, &a.source, "g", a.g)?;
    if src.curve.dim() != 1 {
        return Err(CliError::input(format!(
            "radical input must have one complex column, got {}",
            src.curve.dim()
        )));
    }
    let ps = exponents(r, a.p)?;
    let levels = r.value("levels", a.levels, 1)?;
    let (rows, lift) = lift_levels(&src, levels, &ps, &cfg, 1.0 / d as f64, |g, o| {
        continuous_radical(g, d, o, &cfg)
    })?;
    let mut out = Output::new(json!({ "d": d, "levels": rows }));
    out.files.push(("lift.csv", lift_csv(&lift)?));
    Ok(out)
}

#[derive(Args, Debug)]
pub struct RootsArgs {
    /// Polynomial presets `c0,c1;...` for e_1, ..., e_Q instead of `--input`.
    #[arg(long)]
    coeffs: Option<String>,
    #[command(flatten)]
    source: SourceArgs,
    /// Comma-separated exponents.
    #[arg(long)]
    p: Option<String>,
    /// Number of refinement levels measured.
    #[arg(long)]
    levels: Option<usize>,
}

fn roots(r: &mut Resolver, c: &Common, a: RootsArgs) -> Result<Output, CliError> {
    let cfg = lift_config(r, c)?;
    let src = source(r, &a.source, "coeffs", a.coeffs)?;
    let q = src.curve.dim();
    let ps = exponents(r, a.p)?;
    let levels = r.value("levels", a.levels, 1)?;
    let (rows, lift) = lift_levels(&src, levels, &ps, &cfg, 1.0 / q as f64, |e, o| {
        continuous_roots(e, o, &cfg)
    })?;
    let mut out = Output::new(json!({ "q": q, "levels": rows }));
    out.files.push(("lift.csv", lift_csv(&lift)?));
    Ok(out)
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    /// `radical` or `roots`.
    #[arg(long)]
    family: Option<String>,
    /// Degree of the root (radical family).
    #[arg(long)]
    d: Option<usize>,
    /// Polynomial preset for g (radical family); defaults to g(t) = t.
    #[arg(long)]
    g: Option<String>,
    /// Polynomial presets for e_1, ..., e_Q (roots family).
    #[arg(long)]
    coeffs: Option<String>,
    /// Interval `a,b`.
    #[arg(long)]
    interval: Option<String>,
    /// Smallest scanned exponent.
    #[arg(long = "p-min")]
    p_min: Option<f64>,
    /// Largest scanned exponent.
    #[arg(long = "p-max")]
    p_max: Option<f64>,
    /// Number of equispaced exponents.
    #[arg(long = "p-steps")]
    p_steps: Option<usize>,
    /// Number of refinement levels (at least 3).
    #[arg(long)]
    levels: Option<usize>,
    /// Level l has 2^(base_log2 + l) nodes.
    #[arg(long = "base-log2")]
    base_log2: Option<usize>,
    /// Level l reaches spacing 10^-(decades (l + 1)) at singularities.
    #[arg(long)]
    decades: Option<usize>,
}

fn scan(r: &mut Resolver, c: &Common, a: ScanArgs) -> Result<Output, CliError> {
    let cfg = lift_config(r, c)?;
    let family = r.value("family", a.family, "radical".to_string())?;
    let iv = r.reals("interval", a.interval, "-1,1")?;
    if iv.len() != 2 {
        return Err(CliError::input("`interval`: expected `a,b`"));
    }
    let ps = p_grid(
        r.value("p_min", a.p_min, 1.0)?,
        r.value("p_max", a.p_max, 4.0)?,
        r.value("p_steps", a.p_steps, 31)?,
    );
    if ps.iter().any(|p| !(*p >= 1.0)) {
        return Err(CliError::input("exponents must be >= 1"));
    }
    let d = ScanOptions::<f64>::default();
    let opts = ScanOptions {
        levels: r.value("levels", a.levels, d.levels)?,
        base_log2: r.value("base_log2", a.base_log2, d.base_log2)?,
        decades_per_level: r.value("decades", a.decades, d.decades_per_level)?,
        lift: cfg,
        ..d
    };
    let report = match family.as_str() {
        "radical" => {
            let deg = r.value("d", a.d, 2)?;
            let poly = PolyCurve::parse("g", &r.value("g", a.g, "0,1".to_string())?)?;
            if poly.dim() != 1 {
                return Err(CliError::input("`g` must be a single polynomial"));
            }
            let f = move |t: f64| poly.eval(t);
            critical_exponent_scan(&ScanFamily::Radical { d: deg, g: &f }, (iv[0], iv[1]), &ps, &opts)?
        }
        "roots" => {
            let raw = r
                .optional("coeffs", a.coeffs)?
                .ok_or_else(|| CliError::input("the roots family needs `coeffs`"))?;
            let poly = PolyCurve::parse("coeffs", &raw)?;
            let f = move |t: f64| poly.eval(t);
            critical_exponent_scan(&ScanFamily::Roots { a: &f }, (iv[0], iv[1]), &ps, &opts)?
        }
        other => return Err(CliError::input(format!("`family`: unknown `{other}`"))),
    };
    Ok(Output::new(serde_json::to_value(&report).expect("report serializes")))
}

#[derive(Args, Debug)]
pub struct CoverArgs {
    /// CSV curve b.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Radical degrees per component (default all 1).
    #[arg(long)]
    degrees: Option<String>,
    /// Slope L of the prepared intervals.
    #[arg(long = "L")]
    l: Option<f64>,
    /// Budget D of the prepared intervals.
    #[arg(long = "D")]
    d: Option<f64>,
}

fn degrees(r: &mut Resolver, flag: Option<String>, dim: usize) -> Result<Vec<usize>, CliError> {
    let default = vec!["1"; dim].join(",");
    let degrees = parse_usizes("degrees", &r.value("degrees", flag, default)?)?;
    if degrees.len() != dim {
        return Err(CliError::input(format!(
            "`degrees`: {} values for {dim} components",
            degrees.len()
        )));
    }
    Ok(degrees)
}

fn required_input(r: &mut Resolver, flag: Option<PathBuf>) -> Result<Curve, CliError> {
    let path = r
        .optional("input", flag.map(|p| p.display().to_string()))?
        .ok_or_else(|| CliError::input("`input` is required"))?;
    read_curve(Path::new(&path))
}

fn cover(r: &mut Resolver, a: CoverArgs) -> Result<Output, CliError> {
    let b = required_input(r, a.input)?;
    let degrees = degrees(r, a.degrees, b.dim())?;
    let slope = r.value("L", a.l, 1.0)?;
    let budget = r.value("D", a.d, 0.2)?;
    if budget >= 1.0 / 3.0 {
        warn(format!(
            "D = {budget} is not below 1/3; the cover properties are not guaranteed"
        ));
    }
    let sel = radical_selections(&b, &degrees, None, &LiftConfig::default())?;
    let cover = select_cover(&sel, slope, budget)?;
    let intervals: Vec<Value> = cover
        .intervals
        .iter()
        .map(|j| json!({"t1": j.t1, "ell": j.ell, "s_minus": j.s_minus, "s_plus": j.s_plus, "kind": j.kind}))
        .collect();
    Ok(Output::new(json!({
        "intervals": intervals,
        "built": cover.built,
        "max_overlap": cover.max_overlap,
        "total_length": cover.total_length,
        "measure": cover.measure,
        "properties": {"coverage": true, "overlap_at_most_two": true, "total_length_at_most_twice_measure": true},
    })))
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// CSV curve a.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Degrees d_j of the components.
    #[arg(long)]
    degrees: Option<String>,
    /// Smallness constant B.
    #[arg(long = "B")]
    b: Option<f64>,
    /// Check only the node nearest to this parameter.
    #[arg(long)]
    t0: Option<f64>,
}

fn verify(r: &mut Resolver, a: VerifyArgs) -> Result<Output, CliError> {
    let curve = required_input(r, a.input)?;
    let degrees = degrees(r, a.degrees, curve.dim())?;
    let b = r.value("B", a.b, 0.25)?;
    if !(b > 0.0) {
        return Err(CliError::input("`B` must be positive"));
    }
    if b >= 1.0 / 3.0 {
        warn(format!("B = {b} is not below 1/3; the conclusions are not guaranteed"));
    }
    let sel = radical_selections(&curve, &degrees, None, &LiftConfig::default())?;
    let nodes: Vec<usize> = match r.optional("t0", a.t0)? {
        Some(t) => vec![nearest(curve.nodes(), t)],
        None => (0..curve.len())
            .filter(|&i| curve.value(i).iter().any(|z| z.norm() > 0.0))
            .collect(),
    };
    let mut entries = Vec::new();
    let (mut passed, mut conclusion_failures, mut unresolved) = (0usize, Vec::new(), 0usize);
    for &i in &nodes {
        let k = dominant_index(&sel, i)?;
        let data = match maximal_admissible_interval(&sel, i, k, b) {
            Err(orbit_lift::Error::IntervalUnresolved { t }) if nodes.len() > 1 => {
                unresolved += 1;
                entries.push(json!({"t": t, "unresolved": true}));
                continue;
            }
            other => other?,
        };
        let report = check_admissible(&data);
        if report.all_pass {
            passed += 1;
        } else if report.precondition {
            conclusion_failures.push(curve.t(i));
        }
        let bounds = match check_derivative_bounds(&data) {
            Ok(rep) => serde_json::to_value(rep).expect("serializes"),
            Err(e) => json!({"error": e.to_string()}),
        };
        entries.push(json!({"data": data.summary(), "report": report, "derivative_bounds": bounds}));
    }
    let mut out = Output::new(json!({
        "nodes_checked": nodes.len(),
        "all_pass": passed,
        "conclusion_failures": conclusion_failures.len(),
        "unresolved_intervals": unresolved,
        "selection_l1": sel.l1,
        "unresolved_cells": sel.unresolved_cells,
        "entries": entries,
    }));
    if let Some(&t) = conclusion_failures.first() {
        out.failure = Some(CliError::property(
            format!(
                "{} admissible intervals violate a conclusion",
                conclusion_failures.len()
            ),
            Some(t),
        ));
    }
    Ok(out)
}

fn nearest(nodes: &[f64], t: f64) -> usize {
    (0..nodes.len())
        .min_by(|&i, &j| (nodes[i] - t).abs().total_cmp(&(nodes[j] - t).abs()))
        .unwrap_or(0)
}

#[derive(Args, Debug)]
pub struct QdistArgs {
    /// Two tuple CSV files `id,point,re_1,im_1,...`, compared row by row.
    #[arg(long, num_args = 2, value_names = ["A", "B"])]
    input: Vec<PathBuf>,
}

/// Largest `Q` for which every bijection is enumerated.
const BRUTE_FORCE_LIMIT: usize = 6;

fn brute_force(a: &Tuple, b: &Tuple) -> f64 {
    let q = a.q();
    let mut perm: Vec<usize> = (0..q).collect();
    let mut best = f64::INFINITY;
    let cost = |perm: &[usize]| -> f64 {
        (0..q)
            .map(|i| orbit_lift::scalar::vec_dist_sqr(&a.points()[i], &b.points()[perm[i]]))
            .sum()
    };
    // Heap's algorithm
    let mut c = vec![0usize; q];
    best = best.min(cost(&perm));
    let mut i = 0;
    while i < q {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            best = best.min(cost(&perm));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    best.sqrt()
}

fn qdist(r: &mut Resolver, a: QdistArgs) -> Result<Output, CliError> {
    if a.input.len() != 2 {
        return Err(CliError::input("`input` needs two tuple files"));
    }
    let paths: Vec<String> = a.input.iter().map(|p| p.display().to_string()).collect();
    r.value("input", Some(paths.join(",")), String::new())?;
    let read = |p: &Path| -> Result<Vec<Tuple>, CliError> {
        io::read_tuples(open(p)?).map_err(|e| CliError::input(format!("{}: {e}", p.display())))
    };
    let (xs, ys) = (read(&a.input[0])?, read(&a.input[1])?);
    if xs.len() != ys.len() {
        return Err(CliError::input(format!("{} tuples against {}", xs.len(), ys.len())));
    }
    let mut rows = Vec::new();
    let mut worst: f64 = 0.0;
    for (i, (x, y)) in xs.iter().zip(&ys).enumerate() {
        let dist = tuple_distance(x, y)?;
        let check = (x.q() <= BRUTE_FORCE_LIMIT).then(|| brute_force(x, y));
        if let Some(bf) = check {
            worst = worst.max((bf - dist).abs() / (1.0 + bf));
        }
        rows.push(json!({"index": i, "distance": dist, "brute_force": check}));
    }
    let mut out = Output::new(json!({"distances": rows, "max_discrepancy": worst}));
    if worst > 1e-9 {
        out.failure = Some(CliError::property(
            format!("matching disagrees with enumeration by {worst:e}"),
            None,
        ));
    }
    Ok(out)
}

#[derive(Args, Debug)]
pub struct Grid2dArgs {
    /// CSV grid `x,y,re_1,im_1,...[,active]`.
    #[arg(long)]
    input: Option<PathBuf>,
    /// `cyclic:D` or `symmetric:Q`.
    #[arg(long)]
    spec: Option<String>,
}

fn parse_spec(raw: &str) -> Result<Spec, CliError> {
    let bad = || CliError::input(format!("`spec`: expected `cyclic:D` or `symmetric:Q`, got `{raw}`"));
    let (kind, n) = raw.split_once(':').ok_or_else(bad)?;
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    Ok(match kind.trim() {
        "cyclic" => Spec::cyclic(n)?,
        "symmetric" => Spec::symmetric(n)?,
        _ => return Err(bad()),
    })
}

fn grid2d(r: &mut Resolver, c: &Common, a: Grid2dArgs) -> Result<Output, CliError> {
    let cfg = lift_config(r, c)?;
    let path = r
        .optional("input", a.input.map(|p| p.display().to_string()))?
        .ok_or_else(|| CliError::input("`input` is required"))?;
    let spec = parse_spec(&r.value("spec", a.spec, "cyclic:2".to_string())?)?;
    let f = io::read_grid2d(open(Path::new(&path))?).map_err(|e| CliError::input(format!("{path}: {e}")))?;
    let outcome = lift_grid_2d(&f, &spec, &cfg)?;
    let mut report = serde_json::to_value(outcome.report()).expect("serializes");
    let mut out = Output::new(Value::Null);
    if let Grid2DOutcome::Lifted(lift) = &outcome {
        report["residual"] = json!(lift.residual);
        report["branches"] = json!(lift.branches);
        let mut buf = Vec::new();
        io::write_grid_lift(lift, &mut buf)?;
        out.files.push(("lift2d.csv", buf));
    }
    out.report = report;
    Ok(out)
}
