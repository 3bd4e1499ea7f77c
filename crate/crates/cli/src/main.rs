//! `systole-lab`: analysis, sweeps and sphere checks from the command line.
//!
//! Reports go to stdout (or `--out`), progress goes to stderr. Exit codes:
//!
//! | code | meaning                                              |
//! |------|------------------------------------------------------|
//! | 0    | success                                              |
//! | 1    | usage or I/O error                                   |
//! | 2    | a checked invariant failed beyond its tolerance      |
//! | 3    | input could not be parsed                            |
//! | 4    | asymmetric mesh, odd metric or degenerate measure    |
//! | 5    | flat body                                            |

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicBool, Ordering};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use systole_lab::conformal::harmonics::y20;
use systole_lab::conformal::metric::cone_angle;
use systole_lab::conformal::{
    conformal_area, conformal_systole, holder_chain, santalo_sides, variance_remainder, ConformalMetric,
    ConformalSystole, GreatCircleSpace, HolderChain, SphereGraph, SphericalGrid, VarianceReport,
};
use systole_lab::experiments::{
    collapse_csv, collapse_study, envelope, shipped_families, step_one_fit, sweep_all, to_csv, to_json,
    EnvelopeEstimate, FamilySpec, StepOneFit, SweepRow,
};
use systole_lab::geodesic::{pu_report, PuReport};
use systole_lab::geom::bodies::{icosphere, random_polytope, smooth_body, Support};
use systole_lab::geom::off::{read_off, write_off};
use systole_lab::geom::refine::refine;
use systole_lab::radii::{sandwich_check, SandwichCheck};
use systole_lab::tolerances as tol;
use systole_lab::{Error, SCHEMA, VERSION};

static QUIET: AtomicBool = AtomicBool::new(false);

fn note(msg: impl AsRef<str>) {
    if !QUIET.load(Ordering::Relaxed) {
        eprintln!("systole-lab: {}", msg.as_ref());
    }
}

#[derive(Parser)]
#[command(name = "systole-lab", version, about = "Systolic geometry of centrally symmetric convex surfaces")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,
    /// Suppress progress messages on stderr.
    #[arg(short, long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full report for one body given as an OFF mesh.
    Analyze(AnalyzeArgs),
    /// Santaló identity and Hölder chain for a conformal metric on S².
    Santalo(MetricArgs),
    /// Systole, area and variance remainder of a conformal metric.
    Conformal(MetricArgs),
    /// Sweep body families; one CSV/JSON row per body.
    Sweep(SweepArgs),
    /// Empirical remainder envelope λ̂(t) with an asymptotic slope fit.
    Envelope(EnvelopeArgs),
    /// Oblate ellipsoids (1, 1, a) collapsing onto the unit disk.
    Collapse(CollapseArgs),
    /// Write a test body as an OFF mesh.
    Generate(GenerateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Centrally symmetric convex mesh (OFF).
    mesh: PathBuf,
    /// Chordal 1-to-4 subdivisions applied before the analysis.
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u32).range(0..=6))]
    level: u32,
    /// Steiner points per mesh edge.
    #[arg(long, default_value_t = tol::STEINER, value_parser = steiner)]
    steiner: usize,
    /// Slack ε of the John sandwich check.
    #[arg(long, default_value_t = tol::JOHN_EPS)]
    eps: f64,
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Also write the systolic loop as an OBJ polyline.
    #[arg(long)]
    loop_obj: Option<PathBuf>,
}

#[derive(Args)]
struct MetricArgs {
    /// Metric JSON: {"harmonics": [[l, m, c]], "atoms": [[x, y, z, mass]], "scale": s}.
    metric: PathBuf,
    /// Gauss–Legendre nodes in the polar direction (even).
    #[arg(long, default_value_t = tol::GRID_POLAR)]
    polar: usize,
    /// Quadrature points per great circle.
    #[arg(long, default_value_t = tol::CIRCLE_POINTS)]
    circle_points: usize,
    /// Icosphere level of the systole graph.
    #[arg(long, default_value_t = tol::CONFORMAL_GRAPH_LEVEL, value_parser = clap::value_parser!(u32).range(0..=6))]
    level: u32,
    #[arg(long, default_value_t = tol::STEINER, value_parser = steiner)]
    steiner: usize,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Families {
    /// Family spec JSON (one object or an array).
    #[arg(required_unless_present = "shipped")]
    spec: Option<PathBuf>,
    /// Use the built-in family set instead of a spec file.
    #[arg(long, conflicts_with = "spec")]
    shipped: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    families: Families,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EnvelopeArgs {
    /// Spec JSON to sweep (omit with --shipped or --rows).
    #[arg(conflicts_with = "rows")]
    spec: Option<PathBuf>,
    #[arg(long, conflicts_with_all = ["spec", "rows"])]
    shipped: bool,
    /// Reuse rows written by `sweep --format json`.
    #[arg(long)]
    rows: Option<PathBuf>,
    #[arg(long, default_value_t = tol::ENVELOPE_BINS, value_parser = bins)]
    bins: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CollapseArgs {
    /// Thicknesses a, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = tol::COLLAPSE_THICKNESS)]
    thickness: Vec<f64>,
    #[arg(long, default_value_t = tol::STEINER, value_parser = steiner)]
    steiner: usize,
    /// Mesh edges are refined below sys / edge-factor.
    #[arg(long, default_value_t = tol::EDGE_FACTOR)]
    edge_factor: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    #[command(subcommand)]
    body: Body,
    /// Maximum edge length for smooth bodies.
    #[arg(long, global = true, default_value_t = 0.1)]
    max_edge: f64,
    #[arg(short, long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Body {
    /// Icosphere of the given subdivision level.
    Icosphere {
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(0..=7))]
        level: u32,
    },
    /// Axis-aligned ellipsoid.
    Ellipsoid {
        /// Semi-axes a,b,c.
        #[arg(long, value_delimiter = ',', required = true)]
        axes: Vec<f64>,
    },
    /// Cylinder around z closed by hemispherical caps.
    Capsule {
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(long)]
        half_length: f64,
    },
    /// Hull of ±(random points on the unit sphere).
    Polytope {
        #[arg(long, default_value_t = 12)]
        points: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

fn bins(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if (2..=1000).contains(&n) => Ok(n),
        _ => Err("expected an integer in 2..=1000".into()),
    }
}

fn steiner(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n <= 16 => Ok(n),
        _ => Err("expected an integer in 0..=16".into()),
    }
}

/// What a subcommand produced: `Ok(true)` when every invariant held.
type Outcome = Result<bool, Error>;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } | Error::Json(_) | Error::InvalidMesh(_) => 3,
        Error::Asymmetric(_) | Error::OddMetric(_) | Error::DegenerateMeasure(_) => 4,
        Error::FlatBody(_) => 5,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    QUIET.store(cli.quiet, Ordering::Relaxed);
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n as usize).build_global() {
            eprintln!("systole-lab: {e}");
            return ExitCode::from(1);
        }
    }
    let result = match cli.command {
        Command::Analyze(a) => analyze(a),
        Command::Santalo(a) => santalo(a),
        Command::Conformal(a) => conformal(a),
        Command::Sweep(a) => sweep_cmd(a),
        Command::Envelope(a) => envelope_cmd(a),
        Command::Collapse(a) => collapse(a),
        Command::Generate(a) => generate(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            note("invariant check failed (see report)");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("systole-lab: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

/// Fails before any computation if the output directory does not exist.
fn check_out(out: &Option<PathBuf>) -> Result<(), Error> {
    if let Some(p) = out {
        let dir = p.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
        if !dir.is_dir() {
            return Err(Error::InvalidArgument(format!("output directory {} does not exist", dir.display())));
        }
    }
    Ok(())
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), Error> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn json<T: Serialize>(v: &T) -> Result<String, Error> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

#[derive(Serialize)]
struct AnalyzeOutput<'a> {
    #[serde(flatten)]
    report: &'a PuReport,
    source: String,
    level: u32,
    sandwich: SandwichCheck,
}

fn analyze(a: AnalyzeArgs) -> Outcome {
    check_out(&a.out)?;
    check_out(&a.loop_obj)?;
    let mesh = refine(&read_off(&read(&a.mesh)?)?, a.level);
    note(format!("{} vertices, steiner {}", mesh.vertices().len(), a.steiner));
    let report = pu_report(&mesh, a.steiner)?;
    let sandwich = sandwich_check(&mesh, &report.john, a.eps);
    let out = AnalyzeOutput { report: &report, source: a.mesh.display().to_string(), level: a.level, sandwich };
    emit(&json(&out)?, &a.out)?;
    if let Some(p) = &a.loop_obj {
        fs::write(p, report.loop_obj())?;
    }
    Ok(report.checks_hold() && out.sandwich.holds)
}

struct SphereSetup {
    metric: ConformalMetric,
    grid: SphericalGrid,
    circles: GreatCircleSpace,
    graph: SphereGraph,
}

fn sphere_setup(a: &MetricArgs) -> Result<SphereSetup, Error> {
    check_out(&a.out)?;
    let metric = ConformalMetric::from_json(&read(&a.metric)?)?;
    metric.require_even()?;
    let grid = SphericalGrid::new(a.polar)?;
    let circles = GreatCircleSpace::new(grid.clone(), a.circle_points);
    note(format!("building level-{} sphere graph", a.level));
    let graph = SphereGraph::new(a.level, a.steiner)?;
    Ok(SphereSetup { metric, grid, circles, graph })
}

#[derive(Serialize)]
struct GridInfo {
    polar: usize,
    longitudes: usize,
    exact_degree: usize,
    circle_points: usize,
    graph_level: u32,
    graph_nodes: usize,
    steiner: usize,
}

impl GridInfo {
    fn new(a: &MetricArgs, s: &SphereSetup) -> Self {
        GridInfo {
            polar: a.polar,
            longitudes: 2 * a.polar,
            exact_degree: s.grid.exact_degree(),
            circle_points: a.circle_points,
            graph_level: a.level,
            graph_nodes: s.graph.graph().node_count(),
            steiner: a.steiner,
        }
    }
}

#[derive(Serialize)]
struct Sides {
    integrand: &'static str,
    lhs: f64,
    rhs: f64,
    relative_error: f64,
}

/// The Hölder chain without the per-circle records.
#[derive(Serialize)]
struct ChainSummary {
    area: f64,
    santalo: f64,
    holder: f64,
    min_length_bound: f64,
    pu_bound: f64,
    sys: f64,
    tolerance: f64,
    min_length: f64,
    max_holder_gap: f64,
    circles: usize,
    violations: usize,
    quotient_deficit: f64,
    holds: bool,
}

impl From<&HolderChain> for ChainSummary {
    fn from(h: &HolderChain) -> Self {
        ChainSummary {
            area: h.area,
            santalo: h.santalo,
            holder: h.holder,
            min_length_bound: h.min_length_bound,
            pu_bound: h.pu_bound,
            sys: h.sys,
            tolerance: h.tolerance,
            min_length: h.min_length,
            max_holder_gap: h.max_holder_gap,
            circles: h.circles.len(),
            violations: h.violations.len(),
            quotient_deficit: h.quotient_deficit(),
            holds: h.holds(),
        }
    }
}

#[derive(Serialize)]
struct SantaloOutput {
    schema: u32,
    version: &'static str,
    grid: GridInfo,
    /// Relative tolerance of the identity checks.
    identity_tolerance: f64,
    sides: Vec<Sides>,
    chain: ChainSummary,
    variance: VarianceReport,
}

const IDENTITY_TOL: f64 = 1e-6;

fn santalo(a: MetricArgs) -> Outcome {
    let s = sphere_setup(&a)?;
    let f = |x: &systole_lab::Vec3| s.metric.even_factor(x);
    let tests: [(&'static str, Box<dyn Fn(&systole_lab::Vec3) -> f64 + Sync>); 5] = [
        ("1", Box::new(|_| 1.0)),
        ("z^2", Box::new(|x| x.z * x.z)),
        ("x^2 y^2", Box::new(|x| x.x * x.x * x.y * x.y)),
        ("1+Y20", Box::new(|x| 1.0 + y20(x))),
        ("f^2", Box::new(move |x| f(x).powi(2))),
    ];
    let sides: Vec<Sides> = tests
        .iter()
        .map(|(name, g)| {
            let r = santalo_sides(g, &s.circles);
            Sides { integrand: name, lhs: r.lhs, rhs: r.rhs, relative_error: r.relative_error() }
        })
        .collect();
    note("conformal systole");
    let sys = conformal_systole(&s.metric, &s.graph)?;
    let chain = holder_chain(&s.metric, &s.circles, sys.sys, sys.length_tolerance());
    let variance = variance_remainder(&s.metric, &s.grid, &s.graph)?;
    let ok = sides.iter().all(|x| x.relative_error <= IDENTITY_TOL) && chain.holds() && variance.holds;
    let out = SantaloOutput {
        schema: SCHEMA,
        version: VERSION,
        grid: GridInfo::new(&a, &s),
        identity_tolerance: IDENTITY_TOL,
        sides,
        chain: (&chain).into(),
        variance,
    };
    emit(&json(&out)?, &a.out)?;
    Ok(ok)
}

#[derive(Serialize)]
struct Atom {
    position: [f64; 3],
    mass: f64,
    cone_angle: f64,
}

#[derive(Serialize)]
struct ConformalOutput {
    schema: u32,
    version: &'static str,
    grid: GridInfo,
    metric: ConformalMetric,
    atoms: Vec<Atom>,
    /// Area of the double cover S².
    sphere_area: f64,
    systole: ConformalSystole,
    variance: VarianceReport,
}

fn conformal(a: MetricArgs) -> Outcome {
    let s = sphere_setup(&a)?;
    let systole = conformal_systole(&s.metric, &s.graph)?;
    let variance = variance_remainder(&s.metric, &s.grid, &s.graph)?;
    let atoms = s
        .metric
        .measure()
        .atoms()
        .iter()
        .map(|(p, m)| Atom { position: [p.x, p.y, p.z], mass: *m, cone_angle: cone_angle(*m) })
        .collect();
    let ok = variance.holds;
    let out = ConformalOutput {
        schema: SCHEMA,
        version: VERSION,
        grid: GridInfo::new(&a, &s),
        sphere_area: conformal_area(&s.metric, &s.grid),
        metric: s.metric,
        atoms,
        systole,
        variance,
    };
    emit(&json(&out)?, &a.out)?;
    Ok(ok)
}

fn load_families(spec: &Option<PathBuf>, shipped: bool) -> Result<Vec<FamilySpec>, Error> {
    if shipped {
        return Ok(shipped_families());
    }
    let Some(path) = spec else {
        return Err(Error::InvalidArgument("give a family spec file or --shipped".into()));
    };
    let text = read(path)?;
    if text.trim_start().starts_with('[') {
        let specs: Vec<FamilySpec> = serde_json::from_str(&text)?;
        specs.iter().try_for_each(FamilySpec::validate)?;
        Ok(specs)
    } else {
        Ok(vec![FamilySpec::from_json(&text)?])
    }
}

fn run_sweep(specs: &[FamilySpec]) -> Result<Vec<SweepRow>, Error> {
    let bodies: usize = specs.iter().map(|s| s.members().len()).sum();
    note(format!("sweeping {} families, {bodies} bodies", specs.len()));
    let rows = sweep_all(specs)?;
    let errors = rows.iter().filter(|r| !r.is_measured()).count();
    if errors > 0 {
        note(format!("{errors} bodies could not be analyzed"));
    }
    Ok(rows)
}

fn sweep_cmd(a: SweepArgs) -> Outcome {
    check_out(&a.out)?;
    let specs = load_families(&a.families.spec, a.families.shipped)?;
    let rows = run_sweep(&specs)?;
    let text = match a.format {
        Format::Csv => to_csv(&rows),
        Format::Json => to_json(&rows)? + "\n",
    };
    emit(&text, &a.out)?;
    Ok(!rows.iter().any(|r| r.status.starts_with("fail:")))
}

#[derive(Serialize)]
struct EnvelopeOutput {
    schema: u32,
    version: &'static str,
    envelope: EnvelopeEstimate,
    /// Ratio ranges of the John-ellipsoid comparison; absent when fewer than
    /// two rows were measured.
    step_one: Option<StepOneFit>,
}

fn envelope_cmd(a: EnvelopeArgs) -> Outcome {
    check_out(&a.out)?;
    let rows: Vec<SweepRow> = match &a.rows {
        Some(p) => serde_json::from_str(&read(p)?)?,
        None => run_sweep(&load_families(&a.spec, a.shipped)?)?,
    };
    let est = envelope(&rows, a.bins)?;
    let text = match a.format {
        Format::Csv => {
            let mut s = String::from("lo,hi,count,bin_min,lambda\n");
            for b in &est.bins {
                s += &format!("{:.16e},{:.16e},{},{:.16e},{:.16e}\n", b.lo, b.hi, b.count, b.bin_min, b.lambda);
            }
            s
        }
        Format::Json => json(&EnvelopeOutput {
            schema: SCHEMA,
            version: VERSION,
            step_one: step_one_fit(&rows).ok(),
            envelope: est,
        })?,
    };
    emit(&text, &a.out)?;
    Ok(true)
}

fn collapse(a: CollapseArgs) -> Outcome {
    check_out(&a.out)?;
    if a.thickness.iter().any(|&t| !(t > 0.0 && t <= 1.0)) {
        return Err(Error::InvalidArgument("thickness must lie in (0, 1]".into()));
    }
    note(format!("collapse study over {} thicknesses", a.thickness.len()));
    let rows = collapse_study(&a.thickness, a.steiner, a.edge_factor);
    let text = match a.format {
        Format::Csv => collapse_csv(&rows),
        Format::Json => json(&rows)?,
    };
    emit(&text, &a.out)?;
    Ok(rows.iter().all(|r| r.status == "ok"))
}

fn generate(a: GenerateArgs) -> Outcome {
    check_out(&a.out)?;
    let mesh = match a.body {
        Body::Icosphere { level } => icosphere(level),
        Body::Ellipsoid { axes } if axes.len() != 3 => {
            return Err(Error::InvalidArgument(format!("--axes needs 3 values, got {}", axes.len())))
        }
        Body::Ellipsoid { axes } => {
            smooth_body(&Support::Ellipsoid { semi_axes: [axes[0], axes[1], axes[2]] }, a.max_edge)?
        }
        Body::Capsule { radius, half_length } => smooth_body(&Support::Capsule { radius, half_length }, a.max_edge)?,
        Body::Polytope { points, seed } => random_polytope(points, seed)?,
    };
    emit(&write_off(&mesh), &a.out)?;
    Ok(true)
}
