//! Command-line interface to the elastica library.
//!
//! Five subcommands cover the library surface: `constants` prints the
//! figure-eight constants, `curve` samples prototype curves to CSV,
//! `analyze` reports the functionals and self-intersections of a CSV
//! curve, `liyau-sweep` stress-tests the embeddedness threshold over
//! curve families, and `flow` evolves a curve under the elastic flow.
//!
//! Exit codes: 0 success, 1 bad input (files, parameters, degenerate
//! curves), 2 numerical failure (root finding, ambiguous winding, failed
//! steps, sweep violations), 3 invariant violation (length drift).

mod io;

use std::fmt;
use std::fs::{self, File};
use std::io::{BufWriter, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use elastica::curve::{LIYAU_MARGIN, TANGENTIAL_THRESHOLD};
use elastica::elliptic::complete_k;
use elastica::{
    circle_curve, compute_constants_with, figure_eight_curve, liyau_check, self_intersections,
    stable_dt, sweep_sample, DiscreteCurve, ElasticaPrototype, Error, FlowConfig, FlowMode,
    FlowState, Parametrization, Redistribution, SweepFamily, Verdict,
};
use rayon::prelude::*;
use serde::Serialize;

/// Vertex count used internally by `liyau-sweep`.
const SWEEP_N: usize = 1000;

#[derive(Parser)]
#[command(
    name = "elastica",
    version,
    about = "Elastic curves: constants, prototypes, embeddedness checks, and flows"
)]
struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Seed for randomized curve families.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Worker threads for sweeps; 0 picks one per core.
    #[arg(long, global = true, default_value_t = 0, value_name = "N")]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the figure-eight constants m*, E*, L*, and c* = E* L*.
    Constants {
        /// Residual tolerance for the 2E(m) - K(m) root.
        #[arg(long, value_name = "T")]
        tol: Option<f64>,
    },

    /// Sample a prototype curve to CSV, optionally rendering an SVG.
    ///
    /// Closed kinds (circular, figure-eight) traverse their period
    /// `covers` times. Open kinds are sampled over one curvature window
    /// per cover and the CSV's implied closing chord joins the two ends;
    /// the wavelike and orbitlike windows are one curvature period, the
    /// borderline window is the symmetric span where the single
    /// curvature bump lives.
    Curve {
        #[arg(long, value_enum)]
        kind: Kind,

        /// Elliptic modulus in (0, 1); wavelike and orbitlike only.
        #[arg(long)]
        m: Option<f64>,

        /// Curvature scale (the radius for circular); not figure-eight.
        #[arg(long)]
        alpha: Option<f64>,

        /// Vertex count.
        #[arg(long, default_value_t = 512)]
        n: usize,

        /// Period traversals; must be 1 for borderline.
        #[arg(long, default_value_t = 1, value_name = "K")]
        covers: u32,

        /// Output CSV path.
        #[arg(long, value_name = "FILE")]
        out: PathBuf,

        /// Optional SVG rendering.
        #[arg(long, value_name = "FILE")]
        svg: Option<PathBuf>,
    },

    /// Report length, bending energy, their product, total curvature,
    /// winding number, self-intersections, and the threshold verdict of
    /// a CSV curve.
    Analyze {
        /// Input CSV path.
        file: PathBuf,
    },

    /// Evaluate every sample of a curve family against the embeddedness
    /// threshold and report the worst margin; exits 2 if any sample
    /// violates the threshold.
    #[command(name = "liyau-sweep")]
    LiyauSweep {
        #[arg(long, value_enum)]
        family: Family,

        #[arg(long)]
        samples: usize,
    },

    /// Evolve a CSV curve under the elastic flow, writing one
    /// `trace.jsonl` diagnostics row and one `snap_<step>.csv` snapshot
    /// per recorded step.
    Flow {
        /// Input CSV path.
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,

        #[arg(long, value_enum)]
        mode: Mode,

        /// Penalization weight; required in penalized mode.
        #[arg(long)]
        lambda: Option<f64>,

        /// Time step; defaults to the stability heuristic of the mesh.
        #[arg(long)]
        dt: Option<f64>,

        /// Maximum step count.
        #[arg(long, default_value_t = 1000)]
        steps: u64,

        /// Diagnostics cadence in steps.
        #[arg(long, default_value_t = 10, value_name = "EVERY")]
        record: u64,

        /// Output directory, created if missing.
        #[arg(long = "out-dir", value_name = "DIR")]
        out_dir: PathBuf,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Wavelike,
    Orbitlike,
    Borderline,
    Circular,
    FigureEight,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Fenchel,
    FigureEightPerturbed,
    Lens,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Preserve,
    Penalized,
}

/// Everything that can go wrong, tagged with the exit code it maps to.
pub enum CliError {
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    Core(Error),
    SweepViolations(usize),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Parse { .. } => 1,
            CliError::Core(e) => match e {
                Error::ModulusOutOfRange(_)
                | Error::Parameter(_)
                | Error::DegenerateCurve(_) => 1,
                Error::LengthDrift { .. } => 3,
                _ => 2,
            },
            CliError::SweepViolations(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Parse {
                path,
                line,
                message,
            } => write!(f, "{}:{line}: {message}", path.display()),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::SweepViolations(count) => {
                write!(f, "{count} sample(s) violate the embeddedness threshold")
            }
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        CliError::Core(e)
    }
}

fn main() -> ExitCode {
    // Restore the default SIGPIPE disposition so a closed pipe ends the
    // process quietly, as under `elastica liyau-sweep | head`, instead of
    // panicking mid-print.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    if cli.threads > 0 {
        // A second invocation cannot rebuild the global pool; the CLI
        // builds it once before any parallel work, so this never races.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global();
    }
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn dispatch(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Constants { tol } => cmd_constants(*tol, cli.json),
        Command::Curve {
            kind,
            m,
            alpha,
            n,
            covers,
            out,
            svg,
        } => cmd_curve(*kind, *m, *alpha, *n, *covers, out, svg.as_deref(), cli.json),
        Command::Analyze { file } => cmd_analyze(file, cli.json),
        Command::LiyauSweep { family, samples } => {
            cmd_sweep(*family, *samples, cli.seed, cli.json)
        }
        Command::Flow {
            input,
            mode,
            lambda,
            dt,
            steps,
            record,
            out_dir,
        } => cmd_flow(input, *mode, *lambda, *dt, *steps, *record, out_dir, cli.json),
    }
}

#[derive(Serialize)]
struct ConstantsOut {
    m_star: f64,
    e_star: f64,
    l_star: f64,
    c_star: f64,
}

fn cmd_constants(tol: Option<f64>, json: bool) -> Result<(), CliError> {
    let c = compute_constants_with(tol.unwrap_or(1e-13))?;
    if json {
        let out = ConstantsOut {
            m_star: c.m_star,
            e_star: c.e_star,
            l_star: c.l_star,
            c_star: c.c_star,
        };
        println!("{}", serde_json::to_string(&out).expect("plain floats"));
    } else {
        println!("m_star = {:.15}", c.m_star);
        println!("e_star = {:.15}", c.e_star);
        println!("l_star = {:.15}", c.l_star);
        println!("c_star = {:.15}", c.c_star);
    }
    Ok(())
}

#[derive(Serialize)]
struct CurveOut {
    kind: String,
    vertices: usize,
    out: String,
    svg: Option<String>,
}

#[allow(clippy::too_many_arguments)]
fn cmd_curve(
    kind: Kind,
    m: Option<f64>,
    alpha: Option<f64>,
    n: usize,
    covers: u32,
    out: &Path,
    svg: Option<&Path>,
    json: bool,
) -> Result<(), CliError> {
    // Output paths are opened before any sampling so a bad destination
    // fails fast.
    let csv_file = create(out)?;
    let svg_file = svg.map(create).transpose()?;

    let curve = build_curve(kind, m, alpha, n, covers)?;
    io::write_csv_to(BufWriter::new(csv_file), curve.vertices()).map_err(|source| {
        CliError::Io {
            path: out.to_path_buf(),
            source,
        }
    })?;
    if let (Some(file), Some(path)) = (svg_file, svg) {
        io::write_svg_to(BufWriter::new(file), curve.vertices()).map_err(|source| {
            CliError::Io {
                path: path.to_path_buf(),
                source,
            }
        })?;
    }

    let kind_name = kind
        .to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_string();
    if json {
        let out = CurveOut {
            kind: kind_name,
            vertices: curve.len(),
            out: out.display().to_string(),
            svg: svg.map(|p| p.display().to_string()),
        };
        println!("{}", serde_json::to_string(&out).expect("plain fields"));
    } else {
        println!("wrote {} {kind_name} vertices to {}", curve.len(), out.display());
        if let Some(path) = svg {
            println!("wrote rendering to {}", path.display());
        }
    }
    Ok(())
}

fn create(path: &Path) -> Result<File, CliError> {
    File::create(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Samples the requested prototype. Open prototypes take `n` uniform
/// samples of the parameter window with the right endpoint excluded
/// (included for borderline, whose window endpoints never coincide), so
/// periodic windows never duplicate the seam vertex.
fn build_curve(
    kind: Kind,
    m: Option<f64>,
    alpha: Option<f64>,
    n: usize,
    covers: u32,
) -> Result<DiscreteCurve, CliError> {
    if covers == 0 {
        return Err(param("covers must be at least 1"));
    }
    let needs_m = matches!(kind, Kind::Wavelike | Kind::Orbitlike);
    if needs_m && m.is_none() {
        return Err(param("--m is required for wavelike and orbitlike curves"));
    }
    if !needs_m && m.is_some() {
        return Err(param("--m only applies to wavelike and orbitlike curves"));
    }
    if kind == Kind::FigureEight && alpha.is_some() {
        return Err(param("--alpha does not apply to the figure-eight"));
    }
    let alpha = alpha.unwrap_or(1.0);

    match kind {
        Kind::Circular => Ok(circle_curve(alpha, n, covers)?),
        Kind::FigureEight => Ok(figure_eight_curve(n, Parametrization::ArcLength, covers)?),
        Kind::Wavelike | Kind::Orbitlike => {
            let modulus = elastica::Modulus::new(m.expect("checked above"))?;
            let proto = match kind {
                Kind::Wavelike => ElasticaPrototype::wavelike(modulus, alpha)?,
                _ => ElasticaPrototype::orbitlike(modulus, alpha)?,
            };
            let k = complete_k(modulus);
            let period = match kind {
                Kind::Wavelike => 4.0 * k / alpha,
                _ => 2.0 * k / alpha,
            };
            let window = period * covers as f64;
            sample_prototype(&proto, n, |t| window * t)
        }
        Kind::Borderline => {
            if covers != 1 {
                return Err(param("the borderline curve has no period; use covers 1"));
            }
            let proto = ElasticaPrototype::borderline(alpha)?;
            let span = 8.0 / alpha;
            if n < 2 {
                return Err(param("need at least 2 samples"));
            }
            let scale = 2.0 * span / (n - 1) as f64;
            let points = (0..n)
                .map(|j| proto.eval_point(-span + scale * j as f64))
                .collect();
            DiscreteCurve::new(points).map_err(CliError::Core)
        }
    }
}

/// `n` samples of `proto` at parameters `window(j / n)`, `j = 0..n`.
fn sample_prototype(
    proto: &ElasticaPrototype,
    n: usize,
    window: impl Fn(f64) -> f64,
) -> Result<DiscreteCurve, CliError> {
    let points = (0..n)
        .map(|j| proto.eval_point(window(j as f64 / n as f64)))
        .collect();
    DiscreteCurve::new(points).map_err(CliError::Core)
}

fn param(message: &str) -> CliError {
    CliError::Core(Error::Parameter(message.to_string()))
}

#[derive(Serialize)]
struct IntersectionOut {
    x: f64,
    y: f64,
    multiplicity: usize,
}

#[derive(Serialize)]
struct AnalyzeOut {
    length: f64,
    energy: f64,
    product: f64,
    total_curvature: f64,
    winding: i32,
    intersections: Vec<IntersectionOut>,
    verdict: &'static str,
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::ConsistentWithTheorem => "consistent-with-theorem",
        Verdict::Violation => "violation",
    }
}

fn cmd_analyze(file: &Path, json: bool) -> Result<(), CliError> {
    let curve = io::read_csv(file)?;
    let report = liyau_check(&curve);
    let intersections = self_intersections(&curve, TANGENTIAL_THRESHOLD)?;
    let winding = curve.winding_number()?;
    let out = AnalyzeOut {
        length: curve.length(),
        energy: curve.elastic_energy(),
        product: report.product,
        total_curvature: curve.total_curvature(),
        winding,
        intersections: intersections
            .clusters
            .iter()
            .map(|c| IntersectionOut {
                x: c.point.x,
                y: c.point.y,
                multiplicity: c.multiplicity,
            })
            .collect(),
        verdict: verdict_name(report.verdict),
    };
    if json {
        println!("{}", serde_json::to_string(&out).expect("plain fields"));
    } else {
        println!("length          = {:.15}", out.length);
        println!("energy          = {:.15}", out.energy);
        println!("product         = {:.15}", out.product);
        println!("total_curvature = {:.15}", out.total_curvature);
        println!("winding         = {}", out.winding);
        println!("intersections   = {}", out.intersections.len());
        for p in &out.intersections {
            println!("    ({:.12}, {:.12}) multiplicity {}", p.x, p.y, p.multiplicity);
        }
        println!("verdict         = {}", out.verdict);
    }
    Ok(())
}

#[derive(Serialize)]
struct SweepRowOut {
    index: usize,
    label: String,
    product: f64,
    total_curvature: f64,
    embedded: bool,
    verdict: &'static str,
}

#[derive(Serialize)]
struct SweepOut {
    rows: Vec<SweepRowOut>,
    samples: usize,
    non_embedded: usize,
    min_product_non_embedded: Option<f64>,
    c_star: f64,
    margin: f64,
    violations: usize,
}

fn cmd_sweep(family: Family, samples: usize, seed: u64, json: bool) -> Result<(), CliError> {
    let family = match family {
        Family::Fenchel => SweepFamily::Fenchel,
        Family::FigureEightPerturbed => SweepFamily::FigureEightPerturbed,
        Family::Lens => SweepFamily::Lens,
    };
    // Samples are generated from their index alone, so parallel order
    // cannot change the output; collect preserves index order.
    let rows = (0..samples)
        .into_par_iter()
        .map(|i| sweep_sample(family, i, samples, seed, SWEEP_N))
        .collect::<elastica::Result<Vec<_>>>()?;

    let violations = rows
        .iter()
        .filter(|r| r.verdict == Verdict::Violation)
        .count();
    let non_embedded = rows.iter().filter(|r| !r.embedded).count();
    let min_product = rows
        .iter()
        .filter(|r| !r.embedded)
        .map(|r| r.product)
        .fold(None, |acc: Option<f64>, p| {
            Some(acc.map_or(p, |a| a.min(p)))
        });
    let c_star = elastica::elliptic::constants().c_star;

    if json {
        let out = SweepOut {
            rows: rows
                .iter()
                .map(|r| SweepRowOut {
                    index: r.index,
                    label: r.label.clone(),
                    product: r.product,
                    total_curvature: r.total_curvature,
                    embedded: r.embedded,
                    verdict: verdict_name(r.verdict),
                })
                .collect(),
            samples,
            non_embedded,
            min_product_non_embedded: min_product,
            c_star,
            margin: LIYAU_MARGIN,
            violations,
        };
        println!("{}", serde_json::to_string(&out).expect("plain fields"));
    } else {
        println!(
            "{:>5}  {:<24}  {:>18}  {:>18}  {:>8}  verdict",
            "index", "label", "product", "total_curvature", "embedded"
        );
        for r in &rows {
            println!(
                "{:>5}  {:<24}  {:>18.12}  {:>18.12}  {:>8}  {}",
                r.index,
                r.label,
                r.product,
                r.total_curvature,
                if r.embedded { "yes" } else { "no" },
                verdict_name(r.verdict)
            );
        }
        match min_product {
            Some(p) => println!(
                "summary: {samples} samples, {non_embedded} non-embedded, \
                 min product over non-embedded {p:.6} \
                 (threshold {c_star:.6}, margin {LIYAU_MARGIN}), violations {violations}"
            ),
            None => println!(
                "summary: {samples} samples, all embedded \
                 (threshold {c_star:.6}, margin {LIYAU_MARGIN}), violations {violations}"
            ),
        }
    }

    if violations > 0 {
        return Err(CliError::SweepViolations(violations));
    }
    Ok(())
}

#[derive(Serialize)]
struct FlowOut {
    steps: u64,
    time: f64,
    energy: f64,
    length: f64,
    product: f64,
    lambda: f64,
    embedded: bool,
    circle_residual: f64,
    out_dir: String,
}

#[allow(clippy::too_many_arguments)]
fn cmd_flow(
    input: &Path,
    mode: Mode,
    lambda: Option<f64>,
    dt: Option<f64>,
    steps: u64,
    record: u64,
    out_dir: &Path,
    json: bool,
) -> Result<(), CliError> {
    let mode = match (mode, lambda) {
        (Mode::Preserve, None) => FlowMode::LengthPreserving,
        (Mode::Preserve, Some(_)) => {
            return Err(param("--lambda only applies to penalized mode"));
        }
        (Mode::Penalized, Some(l)) => FlowMode::Penalized(l),
        (Mode::Penalized, None) => {
            return Err(param("--lambda is required in penalized mode"));
        }
    };

    let curve = io::read_csv(input)?;
    // The stability heuristic uses the shortest edge; taking it on the
    // uniformized mesh matches the mesh the stepper actually evolves.
    let uniform = curve.reparametrize_constant_speed(curve.len())?;
    let dt = dt.unwrap_or_else(|| stable_dt(&uniform));
    let stop_tol = 1e-6 * curve.elastic_energy() / curve.length();
    let config = FlowConfig {
        mode,
        dt,
        max_steps: steps,
        redistribution: Redistribution::EveryStep,
        stop_tol,
        record_every: record,
    };

    fs::create_dir_all(out_dir).map_err(|source| CliError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let trace_path = out_dir.join("trace.jsonl");
    let mut trace = BufWriter::new(create(&trace_path)?);

    // The run callback cannot return errors, so the first write failure
    // is stashed and surfaced once the run ends.
    let mut write_error: Option<CliError> = None;
    let result = elastica::run(curve, &config, |state, rec| {
        if write_error.is_some() {
            return;
        }
        let row = io::TraceRecord {
            step: rec.step,
            time: rec.time,
            energy: rec.energy,
            length: rec.length,
            product: rec.product,
            lambda: rec.lambda,
            embedded: rec.embedded,
            circle_residual: rec.circle_residual,
        };
        if let Err(e) = write_snapshot(&mut trace, &trace_path, out_dir, state, &row) {
            write_error = Some(e);
        }
    });
    if let Some(e) = write_error {
        return Err(e);
    }
    let state = result?;
    trace.flush().map_err(|source| CliError::Io {
        path: trace_path.clone(),
        source,
    })?;

    let rec = state.diagnostics();
    if json {
        let out = FlowOut {
            steps: rec.step,
            time: rec.time,
            energy: rec.energy,
            length: rec.length,
            product: rec.product,
            lambda: rec.lambda,
            embedded: rec.embedded,
            circle_residual: rec.circle_residual,
            out_dir: out_dir.display().to_string(),
        };
        println!("{}", serde_json::to_string(&out).expect("plain fields"));
    } else {
        println!(
            "ran {} steps to time {:.6e}: energy {:.9}, length {:.9}, product {:.9}",
            rec.step, rec.time, rec.energy, rec.length, rec.product
        );
        println!(
            "embedded {}, circle residual {:.3e}; trace and snapshots in {}",
            if rec.embedded { "yes" } else { "no" },
            rec.circle_residual,
            out_dir.display()
        );
    }
    Ok(())
}

fn write_snapshot(
    trace: &mut BufWriter<File>,
    trace_path: &Path,
    out_dir: &Path,
    state: &FlowState,
    row: &io::TraceRecord,
) -> Result<(), CliError> {
    let line = serde_json::to_string(row).expect("plain fields");
    writeln!(trace, "{line}").map_err(|source| CliError::Io {
        path: trace_path.to_path_buf(),
        source,
    })?;
    let snap_path = out_dir.join(format!("snap_{}.csv", row.step));
    io::write_csv(&snap_path, state.curve.vertices()).map_err(|source| CliError::Io {
        path: snap_path.clone(),
        source,
    })
}
