//! Command dispatch and report rendering.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use equidim::combinatorics::{degree_bound_with, gamma_with, has_only_isolated, special_sets};
use equidim::homotopy::{solve_toric, NumericResolution, Origin, PathStatus, TrackedRoot, TrackerConfig};
use equidim::pipeline::{
    generic_affine_solve, points_in_equid_comps, DecompositionReport, PathCounts, PipelineConfig, WitnessSet,
};
use equidim::subdivision::{mixed_volume_with, stable_mixed_volume_with, MixedVolumeOptions};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::format::{parse_resolution, parse_system, resolution_to_file, FormatError, InputSystem};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "equidim", version, about = "Mixed volumes, special index sets and witness points of sparse polynomial systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub args: RunArgs,
}

#[derive(Debug, Clone, clap::Args)]
pub struct RunArgs {
    /// Seed for every random choice; drawn from entropy and echoed when absent.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol: f64,
    /// Liftings are drawn from [0, RANGE).
    #[arg(long = "lift-range", global = true, default_value_t = 1 << 20)]
    pub lift_range: u64,
    /// Random integers are drawn from [-B, B] without 0.
    #[arg(long = "coeff-bound", global = true, default_value_t = 997)]
    pub coeff_bound: i64,
    #[arg(long, global = true, default_value_t = 5)]
    pub retries: usize,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Mixed volume of the supports.
    Mv { system: PathBuf },
    /// Stable mixed volume of the supports.
    Smv { system: PathBuf },
    /// Index sets I with the surviving polynomials J_I.
    SpecialSets { system: PathBuf },
    /// The index sets carrying components of a generic system.
    Gamma { system: PathBuf },
    /// Degree of the variety of a generic system with these supports.
    GenericDegree { system: PathBuf },
    /// MV(A_1 ∪ Δ, …, A_n ∪ Δ).
    DegreeBound { system: PathBuf },
    /// Whether a generic square system without constant terms has only isolated zeros.
    IsolatedCheck { system: PathBuf },
    /// Isolated roots in the torus of a square system.
    SolveToric { system: PathBuf },
    /// Witness points per component of a generic system.
    Decompose { system: PathBuf },
    /// Witness point supersets per dimension of an arbitrary square system.
    Witness { system: PathBuf },
    /// Keep the points of a geometric resolution lying on a system.
    CleanGr { resolution: PathBuf, system: PathBuf },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Mv { .. } => "mv",
            Command::Smv { .. } => "smv",
            Command::SpecialSets { .. } => "special-sets",
            Command::Gamma { .. } => "gamma",
            Command::GenericDegree { .. } => "generic-degree",
            Command::DegreeBound { .. } => "degree-bound",
            Command::IsolatedCheck { .. } => "isolated-check",
            Command::SolveToric { .. } => "solve-toric",
            Command::Decompose { .. } => "decompose",
            Command::Witness { .. } => "witness",
            Command::CleanGr { .. } => "clean-gr",
        }
    }

    fn is_randomized(&self) -> bool {
        !matches!(self, Command::SpecialSets { .. } | Command::IsolatedCheck { .. } | Command::CleanGr { .. })
    }
}

/// Effective settings after defaults and seed resolution.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub tol: f64,
    pub lift_range: u64,
    pub coeff_bound: i64,
    pub retries: usize,
    pub format: OutputFormat,
    pub jobs: Option<usize>,
}

impl RunConfig {
    pub fn resolve(args: &RunArgs) -> Self {
        RunConfig {
            seed: args.seed.unwrap_or_else(rand::random),
            tol: args.tol,
            lift_range: args.lift_range,
            coeff_bound: args.coeff_bound,
            retries: args.retries,
            format: args.format,
            jobs: args.jobs,
        }
    }

    fn mv_options(&self) -> MixedVolumeOptions {
        MixedVolumeOptions { seed: self.seed, range: self.lift_range, retries: self.retries }
    }

    fn tracker(&self) -> TrackerConfig {
        let mut t = TrackerConfig::with_seed(self.seed);
        t.tol = self.tol;
        t.retries = t.retries.max(self.retries);
        t
    }

    fn pipeline(&self) -> PipelineConfig {
        PipelineConfig { tracker: self.tracker(), coeff_bound: self.coeff_bound, tol: self.tol, lift_range: self.lift_range }
    }
}

/// Exit code and the text for stdout and stderr.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Input(String),
    Numeric(String),
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<equidim::Error> for Failure {
    fn from(e: equidim::Error) -> Self {
        if e.is_numerical() {
            Failure::Numeric(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

struct Report {
    json: Value,
    text: String,
    /// Set when paths were lost; the report is still printed.
    numeric_failure: Option<String>,
}

impl Report {
    fn new(json: Value, text: String) -> Self {
        Report { json, text, numeric_failure: None }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_system(path: &Path) -> Result<InputSystem, Failure> {
    parse_system(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn exact(sys: &InputSystem, command: &str) -> Result<equidim::lattice::RationalSystem, Failure> {
    sys.rational()
        .cloned()
        .ok_or_else(|| Failure::Input(format!("{command} needs exact rational coefficients")))
}

pub fn run(command: &Command, cfg: &RunConfig) -> Outcome {
    let result = match cfg.jobs {
        Some(j) => match rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build() {
            Ok(pool) => pool.install(|| dispatch(command, cfg)),
            Err(e) => Err(Failure::Input(format!("cannot start {j} worker threads: {e}"))),
        },
        None => dispatch(command, cfg),
    };
    match result {
        Ok(mut report) => {
            if command.is_randomized() {
                if let Value::Object(map) = &mut report.json {
                    map.insert("seed".into(), json!(cfg.seed));
                }
            }
            let stdout = match cfg.format {
                OutputFormat::Json => {
                    let mut s = serde_json::to_string_pretty(&report.json).expect("json values serialize");
                    s.push('\n');
                    s
                }
                OutputFormat::Text => report.text,
            };
            // text output keeps stdout to the table; the seed goes to stderr
            let mut stderr = String::new();
            if command.is_randomized() && cfg.format == OutputFormat::Text {
                stderr.push_str(&format!("seed {}\n", cfg.seed));
            }
            match report.numeric_failure {
                Some(msg) => {
                    stderr.push_str(&format!("numeric failure: {msg}\n"));
                    Outcome { code: EXIT_NUMERIC, stdout, stderr }
                }
                None => Outcome { code: EXIT_OK, stdout, stderr },
            }
        }
        Err(Failure::Input(msg)) => Outcome { code: EXIT_INPUT, stdout: String::new(), stderr: format!("error: {msg}\n") },
        Err(Failure::Numeric(msg)) => {
            Outcome { code: EXIT_NUMERIC, stdout: String::new(), stderr: format!("numeric failure: {msg}\n") }
        }
    }
}

fn dispatch(command: &Command, cfg: &RunConfig) -> Result<Report, Failure> {
    let name = command.name();
    match command {
        Command::Mv { system } => {
            let mv = mixed_volume_with(&load_system(system)?.supports(), &cfg.mv_options())?;
            Ok(Report::new(json!({ "command": name, "mixed_volume": mv }), format!("{mv}\n")))
        }
        Command::Smv { system } => {
            let sm = stable_mixed_volume_with(&load_system(system)?.supports(), &cfg.mv_options())?;
            Ok(Report::new(json!({ "command": name, "stable_mixed_volume": sm }), format!("{sm}\n")))
        }
        Command::SpecialSets { system } => {
            let entries = special_sets(&load_system(system)?.supports())?;
            let mut text = String::new();
            let list: Vec<Value> = entries
                .iter()
                .map(|e| {
                    let _ = writeln!(text, "I = {}  J = {}", e.index_set, braces(&e.surviving));
                    json!({ "I": e.index_set.as_slice(), "J": e.surviving })
                })
                .collect();
            Ok(Report::new(json!({ "command": name, "special_sets": list }), text))
        }
        Command::Gamma { system } => {
            let entries = gamma_with(&load_system(system)?.supports(), &cfg.mv_options())?;
            let mut text = String::new();
            let list: Vec<Value> = entries
                .iter()
                .map(|e| {
                    let _ = writeln!(
                        text,
                        "I = {}  J = {}  dim {}  degree {}",
                        e.index_set,
                        braces(&e.surviving),
                        e.dim,
                        e.toric_degree
                    );
                    json!({ "I": e.index_set.as_slice(), "J": e.surviving, "dim": e.dim, "degree": e.toric_degree })
                })
                .collect();
            Ok(Report::new(json!({ "command": name, "gamma": list }), text))
        }
        Command::GenericDegree { system } => {
            let entries = gamma_with(&load_system(system)?.supports(), &cfg.mv_options())?;
            let d: u64 = entries.iter().map(|e| e.toric_degree).sum();
            Ok(Report::new(json!({ "command": name, "generic_degree": d }), format!("{d}\n")))
        }
        Command::DegreeBound { system } => {
            let d = degree_bound_with(&load_system(system)?.supports(), &cfg.mv_options())?;
            Ok(Report::new(json!({ "command": name, "degree_bound": d }), format!("{d}\n")))
        }
        Command::IsolatedCheck { system } => {
            let ok = has_only_isolated(&load_system(system)?.supports())?;
            Ok(Report::new(json!({ "command": name, "only_isolated": ok }), format!("{ok}\n")))
        }
        Command::SolveToric { system } => solve_toric_report(&load_system(system)?, cfg),
        Command::Decompose { system } => {
            let f = exact(&load_system(system)?, name)?;
            let report = generic_affine_solve(&f, &cfg.pipeline())?;
            Ok(decomposition_report(name, &report))
        }
        Command::Witness { system } => {
            let f = exact(&load_system(system)?, name)?;
            let report = points_in_equid_comps(&f, &cfg.pipeline())?;
            Ok(decomposition_report(name, &report))
        }
        Command::CleanGr { resolution, system } => {
            let (res, ell) = parse_resolution(&read(resolution)?)
                .map_err(|e| Failure::Input(format!("{}: {e}", resolution.display())))?;
            let f = exact(&load_system(system)?, name)?;
            let cleaned = match &res {
                equidim::resolution::Resolution::Points(r) => r.clean(&f)?,
                equidim::resolution::Resolution::Empty => res.clone(),
            };
            let file = resolution_to_file(&cleaned, &ell);
            Ok(Report::new(json!({ "command": name, "resolution": file }), cleaned.to_string()))
        }
    }
}

fn braces(v: &[usize]) -> String {
    let inner: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("{{{}}}", inner.join(","))
}

fn complex_json(z: &Complex64) -> Value {
    json!([z.re, z.im])
}

fn point_json(p: &[Complex64]) -> Value {
    Value::Array(p.iter().map(complex_json).collect())
}

fn complex_text(z: &Complex64) -> String {
    format!("{:.10}{:+.10}i", z.re, z.im)
}

fn point_text(p: &[Complex64]) -> String {
    let parts: Vec<String> = p.iter().map(complex_text).collect();
    format!("({})", parts.join(", "))
}

fn status_name(s: PathStatus) -> &'static str {
    match s {
        PathStatus::Converged => "converged",
        PathStatus::Diverged => "diverged",
        PathStatus::Failed => "failed",
    }
}

fn root_json(r: &TrackedRoot) -> Value {
    let origin = match r.origin {
        Origin::Cell { cell, start } => json!({ "cell": cell, "start": start }),
        Origin::Source(i) => json!({ "source": i }),
    };
    json!({
        "point": point_json(&r.point),
        "residual": r.residual,
        "status": status_name(r.status),
        "origin": origin,
    })
}

fn counts_json(c: &PathCounts) -> Value {
    json!({ "converged": c.converged, "diverged": c.diverged, "failed": c.failed })
}

fn solve_toric_report(f: &InputSystem, cfg: &RunConfig) -> Result<Report, Failure> {
    let fc = f.to_complex();
    let mv = mixed_volume_with(&fc.supports(), &cfg.mv_options())?;
    let roots = solve_toric(&fc, &cfg.tracker())?;
    let mut counts = PathCounts::default();
    for r in &roots {
        match r.status {
            PathStatus::Converged => counts.converged += 1,
            PathStatus::Diverged => counts.diverged += 1,
            PathStatus::Failed => counts.failed += 1,
        }
    }
    let mut text = format!("mixed volume {mv}, {} converged root(s)\n", counts.converged);
    for r in &roots {
        let _ = writeln!(text, "{}  {}  residual {:.2e}", status_name(r.status), point_text(&r.point), r.residual);
    }
    let json = json!({
        "command": "solve-toric",
        "mixed_volume": mv,
        "paths": counts_json(&counts),
        "roots": roots.iter().map(root_json).collect::<Vec<_>>(),
    });
    let mut report = Report::new(json, text);
    if counts.failed > 0 {
        report.numeric_failure = Some(format!("{} path(s) failed", counts.failed));
    }
    Ok(report)
}

fn resolution_json(r: &NumericResolution) -> Value {
    json!({
        "ell": r.ell,
        "q": point_json(&r.q),
        "v": r.v.iter().map(|v| point_json(v)).collect::<Vec<_>>(),
    })
}

fn witness_set_json(s: &WitnessSet) -> Value {
    json!({
        "k": s.k,
        "I": s.index_set.as_slice(),
        "expected_degree": s.expected,
        "slicing_forms": s.slicing_forms.iter().map(|l| json!({ "coeffs": l.coeffs, "rhs": l.rhs })).collect::<Vec<_>>(),
        "points": s.points.iter().map(|p| json!({
            "point": point_json(&p.root.point),
            "residual": p.root.residual,
            "higher_dimensional": p.higher_dimensional,
        })).collect::<Vec<_>>(),
        "resolution": s.resolution.as_ref().map(resolution_json),
    })
}

fn decomposition_report(command: &str, report: &DecompositionReport) -> Report {
    let mut text = String::new();
    let components: Vec<Value> = report
        .components
        .iter()
        .map(|(k, sets)| {
            for s in sets {
                let _ = writeln!(
                    text,
                    "k = {k}  I = {}  {} point(s){}",
                    s.index_set,
                    s.len(),
                    match s.expected {
                        Some(d) => format!(" (expected {d})"),
                        None => String::new(),
                    }
                );
                for p in &s.points {
                    let flag = if p.higher_dimensional { "  [higher-dimensional]" } else { "" };
                    let _ = writeln!(text, "  {}{flag}", point_text(&p.root.point));
                }
            }
            json!({ "k": k, "sets": sets.iter().map(witness_set_json).collect::<Vec<_>>() })
        })
        .collect();
    let d = &report.diagnostics;
    let _ = writeln!(
        text,
        "paths: {} converged, {} diverged, {} failed",
        d.paths.converged, d.paths.diverged, d.paths.failed
    );
    for note in &d.notes {
        let _ = writeln!(text, "note: {note}");
    }
    let json = json!({
        "command": command,
        "n": report.n,
        "components": components,
        "diagnostics": {
            "mixed_volumes": d.mixed_volumes,
            "paths": counts_json(&d.paths),
            "notes": d.notes,
        },
    });
    let mut out = Report::new(json, text);
    if d.paths.failed > 0 {
        out.numeric_failure = Some(format!("{} path(s) failed", d.paths.failed));
    }
    out
}
