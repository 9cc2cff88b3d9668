//! `drgkit`: split and displacement decompositions of Q-polynomial
//! distance-regular graphs from the command line.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 bad input or a
//! graph outside the model, 3 a numerical failure.

mod report;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use drgkit_core::drg::DrgError;
use drgkit_core::families::{FamilyError, GraphSpec, DEFAULT_SIZE_CAP};
use drgkit_core::linalg::parse_rational;
use drgkit_core::terwilliger::{
    analyze, check_dual_width_bound, random_sparse_vectors, representative_base_vertices, LocalAlgebra, OracleConfig,
    TerwilligerError, VerifyTolerances,
};
use drgkit_core::{DrgProfile, Graph, Rational, Scalar};
use rayon::prelude::*;

use report::{CheckRow, DualWidthOutput, DualWidthRow, Orderings, RunOutput};

#[derive(Parser)]
#[command(name = "drgkit", version, about = "Split and displacement decompositions of Q-polynomial distance-regular graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Graph summary plus per-vertex decomposition tables.
    Analyze(RunArgs),
    /// Run every verification check at each selected base vertex.
    Verify(RunArgs),
    /// One row of dimensions per base vertex.
    Census(RunArgs),
    /// Dual width of vectors and the distance bound it implies.
    Dualwidth(DualWidthArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
    /// Exact when the spectrum is rational, float otherwise.
    Auto,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OracleArg {
    On,
    Off,
    /// On when the graph is within the oracle cap.
    Auto,
}

#[derive(Args)]
struct Common {
    /// `hamming:D,q`, `johnson:n,k`, `cycle:n`, or an edge-list file.
    graph: String,
    #[arg(long, value_enum, default_value = "auto")]
    mode: ModeArg,
    /// Index into the list of Q-polynomial orderings.
    #[arg(long, default_value_t = 0)]
    ordering: usize,
    /// Zero threshold for oracle comparisons and dual widths (float mode).
    #[arg(long, env = "DRGKIT_TOL")]
    tol: Option<f64>,
    #[arg(long, default_value = "table")]
    format: Format,
    /// Largest graph that will be built or loaded.
    #[arg(long, default_value_t = DEFAULT_SIZE_CAP)]
    size_cap: usize,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: Common,
    /// `all`, `representatives`, or a comma-separated vertex list.
    #[arg(long, default_value = "all", conflicts_with = "base_vertex")]
    base_vertices: BaseVertices,
    /// Shorthand for a single base vertex.
    #[arg(long)]
    base_vertex: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value = "auto")]
    oracle: OracleArg,
    /// Largest vertex count the oracle will attempt.
    #[arg(long, default_value_t = OracleConfig::default().cap)]
    oracle_cap: usize,
}

#[derive(Args)]
struct DualWidthArgs {
    #[command(flatten)]
    common: Common,
    /// Vector file: one rational or decimal entry per line.
    #[arg(long, required_unless_present = "random")]
    vector: Option<PathBuf>,
    /// Check this many random sparse integer vectors.
    #[arg(long)]
    random: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Most nonzero entries in a random vector.
    #[arg(long, default_value_t = 4)]
    max_support: usize,
}

#[derive(Clone, Debug)]
enum BaseVertices {
    All,
    Representatives,
    List(Vec<usize>),
}

impl FromStr for BaseVertices {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "all" => Ok(Self::All),
            "representatives" | "reps" => Ok(Self::Representatives),
            _ => s
                .split(',')
                .map(|t| t.trim().parse().map_err(|_| format!("`{t}` is not a vertex id")))
                .collect::<Result<_, _>>()
                .map(Self::List),
        }
    }
}

/// Error carrying the process exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }
}

impl From<FamilyError> for Failure {
    fn from(e: FamilyError) -> Self {
        Self::input(e.to_string())
    }
}

impl From<DrgError> for Failure {
    fn from(e: DrgError) -> Self {
        let code = match e {
            DrgError::SpectrumValidation(_) => 3,
            _ => 2,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<TerwilligerError> for Failure {
    fn from(e: TerwilligerError) -> Self {
        use TerwilligerError as E;
        match e {
            E::Drg(inner) => inner.into(),
            E::BaseVertexOutOfRange { .. }
            | E::InvalidOrdering(_)
            | E::DegenerateDualEigenvalues { .. }
            | E::OracleCapExceeded { .. }
            | E::ZeroVector
            | E::LengthMismatch { .. } => Self::input(e.to_string()),
            E::Linalg(_) | E::InvariantViolation(_) | E::OrthogonalityViolation { .. } | E::IrreducibilityNotCertified { .. } => {
                Self { code: 3, message: e.to_string() }
            }
        }
    }
}

fn build_graph(common: &Common) -> Result<Graph, Failure> {
    let spec: GraphSpec = common.graph.parse()?;
    Ok(spec.build(common.size_cap)?)
}

/// Picks the scalar type, then hands the certified profile to `body`.
fn with_profile<T>(
    common: &Common,
    exact: impl FnOnce(DrgProfile<Rational>) -> Result<T, Failure>,
    float: impl FnOnce(DrgProfile<f64>) -> Result<T, Failure>,
) -> Result<T, Failure> {
    let graph = build_graph(common)?;
    match common.mode {
        ModeArg::Exact => exact(DrgProfile::certify(graph)?),
        ModeArg::Float => float(DrgProfile::certify(graph)?),
        ModeArg::Auto => match DrgProfile::<Rational>::certify(graph.clone()) {
            Ok(p) => exact(p),
            Err(DrgError::ExactModeUnsupported) => float(DrgProfile::certify(graph)?),
            Err(e) => Err(e.into()),
        },
    }
}

fn select_vertices<S: Scalar>(args: &RunArgs, profile: &DrgProfile<S>) -> Result<Vec<usize>, Failure> {
    let n = profile.n();
    let vertices = match (&args.base_vertex, &args.base_vertices) {
        (Some(x), _) => vec![*x],
        (None, BaseVertices::All) => (0..n).collect(),
        (None, BaseVertices::Representatives) => representative_base_vertices(profile.distances()),
        (None, BaseVertices::List(v)) => v.clone(),
    };
    if let Some(&bad) = vertices.iter().find(|&&x| x >= n) {
        return Err(TerwilligerError::BaseVertexOutOfRange { vertex: bad, n }.into());
    }
    Ok(vertices)
}

fn run<S: Scalar>(args: &RunArgs, profile: DrgProfile<S>) -> Result<RunOutput, Failure> {
    let ordering = profile.ordering(args.common.ordering)?.to_vec();
    let vertices = select_vertices(args, &profile)?;
    let config = OracleConfig { cap: args.oracle_cap, ..OracleConfig::default() };
    let use_oracle = match args.oracle {
        OracleArg::On => true,
        OracleArg::Off => false,
        OracleArg::Auto => profile.n() <= config.cap,
    };
    let tol = VerifyTolerances { oracle: args.common.tol.unwrap_or(VerifyTolerances::default().oracle) };
    let results: Vec<_> = vertices
        .par_iter()
        .map(|&x| -> Result<_, TerwilligerError> {
            let local = LocalAlgebra::new(&profile, &ordering, x)?;
            let a = analyze(&local, use_oracle.then_some((args.seed, &config)), &tol)?;
            Ok((report::vertex_result(x, local.theta_star(), &a), a.report))
        })
        .collect::<Result<_, _>>()?;
    let mut per_vertex = Vec::with_capacity(results.len());
    let mut checks = Vec::new();
    for (v, r) in results {
        checks.extend(r.checks.into_iter().map(|check| CheckRow { vertex: r.base_vertex, check }));
        per_vertex.push(v);
    }
    Ok(RunOutput {
        graph: report::graph_summary(&args.common.graph, &profile),
        spectrum: report::spectrum(&profile),
        orderings: Orderings { available: profile.qpoly_orderings().to_vec(), selected: args.common.ordering },
        per_vertex,
        checks,
    })
}

fn cmd_run(args: &RunArgs, render: fn(&RunOutput, Format) -> String) -> Result<ExitCode, Failure> {
    let out = with_profile(&args.common, |p| run(args, p), |p| run(args, p))?;
    print!("{}", render(&out, args.common.format));
    if out.all_passed() {
        Ok(ExitCode::SUCCESS)
    } else {
        for r in out.checks.iter().filter(|r| !r.check.passed()) {
            eprintln!(
                "vertex {}: {} {} failed{}",
                r.vertex,
                r.check.id,
                r.check.name,
                r.check.witness.as_ref().map(|w| format!(": {w}")).unwrap_or_default()
            );
        }
        Ok(ExitCode::from(1))
    }
}

fn render_analyze(out: &RunOutput, format: Format) -> String {
    match format {
        Format::Json => report::to_json(out),
        Format::Csv => report::census_csv(out),
        Format::Table => report::analyze_table(out),
    }
}

fn render_verify(out: &RunOutput, format: Format) -> String {
    match format {
        Format::Json => report::to_json(out),
        Format::Csv => report::checks_csv(out),
        Format::Table => report::verify_table(out),
    }
}

fn render_census(out: &RunOutput, format: Format) -> String {
    match format {
        Format::Json => report::to_json(out),
        Format::Csv => report::census_csv(out),
        Format::Table => report::census_table(out),
    }
}

/// Conversion from a parsed literal into the run's scalar type.
trait FromLiteral: Scalar {
    fn from_literal(r: Rational) -> Self;
}

impl FromLiteral for f64 {
    fn from_literal(r: Rational) -> Self {
        r.to_f64()
    }
}

impl FromLiteral for Rational {
    fn from_literal(r: Rational) -> Self {
        r
    }
}

fn read_vector<S: FromLiteral>(path: &PathBuf) -> Result<Vec<S>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(k, l)| {
            parse_rational(l)
                .map(S::from_literal)
                .ok_or_else(|| Failure::input(format!("{} line {}: `{}` is not a number", path.display(), k + 1, l.trim())))
        })
        .collect()
}

fn dual_width_run<S: FromLiteral>(args: &DualWidthArgs, profile: DrgProfile<S>) -> Result<DualWidthOutput, Failure> {
    let ordering = profile.ordering(args.common.ordering)?.to_vec();
    let tol = args.common.tol.unwrap_or(1e-7);
    let mut inputs: Vec<(String, Vec<S>)> = Vec::new();
    if let Some(path) = &args.vector {
        inputs.push((path.display().to_string(), read_vector(path)?));
    }
    if let Some(count) = args.random {
        let vs = random_sparse_vectors::<S>(profile.n(), count, args.max_support, args.seed);
        inputs.extend(vs.into_iter().enumerate().map(|(k, v)| (format!("random#{k}"), v)));
    }
    let vectors = inputs
        .into_iter()
        .map(|(source, v)| Ok(DualWidthRow { source, report: check_dual_width_bound(&profile, &ordering, &v, tol)? }))
        .collect::<Result<Vec<_>, TerwilligerError>>()?;
    let passed = vectors.iter().filter(|r| r.report.pass).count();
    Ok(DualWidthOutput {
        graph: report::graph_summary(&args.common.graph, &profile),
        ordering,
        total: vectors.len(),
        passed,
        vectors,
    })
}

fn cmd_dualwidth(args: &DualWidthArgs) -> Result<ExitCode, Failure> {
    let out = with_profile(&args.common, |p| dual_width_run(args, p), |p| dual_width_run(args, p))?;
    let text = match args.common.format {
        Format::Json => report::to_json(&out),
        Format::Csv => report::dual_width_csv(&out),
        Format::Table => report::dual_width_table(&out),
    };
    print!("{text}");
    Ok(if out.passed == out.total { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Analyze(a) => cmd_run(a, render_analyze),
        Command::Verify(a) => cmd_run(a, render_verify),
        Command::Census(a) => cmd_run(a, render_census),
        Command::Dualwidth(a) => cmd_dualwidth(a),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
