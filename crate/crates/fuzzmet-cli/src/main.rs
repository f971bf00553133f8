//! `fuzzmet`: metrics, classification, convergence analysis and epsilon-nets
//! for finite level-set fuzzy sets.
//!
//! Exit codes: 0 success, 2 schema violation, 3 dimension mismatch,
//! 4 implication violation (an internal-consistency failure of the
//! convergence verdicts). `FUZZMET_THREADS` caps internal parallelism.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use fuzzmet::compactness::{greedy_epsilon_net, FuzzyFamily};
use fuzzmet::convergence::{
    gamma_residual_table, implication_report, uniform_non_platform_grid, ConvergenceError,
    DecayPolicy,
};
use fuzzmet::families::{self, FamilySpec};
use fuzzmet::fuzzy::{classify, FuzzyError};
use fuzzmet::geometry::{hausdorff, ExtendedDistance, GeometryConfig, GeometryError, PointCloud};
use fuzzmet::metrics::{dp_metric, endograph_metric, sendograph_metric, MetricError};
use fuzzmet::LevelFuzzySet;

#[derive(Parser)]
#[command(name = "fuzzmet", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MetricKind {
    /// Hausdorff distance between the supports.
    Hausdorff,
    /// Endograph metric.
    Hend,
    /// Sendograph metric.
    Send,
    /// Level metric `d_p` (requires --p).
    Dp,
}

#[derive(Subcommand)]
enum Command {
    /// Print the distance between two fuzzy-set documents.
    Dist {
        #[arg(long, value_enum)]
        metric: MetricKind,
        /// Exponent for the dp metric; required exactly for --metric dp.
        #[arg(long)]
        p: Option<f64>,
        file_a: PathBuf,
        file_b: PathBuf,
    },
    /// Print the classification report of a fuzzy-set document as JSON.
    Classify {
        file: PathBuf,
        /// Sample spacing the tolerances are derived from.
        #[arg(long, default_value_t = 1.0 / 16.0)]
        spacing: f64,
    },
    /// Run the convergence analysis of a generated family: writes the
    /// residual table CSV and prints the verdict JSON.
    Analyze {
        /// Family spec: a JSON file path, or inline JSON starting with '{'.
        spec: String,
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Number of evaluation levels.
        #[arg(long, default_value_t = 16)]
        alphas: usize,
        /// Truncation radii for the outer residuals.
        #[arg(long, value_delimiter = ',', default_values_t = vec![1.0, 4.0, 16.0, 64.0])]
        radii: Vec<f64>,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the greedy epsilon-net of a family as JSON. The family is a
    /// JSON file (or inline JSON): either a family spec or an array of
    /// fuzzy-set documents.
    Net {
        #[arg(long)]
        eps: f64,
        family: String,
    },
}

/// On-disk fuzzy-set document.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FuzzySetDocument {
    dim: usize,
    levels: Vec<f64>,
    cuts: Vec<Vec<Vec<f64>>>,
}

enum CliError {
    Schema(String),
    Dimension(String),
    Implication(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Schema(_) => 2,
            CliError::Dimension(_) => 3,
            CliError::Implication(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Schema(m)
            | CliError::Dimension(m)
            | CliError::Implication(m)
            | CliError::Io(m) => write!(f, "{m}"),
        }
    }
}

fn geometry_error(err: GeometryError) -> CliError {
    match err {
        GeometryError::DimensionMismatch { .. } => CliError::Dimension(err.to_string()),
        _ => CliError::Schema(err.to_string()),
    }
}

fn fuzzy_error(err: FuzzyError) -> CliError {
    match err {
        FuzzyError::Geometry(g) => geometry_error(g),
        _ => CliError::Schema(err.to_string()),
    }
}

fn metric_error(err: MetricError) -> CliError {
    match err {
        MetricError::Geometry(g) => geometry_error(g),
        MetricError::Fuzzy(f) => fuzzy_error(f),
        _ => CliError::Schema(err.to_string()),
    }
}

fn convergence_error(err: ConvergenceError) -> CliError {
    match err {
        ConvergenceError::ImplicationViolation { .. } => CliError::Implication(err.to_string()),
        ConvergenceError::Geometry(g) => geometry_error(g),
        ConvergenceError::Fuzzy(f) => fuzzy_error(f),
        ConvergenceError::Metric(m) => metric_error(m),
        _ => CliError::Schema(err.to_string()),
    }
}

fn load_document(path: &Path) -> Result<LevelFuzzySet, CliError> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let doc: FuzzySetDocument = serde_json::from_str(&text)
        .map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))?;
    let cuts = doc
        .cuts
        .iter()
        .map(|points| PointCloud::from_points(doc.dim, points))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Schema(format!("{}: cuts: {e}", path.display())))?;
    LevelFuzzySet::from_level_family(doc.dim, doc.levels, cuts).map_err(|e| match fuzzy_error(e) {
        CliError::Schema(m) => CliError::Schema(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn load_spec(arg: &str) -> Result<FamilySpec, CliError> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).map_err(|e| CliError::Io(format!("{arg}: {e}")))?
    };
    let spec: FamilySpec =
        serde_json::from_str(&text).map_err(|e| CliError::Schema(format!("spec: {e}")))?;
    spec.validate()
        .map_err(|e| CliError::Schema(e.to_string()))?;
    Ok(spec)
}

fn print_scalar(value: ExtendedDistance) {
    if value.is_infinite() {
        println!("inf");
    } else {
        println!("{:.12}", value.value());
    }
}

fn run_dist(
    metric: MetricKind,
    p: Option<f64>,
    file_a: &Path,
    file_b: &Path,
) -> Result<(), CliError> {
    if (metric == MetricKind::Dp) != p.is_some() {
        return Err(CliError::Schema(
            "p: required exactly for --metric dp".to_string(),
        ));
    }
    let a = load_document(file_a)?;
    let b = load_document(file_b)?;
    let value = match metric {
        MetricKind::Hausdorff => hausdorff(&a.support(), &b.support()).map_err(geometry_error)?,
        MetricKind::Hend => ExtendedDistance::new(endograph_metric(&a, &b).map_err(metric_error)?),
        MetricKind::Send => sendograph_metric(&a, &b).map_err(metric_error)?,
        MetricKind::Dp => dp_metric(&a, &b, p.expect("validated")).map_err(metric_error)?,
    };
    print_scalar(value);
    Ok(())
}

fn run_classify(file: &Path, spacing: f64) -> Result<(), CliError> {
    if !(spacing.is_finite() && spacing > 0.0) {
        return Err(CliError::Schema(
            "spacing: must be strictly positive".to_string(),
        ));
    }
    let set = load_document(file)?;
    let report = classify(&set, &GeometryConfig::for_spacing(spacing));
    println!(
        "{}",
        serde_json::to_string_pretty(&report).expect("report serializes")
    );
    Ok(())
}

fn run_analyze(
    spec_arg: &str,
    n_max: Option<usize>,
    seed: Option<u64>,
    alphas: usize,
    radii: &[f64],
    p: f64,
    out: &Path,
) -> Result<(), CliError> {
    let mut spec = load_spec(spec_arg)?;
    if let Some(n_max) = n_max {
        spec.n_max = n_max;
        spec.n_min = spec.n_min.min(n_max);
    }
    if let Some(seed) = seed {
        spec.seed = seed;
    }
    spec.validate()
        .map_err(|e| CliError::Schema(e.to_string()))?;
    let limit = families::limit_of(&spec).map_err(|e| CliError::Schema(format!("kind: {e}")))?;
    let seq = families::prefix(&spec).map_err(|e| CliError::Schema(e.to_string()))?;
    let grid = uniform_non_platform_grid(&limit, alphas);
    let policy = DecayPolicy::for_spacing(spec.grid_spacing);

    let table = gamma_residual_table(&seq, &limit, &grid, radii, p).map_err(convergence_error)?;
    fs::write(out, table.to_csv()).map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;

    let verdicts =
        implication_report(&seq, &limit, &grid, radii, p, &policy).map_err(convergence_error)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&verdicts).expect("verdicts serialize")
    );
    Ok(())
}

fn run_net(eps: f64, family_arg: &str) -> Result<(), CliError> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(CliError::Schema(
            "eps: must be strictly positive".to_string(),
        ));
    }
    let text = if family_arg.trim_start().starts_with(['{', '[']) {
        family_arg.to_string()
    } else {
        fs::read_to_string(family_arg).map_err(|e| CliError::Io(format!("{family_arg}: {e}")))?
    };
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CliError::Schema(format!("family: {e}")))?;
    let members: Vec<LevelFuzzySet> = if value.is_array() {
        let docs: Vec<FuzzySetDocument> =
            serde_json::from_value(value).map_err(|e| CliError::Schema(format!("family: {e}")))?;
        docs.into_iter()
            .map(|doc| {
                let cuts = doc
                    .cuts
                    .iter()
                    .map(|points| PointCloud::from_points(doc.dim, points))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| CliError::Schema(format!("family: cuts: {e}")))?;
                LevelFuzzySet::from_level_family(doc.dim, doc.levels, cuts).map_err(fuzzy_error)
            })
            .collect::<Result<_, _>>()?
    } else {
        let spec: FamilySpec =
            serde_json::from_value(value).map_err(|e| CliError::Schema(format!("family: {e}")))?;
        spec.validate()
            .map_err(|e| CliError::Schema(e.to_string()))?;
        (spec.n_min..=spec.n_max)
            .map(|n| families::generate(&spec, n))
            .collect::<Result<_, _>>()
            .map_err(|e| CliError::Schema(e.to_string()))?
    };
    let family = FuzzyFamily::new(members).map_err(|e| CliError::Schema(e.to_string()))?;
    let net = greedy_epsilon_net(&family, eps).map_err(|e| CliError::Schema(e.to_string()))?;
    println!(
        "{}",
        serde_json::to_string_pretty(&net).expect("net serializes")
    );
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Dist {
            metric,
            p,
            file_a,
            file_b,
        } => run_dist(metric, p, &file_a, &file_b),
        Command::Classify { file, spacing } => run_classify(&file, spacing),
        Command::Analyze {
            spec,
            n_max,
            seed,
            alphas,
            radii,
            p,
            out,
        } => run_analyze(&spec, n_max, seed, alphas, &radii, p, &out),
        Command::Net { eps, family } => run_net(eps, &family),
    }
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("FUZZMET_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.code())
        }
    }
}
