//! Command-line front end: batch thresholding experiments, the exhaustive
//! oracle, metrics-only comparisons, and histogram plot data.

mod experiment;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use hawkthresh_core::hho::{AblationFlags, HhoParams};
use hawkthresh_core::imagery::{load_image, Bounds, ThresholdVector};
use hawkthresh_core::metrics::MetricReport;
use hawkthresh_core::objectives::{ObjectiveKind, ObjectiveWeights};
use hawkthresh_core::report::{histogram_csv, thresholds_csv};

#[derive(Parser)]
#[command(
    name = "hawkthresh",
    about = "Multilevel grayscale thresholding via an altruistic, chaos-initialized hawk optimizer",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimize thresholds for each input image and emit segmented images,
    /// reports, metrics, and histogram plot data.
    Run(RunArgs),
    /// Exhaustive global-minimum search (small threshold counts only).
    Oracle(OracleArgs),
    /// Compute the six quality metrics between two images.
    Metrics(MetricsArgs),
    /// Emit histogram plot data (and an optional threshold sidecar).
    Hist(HistArgs),
}

#[derive(Args)]
struct CommonOpt {
    /// Comma-separated threshold counts to sweep.
    #[arg(long, value_delimiter = ',', default_value = "2,3,4,5")]
    thresholds: Vec<usize>,

    /// Objective function: ce | pef | hybrid | mse.
    #[arg(long, default_value = "hybrid")]
    objective: String,

    /// Weight of the cross-entropy term in the hybrid objective.
    #[arg(long, default_value_t = 0.35)]
    alpha: f64,

    /// Weight of the entropy-function term in the hybrid objective.
    #[arg(long, default_value_t = 0.65)]
    beta: f64,

    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,

    /// Use 8x8 sliding windows for UIQI instead of one global window.
    #[arg(long)]
    uiqi_windowed: bool,
}

#[derive(Args)]
struct RunArgs {
    /// Input images or directories (PNG or binary PGM).
    #[arg(required = true)]
    inputs: Vec<PathBuf>,

    #[command(flatten)]
    common: CommonOpt,

    /// Population size.
    #[arg(long, default_value_t = 50)]
    pop: usize,

    /// Maximum generations.
    #[arg(long, default_value_t = 1000)]
    iters: usize,

    /// Chaotic map for initialization:
    /// sine | singer | sinusoidal | chebyshev | tent | logistic | iterative
    /// | gauss | none.
    #[arg(long, default_value = "logistic")]
    chaos: String,

    /// Altruistic exchanges allowed per generation; 0 disables altruism.
    #[arg(long, default_value_t = 4)]
    altruism: usize,

    /// RNG seed; omitted means OS entropy (the seed used is recorded in
    /// every report).
    #[arg(long)]
    seed: Option<u64>,

    /// Sample the heavy-tail draw uniformly on [0, 1] as printed instead of
    /// the Gaussian construction.
    #[arg(long)]
    levy_literal: bool,

    /// Run every generation instead of stopping on stagnation.
    #[arg(long)]
    no_early_stop: bool,

    /// Skip writing segmented images.
    #[arg(long)]
    no_segmented: bool,

    /// Skip writing per-cell JSON reports.
    #[arg(long)]
    no_report: bool,

    /// Skip the aggregated metrics.csv.
    #[arg(long)]
    no_metrics_csv: bool,

    /// Skip histogram plot data.
    #[arg(long)]
    no_histogram: bool,
}

#[derive(Args)]
struct OracleArgs {
    /// Input images or directories (PNG or binary PGM).
    #[arg(required = true)]
    inputs: Vec<PathBuf>,

    #[command(flatten)]
    common: CommonOpt,

    /// Candidate budget for the exhaustive walk.
    #[arg(long, default_value_t = 10_000_000u128)]
    max_combos: u128,
}

#[derive(Args)]
struct MetricsArgs {
    /// Reference image.
    reference: PathBuf,
    /// Comparison image.
    comparison: PathBuf,
    /// Use 8x8 sliding windows for UIQI instead of one global window.
    #[arg(long)]
    uiqi_windowed: bool,
    /// Also write the JSON report to this path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct HistArgs {
    /// Input image.
    image: PathBuf,
    /// Comma-separated thresholds (pixel values) for the sidecar.
    #[arg(long, value_delimiter = ',')]
    th: Vec<u8>,
    /// Output directory; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let result = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Metrics(args) => cmd_metrics(args),
        Command::Hist(args) => cmd_hist(args),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

/// Honors HAWKTHRESH_THREADS as a cap on the worker pool.
fn configure_threads() {
    #[cfg(feature = "parallel")]
    if let Ok(v) = std::env::var("HAWKTHRESH_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn parse_objective(s: &str) -> Result<ObjectiveKind> {
    Ok(match s.to_ascii_lowercase().as_str() {
        "ce" | "cross-entropy" | "cross_entropy" => ObjectiveKind::CrossEntropy,
        "pef" => ObjectiveKind::Pef,
        "hybrid" => ObjectiveKind::Hybrid,
        "mse" => ObjectiveKind::Mse,
        other => bail!("unknown objective `{other}` (expected ce|pef|hybrid|mse)"),
    })
}

fn validate_threshold_counts(counts: &[usize]) -> Result<()> {
    if counts.is_empty() {
        bail!("at least one threshold count is required");
    }
    for &n in counts {
        if n == 0 || n > 254 {
            bail!("threshold count {n} outside [1, 254]");
        }
    }
    Ok(())
}

fn cmd_run(args: RunArgs) -> Result<ExitCode> {
    validate_threshold_counts(&args.common.thresholds)?;
    let objective = parse_objective(&args.common.objective)?;
    let weights = ObjectiveWeights::new(args.common.alpha, args.common.beta)
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    let (chaos_enabled, map) = match args.chaos.to_ascii_lowercase().as_str() {
        "none" => (false, hawkthresh_core::chaos::ChaoticMapKind::Logistic),
        other => (true, other.parse().map_err(|e| anyhow::anyhow!("{e}"))?),
    };
    let seed = args.seed.unwrap_or_else(rand::random);
    let params = HhoParams {
        pop_size: args.pop,
        max_iters: args.iters,
        bounds: Bounds::default(),
        levy_beta: 1.5,
        levy_literal: args.levy_literal,
        altruism_count: args.altruism,
        altruism_iters: 10,
        weights,
        map,
        seed,
        early_stop: !args.no_early_stop,
    };
    let flags = AblationFlags {
        chaos_enabled,
        altruism_enabled: args.altruism > 0,
        objective,
    };
    let config = experiment::RunConfig {
        inputs: args.inputs,
        n_thresholds: args.common.thresholds,
        params,
        flags,
        out_dir: args.common.out,
        uiqi_windowed: args.common.uiqi_windowed,
        emit_segmented: !args.no_segmented,
        emit_report: !args.no_report,
        emit_metrics_csv: !args.no_metrics_csv,
        emit_histogram: !args.no_histogram,
    };
    let failures = experiment::run_experiment(&config)?;
    if failures == 0 {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("{failures} image(s) failed");
        Ok(ExitCode::FAILURE)
    }
}

fn cmd_oracle(args: OracleArgs) -> Result<ExitCode> {
    validate_threshold_counts(&args.common.thresholds)?;
    let objective = parse_objective(&args.common.objective)?;
    let weights = ObjectiveWeights::new(args.common.alpha, args.common.beta)
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    let failures = experiment::run_oracle(
        &args.inputs,
        &args.common.thresholds,
        objective,
        weights,
        args.max_combos,
        &args.common.out,
        args.common.uiqi_windowed,
    )?;
    if failures == 0 {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("{failures} cell(s) failed");
        Ok(ExitCode::FAILURE)
    }
}

fn cmd_metrics(args: MetricsArgs) -> Result<ExitCode> {
    let a = load_image(&args.reference)
        .with_context(|| format!("loading {}", args.reference.display()))?;
    let b = load_image(&args.comparison)
        .with_context(|| format!("loading {}", args.comparison.display()))?;
    let report =
        MetricReport::compute(&a, &b, args.uiqi_windowed).map_err(|e| anyhow::anyhow!("{e}"))?;
    let json = serde_json::to_string_pretty(&report)?;
    println!("{json}");
    if let Some(path) = args.out {
        std::fs::write(&path, format!("{json}\n"))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_hist(args: HistArgs) -> Result<ExitCode> {
    let image =
        load_image(&args.image).with_context(|| format!("loading {}", args.image.display()))?;
    let hist = hawkthresh_core::imagery::compute_histogram(&image);
    let hist_data = histogram_csv(&hist);
    let sidecar = if args.th.is_empty() {
        None
    } else {
        let mut levels: Vec<u16> = args.th.iter().map(|&p| u16::from(p) + 1).collect();
        levels.sort_unstable();
        let th = ThresholdVector::new(levels, Bounds::default())
            .map_err(|e| anyhow::anyhow!("{e}"))?;
        Some(thresholds_csv(&th))
    };
    match args.out {
        Some(dir) => {
            std::fs::create_dir_all(&dir)?;
            let stem = experiment::file_stem(&args.image);
            std::fs::write(dir.join(format!("{stem}_hist.csv")), hist_data)?;
            if let Some(side) = sidecar {
                std::fs::write(dir.join(format!("{stem}_thresholds.csv")), side)?;
            }
        }
        None => {
            print!("{hist_data}");
            if let Some(side) = sidecar {
                print!("{side}");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
