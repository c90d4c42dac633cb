//! `fpcal`: generate, filter, split, fit, calibrate, evaluate and estimate
//! from the command line.
//!
//! Exit codes: 0 success, 1 usage, 2 data or validation error, 3 numeric
//! failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use fpcal::calibration::train;
use fpcal::config::Config;
use fpcal::dataset::{
    filter_isbsg, gen_synthetic, observations, parse_estimate_input, parse_projects, split, write_projects,
    EstimateInput, FilterCriteria, ProjectRecord, SplitSpec, SyntheticSpec, DEFAULT_OUTLIER_K,
};
use fpcal::effort::RegressionModel;
use fpcal::experiment::{fit_records, fit_without_outliers, run_experiment, ExperimentConfig};
use fpcal::fp_model::{breakdown_from_components, compute_ufp, ComponentKind, ComplexityLevel, WeightTable};
use fpcal::fuzzy::FuzzySystem;
use fpcal::metrics::{evaluate, DEFAULT_PRED_LEVELS};

#[derive(Parser)]
#[command(name = "fpcal", version, about = "Function point weight calibration and fuzzy sizing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON file with optional matrices/weights/fuzzy/calibration sections
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic project corpus
    Gen(GenArgs),
    /// Keep the projects that pass the quality/method/resource/type filter
    Filter(FilterArgs),
    /// Seeded train/test split
    Split(SplitArgs),
    /// Fit effort = A * UFP^B, optionally dropping outliers first
    Fit(FitArgs),
    /// Calibrate the fifteen weights against a fixed model
    Calibrate(CalibrateArgs),
    /// Compare original and calibrated weights on a test set
    Evaluate(EvaluateArgs),
    /// Size and effort for breakdown rows or a component list
    Estimate(EstimateArgs),
    /// Repeated split / fit / calibrate / evaluate
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 200)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Standard deviation of the noise on ln(effort)
    #[arg(long, default_value_t = 0.0)]
    sigma: f64,
    #[arg(long, default_value_t = 10)]
    count_max: u32,
    #[arg(long = "a", default_value_t = 10.0)]
    a: f64,
    #[arg(long = "b", default_value_t = 1.05)]
    b: f64,
    /// Hidden weight table JSON (defaults to the configured weights)
    #[arg(long)]
    hidden: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct FilterArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Keep rows with blank breakdown or GSC cells
    #[arg(long)]
    allow_incomplete: bool,
}

#[derive(Args)]
struct SplitArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    train_count: usize,
    /// Training rows
    #[arg(long)]
    output: PathBuf,
    /// Test rows
    #[arg(long)]
    test_output: PathBuf,
}

#[derive(Args)]
struct FitArgs {
    #[arg(long)]
    input: PathBuf,
    /// Drop records beyond this many residual deviations and refit
    #[arg(long)]
    outlier_k: Option<f64>,
    /// Model JSON
    #[arg(long)]
    output: Option<PathBuf>,
    /// Records kept after outlier removal, as CSV
    #[arg(long)]
    cleaned: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct CalibrateArgs {
    #[arg(long)]
    input: PathBuf,
    /// Model JSON from `fit`
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Per-epoch loss as CSV
    #[arg(long)]
    history: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Test set CSV
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    model: PathBuf,
    /// Calibrated weight table JSON (a `calibrate` result works too)
    #[arg(long)]
    calibrated: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Two-row CSV report
    #[arg(long)]
    csv: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct EstimateArgs {
    /// CSV with kind,det,secondary rows or the fifteen breakdown columns
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    model: PathBuf,
    /// Weight table JSON (defaults to the configured weights)
    #[arg(long)]
    weights: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 5)]
    reps: usize,
    #[arg(long, default_value_t = 100)]
    train_count: usize,
    #[arg(long, default_value_t = DEFAULT_OUTLIER_K)]
    outlier_k: f64,
    /// Seed of the first repetition; repetition r uses seed + r
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
    /// One row per repetition
    #[arg(long)]
    csv: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<fpcal::Error> for Failure {
    fn from(e: fpcal::Error) -> Self {
        Failure { code: if e.is_numeric() { 3 } else { 2 }, message: e.to_string() }
    }
}

type Outcome<T = ()> = std::result::Result<T, Failure>;

fn read(path: &Path) -> Outcome<String> {
    fs::read_to_string(path).map_err(|e| Failure { code: 2, message: format!("{}: {e}", path.display()) })
}

fn write(path: Option<&Path>, text: &str) -> Outcome {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure { code: 2, message: format!("{}: {e}", p.display()) }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn load_json<T: serde::de::DeserializeOwned>(path: &Path) -> Outcome<T> {
    serde_json::from_str(&read(path)?).map_err(|e| Failure { code: 2, message: format!("{}: {e}", path.display()) })
}

fn load_config(common: &Common) -> Outcome<Config> {
    match &common.config {
        Some(p) => Config::from_json(&read(p)?).map_err(|e| Failure { code: 2, message: format!("{}: {e}", p.display()) }),
        None => Ok(Config::default()),
    }
}

fn load_projects(path: &Path) -> Outcome<Vec<ProjectRecord>> {
    parse_projects(&read(path)?).map_err(|e| Failure { code: 2, message: format!("{}: {e}", path.display()) })
}

fn cmd_gen(args: GenArgs) -> Outcome {
    let config = load_config(&args.common)?;
    let hidden_weights = match &args.hidden {
        Some(p) => load_json(p)?,
        None => config.weights,
    };
    let spec = SyntheticSpec {
        project_count: args.count,
        hidden_weights,
        a: args.a,
        b: args.b,
        noise_sigma: args.sigma,
        count_max: args.count_max,
        seed: args.seed,
    };
    let records = gen_synthetic(&spec)?;
    write(args.output.as_deref(), &write_projects(&records)?)
}

fn cmd_filter(args: FilterArgs) -> Outcome {
    let records = load_projects(&args.input)?;
    let criteria = FilterCriteria { require_complete: !args.allow_incomplete, ..Default::default() };
    let kept = filter_isbsg(&records, &criteria);
    eprintln!("kept {} of {} records", kept.len(), records.len());
    write(args.output.as_deref(), &write_projects(&kept)?)
}

fn cmd_split(args: SplitArgs) -> Outcome {
    let records = load_projects(&args.input)?;
    let (train_set, test_set) = split(&records, &SplitSpec { seed: args.seed, train_count: args.train_count })?;
    write(Some(&args.output), &write_projects(&train_set)?)?;
    write(Some(&args.test_output), &write_projects(&test_set)?)
}

fn cmd_fit(args: FitArgs) -> Outcome {
    let config = load_config(&args.common)?;
    let records = load_projects(&args.input)?;
    let (model, cleaned) = match args.outlier_k {
        Some(k) => {
            let fit = fit_without_outliers(&records, &config.weights, k)?;
            eprintln!("dropped {} outliers: {:?}", fit.outliers.len(), fit.outliers);
            (fit.model, fit.cleaned)
        }
        None => (fit_records(&records, &config.weights)?, records),
    };
    if let Some(p) = &args.cleaned {
        write(Some(p), &write_projects(&cleaned)?)?;
    }
    write(args.output.as_deref(), &json(&model))
}

fn cmd_calibrate(args: CalibrateArgs) -> Outcome {
    let config = load_config(&args.common)?;
    let model: RegressionModel = load_json(&args.model)?;
    model.validate()?;
    let projects = observations(&load_projects(&args.input)?)?;
    let result = train(&config.weights, &projects, &model, &config.calibration)?;
    eprintln!(
        "{} epochs, loss {} -> {}",
        result.epochs_run, result.initial_loss, result.final_loss
    );
    if let Some(p) = &args.history {
        write(Some(p), &result.loss_history_csv())?;
    }
    write(args.output.as_deref(), &json(&result))
}

fn cmd_evaluate(args: EvaluateArgs) -> Outcome {
    let config = load_config(&args.common)?;
    let model: RegressionModel = load_json(&args.model)?;
    model.validate()?;
    let calibrated: WeightTable = load_json(&args.calibrated)?;
    let test = observations(&load_projects(&args.input)?)?;
    let report = evaluate(&test, &config.weights, &calibrated, &model, &DEFAULT_PRED_LEVELS)?;
    if let Some(p) = &args.csv {
        write(Some(p), &report.to_csv())?;
    }
    write(args.output.as_deref(), &json(&report))
}

#[derive(Serialize)]
struct BreakdownEstimate {
    id: String,
    crisp_ufp: f64,
    effort: f64,
}

#[derive(Serialize)]
struct ComponentEstimate {
    kind: ComponentKind,
    det: u32,
    secondary: u32,
    level: ComplexityLevel,
    crisp_weight: f64,
    fuzzy_weight: f64,
}

#[derive(Serialize)]
struct ApplicationEstimate {
    crisp_ufp: f64,
    fuzzy_ufp: f64,
    crisp_effort: f64,
    fuzzy_effort: f64,
    components: Vec<ComponentEstimate>,
}

fn cmd_estimate(args: EstimateArgs) -> Outcome {
    let config = load_config(&args.common)?;
    let model: RegressionModel = load_json(&args.model)?;
    model.validate()?;
    let weights = match &args.weights {
        Some(p) => load_json(p)?,
        None => config.weights,
    };
    let input = parse_estimate_input(&read(&args.input)?)
        .map_err(|e| Failure { code: 2, message: format!("{}: {e}", args.input.display()) })?;
    let text = match input {
        EstimateInput::Breakdowns(rows) => {
            let estimates = rows
                .into_iter()
                .map(|(id, b)| {
                    let ufp = compute_ufp(&b, &weights);
                    Ok(BreakdownEstimate { id, crisp_ufp: ufp, effort: model.predict(ufp)? })
                })
                .collect::<fpcal::Result<Vec<_>>>()?;
            json(&estimates)
        }
        EstimateInput::Components(comps) => {
            let fuzzy = FuzzySystem::new(&config.matrices, &weights, &config.fuzzy)?;
            let crisp_ufp = compute_ufp(&breakdown_from_components(&comps, &config.matrices)?, &weights);
            let components = comps
                .iter()
                .map(|c| {
                    let level = config.matrices.classify(c.kind, c.det, c.secondary)?;
                    Ok(ComponentEstimate {
                        kind: c.kind,
                        det: c.det,
                        secondary: c.secondary,
                        level,
                        crisp_weight: weights.weight(c.kind, level),
                        fuzzy_weight: fuzzy.infer(c.kind, c.det as f64, c.secondary as f64)?.value(),
                    })
                })
                .collect::<fpcal::Result<Vec<_>>>()?;
            let fuzzy_ufp = components.iter().map(|c| c.fuzzy_weight).sum();
            json(&ApplicationEstimate {
                crisp_ufp,
                fuzzy_ufp,
                crisp_effort: model.predict(crisp_ufp)?,
                fuzzy_effort: model.predict(fuzzy_ufp)?,
                components,
            })
        }
    };
    write(args.output.as_deref(), &text)
}

fn cmd_experiment(args: ExperimentArgs) -> Outcome {
    let config = load_config(&args.common)?;
    let corpus = load_projects(&args.input)?;
    let exp = ExperimentConfig {
        repetitions: args.reps,
        seed_base: args.seed,
        train_count: args.train_count,
        outlier_k: args.outlier_k,
        original_weights: config.weights,
        calibration: config.calibration,
        ..Default::default()
    };
    let report = run_experiment(&corpus, &exp)?;
    eprintln!(
        "mean MMRE {:.4} -> {:.4}, mean improvement {:.1}%",
        report.mean_mmre_original,
        report.mean_mmre_calibrated,
        report.mean_improvement * 100.0
    );
    if let Some(p) = &args.csv {
        write(Some(p), &report.to_csv())?;
    }
    write(args.output.as_deref(), &json(&report))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let outcome = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Filter(a) => cmd_filter(a),
        Command::Split(a) => cmd_split(a),
        Command::Fit(a) => cmd_fit(a),
        Command::Calibrate(a) => cmd_calibrate(a),
        Command::Evaluate(a) => cmd_evaluate(a),
        Command::Estimate(a) => cmd_estimate(a),
        Command::Experiment(a) => cmd_experiment(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
