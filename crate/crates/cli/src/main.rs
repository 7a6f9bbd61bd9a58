//! Command-line front end for sensor placement experiments. Every command
//! prints exactly one JSON result document on stdout; human-readable
//! messages and library warnings go to stderr. On failure, stdout carries a
//! machine-readable error object and the exit code identifies the error
//! kind (see the README for the full map).

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ndarray::Array2;
use sparsor::basis::BasisSpec;
use sparsor::classification::{Sspoc, SspocConfig, DEFAULT_L1_PENALTY, DEFAULT_THRESHOLD};
use sparsor::io::dataset::{load_labeled, load_matrix, save_labeled, save_matrix};
use sparsor::io::generate::{low_rank, train_test_split, two_gaussians, vandermonde};
use sparsor::io::persist::{load_sspor, save_sspoc, save_sspor};
use sparsor::io::result::{ErrorPoint, ResultDocument};
use sparsor::optimizers::{CostVector, OptimizerSpec};
use sparsor::reconstruction::{Sspor, SsporConfig};
use sparsor::{Error, Result};

/// Environment variable consulted when `--seed` is omitted.
const SEED_ENV: &str = "SPARSOR_SEED";

#[derive(Parser)]
#[command(
    name = "sparsor",
    version,
    about = "Data-driven sparse sensor placement for reconstruction and classification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rank sensor locations for state reconstruction.
    Rank(RankArgs),
    /// Sweep reconstruction error over sensor counts.
    Reconstruct(ReconstructArgs),
    /// Select sensors for classification and report held-out accuracy.
    Classify(ClassifyArgs),
    /// Write a deterministic synthetic dataset.
    Generate(GenerateArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BasisKind {
    /// Raw snapshots as modes.
    Identity,
    /// Exact truncated SVD modes.
    Svd,
    /// Randomized SVD modes.
    Rsvd,
    /// Seeded Gaussian projection modes.
    Randproj,
}

impl BasisKind {
    fn name(self) -> &'static str {
        match self {
            BasisKind::Identity => "identity",
            BasisKind::Svd => "svd",
            BasisKind::Rsvd => "rsvd",
            BasisKind::Randproj => "randproj",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OptimizerKind {
    /// Pivoted QR on the mode matrix.
    Qr,
    /// Cost-weighted pivoted QR; requires --costs.
    Ccqr,
}

#[derive(Args)]
struct BasisArgs {
    /// Basis family fitted to the training snapshots.
    #[arg(long, value_enum, default_value_t = BasisKind::Identity)]
    basis: BasisKind,
    /// Mode count; required for svd, rsvd, and randproj, optional for
    /// identity (defaults to all snapshots).
    #[arg(long)]
    modes: Option<usize>,
}

impl BasisArgs {
    fn build(&self, seed: u64) -> Result<BasisSpec> {
        let require_modes = || {
            self.modes.ok_or_else(|| {
                Error::InvalidParams(format!(
                    "--modes is required with --basis {}",
                    self.basis.name()
                ))
            })
        };
        Ok(match self.basis {
            BasisKind::Identity => BasisSpec::Identity {
                n_basis_modes: self.modes,
            },
            BasisKind::Svd => BasisSpec::Svd {
                n_basis_modes: require_modes()?,
                randomized: false,
                seed,
            },
            BasisKind::Rsvd => BasisSpec::Svd {
                n_basis_modes: require_modes()?,
                randomized: true,
                seed,
            },
            BasisKind::Randproj => BasisSpec::RandomProjection {
                n_basis_modes: require_modes()?,
                seed,
            },
        })
    }

    fn record(&self, doc: &mut ResultDocument) {
        doc.set_parameter("basis", self.basis.name());
        doc.set_parameter("modes", opt_value(self.modes));
    }
}

#[derive(Args)]
struct OptimizerArgs {
    #[arg(long, value_enum, default_value_t = OptimizerKind::Qr)]
    optimizer: OptimizerKind,
    /// Single-column CSV of per-location costs.
    #[arg(long)]
    costs: Option<PathBuf>,
    /// Strength of the cost penalty; 0 degenerates to plain QR.
    #[arg(long, default_value_t = 1.0)]
    cost_weight: f64,
}

impl OptimizerArgs {
    fn build(&self) -> Result<OptimizerSpec> {
        match self.optimizer {
            OptimizerKind::Qr => {
                if self.costs.is_some() {
                    return Err(Error::InvalidParams(
                        "--costs requires --optimizer ccqr".to_string(),
                    ));
                }
                Ok(OptimizerSpec::Qr)
            }
            OptimizerKind::Ccqr => {
                let path = self.costs.as_ref().ok_or_else(|| {
                    Error::InvalidParams("--optimizer ccqr requires --costs".to_string())
                })?;
                let costs = load_cost_column(path)?;
                Ok(OptimizerSpec::Ccqr(CostVector::new(costs, self.cost_weight)?))
            }
        }
    }

    fn record(&self, doc: &mut ResultDocument) {
        let name = match self.optimizer {
            OptimizerKind::Qr => "qr",
            OptimizerKind::Ccqr => "ccqr",
        };
        doc.set_parameter("optimizer", name);
        if self.optimizer == OptimizerKind::Ccqr {
            doc.set_parameter("costs", path_value(self.costs.as_deref()));
            doc.set_parameter("cost_weight", self.cost_weight);
        }
    }
}

#[derive(Args)]
struct RankArgs {
    /// Training snapshots (rows are examples).
    data: PathBuf,
    #[command(flatten)]
    basis: BasisArgs,
    #[command(flatten)]
    optimizer: OptimizerArgs,
    /// Number of sensors to report; defaults to the meaningful count.
    #[arg(long)]
    n_sensors: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Save the fitted model as versioned JSON.
    #[arg(long)]
    save_model: Option<PathBuf>,
}

#[derive(Args)]
struct ReconstructArgs {
    /// Training snapshots; omit when loading a saved model.
    #[arg(required_unless_present = "model", conflicts_with = "model")]
    data: Option<PathBuf>,
    /// Saved model JSON from `rank --save-model`.
    #[arg(long)]
    model: Option<PathBuf>,
    #[command(flatten)]
    basis: BasisArgs,
    #[command(flatten)]
    optimizer: OptimizerArgs,
    #[arg(long)]
    n_sensors: Option<usize>,
    /// Inclusive sensor-count sweep, e.g. 2..11; defaults to the model's
    /// own sensor count.
    #[arg(long)]
    sensor_range: Option<String>,
    /// Snapshots to reconstruct (rows are examples).
    #[arg(long)]
    test: PathBuf,
    /// Also write the error curve as a plot-ready CSV.
    #[arg(long)]
    curve_csv: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Labeled snapshots: integer label first, then features.
    data: PathBuf,
    #[command(flatten)]
    basis: BasisArgs,
    /// Number of sensors; defaults to automatic row-norm selection.
    #[arg(long)]
    n_sensors: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_L1_PENALTY)]
    l1_penalty: f64,
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    threshold: f64,
    /// Fraction of examples used for training; 1.0 evaluates on the
    /// training data itself (with a warning).
    #[arg(long, default_value_t = 0.8)]
    train_frac: f64,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    save_model: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenerateKind {
    /// Monomial rows evaluated on an equispaced unit grid.
    Vandermonde,
    /// Gaussian low-rank product.
    Lowrank,
    /// Two labeled Gaussian clusters.
    TwoGaussians,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    kind: GenerateKind,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
    /// Grid size (vandermonde).
    #[arg(long, default_value_t = 1001)]
    points: usize,
    /// Monomial count (vandermonde).
    #[arg(long, default_value_t = 11)]
    modes: usize,
    /// Row count (lowrank).
    #[arg(long, default_value_t = 20)]
    rows: usize,
    /// Column count (lowrank).
    #[arg(long, default_value_t = 30)]
    cols: usize,
    /// Rank (lowrank).
    #[arg(long, default_value_t = 3)]
    rank: usize,
    /// Examples per class (two-gaussians).
    #[arg(long, default_value_t = 50)]
    per_class: usize,
    /// Feature count (two-gaussians).
    #[arg(long, default_value_t = 4)]
    features: usize,
    /// Class-mean separation on the first feature (two-gaussians).
    #[arg(long, default_value_t = 6.0)]
    separation: f64,
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    let started = Instant::now();
    match run(cli.command) {
        Ok(mut doc) => {
            doc.timing_ms = started.elapsed().as_millis() as u64;
            match doc.to_json() {
                Ok(text) => {
                    println!("{text}");
                    ExitCode::SUCCESS
                }
                Err(e) => fail(&e),
            }
        }
        Err(e) => fail(&e),
    }
}

fn run(command: Command) -> Result<ResultDocument> {
    match command {
        Command::Rank(args) => cmd_rank(args),
        Command::Reconstruct(args) => cmd_reconstruct(args),
        Command::Classify(args) => cmd_classify(args),
        Command::Generate(args) => cmd_generate(args),
    }
}

/// Emit the machine-readable error object on stdout, the human message on
/// stderr, and the kind-specific exit code.
fn fail(e: &Error) -> ExitCode {
    let (code, kind) = classify_error(e);
    eprintln!("error: {e}");
    let object = serde_json::json!({
        "error": { "code": code, "kind": kind, "message": e.to_string() }
    });
    match serde_json::to_string_pretty(&object) {
        Ok(text) => println!("{text}"),
        Err(_) => println!("{object}"),
    }
    ExitCode::from(code)
}

fn classify_error(e: &Error) -> (u8, &'static str) {
    match e {
        Error::EmptyMatrix => (10, "EmptyMatrix"),
        Error::NonFinite { .. } => (11, "NonFinite"),
        Error::DimensionMismatch { .. } => (12, "DimensionMismatch"),
        Error::MaxPivotsTooLarge { .. } => (13, "MaxPivotsTooLarge"),
        Error::RankTooLarge { .. } => (14, "RankTooLarge"),
        Error::TooManyModes { .. } => (15, "TooManyModes"),
        Error::NegativeCost => (16, "NegativeCost"),
        Error::InfeasibleSparsity { .. } => (17, "InfeasibleSparsity"),
        Error::ZeroDictionary => (18, "ZeroDictionary"),
        Error::NonPositiveAlpha { .. } => (19, "NonPositiveAlpha"),
        Error::SingleClass => (20, "SingleClass"),
        Error::NotFitted => (21, "NotFitted"),
        Error::SingularMatrix => (22, "SingularMatrix"),
        Error::OutOfRange { .. } => (23, "OutOfRange"),
        Error::NoSensorsSelected => (24, "NoSensorsSelected"),
        Error::IndexOutOfRange { .. } => (25, "IndexOutOfRange"),
        Error::FileNotFound(_) => (26, "FileNotFound"),
        Error::ParseError { .. } => (27, "ParseError"),
        Error::LabelColumnMissing { .. } => (28, "LabelColumnMissing"),
        Error::InvalidParams(_) => (29, "InvalidParams"),
        Error::Io(_) => (30, "Io"),
    }
}

fn cmd_rank(args: RankArgs) -> Result<ResultDocument> {
    let seed = resolve_seed(args.seed)?;
    let x = load_matrix(&args.data)?;
    let config = SsporConfig {
        basis: args.basis.build(seed)?,
        optimizer: args.optimizer.build()?,
        n_sensors: args.n_sensors,
        seed,
    };
    let mut model = Sspor::new(config);
    model.fit(x.view())?;

    let mut doc = ResultDocument::new("rank");
    doc.set_parameter("data", path_value(Some(&args.data)));
    args.basis.record(&mut doc);
    args.optimizer.record(&mut doc);
    doc.set_parameter("n_sensors", opt_value(args.n_sensors));
    doc.set_parameter("seed", seed);
    doc.selected_sensors = model.selected_sensors()?.to_vec();

    if let Some(path) = &args.save_model {
        save_sspor(path, &model)?;
        eprintln!("model saved to {}", path.display());
    }
    Ok(doc)
}

fn cmd_reconstruct(args: ReconstructArgs) -> Result<ResultDocument> {
    let seed = resolve_seed(args.seed)?;
    let mut doc = ResultDocument::new("reconstruct");

    let model = if let Some(path) = &args.model {
        doc.set_parameter("model", path_value(Some(path)));
        load_sspor(path)?
    } else {
        let data = args.data.as_ref().expect("clap enforces data xor model");
        let x = load_matrix(data)?;
        let config = SsporConfig {
            basis: args.basis.build(seed)?,
            optimizer: args.optimizer.build()?,
            n_sensors: args.n_sensors,
            seed,
        };
        let mut model = Sspor::new(config);
        model.fit(x.view())?;
        doc.set_parameter("data", path_value(Some(data)));
        args.basis.record(&mut doc);
        args.optimizer.record(&mut doc);
        doc.set_parameter("n_sensors", opt_value(args.n_sensors));
        doc.set_parameter("seed", seed);
        model
    };

    let test = load_matrix(&args.test)?;
    let range = match &args.sensor_range {
        Some(text) => parse_sensor_range(text)?,
        None => vec![model.n_sensors()?],
    };
    let curve = model.reconstruction_error(test.view(), &range)?;

    doc.set_parameter("test", path_value(Some(&args.test)));
    doc.set_parameter(
        "sensor_range",
        opt_value(args.sensor_range.clone()),
    );
    doc.selected_sensors = model.selected_sensors()?.to_vec();
    let points: Vec<ErrorPoint> = range
        .iter()
        .zip(&curve)
        .map(|(&n_sensors, &rmse)| ErrorPoint { n_sensors, rmse })
        .collect();
    if let Some(path) = &args.curve_csv {
        write_curve_csv(path, &points)?;
        eprintln!("error curve written to {}", path.display());
    }
    doc.error_curve = Some(points);
    Ok(doc)
}

fn cmd_classify(args: ClassifyArgs) -> Result<ResultDocument> {
    let seed = resolve_seed(args.seed)?;
    let (x, y) = load_labeled(&args.data)?;
    if !(args.train_frac > 0.0 && args.train_frac <= 1.0) {
        return Err(Error::InvalidParams(format!(
            "--train-frac must be in (0, 1], got {}",
            args.train_frac
        )));
    }

    let on_training = args.train_frac >= 1.0;
    let (xtr, ytr, xte, yte) = if on_training {
        log::warn!("train fraction 1.0: accuracy is measured on the training data");
        (x.clone(), y.clone(), x.clone(), y.clone())
    } else {
        train_test_split(&x, &y, args.train_frac, seed)?
    };

    let config = SspocConfig {
        basis: args.basis.build(seed)?,
        n_sensors: args.n_sensors,
        threshold: args.threshold,
        l1_penalty: args.l1_penalty,
        ..SspocConfig::default()
    };
    let mut model = Sspoc::new(config);
    model.fit(xtr.view(), &ytr)?;
    let sensors = model.selected_sensors()?.to_vec();

    let mut sub = Array2::<f64>::zeros((xte.nrows(), sensors.len()));
    for (k, &j) in sensors.iter().enumerate() {
        sub.column_mut(k).assign(&xte.column(j));
    }
    let preds = model.predict(sub.view())?;
    let hits = preds.iter().zip(&yte).filter(|(a, b)| a == b).count();
    let accuracy = hits as f64 / yte.len().max(1) as f64;

    let mut doc = ResultDocument::new("classify");
    doc.set_parameter("data", path_value(Some(&args.data)));
    args.basis.record(&mut doc);
    doc.set_parameter("n_sensors", opt_value(args.n_sensors));
    doc.set_parameter("l1_penalty", args.l1_penalty);
    doc.set_parameter("threshold", args.threshold);
    doc.set_parameter("train_frac", args.train_frac);
    doc.set_parameter("seed", seed);
    doc.selected_sensors = sensors;
    doc.accuracy = Some(accuracy);

    if let Some(path) = &args.save_model {
        save_sspoc(path, &model)?;
        eprintln!("model saved to {}", path.display());
    }
    Ok(doc)
}

fn cmd_generate(args: GenerateArgs) -> Result<ResultDocument> {
    let seed = resolve_seed(args.seed)?;
    let mut doc = ResultDocument::new("generate");
    doc.set_parameter("out", path_value(Some(&args.out)));
    doc.set_parameter("seed", seed);

    match args.kind {
        GenerateKind::Vandermonde => {
            let x = vandermonde(args.points, args.modes)?;
            save_matrix(&args.out, x.view())?;
            doc.set_parameter("kind", "vandermonde");
            doc.set_parameter("points", args.points);
            doc.set_parameter("modes", args.modes);
        }
        GenerateKind::Lowrank => {
            let x = low_rank(args.rows, args.cols, args.rank, seed)?;
            save_matrix(&args.out, x.view())?;
            doc.set_parameter("kind", "lowrank");
            doc.set_parameter("rows", args.rows);
            doc.set_parameter("cols", args.cols);
            doc.set_parameter("rank", args.rank);
        }
        GenerateKind::TwoGaussians => {
            let (x, y) = two_gaussians(args.per_class, args.features, args.separation, seed)?;
            save_labeled(&args.out, x.view(), &y)?;
            doc.set_parameter("kind", "two-gaussians");
            doc.set_parameter("per_class", args.per_class);
            doc.set_parameter("features", args.features);
            doc.set_parameter("separation", args.separation);
        }
    }
    eprintln!("dataset written to {}", args.out.display());
    Ok(doc)
}

fn resolve_seed(flag: Option<u64>) -> Result<u64> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var(SEED_ENV) {
        Ok(text) => text.trim().parse::<u64>().map_err(|_| {
            Error::InvalidParams(format!(
                "{SEED_ENV} must be an unsigned integer, got {text:?}"
            ))
        }),
        Err(_) => Ok(0),
    }
}

/// Parse an inclusive sweep like "2..11" into [2, 3, ..., 11].
fn parse_sensor_range(text: &str) -> Result<Vec<usize>> {
    let bad = || {
        Error::InvalidParams(format!(
            "--sensor-range must be a nonempty inclusive range like 2..11, got {text:?}"
        ))
    };
    let (lo, hi) = text.split_once("..").ok_or_else(bad)?;
    let lo: usize = lo.trim().parse().map_err(|_| bad())?;
    let hi: usize = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok((lo..=hi).collect())
}

fn load_cost_column(path: &Path) -> Result<Vec<f64>> {
    let m = load_matrix(path)?;
    if m.ncols() == 1 {
        Ok(m.column(0).to_vec())
    } else if m.nrows() == 1 {
        Ok(m.row(0).to_vec())
    } else {
        Err(Error::InvalidParams(format!(
            "cost file {} must hold a single column, found {}x{}",
            path.display(),
            m.nrows(),
            m.ncols()
        )))
    }
}

fn write_curve_csv(path: &Path, points: &[ErrorPoint]) -> Result<()> {
    use std::io::Write as _;
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "n_sensors,rmse").map_err(Error::Io)?;
    for point in points {
        writeln!(out, "{},{:.16e}", point.n_sensors, point.rmse).map_err(Error::Io)?;
    }
    Ok(())
}

fn opt_value<T: Into<serde_json::Value>>(v: Option<T>) -> serde_json::Value {
    v.map_or(serde_json::Value::Null, Into::into)
}

fn path_value(path: Option<&Path>) -> serde_json::Value {
    path.map_or(serde_json::Value::Null, |p| {
        serde_json::Value::from(p.display().to_string())
    })
}
