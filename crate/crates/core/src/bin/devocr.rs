use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::info;

use devocr::ensemble::{combine, top_k, EnsembleWeights};
use devocr::features::FeatureVector;
use devocr::mlp::{self, LayerSizes, Mlp, TrainConfig};
use devocr::pipeline::{
    extract_all, extract_one, load_dataset, load_gray, run_cv_dir, ClassifierKind, CvConfig, PipelineError, ReportSummary,
};

/// Handwritten character recognition with three fused MLP classifiers.
#[derive(Parser)]
#[command(name = "devocr", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract all three feature vectors from a class-per-directory dataset.
    Extract {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Train one classifier on a feature dump.
    Train {
        #[arg(long)]
        features: PathBuf,
        #[arg(long)]
        classifier: ClassifierKind,
        #[arg(long)]
        hidden: Option<usize>,
        #[arg(long, default_value_t = 1000)]
        epochs: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output count; defaults to the class list in the dump header.
        #[arg(long)]
        classes: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// 3-fold cross-validation over a dataset directory.
    Cv {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        report: PathBuf,
    },
    /// Classify one image with three trained models.
    Predict {
        /// Chain-code, intersection and shadow models, in any order.
        #[arg(long, num_args = 3, required = true)]
        models: Vec<PathBuf>,
        #[arg(long)]
        weights_from: PathBuf,
        #[arg(long)]
        image: PathBuf,
        #[arg(long, default_value_t = 1)]
        top: usize,
    },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> PipelineError + '_ {
    move |source| PipelineError::Io { path: path.to_path_buf(), source }
}

const CLASSES_PREFIX: &str = "# classes=";

fn extract(data: &Path, out: &Path) -> Result<(), PipelineError> {
    let dataset = load_dataset(data)?;
    let extraction = extract_all(&dataset.samples);
    let file = fs::File::create(out).map_err(io_err(out))?;
    let mut w = BufWriter::new(file);
    writeln!(w, "{CLASSES_PREFIX}{}", dataset.classes.join(",")).map_err(io_err(out))?;
    for (i, set) in &extraction.features {
        let label = dataset.samples[*i].label;
        for kind in ClassifierKind::ALL {
            writeln!(w, "{}", set.get(kind.feature_kind()).dump_line(label)).map_err(io_err(out))?;
        }
    }
    w.flush().map_err(io_err(out))?;
    info!(
        "{} samples written, {} rejected, {} skipped",
        extraction.features.len(),
        extraction.rejected.len(),
        dataset.skipped.len()
    );
    Ok(())
}

struct TrainArgs {
    classifier: ClassifierKind,
    hidden: Option<usize>,
    epochs: usize,
    seed: u64,
    classes: Option<usize>,
}

fn train(features: &Path, args: TrainArgs, out: &Path) -> Result<(), PipelineError> {
    let text = fs::read_to_string(features).map_err(io_err(features))?;
    let mut header_classes = None;
    let mut samples = Vec::new();
    for line in text.lines() {
        if let Some(names) = line.strip_prefix(CLASSES_PREFIX) {
            header_classes = Some(names.split(',').count());
            continue;
        }
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let (label, v) = FeatureVector::parse_dump_line(line)?;
        if v.kind() == args.classifier.feature_kind() {
            samples.push((v.network_input(), label));
        }
    }
    if samples.is_empty() {
        return Err(PipelineError::EmptyDataset);
    }
    let max_label = samples.iter().map(|(_, l)| *l).max().unwrap_or(0);
    let outputs = args.classes.or(header_classes).unwrap_or(max_label + 1);
    let hidden = args.hidden.unwrap_or(args.classifier.default_hidden());
    let sizes = LayerSizes::new(args.classifier.feature_kind().len(), hidden, outputs)
        .map_err(|e| PipelineError::Config(e.to_string()))?;
    let cfg = TrainConfig { max_epochs: args.epochs, seed: args.seed, ..TrainConfig::default() };
    cfg.validate().map_err(|e| PipelineError::Config(e.to_string()))?;
    let outcome = mlp::train(&Mlp::init(sizes, cfg.seed), &samples, &cfg)?;
    let acc = mlp::accuracy(&outcome.net, &samples)?;
    info!(
        "{} epochs, final sse {:.6}, training accuracy {acc:.2}%",
        outcome.sse_history.len(),
        outcome.sse_history.last().copied().unwrap_or(f64::NAN)
    );
    mlp::save(&outcome.net, out).map_err(|source| PipelineError::Model { path: out.to_path_buf(), source })?;
    Ok(())
}

fn cv(data: &Path, config: Option<&Path>, report: &Path) -> Result<(), PipelineError> {
    let cfg = match config {
        Some(p) => CvConfig::from_file(p)?,
        None => CvConfig::default(),
    };
    let result = run_cv_dir(data, &cfg)?;
    fs::write(report, result.to_text()).map_err(io_err(report))?;
    let topk = result.topk_accuracy();
    println!("ensemble top-1 {:.2}%", result.ensemble_accuracy());
    if let Some(last) = topk.last() {
        println!("ensemble top-{} {last:.2}%", topk.len());
    }
    println!("union {:.2}%", result.union_accuracy());
    Ok(())
}

fn predict(models: &[PathBuf], weights_from: &Path, image: &Path, top: usize) -> Result<(), PipelineError> {
    let report = fs::read_to_string(weights_from).map_err(io_err(weights_from))?;
    let summary = ReportSummary::parse(&report)?;
    let mut nets: [Option<Mlp>; 3] = Default::default();
    for path in models {
        let net = mlp::load(path).map_err(|source| PipelineError::Model { path: path.clone(), source })?;
        let kind = ClassifierKind::from_input_len(net.sizes().inputs)
            .ok_or_else(|| PipelineError::Config(format!("{}: no classifier takes {} inputs", path.display(), net.sizes().inputs)))?;
        if net.sizes().outputs != summary.classes.len() {
            return Err(PipelineError::Config(format!(
                "{}: {} outputs but the report lists {} classes",
                path.display(),
                net.sizes().outputs,
                summary.classes.len()
            )));
        }
        if nets[kind.index()].replace(net).is_some() {
            return Err(PipelineError::Config(format!("two {kind} models given")));
        }
    }
    let features = extract_one(&load_gray(image)?)?;
    let mut scores = Vec::with_capacity(3);
    for kind in ClassifierKind::ALL {
        let net = nets[kind.index()].as_ref().ok_or_else(|| PipelineError::Config(format!("missing {kind} model")))?;
        scores.push(net.forward(&features.get(kind.feature_kind()).network_input())?);
    }
    let weights = devocr::ensemble::derive_weights(summary.weights).unwrap_or_else(|_| EnsembleWeights::uniform());
    let decision = combine([&scores[0], &scores[1], &scores[2]], &weights)?;
    let top = top.clamp(1, decision.classes());
    for (rank, &class) in top_k(&decision, top)?.iter().enumerate() {
        println!("{}\t{}\t{:.6}", rank + 1, summary.classes[class], decision.scores()[class]);
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), PipelineError> {
    match cli.command {
        Command::Extract { data, out } => extract(&data, &out),
        Command::Train { features, classifier, hidden, epochs, seed, classes, out } => {
            train(&features, TrainArgs { classifier, hidden, epochs, seed, classes }, &out)
        }
        Command::Cv { data, config, report } => cv(&data, config.as_deref(), &report),
        Command::Predict { models, weights_from, image, top } => predict(&models, &weights_from, &image, top),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
