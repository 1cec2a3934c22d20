use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::folds::{three_fold_split, Rotation, ROTATIONS};
use super::report::EvalReport;
use super::{extract_all, load_dataset, ClassifierKind, CvConfig, PipelineError};
use crate::ensemble::{combine, derive_weights, union_top1_hit, EnsembleWeights};
use crate::features::FeatureSet;
use crate::mlp::{train, ClassScores, LayerSizes, Mlp, TrainConfig};

/// Largest k reported for top-k accuracy.
pub const MAX_TOP_K: usize = 5;

/// Counts from one train/test rotation.
#[derive(Debug, Clone, PartialEq)]
pub struct FoldResult {
    pub rotation: Rotation,
    /// Samples the networks were fitted on.
    pub fit: usize,
    /// Held-out tail of the training part used to measure `calibration_hits`.
    pub calibration: usize,
    pub test: usize,
    /// Top-1 hits of each classifier on the calibration slice.
    pub calibration_hits: [usize; 3],
    pub weights: [f64; 3],
    /// True when every classifier scored zero on calibration and the fold
    /// fell back to equal weights.
    pub uniform_fallback: bool,
    /// Top-1 hits of each classifier on the test part.
    pub classifier_hits: [usize; 3],
    /// Ensemble hits for k = 1..=K on the test part.
    pub topk_hits: Vec<usize>,
    pub union_hits: usize,
    /// Rows: true class; columns: ensemble winner.
    pub confusion: Vec<Vec<usize>>,
    pub epochs: [usize; 3],
    pub final_sse: [f64; 3],
}

impl FoldResult {
    pub fn calibration_accuracy(&self) -> [f64; 3] {
        self.calibration_hits.map(|h| 100.0 * h as f64 / self.calibration as f64)
    }
}

fn network_inputs(kind: ClassifierKind, features: &FeatureSet) -> Vec<f64> {
    features.get(kind.feature_kind()).network_input()
}

fn network_seed(base: u64, fold: usize, kind: ClassifierKind) -> u64 {
    base.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ ((fold as u64) << 8 | kind.index() as u64)
}

fn run_fold(
    data: &[(usize, FeatureSet)],
    classes: usize,
    cfg: &CvConfig,
    fold: usize,
    rotation: Rotation,
    train_idx: Vec<usize>,
    test_idx: &[usize],
) -> Result<FoldResult, PipelineError> {
    let mut order = train_idx;
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(cfg.train.seed.wrapping_add(1 + fold as u64)));
    let calibration = ((order.len() as f64 * cfg.calibration_fraction).round() as usize).clamp(1, order.len() - 1);
    let (fit_idx, calib_idx) = order.split_at(order.len() - calibration);

    let trained: Vec<(Mlp, Vec<f64>)> = ClassifierKind::ALL
        .par_iter()
        .map(|&kind| -> Result<(Mlp, Vec<f64>), PipelineError> {
            let samples: Vec<(Vec<f64>, usize)> =
                fit_idx.iter().map(|&i| (network_inputs(kind, &data[i].1), data[i].0)).collect();
            let sizes = LayerSizes::new(kind.feature_kind().len(), cfg.hidden[kind.index()], classes)?;
            let tc = TrainConfig { seed: network_seed(cfg.train.seed, fold, kind), ..cfg.train };
            let init = Mlp::init(sizes, tc.seed);
            let outcome = train(&init, &samples, &tc)?;
            Ok((outcome.net, outcome.sse_history))
        })
        .collect::<Result<_, _>>()?;
    let nets: Vec<&Mlp> = trained.iter().map(|(n, _)| n).collect();
    let scores_of = |i: usize| -> Result<[ClassScores; 3], PipelineError> {
        let mut out: [ClassScores; 3] = Default::default();
        for kind in ClassifierKind::ALL {
            out[kind.index()] = nets[kind.index()].forward(&network_inputs(kind, &data[i].1))?;
        }
        Ok(out)
    };

    let mut calibration_hits = [0usize; 3];
    for &i in calib_idx {
        let scores = scores_of(i)?;
        for k in 0..3 {
            if scores[k].argmax() == data[i].0 {
                calibration_hits[k] += 1;
            }
        }
    }
    let accuracies = calibration_hits.map(|h| 100.0 * h as f64 / calibration as f64);
    let (weights, uniform_fallback) = match derive_weights(accuracies) {
        Ok(w) => (w, false),
        Err(_) => (EnsembleWeights::uniform(), true),
    };

    let kmax = MAX_TOP_K.min(classes);
    let mut classifier_hits = [0usize; 3];
    let mut topk_hits = vec![0usize; kmax];
    let mut union_hits = 0;
    let mut confusion = vec![vec![0usize; classes]; classes];
    for &i in test_idx {
        let label = data[i].0;
        let scores = scores_of(i)?;
        for k in 0..3 {
            if scores[k].argmax() == label {
                classifier_hits[k] += 1;
            }
        }
        let refs = [&scores[0], &scores[1], &scores[2]];
        let decision = combine(refs, &weights)?;
        if let Some(rank) = decision.rank_of(label) {
            for hits in topk_hits.iter_mut().skip(rank) {
                *hits += 1;
            }
        }
        if union_top1_hit(refs, label)? {
            union_hits += 1;
        }
        confusion[label][decision.winner()] += 1;
    }

    Ok(FoldResult {
        rotation,
        fit: fit_idx.len(),
        calibration,
        test: test_idx.len(),
        calibration_hits,
        weights: weights.weights(),
        uniform_fallback,
        classifier_hits,
        topk_hits,
        union_hits,
        confusion,
        epochs: std::array::from_fn(|k| trained[k].1.len()),
        final_sse: std::array::from_fn(|k| trained[k].1.last().copied().unwrap_or(f64::NAN)),
    })
}

/// 3-fold cross-validation over already extracted `(label, features)` pairs.
///
/// Each rotation shuffles its training part, fits the three networks on the
/// first 80 %, measures each network's top-1 accuracy on the last 20 % to
/// derive the fusion weights, then scores the test part.
pub fn run_cv(data: &[(usize, FeatureSet)], classes: &[String], cfg: &CvConfig) -> Result<EvalReport, PipelineError> {
    cfg.validate()?;
    let present: std::collections::BTreeSet<usize> = data.iter().map(|(l, _)| *l).collect();
    if classes.len() < 2 || present.len() < 2 {
        return Err(PipelineError::TooFewClasses(present.len().min(classes.len())));
    }
    if let Some(&bad) = present.iter().find(|&&l| l >= classes.len()) {
        return Err(PipelineError::Config(format!("label {bad} has no class name")));
    }
    let labels: Vec<usize> = data.iter().map(|(l, _)| *l).collect();
    let split = three_fold_split(&labels, cfg.train.seed)?;
    if split.parts.iter().any(|p| p.len() < 2) {
        return Err(PipelineError::TooFewSamples(data.len()));
    }

    let folds = ROTATIONS
        .iter()
        .enumerate()
        .map(|(f, &rotation)| {
            run_fold(data, classes.len(), cfg, f, rotation, split.train_indices(rotation), split.test_indices(rotation))
        })
        .collect::<Result<Vec<_>, _>>()?;

    Ok(EvalReport { classes: classes.to_vec(), samples: data.len(), rejected: 0, skipped: 0, config: cfg.clone(), folds })
}

/// Loads a dataset directory, extracts features and cross-validates.
pub fn run_cv_dir(root: impl AsRef<Path>, cfg: &CvConfig) -> Result<EvalReport, PipelineError> {
    let dataset = load_dataset(root)?;
    let extraction = extract_all(&dataset.samples);
    if extraction.features.is_empty() {
        return Err(PipelineError::EmptyDataset);
    }
    let data: Vec<(usize, FeatureSet)> = extraction
        .features
        .into_iter()
        .map(|(i, f)| (dataset.samples[i].label, f))
        .collect();
    let mut report = run_cv(&data, &dataset.classes, cfg)?;
    report.rejected = extraction.rejected.len();
    report.skipped = dataset.skipped.len();
    Ok(report)
}
