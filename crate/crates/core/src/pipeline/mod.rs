//! Dataset ingestion, end-to-end glyph processing, 3-fold cross-validation
//! and reporting.

mod config;
mod cv;
mod dataset;
mod extract;
mod folds;
mod metrics;
mod report;

pub use config::CvConfig;
pub use cv::{run_cv, run_cv_dir, FoldResult};
pub use dataset::{load_dataset, load_gray, Dataset, Sample, SkippedFile};
pub use extract::{extract_all, extract_one, preprocess, Extraction, Rejection};
pub use folds::{three_fold_split, FoldSplit, Rotation, ROTATIONS};
pub use metrics::{confusion_matrix, topk_accuracy};
pub use report::{EvalReport, ReportSummary, REPORT_HEADER};

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use thiserror::Error;

use crate::ensemble::EnsembleError;
use crate::features::{FeatureError, FeatureKind};
use crate::mlp::MlpError;
use crate::raster::RasterError;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("i/o error on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("dataset has no usable samples")]
    EmptyDataset,
    #[error("need at least two classes, found {0}")]
    TooFewClasses(usize),
    #[error("need at least 3 samples, found {0}")]
    TooFewSamples(usize),
    #[error("cannot read image {path}: {reason}")]
    UnreadableImage { path: PathBuf, reason: String },
    #[error(transparent)]
    Raster(#[from] RasterError),
    #[error(transparent)]
    Feature(#[from] FeatureError),
    #[error("config: {0}")]
    Config(String),
    #[error("report: {0}")]
    Report(String),
    #[error("model {path}: {source}")]
    Model { path: PathBuf, source: MlpError },
    #[error("training failed: {0}")]
    Training(#[from] MlpError),
    #[error(transparent)]
    Ensemble(#[from] EnsembleError),
    #[error("sequences differ in length: {0} vs {1}")]
    LengthMismatch(usize, usize),
}

impl PipelineError {
    /// CLI exit code: 1 usage/config, 2 data, 3 training.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Config(_) => 1,
            PipelineError::Training(_) => 3,
            _ => 2,
        }
    }
}

/// The three classifiers, in fusion order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassifierKind {
    ChainCode,
    Intersection,
    Shadow,
}

impl ClassifierKind {
    pub const ALL: [ClassifierKind; 3] = [ClassifierKind::ChainCode, ClassifierKind::Intersection, ClassifierKind::Shadow];

    pub fn feature_kind(self) -> FeatureKind {
        match self {
            ClassifierKind::ChainCode => FeatureKind::ChainCode200,
            ClassifierKind::Intersection => FeatureKind::Intersection32,
            ClassifierKind::Shadow => FeatureKind::Shadow16,
        }
    }

    /// Hidden layer width used by default (70 / 20 / 30).
    pub fn default_hidden(self) -> usize {
        match self {
            ClassifierKind::ChainCode => 70,
            ClassifierKind::Intersection => 20,
            ClassifierKind::Shadow => 30,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ClassifierKind::ChainCode => "chaincode",
            ClassifierKind::Intersection => "intersection",
            ClassifierKind::Shadow => "shadow",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_input_len(len: usize) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.feature_kind().len() == len)
    }
}

impl fmt::Display for ClassifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClassifierKind {
    type Err = PipelineError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| PipelineError::Config(format!("unknown classifier {s:?}")))
    }
}
