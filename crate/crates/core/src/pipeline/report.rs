use std::fmt::Write as _;

use super::cv::FoldResult;
use super::{ClassifierKind, CvConfig, PipelineError};
use crate::ensemble::{derive_weights, EnsembleWeights};

/// First line of every report file.
pub const REPORT_HEADER: &str = "devocr-report 1";

/// Outcome of a cross-validation run.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub classes: Vec<String>,
    /// Samples that made it through feature extraction.
    pub samples: usize,
    /// Blank glyphs dropped during extraction.
    pub rejected: usize,
    /// Files that could not be decoded.
    pub skipped: usize,
    pub config: CvConfig,
    pub folds: Vec<FoldResult>,
}

fn percent(hits: usize, total: usize) -> f64 {
    if total == 0 {
        0.0
    } else {
        100.0 * hits as f64 / total as f64
    }
}

fn join<T: std::fmt::Display>(values: impl IntoIterator<Item = T>) -> String {
    values.into_iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

fn fixed(values: &[f64]) -> String {
    join(values.iter().map(|v| format!("{v:.6}")))
}

impl EvalReport {
    fn total_test(&self) -> usize {
        self.folds.iter().map(|f| f.test).sum()
    }

    /// Calibration top-1 accuracy of each classifier pooled over folds.
    pub fn calibration_accuracy(&self) -> [f64; 3] {
        let total: usize = self.folds.iter().map(|f| f.calibration).sum();
        std::array::from_fn(|k| percent(self.folds.iter().map(|f| f.calibration_hits[k]).sum(), total))
    }

    /// Weights derived from the pooled calibration accuracies; equal weights
    /// when every classifier scored zero.
    pub fn weights(&self) -> [f64; 3] {
        derive_weights(self.calibration_accuracy()).unwrap_or_else(|_| EnsembleWeights::uniform()).weights()
    }

    /// Test top-1 accuracy of each classifier on its own.
    pub fn classifier_accuracy(&self) -> [f64; 3] {
        std::array::from_fn(|k| percent(self.folds.iter().map(|f| f.classifier_hits[k]).sum(), self.total_test()))
    }

    /// Ensemble accuracy for k = 1..=K.
    pub fn topk_accuracy(&self) -> Vec<f64> {
        let kmax = self.folds.iter().map(|f| f.topk_hits.len()).min().unwrap_or(0);
        (0..kmax)
            .map(|k| percent(self.folds.iter().map(|f| f.topk_hits[k]).sum(), self.total_test()))
            .collect()
    }

    pub fn ensemble_accuracy(&self) -> f64 {
        self.topk_accuracy().first().copied().unwrap_or(0.0)
    }

    pub fn union_accuracy(&self) -> f64 {
        percent(self.folds.iter().map(|f| f.union_hits).sum(), self.total_test())
    }

    pub fn confusion(&self) -> Vec<Vec<usize>> {
        let n = self.classes.len();
        let mut m = vec![vec![0usize; n]; n];
        for f in &self.folds {
            for (row, frow) in m.iter_mut().zip(&f.confusion) {
                for (c, v) in row.iter_mut().zip(frow) {
                    *c += v;
                }
            }
        }
        m
    }

    /// Plain-text rendering. Floats use fixed precision so identical runs
    /// give identical bytes.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let names = join(ClassifierKind::ALL);
        writeln!(out, "{REPORT_HEADER}").unwrap();
        writeln!(out, "classes={}", self.classes.len()).unwrap();
        writeln!(out, "class_names={}", self.classes.join(",")).unwrap();
        writeln!(out, "samples={}", self.samples).unwrap();
        writeln!(out, "rejected={}", self.rejected).unwrap();
        writeln!(out, "skipped={}", self.skipped).unwrap();
        writeln!(out, "classifiers={names}").unwrap();
        for line in self.config.to_text().lines() {
            writeln!(out, "config.{line}").unwrap();
        }
        for (i, f) in self.folds.iter().enumerate() {
            let p = format!("fold{}", i + 1);
            writeln!(out, "{p}.train_parts={}", join(f.rotation.train.map(|t| t + 1))).unwrap();
            writeln!(out, "{p}.test_part={}", f.rotation.test + 1).unwrap();
            writeln!(out, "{p}.fit={}", f.fit).unwrap();
            writeln!(out, "{p}.calibration={}", f.calibration).unwrap();
            writeln!(out, "{p}.test={}", f.test).unwrap();
            writeln!(out, "{p}.epochs={}", join(f.epochs)).unwrap();
            writeln!(out, "{p}.final_sse={}", fixed(&f.final_sse)).unwrap();
            writeln!(out, "{p}.calibration_accuracy={}", fixed(&f.calibration_accuracy())).unwrap();
            writeln!(out, "{p}.weights={}", fixed(&f.weights)).unwrap();
            writeln!(out, "{p}.uniform_fallback={}", f.uniform_fallback).unwrap();
            let acc = f.classifier_hits.map(|h| percent(h, f.test));
            writeln!(out, "{p}.classifier_top1={}", fixed(&acc)).unwrap();
            let topk: Vec<f64> = f.topk_hits.iter().map(|&h| percent(h, f.test)).collect();
            writeln!(out, "{p}.ensemble_topk={}", fixed(&topk)).unwrap();
            writeln!(out, "{p}.union_top1={:.6}", percent(f.union_hits, f.test)).unwrap();
        }
        writeln!(out, "aggregate.calibration_accuracy={}", fixed(&self.calibration_accuracy())).unwrap();
        writeln!(out, "aggregate.weights={}", fixed(&self.weights())).unwrap();
        writeln!(out, "aggregate.classifier_top1={}", fixed(&self.classifier_accuracy())).unwrap();
        writeln!(out, "aggregate.ensemble_topk={}", fixed(&self.topk_accuracy())).unwrap();
        writeln!(out, "aggregate.union_top1={:.6}", self.union_accuracy()).unwrap();
        writeln!(out, "confusion").unwrap();
        writeln!(out, "true\\predicted,{}", self.classes.join(",")).unwrap();
        for (name, row) in self.classes.iter().zip(self.confusion()) {
            writeln!(out, "{name},{}", join(row)).unwrap();
        }
        out
    }
}

/// The parts of a report needed to classify new glyphs.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportSummary {
    pub classes: Vec<String>,
    /// Fusion weights in [`ClassifierKind::ALL`] order.
    pub weights: [f64; 3],
}

impl ReportSummary {
    pub fn parse(text: &str) -> Result<Self, PipelineError> {
        let bad = |m: &str| PipelineError::Report(m.to_string());
        let mut lines = text.lines();
        if lines.next().map(str::trim) != Some(REPORT_HEADER) {
            return Err(bad("missing report header"));
        }
        let mut classes = None;
        let mut weights = None;
        for line in lines {
            if line == "confusion" {
                break;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(bad(&format!("malformed line {line:?}")));
            };
            match key {
                "class_names" => classes = Some(value.split(',').map(str::to_string).collect::<Vec<_>>()),
                "aggregate.weights" => {
                    let w: Vec<f64> = value
                        .split(',')
                        .map(|v| v.parse::<f64>())
                        .collect::<Result<_, _>>()
                        .map_err(|_| bad("unparsable weights"))?;
                    let w: [f64; 3] = w.try_into().map_err(|_| bad("expected 3 weights"))?;
                    if w.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
                        return Err(bad("weights must be finite and non-negative"));
                    }
                    weights = Some(w);
                }
                _ => {}
            }
        }
        let classes = classes.filter(|c| c.len() >= 2).ok_or_else(|| bad("missing class_names"))?;
        let weights = weights.ok_or_else(|| bad("missing aggregate.weights"))?;
        Ok(Self { classes, weights })
    }
}
