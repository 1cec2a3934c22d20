use std::path::Path;

use super::{ClassifierKind, PipelineError};
use crate::mlp::TrainConfig;

/// Settings of a cross-validation run, read from a `key=value` file.
///
/// ```text
/// # hidden layer widths
/// hidden.chaincode=70
/// hidden.intersection=20
/// hidden.shadow=30
/// lr=0.8
/// momentum=0.7
/// epochs=1000
/// sse_tolerance=0.0001
/// seed=1
/// calibration_fraction=0.2
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct CvConfig {
    /// Hidden widths indexed by [`ClassifierKind::index`].
    pub hidden: [usize; 3],
    pub train: TrainConfig,
    /// Tail share of each shuffled training part held out to measure the
    /// per-classifier accuracies that set the fusion weights.
    pub calibration_fraction: f64,
}

impl Default for CvConfig {
    fn default() -> Self {
        Self {
            hidden: ClassifierKind::ALL.map(ClassifierKind::default_hidden),
            train: TrainConfig::default(),
            calibration_fraction: 0.2,
        }
    }
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, PipelineError> {
    value
        .parse()
        .map_err(|_| PipelineError::Config(format!("bad value {value:?} for {key}")))
}

impl CvConfig {
    pub fn parse(text: &str) -> Result<Self, PipelineError> {
        let mut cfg = CvConfig::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| PipelineError::Config(format!("line {}: expected key=value", n + 1)))?;
            match key {
                "lr" | "learning_rate" => cfg.train.learning_rate = parse_value(key, value)?,
                "momentum" => cfg.train.momentum = parse_value(key, value)?,
                "epochs" | "max_epochs" => cfg.train.max_epochs = parse_value(key, value)?,
                "sse_tolerance" => cfg.train.sse_tolerance = parse_value(key, value)?,
                "seed" => cfg.train.seed = parse_value(key, value)?,
                "calibration_fraction" => cfg.calibration_fraction = parse_value(key, value)?,
                _ => match key.strip_prefix("hidden.") {
                    Some(name) => {
                        let kind: ClassifierKind = name.parse()?;
                        cfg.hidden[kind.index()] = parse_value(key, value)?;
                    }
                    None => return Err(PipelineError::Config(format!("line {}: unknown key {key:?}", n + 1))),
                },
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self, PipelineError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| PipelineError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        self.train.validate().map_err(|e| PipelineError::Config(e.to_string()))?;
        if self.hidden.contains(&0) {
            return Err(PipelineError::Config("hidden widths must be positive".into()));
        }
        if !(self.calibration_fraction > 0.0 && self.calibration_fraction < 1.0) {
            return Err(PipelineError::Config(format!(
                "calibration_fraction {} must be in (0, 1)",
                self.calibration_fraction
            )));
        }
        Ok(())
    }

    /// `key=value` rendering, the inverse of [`CvConfig::parse`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for kind in ClassifierKind::ALL {
            out.push_str(&format!("hidden.{kind}={}\n", self.hidden[kind.index()]));
        }
        out.push_str(&format!(
            "lr={}\nmomentum={}\nepochs={}\nsse_tolerance={}\nseed={}\ncalibration_fraction={}\n",
            self.train.learning_rate,
            self.train.momentum,
            self.train.max_epochs,
            self.train.sse_tolerance,
            self.train.seed,
            self.calibration_fraction
        ));
        out
    }
}
