//! The three feature sets: 16 shadow lengths, 200 zoned chain-code
//! frequencies and 32 zoned open-end/junction counts.

mod chain;
mod intersection;
mod shadow;

pub use chain::{
    chain_trace, chaincode_counts, chaincode_histogram_features, extract_contour, extract_contour_image, ChainTrace, ContourImage, Direction,
    CHAIN_BLOCKS, CHAIN_BLOCK_SIZE,
};
pub use intersection::{intersection_features, SEGMENTS, SEGMENT_SIZE};
pub use shadow::{octant_of, shadow_features, shadow_segment_lengths, OCTANTS};

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::raster::Canvas100;
use crate::skeleton::thin;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FeatureError {
    #[error("{kind} vector needs {expected} values, got {actual}")]
    Length { kind: FeatureKind, expected: usize, actual: usize },
    #[error("unknown feature kind tag {0:?}")]
    UnknownKind(String),
    #[error("malformed feature line: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FeatureKind {
    Shadow16,
    ChainCode200,
    Intersection32,
}

impl FeatureKind {
    pub const ALL: [FeatureKind; 3] = [FeatureKind::Shadow16, FeatureKind::ChainCode200, FeatureKind::Intersection32];

    pub const fn len(self) -> usize {
        match self {
            FeatureKind::Shadow16 => 16,
            FeatureKind::ChainCode200 => 200,
            FeatureKind::Intersection32 => 32,
        }
    }

    pub const fn tag(self) -> &'static str {
        match self {
            FeatureKind::Shadow16 => "shadow16",
            FeatureKind::ChainCode200 => "chaincode200",
            FeatureKind::Intersection32 => "intersection32",
        }
    }
}

impl fmt::Display for FeatureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for FeatureKind {
    type Err = FeatureError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FeatureKind::ALL
            .into_iter()
            .find(|k| k.tag() == s)
            .ok_or_else(|| FeatureError::UnknownKind(s.to_string()))
    }
}

/// Fixed-length feature vector tagged with the extractor that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    kind: FeatureKind,
    values: Vec<f64>,
}

impl FeatureVector {
    pub fn new(kind: FeatureKind, values: Vec<f64>) -> Result<Self, FeatureError> {
        if values.len() != kind.len() {
            return Err(FeatureError::Length { kind, expected: kind.len(), actual: values.len() });
        }
        Ok(Self { kind, values })
    }

    pub fn kind(&self) -> FeatureKind {
        self.kind
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Values as fed to a classifier. Junction/open-end counts are divided
    /// by 10 to keep them near the unit range; the other kinds are already
    /// normalized.
    pub fn network_input(&self) -> Vec<f64> {
        match self.kind {
            FeatureKind::Intersection32 => self.values.iter().map(|v| v / 10.0).collect(),
            _ => self.values.clone(),
        }
    }

    /// One line of the feature dump: `label,kind,v0,v1,...`.
    pub fn dump_line(&self, label: usize) -> String {
        let mut line = format!("{label},{}", self.kind);
        for v in &self.values {
            line.push(',');
            line.push_str(&v.to_string());
        }
        line
    }

    /// Parses one feature-dump line back into `(label, vector)`.
    pub fn parse_dump_line(line: &str) -> Result<(usize, FeatureVector), FeatureError> {
        let mut fields = line.trim().split(',');
        let label = fields
            .next()
            .and_then(|s| s.trim().parse::<usize>().ok())
            .ok_or_else(|| FeatureError::Malformed(line.to_string()))?;
        let kind: FeatureKind = fields
            .next()
            .ok_or_else(|| FeatureError::Malformed(line.to_string()))?
            .trim()
            .parse()?;
        let values = fields
            .map(|s| s.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| FeatureError::Malformed(line.to_string()))?;
        Ok((label, FeatureVector::new(kind, values)?))
    }
}

/// All three vectors of one glyph.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSet {
    pub shadow: FeatureVector,
    pub chaincode: FeatureVector,
    pub intersection: FeatureVector,
}

impl FeatureSet {
    pub fn get(&self, kind: FeatureKind) -> &FeatureVector {
        match kind {
            FeatureKind::Shadow16 => &self.shadow,
            FeatureKind::ChainCode200 => &self.chaincode,
            FeatureKind::Intersection32 => &self.intersection,
        }
    }
}

/// Runs the three extractors on a smoothed canvas.
pub fn extract_features(canvas: &Canvas100) -> FeatureSet {
    let shadow = shadow_features(canvas);
    let chaincode = chaincode_histogram_features(&chain_trace(&extract_contour(canvas)));
    let intersection = intersection_features(&thin(canvas));
    FeatureSet { shadow, chaincode, intersection }
}
