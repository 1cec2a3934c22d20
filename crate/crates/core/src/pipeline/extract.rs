use log::warn;
use rayon::prelude::*;

use super::Sample;
use crate::features::{extract_features, FeatureSet};
use crate::raster::{binarize, scale_to_canvas, smooth, tight_bbox, Canvas100, GrayImage, RasterError};

/// binarize → tight bbox → scale to 100×100 → smooth.
pub fn preprocess(img: &GrayImage) -> Result<Canvas100, RasterError> {
    let binary = binarize(img)?;
    let bbox = tight_bbox(&binary)?;
    Ok(smooth(&scale_to_canvas(&binary, bbox)?))
}

/// Preprocesses one image and extracts its three feature vectors.
pub fn extract_one(img: &GrayImage) -> Result<FeatureSet, RasterError> {
    Ok(extract_features(&preprocess(img)?))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rejection {
    pub id: String,
    pub error: RasterError,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Extraction {
    /// `(sample index, features)` for every accepted sample, in input order.
    pub features: Vec<(usize, FeatureSet)>,
    pub rejected: Vec<Rejection>,
}

/// Extracts features for every sample in parallel; blank glyphs are
/// rejected and logged rather than failing the run.
pub fn extract_all(samples: &[Sample]) -> Extraction {
    let results: Vec<Result<FeatureSet, RasterError>> = samples.par_iter().map(|s| extract_one(&s.image)).collect();
    let mut features = Vec::with_capacity(samples.len());
    let mut rejected = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(f) => features.push((i, f)),
            Err(error) => {
                warn!("rejecting {}: {error}", samples[i].id);
                rejected.push(Rejection { id: samples[i].id.clone(), error });
            }
        }
    }
    Extraction { features, rejected }
}
