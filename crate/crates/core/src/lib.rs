//! Offline handwritten character recognition: preprocessing, three feature
//! extractors, three sigmoid MLPs and accuracy-weighted vote fusion, with a
//! 3-fold cross-validation harness.

pub mod raster;
pub mod skeleton;
pub mod features;
pub mod mlp;
pub mod ensemble;
pub mod pipeline;
