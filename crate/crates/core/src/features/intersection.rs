//! Open-end and junction counts over a 4×4 grid of 25×25 segments.

use super::{FeatureKind, FeatureVector};
use crate::raster::CANVAS_SIZE;
use crate::skeleton::{neighbor_count, Skeleton};

/// Segments per canvas side.
pub const SEGMENTS: usize = 4;
pub const SEGMENT_SIZE: usize = CANVAS_SIZE / SEGMENTS;

/// First 16 entries: open ends per segment; last 16: junctions per segment.
pub fn intersection_features(skel: &Skeleton) -> FeatureVector {
    let img = skel.image();
    let mut values = vec![0.0; 2 * SEGMENTS * SEGMENTS];
    for (x, y) in img.foreground() {
        let segment = (y / SEGMENT_SIZE).min(SEGMENTS - 1) * SEGMENTS + (x / SEGMENT_SIZE).min(SEGMENTS - 1);
        match neighbor_count(img, x, y) {
            1 => values[segment] += 1.0,
            n if n > 2 => values[SEGMENTS * SEGMENTS + segment] += 1.0,
            _ => {}
        }
    }
    FeatureVector::new(FeatureKind::Intersection32, values).expect("32 intersection values")
}
