//! Shadow features.
//!
//! The canvas is cut into eight triangles by its diagonals and its two
//! centre lines. Octants are numbered clockwise starting with the upper
//! half of the top-left quadrant:
//!
//! ```text
//!   +-------+-------+
//!   |\  0   |   1  /|
//!   | 7 \   |   / 2 |
//!   +-------+-------+
//!   | 6 /   |   \ 3 |
//!   |/  5   |   4  \|
//!   +-------+-------+
//! ```
//!
//! Each octant is bounded by half a canvas side and half a centre line. Its
//! foreground is projected onto both, and each shadow is the number of
//! covered positions divided by the number of positions the octant can
//! cover at all. Pixels on a diagonal belong to the lower-numbered octant.

use std::sync::OnceLock;

use super::{FeatureKind, FeatureVector};
use crate::raster::{Canvas100, CANVAS_SIZE};

pub const OCTANTS: usize = 8;

/// Octant of pixel `(x, y)` on the 100×100 canvas.
pub fn octant_of(x: usize, y: usize) -> usize {
    // Doubled pixel-centre offsets from the canvas centre; always odd, so
    // never zero, and |u| == |v| exactly on a diagonal.
    let u = 2 * x as i64 + 1 - CANVAS_SIZE as i64;
    let v = 2 * y as i64 + 1 - CANVAS_SIZE as i64;
    let vertical_dominant = v.abs() >= u.abs();
    let horizontal_dominant = u.abs() >= v.abs();
    match (u < 0, v < 0) {
        (true, true) if vertical_dominant => 0,
        (true, true) => 7,
        (false, true) if vertical_dominant => 1,
        (false, true) => 2,
        (false, false) if horizontal_dominant => 3,
        (false, false) => 4,
        (true, false) if vertical_dominant => 5,
        (true, false) => 6,
    }
}

/// Whether the octant's canvas side runs horizontally (top or bottom edge).
fn box_side_is_horizontal(octant: usize) -> bool {
    matches!(octant, 0 | 1 | 4 | 5)
}

/// Covered positions per octant: `[box side, centre line]`.
fn coverage<F: Fn(usize, usize) -> bool>(is_fg: F) -> [[Vec<bool>; 2]; OCTANTS] {
    let mut cov: [[Vec<bool>; 2]; OCTANTS] =
        std::array::from_fn(|_| [vec![false; CANVAS_SIZE], vec![false; CANVAS_SIZE]]);
    for y in 0..CANVAS_SIZE {
        for x in 0..CANVAS_SIZE {
            if !is_fg(x, y) {
                continue;
            }
            let o = octant_of(x, y);
            let (box_pos, centre_pos) = if box_side_is_horizontal(o) { (x, y) } else { (y, x) };
            cov[o][0][box_pos] = true;
            cov[o][1][centre_pos] = true;
        }
    }
    cov
}

/// Number of distinct positions each octant can cover on its two sides.
pub fn shadow_segment_lengths() -> &'static [[usize; 2]; OCTANTS] {
    static LENGTHS: OnceLock<[[usize; 2]; OCTANTS]> = OnceLock::new();
    LENGTHS.get_or_init(|| {
        let cov = coverage(|_, _| true);
        std::array::from_fn(|o| [0, 1].map(|s| cov[o][s].iter().filter(|&&c| c).count()))
    })
}

pub fn shadow_features(img: &Canvas100) -> FeatureVector {
    let cov = coverage(|x, y| img.get(x, y));
    let lengths = shadow_segment_lengths();
    let values = (0..OCTANTS)
        .flat_map(|o| {
            let cov = &cov[o];
            (0..2).map(move |s| cov[s].iter().filter(|&&c| c).count() as f64 / lengths[o][s] as f64)
        })
        .collect();
    FeatureVector::new(FeatureKind::Shadow16, values).expect("16 shadow values")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn octant_corners_and_ties() {
        assert_eq!(octant_of(10, 0), 0);
        assert_eq!(octant_of(0, 10), 7);
        assert_eq!(octant_of(0, 0), 0); // diagonal tie 0/7
        assert_eq!(octant_of(99, 0), 1); // diagonal tie 1/2
        assert_eq!(octant_of(99, 10), 2);
        assert_eq!(octant_of(99, 60), 3);
        assert_eq!(octant_of(99, 99), 3); // diagonal tie 3/4
        assert_eq!(octant_of(60, 99), 4);
        assert_eq!(octant_of(0, 99), 5); // diagonal tie 5/6
        assert_eq!(octant_of(0, 60), 6);
    }

    #[test]
    fn octant_sizes_follow_tie_rule() {
        let mut counts = [0usize; OCTANTS];
        for y in 0..CANVAS_SIZE {
            for x in 0..CANVAS_SIZE {
                counts[octant_of(x, y)] += 1;
            }
        }
        // 50·51/2 with the diagonal, 49·50/2 without.
        assert_eq!(counts, [1275, 1275, 1225, 1275, 1225, 1275, 1225, 1225]);
    }

    #[test]
    fn segment_lengths() {
        let l = shadow_segment_lengths();
        assert_eq!(l[0], [50, 50]);
        assert_eq!(l[7], [49, 49]);
        assert_eq!(l[2], [49, 49]);
    }

    #[test]
    fn empty_and_full() {
        assert_eq!(shadow_features(&Canvas100::empty()).values(), &[0.0; 16]);
        assert_eq!(shadow_features(&Canvas100::full()).values(), &[1.0; 16]);
    }

    #[test]
    fn single_pixel_hits_two_entries() {
        let mut c = Canvas100::empty();
        c.set(30, 10, true); // octant 0
        let v = shadow_features(&c);
        let nonzero: Vec<usize> = (0..16).filter(|&i| v.values()[i] != 0.0).collect();
        assert_eq!(nonzero, vec![0, 1]);
        assert_eq!(v.values()[0], 1.0 / 50.0);
        assert_eq!(v.values()[1], 1.0 / 50.0);
    }
}
