//! Thinning to a one-pixel-wide skeleton and skeleton point classification.
//!
//! Thinning runs the two Zhang–Suen sub-iterations to a fixpoint and then
//! removes the redundant pixels that sit in 2×2 blocks. Sub-iteration
//! candidates are marked in parallel and then committed in row-major order,
//! each one re-checked against the partially updated raster; that commit
//! step keeps two-pixel-thick strokes and 2×2 blobs from vanishing, so the
//! 8-connected component count never changes.

use std::sync::OnceLock;

use thiserror::Error;

use crate::raster::{BinaryImage, Canvas100};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SkeletonError {
    #[error("point ({x}, {y}) lies outside the {width}×{height} raster")]
    OutOfBounds { x: usize, y: usize, width: usize, height: usize },
}

/// Neighbour offsets in the order P2..P9 of the classic formulation:
/// N, NE, E, SE, S, SW, W, NW (clockwise from north, rows grow downward).
const RING: [(isize, isize); 8] = [(0, -1), (1, -1), (1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1)];

/// One-pixel-wide binary raster produced by [`thin`] or [`prune_to_unit_width`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Skeleton(BinaryImage);

impl Skeleton {
    /// Wraps a raster without checking the unit-width property.
    pub fn from_image_unchecked(img: BinaryImage) -> Self {
        Self(img)
    }

    pub fn image(&self) -> &BinaryImage {
        &self.0
    }

    pub fn into_image(self) -> BinaryImage {
        self.0
    }

    pub fn width(&self) -> usize {
        self.0.width()
    }

    pub fn height(&self) -> usize {
        self.0.height()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointClass {
    Background,
    /// No foreground neighbour.
    Isolated,
    /// Exactly one foreground neighbour.
    OpenEnd,
    /// Exactly two foreground neighbours.
    Regular,
    /// More than two foreground neighbours.
    Junction,
}

/// Bit `i` set when ring position `i` (see [`RING`]) is foreground.
#[inline]
fn ring_bits(img: &BinaryImage, x: usize, y: usize) -> u8 {
    let (x, y) = (x as isize, y as isize);
    RING.iter()
        .enumerate()
        .fold(0u8, |acc, (i, &(dx, dy))| acc | (u8::from(img.get_or_bg(x + dx, y + dy)) << i))
}

/// Number of 0→1 transitions walking the ring once around.
#[inline]
fn transitions(bits: u8) -> u32 {
    (0..8).filter(|&i| bits & (1 << i) == 0 && bits & (1 << ((i + 1) % 8)) != 0).count() as u32
}

/// Number of 8-connected foreground runs on the ring, counting diagonal
/// contact between ring pixels. Deleting the centre keeps the local
/// foreground connected exactly when this is 1.
fn ring_components(bits: u8) -> u8 {
    static TABLE: OnceLock<[u8; 256]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = [0u8; 256];
        for (bits, slot) in table.iter_mut().enumerate() {
            *slot = ring_components_from_scratch(bits as u8);
        }
        table
    })[bits as usize]
}

fn ring_components_from_scratch(bits: u8) -> u8 {
    let on = |i: usize| bits & (1 << i) != 0;
    let adjacent = |a: usize, b: usize| {
        let (ax, ay) = RING[a];
        let (bx, by) = RING[b];
        (ax - bx).abs().max((ay - by).abs()) == 1
    };
    let mut seen = [false; 8];
    let mut count = 0;
    for start in (0..8).filter(|&i| on(i)) {
        if seen[start] {
            continue;
        }
        count += 1;
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(p) = stack.pop() {
            for q in 0..8 {
                if on(q) && !seen[q] && adjacent(p, q) {
                    seen[q] = true;
                    stack.push(q);
                }
            }
        }
    }
    count
}

fn zhang_suen_deletable(img: &BinaryImage, x: usize, y: usize, first: bool) -> bool {
    let bits = ring_bits(img, x, y);
    let n = bits.count_ones();
    if !(2..=6).contains(&n) || transitions(bits) != 1 {
        return false;
    }
    let p = |i: usize| bits & (1 << i) != 0;
    // P2=N(0) P4=E(2) P6=S(4) P8=W(6)
    if first {
        !(p(0) && p(2) && p(4)) && !(p(2) && p(4) && p(6))
    } else {
        !(p(0) && p(2) && p(6)) && !(p(0) && p(4) && p(6))
    }
}

/// One Zhang–Suen sub-iteration; returns the number of deleted pixels.
fn zhang_suen_subiteration(img: &mut BinaryImage, first: bool) -> usize {
    let candidates: Vec<(usize, usize)> = img
        .foreground()
        .filter(|&(x, y)| zhang_suen_deletable(img, x, y, first))
        .collect();
    let mut deleted = 0;
    for (x, y) in candidates {
        if zhang_suen_deletable(img, x, y, first) {
            img.set(x, y, false);
            deleted += 1;
        }
    }
    deleted
}

fn zhang_suen(img: &mut BinaryImage) -> bool {
    let mut changed = false;
    loop {
        let removed = zhang_suen_subiteration(img, true) + zhang_suen_subiteration(img, false);
        if removed == 0 {
            return changed;
        }
        changed = true;
    }
}

fn in_full_2x2(img: &BinaryImage, x: usize, y: usize) -> bool {
    let (x, y) = (x as isize, y as isize);
    [(-1, -1), (0, -1), (-1, 0), (0, 0)].iter().any(|&(ox, oy)| {
        let (bx, by) = (x + ox, y + oy);
        img.get_or_bg(bx, by)
            && img.get_or_bg(bx + 1, by)
            && img.get_or_bg(bx, by + 1)
            && img.get_or_bg(bx + 1, by + 1)
    })
}

fn prune_in_place(img: &mut BinaryImage) -> bool {
    let mut changed = false;
    loop {
        let mut removed = false;
        for y in 0..img.height() {
            for x in 0..img.width() {
                if !img.get(x, y) || !in_full_2x2(img, x, y) {
                    continue;
                }
                let bits = ring_bits(img, x, y);
                if bits.count_ones() != 1 && ring_components(bits) == 1 {
                    img.set(x, y, false);
                    removed = true;
                }
            }
        }
        if !removed {
            return changed;
        }
        changed = true;
    }
}

/// Removes redundant pixels of 2×2 foreground blocks, scanning row-major
/// until nothing changes. A pixel goes only if it is not an open end and
/// its foreground neighbours stay connected without it.
pub fn prune_to_unit_width(img: &BinaryImage) -> Skeleton {
    let mut out = img.clone();
    prune_in_place(&mut out);
    Skeleton(out)
}

/// Thins an arbitrary binary raster.
pub fn thin_image(img: &BinaryImage) -> Skeleton {
    let mut out = img.clone();
    loop {
        let thinned = zhang_suen(&mut out);
        let pruned = prune_in_place(&mut out);
        if !thinned && !pruned {
            break;
        }
    }
    Skeleton(out)
}

/// Thins a canvas to a one-pixel-wide skeleton.
pub fn thin(img: &Canvas100) -> Skeleton {
    thin_image(img.image())
}

/// Number of foreground 8-neighbours of `(x, y)`.
pub fn neighbor_count(img: &BinaryImage, x: usize, y: usize) -> u32 {
    ring_bits(img, x, y).count_ones()
}

pub fn classify_point(skel: &Skeleton, x: usize, y: usize) -> Result<PointClass, SkeletonError> {
    let img = &skel.0;
    if x >= img.width() || y >= img.height() {
        return Err(SkeletonError::OutOfBounds { x, y, width: img.width(), height: img.height() });
    }
    if !img.get(x, y) {
        return Ok(PointClass::Background);
    }
    Ok(match neighbor_count(img, x, y) {
        0 => PointClass::Isolated,
        1 => PointClass::OpenEnd,
        2 => PointClass::Regular,
        _ => PointClass::Junction,
    })
}

/// Whether any 2×2 window is entirely foreground.
pub fn has_full_2x2(img: &BinaryImage) -> bool {
    (1..img.height()).any(|y| {
        (1..img.width()).any(|x| img.get(x, y) && img.get(x - 1, y) && img.get(x, y - 1) && img.get(x - 1, y - 1))
    })
}
