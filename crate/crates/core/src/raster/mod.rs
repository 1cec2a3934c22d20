//! Raster preprocessing: grayscale ingestion, iterative-mean binarization,
//! tight bounding box, scaling to the 100×100 canvas and morphological
//! smoothing.

mod morph;
mod pgm;

pub use morph::{close, dilate, erode};
pub use pgm::{decode_pgm, read_pgm, write_pgm, PgmError};

use thiserror::Error;

/// Side length of the canonical canvas.
pub const CANVAS_SIZE: usize = 100;

/// Initial threshold of the binarization loop (mid value of 0..=255).
pub const INITIAL_THRESHOLD: f64 = 128.0;

/// Relative threshold change below which binarization stops.
pub const THRESHOLD_STOP_RATIO: f64 = 0.02;

/// Hard cap on binarization iterations.
pub const MAX_THRESHOLD_ITERATIONS: usize = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RasterError {
    #[error("image dimensions must be at least 1×1, got {width}×{height}")]
    EmptyImage { width: usize, height: usize },
    #[error("pixel buffer holds {actual} values, expected {expected}")]
    BufferSize { expected: usize, actual: usize },
    #[error("no pixel falls below the converged threshold {threshold:.3}")]
    AllBackground { threshold: f64 },
    #[error("binary image has no foreground pixel")]
    NoForeground,
    #[error("rectangle {rect:?} does not fit inside a {width}×{height} image")]
    RectOutOfBounds { rect: Rect, width: usize, height: usize },
    #[error("canvas must be {CANVAS_SIZE}×{CANVAS_SIZE}, got {width}×{height}")]
    NotCanvas { width: usize, height: usize },
}

fn check_dims(width: usize, height: usize, len: usize) -> Result<(), RasterError> {
    if width == 0 || height == 0 {
        return Err(RasterError::EmptyImage { width, height });
    }
    if width * height != len {
        return Err(RasterError::BufferSize { expected: width * height, actual: len });
    }
    Ok(())
}

/// 8-bit grayscale raster, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self, RasterError> {
        check_dims(width, height, pixels.len())?;
        Ok(Self { width, height, pixels })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self, RasterError> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }
}

/// Binary raster, row-major; `true` is foreground ink.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryImage {
    width: usize,
    height: usize,
    mask: Vec<bool>,
}

impl BinaryImage {
    pub fn new(width: usize, height: usize, mask: Vec<bool>) -> Result<Self, RasterError> {
        check_dims(width, height, mask.len())?;
        Ok(Self { width, height, mask })
    }

    pub fn empty(width: usize, height: usize) -> Result<Self, RasterError> {
        Self::new(width, height, vec![false; width * height])
    }

    /// Builds an image from text rows where `#` (or `1`) marks foreground.
    pub fn from_rows(rows: &[&str]) -> Result<Self, RasterError> {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.chars().count());
        let mask: Vec<bool> = rows
            .iter()
            .flat_map(|r| r.chars().map(|c| c == '#' || c == '1'))
            .collect();
        Self::new(width, height, mask)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.mask[y * self.width + x]
    }

    /// Foreground test that treats anything outside the raster as background.
    #[inline]
    pub fn get_or_bg(&self, x: isize, y: isize) -> bool {
        x >= 0
            && y >= 0
            && (x as usize) < self.width
            && (y as usize) < self.height
            && self.mask[y as usize * self.width + x as usize]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: bool) {
        self.mask[y * self.width + x] = value;
    }

    pub fn count_foreground(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    /// Iterates `(x, y)` of every foreground pixel in row-major order.
    pub fn foreground(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let w = self.width;
        self.mask
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(move |(i, _)| (i % w, i / w))
    }

    /// Whether every foreground pixel of `self` is also foreground in `other`.
    pub fn is_subset_of(&self, other: &BinaryImage) -> bool {
        self.width == other.width
            && self.height == other.height
            && self.mask.iter().zip(&other.mask).all(|(&a, &b)| !a || b)
    }
}

/// Axis-aligned rectangle in pixel coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rect {
    pub left: usize,
    pub top: usize,
    pub width: usize,
    pub height: usize,
}

impl Rect {
    pub fn right(&self) -> usize {
        self.left + self.width
    }

    pub fn bottom(&self) -> usize {
        self.top + self.height
    }

    fn fits(&self, width: usize, height: usize) -> bool {
        self.width >= 1 && self.height >= 1 && self.right() <= width && self.bottom() <= height
    }
}

/// A binary image fixed at 100×100.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Canvas100(BinaryImage);

impl Canvas100 {
    pub fn new(img: BinaryImage) -> Result<Self, RasterError> {
        if img.width != CANVAS_SIZE || img.height != CANVAS_SIZE {
            return Err(RasterError::NotCanvas { width: img.width, height: img.height });
        }
        Ok(Self(img))
    }

    pub fn empty() -> Self {
        Self(BinaryImage {
            width: CANVAS_SIZE,
            height: CANVAS_SIZE,
            mask: vec![false; CANVAS_SIZE * CANVAS_SIZE],
        })
    }

    pub fn full() -> Self {
        Self(BinaryImage {
            width: CANVAS_SIZE,
            height: CANVAS_SIZE,
            mask: vec![true; CANVAS_SIZE * CANVAS_SIZE],
        })
    }

    pub fn image(&self) -> &BinaryImage {
        &self.0
    }

    pub fn into_image(self) -> BinaryImage {
        self.0
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.0.get(x, y)
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: bool) {
        self.0.set(x, y, value);
    }
}

/// Result of the iterative threshold search.
#[derive(Debug, Clone, PartialEq)]
pub struct Binarization {
    pub image: BinaryImage,
    /// Every threshold visited, starting with 128.
    pub thresholds: Vec<f64>,
    /// Set when one class went empty and the threshold was frozen.
    pub degenerate: bool,
}

impl Binarization {
    pub fn threshold(&self) -> f64 {
        *self.thresholds.last().expect("threshold history is never empty")
    }
}

/// Iterative mean-of-means threshold search without the all-background
/// rejection. Pixels strictly below the threshold are foreground.
pub fn binarize_detailed(img: &GrayImage) -> Binarization {
    let mut threshold = INITIAL_THRESHOLD;
    let mut thresholds = vec![threshold];
    let mut degenerate = false;

    for _ in 0..MAX_THRESHOLD_ITERATIONS {
        let (mut fg_sum, mut fg_n, mut bg_sum, mut bg_n) = (0u64, 0u64, 0u64, 0u64);
        for &p in &img.pixels {
            if f64::from(p) < threshold {
                fg_sum += u64::from(p);
                fg_n += 1;
            } else {
                bg_sum += u64::from(p);
                bg_n += 1;
            }
        }
        if fg_n == 0 || bg_n == 0 {
            degenerate = true;
            break;
        }
        let fg_mean = fg_sum as f64 / fg_n as f64;
        let bg_mean = bg_sum as f64 / bg_n as f64;
        let next = (fg_mean + bg_mean) / 2.0;
        let change = (next - threshold).abs() / threshold;
        threshold = next;
        thresholds.push(threshold);
        if change < THRESHOLD_STOP_RATIO {
            break;
        }
    }

    let mask = img.pixels.iter().map(|&p| f64::from(p) < threshold).collect();
    Binarization {
        image: BinaryImage { width: img.width, height: img.height, mask },
        thresholds,
        degenerate,
    }
}

/// Separates ink from background with the iterative mean threshold.
///
/// Fails with [`RasterError::AllBackground`] when nothing lies below the
/// final threshold.
pub fn binarize(img: &GrayImage) -> Result<BinaryImage, RasterError> {
    let result = binarize_detailed(img);
    if result.image.count_foreground() == 0 {
        return Err(RasterError::AllBackground { threshold: result.threshold() });
    }
    Ok(result.image)
}

/// Smallest rectangle enclosing every foreground pixel.
pub fn tight_bbox(img: &BinaryImage) -> Result<Rect, RasterError> {
    let (mut min_x, mut min_y) = (usize::MAX, usize::MAX);
    let (mut max_x, mut max_y) = (0, 0);
    let mut any = false;
    for (x, y) in img.foreground() {
        any = true;
        min_x = min_x.min(x);
        max_x = max_x.max(x);
        min_y = min_y.min(y);
        max_y = max_y.max(y);
    }
    if !any {
        return Err(RasterError::NoForeground);
    }
    Ok(Rect { left: min_x, top: min_y, width: max_x - min_x + 1, height: max_y - min_y + 1 })
}

/// Source offset sampled for destination index `dst` when stretching `len`
/// source pixels over the canvas (pixel-centre nearest neighbour).
#[inline]
fn nearest_source(dst: usize, len: usize) -> usize {
    (((2 * dst + 1) * len) / (2 * CANVAS_SIZE)).min(len - 1)
}

/// Stretches the `bbox` region of `img` onto a 100×100 canvas with
/// independent horizontal and vertical nearest-neighbour scaling.
pub fn scale_to_canvas(img: &BinaryImage, bbox: Rect) -> Result<Canvas100, RasterError> {
    if !bbox.fits(img.width, img.height) {
        return Err(RasterError::RectOutOfBounds { rect: bbox, width: img.width, height: img.height });
    }
    let cols: Vec<usize> = (0..CANVAS_SIZE).map(|x| bbox.left + nearest_source(x, bbox.width)).collect();
    let mut mask = Vec::with_capacity(CANVAS_SIZE * CANVAS_SIZE);
    for y in 0..CANVAS_SIZE {
        let sy = bbox.top + nearest_source(y, bbox.height);
        mask.extend(cols.iter().map(|&sx| img.get(sx, sy)));
    }
    Ok(Canvas100(BinaryImage { width: CANVAS_SIZE, height: CANVAS_SIZE, mask }))
}

/// One 3×3 dilation followed by a 3×3 closing.
pub fn smooth(img: &Canvas100) -> Canvas100 {
    Canvas100(close(&dilate(img.image())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gray(w: usize, h: usize, px: &[u8]) -> GrayImage {
        GrayImage::new(w, h, px.to_vec()).unwrap()
    }

    #[test]
    fn binarize_two_pixel_hand_iteration() {
        let r = binarize_detailed(&gray(2, 1, &[10, 240]));
        assert_eq!(r.thresholds, vec![128.0, 125.0, 125.0]);
        assert!(r.image.get(0, 0));
        assert!(!r.image.get(1, 0));
        assert!(!r.degenerate);
    }

    #[test]
    fn binarize_extremes_keep_first_split() {
        let r = binarize_detailed(&gray(2, 1, &[0, 255]));
        assert_eq!(r.thresholds, vec![128.0, 127.5]);
        assert_eq!(r.image.mask(), &[true, false]);
    }

    #[test]
    fn binarize_all_white_is_all_background() {
        let img = GrayImage::filled(4, 3, 255).unwrap();
        assert!(matches!(binarize(&img), Err(RasterError::AllBackground { .. })));
        assert!(binarize_detailed(&img).degenerate);
    }

    #[test]
    fn binarize_all_dark_freezes_threshold() {
        let img = GrayImage::filled(3, 3, 5).unwrap();
        let r = binarize_detailed(&img);
        assert!(r.degenerate);
        assert_eq!(r.thresholds, vec![128.0]);
        assert_eq!(r.image.count_foreground(), 9);
    }

    #[test]
    fn pixel_equal_to_threshold_is_background() {
        // 128 sits exactly on the initial threshold; 0 pulls T down to 64.
        let r = binarize_detailed(&gray(2, 1, &[0, 128]));
        assert_eq!(r.thresholds[1], 64.0);
        assert_eq!(r.image.mask(), &[true, false]);
        // Nothing below 128: threshold frozen at 128, the 128 pixel stays background.
        let r = binarize_detailed(&gray(2, 1, &[128, 255]));
        assert!(r.degenerate);
        assert_eq!(r.image.mask(), &[false, false]);
    }

    #[test]
    fn gray_image_rejects_bad_dims() {
        assert!(matches!(GrayImage::new(0, 3, vec![]), Err(RasterError::EmptyImage { .. })));
        assert!(matches!(GrayImage::new(2, 2, vec![0; 3]), Err(RasterError::BufferSize { .. })));
    }

    #[test]
    fn bbox_cases() {
        let mut img = BinaryImage::empty(10, 12).unwrap();
        assert_eq!(tight_bbox(&img), Err(RasterError::NoForeground));
        img.set(3, 7, true);
        assert_eq!(tight_bbox(&img).unwrap(), Rect { left: 3, top: 7, width: 1, height: 1 });
        let full = BinaryImage::new(4, 5, vec![true; 20]).unwrap();
        assert_eq!(tight_bbox(&full).unwrap(), Rect { left: 0, top: 0, width: 4, height: 5 });
    }

    #[test]
    fn scale_identity_for_canvas_sized_crop() {
        let mut img = BinaryImage::empty(120, 110).unwrap();
        for i in 0..100 {
            img.set(10 + i, 5 + (i * 7) % 100, true);
        }
        let bbox = Rect { left: 10, top: 5, width: 100, height: 100 };
        let canvas = scale_to_canvas(&img, bbox).unwrap();
        for y in 0..100 {
            for x in 0..100 {
                assert_eq!(canvas.get(x, y), img.get(x + 10, y + 5));
            }
        }
    }

    #[test]
    fn scale_half_size_crop_fills_two_by_two_blocks() {
        let mut img = BinaryImage::empty(50, 50).unwrap();
        for y in 0..50 {
            for x in 0..50 {
                img.set(x, y, (x * 31 + y * 17) % 5 == 0);
            }
        }
        let canvas = scale_to_canvas(&img, Rect { left: 0, top: 0, width: 50, height: 50 }).unwrap();
        // Direct coordinate oracle: destination (x, y) reads source (x/2, y/2).
        for y in 0..100 {
            for x in 0..100 {
                assert_eq!(canvas.get(x, y), img.get(x / 2, y / 2), "({x},{y})");
            }
        }
    }

    #[test]
    fn scale_single_pixel_fills_canvas() {
        let mut img = BinaryImage::empty(5, 5).unwrap();
        img.set(2, 2, true);
        let bbox = tight_bbox(&img).unwrap();
        assert_eq!(scale_to_canvas(&img, bbox).unwrap(), Canvas100::full());
    }

    #[test]
    fn scale_rejects_rect_outside_image() {
        let img = BinaryImage::empty(5, 5).unwrap();
        let bbox = Rect { left: 3, top: 0, width: 3, height: 1 };
        assert!(matches!(scale_to_canvas(&img, bbox), Err(RasterError::RectOutOfBounds { .. })));
    }

    #[test]
    fn smooth_trivial_canvases() {
        assert_eq!(smooth(&Canvas100::empty()), Canvas100::empty());
        assert_eq!(smooth(&Canvas100::full()), Canvas100::full());
    }

    #[test]
    fn smooth_closes_gap_in_ring() {
        let mut c = Canvas100::empty();
        // Square ring 20..=40 with a one-pixel gap in its top edge.
        for i in 20..=40 {
            c.set(i, 20, true);
            c.set(i, 40, true);
            c.set(20, i, true);
            c.set(40, i, true);
        }
        c.set(30, 20, false);
        let s = smooth(&c);
        assert!(s.get(30, 20));
        assert!(c.image().is_subset_of(s.image()));
        // Hole interior survives: the ring is only thickened.
        assert!(!s.get(30, 30));
    }

    #[test]
    fn canvas_rejects_other_sizes() {
        let img = BinaryImage::empty(99, 100).unwrap();
        assert!(matches!(Canvas100::new(img), Err(RasterError::NotCanvas { .. })));
    }
}
