//! 3×3 binary morphology.
//!
//! Dilation reads outside pixels as background; erosion ignores them. The
//! pair is an adjunction on the raster domain, so `close` is extensive and
//! idempotent right up to the border.

use super::BinaryImage;

fn window_any(img: &BinaryImage, x: usize, y: usize) -> bool {
    let (w, h) = (img.width(), img.height());
    let (x0, x1) = (x.saturating_sub(1), (x + 1).min(w - 1));
    let (y0, y1) = (y.saturating_sub(1), (y + 1).min(h - 1));
    (y0..=y1).any(|yy| (x0..=x1).any(|xx| img.get(xx, yy)))
}

fn window_all(img: &BinaryImage, x: usize, y: usize) -> bool {
    let (w, h) = (img.width(), img.height());
    let (x0, x1) = (x.saturating_sub(1), (x + 1).min(w - 1));
    let (y0, y1) = (y.saturating_sub(1), (y + 1).min(h - 1));
    (y0..=y1).all(|yy| (x0..=x1).all(|xx| img.get(xx, yy)))
}

fn map_window(img: &BinaryImage, f: fn(&BinaryImage, usize, usize) -> bool) -> BinaryImage {
    let (w, h) = (img.width(), img.height());
    let mask = (0..h).flat_map(|y| (0..w).map(move |x| (x, y))).map(|(x, y)| f(img, x, y)).collect();
    BinaryImage::new(w, h, mask).expect("dimensions unchanged")
}

/// Dilation with the full 3×3 square.
pub fn dilate(img: &BinaryImage) -> BinaryImage {
    map_window(img, window_any)
}

/// Erosion with the full 3×3 square.
pub fn erode(img: &BinaryImage) -> BinaryImage {
    map_window(img, window_all)
}

/// Closing: dilation then erosion.
pub fn close(img: &BinaryImage) -> BinaryImage {
    erode(&dilate(img))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dilate_single_pixel_grows_to_square() {
        let img = BinaryImage::from_rows(&[".....", ".....", "..#..", ".....", "....."]).unwrap();
        let d = dilate(&img);
        let expected =
            BinaryImage::from_rows(&[".....", ".###.", ".###.", ".###.", "....."]).unwrap();
        assert_eq!(d, expected);
        assert_eq!(erode(&d), img);
    }

    #[test]
    fn erosion_keeps_border_foreground() {
        let img = BinaryImage::from_rows(&["###", "###"]).unwrap();
        assert_eq!(erode(&img), img);
    }

    #[test]
    fn closing_fills_pinhole() {
        let img = BinaryImage::from_rows(&["#####", "#####", "##.##", "#####", "#####"]).unwrap();
        let c = close(&img);
        assert_eq!(c.count_foreground(), 25);
    }
}
