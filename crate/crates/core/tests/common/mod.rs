//! Synthetic glyph corpus: ten stroke shapes rendered with random shifts,
//! stroke widths, endpoint jitter and intensity noise.
#![allow(dead_code)]

use std::path::Path;

use devocr::raster::{write_pgm, GrayImage};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const GLYPH_CLASSES: usize = 10;
pub const IMAGE_SIZE: usize = 64;

type Stroke = [(f64, f64); 2];

fn polygon(points: &[(f64, f64)]) -> Vec<Stroke> {
    (0..points.len()).map(|i| [points[i], points[(i + 1) % points.len()]]).collect()
}

/// Strokes of class `c` in unit coordinates, y growing downward.
pub fn shape(c: usize) -> Vec<Stroke> {
    match c {
        0 => vec![[(0.5, 0.0), (0.5, 1.0)], [(0.0, 0.5), (1.0, 0.5)]],
        1 => vec![[(0.0, 0.0), (1.0, 1.0)], [(1.0, 0.0), (0.0, 1.0)]],
        2 => polygon(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]),
        3 => polygon(&[(0.5, 0.0), (1.0, 1.0), (0.0, 1.0)]),
        4 => {
            let pts: Vec<(f64, f64)> = (0..16)
                .map(|i| {
                    let a = i as f64 * std::f64::consts::TAU / 16.0;
                    (0.5 + 0.5 * a.cos(), 0.5 + 0.5 * a.sin())
                })
                .collect();
            polygon(&pts)
        }
        5 => vec![[(0.0, 0.0), (0.0, 1.0)], [(0.0, 1.0), (1.0, 1.0)]],
        6 => vec![[(0.0, 0.0), (1.0, 0.0)], [(0.5, 0.0), (0.5, 1.0)]],
        7 => vec![[(0.0, 0.0), (1.0, 0.0)], [(1.0, 0.0), (0.0, 1.0)], [(0.0, 1.0), (1.0, 1.0)]],
        8 => vec![[(0.0, 0.0), (0.0, 1.0)], [(1.0, 0.0), (1.0, 1.0)], [(0.0, 0.5), (1.0, 0.5)]],
        9 => vec![[(0.0, 0.0), (0.0, 1.0)], [(0.0, 1.0), (1.0, 1.0)], [(1.0, 1.0), (1.0, 0.0)]],
        _ => panic!("no shape {c}"),
    }
}

fn segment_distance(p: (f64, f64), [a, b]: Stroke) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 { 0.0 } else { (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0) };
    ((p.0 - a.0 - t * dx).powi(2) + (p.1 - a.1 - t * dy).powi(2)).sqrt()
}

/// One variant of class `c`: dark ink on a light, noisy background.
pub fn render(c: usize, rng: &mut impl Rng) -> GrayImage {
    let n = IMAGE_SIZE as f64;
    let size = rng.gen_range(0.55..0.75) * n;
    let left = rng.gen_range(4.0..n - size - 4.0);
    let top = rng.gen_range(4.0..n - size - 4.0);
    let half_width = rng.gen_range(1.0..2.5);
    let strokes: Vec<Stroke> = shape(c)
        .into_iter()
        .map(|s| {
            s.map(|(x, y)| {
                let jx = rng.gen_range(-0.04..0.04);
                let jy = rng.gen_range(-0.04..0.04);
                (left + (x + jx) * size, top + (y + jy) * size)
            })
        })
        .collect();
    let ink: f64 = rng.gen_range(20.0..70.0);
    let background = rng.gen_range(190.0..240.0);
    let mut px = Vec::with_capacity(IMAGE_SIZE * IMAGE_SIZE);
    for y in 0..IMAGE_SIZE {
        for x in 0..IMAGE_SIZE {
            let p = (x as f64 + 0.5, y as f64 + 0.5);
            let d = strokes.iter().map(|&s| segment_distance(p, s)).fold(f64::INFINITY, f64::min);
            let base = if d <= half_width { ink } else { background };
            px.push((base + rng.gen_range(-15.0f64..15.0)).clamp(0.0, 255.0) as u8);
        }
    }
    GrayImage::new(IMAGE_SIZE, IMAGE_SIZE, px).unwrap()
}

/// Writes `classes × per_class` PGM files under `root/gNN/`.
pub fn write_corpus(root: &Path, classes: usize, per_class: usize, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for c in 0..classes {
        let dir = root.join(format!("g{c:02}"));
        std::fs::create_dir_all(&dir).unwrap();
        for i in 0..per_class {
            write_pgm(&render(c, &mut rng), dir.join(format!("{i:03}.pgm"))).unwrap();
        }
    }
}
