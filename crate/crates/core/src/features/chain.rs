//! Contour extraction, clockwise Freeman chain coding and the zoned
//! chain-code histogram.

use super::{FeatureKind, FeatureVector};
use crate::raster::{BinaryImage, Canvas100, CANVAS_SIZE};

/// Blocks per canvas side for the chain-code histogram.
pub const CHAIN_BLOCKS: usize = 5;
/// Side of one histogram block in pixels.
pub const CHAIN_BLOCK_SIZE: usize = CANVAS_SIZE / CHAIN_BLOCKS;

/// Freeman direction, counter-clockwise from east; rows grow downward.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Direction(u8);

impl Direction {
    pub const E: Direction = Direction(0);
    pub const NE: Direction = Direction(1);
    pub const N: Direction = Direction(2);
    pub const NW: Direction = Direction(3);
    pub const W: Direction = Direction(4);
    pub const SW: Direction = Direction(5);
    pub const S: Direction = Direction(6);
    pub const SE: Direction = Direction(7);

    const STEPS: [(isize, isize); 8] = [(1, 0), (1, -1), (0, -1), (-1, -1), (-1, 0), (-1, 1), (0, 1), (1, 1)];

    pub fn new(code: u8) -> Option<Self> {
        (code < 8).then_some(Direction(code))
    }

    pub fn code(self) -> u8 {
        self.0
    }

    pub fn step(self) -> (isize, isize) {
        Self::STEPS[self.0 as usize]
    }

    /// One eighth turn clockwise.
    fn clockwise(self) -> Self {
        Direction((self.0 + 7) % 8)
    }
}

/// Foreground pixels with at least one background 4-neighbour.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContourImage(BinaryImage);

impl ContourImage {
    pub fn image(&self) -> &BinaryImage {
        &self.0
    }
}

/// One traced contour.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainTrace {
    pub start: (usize, usize),
    pub codes: Vec<Direction>,
    /// Pixel each code leaves, aligned with `codes`.
    pub departures: Vec<(usize, usize)>,
}

impl ChainTrace {
    /// Sum of all unit steps.
    pub fn displacement(&self) -> (isize, isize) {
        self.codes.iter().fold((0, 0), |(sx, sy), d| {
            let (dx, dy) = d.step();
            (sx + dx, sy + dy)
        })
    }

    pub fn code_values(&self) -> Vec<u8> {
        self.codes.iter().map(|d| d.code()).collect()
    }
}

pub fn extract_contour_image(img: &BinaryImage) -> ContourImage {
    let mut out = BinaryImage::empty(img.width(), img.height()).expect("same dimensions");
    for (x, y) in img.foreground() {
        let (xi, yi) = (x as isize, y as isize);
        let boundary = [(0, -1), (1, 0), (0, 1), (-1, 0)]
            .iter()
            .any(|&(dx, dy)| !img.get_or_bg(xi + dx, yi + dy));
        if boundary {
            out.set(x, y, true);
        }
    }
    ContourImage(out)
}

pub fn extract_contour(img: &Canvas100) -> ContourImage {
    extract_contour_image(img.image())
}

fn neighbor(img: &BinaryImage, (x, y): (usize, usize), d: Direction) -> Option<(usize, usize)> {
    let (dx, dy) = d.step();
    let (nx, ny) = (x as isize + dx, y as isize + dy);
    img.get_or_bg(nx, ny).then_some((nx as usize, ny as usize))
}

/// First foreground neighbour scanning clockwise from `from`.
fn scan_clockwise(img: &BinaryImage, at: (usize, usize), from: Direction) -> Option<(Direction, (usize, usize))> {
    let mut d = from;
    for _ in 0..8 {
        if let Some(p) = neighbor(img, at, d) {
            return Some((d, p));
        }
        d = d.clockwise();
    }
    None
}

/// Moore-neighbour walk from the topmost-leftmost pixel of a component,
/// keeping the interior on the right. Stops on re-entering the start pixel
/// about to repeat the first move.
fn trace_component(img: &BinaryImage, start: (usize, usize)) -> ChainTrace {
    let mut codes = Vec::new();
    let mut departures = Vec::new();
    let mut current = start;
    let mut search_from = Direction::N;
    let mut first_move = None;
    // Each (pixel, direction) state is left at most once per lap.
    let cap = 8 * img.count_foreground() + 8;
    while codes.len() < cap {
        let Some((d, next)) = scan_clockwise(img, current, search_from) else {
            break;
        };
        if current == start && first_move == Some(d) {
            break;
        }
        first_move.get_or_insert(d);
        codes.push(d);
        departures.push(current);
        current = next;
        // Resume just past the background pixel examined before `next`.
        search_from = Direction((d.code() + if d.code() % 2 == 0 { 1 } else { 2 }) % 8);
    }
    ChainTrace { start, codes, departures }
}

/// Traces every 8-connected contour component clockwise.
///
/// Components start at their topmost, then leftmost, pixel. Pixels of a
/// component that the walk never leaves from are emitted as single-pixel
/// traces with no codes. Traces are ordered by start pixel.
pub fn chain_trace(contour: &ContourImage) -> Vec<ChainTrace> {
    let img = &contour.0;
    let (w, h) = (img.width(), img.height());
    let mut component = vec![usize::MAX; w * h];
    let mut traces = Vec::new();
    let mut next_label = 0;

    for y in 0..h {
        for x in 0..w {
            if !img.get(x, y) || component[y * w + x] != usize::MAX {
                continue;
            }
            let label = next_label;
            next_label += 1;
            let mut members = Vec::new();
            let mut stack = vec![(x, y)];
            component[y * w + x] = label;
            while let Some(p) = stack.pop() {
                members.push(p);
                for code in 0..8 {
                    if let Some(q) = neighbor(img, p, Direction(code)) {
                        if component[q.1 * w + q.0] == usize::MAX {
                            component[q.1 * w + q.0] = label;
                            stack.push(q);
                        }
                    }
                }
            }

            let trace = trace_component(img, (x, y));
            let mut visited = vec![false; w * h];
            visited[y * w + x] = true;
            for &(dx, dy) in &trace.departures {
                visited[dy * w + dx] = true;
            }
            traces.push(trace);
            traces.extend(members.into_iter().filter(|&(mx, my)| !visited[my * w + mx]).map(|p| ChainTrace {
                start: p,
                codes: Vec::new(),
                departures: Vec::new(),
            }));
        }
    }
    traces.sort_by_key(|t| (t.start.1, t.start.0));
    traces
}

/// Raw per-block direction counts, blocks row-major then direction.
pub fn chaincode_counts(traces: &[ChainTrace]) -> [u32; 200] {
    let mut counts = [0u32; 200];
    for trace in traces {
        for (d, &(x, y)) in trace.codes.iter().zip(&trace.departures) {
            let block = (y / CHAIN_BLOCK_SIZE) * CHAIN_BLOCKS + x / CHAIN_BLOCK_SIZE;
            counts[block * 8 + d.code() as usize] += 1;
        }
    }
    counts
}

/// Relative frequency of each direction code in each 20×20 block.
pub fn chaincode_histogram_features(traces: &[ChainTrace]) -> FeatureVector {
    let counts = chaincode_counts(traces);
    let total: u32 = counts.iter().sum();
    let values = if total == 0 {
        vec![0.0; 200]
    } else {
        counts.iter().map(|&c| f64::from(c) / f64::from(total)).collect()
    };
    FeatureVector::new(FeatureKind::ChainCode200, values).expect("200 chain-code values")
}
