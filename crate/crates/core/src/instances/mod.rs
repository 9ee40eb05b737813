//! Instance builders and file formats: seeded random grids, stereo and segmentation models,
//! the POTTS/LABELING text formats and PGM/PPM images.

mod io;
mod pnm;
mod segmentation;
mod stereo;

pub use io::{
    labeling_to_pgm, read_instance, read_labeling, write_instance, write_labeling,
    parse_instance, parse_labeling, format_instance, format_labeling,
};
pub use pnm::{GrayImage, RgbImage};
pub use segmentation::{seg_instance, seg_weights};
pub use stereo::{stereo_build, stereo_node_costs, synthetic_pair, StereoParams};

use crate::error::{Error, Result};
use crate::model::{Labeling, PottsInstance};

/// SplitMix64 (Steele, Lea & Flood). Fixed algorithm so seeded fixtures never drift.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform integer in `lo..=hi` (modulo reduction; the bias is below 2^-40 for small spans).
    pub fn range_inclusive(&mut self, lo: i64, hi: i64) -> i64 {
        debug_assert!(lo <= hi);
        let span = (hi - lo) as u64 + 1;
        lo + (self.next_u64() % span) as i64
    }

    /// Uniform index in `0..n`.
    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }

    /// Uniform float in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}

/// Vertex index of pixel `(row, col)` in a row-major grid of width `width`.
pub fn grid_index(row: usize, col: usize, width: usize) -> usize {
    row * width + col
}

/// 4-connected grid edges: for each pixel in row-major order, its right then its lower neighbor.
pub fn grid_edges(height: usize, width: usize) -> Vec<(usize, usize)> {
    let mut edges = Vec::with_capacity(height * width.saturating_sub(1) + width * height.saturating_sub(1));
    for r in 0..height {
        for c in 0..width {
            let u = grid_index(r, c, width);
            if c + 1 < width {
                edges.push((u, u + 1));
            }
            if r + 1 < height {
                edges.push((u, u + width));
            }
        }
    }
    edges
}

/// Random grid instance with integer node costs in `cost_range` and integer weights in
/// `weight_range` (both inclusive).
///
/// Draw order: all node costs (vertex-major, label-minor), then all edge weights in
/// [`grid_edges`] order, from one [`SplitMix64`] stream seeded with `seed`.
pub fn gen_grid(
    height: usize,
    width: usize,
    k: usize,
    seed: u64,
    cost_range: (i64, i64),
    weight_range: (i64, i64),
) -> Result<PottsInstance> {
    if height * width == 0 {
        return Err(Error::Parameter("grid must have at least one pixel".into()));
    }
    if cost_range.0 > cost_range.1 || weight_range.0 > weight_range.1 {
        return Err(Error::Parameter("empty cost or weight range".into()));
    }
    if weight_range.0 < 0 {
        return Err(Error::Parameter("weights must be nonnegative".into()));
    }
    let mut rng = SplitMix64::new(seed);
    let n = height * width;
    let costs: Vec<i64> = (0..n * k).map(|_| rng.range_inclusive(cost_range.0, cost_range.1)).collect();
    let edges = grid_edges(height, width);
    let weights: Vec<i64> =
        (0..edges.len()).map(|_| rng.range_inclusive(weight_range.0, weight_range.1)).collect();
    PottsInstance::from_ints(n, k, edges, &costs, &weights)
}

/// Uniformly random labeling, seeded.
pub fn random_labeling(n: usize, k: usize, seed: u64) -> Labeling {
    let mut rng = SplitMix64::new(seed);
    Labeling::new((0..n).map(|_| rng.below(k)).collect())
}
