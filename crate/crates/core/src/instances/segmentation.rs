//! Contrast-sensitive Potts weights for color segmentation grids.

use crate::error::{Error, Result};
use crate::model::PottsInstance;

use super::{grid_edges, RgbImage};

fn sq_dist(a: [u16; 3], b: [u16; 3]) -> f64 {
    a.iter().zip(&b).map(|(&p, &q)| (p as f64 - q as f64).powi(2)).sum()
}

/// `w_uv = η1·exp(−‖I(u) − I(v)‖² / (2·S)) + η2` on the 4-connected grid, in
/// [`grid_edges`] order.
///
/// `S` sums `‖I(p) − I(q)‖²` over ordered adjacent pairs, so every grid edge counts twice.
/// A constant image has `S = 0`; every weight is then the limit `η1 + η2`.
pub fn seg_weights(image: &RgbImage, eta1: f64, eta2: f64) -> Result<Vec<f64>> {
    if !(eta1 >= 0.0 && eta2 >= 0.0) {
        return Err(Error::Parameter(format!("eta must be nonnegative, got ({eta1}, {eta2})")));
    }
    let edges = grid_edges(image.height, image.width);
    let diffs: Vec<f64> =
        edges.iter().map(|&(u, v)| sq_dist(image.data[u], image.data[v])).collect();
    let total = 2.0 * diffs.iter().sum::<f64>();
    Ok(diffs
        .iter()
        .map(|&d| if total > 0.0 { eta1 * (-d / (2.0 * total)).exp() + eta2 } else { eta1 + eta2 })
        .collect())
}

/// A segmentation instance from externally computed node costs (`n x k`, row-major).
pub fn seg_instance(image: &RgbImage, node_costs: &[f64], k: usize, eta1: f64, eta2: f64) -> Result<PottsInstance> {
    let weights = seg_weights(image, eta1, eta2)?;
    PottsInstance::from_f64(image.width * image.height, k, grid_edges(image.height, image.width), node_costs, &weights)
}
