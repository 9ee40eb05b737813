//! Stereo disparity models with truncation-free squared-difference matching costs and
//! intensity-gated Potts weights.

use crate::error::{Error, Result};
use crate::model::PottsInstance;

use super::{grid_edges, GrayImage, SplitMix64};

/// Smoothness parameters: weight `penalty · scale` across edges whose left-image intensity
/// difference is below `threshold`, `scale` otherwise.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StereoParams {
    pub penalty: f64,
    pub threshold: f64,
    pub scale: f64,
}

impl Default for StereoParams {
    fn default() -> Self {
        Self { penalty: 2.0, threshold: 4.0, scale: 50.0 }
    }
}

/// Matching costs `(I_L(h,w) − I_R(h,w−i))²` for disparities `i < k`, row-major per pixel.
///
/// Disparities that would read left of the right image's first column get
/// `1 + (largest in-range cost of that pixel)`, so they stay finite but never win alone.
pub fn stereo_node_costs(left: &GrayImage, right: &GrayImage, k: usize) -> Result<Vec<i64>> {
    if left.width != right.width || left.height != right.height {
        return Err(Error::SizeMismatch {
            expected: left.width * left.height,
            found: right.width * right.height,
        });
    }
    if k == 0 {
        return Err(Error::Parameter("need at least one disparity".into()));
    }
    let mut costs = Vec::with_capacity(left.width * left.height * k);
    for h in 0..left.height {
        for w in 0..left.width {
            let l = left.get(h, w) as i64;
            let valid: Vec<i64> = (0..k.min(w + 1))
                .map(|i| {
                    let d = l - right.get(h, w - i) as i64;
                    d * d
                })
                .collect();
            let sentinel = valid.iter().copied().max().unwrap_or(0) + 1;
            costs.extend((0..k).map(|i| valid.get(i).copied().unwrap_or(sentinel)));
        }
    }
    Ok(costs)
}

/// Builds the stereo Potts instance on the 4-connected pixel grid of the left image.
pub fn stereo_build(
    left: &GrayImage,
    right: &GrayImage,
    k: usize,
    params: StereoParams,
) -> Result<PottsInstance> {
    let costs = stereo_node_costs(left, right, k)?;
    let edges = grid_edges(left.height, left.width);
    let weights: Vec<f64> = edges
        .iter()
        .map(|&(u, v)| {
            let diff = (left.data[u] as f64 - left.data[v] as f64).abs();
            if diff < params.threshold {
                params.penalty * params.scale
            } else {
                params.scale
            }
        })
        .collect();
    let costs: Vec<f64> = costs.into_iter().map(|c| c as f64).collect();
    PottsInstance::from_f64(left.width * left.height, k, edges, &costs, &weights)
}

/// A seeded synthetic rectified pair with its true disparity map.
///
/// The right image is a blocky random texture; the left image samples it through a disparity
/// map of nested rectangles (0 at the border, rising by one per ring up to `k − 1`) and adds
/// independent noise in `±noise`. Pixels whose match falls off the right image get fresh texture.
pub fn synthetic_pair(height: usize, width: usize, k: usize, noise: u16, seed: u64) -> Result<(GrayImage, GrayImage, Vec<usize>)> {
    if height == 0 || width == 0 || k == 0 {
        return Err(Error::Parameter("synthetic pair needs a nonempty image and k ≥ 1".into()));
    }
    let mut rng = SplitMix64::new(seed);
    let block = 3;
    let (bh, bw) = (height.div_ceil(block), width.div_ceil(block));
    let levels: Vec<i64> = (0..bh * bw).map(|_| rng.range_inclusive(40, 215)).collect();
    let noise = noise as i64;
    let jitter = |v: i64, rng: &mut SplitMix64| (v + rng.range_inclusive(-noise, noise)).clamp(0, 255) as u16;
    let mut right = Vec::with_capacity(height * width);
    for h in 0..height {
        for w in 0..width {
            right.push(jitter(levels[(h / block) * bw + w / block], &mut rng));
        }
    }
    let ring = (height.min(width) / (2 * k)).max(1);
    let mut disparity = Vec::with_capacity(height * width);
    let mut left = Vec::with_capacity(height * width);
    for h in 0..height {
        for w in 0..width {
            let depth = h.min(w).min(height - 1 - h).min(width - 1 - w) / ring;
            let d = depth.min(k - 1);
            disparity.push(d);
            let base = if w >= d { right[h * width + w - d] as i64 } else { rng.range_inclusive(40, 215) };
            left.push(jitter(base, &mut rng));
        }
    }
    Ok((GrayImage::new(width, height, 255, left)?, GrayImage::new(width, height, 255, right)?, disparity))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::int;

    fn img(w: usize, h: usize, data: Vec<u16>) -> GrayImage {
        GrayImage::new(w, h, 255, data).unwrap()
    }

    #[test]
    fn identical_images_single_disparity_cost_nothing() {
        let a = img(3, 2, vec![5, 9, 200, 0, 17, 3]);
        let costs = stereo_node_costs(&a, &a, 1).unwrap();
        assert!(costs.iter().all(|&c| c == 0));
        // Disparity 0 stays free once more disparities are added.
        let inst = stereo_build(&a, &a, 3, StereoParams::default()).unwrap();
        for u in 0..6 {
            assert_eq!(inst.node_cost(u, 0), &int(0));
        }
    }

    #[test]
    fn off_image_disparities_get_sentinel() {
        let left = img(3, 1, vec![10, 20, 30]);
        let right = img(3, 1, vec![12, 25, 29]);
        let costs = stereo_node_costs(&left, &right, 3).unwrap();
        // Pixel 0: only disparity 0 is valid, cost 4; the other two get 5.
        assert_eq!(&costs[0..3], &[4, 5, 5]);
        // Pixel 1: d0 = (20-25)^2 = 25, d1 = (20-12)^2 = 64, d2 off-image -> 65.
        assert_eq!(&costs[3..6], &[25, 64, 65]);
        // Pixel 2: all valid.
        assert_eq!(&costs[6..9], &[1, 25, 324]);
    }

    #[test]
    fn constant_image_gets_penalized_weights_everywhere() {
        let a = img(4, 3, vec![77; 12]);
        let inst = stereo_build(&a, &a, 2, StereoParams::default()).unwrap();
        assert!(inst.weights().iter().all(|w| *w == int(100)));
    }

    #[test]
    fn intensity_edges_get_base_weight() {
        let left = img(2, 1, vec![0, 4]);
        let inst = stereo_build(&left, &left, 2, StereoParams::default()).unwrap();
        assert_eq!(inst.weights(), &[int(50)]);
        let left = img(2, 1, vec![0, 3]);
        let inst = stereo_build(&left, &left, 2, StereoParams::default()).unwrap();
        assert_eq!(inst.weights(), &[int(100)]);
    }

    #[test]
    fn synthetic_pair_matches_at_true_disparity() {
        let (left, right, d) = synthetic_pair(12, 16, 3, 0, 7).unwrap();
        assert_eq!(d.iter().max(), Some(&2));
        assert_eq!(d[0], 0);
        for h in 0..12 {
            for w in 0..16 {
                let di = d[h * 16 + w];
                if w >= di {
                    assert_eq!(left.get(h, w), right.get(h, w - di));
                }
            }
        }
        assert_eq!(synthetic_pair(12, 16, 3, 2, 7).unwrap(), synthetic_pair(12, 16, 3, 2, 7).unwrap());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = img(2, 1, vec![0, 0]);
        let b = img(1, 2, vec![0, 0]);
        assert!(stereo_build(&a, &b, 2, StereoParams::default()).is_err());
    }
}
