//! Deterministic binary "blobs" test image: smoothed Gaussian noise
//! thresholded at its mean.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::{ImageGrid, Result, WaveletError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlobParams {
    /// Blur width as a fraction of the side.
    pub sigma_fraction: f64,
}

impl Default for BlobParams {
    fn default() -> Self {
        Self { sigma_fraction: 1.0 / 8.0 }
    }
}

fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    let radius = (3.0 * sigma).ceil() as i64;
    let raw: Vec<f64> = (-radius..=radius)
        .map(|t| (-(t * t) as f64 / (2.0 * sigma * sigma)).exp())
        .collect();
    let sum: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / sum).collect()
}

// periodic convolution along rows or columns
fn blur_axis(data: &[f64], side: usize, kernel: &[f64], columns: bool) -> Vec<f64> {
    let radius = (kernel.len() / 2) as i64;
    let n = side as i64;
    let mut out = vec![0.0; data.len()];
    for r in 0..side {
        for c in 0..side {
            let mut acc = 0.0;
            for (j, w) in kernel.iter().enumerate() {
                let off = j as i64 - radius;
                let idx = if columns {
                    ((r as i64 + off).rem_euclid(n) as usize) * side + c
                } else {
                    r * side + (c as i64 + off).rem_euclid(n) as usize
                };
                acc += w * data[idx];
            }
            out[r * side + c] = acc;
        }
    }
    out
}

/// Blobs image with default parameters.
pub fn synthetic_blobs(side: usize, seed: u64) -> Result<ImageGrid> {
    synthetic_blobs_with(side, seed, BlobParams::default())
}

pub fn synthetic_blobs_with(side: usize, seed: u64, params: BlobParams) -> Result<ImageGrid> {
    if !side.is_power_of_two() {
        return Err(WaveletError::NotPowerOfTwo(side));
    }
    if !(params.sigma_fraction > 0.0 && params.sigma_fraction.is_finite()) {
        return Err(WaveletError::InvalidParameter(format!(
            "sigma fraction must be positive, got {}",
            params.sigma_fraction
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise: Vec<f64> = (0..side * side).map(|_| StandardNormal.sample(&mut rng)).collect();
    let sigma = (params.sigma_fraction * side as f64).max(0.5);
    let kernel = gaussian_kernel(sigma);
    let smooth = blur_axis(&blur_axis(&noise, side, &kernel, false), side, &kernel, true);
    let mean = smooth.iter().sum::<f64>() / smooth.len() as f64;
    let pixels = smooth.iter().map(|&v| if v > mean { 1.0 } else { 0.0 }).collect();
    ImageGrid::new(side, pixels)
}
