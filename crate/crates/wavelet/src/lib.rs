//! Two-dimensional Haar wavelet packets on square grayscale images.
//!
//! [`haar_wpt`] builds the full packet quad-tree, [`best_basis`] picks the
//! cheapest maximal anti-chain under an additive cost, and
//! [`compress_class`] runs the three truncation experiments (leaf basis with
//! random medium coefficients, truncated entropy best basis, truncated ℓ1
//! best basis). [`synthetic_blobs`] generates a deterministic binary test
//! image.

mod basis;
mod blobs;
mod compress;
mod packet;

pub use basis::{all_antichains, best_basis, random_antichain, BasisSelection, Cost};
pub use blobs::{synthetic_blobs, synthetic_blobs_with, BlobParams};
pub use compress::{compress_class, reconstruct, CompressionClass, CompressionResult, KeptCoefficient};
pub use packet::{haar_wpt, inverse_wpt, NodeId, WaveletPacketTree};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WaveletError {
    #[error("image side {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("depth {depth} too large for side {side}")]
    DepthTooLarge { depth: u32, side: usize },
    #[error("expected {expected} pixels, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("non-finite pixel at index {0}")]
    NonFinite(usize),
    #[error("invalid basis selection: {0}")]
    InvalidSelection(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, WaveletError>;

/// Square grayscale image, row-major. Inputs are nominally in `[0, 1]`;
/// reconstructions may stray slightly outside.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageGrid {
    side: usize,
    pixels: Vec<f64>,
}

impl ImageGrid {
    pub fn new(side: usize, pixels: Vec<f64>) -> Result<Self> {
        if !side.is_power_of_two() {
            return Err(WaveletError::NotPowerOfTwo(side));
        }
        if pixels.len() != side * side {
            return Err(WaveletError::Shape {
                expected: side * side,
                got: pixels.len(),
            });
        }
        if let Some(i) = pixels.iter().position(|p| !p.is_finite()) {
            return Err(WaveletError::NonFinite(i));
        }
        Ok(Self { side, pixels })
    }

    pub fn constant(side: usize, value: f64) -> Result<Self> {
        Self::new(side, vec![value; side * side])
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<f64> {
        self.pixels
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.pixels[row * self.side + col]
    }

    /// Sum of squared pixels.
    pub fn energy(&self) -> f64 {
        self.pixels.iter().map(|p| p * p).sum()
    }

    /// `‖self − other‖₂ / ‖self‖₂` (absolute error when `self` is zero).
    pub fn relative_error(&self, other: &ImageGrid) -> f64 {
        let diff: f64 = self
            .pixels
            .iter()
            .zip(&other.pixels)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        let norm = self.energy().sqrt();
        if norm == 0.0 {
            diff
        } else {
            diff / norm
        }
    }
}
