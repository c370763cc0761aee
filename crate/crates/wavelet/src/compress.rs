//! The three truncation experiments.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::basis::{best_basis, BasisSelection, Cost};
use crate::packet::{haar_wpt, inverse_wpt, NodeId, WaveletPacketTree};
use crate::{ImageGrid, Result, WaveletError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CompressionClass {
    /// Class 1: on the leaf basis, keep every coefficient above `large` and
    /// each coefficient in `(medium, large]` with probability
    /// `keep_probability`.
    LargeAndRandomMedium {
        large: f64,
        medium: f64,
        keep_probability: f64,
        seed: u64,
    },
    /// Class 2: entropy best basis, largest `keep_fraction` of coefficients.
    TruncatedEntropy { keep_fraction: f64 },
    /// Class 3: ℓ1 best basis, largest `keep_fraction` of coefficients.
    TruncatedL1 { keep_fraction: f64 },
}

impl CompressionClass {
    pub fn class1(seed: u64) -> Self {
        CompressionClass::LargeAndRandomMedium {
            large: 0.1,
            medium: 0.01,
            keep_probability: 0.5,
            seed,
        }
    }

    pub fn class2() -> Self {
        CompressionClass::TruncatedEntropy { keep_fraction: 0.2 }
    }

    pub fn class3() -> Self {
        CompressionClass::TruncatedL1 { keep_fraction: 0.2 }
    }

    pub fn label(&self) -> u8 {
        match self {
            CompressionClass::LargeAndRandomMedium { .. } => 1,
            CompressionClass::TruncatedEntropy { .. } => 2,
            CompressionClass::TruncatedL1 { .. } => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KeptCoefficient {
    pub node: NodeId,
    pub index: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompressionResult {
    pub class: u8,
    pub depth: u32,
    /// Nodes of the basis the coefficients were taken from.
    pub basis: Vec<NodeId>,
    pub kept: Vec<KeptCoefficient>,
    /// Kept count over pixel count.
    pub sparsity_fraction: f64,
    /// `‖image − reconstruction‖₂ / ‖image‖₂`.
    pub relative_error: f64,
    #[serde(skip)]
    pub reconstruction: ImageGrid,
}

fn basis_coefficients(tree: &WaveletPacketTree, basis: &[NodeId]) -> Vec<KeptCoefficient> {
    basis
        .iter()
        .flat_map(|&node| {
            tree.node(node)
                .iter()
                .enumerate()
                .map(move |(index, &value)| KeptCoefficient { node, index, value })
        })
        .collect()
}

fn largest(mut coeffs: Vec<KeptCoefficient>, keep_fraction: f64, pixel_count: usize) -> Result<Vec<KeptCoefficient>> {
    if !(0.0..=1.0).contains(&keep_fraction) {
        return Err(WaveletError::InvalidParameter(format!(
            "keep fraction must lie in [0, 1], got {keep_fraction}"
        )));
    }
    let count = ((keep_fraction * pixel_count as f64).floor() as usize).min(coeffs.len());
    // stable: equal magnitudes keep canonical (node, index) order
    coeffs.sort_by(|a, b| b.value.abs().total_cmp(&a.value.abs()));
    coeffs.truncate(count);
    coeffs.sort_by_key(|c| (c.node, c.index));
    Ok(coeffs)
}

/// Runs one compression class on `image` with a depth-`depth` packet tree.
pub fn compress_class(image: &ImageGrid, depth: u32, class: CompressionClass) -> Result<CompressionResult> {
    let tree = haar_wpt(image, depth)?;
    let pixel_count = image.side() * image.side();
    let (basis, kept) = match class {
        CompressionClass::LargeAndRandomMedium {
            large,
            medium,
            keep_probability,
            seed,
        } => {
            if !(medium >= 0.0 && large >= medium) || !(0.0..=1.0).contains(&keep_probability) {
                return Err(WaveletError::InvalidParameter(format!(
                    "need 0 <= medium <= large and keep probability in [0, 1], got {medium}, {large}, {keep_probability}"
                )));
            }
            let basis = BasisSelection::leaves(depth);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let kept = basis_coefficients(&tree, &basis)
                .into_iter()
                .filter(|c| {
                    let a = c.value.abs();
                    a > large || (a > medium && rng.gen_bool(keep_probability))
                })
                .collect();
            (basis, kept)
        }
        CompressionClass::TruncatedEntropy { keep_fraction } => {
            let basis = best_basis(&tree, Cost::ShannonEntropy).nodes;
            let kept = largest(basis_coefficients(&tree, &basis), keep_fraction, pixel_count)?;
            (basis, kept)
        }
        CompressionClass::TruncatedL1 { keep_fraction } => {
            let basis = best_basis(&tree, Cost::L1).nodes;
            let kept = largest(basis_coefficients(&tree, &basis), keep_fraction, pixel_count)?;
            (basis, kept)
        }
    };

    let reconstruction = reconstruct(image.side(), &basis, &kept)?;
    Ok(CompressionResult {
        class: class.label(),
        depth,
        sparsity_fraction: kept.len() as f64 / pixel_count as f64,
        relative_error: image.relative_error(&reconstruction),
        basis,
        kept,
        reconstruction,
    })
}

/// Image from the kept coefficients of `basis`; everything else is zero.
pub fn reconstruct(side: usize, basis: &[NodeId], kept: &[KeptCoefficient]) -> Result<ImageGrid> {
    let mut blocks: BTreeMap<NodeId, Vec<f64>> = basis
        .iter()
        .map(|&n| (n, vec![0.0; (side >> n.level) * (side >> n.level)]))
        .collect();
    for c in kept {
        let block = blocks
            .get_mut(&c.node)
            .ok_or_else(|| WaveletError::InvalidSelection(format!("coefficient outside basis at {:?}", c.node)))?;
        block[c.index] = c.value;
    }
    inverse_wpt(side, &blocks)
}
