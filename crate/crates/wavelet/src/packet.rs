//! Full Haar packet decomposition and reconstruction from an anti-chain.
//!
//! Each split maps a `2×2` pixel group `[a b; c d]` to
//!
//! ```text
//! approx     = (a + b + c + d) / 2
//! horizontal = (a + b − c − d) / 2
//! vertical   = (a − b + c − d) / 2
//! diagonal   = (a − b − c + d) / 2
//! ```
//!
//! which is orthonormal, so every level carries the image energy exactly.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::{ImageGrid, Result, WaveletError};

/// A quad-tree node: `index` ranges over `0..4^level`; the children of
/// `(l, i)` are `(l+1, 4i + c)` with `c` = 0 approx, 1 horizontal,
/// 2 vertical, 3 diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct NodeId {
    pub level: u32,
    pub index: usize,
}

impl NodeId {
    pub const ROOT: NodeId = NodeId { level: 0, index: 0 };

    pub fn new(level: u32, index: usize) -> Self {
        Self { level, index }
    }

    pub fn children(self) -> [NodeId; 4] {
        let l = self.level + 1;
        let base = 4 * self.index;
        [
            NodeId::new(l, base),
            NodeId::new(l, base + 1),
            NodeId::new(l, base + 2),
            NodeId::new(l, base + 3),
        ]
    }

    pub fn parent(self) -> Option<NodeId> {
        (self.level > 0).then(|| NodeId::new(self.level - 1, self.index / 4))
    }

    /// True when `self` lies strictly above `other`.
    pub fn is_ancestor_of(self, other: NodeId) -> bool {
        other.level > self.level && other.index >> (2 * (other.level - self.level)) == self.index
    }
}

/// All packet coefficients down to `depth`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletPacketTree {
    side: usize,
    depth: u32,
    /// `levels[l][i]` is the row-major block of node `(l, i)`.
    levels: Vec<Vec<Vec<f64>>>,
}

impl WaveletPacketTree {
    pub fn side(&self) -> usize {
        self.side
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn block_side(&self, level: u32) -> usize {
        self.side >> level
    }

    pub fn node(&self, id: NodeId) -> &[f64] {
        &self.levels[id.level as usize][id.index]
    }

    pub fn nodes_at(&self, level: u32) -> &[Vec<f64>] {
        &self.levels[level as usize]
    }

    pub fn coefficient_count(&self, level: u32) -> usize {
        self.levels[level as usize].iter().map(Vec::len).sum()
    }

    pub fn level_energy(&self, level: u32) -> f64 {
        self.levels[level as usize]
            .iter()
            .flat_map(|b| b.iter())
            .map(|c| c * c)
            .sum()
    }

    /// Blocks of the nodes in `nodes`.
    pub fn restrict(&self, nodes: &[NodeId]) -> BTreeMap<NodeId, Vec<f64>> {
        nodes.iter().map(|&id| (id, self.node(id).to_vec())).collect()
    }
}

fn split(block: &[f64], side: usize) -> [Vec<f64>; 4] {
    let half = side / 2;
    let mut out = [
        vec![0.0; half * half],
        vec![0.0; half * half],
        vec![0.0; half * half],
        vec![0.0; half * half],
    ];
    for r in 0..half {
        for c in 0..half {
            let a = block[2 * r * side + 2 * c];
            let b = block[2 * r * side + 2 * c + 1];
            let cc = block[(2 * r + 1) * side + 2 * c];
            let d = block[(2 * r + 1) * side + 2 * c + 1];
            let k = r * half + c;
            out[0][k] = (a + b + cc + d) / 2.0;
            out[1][k] = (a + b - cc - d) / 2.0;
            out[2][k] = (a - b + cc - d) / 2.0;
            out[3][k] = (a - b - cc + d) / 2.0;
        }
    }
    out
}

fn merge(children: [&[f64]; 4], half: usize) -> Vec<f64> {
    let side = 2 * half;
    let mut out = vec![0.0; side * side];
    for r in 0..half {
        for c in 0..half {
            let k = r * half + c;
            let (s, h, v, d) = (children[0][k], children[1][k], children[2][k], children[3][k]);
            out[2 * r * side + 2 * c] = (s + h + v + d) / 2.0;
            out[2 * r * side + 2 * c + 1] = (s + h - v - d) / 2.0;
            out[(2 * r + 1) * side + 2 * c] = (s - h + v - d) / 2.0;
            out[(2 * r + 1) * side + 2 * c + 1] = (s - h - v + d) / 2.0;
        }
    }
    out
}

/// Full wavelet-packet tree of `image` down to `depth`.
pub fn haar_wpt(image: &ImageGrid, depth: u32) -> Result<WaveletPacketTree> {
    let side = image.side();
    if depth == 0 || depth > side.trailing_zeros() {
        return Err(WaveletError::DepthTooLarge { depth, side });
    }
    let mut levels = vec![vec![image.pixels().to_vec()]];
    for level in 0..depth {
        let block_side = side >> level;
        let next: Vec<Vec<f64>> = levels[level as usize]
            .iter()
            .flat_map(|block| split(block, block_side))
            .collect();
        levels.push(next);
    }
    Ok(WaveletPacketTree { side, depth, levels })
}

/// Reconstructs an image from the blocks of a maximal anti-chain.
pub fn inverse_wpt(side: usize, blocks: &BTreeMap<NodeId, Vec<f64>>) -> Result<ImageGrid> {
    let nodes: Vec<NodeId> = blocks.keys().copied().collect();
    crate::basis::check_antichain(&nodes)?;
    let max_level = nodes.iter().map(|n| n.level).max().unwrap_or(0);
    if !side.is_power_of_two() || max_level > side.trailing_zeros() {
        return Err(WaveletError::DepthTooLarge { depth: max_level, side });
    }
    for (id, block) in blocks {
        let expected = (side >> id.level) * (side >> id.level);
        if block.len() != expected {
            return Err(WaveletError::Shape {
                expected,
                got: block.len(),
            });
        }
    }
    let pixels = rebuild(NodeId::ROOT, side, blocks);
    ImageGrid::new(side, pixels)
}

fn rebuild(id: NodeId, block_side: usize, blocks: &BTreeMap<NodeId, Vec<f64>>) -> Vec<f64> {
    if let Some(block) = blocks.get(&id) {
        return block.clone();
    }
    let [c0, c1, c2, c3] = id.children().map(|c| rebuild(c, block_side / 2, blocks));
    merge([&c0, &c1, &c2, &c3], block_side / 2)
}
