//! Additive costs, maximal anti-chains and the best-basis search.

use std::collections::HashSet;

use rand::Rng;
use serde::Serialize;

use crate::packet::{NodeId, WaveletPacketTree};
use crate::{Result, WaveletError};

/// Additive cost of a set of coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Cost {
    /// `−Σ p ln p` with `p = c² / ‖image‖²` and `0 ln 0 = 0`. Normalizing by
    /// the whole image energy (not the node's) keeps the cost of an
    /// anti-chain equal to the entropy of its full coefficient vector.
    ShannonEntropy,
    /// `Σ |c|`.
    L1,
}

impl Cost {
    pub fn of(self, block: &[f64], total_energy: f64) -> f64 {
        match self {
            Cost::L1 => block.iter().map(|c| c.abs()).sum(),
            Cost::ShannonEntropy => {
                if total_energy == 0.0 {
                    return 0.0;
                }
                block
                    .iter()
                    .map(|c| c * c / total_energy)
                    .filter(|&p| p > 0.0)
                    .map(|p| -p * p.ln())
                    .sum()
            }
        }
    }
}

/// A maximal anti-chain of the packet tree and its cost.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BasisSelection {
    /// Sorted by `(level, index)`.
    pub nodes: Vec<NodeId>,
    pub cost: f64,
}

impl BasisSelection {
    /// The terminal nodes of a depth-`depth` tree.
    pub fn leaves(depth: u32) -> Vec<NodeId> {
        (0..1usize << (2 * depth)).map(|i| NodeId::new(depth, i)).collect()
    }

    pub fn evaluate(tree: &WaveletPacketTree, nodes: Vec<NodeId>, cost: Cost) -> Result<Self> {
        check_antichain(&nodes)?;
        if let Some(bad) = nodes.iter().find(|n| n.level > tree.depth()) {
            return Err(WaveletError::InvalidSelection(format!("node {bad:?} below tree depth")));
        }
        let energy = tree.level_energy(0);
        let total = nodes.iter().map(|&n| cost.of(tree.node(n), energy)).sum();
        let mut nodes = nodes;
        nodes.sort();
        Ok(Self { nodes, cost: total })
    }
}

/// Checks that `nodes` are pairwise non-nested and cover every leaf path.
pub fn check_antichain(nodes: &[NodeId]) -> Result<()> {
    if nodes.is_empty() {
        return Err(WaveletError::InvalidSelection("empty selection".into()));
    }
    let set: HashSet<NodeId> = nodes.iter().copied().collect();
    if set.len() != nodes.len() {
        return Err(WaveletError::InvalidSelection("duplicate node".into()));
    }
    for &n in nodes {
        if n.index >= 1usize << (2 * n.level) {
            return Err(WaveletError::InvalidSelection(format!("node {n:?} out of range")));
        }
        let mut up = n.parent();
        while let Some(p) = up {
            if set.contains(&p) {
                return Err(WaveletError::InvalidSelection(format!("{p:?} is an ancestor of {n:?}")));
            }
            up = p.parent();
        }
    }
    // with no nesting, coverage is a measure count
    let deepest = nodes.iter().map(|n| n.level).max().unwrap_or(0);
    let covered: u128 = nodes.iter().map(|n| 1u128 << (2 * (deepest - n.level))).sum();
    if covered != 1u128 << (2 * deepest) {
        return Err(WaveletError::InvalidSelection("selection does not cover the tree".into()));
    }
    Ok(())
}

/// Bottom-up dynamic program; a node is kept when its own cost is at most the
/// best cost of its children, so ties go to the coarser node.
pub fn best_basis(tree: &WaveletPacketTree, cost: Cost) -> BasisSelection {
    let energy = tree.level_energy(0);
    let depth = tree.depth();
    // best[i] / choice[i] for the current level
    let mut best: Vec<f64> = tree.nodes_at(depth).iter().map(|b| cost.of(b, energy)).collect();
    let mut choice: Vec<Vec<NodeId>> = (0..best.len()).map(|i| vec![NodeId::new(depth, i)]).collect();
    for level in (0..depth).rev() {
        let blocks = tree.nodes_at(level);
        let mut next_best = Vec::with_capacity(blocks.len());
        let mut next_choice = Vec::with_capacity(blocks.len());
        for (i, block) in blocks.iter().enumerate() {
            let own = cost.of(block, energy);
            let children: f64 = best[4 * i..4 * i + 4].iter().sum();
            if own <= children {
                next_best.push(own);
                next_choice.push(vec![NodeId::new(level, i)]);
            } else {
                next_best.push(children);
                let mut merged = Vec::new();
                for c in 4 * i..4 * i + 4 {
                    merged.append(&mut choice[c]);
                }
                next_choice.push(merged);
            }
        }
        best = next_best;
        choice = next_choice;
    }
    let mut nodes = choice.swap_remove(0);
    nodes.sort();
    BasisSelection { nodes, cost: best[0] }
}

/// Every maximal anti-chain of a depth-`depth` quad-tree (17 at depth 2).
pub fn all_antichains(depth: u32) -> Vec<Vec<NodeId>> {
    fn below(node: NodeId, depth: u32) -> Vec<Vec<NodeId>> {
        let mut out = vec![vec![node]];
        if node.level < depth {
            let mut combos: Vec<Vec<NodeId>> = vec![Vec::new()];
            for child in node.children() {
                let options = below(child, depth);
                combos = combos
                    .iter()
                    .flat_map(|prefix| {
                        options.iter().map(move |o| {
                            let mut v = prefix.clone();
                            v.extend_from_slice(o);
                            v
                        })
                    })
                    .collect();
            }
            out.extend(combos);
        }
        out
    }
    below(NodeId::ROOT, depth)
}

/// Random maximal anti-chain: each node above `depth` splits with
/// probability `split_prob`.
pub fn random_antichain<R: Rng>(depth: u32, split_prob: f64, rng: &mut R) -> Vec<NodeId> {
    let mut out = Vec::new();
    let mut stack = vec![NodeId::ROOT];
    while let Some(node) = stack.pop() {
        if node.level < depth && rng.gen_bool(split_prob) {
            stack.extend(node.children());
        } else {
            out.push(node);
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn antichain_counts() {
        assert_eq!(all_antichains(1).len(), 2);
        assert_eq!(all_antichains(2).len(), 17);
        for a in all_antichains(2) {
            check_antichain(&a).unwrap();
        }
    }

    #[test]
    fn rejects_nested_and_partial() {
        let nested = vec![NodeId::ROOT, NodeId::new(1, 0)];
        assert!(check_antichain(&nested).is_err());
        let partial = vec![NodeId::new(1, 0), NodeId::new(1, 1)];
        assert!(check_antichain(&partial).is_err());
        check_antichain(&BasisSelection::leaves(2)).unwrap();
    }

    #[test]
    fn entropy_of_uniform_block() {
        let block = vec![0.5; 4];
        assert!((Cost::ShannonEntropy.of(&block, 1.0) - 4f64.ln()).abs() < 1e-15);
        assert_eq!(Cost::ShannonEntropy.of(&[0.0, 1.0], 1.0), 0.0);
        assert_eq!(Cost::L1.of(&[-1.0, 2.0], 5.0), 3.0);
    }
}
