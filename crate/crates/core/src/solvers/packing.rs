//! Exact multiplicity-capped set packing.

use std::collections::BTreeMap;

use crate::subsets::Budget;
use crate::{Error, Result, SupportSet};

/// Largest number of supports containing any single atom.
pub fn max_multiplicity(supports: &[SupportSet]) -> usize {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for s in supports {
        for &j in s.iter() {
            *counts.entry(j).or_default() += 1;
        }
    }
    counts.values().copied().max().unwrap_or(0)
}

struct Search<'a> {
    sets: Vec<&'a [usize]>,
    capacity: Vec<usize>,
    best: usize,
    nodes: u128,
    budget: Budget,
}

impl Search<'_> {
    fn fits(&self, set: &[usize]) -> bool {
        set.iter().all(|&j| self.capacity[j] > 0)
    }

    fn upper_bound(&self, from: usize) -> usize {
        let mut count = 0;
        let mut min_size = usize::MAX;
        let mut touched = vec![false; self.capacity.len()];
        for set in &self.sets[from..] {
            if self.fits(set) {
                count += 1;
                min_size = min_size.min(set.len());
                for &j in set.iter() {
                    touched[j] = true;
                }
            }
        }
        if count == 0 {
            return 0;
        }
        let room: usize = touched
            .iter()
            .zip(&self.capacity)
            .filter(|(t, _)| **t)
            .map(|(_, c)| c)
            .sum();
        count.min(room / min_size.max(1))
    }

    fn run(&mut self, from: usize, chosen: usize) -> Result<()> {
        self.nodes += 1;
        self.budget.check(self.nodes)?;
        if chosen > self.best {
            self.best = chosen;
        }
        if from == self.sets.len() || chosen + self.upper_bound(from) <= self.best {
            return Ok(());
        }
        let set = self.sets[from];
        if self.fits(set) {
            for &j in set {
                self.capacity[j] -= 1;
            }
            self.run(from + 1, chosen + 1)?;
            for &j in set {
                self.capacity[j] += 1;
            }
        }
        self.run(from + 1, chosen)
    }
}

/// Largest sub-collection of `supports` in which no atom occurs in more than
/// `r` members.
///
/// Exact branch and bound: a greedy packing seeds the incumbent and each node
/// is pruned by `min(#remaining sets that still fit, remaining capacity /
/// smallest remaining set)`. Every visited node is charged to `budget`;
/// exhausting it is an error, never an unproven answer.
pub fn restricted_list_size(supports: &[SupportSet], r: usize, budget: Budget) -> Result<usize> {
    if r == 0 {
        return Err(Error::InvalidArgument("R must be at least 1".into()));
    }
    if max_multiplicity(supports) <= r {
        return Ok(supports.len());
    }
    let universe = supports
        .iter()
        .filter_map(|s| s.indices().last())
        .max()
        .map_or(0, |&j| j + 1);
    // small sets first: they block the fewest atoms
    let mut sets: Vec<&[usize]> = supports.iter().map(|s| s.indices()).collect();
    sets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    if sets.iter().any(|s| s.is_empty()) {
        return Err(Error::InvalidSupport("empty support in packing instance".into()));
    }

    let mut greedy = vec![r; universe];
    let mut lower = 0;
    for set in &sets {
        if set.iter().all(|&j| greedy[j] > 0) {
            for &j in set.iter() {
                greedy[j] -= 1;
            }
            lower += 1;
        }
    }

    let mut search = Search {
        sets,
        capacity: vec![r; universe],
        best: lower,
        nodes: 0,
        budget,
    };
    search.run(0, 0)?;
    Ok(search.best)
}
