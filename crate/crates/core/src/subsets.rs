//! Lexicographic subset enumeration and the enumeration budget guard.

use crate::{Error, Result};

/// `C(n, k)` with saturation at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Number of subsets of `[n]` with size in `1..=k`.
pub fn count_up_to(n: usize, k: usize) -> u128 {
    (1..=k.min(n)).fold(0u128, |acc, s| acc.saturating_add(binomial(n, s)))
}

/// Cap on the number of subsets (or search nodes) an exhaustive routine may
/// examine. `None` means unlimited.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Budget {
    pub limit: Option<u128>,
}

impl Budget {
    pub const fn unlimited() -> Self {
        Self { limit: None }
    }

    pub const fn new(limit: u128) -> Self {
        Self { limit: Some(limit) }
    }

    /// Fails with `BudgetExceeded` when `needed` exceeds the limit.
    pub fn check(&self, needed: u128) -> Result<()> {
        match self.limit {
            Some(limit) if needed > limit => Err(Error::BudgetExceeded { needed, limit }),
            _ => Ok(()),
        }
    }
}

/// Iterator over the `k`-subsets of `[n]` in lexicographic order.
#[derive(Debug, Clone)]
pub struct Combinations {
    n: usize,
    current: Vec<usize>,
    done: bool,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Self {
            n,
            current: (0..k).collect(),
            done: k > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let k = self.current.len();
        // advance to the next combination
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.current[i] < self.n - k + i {
                self.current[i] += 1;
                for j in i + 1..k {
                    self.current[j] = self.current[j - 1] + 1;
                }
                break;
            }
        }
        if k == 0 {
            self.done = true;
        }
        Some(out)
    }
}

/// All subsets of `[n]` with size in `1..=k`, grouped by size and
/// lexicographic within each size.
pub fn subsets_up_to(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    (1..=k.min(n)).flat_map(move |s| Combinations::new(n, s))
}
