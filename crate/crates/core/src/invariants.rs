//! Coherence, spark, generalized coherence and related subspace invariants.
//!
//! All of these are computed exhaustively. Rank decisions use a relative
//! tolerance: a column subset is dependent when its smallest singular value is
//! below `rank_tol × σ_max`.
//!
//! The generalized coherence `μ_k` is the cosine of the smallest first
//! principal angle between spans of two disjoint atom subsets with at most `k`
//! atoms each. Enlarging a subset can only enlarge its span, and the largest
//! cosine can only grow with the spans, so the maximum is always attained by
//! subsets of size exactly `k`. Only those are enumerated, and `2k > N` is an
//! error rather than a guess about how sizes should shrink.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::linalg::{columns_dependent, numerical_rank, orthonormal_basis, top_singular_value_clamped};
use crate::subsets::{binomial, Budget, Combinations};
use crate::{Dictionary, Error, Result, SupportSet};

/// Spark of a dictionary; `Infinite` when all columns are independent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Spark {
    Finite(usize),
    Infinite,
}

impl Spark {
    pub fn value(self) -> Option<usize> {
        match self {
            Spark::Finite(s) => Some(s),
            Spark::Infinite => None,
        }
    }

    /// `k < spark`.
    pub fn exceeds(self, k: usize) -> bool {
        match self {
            Spark::Finite(s) => k < s,
            Spark::Infinite => true,
        }
    }

    /// `2k < spark`, the uniqueness condition for exact `k`-sparse
    /// representations.
    pub fn exceeds_twice(self, k: usize) -> bool {
        match self {
            Spark::Finite(s) => 2 * k < s,
            Spark::Infinite => true,
        }
    }
}

impl std::fmt::Display for Spark {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Spark::Finite(s) => write!(f, "{s}"),
            Spark::Infinite => write!(f, "infinite"),
        }
    }
}

impl Serialize for Spark {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Spark::Finite(s) => serializer.serialize_u64(*s as u64),
            Spark::Infinite => serializer.serialize_str("infinite"),
        }
    }
}

impl<'de> Deserialize<'de> for Spark {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(usize),
            Str(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Int(s) => Ok(Spark::Finite(s)),
            Raw::Str(s) if s == "infinite" => Ok(Spark::Infinite),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("bad spark value {s:?}"))),
        }
    }
}

/// Largest `|⟨A_i, A_j⟩|` over `i ≠ j`.
pub fn coherence(dict: &Dictionary) -> Result<f64> {
    let n = dict.n_atoms();
    if n < 2 {
        return Err(Error::SingleAtom);
    }
    let gram = dict.matrix().adjoint() * dict.matrix();
    let mut mu = 0.0f64;
    for j in 0..n {
        for i in 0..j {
            mu = mu.max(gram[(i, j)].norm());
        }
    }
    Ok(mu)
}

/// Numerical rank of the whole dictionary.
pub fn rank(dict: &Dictionary, rank_tol: f64) -> usize {
    numerical_rank(dict.matrix(), rank_tol)
}

/// Numerical rank of `A_S`.
pub fn support_rank(dict: &Dictionary, support: &SupportSet, rank_tol: f64) -> Result<usize> {
    if support.is_empty() {
        return Err(Error::InvalidSupport("support must be non-empty".into()));
    }
    dict.check_support(support)?;
    Ok(numerical_rank(&dict.submatrix(support), rank_tol))
}

/// Smallest number of linearly dependent columns.
///
/// Subsets are scanned by increasing size; each size level is charged to the
/// budget in full before it is scanned, so a budget error never hides a
/// smaller spark. Since any `rank + 1` columns are dependent, levels above the
/// dictionary rank are never scanned.
pub fn spark(dict: &Dictionary, rank_tol: f64, budget: Budget) -> Result<Spark> {
    let n = dict.n_atoms();
    let r = rank(dict, rank_tol);
    let mut examined: u128 = 0;
    for size in 1..=r.min(n) {
        examined = examined.saturating_add(binomial(n, size));
        budget.check(examined)?;
        let subsets: Vec<Vec<usize>> = Combinations::new(n, size).collect();
        let found = subsets.par_iter().any(|cols| {
            let sub = dict.matrix().select_columns(cols);
            columns_dependent(&sub, rank_tol)
        });
        if found {
            return Ok(Spark::Finite(size));
        }
    }
    if n > r {
        Ok(Spark::Finite(r + 1))
    } else {
        Ok(Spark::Infinite)
    }
}

/// Cosine of the first principal angle between `span(A_I)` and `span(A_J)`.
pub fn principal_angle_cos(
    dict: &Dictionary,
    first: &SupportSet,
    second: &SupportSet,
    rank_tol: f64,
) -> Result<f64> {
    if first.is_empty() || second.is_empty() {
        return Err(Error::InvalidSupport("supports must be non-empty".into()));
    }
    dict.check_support(first)?;
    dict.check_support(second)?;
    if let Some(j) = first.first_common(second) {
        return Err(Error::OverlappingSupports(j));
    }
    let qi = orthonormal_basis(&dict.submatrix(first), rank_tol);
    let qj = orthonormal_basis(&dict.submatrix(second), rank_tol);
    Ok(top_singular_value_clamped(&(qi.adjoint() * qj)))
}

/// Generalized coherence `μ_k` (see the module docs).
pub fn generalized_coherence(dict: &Dictionary, k: usize, rank_tol: f64) -> Result<f64> {
    generalized_coherence_with_budget(dict, k, rank_tol, Budget::unlimited())
}

/// [`generalized_coherence`] with a cap on the number of subset pairs.
pub fn generalized_coherence_with_budget(
    dict: &Dictionary,
    k: usize,
    rank_tol: f64,
    budget: Budget,
) -> Result<f64> {
    let n = dict.n_atoms();
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if 2 * k > n {
        return Err(Error::SparsityTooLarge { k, n_atoms: n });
    }
    let n_sets = binomial(n, k);
    budget.check(n_sets.saturating_mul(n_sets) / 2)?;
    if k == 1 {
        // one-dimensional spans: the cosine is the plain inner product
        return coherence(dict);
    }

    let sets: Vec<Vec<usize>> = Combinations::new(n, k).collect();
    let bases: Vec<DMatrix<Complex64>> = sets
        .par_iter()
        .map(|cols| orthonormal_basis(&dict.matrix().select_columns(cols), rank_tol))
        .collect();
    let best = (0..sets.len())
        .into_par_iter()
        .map(|a| {
            let mut best = 0.0f64;
            let qa_adj = bases[a].adjoint();
            for b in a + 1..sets.len() {
                if !disjoint_sorted(&sets[a], &sets[b]) {
                    continue;
                }
                best = best.max(top_singular_value_clamped(&(&qa_adj * &bases[b])));
            }
            best
        })
        .reduce(|| 0.0, f64::max);
    Ok(best)
}

fn disjoint_sorted(a: &[usize], b: &[usize]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return false,
        }
    }
    true
}

/// Coherence, spark, rank and `μ_1..μ_K` of one dictionary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    /// `None` for a single-atom dictionary.
    pub coherence: Option<f64>,
    pub spark: Spark,
    /// `k → μ_k` for every `k ≤ max_k` with `2k ≤ N`.
    pub generalized_coherence: BTreeMap<usize, f64>,
    pub rank: usize,
    pub rank_tol: f64,
    pub column_norm_tol: f64,
}

/// Computes an [`InvariantReport`] with `μ_k` for `k = 1..=max_k` (sizes with
/// `2k > N` are skipped).
pub fn analyze(dict: &Dictionary, max_k: usize, rank_tol: f64, budget: Budget) -> Result<InvariantReport> {
    let coherence = match coherence(dict) {
        Ok(mu) => Some(mu),
        Err(Error::SingleAtom) => None,
        Err(e) => return Err(e),
    };
    let spark = spark(dict, rank_tol, budget)?;
    let mut generalized = BTreeMap::new();
    for k in 1..=max_k {
        if 2 * k > dict.n_atoms() {
            break;
        }
        generalized.insert(k, generalized_coherence_with_budget(dict, k, rank_tol, budget)?);
    }
    Ok(InvariantReport {
        coherence,
        spark,
        generalized_coherence: generalized,
        rank: rank(dict, rank_tol),
        rank_tol,
        column_norm_tol: dict.column_norm_tol(),
    })
}
