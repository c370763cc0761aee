//! Exhaustive List-Sparse / List-Approx enumeration.
//!
//! Every support up to the query sparsity is solved by minimum-norm least
//! squares. Nothing here is a heuristic except the third case of
//! [`find_multi_solution_witness`], which says so in its error.
//!
//! Residuals are monotone under support inclusion (a larger support spans a
//! larger space), so an inclusion-minimal qualifying support is one none of
//! whose drop-one subsets qualifies. That is how minimality is tested.

mod packing;
mod witness;

use std::collections::{BTreeMap, HashSet};

use nalgebra::DVector;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::linalg::min_norm_least_squares;
use crate::subsets::{binomial, count_up_to, Budget, Combinations};
use crate::{Dictionary, Error, Result, SupportSet, DEFAULT_RANK_TOL};

pub use packing::{max_multiplicity, restricted_list_size};
pub use witness::{find_multi_solution_witness, Witness, WitnessCase};

/// Tolerances and the enumeration budget shared by the solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Relative + absolute tie tolerance for List-Sparse optimality.
    pub eq_tol: f64,
    /// Absolute slack added to `ε` in List-Approx.
    pub abs_tol: f64,
    pub rank_tol: f64,
    /// Cap on the number of supports enumerated.
    pub budget: Budget,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            eq_tol: 1e-9,
            abs_tol: 1e-9,
            rank_tol: DEFAULT_RANK_TOL,
            budget: Budget::unlimited(),
        }
    }
}

/// Which supports List-Approx counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ApproxMode {
    /// Supports of cardinality exactly `k`.
    #[default]
    ExactSize,
    /// Inclusion-minimal supports of cardinality at most `k`.
    MinimalSupports,
}

/// What a [`SolutionList`] answers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Query {
    /// List-Sparse: every optimal `k`-sparse solution.
    Optimal { k: usize },
    /// List-Approx: every `k`-sparse solution within `eps`.
    Within { k: usize, eps: f64, mode: ApproxMode },
}

impl Query {
    pub fn k(&self) -> usize {
        match *self {
            Query::Optimal { k } | Query::Within { k, .. } => k,
        }
    }
}

/// Least-squares fit of `b` on one support.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSolution {
    pub support: SupportSet,
    /// Aligned with `support`.
    pub coefficients: DVector<Complex64>,
    /// `‖A_Λ x − b‖₂`.
    pub residual: f64,
    /// `A_Λ` has full column rank.
    pub coeffs_unique: bool,
}

/// Result of a List-Sparse or List-Approx query.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionList {
    pub query: Query,
    /// Sorted lexicographically by support.
    pub solutions: Vec<SparseSolution>,
    /// Smallest residual over every enumerated support.
    pub optimal_residual: f64,
    /// False when some optimal (List-Sparse) or qualifying (List-Approx)
    /// support is rank-deficient, i.e. it carries infinitely many
    /// coefficient vectors. Rank-deficient supports are never minimal, so
    /// this can be false while every listed solution has unique coefficients.
    pub finite: bool,
    /// Number of distinct listed supports.
    pub support_count: usize,
    /// `R → L(A, b, k, ε, R)`, filled by [`SolutionList::restrict`].
    pub restricted_counts: BTreeMap<usize, usize>,
}

impl SolutionList {
    pub fn supports(&self) -> Vec<SupportSet> {
        self.solutions.iter().map(|s| s.support.clone()).collect()
    }

    /// Computes and records the multiplicity-restricted list size for `r`.
    pub fn restrict(&mut self, r: usize, budget: Budget) -> Result<usize> {
        let size = restricted_list_size(&self.supports(), r, budget)?;
        self.restricted_counts.insert(r, size);
        Ok(size)
    }
}

/// Residual and rank of one enumerated support.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportResidual {
    pub support: SupportSet,
    pub residual: f64,
    pub rank: usize,
}

/// Minimum-norm least-squares coefficients of `b` on the columns `support`.
pub fn least_squares(
    dict: &Dictionary,
    support: &SupportSet,
    b: &DVector<Complex64>,
    rank_tol: f64,
) -> Result<SparseSolution> {
    dict.check_target(b)?;
    dict.check_support(support)?;
    if support.is_empty() {
        return Ok(SparseSolution {
            support: support.clone(),
            coefficients: DVector::zeros(0),
            residual: b.norm(),
            coeffs_unique: true,
        });
    }
    let sub = dict.submatrix(support);
    let (x, rank) = min_norm_least_squares(&sub, b, rank_tol);
    let residual = (&sub * &x - b).norm();
    Ok(SparseSolution {
        support: support.clone(),
        coefficients: x,
        residual,
        coeffs_unique: rank == support.len(),
    })
}

fn check_query(dict: &Dictionary, b: &DVector<Complex64>, k: usize) -> Result<()> {
    dict.check_target(b)?;
    if b.norm() == 0.0 {
        return Err(Error::ZeroTarget);
    }
    if k == 0 || k > dict.n_atoms() {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= k <= N = {}, got k = {k}",
            dict.n_atoms()
        )));
    }
    Ok(())
}

/// Residual and rank of every support with size in `sizes`, in canonical
/// order (by size, then lexicographic).
pub fn enumerate_supports(
    dict: &Dictionary,
    b: &DVector<Complex64>,
    sizes: std::ops::RangeInclusive<usize>,
    opts: &SolveOptions,
) -> Result<Vec<SupportResidual>> {
    let n = dict.n_atoms();
    let needed = sizes
        .clone()
        .fold(0u128, |acc, s| acc.saturating_add(binomial(n, s)));
    opts.budget.check(needed)?;
    let mut out = Vec::new();
    for size in sizes {
        let subsets: Vec<Vec<usize>> = Combinations::new(n, size).collect();
        let level: Vec<SupportResidual> = subsets
            .into_par_iter()
            .map(|cols| {
                let sub = dict.matrix().select_columns(&cols);
                let (x, rank) = min_norm_least_squares(&sub, b, opts.rank_tol);
                SupportResidual {
                    residual: (&sub * &x - b).norm(),
                    rank,
                    support: SupportSet::from_unsorted(cols),
                }
            })
            .collect();
        out.extend(level);
    }
    Ok(out)
}

/// Entries with `residual <= threshold` that have no qualifying drop-one
/// subset, sorted lexicographically.
pub fn minimal_qualifying(entries: &[SupportResidual], threshold: f64) -> Vec<&SupportResidual> {
    let qualifying: HashSet<&SupportSet> = entries
        .iter()
        .filter(|e| e.residual <= threshold)
        .map(|e| &e.support)
        .collect();
    let mut out: Vec<&SupportResidual> = entries
        .iter()
        .filter(|e| e.residual <= threshold)
        .filter(|e| e.support.len() == 1 || !e.support.drop_one().any(|s| qualifying.contains(&s)))
        .collect();
    out.sort_by(|a, b| a.support.cmp(&b.support));
    out
}

fn materialize(
    dict: &Dictionary,
    b: &DVector<Complex64>,
    supports: Vec<&SupportResidual>,
    rank_tol: f64,
) -> Result<Vec<SparseSolution>> {
    supports
        .into_iter()
        .map(|e| least_squares(dict, &e.support, b, rank_tol))
        .collect()
}

fn optimum(entries: &[SupportResidual]) -> f64 {
    entries.iter().map(|e| e.residual).fold(f64::INFINITY, f64::min)
}

/// List-Sparse: every inclusion-minimal support of size `≤ k` whose residual
/// ties the global optimum within `eq_tol` (relative plus absolute).
pub fn solve_list_sparse(
    dict: &Dictionary,
    b: &DVector<Complex64>,
    k: usize,
    opts: &SolveOptions,
) -> Result<SolutionList> {
    check_query(dict, b, k)?;
    opts.budget.check(count_up_to(dict.n_atoms(), k))?;
    let entries = enumerate_supports(dict, b, 1..=k, opts)?;
    let best = optimum(&entries);
    let threshold = best * (1.0 + opts.eq_tol) + opts.eq_tol;
    let finite = entries
        .iter()
        .filter(|e| e.residual <= threshold)
        .all(|e| e.rank == e.support.len());
    let solutions = materialize(dict, b, minimal_qualifying(&entries, threshold), opts.rank_tol)?;
    Ok(SolutionList {
        query: Query::Optimal { k },
        support_count: solutions.len(),
        solutions,
        optimal_residual: best,
        finite,
        restricted_counts: BTreeMap::new(),
    })
}

/// List-Approx: supports whose least-squares residual is at most
/// `eps + abs_tol`, counted per [`ApproxMode`].
pub fn solve_list_approx(
    dict: &Dictionary,
    b: &DVector<Complex64>,
    k: usize,
    eps: f64,
    mode: ApproxMode,
    opts: &SolveOptions,
) -> Result<SolutionList> {
    check_query(dict, b, k)?;
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(Error::InvalidArgument(format!("eps must be finite and >= 0, got {eps}")));
    }
    let threshold = eps + opts.abs_tol;
    let entries = match mode {
        ApproxMode::ExactSize => enumerate_supports(dict, b, k..=k, opts)?,
        ApproxMode::MinimalSupports => enumerate_supports(dict, b, 1..=k, opts)?,
    };
    let finite = entries
        .iter()
        .filter(|e| e.residual <= threshold)
        .all(|e| e.rank == e.support.len());
    let listed: Vec<&SupportResidual> = match mode {
        ApproxMode::ExactSize => entries.iter().filter(|e| e.residual <= threshold).collect(),
        ApproxMode::MinimalSupports => minimal_qualifying(&entries, threshold),
    };
    let solutions = materialize(dict, b, listed, opts.rank_tol)?;
    Ok(SolutionList {
        query: Query::Within { k, eps, mode },
        support_count: solutions.len(),
        solutions,
        optimal_residual: optimum(&entries),
        finite,
        restricted_counts: BTreeMap::new(),
    })
}

/// Outcome counts of [`monte_carlo_list_stats`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloStats {
    pub k: usize,
    pub trials: usize,
    pub seed: u64,
    pub unique: usize,
    pub multiple: usize,
    pub infinite: usize,
    pub unique_fraction: f64,
    pub multiple_fraction: f64,
    pub infinite_fraction: f64,
    pub max_list_size: usize,
}

/// Uniform unit vector in `C^m` (in `R^m` when `real`).
pub fn random_unit_vector(rng: &mut ChaCha8Rng, m: usize, real: bool) -> DVector<Complex64> {
    loop {
        let v = DVector::from_fn(m, |_, _| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = if real { 0.0 } else { StandardNormal.sample(rng) };
            Complex64::new(re, im)
        });
        let norm = v.norm();
        if norm > 0.0 {
            return v.unscale(norm);
        }
    }
}

/// List-Sparse on `trials` uniformly random unit targets. Complex
/// dictionaries get complex targets.
pub fn monte_carlo_list_stats(
    dict: &Dictionary,
    k: usize,
    trials: usize,
    seed: u64,
    opts: &SolveOptions,
) -> Result<MonteCarloStats> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let real = dict.is_real();
    let (mut unique, mut multiple, mut infinite, mut max_list_size) = (0, 0, 0, 0);
    for _ in 0..trials {
        let b = random_unit_vector(&mut rng, dict.m(), real);
        let list = solve_list_sparse(dict, &b, k, opts)?;
        max_list_size = max_list_size.max(list.support_count);
        if !list.finite {
            infinite += 1;
        } else if list.support_count > 1 {
            multiple += 1;
        } else {
            unique += 1;
        }
    }
    let frac = |c: usize| c as f64 / trials as f64;
    Ok(MonteCarloStats {
        k,
        trials,
        seed,
        unique,
        multiple,
        infinite,
        unique_fraction: frac(unique),
        multiple_fraction: frac(multiple),
        infinite_fraction: frac(infinite),
        max_list_size,
    })
}
