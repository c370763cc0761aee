//! Targets with more than `k` optimal `k`-sparse representations.
//!
//! Three cases, by the smallest dependent column set:
//!
//! 1. some `s ≤ k` columns are dependent: any generic combination of them
//!    has infinitely many representations;
//! 2. some `k+1` columns are dependent while every `k` are independent: a
//!    generic combination lies in the common span of all `k+1` of its
//!    `k`-subsets;
//! 3. every `k+1` columns are independent: search numerically for a point
//!    on the unit sphere whose `k+1` nearest `k`-subspaces are equidistant.
//!
//! Case 3 seeds Gauss–Newton iterations at the incenters of `(k+1)`-column
//! simplices and at random points, and at each step re-selects the `k+1`
//! nearest subspaces, so the iteration settles on a point where nothing else
//! is closer. It is a heuristic; running out of iterations is reported as
//! [`Error::WitnessNotFound`].

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use super::{random_unit_vector, solve_list_sparse, SolutionList, SolveOptions};
use crate::linalg::{columns_dependent, orthonormal_basis};
use crate::subsets::{binomial, Combinations};
use crate::{Dictionary, Error, Result};

const SEED: u64 = 0x6c73_615f_7769_746e;
const MAX_REDRAWS: usize = 32;
const MAX_SIMPLEX_SEEDS: usize = 64;
const RANDOM_SEEDS: usize = 64;
const ITERATIONS_PER_START: usize = 80;
const MAX_SIGN_PATTERN_BITS: usize = 8;

/// Which proof case produced the witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessCase {
    DependentK,
    DependentKPlusOne,
    Equidistant,
}

#[derive(Debug, Clone)]
pub struct Witness {
    /// Unit-norm target.
    pub b: DVector<Complex64>,
    pub case: WitnessCase,
    /// List-Sparse result for `b`; `support_count > k` or `finite == false`.
    pub list: SolutionList,
    /// Gauss–Newton iterations spent (case 3 only).
    pub iterations: usize,
}

impl Witness {
    pub fn verified_count(&self) -> usize {
        self.list.support_count
    }
}

fn accepted(list: &SolutionList, k: usize) -> bool {
    !list.finite || list.support_count > k
}

fn random_combination(
    dict: &Dictionary,
    cols: &[usize],
    rng: &mut ChaCha8Rng,
) -> Option<DVector<Complex64>> {
    let real = dict.is_real();
    let mut b = DVector::zeros(dict.m());
    for &j in cols {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = if real { 0.0 } else { StandardNormal.sample(rng) };
        b += dict.atom(j) * Complex64::new(re, im);
    }
    let norm = b.norm();
    (norm > 1e-8).then(|| b.unscale(norm))
}

/// Smallest dependent column set of size at most `max_size`.
fn smallest_dependent(dict: &Dictionary, max_size: usize, opts: &SolveOptions) -> Result<Option<Vec<usize>>> {
    let n = dict.n_atoms();
    let mut examined = 0u128;
    for size in 1..=max_size.min(n) {
        examined = examined.saturating_add(binomial(n, size));
        opts.budget.check(examined)?;
        let subsets: Vec<Vec<usize>> = Combinations::new(n, size).collect();
        let found = subsets
            .into_par_iter()
            .find_first(|cols| columns_dependent(&dict.matrix().select_columns(cols), opts.rank_tol));
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

/// A unit target with more than `k` optimal `k`-sparse representations (or
/// infinitely many), verified with [`solve_list_sparse`].
pub fn find_multi_solution_witness(dict: &Dictionary, k: usize, opts: &SolveOptions) -> Result<Witness> {
    let n = dict.n_atoms();
    if k == 0 || k >= n {
        return Err(Error::InvalidArgument(format!("need 1 <= k < N = {n}, got k = {k}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);

    if let Some(cols) = smallest_dependent(dict, k + 1, opts)? {
        let case = if cols.len() <= k {
            WitnessCase::DependentK
        } else {
            WitnessCase::DependentKPlusOne
        };
        for _ in 0..MAX_REDRAWS {
            let Some(b) = random_combination(dict, &cols, &mut rng) else {
                continue;
            };
            let list = solve_list_sparse(dict, &b, k, opts)?;
            if accepted(&list, k) {
                return Ok(Witness {
                    b,
                    case,
                    list,
                    iterations: 0,
                });
            }
        }
        return Err(Error::WitnessNotFound { iterations: 0 });
    }

    equidistant_search(dict, k, opts, &mut rng)
}

/// Real coordinates `[Re b; Im b]`.
fn to_real(v: &DVector<Complex64>) -> DVector<f64> {
    let m = v.len();
    DVector::from_fn(2 * m, |i, _| if i < m { v[i].re } else { v[i - m].im })
}

fn from_real(v: &DVector<f64>) -> DVector<Complex64> {
    let m = v.len() / 2;
    DVector::from_fn(m, |i, _| Complex64::new(v[i], v[i + m]))
}

struct Subspaces {
    bases: Vec<DMatrix<Complex64>>,
}

impl Subspaces {
    fn new(dict: &Dictionary, k: usize, opts: &SolveOptions) -> Result<Self> {
        opts.budget.check(binomial(dict.n_atoms(), k))?;
        let sets: Vec<Vec<usize>> = Combinations::new(dict.n_atoms(), k).collect();
        let bases = sets
            .par_iter()
            .map(|cols| orthonormal_basis(&dict.matrix().select_columns(cols), opts.rank_tol))
            .collect();
        Ok(Self { bases })
    }

    /// `(squared distance, gradient of it in real coordinates)` per subspace,
    /// sorted by distance.
    fn nearest(&self, b: &DVector<Complex64>, count: usize) -> Vec<(f64, DVector<f64>)> {
        let mut all: Vec<(f64, usize)> = self
            .bases
            .iter()
            .enumerate()
            .map(|(i, q)| {
                let r = b - q * (q.adjoint() * b);
                (r.norm_squared(), i)
            })
            .collect();
        all.sort_by(|x, y| x.0.total_cmp(&y.0));
        all.truncate(count);
        all.into_iter()
            .map(|(d2, i)| {
                let q = &self.bases[i];
                let r = b - q * (q.adjoint() * b);
                (d2, to_real(&r) * 2.0)
            })
            .collect()
    }
}

/// Unit vectors equidistant from the `k+1` facets of the simplex spanned by
/// `cols`: `Σ_j σ_j ‖w_j‖ A_j` where `w_j` are the dual rows.
fn incenters(dict: &Dictionary, cols: &[usize], rank_tol: f64) -> Vec<DVector<Complex64>> {
    let sub = dict.matrix().select_columns(cols);
    let q = orthonormal_basis(&sub, rank_tol);
    if q.ncols() != cols.len() {
        return Vec::new();
    }
    let coords = q.adjoint() * &sub;
    let Some(dual) = coords.try_inverse() else {
        return Vec::new();
    };
    let weights: Vec<f64> = (0..cols.len()).map(|j| dual.row(j).norm()).collect();
    let bits = (cols.len() - 1).min(MAX_SIGN_PATTERN_BITS);
    (0..1usize << bits)
        .filter_map(|pattern| {
            let mut b = dict.atom(cols[0]) * Complex64::new(weights[0], 0.0);
            for (j, &col) in cols.iter().enumerate().skip(1) {
                let sign = if j <= bits && pattern >> (j - 1) & 1 == 1 { -1.0 } else { 1.0 };
                b += dict.atom(col) * Complex64::new(sign * weights[j], 0.0);
            }
            let norm = b.norm();
            (norm > 1e-12).then(|| b.unscale(norm))
        })
        .collect()
}

/// Gauss–Newton on `d_j² − d_0² = 0` over the `k+1` nearest subspaces, with
/// the unit-sphere constraint linearized as an extra row.
fn refine(
    subspaces: &Subspaces,
    start: DVector<Complex64>,
    k: usize,
    iterations: &mut usize,
) -> Option<DVector<Complex64>> {
    let mut b = to_real(&start);
    for _ in 0..ITERATIONS_PER_START {
        *iterations += 1;
        let near = subspaces.nearest(&from_real(&b), k + 1);
        if near.len() < k + 1 {
            return None;
        }
        let d0 = near[0].0;
        let gap = near[k].0 - d0;
        if gap <= 1e-14 * d0.max(1e-300) || gap <= 1e-24 {
            return Some(from_real(&b));
        }
        let dim = b.len();
        let mut jac = DMatrix::zeros(k + 1, dim);
        let mut rhs = DVector::zeros(k + 1);
        for j in 1..=k {
            let row = &near[j].1 - &near[0].1;
            jac.row_mut(j - 1).copy_from(&row.transpose());
            rhs[j - 1] = -(near[j].0 - d0);
        }
        jac.row_mut(k).copy_from(&b.transpose());
        let svd = jac.svd(true, true);
        let mut step = svd.solve(&rhs, 1e-12).ok()?;
        let len = step.norm();
        if !len.is_finite() {
            return None;
        }
        if len > 0.25 {
            step *= 0.25 / len;
        }
        b += step;
        let norm = b.norm();
        if norm == 0.0 {
            return None;
        }
        b /= norm;
    }
    None
}

fn equidistant_search(
    dict: &Dictionary,
    k: usize,
    opts: &SolveOptions,
    rng: &mut ChaCha8Rng,
) -> Result<Witness> {
    let subspaces = Subspaces::new(dict, k, opts)?;
    let mut starts: Vec<DVector<Complex64>> = Vec::new();
    for cols in Combinations::new(dict.n_atoms(), k + 1).take(MAX_SIMPLEX_SEEDS) {
        starts.extend(incenters(dict, &cols, opts.rank_tol));
    }
    let real = dict.is_real();
    for _ in 0..RANDOM_SEEDS {
        starts.push(random_unit_vector(rng, dict.m(), real));
    }

    let mut iterations = 0;
    for start in starts {
        // the incenter itself may already qualify
        for candidate in [Some(start.clone()), refine(&subspaces, start, k, &mut iterations)]
            .into_iter()
            .flatten()
        {
            let list = solve_list_sparse(dict, &candidate, k, opts)?;
            if accepted(&list, k) {
                return Ok(Witness {
                    b: candidate,
                    case: WitnessCase::Equidistant,
                    list,
                    iterations,
                });
            }
        }
    }
    Err(Error::WitnessNotFound { iterations })
}
