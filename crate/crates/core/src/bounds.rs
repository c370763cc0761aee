//! Closed-form list-size bounds and a harness that checks them against
//! enumerated list sizes.
//!
//! Integer-valued bounds are floored (or ceiled where the bound is stated as
//! a ceiling). Every precondition is evaluated strictly: a value sitting
//! exactly on a threshold yields [`BoundValue::NotApplicable`].

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::invariants::{coherence, generalized_coherence, rank, spark, Spark};
use crate::solvers::{enumerate_supports, minimal_qualifying, restricted_list_size, SolveOptions};
use crate::subsets::{binomial, Budget};
use crate::{Dictionary, Error, Result};

/// A bound's value, or the fact that its precondition fails.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundValue {
    Count(u64),
    Real(f64),
    NotApplicable,
}

impl BoundValue {
    pub fn is_applicable(&self) -> bool {
        !matches!(self, BoundValue::NotApplicable)
    }

    pub fn count(&self) -> Option<u64> {
        match *self {
            BoundValue::Count(c) => Some(c),
            _ => None,
        }
    }

    pub fn real(&self) -> Option<f64> {
        match *self {
            BoundValue::Real(x) => Some(x),
            BoundValue::Count(c) => Some(c as f64),
            BoundValue::NotApplicable => None,
        }
    }
}

impl Serialize for BoundValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            BoundValue::Count(c) => serializer.serialize_u64(c),
            BoundValue::Real(x) => serializer.serialize_f64(x),
            BoundValue::NotApplicable => serializer.serialize_str("not_applicable"),
        }
    }
}

fn floor_count(x: f64) -> BoundValue {
    BoundValue::Count(x.floor() as u64)
}

fn check_unit_interval(name: &str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidArgument(format!("{name} must lie in [0, 1], got {x}")));
    }
    Ok(())
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(Error::InvalidArgument(format!("eps must be finite and >= 0, got {eps}")));
    }
    Ok(())
}

/// Circumradius `√((n−1)/(2n))` of the regular simplex with `n` vertices and
/// unit edge length.
pub fn simplex_circumradius(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::ParameterOutOfRange(format!("need n >= 2 vertices, got {n}")));
    }
    Ok(((n - 1) as f64 / (2 * n) as f64).sqrt())
}

/// `⌊1/(1 − 2ε²/δ²)⌋` for points with pairwise distance at least `δ`;
/// not applicable once `ε ≥ δ/√2`.
pub fn euclidean_list_bound(delta: f64, eps: f64) -> Result<BoundValue> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidArgument(format!("delta must be positive, got {delta}")));
    }
    check_eps(eps)?;
    let x = 2.0 * eps * eps / (delta * delta);
    Ok(if x >= 1.0 { BoundValue::NotApplicable } else { floor_count(1.0 / (1.0 - x)) })
}

/// `⌊1/(1 − ε²/(1−μ))⌋` for `k = 1`; not applicable once `ε ≥ √(1−μ)`.
pub fn spherical_list_bound(mu: f64, eps: f64) -> Result<BoundValue> {
    check_unit_interval("mu", mu)?;
    list_bound_mu_k(mu, eps)
}

/// `⌊1/(1 − ε²/(1−μ_k))⌋`; not applicable once `ε ≥ √(1−μ_k)`, in particular
/// whenever `μ_k = 1`.
pub fn list_bound_mu_k(mu_k: f64, eps: f64) -> Result<BoundValue> {
    check_unit_interval("mu_k", mu_k)?;
    check_eps(eps)?;
    let room = 1.0 - mu_k;
    if room <= 0.0 || eps * eps >= room {
        return Ok(BoundValue::NotApplicable);
    }
    Ok(floor_count(1.0 / (1.0 - eps * eps / room)))
}

/// `⌊1/(1 − [1−(k−1)μ]ε²/(1−(2k−1)μ))⌋`, applicable when `μ < 1/(2k−1)` and
/// `ε < √((1−(2k−1)μ)/(1−(k−1)μ))`.
pub fn list_bound_coherence(mu: f64, k: usize, eps: f64) -> Result<BoundValue> {
    check_unit_interval("mu", mu)?;
    check_eps(eps)?;
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let kf = k as f64;
    let outer = 1.0 - (2.0 * kf - 1.0) * mu;
    let inner = 1.0 - (kf - 1.0) * mu;
    if outer <= 0.0 {
        return Ok(BoundValue::NotApplicable);
    }
    let x = inner * eps * eps / outer;
    Ok(if x >= 1.0 { BoundValue::NotApplicable } else { floor_count(1.0 / (1.0 - x)) })
}

/// `⌊4/(1−ε²)⌋` for `k = 1`, applicable when `17μ < 1` and `ε < √(1−17μ)`.
pub fn av_list_bound_k1(mu: f64, eps: f64) -> Result<BoundValue> {
    check_unit_interval("mu", mu)?;
    check_eps(eps)?;
    let room = 1.0 - 17.0 * mu;
    if room <= 0.0 || eps * eps >= room {
        return Ok(BoundValue::NotApplicable);
    }
    Ok(floor_count(4.0 / (1.0 - eps * eps)))
}

/// `⌈(11/(1−ε²))^{1/(1−γ)}⌉` bounding `L(A, k, ε, L^γ)`, applicable when
/// `ε < √(1 − 24(μk)^{1−γ})`.
pub fn av_list_bound(mu: f64, k: usize, eps: f64, gamma: f64) -> Result<BoundValue> {
    check_unit_interval("mu", mu)?;
    check_eps(eps)?;
    if k < 2 {
        return Err(Error::InvalidArgument(format!("need k >= 2, got {k}")));
    }
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::InvalidArgument(format!("gamma must lie in [0, 1), got {gamma}")));
    }
    let room = 1.0 - 24.0 * (mu * k as f64).powf(1.0 - gamma);
    if room <= 0.0 || eps * eps >= room {
        return Ok(BoundValue::NotApplicable);
    }
    let value = (11.0 / (1.0 - eps * eps)).powf(1.0 / (1.0 - gamma)).ceil();
    Ok(BoundValue::Count(value as u64))
}

/// Whether `μ ≤ 1/(2kL)`, the coherence regime of the general List-Approx
/// upper bound.
pub fn av_regime_holds(mu: f64, k: usize, list_size: usize) -> bool {
    mu * 2.0 * k as f64 * list_size as f64 <= 1.0
}

/// `kμ/(1−(k−1)μ)`; not applicable when `μ ≥ 1/(k−1)`.
pub fn mu_k_upper(mu: f64, k: usize) -> Result<BoundValue> {
    check_unit_interval("mu", mu)?;
    if k < 2 {
        return Err(Error::InvalidArgument(format!("need k >= 2, got {k}")));
    }
    let kf = k as f64;
    let denom = 1.0 - (kf - 1.0) * mu;
    Ok(if denom <= 0.0 {
        BoundValue::NotApplicable
    } else {
        BoundValue::Real(kf * mu / denom)
    })
}

/// `(2k−1)μ`.
pub fn mu_k_upper_simple(mu: f64, k: usize) -> Result<f64> {
    check_unit_interval("mu", mu)?;
    if k < 2 {
        return Err(Error::InvalidArgument(format!("need k >= 2, got {k}")));
    }
    Ok((2 * k - 1) as f64 * mu)
}

/// Sufficient conditions for a unique `k`-sparse exact representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct UniquenessFlags {
    /// `k < ½(1/μ + 1)`.
    pub unique_by_mu: bool,
    /// `k < spark/2`.
    pub unique_by_spark: bool,
    /// `k < 1/μ` (two orthonormal bases).
    pub two_onb_cohbound: bool,
}

pub fn uniqueness_thresholds(mu: f64, spark: Spark, k: usize) -> UniquenessFlags {
    let kf = k as f64;
    // written multiplicatively so μ = 0 needs no special case
    UniquenessFlags {
        unique_by_mu: mu * (2.0 * kf - 1.0) < 1.0,
        unique_by_spark: spark.exceeds_twice(k),
        two_onb_cohbound: mu * kf < 1.0,
    }
}

/// Spark/rank conditions on the List-Sparse list size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ListSparseConditions {
    pub k: usize,
    pub list_size: usize,
    pub spark: Spark,
    pub rank: usize,
    /// `k < spark`: every list is finite.
    pub finite: bool,
    /// `k < spark` and `C(N, k) ≤ L`: every list has at most `L` entries.
    pub sufficient: bool,
    /// `k = N = rank` or `k < min(L, spark)`: required for lists of at most
    /// `L` entries.
    pub necessary: bool,
    /// `k = N = rank`: every list is a single solution.
    pub unique: bool,
    /// Every list has at most two entries.
    pub at_most_two: bool,
}

pub fn list_sparse_conditions(
    dict: &Dictionary,
    k: usize,
    list_size: usize,
    rank_tol: f64,
    budget: Budget,
) -> Result<ListSparseConditions> {
    let n = dict.n_atoms();
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("need 1 <= k <= N = {n}, got k = {k}")));
    }
    let sp = spark(dict, rank_tol, budget)?;
    let r = rank(dict, rank_tol);
    let finite = sp.exceeds(k);
    let unique = k == n && n == r;
    Ok(ListSparseConditions {
        k,
        list_size,
        spark: sp,
        rank: r,
        finite,
        sufficient: finite && binomial(n, k) <= list_size as u128,
        necessary: unique || (k < list_size && finite),
        unique,
        at_most_two: (finite && binomial(n, k) <= 2) || (k == 1 && r == 2 && sp == Spark::Finite(3)),
    })
}

/// Inputs a bound was evaluated at.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct BoundInputs {
    pub mu: Option<f64>,
    pub mu_k: Option<f64>,
    pub k: usize,
    pub eps: f64,
    pub gamma: Option<f64>,
    pub delta: Option<f64>,
    pub spark: Option<Spark>,
}

/// One bound checked against one measured list size.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub bound_name: String,
    pub target_index: usize,
    pub inputs: BoundInputs,
    pub precondition_holds: bool,
    pub bound_value: BoundValue,
    /// `L(A, b, k, ε, 1)`: largest set of pairwise-disjoint qualifying
    /// supports.
    pub measured: Option<usize>,
    pub violated: bool,
}

/// Names of the bounds [`verify_bounds`] checks.
pub const SPHERICAL: &str = "spherical";
pub const MU_K: &str = "mu-k";
pub const COHERENCE_K: &str = "coherence-k";
pub const AVERAGE_K1: &str = "average-k1";
pub const AVERAGE_K: &str = "average-k";

/// Checks every applicable `R = 1` bound against each target's measured list
/// size at one `ε`.
pub fn verify_bounds(
    dict: &Dictionary,
    targets: &[DVector<Complex64>],
    k: usize,
    eps: f64,
    opts: &SolveOptions,
) -> Result<Vec<BoundReport>> {
    verify_bounds_grid(dict, targets, k, &[eps], opts)
}

/// [`verify_bounds`] over several `ε`, sharing the invariants and support
/// enumeration. Reports are ordered by `ε`, then target, then bound.
pub fn verify_bounds_grid(
    dict: &Dictionary,
    targets: &[DVector<Complex64>],
    k: usize,
    eps_grid: &[f64],
    opts: &SolveOptions,
) -> Result<Vec<BoundReport>> {
    if targets.is_empty() {
        return Err(Error::InvalidArgument("at least one target is required".into()));
    }
    if k == 0 || k > dict.n_atoms() {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= k <= N = {}, got k = {k}",
            dict.n_atoms()
        )));
    }
    let mu = coherence(dict)?;
    let mu_k = if k == 1 {
        Some(mu)
    } else if 2 * k <= dict.n_atoms() {
        Some(generalized_coherence(dict, k, opts.rank_tol)?)
    } else {
        None
    };

    let mut tables = Vec::with_capacity(targets.len());
    for b in targets {
        dict.check_target(b)?;
        if b.norm() == 0.0 {
            return Err(Error::ZeroTarget);
        }
        tables.push(enumerate_supports(dict, b, 1..=k, opts)?);
    }

    let mut reports = Vec::new();
    for &eps in eps_grid {
        check_eps(eps)?;
        let mut bounds: Vec<(&str, BoundValue, BoundInputs)> = Vec::new();
        let base = BoundInputs {
            mu: Some(mu),
            k,
            eps,
            ..BoundInputs::default()
        };
        if k == 1 {
            bounds.push((SPHERICAL, spherical_list_bound(mu, eps)?, base));
            bounds.push((AVERAGE_K1, av_list_bound_k1(mu, eps)?, base));
        }
        if let Some(mu_k) = mu_k {
            bounds.push((MU_K, list_bound_mu_k(mu_k, eps)?, BoundInputs { mu_k: Some(mu_k), ..base }));
        }
        bounds.push((COHERENCE_K, list_bound_coherence(mu, k, eps)?, base));
        if k >= 2 {
            bounds.push((
                AVERAGE_K,
                av_list_bound(mu, k, eps, 0.0)?,
                BoundInputs { gamma: Some(0.0), ..base },
            ));
        }

        for (index, table) in tables.iter().enumerate() {
            let supports: Vec<_> = minimal_qualifying(table, eps + opts.abs_tol)
                .into_iter()
                .map(|e| e.support.clone())
                .collect();
            let measured = restricted_list_size(&supports, 1, opts.budget)?;
            for (name, value, inputs) in &bounds {
                let violated = match value.count() {
                    Some(limit) => measured as u64 > limit,
                    None => false,
                };
                reports.push(BoundReport {
                    bound_name: name.to_string(),
                    target_index: index,
                    inputs: *inputs,
                    precondition_holds: value.is_applicable(),
                    bound_value: *value,
                    measured: Some(measured),
                    violated,
                });
            }
        }
    }
    Ok(reports)
}
