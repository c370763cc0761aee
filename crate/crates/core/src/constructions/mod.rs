//! Deterministic generators for worst-case dictionaries and targets.
//!
//! Every generator returns a [`ConstructionBundle`]: the dictionary, the
//! target vectors, any claimed exact solutions, and the invariants the
//! construction predicts. The predictions are checkable with
//! [`crate::invariants`] and [`crate::solvers`].

mod fourier;
mod kerdock;

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::invariants::Spark;
use crate::subsets::binomial;
use crate::{Dictionary, Error, Result, SupportSet, DEFAULT_COLUMN_NORM_TOL};

pub use fourier::{picket_fence, shifted_picket_solutions, spikes_and_sines, unitary_dft};
pub use kerdock::{
    expansion_sparsities, kerdock_dictionary, kerdock_multi_solutions, kerdock_solution_iter, GaloisField, KerdockSet,
};

/// Entries with modulus at or below this count as zero when reading off a
/// coefficient vector's support.
pub const SUPPORT_TOL: f64 = 1e-10;

/// A labelled vector in `C^m` meant to be approximated.
#[derive(Debug, Clone, PartialEq)]
pub struct Target {
    pub label: String,
    pub vector: DVector<Complex64>,
}

/// A labelled coefficient vector in `C^N` (kernel vectors, basis expansions).
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector {
    pub label: String,
    pub coefficients: DVector<Complex64>,
}

impl CoefficientVector {
    pub fn support(&self) -> SupportSet {
        support_of(&self.coefficients, SUPPORT_TOL)
    }
}

/// A coefficient vector claimed to satisfy `A x = b` exactly for the target
/// with label `target`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactSolution {
    pub target: String,
    pub coefficients: DVector<Complex64>,
}

impl ExactSolution {
    pub fn support(&self) -> SupportSet {
        support_of(&self.coefficients, SUPPORT_TOL)
    }
}

/// Invariants a construction predicts for itself.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Predicted {
    pub coherence: Option<f64>,
    pub spark: Option<Spark>,
    pub rank: Option<usize>,
    /// `k → μ_k`.
    pub generalized_coherence: BTreeMap<usize, f64>,
    /// Number of qualifying supports / exact solutions for the main target.
    pub solution_count: Option<u128>,
    /// Lower bound on the number of pairwise-disjoint qualifying supports.
    pub min_disjoint_solutions: Option<usize>,
    /// Inclusive range of solution sparsities.
    pub sparsity_range: Option<(usize, usize)>,
    /// Number of solutions each participating atom belongs to.
    pub per_atom_multiplicity: Option<u128>,
}

#[derive(Debug, Clone)]
pub struct ConstructionBundle {
    pub name: String,
    /// Generator inputs (`m`, `k`, `eps`, `c`, `d`, `s` as applicable).
    pub parameters: BTreeMap<String, f64>,
    pub dictionary: Dictionary,
    pub targets: Vec<Target>,
    pub coefficient_vectors: Vec<CoefficientVector>,
    pub solutions: Vec<ExactSolution>,
    pub predicted: Predicted,
}

impl ConstructionBundle {
    fn new(name: &str, dictionary: Dictionary) -> Self {
        Self {
            name: name.to_string(),
            parameters: BTreeMap::new(),
            dictionary,
            targets: Vec::new(),
            coefficient_vectors: Vec::new(),
            solutions: Vec::new(),
            predicted: Predicted::default(),
        }
    }

    fn param(mut self, key: &str, value: f64) -> Self {
        self.parameters.insert(key.to_string(), value);
        self
    }

    pub fn target(&self, label: &str) -> Option<&Target> {
        self.targets.iter().find(|t| t.label == label)
    }

    pub fn coefficient_vector(&self, label: &str) -> Option<&CoefficientVector> {
        self.coefficient_vectors.iter().find(|v| v.label == label)
    }

    /// `‖A x − b‖₂` for a claimed exact solution.
    pub fn solution_residual(&self, solution: &ExactSolution) -> Result<f64> {
        let target = self
            .target(&solution.target)
            .ok_or_else(|| Error::InvalidArgument(format!("no target {:?}", solution.target)))?;
        Ok((self.dictionary.apply(&solution.coefficients) - &target.vector).norm())
    }
}

/// Indices of entries with modulus above `tol`.
pub fn support_of(x: &DVector<Complex64>, tol: f64) -> SupportSet {
    SupportSet::from_unsorted(
        x.iter()
            .enumerate()
            .filter(|(_, z)| z.norm() > tol)
            .map(|(j, _)| j)
            .collect(),
    )
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn real_dictionary(m: usize, n: usize, f: impl Fn(usize, usize) -> f64) -> Result<Dictionary> {
    Dictionary::new(DMatrix::from_fn(m, n, |i, j| re(f(i, j))), false, DEFAULT_COLUMN_NORM_TOL)
}

/// `m × m` identity with a target that has `C(m−1, k−1)` size-`k` supports
/// within `eps`, all of them containing atom 0.
///
/// `b_0² = 1 − (m−1)ε²/(m−k)` and `b_i² = ε²/(m−k)` for `i ≥ 1`. Every
/// size-`k` support containing atom 0 leaves residual exactly `ε`, so the
/// solver needs its absolute tolerance to count them.
pub fn identity_bad_b(m: usize, k: usize, eps: f64) -> Result<ConstructionBundle> {
    if k == 0 || k >= m {
        return Err(Error::ParameterOutOfRange(format!("need 1 <= k < m, got k = {k}, m = {m}")));
    }
    let max = ((m - k) as f64 / m as f64).sqrt();
    if !(eps > 0.0 && eps < max) {
        return Err(Error::EpsOutOfRange { eps, max });
    }
    let tail = eps * eps / (m - k) as f64;
    let head = 1.0 - (m - 1) as f64 * tail;
    let b: Vec<f64> = (0..m).map(|i| if i == 0 { head.sqrt() } else { tail.sqrt() }).collect();

    let dict = real_dictionary(m, m, |i, j| if i == j { 1.0 } else { 0.0 })?;
    let mut bundle = ConstructionBundle::new("identity-bad-b", dict)
        .param("m", m as f64)
        .param("k", k as f64)
        .param("eps", eps);
    bundle.targets.push(Target {
        label: "b".into(),
        vector: crate::dictionary::real_vector(&b),
    });
    bundle.predicted = Predicted {
        coherence: Some(0.0),
        spark: Some(Spark::Infinite),
        rank: Some(m),
        solution_count: Some(binomial(m - 1, k - 1)),
        min_disjoint_solutions: Some(1),
        ..Predicted::default()
    };
    Ok(bundle)
}

/// The `m × m` dictionary `A*` with target `e_0`: atom 0 is the normalized
/// all-ones vector on coordinates `1..m`, atom `i ≥ 1` is
/// `(e_0 + ε√k e_i)/√(1+ε²k)`.
///
/// Any `k` atoms from `1..m` approximate `e_0` within `ε`, giving at least
/// `⌊(m−1)/k⌋` pairwise-disjoint qualifying supports while atom 0 is
/// orthogonal to the target.
pub fn tight_example(m: usize, k: usize, eps: f64) -> Result<ConstructionBundle> {
    if k == 0 || m < k + 2 {
        return Err(Error::DimensionTooSmall(format!("need m >= k + 2 and k >= 1, got m = {m}, k = {k}")));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::ParameterOutOfRange(format!("eps must be positive, got {eps}")));
    }
    let scale = (1.0 + eps * eps * k as f64).sqrt();
    let tail = 1.0 / ((m - 1) as f64).sqrt();
    let dict = real_dictionary(m, m, |i, j| match (i, j) {
        (0, 0) => 0.0,
        (_, 0) => tail,
        (0, _) => 1.0 / scale,
        (i, j) if i == j => eps * (k as f64).sqrt() / scale,
        _ => 0.0,
    })?;
    let mut e0 = vec![0.0; m];
    e0[0] = 1.0;
    let mut bundle = ConstructionBundle::new("tight-example", dict)
        .param("m", m as f64)
        .param("k", k as f64)
        .param("eps", eps);
    bundle.targets.push(Target {
        label: "b".into(),
        vector: crate::dictionary::real_vector(&e0),
    });
    // pairs among atoms 1.. give 1/(1+ε²k); pairs with atom 0 give the second term
    let among = 1.0 / (scale * scale);
    let with_first = eps * (k as f64).sqrt() * tail / scale;
    bundle.predicted = Predicted {
        coherence: Some(among.max(with_first)),
        rank: Some(m),
        min_disjoint_solutions: Some((m - 1) / k),
        ..Predicted::default()
    };
    Ok(bundle)
}

/// `2k × 2k` dictionary `[A' A'']` whose generalized coherence meets the
/// `kμ/(1−(k−1)μ)` upper bound.
///
/// `A' = [(c+1)I − J ; J]/√(c²+2k−1)` and `A'' = [J ; (c+1)I − J]/√(c²+2k−1)`;
/// every pair of atoms has `|⟨·,·⟩| = 2(c−k+1)/(c²+2k−1)`.
pub fn mu_k_tight(k: usize, c: f64) -> Result<ConstructionBundle> {
    if k < 2 || !(c >= (2 * k - 1) as f64) || !c.is_finite() {
        return Err(Error::ParameterOutOfRange(format!("need k >= 2 and c >= 2k - 1, got k = {k}, c = {c}")));
    }
    let kf = k as f64;
    let denom = (c * c + 2.0 * kf - 1.0).sqrt();
    let block = |i: usize, j: usize| (if i == j { c + 1.0 } else { 0.0 }) - 1.0;
    let dict = real_dictionary(2 * k, 2 * k, |i, j| {
        let value = match (i < k, j < k) {
            (true, true) => block(i, j),
            (false, true) => 1.0,
            (true, false) => 1.0,
            (false, false) => block(i - k, j - k),
        };
        value / denom
    })?;
    let mu = 2.0 * (c - kf + 1.0) / (c * c + 2.0 * kf - 1.0);
    let mu_k = (kf * mu / (1.0 - (kf - 1.0) * mu)).min(1.0);
    let mut bundle = ConstructionBundle::new("mu-k-tight", dict)
        .param("k", kf)
        .param("c", c);
    bundle.predicted.coherence = Some(mu);
    bundle.predicted.generalized_coherence.insert(1, mu);
    bundle.predicted.generalized_coherence.insert(k, mu_k);
    Ok(bundle)
}

/// `2 × N` dictionary of unit vectors at angles `jπ/N`; rank 2, spark 3.
///
/// Targets: `bisector` halfway between atoms 0 and 1.
pub fn equiangular_lines_2d(n: usize) -> Result<ConstructionBundle> {
    if n < 3 {
        return Err(Error::ParameterOutOfRange(format!("need N >= 3, got {n}")));
    }
    let angle = |j: usize| j as f64 * std::f64::consts::PI / n as f64;
    let dict = real_dictionary(2, n, |i, j| if i == 0 { angle(j).cos() } else { angle(j).sin() })?;
    let half = angle(1) / 2.0;
    let mut bundle = ConstructionBundle::new("equiangular-2d", dict).param("n", n as f64);
    bundle.targets.push(Target {
        label: "bisector".into(),
        vector: crate::dictionary::real_vector(&[half.cos(), half.sin()]),
    });
    bundle.predicted = Predicted {
        coherence: Some(angle(1).cos().abs().max(angle(n - 1).cos().abs())),
        spark: Some(Spark::Finite(3)),
        rank: Some(2),
        ..Predicted::default()
    };
    Ok(bundle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::{coherence, generalized_coherence, rank, spark};
    use crate::{Budget, DEFAULT_RANK_TOL};

    #[test]
    fn identity_bad_b_values() {
        let b = identity_bad_b(5, 2, 0.5).unwrap();
        let v = &b.targets[0].vector;
        assert!((v[0].re - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        for i in 1..5 {
            assert!((v[i].re - (1.0f64 / 12.0).sqrt()).abs() < 1e-15);
        }
        assert!((v.norm() - 1.0).abs() < 1e-14);
        assert_eq!(b.predicted.solution_count, Some(4));
        assert_eq!(identity_bad_b(2, 1, 0.1).unwrap().predicted.solution_count, Some(1));
        assert!(matches!(identity_bad_b(5, 2, 0.9), Err(Error::EpsOutOfRange { .. })));
    }

    #[test]
    fn tight_example_coherence() {
        let b = tight_example(5, 1, 0.5).unwrap();
        let mu = coherence(&b.dictionary).unwrap();
        assert!((mu - 0.8).abs() < 1e-12);
        assert!((b.predicted.coherence.unwrap() - mu).abs() < 1e-12);
        // atom 0 is orthogonal to e_0
        assert!(b.dictionary.matrix()[(0, 0)].norm() == 0.0);
        assert!(matches!(tight_example(3, 2, 0.5), Err(Error::DimensionTooSmall(_))));
    }

    #[test]
    fn mu_k_tight_small_case() {
        let b = mu_k_tight(2, 3.0).unwrap();
        let mu = coherence(&b.dictionary).unwrap();
        assert!((mu - 1.0 / 3.0).abs() < 1e-12);
        let mu2 = generalized_coherence(&b.dictionary, 2, DEFAULT_RANK_TOL).unwrap();
        assert!((mu2 - 1.0).abs() < 1e-9);
        assert!(matches!(mu_k_tight(2, 2.5), Err(Error::ParameterOutOfRange(_))));
    }

    #[test]
    fn mu_k_tight_large_c() {
        let c = 100.0;
        let b = mu_k_tight(2, c).unwrap();
        let mu = coherence(&b.dictionary).unwrap();
        assert!((mu - 2.0 * (c - 1.0) / (c * c + 3.0)).abs() < 1e-12);
        let mu2 = generalized_coherence(&b.dictionary, 2, DEFAULT_RANK_TOL).unwrap();
        assert!((mu2 - b.predicted.generalized_coherence[&2]).abs() < 1e-9);
        assert!((mu2 / mu - 2.0).abs() < 0.05);
    }

    #[test]
    fn equiangular_fixture() {
        for n in [3, 4] {
            let b = equiangular_lines_2d(n).unwrap();
            assert_eq!(rank(&b.dictionary, DEFAULT_RANK_TOL), 2);
            assert_eq!(
                spark(&b.dictionary, DEFAULT_RANK_TOL, Budget::unlimited()).unwrap(),
                Spark::Finite(3)
            );
        }
        let b = equiangular_lines_2d(3).unwrap();
        assert!((coherence(&b.dictionary).unwrap() - 0.5).abs() < 1e-12);
    }
}
