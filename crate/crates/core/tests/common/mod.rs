#![allow(dead_code)]

use lsa_core::{Complex64, Dictionary};
use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Gaussian entries, columns normalized.
pub fn random_dictionary(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Dictionary {
    let a = DMatrix::from_fn(m, n, |_, _| {
        let x: f64 = StandardNormal.sample(rng);
        Complex64::new(x, 0.0)
    });
    Dictionary::new(a, true, 1e-10).unwrap()
}

pub fn random_unit(rng: &mut ChaCha8Rng, m: usize) -> DVector<Complex64> {
    let v = DVector::from_fn(m, |_, _| {
        let x: f64 = StandardNormal.sample(rng);
        Complex64::new(x, 0.0)
    });
    let n = v.norm();
    v.unscale(n)
}

/// Distance from `b` to the span of `cols`, by modified Gram–Schmidt.
pub fn gs_distance(dict: &Dictionary, cols: &[usize], b: &DVector<Complex64>) -> f64 {
    let mut basis: Vec<DVector<Complex64>> = Vec::new();
    for &j in cols {
        let mut v = dict.atom(j);
        for _ in 0..2 {
            for q in &basis {
                let c = q.dotc(&v);
                v -= q * c;
            }
        }
        let norm = v.norm();
        if norm > 1e-9 {
            basis.push(v.unscale(norm));
        }
    }
    let mut r = b.clone();
    for _ in 0..2 {
        for q in &basis {
            let c = q.dotc(&r);
            r -= q * c;
        }
    }
    r.norm()
}

/// All subsets of `0..n` with size `1..=k`, lexicographic within each size.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 1u64..(1 << n) {
        if (mask.count_ones() as usize) <= k {
            out.push((0..n).filter(|&i| mask >> i & 1 == 1).collect());
        }
    }
    out
}

pub fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}
