//! Mutually unbiased bases from a Kerdock set of binary symmetric matrices.
//!
//! The Kerdock set is realized as the trace forms `M_a[i][j] = Tr(a·e_i·e_j)`
//! over `GF(2^m)`, `a` ranging over the field. `M_a − M_b = M_{a+b}` is
//! nonsingular for `a ≠ b` because the trace form is nondegenerate; the
//! construction still checks every pair explicitly. Block `a` of the
//! dictionary is `diag(i^{xᵀ M_a x}) · H` with `H` the normalized
//! Walsh–Hadamard matrix, so block 0 is `H` itself.
//!
//! The field basis puts the subfield `GF(2^{m/2})` on the high coordinates,
//! which is where the picket fence `𝟙 ⊗ e_1` lives. That makes as many
//! blocks as possible (`2^{m/2}` of them) expand the picket fence with only
//! `√n` coefficients; the remaining blocks need more.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{support_of, CoefficientVector, ConstructionBundle, ExactSolution, Predicted, Target, SUPPORT_TOL};
use crate::subsets::{binomial, Combinations};
use crate::{Dictionary, Error, Result, SupportSet, DEFAULT_COLUMN_NORM_TOL};

/// Solutions are materialized in the bundle only up to this many.
const MAX_MATERIALIZED_SOLUTIONS: u128 = 100_000;

/// `GF(2^m)` with elements as bit patterns in the polynomial basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GaloisField {
    m: u32,
    modulus: u32,
}

impl GaloisField {
    /// Field with a fixed primitive polynomial; `m ∈ {2, 4, 6}`.
    pub fn new(m: u32) -> Result<Self> {
        let modulus = match m {
            2 => 0b111,       // x² + x + 1
            4 => 0b1_0011,    // x⁴ + x + 1
            6 => 0b100_0011,  // x⁶ + x + 1
            _ => {
                return Err(Error::ParameterOutOfRange(format!(
                    "no primitive polynomial tabulated for m = {m} (supported: 2, 4, 6)"
                )))
            }
        };
        Ok(Self { m, modulus })
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u32 {
        1 << self.m
    }

    pub fn mul(&self, mut a: u32, mut b: u32) -> u32 {
        let mut r = 0;
        while b != 0 {
            if b & 1 == 1 {
                r ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a & (1 << self.m) != 0 {
                a ^= self.modulus;
            }
        }
        r
    }

    pub fn pow(&self, a: u32, mut e: u32) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Absolute trace `x + x² + … + x^{2^{m−1}}`, which lies in `{0, 1}`.
    pub fn trace(&self, x: u32) -> u32 {
        let mut acc = 0;
        let mut y = x;
        for _ in 0..self.m {
            acc ^= y;
            y = self.mul(y, y);
        }
        debug_assert!(acc <= 1);
        acc
    }
}

/// Rank over GF(2) of bit-packed rows.
fn gf2_rank(mut rows: Vec<u32>) -> usize {
    let mut rank = 0;
    for bit in (0..32).rev() {
        let mask = 1u32 << bit;
        if let Some(p) = (rank..rows.len()).find(|&i| rows[i] & mask != 0) {
            rows.swap(rank, p);
            for i in 0..rows.len() {
                if i != rank && rows[i] & mask != 0 {
                    rows[i] ^= rows[rank];
                }
            }
            rank += 1;
        }
    }
    rank
}

/// A Kerdock set `{M_a}` with the field basis it is written in.
#[derive(Debug, Clone)]
pub struct KerdockSet {
    pub field: GaloisField,
    /// `basis[i]` is the field element for coordinate `i`.
    pub basis: Vec<u32>,
    /// `matrices[a][i]` is row `i` of `M_a`, bit `j` holding entry `(i, j)`.
    pub matrices: Vec<Vec<u32>>,
}

impl KerdockSet {
    pub fn new(m: u32) -> Result<Self> {
        if m == 0 || m % 2 == 1 {
            return Err(Error::OddDimension(m));
        }
        let field = GaloisField::new(m)?;
        let basis = subfield_aligned_basis(&field);
        let size = m as usize;
        let matrices = (0..field.order())
            .map(|a| {
                (0..size)
                    .map(|i| {
                        (0..size).fold(0u32, |row, j| {
                            let t = field.trace(field.mul(a, field.mul(basis[i], basis[j])));
                            row | (t << j)
                        })
                    })
                    .collect()
            })
            .collect();
        let set = Self { field, basis, matrices };
        set.check()?;
        Ok(set)
    }

    /// Every matrix symmetric and every pairwise difference nonsingular.
    pub fn check(&self) -> Result<()> {
        let size = self.field.degree() as usize;
        for (a, mat) in self.matrices.iter().enumerate() {
            for i in 0..size {
                for j in 0..size {
                    if (mat[i] >> j & 1) != (mat[j] >> i & 1) {
                        return Err(Error::KerdockSetInvalid(format!("M_{a} is not symmetric")));
                    }
                }
            }
        }
        for a in 0..self.matrices.len() {
            for b in a + 1..self.matrices.len() {
                let diff: Vec<u32> = (0..size).map(|i| self.matrices[a][i] ^ self.matrices[b][i]).collect();
                if gf2_rank(diff) != size {
                    return Err(Error::KerdockSetInvalid(format!("M_{a} - M_{b} is singular")));
                }
            }
        }
        Ok(())
    }

    /// `xᵀ M_a x mod 4`, with `x` given by the bits of `point`.
    pub fn quadratic_form(&self, a: usize, point: usize) -> u32 {
        let size = self.field.degree() as usize;
        let mut acc = 0u32;
        for i in 0..size {
            if point >> i & 1 == 0 {
                continue;
            }
            for j in 0..size {
                if point >> j & 1 == 1 {
                    acc += self.matrices[a][i] >> j & 1;
                }
            }
        }
        acc % 4
    }
}

/// Basis with the subfield `GF(2^{m/2})` spanning the high coordinates.
fn subfield_aligned_basis(field: &GaloisField) -> Vec<u32> {
    let m = field.degree();
    let h = m / 2;
    let alpha = 0b10;
    let beta = field.pow(alpha, (field.order() - 1) / ((1 << h) - 1));
    let high: Vec<u32> = (0..h).map(|i| field.pow(beta, i)).collect();
    let mut low = Vec::new();
    let mut e = 1;
    while low.len() < (m - h) as usize {
        let candidate = field.pow(alpha, e);
        let mut rows: Vec<u32> = low.iter().chain(high.iter()).copied().collect();
        rows.push(candidate);
        if gf2_rank(rows.clone()) == rows.len() {
            low.push(candidate);
        }
        e += 1;
    }
    low.into_iter().chain(high).collect()
}

fn walsh_hadamard(n: usize) -> DMatrix<f64> {
    let scale = 1.0 / (n as f64).sqrt();
    DMatrix::from_fn(n, n, |x, v| if (x & v).count_ones() % 2 == 0 { scale } else { -scale })
}

fn i_pow(e: u32) -> Complex64 {
    match e % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

struct KerdockParts {
    n: usize,
    dict: Dictionary,
    picket: DVector<Complex64>,
    expansions: Vec<DVector<Complex64>>,
    coherence: f64,
}

fn build(m: u32) -> Result<KerdockParts> {
    let set = KerdockSet::new(m)?;
    let n = 1usize << m;
    let h = walsh_hadamard(n);
    let mut a = DMatrix::zeros(n, n * n);
    for block in 0..n {
        for x in 0..n {
            let phase = i_pow(set.quadratic_form(block, x));
            for v in 0..n {
                a[(x, block * n + v)] = phase * h[(x, v)];
            }
        }
    }

    // validate: unitary blocks, mutually unbiased pairs
    let target = 1.0 / (n as f64).sqrt();
    let mut coherence = 0.0f64;
    let blocks: Vec<DMatrix<Complex64>> = (0..n).map(|b| a.columns(b * n, n).into_owned()).collect();
    for (p, bp) in blocks.iter().enumerate() {
        let gram = bp.adjoint() * bp;
        let dev = (gram - DMatrix::<Complex64>::identity(n, n)).camax();
        if dev > 1e-10 {
            return Err(Error::KerdockSetInvalid(format!("block {p} deviates from unitary by {dev:e}")));
        }
        for bq in &blocks[p + 1..] {
            let cross = bp.adjoint() * bq;
            for z in cross.iter() {
                let dev = (z.norm() - target).abs();
                if dev > 1e-12 {
                    return Err(Error::KerdockSetInvalid(format!(
                        "block {p} is not unbiased with a later block (deviation {dev:e})"
                    )));
                }
                coherence = coherence.max(z.norm());
            }
        }
    }

    let root = 1usize << (m / 2);
    let picket = super::fourier::picket_fence(n, root, 0);
    let expansions = blocks
        .iter()
        .enumerate()
        .map(|(b, bp)| {
            let local = bp.adjoint() * &picket;
            let mut x = DVector::zeros(n * n);
            x.rows_mut(b * n, n).copy_from(&local);
            x
        })
        .collect();
    let dict = Dictionary::new(a, false, DEFAULT_COLUMN_NORM_TOL)?;
    Ok(KerdockParts {
        n,
        dict,
        picket,
        expansions,
        coherence,
    })
}

/// `n × n²` union of `n = 2^m` mutually unbiased bases.
///
/// Target `z` is the (unnormalized) picket fence `𝟙 ⊗ e_1`; coefficient
/// vectors `x_i` hold its expansion in basis block `i`, placed at that
/// block's columns. The prediction records the `√n` sparsity claimed for
/// every `x_i`; only `2^{m/2}` blocks achieve it.
pub fn kerdock_dictionary(m: u32) -> Result<ConstructionBundle> {
    let parts = build(m)?;
    let n = parts.n;
    let mut bundle = ConstructionBundle::new("kerdock", parts.dict)
        .param("m", m as f64)
        .param("n", n as f64);
    bundle.targets.push(Target {
        label: "z".into(),
        vector: parts.picket,
    });
    for (i, x) in parts.expansions.into_iter().enumerate() {
        bundle.coefficient_vectors.push(CoefficientVector {
            label: format!("x_{i}"),
            coefficients: x,
        });
    }
    let root = 1usize << (m / 2);
    bundle.predicted = Predicted {
        coherence: Some(parts.coherence),
        rank: Some(n),
        sparsity_range: Some((root, root)),
        ..Predicted::default()
    };
    Ok(bundle)
}

/// Target `b = s·z` with one exact solution `x_S = Σ_{i∈S} x_i` per `s`-subset
/// `S` of the `n` basis blocks.
///
/// Solutions are materialized (label `b`) when there are at most 100 000 of
/// them; [`kerdock_solution_iter`] enumerates them lazily either way.
pub fn kerdock_multi_solutions(m: u32, s: usize) -> Result<ConstructionBundle> {
    let mut bundle = kerdock_dictionary(m)?;
    let n = 1usize << m;
    if s == 0 || s > n {
        return Err(Error::SOutOfRange { s, n });
    }
    bundle.name = "kerdock-solutions".into();
    bundle.parameters.insert("s".into(), s as f64);
    let z = bundle.targets[0].vector.clone();
    bundle.targets.push(Target {
        label: "b".into(),
        vector: z * Complex64::new(s as f64, 0.0),
    });
    let count = binomial(n, s);
    if count <= MAX_MATERIALIZED_SOLUTIONS {
        let basis: Vec<DVector<Complex64>> =
            bundle.coefficient_vectors.iter().map(|v| v.coefficients.clone()).collect();
        bundle.solutions = kerdock_solution_iter(&basis, s)
            .map(|(_, x)| ExactSolution {
                target: "b".into(),
                coefficients: x,
            })
            .collect();
    }
    let root = 1usize << (m / 2);
    bundle.predicted.solution_count = Some(count);
    bundle.predicted.per_atom_multiplicity = Some(binomial(n - 1, s - 1));
    bundle.predicted.sparsity_range = Some((s * root, s * root));
    Ok(bundle)
}

/// Lazily yields `(S, x_S)` for every `s`-subset `S` of the block expansions.
pub fn kerdock_solution_iter(
    expansions: &[DVector<Complex64>],
    s: usize,
) -> impl Iterator<Item = (SupportSet, DVector<Complex64>)> + '_ {
    Combinations::new(expansions.len(), s).map(move |blocks| {
        let len = expansions[0].len();
        let x = blocks
            .iter()
            .fold(DVector::zeros(len), |acc, &b| acc + &expansions[b]);
        (SupportSet::from_unsorted(blocks), x)
    })
}

/// Support sizes of the per-block picket expansions.
pub fn expansion_sparsities(bundle: &ConstructionBundle) -> Vec<usize> {
    bundle
        .coefficient_vectors
        .iter()
        .map(|v| support_of(&v.coefficients, SUPPORT_TOL).len())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_arithmetic() {
        let f = GaloisField::new(4).unwrap();
        // α^15 = 1 for a primitive element of GF(16)
        assert_eq!(f.pow(2, 15), 1);
        assert!((1..15).all(|e| f.pow(2, e) != 1));
        assert_eq!(f.trace(0), 0);
        assert_eq!(f.trace(1), 0); // m even
        let ones = (0..16).filter(|&x| f.trace(x) == 1).count();
        assert_eq!(ones, 8);
    }

    #[test]
    fn kerdock_set_checks_pass() {
        for m in [2, 4, 6] {
            let set = KerdockSet::new(m).unwrap();
            assert_eq!(set.matrices.len(), 1 << m);
            assert!(set.matrices[0].iter().all(|&r| r == 0));
        }
        assert_eq!(KerdockSet::new(3).unwrap_err(), Error::OddDimension(3));
    }

    #[test]
    fn corrupted_set_is_rejected() {
        let mut set = KerdockSet::new(4).unwrap();
        set.matrices[3] = set.matrices[5].clone();
        assert!(matches!(set.check(), Err(Error::KerdockSetInvalid(_))));
    }

    #[test]
    fn first_block_is_walsh_hadamard() {
        let b = kerdock_dictionary(2).unwrap();
        let h = walsh_hadamard(4);
        for x in 0..4 {
            for v in 0..4 {
                assert_eq!(b.dictionary.matrix()[(x, v)], Complex64::new(h[(x, v)], 0.0));
            }
        }
    }

    #[test]
    fn m4_coherence_and_sparse_blocks() {
        let b = kerdock_dictionary(4).unwrap();
        assert_eq!((b.dictionary.m(), b.dictionary.n_atoms()), (16, 256));
        assert!((b.predicted.coherence.unwrap() - 0.25).abs() < 1e-12);
        let sparsities = expansion_sparsities(&b);
        assert_eq!(sparsities.iter().filter(|&&s| s == 4).count(), 4);
        assert!(sparsities.iter().all(|&s| s >= 4));
    }
}
