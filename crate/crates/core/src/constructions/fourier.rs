//! Spikes-and-sines dictionary `[F, I]` and its shifted picket-fence
//! multi-solution target.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{support_of, CoefficientVector, ConstructionBundle, ExactSolution, Predicted, Target, SUPPORT_TOL};
use crate::invariants::Spark;
use crate::{Dictionary, Error, Result, DEFAULT_COLUMN_NORM_TOL};

/// Largest `k` for which all `2^k` picket solutions are materialized.
const MAX_MATERIALIZED_SHIFTS: usize = 12;

/// Unitary DFT matrix, `F[t][s] = e^{−2πi ts/n} / √n`.
pub fn unitary_dft(n: usize) -> DMatrix<Complex64> {
    let scale = 1.0 / (n as f64).sqrt();
    DMatrix::from_fn(n, n, |t, s| {
        let phase = -2.0 * std::f64::consts::PI * ((t * s) % n) as f64 / n as f64;
        Complex64::from_polar(scale, phase)
    })
}

/// `𝟙 ⊗ e_1` of length `n`, shifted circularly by `shift`: ones at positions
/// `shift + j·spacing`.
pub fn picket_fence(n: usize, spacing: usize, shift: usize) -> DVector<Complex64> {
    DVector::from_fn(n, |t, _| {
        if (t + n - shift % n) % spacing == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

fn sizes(d: u32) -> Result<(usize, usize)> {
    if d == 0 || d > 6 {
        return Err(Error::ParameterOutOfRange(format!("need 1 <= d <= 6, got {d}")));
    }
    let k = 1usize << d;
    Ok((k * k, k))
}

/// Kernel vector `z = [v; −F v]` for the shifted picket `v`.
fn kernel(f: &DMatrix<Complex64>, n: usize, k: usize, shift: usize) -> DVector<Complex64> {
    let v = picket_fence(n, k, shift);
    let fv = f * &v;
    let mut z = DVector::zeros(2 * n);
    z.rows_mut(0, n).copy_from(&v);
    z.rows_mut(n, n).copy_from(&(-fv));
    z
}

fn dictionary(n: usize) -> Result<(Dictionary, DMatrix<Complex64>)> {
    let f = unitary_dft(n);
    let mut a = DMatrix::zeros(n, 2 * n);
    a.columns_mut(0, n).copy_from(&f);
    a.columns_mut(n, n).fill_with_identity();
    Ok((Dictionary::new(a, false, DEFAULT_COLUMN_NORM_TOL)?, f))
}

/// `n × 2n` dictionary `[F, I]` with `n = 4^d`.
///
/// The bundle carries the kernel vector `z = [v; −F v]` (label `kernel`) where
/// `v` is the picket fence with spacing `√n`, and the normalized picket fence
/// itself as target `picket` (it has `√n` nonzeros in both bases).
/// `d = 1` is accepted for small tests.
pub fn spikes_and_sines(d: u32) -> Result<ConstructionBundle> {
    let (n, k) = sizes(d)?;
    let (dict, f) = dictionary(n)?;
    let z = kernel(&f, n, k, 0);
    let picket = picket_fence(n, k, 0);
    let norm = picket.norm();

    let mut bundle = ConstructionBundle::new("spikes-sines", dict)
        .param("d", d as f64)
        .param("n", n as f64)
        .param("k", k as f64);
    bundle.coefficient_vectors.push(CoefficientVector {
        label: "kernel".into(),
        coefficients: z,
    });
    bundle.targets.push(Target {
        label: "picket".into(),
        vector: picket.unscale(norm),
    });
    bundle.predicted = Predicted {
        coherence: Some(1.0 / (n as f64).sqrt()),
        spark: Some(Spark::Finite(2 * k)),
        rank: Some(n),
        ..Predicted::default()
    };
    Ok(bundle)
}

/// Target with `2^k` exact representations on `[F, I]`, `k = 2^d`.
///
/// For each circular shift `i < k` the kernel vector `z⁽ⁱ⁾` is split into
/// `x₁⁽ⁱ⁾ = z⁽ⁱ⁾|_Ω` and `x₂⁽ⁱ⁾ = x₁⁽ⁱ⁾ − z⁽ⁱ⁾`, where `Ω` is the
/// lexicographically first `k`-subset of `supp z⁽ⁱ⁾` with exactly `k/2`
/// indices inside the shifted picket block (the first `n` coordinates). The
/// target is `b = A Σᵢ x₁⁽ⁱ⁾`; every choice `c ∈ {0,1}^k` of one half per shift
/// gives a solution `y_c` (label `b`). Bit `i` of the solution index selects
/// `x₁⁽ⁱ⁾` when set.
pub fn shifted_picket_solutions(d: u32) -> Result<ConstructionBundle> {
    if d == 0 {
        return Err(Error::OddSplit(d));
    }
    let (n, k) = sizes(d)?;
    let (dict, f) = dictionary(n)?;

    let mut halves = Vec::with_capacity(k);
    for shift in 0..k {
        let z = kernel(&f, n, k, shift);
        let support = support_of(&z, SUPPORT_TOL);
        let (spike_part, fourier_part): (Vec<usize>, Vec<usize>) =
            support.iter().partition(|&&j| j < n);
        let omega: Vec<usize> = spike_part
            .iter()
            .take(k / 2)
            .chain(fourier_part.iter().take(k / 2))
            .copied()
            .collect();
        let mut x1 = DVector::zeros(2 * n);
        for &j in &omega {
            x1[j] = z[j];
        }
        let x2 = &x1 - &z;
        halves.push((x1, x2));
    }

    let x: DVector<Complex64> = halves.iter().fold(DVector::zeros(2 * n), |acc, (x1, _)| acc + x1);
    let b = dict.apply(&x);

    let mut bundle = ConstructionBundle::new("picket-solutions", dict)
        .param("d", d as f64)
        .param("n", n as f64)
        .param("k", k as f64);
    for (i, (x1, x2)) in halves.iter().enumerate() {
        bundle.coefficient_vectors.push(CoefficientVector {
            label: format!("x1_{i}"),
            coefficients: x1.clone(),
        });
        bundle.coefficient_vectors.push(CoefficientVector {
            label: format!("x2_{i}"),
            coefficients: x2.clone(),
        });
    }
    bundle.targets.push(Target {
        label: "b".into(),
        vector: b,
    });
    if k <= MAX_MATERIALIZED_SHIFTS {
        for code in 0..(1usize << k) {
            bundle.solutions.push(ExactSolution {
                target: "b".into(),
                coefficients: picket_solution(&halves, code),
            });
        }
    }
    bundle.predicted = Predicted {
        coherence: Some(1.0 / (n as f64).sqrt()),
        solution_count: Some(1u128 << k),
        sparsity_range: Some((k * k / 2, k * k)),
        ..Predicted::default()
    };
    Ok(bundle)
}

fn picket_solution(halves: &[(DVector<Complex64>, DVector<Complex64>)], code: usize) -> DVector<Complex64> {
    let len = halves[0].0.len();
    halves
        .iter()
        .enumerate()
        .fold(DVector::zeros(len), |acc, (i, (x1, x2))| {
            if code >> i & 1 == 1 {
                acc + x1
            } else {
                acc + x2
            }
        })
}
