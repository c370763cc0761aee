//! Small dense helpers on top of nalgebra's complex SVD.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Numerical rank: singular values `σ_i > rank_tol · σ_max` are counted.
pub fn numerical_rank(mat: &DMatrix<Complex64>, rank_tol: f64) -> usize {
    if mat.is_empty() {
        return 0;
    }
    let sv = mat.singular_values();
    let smax = sv.max();
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rank_tol * smax).count()
}

/// True when the smallest singular value is below `rank_tol · σ_max`, or the
/// matrix has more columns than rows.
pub fn columns_dependent(mat: &DMatrix<Complex64>, rank_tol: f64) -> bool {
    numerical_rank(mat, rank_tol) < mat.ncols()
}

/// Orthonormal basis (as columns) of the column span, with rank decided by
/// `rank_tol`.
pub fn orthonormal_basis(mat: &DMatrix<Complex64>, rank_tol: f64) -> DMatrix<Complex64> {
    let m = mat.nrows();
    if mat.is_empty() {
        return DMatrix::zeros(m, 0);
    }
    let svd = mat.clone().svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let smax = svd.singular_values.max();
    let keep: Vec<usize> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|&(_, &s)| smax > 0.0 && s > rank_tol * smax)
        .map(|(i, _)| i)
        .collect();
    u.select_columns(&keep)
}

/// Minimum-norm least-squares solution of `mat · x ≈ b` and the numerical
/// rank of `mat`.
pub fn min_norm_least_squares(
    mat: &DMatrix<Complex64>,
    b: &DVector<Complex64>,
    rank_tol: f64,
) -> (DVector<Complex64>, usize) {
    let n = mat.ncols();
    if mat.is_empty() {
        return (DVector::zeros(n), 0);
    }
    let svd = mat.clone().svd(true, true);
    let u = svd.u.as_ref().expect("u requested");
    let v_t = svd.v_t.as_ref().expect("v_t requested");
    let smax = svd.singular_values.max();
    let mut x = DVector::zeros(n);
    let mut rank = 0;
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if smax == 0.0 || s <= rank_tol * smax {
            continue;
        }
        rank += 1;
        let coeff = u.column(i).dotc(b) / Complex64::new(s, 0.0);
        // v_i is the conjugate of row i of V^*
        for j in 0..n {
            x[j] += v_t[(i, j)].conj() * coeff;
        }
    }
    (x, rank)
}

/// Largest singular value, clamped into `[0, 1]` (callers pass products of
/// orthonormal bases).
pub fn top_singular_value_clamped(mat: &DMatrix<Complex64>) -> f64 {
    if mat.is_empty() {
        return 0.0;
    }
    mat.singular_values().max().clamp(0.0, 1.0)
}

/// Euclidean distance from `b` to the span of the orthonormal columns of `q`.
pub fn distance_to_span(q: &DMatrix<Complex64>, b: &DVector<Complex64>) -> f64 {
    if q.ncols() == 0 {
        return b.norm();
    }
    let proj = q * (q.adjoint() * b);
    (b - proj).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(rows: usize, cols: usize, data: &[f64]) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(rows, cols, data).map(|x| Complex64::new(x, 0.0))
    }

    #[test]
    fn rank_of_duplicated_columns() {
        let m = real(3, 2, &[1.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(numerical_rank(&m, 1e-10), 1);
        assert!(columns_dependent(&m, 1e-10));
    }

    #[test]
    fn wide_matrix_is_dependent() {
        let m = real(2, 3, &[1.0, 0.0, 1.0, 0.0, 1.0, 1.0]);
        assert_eq!(numerical_rank(&m, 1e-10), 2);
        assert!(columns_dependent(&m, 1e-10));
    }

    #[test]
    fn min_norm_solution_splits_duplicates() {
        let m = real(2, 2, &[1.0, 1.0, 0.0, 0.0]);
        let b = DVector::from_vec(vec![Complex64::new(2.0, 0.0), Complex64::new(0.0, 0.0)]);
        let (x, rank) = min_norm_least_squares(&m, &b, 1e-10);
        assert_eq!(rank, 1);
        assert!((x[0].re - 1.0).abs() < 1e-12 && (x[1].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn basis_is_orthonormal() {
        let m = real(3, 2, &[1.0, 1.0, 0.0, 1.0, 0.0, 0.0]);
        let q = orthonormal_basis(&m, 1e-10);
        let g = q.adjoint() * &q;
        assert!((g - DMatrix::identity(2, 2)).norm() < 1e-12);
        let b = DVector::from_vec(vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(3.0, 0.0),
        ]);
        assert!((distance_to_span(&q, &b) - 3.0).abs() < 1e-12);
    }
}
