use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result, DEFAULT_COLUMN_NORM_TOL};

/// An `m × N` complex matrix whose columns (atoms) have unit Euclidean norm.
///
/// Immutable after construction. Real dictionaries are stored with zero
/// imaginary parts.
#[derive(Debug, Clone, PartialEq)]
pub struct Dictionary {
    atoms: DMatrix<Complex64>,
    column_norm_tol: f64,
}

impl Dictionary {
    /// Builds a dictionary from an `m × N` matrix.
    ///
    /// With `normalize` set every column is rescaled to unit norm (a column
    /// with norm below `tol` is rejected); otherwise columns must already be
    /// within `tol` of unit norm.
    pub fn new(entries: DMatrix<Complex64>, normalize: bool, tol: f64) -> Result<Self> {
        if entries.nrows() == 0 || entries.ncols() == 0 {
            return Err(Error::Shape(format!(
                "need m >= 1 and N >= 1, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        for (column, col) in entries.column_iter().enumerate() {
            for (row, z) in col.iter().enumerate() {
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFiniteEntry { row, column });
                }
            }
        }
        let mut atoms = entries;
        for (column, mut col) in atoms.column_iter_mut().enumerate() {
            let norm = col.norm();
            if normalize {
                if norm < tol {
                    return Err(Error::ZeroColumn { column, norm });
                }
                col.unscale_mut(norm);
            } else if (norm - 1.0).abs() > tol {
                if norm < tol {
                    return Err(Error::ZeroColumn { column, norm });
                }
                return Err(Error::NotNormalized { column, norm });
            }
        }
        Ok(Self {
            atoms,
            column_norm_tol: tol,
        })
    }

    /// Real-valued convenience constructor; `columns[j]` is atom `j`.
    pub fn from_real_columns(columns: &[Vec<f64>], normalize: bool) -> Result<Self> {
        let n = columns.len();
        let m = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != m) {
            return Err(Error::Shape("columns have different lengths".into()));
        }
        let mat = DMatrix::from_fn(m, n, |i, j| Complex64::new(columns[j][i], 0.0));
        Self::new(mat, normalize, DEFAULT_COLUMN_NORM_TOL)
    }

    pub fn m(&self) -> usize {
        self.atoms.nrows()
    }

    pub fn n_atoms(&self) -> usize {
        self.atoms.ncols()
    }

    pub fn column_norm_tol(&self) -> f64 {
        self.column_norm_tol
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.atoms
    }

    pub fn atom(&self, j: usize) -> DVector<Complex64> {
        self.atoms.column(j).into_owned()
    }

    /// True when every entry has zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.atoms.iter().all(|z| z.im == 0.0)
    }

    /// Column submatrix `A_S`.
    pub fn submatrix(&self, support: &SupportSet) -> DMatrix<Complex64> {
        self.atoms.select_columns(support.indices())
    }

    /// Hermitian inner product `⟨A_i, A_j⟩ = A_i^* A_j`.
    pub fn inner(&self, i: usize, j: usize) -> Complex64 {
        self.atoms.column(i).dotc(&self.atoms.column(j))
    }

    /// `A x` for a coefficient vector over all `N` atoms.
    pub fn apply(&self, x: &DVector<Complex64>) -> DVector<Complex64> {
        &self.atoms * x
    }

    /// `A_S c` for coefficients aligned with `support`.
    pub fn apply_support(&self, support: &SupportSet, coeffs: &DVector<Complex64>) -> DVector<Complex64> {
        let mut out = DVector::zeros(self.m());
        for (&j, c) in support.iter().zip(coeffs.iter()) {
            out.axpy(*c, &self.atoms.column(j), Complex64::new(1.0, 0.0));
        }
        out
    }

    /// Checks that `support` only names atoms of this dictionary.
    pub fn check_support(&self, support: &SupportSet) -> Result<()> {
        match support.indices().last() {
            Some(&last) if last >= self.n_atoms() => Err(Error::InvalidSupport(format!(
                "index {last} out of range for N = {}",
                self.n_atoms()
            ))),
            _ => Ok(()),
        }
    }

    /// Checks a target vector's length and finiteness.
    pub fn check_target(&self, b: &DVector<Complex64>) -> Result<()> {
        if b.len() != self.m() {
            return Err(Error::Shape(format!(
                "target has length {}, dictionary has m = {}",
                b.len(),
                self.m()
            )));
        }
        if b.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument("target has non-finite entries".into()));
        }
        Ok(())
    }
}

/// A sorted, duplicate-free set of atom indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct SupportSet(Vec<usize>);

impl SupportSet {
    /// Validates that `indices` is strictly increasing.
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSupport(format!(
                "indices must be strictly increasing: {indices:?}"
            )));
        }
        Ok(Self(indices))
    }

    /// Sorts and deduplicates arbitrary indices.
    pub fn from_unsorted(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        Self(indices)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, usize> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, j: usize) -> bool {
        self.0.binary_search(&j).is_ok()
    }

    /// First shared index, if any.
    pub fn first_common(&self, other: &SupportSet) -> Option<usize> {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return Some(self.0[i]),
            }
        }
        None
    }

    pub fn is_disjoint(&self, other: &SupportSet) -> bool {
        self.first_common(other).is_none()
    }

    pub fn is_subset(&self, other: &SupportSet) -> bool {
        self.0.iter().all(|&j| other.contains(j))
    }

    /// Copies of this set with one index removed each.
    pub fn drop_one(&self) -> impl Iterator<Item = SupportSet> + '_ {
        (0..self.0.len()).map(move |skip| {
            SupportSet(
                self.0
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &j)| j)
                    .collect(),
            )
        })
    }
}

impl TryFrom<Vec<usize>> for SupportSet {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<SupportSet> for Vec<usize> {
    fn from(s: SupportSet) -> Self {
        s.0
    }
}

impl std::fmt::Display for SupportSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (i, j) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{j}")?;
        }
        write!(f, "}}")
    }
}

/// Embeds a real vector into `C^n`.
pub fn real_vector(values: &[f64]) -> DVector<Complex64> {
    DVector::from_iterator(values.len(), values.iter().map(|&x| Complex64::new(x, 0.0)))
}
