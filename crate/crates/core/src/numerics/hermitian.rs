use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Absolute Hermiticity tolerance, scaled by `max(1, max|M_ij|)`.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Residual tolerance used by the dense kernels: `1e-9` up to dimension 512,
/// `1e-7` above.
pub fn default_tolerance(dim: usize) -> f64 {
    if dim <= 512 {
        1e-9
    } else {
        1e-7
    }
}

/// A square complex matrix that is Hermitian to within [`HERMITIAN_TOL`].
///
/// Construction symmetrizes the stored entries, so `entries[i][j]` and
/// `conj(entries[j][i])` are bitwise equal afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    data: DMatrix<C64>,
}

impl HermitianMatrix {
    pub fn new(data: DMatrix<C64>) -> Result<Self> {
        let n = data.nrows();
        if n == 0 {
            return Err(Error::invalid("Hermitian matrix must have dimension >= 1"));
        }
        if data.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: data.ncols(),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::invalid("matrix has non-finite entries"));
        }
        let scale = data.iter().fold(1.0_f64, |acc, z| acc.max(z.norm()));
        let mut asymmetry = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                asymmetry = asymmetry.max((data[(i, j)] - data[(j, i)].conj()).norm());
            }
        }
        if asymmetry > HERMITIAN_TOL * scale {
            return Err(Error::NotHermitian { asymmetry });
        }
        Ok(Self::from_raw_symmetrized(data))
    }

    pub fn from_real(data: DMatrix<f64>) -> Result<Self> {
        Self::new(data.map(|x| C64::new(x, 0.0)))
    }

    /// Symmetrizes without checking. Callers guarantee the input is Hermitian
    /// up to roundoff.
    pub(crate) fn from_raw_symmetrized(mut data: DMatrix<C64>) -> Self {
        let n = data.nrows();
        for i in 0..n {
            data[(i, i)] = C64::new(data[(i, i)].re, 0.0);
            for j in (i + 1)..n {
                let avg = (data[(i, j)] + data[(j, i)].conj()) * 0.5;
                data[(i, j)] = avg;
                data[(j, i)] = avg.conj();
            }
        }
        Self { data }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            data: DMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            data: DMatrix::zeros(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.data
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.data
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.data[(i, i)].re).sum()
    }

    /// Frobenius norm; an upper bound on the spectral norm.
    pub fn norm(&self) -> f64 {
        self.data.norm()
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            data: self.data.map(|z| z * factor),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if other.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(Self {
            data: &self.data + &other.data,
        })
    }

    /// `<v| M |v>`, real part.
    pub fn expectation(&self, v: &nalgebra::DVector<C64>) -> f64 {
        (v.adjoint() * &self.data * v)[(0, 0)].re
    }
}

/// Eigendecomposition with eigenvalues ascending and eigenvectors stored as
/// the matching orthonormal columns of `vectors`.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: DMatrix<C64>,
}

impl Eigen {
    pub fn column(&self, i: usize) -> nalgebra::DVector<C64> {
        self.vectors.column(i).into_owned()
    }
}

pub fn hermitian_eigen(m: &HermitianMatrix) -> Eigen {
    let eig = m.data.clone().symmetric_eigen();
    let n = m.dim();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Eigen { values, vectors }
}

/// Eigenvalues only, ascending.
pub fn eigvalsh(m: &HermitianMatrix) -> Vec<f64> {
    let mut values: Vec<f64> = m
        .data
        .clone()
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    values.sort_by(f64::total_cmp);
    values
}

/// Applies `f` to the spectrum: `V f(Λ) V†`.
pub fn spectral_map(m: &HermitianMatrix, f: impl Fn(f64) -> f64) -> HermitianMatrix {
    let eig = hermitian_eigen(m);
    let n = m.dim();
    let mut scaled = eig.vectors.clone();
    for (c, &lambda) in eig.values.iter().enumerate() {
        let w = f(lambda);
        for r in 0..n {
            scaled[(r, c)] *= w;
        }
    }
    HermitianMatrix::from_raw_symmetrized(scaled * eig.vectors.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn identity_has_unit_spectrum() {
        let e = hermitian_eigen(&HermitianMatrix::identity(2));
        assert_eq!(e.values, vec![1.0, 1.0]);
    }

    #[test]
    fn diagonal_spectrum_is_sorted() {
        let m = HermitianMatrix::from_real(DMatrix::from_row_slice(2, 2, &[3.0, 0.0, 0.0, -1.0]))
            .unwrap();
        let e = hermitian_eigen(&m);
        assert_eq!(e.values, vec![-1.0, 3.0]);
        assert!((e.vectors[(1, 0)].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pauli_x() {
        let m = HermitianMatrix::new(DMatrix::from_row_slice(
            2,
            2,
            &[c(0.0), c(1.0), c(1.0), c(0.0)],
        ))
        .unwrap();
        let v = eigvalsh(&m);
        assert!((v[0] + 1.0).abs() < 1e-14 && (v[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(0.5), c(0.0)]);
        assert!(matches!(
            HermitianMatrix::new(m),
            Err(Error::NotHermitian { .. })
        ));
        let m = DMatrix::from_row_slice(2, 2, &[C64::new(0.0, 1.0), c(0.0), c(0.0), c(0.0)]);
        assert!(HermitianMatrix::new(m).is_err());
    }

    #[test]
    fn rejects_non_square_and_empty() {
        assert!(HermitianMatrix::new(DMatrix::zeros(2, 3)).is_err());
        assert!(HermitianMatrix::new(DMatrix::zeros(0, 0)).is_err());
    }

    #[test]
    fn tolerance_switches_above_512() {
        assert_eq!(default_tolerance(512), 1e-9);
        assert_eq!(default_tolerance(513), 1e-7);
    }
}
