use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::Result;
use crate::numerics::svd;
use crate::quantum::state::{Bipartition, StateVector};

/// Schmidt coefficients below this fraction of the largest are dropped.
pub const RANK_TOL: f64 = 1e-10;

/// `|ψ⟩ = Σᵢ λᵢ |eᵢ⟩ ⊗ |fᵢ⟩` with `λ` positive and descending.
#[derive(Debug, Clone)]
pub struct SchmidtData {
    pub coefficients: Vec<f64>,
    pub left: Vec<DVector<C64>>,
    pub right: Vec<DVector<C64>>,
}

impl SchmidtData {
    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    /// Squared coefficients, i.e. the nonzero spectrum of either reduced state.
    pub fn probabilities(&self) -> Vec<f64> {
        self.coefficients.iter().map(|l| l * l).collect()
    }

    pub fn reconstruct(&self) -> DVector<C64> {
        let m = self.left.first().map_or(0, |v| v.len());
        let n = self.right.first().map_or(0, |v| v.len());
        let mut out = DVector::zeros(m * n);
        for ((l, e), f) in self.coefficients.iter().zip(&self.left).zip(&self.right) {
            for i in 0..m {
                for j in 0..n {
                    out[i * n + j] += e[i] * f[j] * *l;
                }
            }
        }
        out
    }
}

/// Amplitudes reshaped to the `left × right` coefficient matrix `α_ij`.
pub fn coefficient_matrix(psi: &StateVector, bip: Bipartition) -> Result<DMatrix<C64>> {
    bip.check(psi.dim())?;
    let a = psi.amplitudes();
    Ok(DMatrix::from_fn(bip.left, bip.right, |i, j| {
        a[i * bip.right + j]
    }))
}

/// All singular values of the coefficient matrix, including zeros.
pub fn schmidt_spectrum(psi: &StateVector, bip: Bipartition) -> Result<Vec<f64>> {
    Ok(svd(&coefficient_matrix(psi, bip)?)?.singular_values)
}

pub fn schmidt_decompose(psi: &StateVector, bip: Bipartition) -> Result<SchmidtData> {
    let dec = svd(&coefficient_matrix(psi, bip)?)?;
    let rank = dec.rank(RANK_TOL);
    let coefficients = dec.singular_values[..rank].to_vec();
    let left = (0..rank).map(|k| dec.u.column(k).into_owned()).collect();
    // M = U Σ V†, so the right vectors are the conjugated columns of V.
    let right = (0..rank)
        .map(|k| dec.v.column(k).map(|z| z.conj()))
        .collect();
    Ok(SchmidtData {
        coefficients,
        left,
        right,
    })
}

/// Number of Schmidt coefficients above `tol` (absolute).
pub fn schmidt_rank(psi: &StateVector, bip: Bipartition, tol: f64) -> Result<usize> {
    Ok(schmidt_spectrum(psi, bip)?
        .iter()
        .filter(|&&s| s > tol)
        .count())
}

/// A pure state is separable across `bip` iff its Schmidt rank is one.
pub fn is_separable_pure(psi: &StateVector, bip: Bipartition) -> Result<bool> {
    Ok(schmidt_rank(psi, bip, RANK_TOL)? == 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::state::max_entangled;

    fn bip(a: usize, b: usize) -> Bipartition {
        Bipartition::new(a, b).unwrap()
    }

    #[test]
    fn product_state_rank_one() {
        let psi = StateVector::basis(vec![2, 2], 0).unwrap();
        let s = schmidt_decompose(&psi, bip(2, 2)).unwrap();
        assert_eq!(s.rank(), 1);
        assert!((s.coefficients[0] - 1.0).abs() < 1e-15);
        let psi01 = StateVector::basis(vec![2, 2], 1).unwrap();
        assert!(is_separable_pure(&psi01, bip(2, 2)).unwrap());
    }

    #[test]
    fn factorizable_superposition() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let psi = StateVector::new(
            vec![2, 2],
            DVector::from_vec(vec![
                C64::new(h, 0.0),
                C64::new(h, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
            ]),
        )
        .unwrap();
        assert_eq!(schmidt_rank(&psi, bip(2, 2), 1e-10).unwrap(), 1);
    }

    #[test]
    fn maximally_entangled_qutrits() {
        let psi = max_entangled(3).unwrap();
        let s = schmidt_decompose(&psi, bip(3, 3)).unwrap();
        assert_eq!(s.rank(), 3);
        for l in &s.coefficients {
            assert!((l - 1.0 / 3f64.sqrt()).abs() < 1e-14);
        }
        assert!((s.reconstruct() - psi.amplitudes()).norm() < 1e-12);
        let bell = max_entangled(2).unwrap();
        assert_eq!(schmidt_rank(&bell, bip(2, 2), 1e-10).unwrap(), 2);
        assert!(!is_separable_pure(&bell, bip(2, 2)).unwrap());
    }

    #[test]
    fn dimension_mismatch() {
        let psi = max_entangled(2).unwrap();
        assert!(schmidt_decompose(&psi, bip(3, 2)).is_err());
    }
}
