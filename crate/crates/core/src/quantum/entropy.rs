use crate::error::{Error, Result};
use crate::numerics::eigvalsh;
use crate::quantum::ops::reduced_state;
use crate::quantum::schmidt::schmidt_spectrum;
use crate::quantum::state::{Bipartition, DensityOperator, Side, StateVector};

/// Eigenvalues at or below this are treated as zero (rank counting, `0 log 0`).
const ZERO_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LogBase {
    /// Bits.
    #[default]
    Two,
    /// Nats.
    E,
}

impl LogBase {
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Two => x.log2(),
            LogBase::E => x.ln(),
        }
    }
}

/// `−Σ pᵢ log pᵢ` with `0 log 0 := 0`.
pub fn entropy_of_spectrum(p: &[f64], base: LogBase) -> f64 {
    let s: f64 = p
        .iter()
        .filter(|&&x| x > ZERO_TOL)
        .map(|&x| -x * base.log(x))
        .sum();
    s.max(0.0)
}

/// Rényi entropy of a probability vector; `alpha = 1` is Shannon/von Neumann,
/// `alpha = 0` is `log rank`, `alpha = ∞` is `−log p_max`.
pub fn renyi_of_spectrum(p: &[f64], alpha: f64, base: LogBase) -> Result<f64> {
    if alpha.is_nan() || alpha < 0.0 {
        return Err(Error::invalid(format!(
            "Renyi order must be >= 0, got {alpha}"
        )));
    }
    let support = p.iter().copied().filter(|&x| x > ZERO_TOL);
    if alpha == 0.0 {
        return Ok(base.log(support.count().max(1) as f64));
    }
    if alpha == 1.0 {
        return Ok(entropy_of_spectrum(p, base));
    }
    if alpha.is_infinite() {
        let pmax = p.iter().copied().fold(0.0, f64::max);
        return Ok(-base.log(pmax));
    }
    let sum: f64 = support.map(|x| x.powf(alpha)).sum();
    Ok(base.log(sum) / (1.0 - alpha))
}

pub fn vn_entropy(rho: &DensityOperator, base: LogBase) -> f64 {
    entropy_of_spectrum(&eigvalsh(rho.matrix()), base)
}

pub fn renyi_entropy(rho: &DensityOperator, alpha: f64, base: LogBase) -> Result<f64> {
    renyi_of_spectrum(&eigvalsh(rho.matrix()), alpha, base)
}

/// `E(|ψ⟩) = S(ρ_A) = −Σ λᵢ² log λᵢ²` from the Schmidt spectrum.
pub fn entanglement_entropy(psi: &StateVector, bip: Bipartition, base: LogBase) -> Result<f64> {
    let p: Vec<f64> = schmidt_spectrum(psi, bip)?.iter().map(|s| s * s).collect();
    Ok(entropy_of_spectrum(&p, base))
}

/// `I(A:B) = S(ρ_A) + S(ρ_B) − S(ρ_AB)`.
pub fn mutual_information(rho: &DensityOperator, bip: Bipartition, base: LogBase) -> Result<f64> {
    let a = crate::quantum::ops::partial_trace(rho, bip, Side::Left)?;
    let b = crate::quantum::ops::partial_trace(rho, bip, Side::Right)?;
    Ok(vn_entropy(&a, base) + vn_entropy(&b, base) - vn_entropy(rho, base))
}

/// Entropy of the reduced state of a pure state on the chosen side, via the
/// reduced density matrix rather than the SVD.
pub fn reduced_entropy(
    psi: &StateVector,
    bip: Bipartition,
    side: Side,
    base: LogBase,
) -> Result<f64> {
    Ok(vn_entropy(&reduced_state(psi, bip, side)?, base))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::state::max_entangled;
    use nalgebra::DMatrix;
    use num_complex::Complex64 as C64;

    #[test]
    fn pure_state_has_zero_entropy() {
        let rho = StateVector::basis(vec![3], 1).unwrap().to_density();
        assert_eq!(vn_entropy(&rho, LogBase::Two), 0.0);
    }

    #[test]
    fn maximally_mixed_entropy() {
        let rho = DensityOperator::maximally_mixed(vec![5]).unwrap();
        assert!((vn_entropy(&rho, LogBase::Two) - 5f64.log2()).abs() < 1e-12);
        assert!((vn_entropy(&rho, LogBase::E) - 5f64.ln()).abs() < 1e-12);
        for alpha in [0.0, 0.5, 2.0, f64::INFINITY] {
            assert!(
                (renyi_entropy(&rho, alpha, LogBase::Two).unwrap() - 5f64.log2()).abs() < 1e-12
            );
        }
    }

    #[test]
    fn renyi_special_orders() {
        let p = [0.5, 0.25, 0.25, 0.0];
        assert!((renyi_of_spectrum(&p, 0.0, LogBase::Two).unwrap() - 3f64.log2()).abs() < 1e-15);
        assert!((renyi_of_spectrum(&p, f64::INFINITY, LogBase::Two).unwrap() - 1.0).abs() < 1e-15);
        assert!((renyi_of_spectrum(&p, 1.0, LogBase::Two).unwrap() - 1.5).abs() < 1e-15);
        assert!(renyi_of_spectrum(&p, -0.5, LogBase::Two).is_err());
    }

    #[test]
    fn bell_entropies() {
        let bip = Bipartition::new(3, 3).unwrap();
        let psi = max_entangled(3).unwrap();
        assert!(
            (entanglement_entropy(&psi, bip, LogBase::Two).unwrap() - 3f64.log2()).abs() < 1e-12
        );
        let psi2 = max_entangled(2).unwrap();
        let b2 = Bipartition::new(2, 2).unwrap();
        let i = mutual_information(&psi2.to_density(), b2, LogBase::Two).unwrap();
        assert!((i - 2.0).abs() < 1e-12);
    }

    #[test]
    fn classically_correlated_mutual_information() {
        let mut m = DMatrix::<C64>::zeros(4, 4);
        m[(0, 0)] = C64::new(0.5, 0.0);
        m[(3, 3)] = C64::new(0.5, 0.0);
        let rho = DensityOperator::new(
            vec![2, 2],
            crate::numerics::HermitianMatrix::new(m).unwrap(),
        )
        .unwrap();
        let i = mutual_information(&rho, Bipartition::new(2, 2).unwrap(), LogBase::Two).unwrap();
        assert!((i - 1.0).abs() < 1e-12);
    }
}
