//! Collective spin `j = n/2` in the Dicke basis `|D_n^k⟩`, `k = 0…n` down
//! spins, `J_z` eigenvalue `m = n/2 − k`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::StateVector;

/// Normalization tolerance of [`SymmetricState`].
pub const SYMMETRIC_NORM_TOL: f64 = 1e-10;

/// Largest `n` whose symmetric states can be expanded into `2^n` amplitudes.
pub const MAX_EMBED_PARTIES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpinComponent {
    Jz,
    Jx,
    Jy,
    JPlus,
    JMinus,
}

/// `m = n/2 − k`.
pub fn magnetization(n: usize, k: usize) -> f64 {
    n as f64 / 2.0 - k as f64
}

/// `⟨k−1| J₊ |k⟩ = sqrt(j(j+1) − m(m+1))` with `m = n/2 − k`, for `k = 1…n`.
pub fn ladder_element(n: usize, k: usize) -> f64 {
    let j = n as f64 / 2.0;
    let m = magnetization(n, k);
    (j * (j + 1.0) - m * (m + 1.0)).max(0.0).sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CollectiveOperator {
    pub n: usize,
    pub label: SpinComponent,
    pub matrix: DMatrix<C64>,
}

pub fn collective_operator(n: usize, label: SpinComponent) -> Result<CollectiveOperator> {
    if n == 0 {
        return Err(Error::invalid("collective operators need n >= 1"));
    }
    let dim = n + 1;
    let mut plus = DMatrix::<C64>::zeros(dim, dim);
    for k in 1..dim {
        plus[(k - 1, k)] = C64::new(ladder_element(n, k), 0.0);
    }
    let matrix = match label {
        SpinComponent::Jz => DMatrix::from_diagonal(&DVector::from_fn(dim, |k, _| {
            C64::new(magnetization(n, k), 0.0)
        })),
        SpinComponent::JPlus => plus,
        SpinComponent::JMinus => plus.adjoint(),
        SpinComponent::Jx => (&plus + plus.adjoint()) * C64::new(0.5, 0.0),
        SpinComponent::Jy => (&plus - plus.adjoint()) * C64::new(0.0, -0.5),
    };
    Ok(CollectiveOperator { n, label, matrix })
}

/// Normalized amplitudes over `|D_n^0⟩ … |D_n^n⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricState {
    n: usize,
    amplitudes: DVector<C64>,
}

impl SymmetricState {
    pub fn new(n: usize, amplitudes: DVector<C64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("symmetric states need n >= 1"));
        }
        if amplitudes.len() != n + 1 {
            return Err(Error::DimensionMismatch {
                expected: n + 1,
                found: amplitudes.len(),
            });
        }
        let norm_sqr = amplitudes.norm_squared();
        if !norm_sqr.is_finite() || (norm_sqr - 1.0).abs() > SYMMETRIC_NORM_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self { n, amplitudes })
    }

    pub fn from_real(n: usize, amplitudes: &[f64]) -> Result<Self> {
        let v = DVector::from_iterator(
            amplitudes.len(),
            amplitudes.iter().map(|&x| C64::new(x, 0.0)),
        );
        let norm = v.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::invalid("zero or non-finite amplitudes"));
        }
        Self::new(n, v / C64::new(norm, 0.0))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    /// `⟨ψ| M |ψ⟩` for an `(n+1)`-dimensional matrix.
    pub fn expectation(&self, op: &DMatrix<C64>) -> Result<C64> {
        if op.nrows() != self.n + 1 || op.ncols() != self.n + 1 {
            return Err(Error::DimensionMismatch {
                expected: self.n + 1,
                found: op.nrows(),
            });
        }
        Ok((self.amplitudes.adjoint() * op * &self.amplitudes)[(0, 0)])
    }

    /// Expansion into `2^n` amplitudes, qubit 1 most significant, `|1⟩` down.
    pub fn to_full(&self) -> Result<StateVector> {
        let n = self.n;
        if n > MAX_EMBED_PARTIES {
            return Err(Error::TooLarge {
                what: "symmetric state embedding parties",
                size: n as u128,
                limit: MAX_EMBED_PARTIES as u128,
            });
        }
        let binom: Vec<f64> = (0..=n).map(|k| binomial(n, k)).collect();
        let full = DVector::from_fn(1 << n, |idx, _| {
            let k = (idx as u64).count_ones() as usize;
            self.amplitudes[k] / binom[k].sqrt()
        });
        StateVector::new(vec![2; n], full)
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

pub fn dicke_state(n: usize, k: usize) -> Result<SymmetricState> {
    if k > n {
        return Err(Error::invalid(format!(
            "Dicke index k = {k} exceeds n = {n}"
        )));
    }
    let mut v = DVector::zeros(n + 1);
    v[k] = C64::new(1.0, 0.0);
    SymmetricState::new(n, v)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LmgSpectrum {
    /// Energy of `|D_n^k⟩`, indexed by `k`.
    pub energies: Vec<f64>,
    /// Every `k` within `1e-9 · max(1, |E_min|)` of the minimum, ascending.
    pub ground: Vec<usize>,
}

/// `H = −(λ/n) Σ_{i<j}(σ_x σ_x + σ_y σ_y) − h Σ σ_z` on the symmetric
/// subspace, where it is diagonal: `E(m) = −(2λ/n)(j(j+1) − m²) + λ − 2hm`.
pub fn lmg_energies(n: usize, lambda: f64, h: f64) -> Result<LmgSpectrum> {
    if n < 2 {
        return Err(Error::invalid(format!("LMG needs n >= 2, got {n}")));
    }
    if !lambda.is_finite() || !h.is_finite() {
        return Err(Error::invalid("non-finite LMG parameters"));
    }
    let nf = n as f64;
    let j = nf / 2.0;
    let energies: Vec<f64> = (0..=n)
        .map(|k| {
            let m = magnetization(n, k);
            -(2.0 * lambda / nf) * (j * (j + 1.0) - m * m) + lambda - 2.0 * h * m
        })
        .collect();
    let min = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let tol = 1e-9 * min.abs().max(1.0);
    let ground = (0..=n).filter(|&k| energies[k] - min <= tol).collect();
    Ok(LmgSpectrum { energies, ground })
}
