//! Open-boundary matrix product states in canonical form.
//!
//! Site `k` (1-based) carries matrices `A^[k]_i` of shape `D_k × D_{k+1}`
//! with `D₁ = D_{N+1} = 1`. Bond `k` (between sites `k` and `k+1`) carries
//! `Λ^[k]`, the eigenvalues of the reduced state of sites `1..k`, so
//! `Λ^[0] = Λ^[N] = [1]`. The gauge is the one produced by a right-to-left
//! SVD sweep:
//!
//! ```text
//! Σ_i A^[k]_i A^[k]_i†           = 1_{D_k}
//! Σ_i A^[k]_i† Λ^[k−1] A^[k]_i   = Λ^[k]
//! ```

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{svd, RandomSource};
use crate::quantum::entropy::{entropy_of_spectrum, renyi_of_spectrum, LogBase};
use crate::quantum::StateVector;

/// One `d`-long row of bond matrices for a single site.
type SiteTensor = Vec<DMatrix<C64>>;

/// Singular values below this fraction of the largest are dropped before any
/// bond-dimension cap is applied.
pub const SVD_CUTOFF: f64 = 1e-12;

/// Largest dense state accepted by the MPS routines.
pub const MAX_MPS_DIM: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq)]
pub struct MpsState {
    d: usize,
    /// `tensors[k][i]` is `A^[k+1]_i`.
    tensors: Vec<Vec<DMatrix<C64>>>,
    /// `lambdas[k]` is the diagonal of `Λ^[k]`, `k = 0..=N`.
    lambdas: Vec<Vec<f64>>,
}

impl MpsState {
    /// Checks shapes only; the canonical conditions are measured by
    /// [`canonical_residuals`].
    pub fn from_parts(
        d: usize,
        tensors: Vec<Vec<DMatrix<C64>>>,
        lambdas: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let n = tensors.len();
        if n == 0 || d == 0 {
            return Err(Error::invalid("MPS needs at least one site and d >= 1"));
        }
        if lambdas.len() != n + 1 {
            return Err(Error::DimensionMismatch {
                expected: n + 1,
                found: lambdas.len(),
            });
        }
        let mut left = 1;
        for (k, site) in tensors.iter().enumerate() {
            if site.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: site.len(),
                });
            }
            let right = site[0].ncols();
            if site.iter().any(|a| a.nrows() != left || a.ncols() != right) {
                return Err(Error::invalid(format!(
                    "site {} has inconsistent matrix shapes",
                    k + 1
                )));
            }
            if lambdas[k].len() != left {
                return Err(Error::DimensionMismatch {
                    expected: left,
                    found: lambdas[k].len(),
                });
            }
            left = right;
        }
        if left != 1 || lambdas[n].len() != 1 {
            return Err(Error::invalid("boundary bond dimensions must be 1"));
        }
        Ok(Self {
            d,
            tensors,
            lambdas,
        })
    }

    pub fn sites(&self) -> usize {
        self.tensors.len()
    }

    pub fn local_dim(&self) -> usize {
        self.d
    }

    /// `D₁ … D_{N+1}`.
    pub fn bond_dims(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.tensors.iter().map(|s| s[0].nrows()).collect();
        out.push(1);
        out
    }

    pub fn max_bond_dim(&self) -> usize {
        self.bond_dims().into_iter().max().unwrap_or(1)
    }

    /// Matrices of site `k`, 1-based.
    pub fn site(&self, k: usize) -> &[DMatrix<C64>] {
        &self.tensors[k - 1]
    }

    pub fn site_mut(&mut self, k: usize) -> &mut [DMatrix<C64>] {
        &mut self.tensors[k - 1]
    }

    /// Diagonal of `Λ^[k]`, `k = 0..=N`.
    pub fn lambda(&self, k: usize) -> &[f64] {
        &self.lambdas[k]
    }

    pub fn lambdas(&self) -> &[Vec<f64>] {
        &self.lambdas
    }

    /// Entanglement entropy across bond `k` in bits.
    pub fn bond_entropy(&self, k: usize) -> f64 {
        entropy_of_spectrum(&self.lambdas[k], LogBase::Two)
    }

    /// Contracts to `d^N` amplitudes, site 1 most significant. Not
    /// renormalized.
    pub fn to_amplitudes(&self) -> DVector<C64> {
        let mut cur = DMatrix::<C64>::from_element(1, 1, C64::new(1.0, 0.0));
        for site in &self.tensors {
            let right = site[0].ncols();
            let mut next = DMatrix::<C64>::zeros(cur.nrows() * self.d, right);
            for row in 0..cur.nrows() {
                let r = cur.row(row);
                for (i, a) in site.iter().enumerate() {
                    next.row_mut(row * self.d + i).copy_from(&(r * a));
                }
            }
            cur = next;
        }
        DVector::from_column_slice(cur.column(0).as_slice())
    }

    pub fn to_dense(&self) -> Result<StateVector> {
        StateVector::normalized(vec![self.d; self.sites()], self.to_amplitudes())
    }
}

/// Haar-random state on `N` sites of dimension `d` (normalized complex
/// Gaussian amplitudes).
pub fn random_chain_state(d: usize, n: usize, rng: &mut RandomSource) -> Result<StateVector> {
    let dim = checked_pow(d, n)?;
    let v = DVector::from_fn(dim, |_, _| rng.complex_normal());
    StateVector::normalized(vec![d; n], v)
}

pub(crate) fn checked_pow(d: usize, n: usize) -> Result<usize> {
    if d == 0 || n == 0 {
        return Err(Error::invalid("need d >= 1 and at least one site"));
    }
    d.checked_pow(n as u32)
        .filter(|&x| x <= MAX_MPS_DIM)
        .ok_or(Error::TooLarge {
            what: "chain Hilbert space dimension",
            size: (d as u128).saturating_pow(n as u32),
            limit: MAX_MPS_DIM as u128,
        })
}

fn uniform_dim(psi: &StateVector) -> Result<usize> {
    let dims = psi.dims();
    let d = dims[0];
    if let Some(&bad) = dims.iter().find(|&&x| x != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: bad,
        });
    }
    if psi.dim() > MAX_MPS_DIM {
        return Err(Error::TooLarge {
            what: "MPS dense state dimension",
            size: psi.dim() as u128,
            limit: MAX_MPS_DIM as u128,
        });
    }
    Ok(d)
}

/// SVD sweep from the right end. `dmax = None` keeps every singular value
/// above the relative cutoff. When the cap truncates, `Λ` holds the kept
/// weights renormalized to unit trace and the returned tensors describe the
/// unnormalized projected state.
fn sweep(
    amps: &DVector<C64>,
    n: usize,
    d: usize,
    dmax: Option<usize>,
) -> Result<(Vec<SiteTensor>, Vec<Vec<f64>>)> {
    let mut tensors: Vec<SiteTensor> = Vec::with_capacity(n);
    let mut lambdas = vec![vec![1.0]; n + 1];
    // Rows: sites 1..k−1, columns: (i_k, α_{k+1}).
    let mut right = 1usize;
    let mut rows = amps.len() / d;
    let mut psi = DMatrix::from_fn(rows, d, |r, c| amps[r * d + c]);
    for k in (2..=n).rev() {
        let dec = svd(&psi)?;
        let mut keep = dec.rank(SVD_CUTOFF).max(1);
        if let Some(cap) = dmax {
            keep = keep.min(cap);
        }
        let site = (0..d)
            .map(|i| DMatrix::from_fn(keep, right, |b, a| dec.v[(i * right + a, b)].conj()))
            .collect();
        tensors.push(site);
        let weights: Vec<f64> = dec.singular_values[..keep].iter().map(|s| s * s).collect();
        let total: f64 = weights.iter().sum();
        lambdas[k - 1] = weights.iter().map(|w| w / total).collect();
        // U S, then regroup rows (sites 1..k−2) against (i_{k−1}, β).
        rows /= d;
        let us = DMatrix::from_fn(rows * d, keep, |r, c| {
            dec.u[(r, c)] * dec.singular_values[c]
        });
        psi = DMatrix::from_fn(rows, d * keep, |r, c| us[(r * d + c / keep, c % keep)]);
        right = keep;
    }
    let first = (0..d)
        .map(|i| DMatrix::from_fn(1, right, |_, a| psi[(0, i * right + a)]))
        .collect();
    tensors.push(first);
    tensors.reverse();
    Ok((tensors, lambdas))
}

/// Canonical MPS of a dense state with uniform local dimension. With
/// `dmax = None` (or `dmax ≥ d^{⌊N/2⌋}`) the MPS reproduces `psi` exactly.
pub fn mps_from_dense(psi: &StateVector, dmax: Option<usize>) -> Result<MpsState> {
    let d = uniform_dim(psi)?;
    if dmax == Some(0) {
        return Err(Error::invalid("bond dimension must be >= 1"));
    }
    let n = psi.dims().len();
    let (tensors, lambdas) = sweep(psi.amplitudes(), n, d, dmax)?;
    MpsState::from_parts(d, tensors, lambdas)
}

/// Per-site deviations from the canonical conditions, entrywise L1 norms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SiteResiduals {
    /// `‖Σ_i A_i A_i† − 1‖₁`.
    pub isometry: f64,
    /// `‖Σ_i A_i† Λ^[k−1] A_i − Λ^[k]‖₁`.
    pub propagation: f64,
    /// `|Tr Λ^[k] − 1|`, plus `|Λ^[0] − 1|` at the first site and
    /// `|Λ^[N] − 1|` at the last.
    pub boundary: f64,
}

impl SiteResiduals {
    pub fn max(&self) -> f64 {
        self.isometry.max(self.propagation).max(self.boundary)
    }
}

fn l1(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).sum()
}

pub fn canonical_residuals(mps: &MpsState) -> Vec<SiteResiduals> {
    let n = mps.sites();
    (1..=n)
        .map(|k| {
            let site = mps.site(k);
            let (dl, dr) = site[0].shape();
            let mut iso = -DMatrix::<C64>::identity(dl, dl);
            let mut prop = -DMatrix::from_diagonal(&DVector::from_iterator(
                dr,
                mps.lambda(k).iter().map(|&x| C64::new(x, 0.0)),
            ));
            let before = DMatrix::from_diagonal(&DVector::from_iterator(
                dl,
                mps.lambda(k - 1).iter().map(|&x| C64::new(x, 0.0)),
            ));
            for a in site {
                iso += a * a.adjoint();
                prop += a.adjoint() * &before * a;
            }
            let mut boundary = (mps.lambda(k).iter().sum::<f64>() - 1.0).abs();
            if k == 1 {
                boundary += (mps.lambda(0)[0] - 1.0).abs();
            }
            if k == n {
                boundary += (mps.lambda(n)[0] - 1.0).abs();
            }
            SiteResiduals {
                isometry: l1(&iso),
                propagation: l1(&prop),
                boundary,
            }
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct Truncation {
    /// Canonical MPS of the normalized truncated state.
    pub mps: MpsState,
    /// `‖ψ − ψ_D‖²` with `ψ_D` normalized and phase-aligned to `ψ`.
    pub error_sq: f64,
}

/// Caps every bond at `D` by sequential SVD truncation.
pub fn truncate(psi: &StateVector, bond_dim: usize) -> Result<Truncation> {
    if bond_dim == 0 {
        return Err(Error::invalid("bond dimension must be >= 1"));
    }
    let d = uniform_dim(psi)?;
    let n = psi.dims().len();
    let (tensors, lambdas) = sweep(psi.amplitudes(), n, d, Some(bond_dim))?;
    let raw = MpsState::from_parts(d, tensors, lambdas)?;
    let approx = raw.to_dense()?;
    // The sweep projects, so ⟨ψ|ψ_D⟩ is real and nonnegative up to rounding.
    let overlap = psi.inner(&approx);
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        C64::new(1.0, 0.0)
    };
    let diff = psi.amplitudes() - approx.amplitudes() * phase;
    let error_sq = diff.norm_squared();
    let mps = mps_from_dense(&approx, Some(bond_dim))?;
    Ok(Truncation { mps, error_sq })
}

/// Squared Schmidt coefficients of every internal cut, `k = 1..N−1`.
pub fn cut_spectra(psi: &StateVector) -> Result<Vec<Vec<f64>>> {
    let mps = mps_from_dense(psi, None)?;
    Ok(mps.lambdas[1..mps.sites()].to_vec())
}

/// `2 Σ_k Σ_{i>D} λ^[k]_i`, with `λ^[k]` the squared Schmidt coefficients of
/// cut `k` in nonincreasing order.
pub fn truncation_bound(spectra: &[Vec<f64>], bond_dim: usize) -> f64 {
    2.0 * spectra
        .iter()
        .map(|s| s.iter().skip(bond_dim).sum::<f64>())
        .sum::<f64>()
}

/// `ε(D) = Σ_{i>D} λ_i` for a nonincreasing spectrum.
pub fn tail_weight(eigs: &[f64], bond_dim: usize) -> f64 {
    eigs.iter().skip(bond_dim).sum()
}

/// Right side of `log₂ ε(D) ≤ ((1−α)/α) [S_α(ρ) − log₂(D/(1−α))]`, with
/// `S_α` in bits.
pub fn renyi_tail_bound(eigs: &[f64], alpha: f64, bond_dim: usize) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::invalid(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )));
    }
    if bond_dim == 0 {
        return Err(Error::invalid("bond dimension must be >= 1"));
    }
    if eigs.is_empty() || eigs.iter().any(|&x| !x.is_finite() || x < -1e-12) {
        return Err(Error::invalid("eigenvalues must be finite and nonnegative"));
    }
    if eigs.windows(2).any(|w| w[1] > w[0] + 1e-12) {
        return Err(Error::invalid("eigenvalues must be nonincreasing"));
    }
    let total: f64 = eigs.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::BadTrace { trace: total });
    }
    let s = renyi_of_spectrum(eigs, alpha, LogBase::Two)?;
    Ok((1.0 - alpha) / alpha * (s - (bond_dim as f64 / (1.0 - alpha)).log2()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{schmidt_spectrum, Bipartition};

    fn ghz(n: usize) -> StateVector {
        let mut v = DVector::zeros(1 << n);
        v[0] = C64::new(1.0, 0.0);
        v[(1 << n) - 1] = C64::new(1.0, 0.0);
        StateVector::normalized(vec![2; n], v).unwrap()
    }

    #[test]
    fn product_state_has_unit_bonds() {
        let psi = StateVector::product_basis(vec![3; 4], &[0, 2, 1, 1]).unwrap();
        let mps = mps_from_dense(&psi, None).unwrap();
        assert_eq!(mps.bond_dims(), vec![1; 5]);
        assert!(mps.to_dense().unwrap().fidelity(&psi) > 1.0 - 1e-12);
    }

    #[test]
    fn ghz_bonds() {
        let mps = mps_from_dense(&ghz(5), None).unwrap();
        assert_eq!(mps.bond_dims(), vec![1, 2, 2, 2, 2, 1]);
        for k in 1..5 {
            for &l in mps.lambda(k) {
                assert!((l - 0.5).abs() < 1e-12);
            }
        }
        assert!(canonical_residuals(&mps).iter().all(|r| r.max() < 1e-10));
    }

    #[test]
    fn random_round_trip_and_spectra() {
        let mut rng = RandomSource::new(3);
        let psi = random_chain_state(2, 6, &mut rng).unwrap();
        let mps = mps_from_dense(&psi, Some(8)).unwrap();
        assert_eq!(mps.bond_dims(), vec![1, 2, 4, 8, 4, 2, 1]);
        assert!(mps.to_dense().unwrap().fidelity(&psi) > 1.0 - 1e-10);
        assert!(canonical_residuals(&mps).iter().all(|r| r.max() < 1e-10));
        for k in 1..6 {
            let s = schmidt_spectrum(&psi, Bipartition::at_cut(psi.dims(), k).unwrap()).unwrap();
            for (a, b) in mps.lambda(k).iter().zip(&s) {
                assert!((a - b * b).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn scaled_tensor_detected() {
        let mut rng = RandomSource::new(4);
        let psi = random_chain_state(2, 5, &mut rng).unwrap();
        let mut mps = mps_from_dense(&psi, None).unwrap();
        let dk = mps.bond_dims()[2];
        for a in mps.site_mut(3) {
            *a *= C64::new(2.0, 0.0);
        }
        let r = canonical_residuals(&mps);
        assert!((r[2].isometry - 3.0 * dk as f64).abs() < 1e-9);
    }

    #[test]
    fn truncation_within_bound() {
        let mut rng = RandomSource::new(5);
        let psi = random_chain_state(2, 8, &mut rng).unwrap();
        let spectra = cut_spectra(&psi).unwrap();
        let mut last = f64::INFINITY;
        for dim in [1, 2, 4, 8, 16] {
            let t = truncate(&psi, dim).unwrap();
            assert!(t.error_sq <= truncation_bound(&spectra, dim) + 1e-12);
            assert!(t.mps.max_bond_dim() <= dim);
            assert!(t.error_sq <= last + 1e-12);
            last = t.error_sq;
        }
        assert!(last < 1e-20);
    }

    #[test]
    fn renyi_bound_examples() {
        let uniform = vec![0.125; 8];
        let b = renyi_tail_bound(&uniform, 0.5, 4).unwrap();
        assert!(tail_weight(&uniform, 4).log2() <= b);
        assert!(renyi_tail_bound(&uniform, 1.0, 4).is_err());
        assert!(renyi_tail_bound(&[0.5, 0.5], 0.5, 4).unwrap().is_finite());
        assert!(renyi_tail_bound(&[0.2, 0.8], 0.5, 1).is_err());
    }
}
