use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::numerics::{hermitian_eigen, kron, HermitianMatrix};

/// Tolerance on `‖ψ‖² = 1` and on `tr ρ = 1`.
pub const NORM_TOL: f64 = 1e-10;
/// Eigenvalues of a density operator in `[−CLIP_TOL, 0)` are clipped to zero.
pub const CLIP_TOL: f64 = 1e-10;

fn checked_product(dims: &[usize]) -> Result<usize> {
    if dims.is_empty() {
        return Err(Error::invalid("dims must be nonempty"));
    }
    dims.iter().try_fold(1usize, |acc, &d| {
        if d == 0 {
            return Err(Error::invalid("local dimensions must be >= 1"));
        }
        acc.checked_mul(d).ok_or(Error::TooLarge {
            what: "Hilbert space",
            size: u128::MAX,
            limit: usize::MAX as u128,
        })
    })
}

/// Split of a Hilbert space into `left ⊗ right`, with the left factor the
/// slow (leftmost) index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bipartition {
    pub left: usize,
    pub right: usize,
}

impl Bipartition {
    pub fn new(left: usize, right: usize) -> Result<Self> {
        if left == 0 || right == 0 {
            return Err(Error::invalid("bipartition factors must be >= 1"));
        }
        Ok(Self { left, right })
    }

    /// Cut after the first `cut` tensor factors of `dims`.
    pub fn at_cut(dims: &[usize], cut: usize) -> Result<Self> {
        if cut > dims.len() {
            return Err(Error::invalid(format!(
                "cut {cut} beyond {} factors",
                dims.len()
            )));
        }
        let left = if cut == 0 {
            1
        } else {
            checked_product(&dims[..cut])?
        };
        let right = if cut == dims.len() {
            1
        } else {
            checked_product(&dims[cut..])?
        };
        Self::new(left, right)
    }

    pub fn total(&self) -> usize {
        self.left * self.right
    }

    pub(crate) fn check(&self, total: usize) -> Result<()> {
        if self.left.checked_mul(self.right) != Some(total) {
            return Err(Error::DimensionMismatch {
                expected: total,
                found: self.left.saturating_mul(self.right),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Normalized pure state on `C^{d₁} ⊗ … ⊗ C^{d_N}`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    dims: Vec<usize>,
    amplitudes: DVector<C64>,
}

impl StateVector {
    pub fn new(dims: Vec<usize>, amplitudes: DVector<C64>) -> Result<Self> {
        let total = checked_product(&dims)?;
        if amplitudes.len() != total {
            return Err(Error::DimensionMismatch {
                expected: total,
                found: amplitudes.len(),
            });
        }
        if amplitudes
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::invalid("amplitudes must be finite"));
        }
        let norm_sqr = amplitudes.norm_squared();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self { dims, amplitudes })
    }

    /// Normalizes `amplitudes` first; rejects the zero vector.
    pub fn normalized(dims: Vec<usize>, amplitudes: DVector<C64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::NotNormalized {
                norm_sqr: norm * norm,
            });
        }
        Self::new(dims, amplitudes / C64::new(norm, 0.0))
    }

    pub fn basis(dims: Vec<usize>, index: usize) -> Result<Self> {
        let total = checked_product(&dims)?;
        if index >= total {
            return Err(Error::invalid(format!(
                "basis index {index} out of range {total}"
            )));
        }
        let mut v = DVector::zeros(total);
        v[index] = C64::new(1.0, 0.0);
        Ok(Self {
            dims,
            amplitudes: v,
        })
    }

    /// Computational basis state from per-site digits.
    pub fn product_basis(dims: Vec<usize>, digits: &[usize]) -> Result<Self> {
        if digits.len() != dims.len() {
            return Err(Error::DimensionMismatch {
                expected: dims.len(),
                found: digits.len(),
            });
        }
        let mut index = 0usize;
        for (&d, &x) in dims.iter().zip(digits) {
            if x >= d {
                return Err(Error::invalid(format!("digit {x} out of range {d}")));
            }
            index = index * d + x;
        }
        Self::basis(dims, index)
    }

    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        let a = &self.amplitudes;
        let b = &other.amplitudes;
        let amplitudes =
            DVector::from_fn(a.len() * b.len(), |i, _| a[i / b.len()] * b[i % b.len()]);
        StateVector { dims, amplitudes }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// `|⟨ψ|φ⟩|²`.
    pub fn fidelity(&self, other: &StateVector) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub fn to_density(&self) -> DensityOperator {
        let m = &self.amplitudes * self.amplitudes.adjoint();
        DensityOperator {
            dims: self.dims.clone(),
            matrix: HermitianMatrix::from_raw_symmetrized(m),
            clipped: false,
        }
    }

    /// Same amplitudes with a different factorization of the space.
    pub fn with_dims(&self, dims: Vec<usize>) -> Result<Self> {
        Self::new(dims, self.amplitudes.clone())
    }
}

/// `|ψ⁺_d⟩ = (1/√d) Σᵢ |ii⟩`.
pub fn max_entangled(d: usize) -> Result<StateVector> {
    if d < 2 {
        return Err(Error::invalid("maximally entangled state needs d >= 2"));
    }
    let amp = C64::new(1.0 / (d as f64).sqrt(), 0.0);
    let mut v = DVector::zeros(d * d);
    for i in 0..d {
        v[i * d + i] = amp;
    }
    StateVector::new(vec![d, d], v)
}

/// Positive semidefinite, unit-trace operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    dims: Vec<usize>,
    matrix: HermitianMatrix,
    clipped: bool,
}

impl DensityOperator {
    /// Validates trace and positivity. Eigenvalues in `[−1e-10, 0)` are
    /// clipped to zero and the result renormalized; [`Self::was_clipped`]
    /// reports whether that happened.
    pub fn new(dims: Vec<usize>, matrix: HermitianMatrix) -> Result<Self> {
        let total = checked_product(&dims)?;
        if matrix.dim() != total {
            return Err(Error::DimensionMismatch {
                expected: total,
                found: matrix.dim(),
            });
        }
        let trace = matrix.trace();
        if (trace - 1.0).abs() > NORM_TOL {
            return Err(Error::BadTrace { trace });
        }
        let eig = hermitian_eigen(&matrix);
        let min = eig.values[0];
        if min < -CLIP_TOL {
            return Err(Error::NotPositive {
                min_eigenvalue: min,
            });
        }
        if min >= 0.0 {
            return Ok(Self {
                dims,
                matrix,
                clipped: false,
            });
        }
        let clipped: Vec<f64> = eig.values.iter().map(|&x| x.max(0.0)).collect();
        let total_weight: f64 = clipped.iter().sum();
        let mut scaled = eig.vectors.clone();
        for (c, &w) in clipped.iter().enumerate() {
            scaled.column_mut(c).scale_mut(w / total_weight);
        }
        let m = scaled * eig.vectors.adjoint();
        Ok(Self {
            dims,
            matrix: HermitianMatrix::from_raw_symmetrized(m),
            clipped: true,
        })
    }

    pub fn from_pure(psi: &StateVector) -> Self {
        psi.to_density()
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Result<Self> {
        let total = checked_product(&dims)?;
        Ok(Self {
            dims,
            matrix: HermitianMatrix::identity(total).scale(1.0 / total as f64),
            clipped: false,
        })
    }

    /// Convex combination `Σ pᵢ ρᵢ`; weights must be nonnegative and sum to 1.
    pub fn mixture(parts: &[(f64, DensityOperator)]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::invalid("empty mixture"))?;
        let dims = first.1.dims.clone();
        let n = first.1.dim();
        let mut acc = DMatrix::<C64>::zeros(n, n);
        let mut weight = 0.0;
        for (p, rho) in parts {
            if *p < 0.0 || !p.is_finite() {
                return Err(Error::invalid("mixture weights must be nonnegative"));
            }
            if rho.dims != dims {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: rho.dim(),
                });
            }
            acc += rho.matrix.matrix() * C64::new(*p, 0.0);
            weight += p;
        }
        if (weight - 1.0).abs() > NORM_TOL {
            return Err(Error::invalid(format!("mixture weights sum to {weight}")));
        }
        Self::new(dims, HermitianMatrix::from_raw_symmetrized(acc))
    }

    pub fn tensor(&self, other: &DensityOperator) -> DensityOperator {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        DensityOperator {
            dims,
            matrix: HermitianMatrix::from_raw_symmetrized(kron(
                self.matrix.matrix(),
                other.matrix.matrix(),
            )),
            clipped: self.clipped || other.clipped,
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn was_clipped(&self) -> bool {
        self.clipped
    }

    pub fn purity(&self) -> f64 {
        let m = self.matrix.matrix();
        m.iter().map(|z| z.norm_sqr()).sum()
    }

    pub(crate) fn from_parts_unchecked(dims: Vec<usize>, matrix: HermitianMatrix) -> Self {
        Self {
            dims,
            matrix,
            clipped: false,
        }
    }
}
