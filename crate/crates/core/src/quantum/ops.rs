use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::Result;
use crate::numerics::{eigvalsh, HermitianMatrix};
use crate::quantum::schmidt::coefficient_matrix;
use crate::quantum::state::{Bipartition, DensityOperator, Side, StateVector};

/// Eigenvalues below `−PPT_TOL` count as negative.
pub const PPT_TOL: f64 = 1e-10;

fn kept_dims(dims: &[usize], bip: Bipartition, keep: Side) -> Vec<usize> {
    let mut acc = 1;
    for (cut, &d) in dims.iter().enumerate() {
        if acc == bip.left {
            return match keep {
                Side::Left => dims[..cut].to_vec(),
                Side::Right => dims[cut..].to_vec(),
            };
        }
        acc *= d;
    }
    match keep {
        Side::Left if acc == bip.left => dims.to_vec(),
        Side::Left => vec![bip.left],
        Side::Right => vec![bip.right],
    }
}

pub fn partial_trace(
    rho: &DensityOperator,
    bip: Bipartition,
    keep: Side,
) -> Result<DensityOperator> {
    bip.check(rho.dim())?;
    let (m, n) = (bip.left, bip.right);
    let r = rho.matrix().matrix();
    let out = match keep {
        Side::Left => DMatrix::from_fn(m, m, |i, k| {
            (0..n).map(|j| r[(i * n + j, k * n + j)]).sum::<C64>()
        }),
        Side::Right => DMatrix::from_fn(n, n, |j, l| {
            (0..m).map(|i| r[(i * n + j, i * n + l)]).sum::<C64>()
        }),
    };
    let dims = kept_dims(rho.dims(), bip, keep);
    let dims = if dims.is_empty() { vec![1] } else { dims };
    Ok(DensityOperator::from_parts_unchecked(
        dims,
        HermitianMatrix::from_raw_symmetrized(out),
    ))
}

/// Reduced state of a pure state, computed as `M M†` (left) or `Mᵀ M̄` (right)
/// from the coefficient matrix.
pub fn reduced_state(psi: &StateVector, bip: Bipartition, keep: Side) -> Result<DensityOperator> {
    let c = coefficient_matrix(psi, bip)?;
    let (m, dims) = match keep {
        Side::Left => (&c * c.adjoint(), kept_dims(psi.dims(), bip, keep)),
        Side::Right => (
            c.transpose() * c.map(|z| z.conj()),
            kept_dims(psi.dims(), bip, keep),
        ),
    };
    let dims = if dims.is_empty() { vec![1] } else { dims };
    Ok(DensityOperator::from_parts_unchecked(
        dims,
        HermitianMatrix::from_raw_symmetrized(m),
    ))
}

/// Transposes the chosen factor: for `Side::Left`,
/// `⟨i j| ρ^{T_A} |k l⟩ = ⟨k j| ρ |i l⟩`.
pub fn partial_transpose(
    rho: &HermitianMatrix,
    bip: Bipartition,
    side: Side,
) -> Result<HermitianMatrix> {
    bip.check(rho.dim())?;
    let n = bip.right;
    let r = rho.matrix();
    let dim = bip.total();
    let out = DMatrix::from_fn(dim, dim, |row, col| {
        let (i, j) = (row / n, row % n);
        let (k, l) = (col / n, col % n);
        match side {
            Side::Left => r[(k * n + j, i * n + l)],
            Side::Right => r[(i * n + l, k * n + j)],
        }
    });
    Ok(HermitianMatrix::from_raw_symmetrized(out))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PptReport {
    pub negative_count: usize,
    pub min_eigenvalue: f64,
    /// True when the partial transpose has an eigenvalue below `−tol`.
    pub entangled: bool,
}

pub fn ppt_report(rho: &DensityOperator, bip: Bipartition) -> Result<PptReport> {
    ppt_report_with_tol(rho, bip, PPT_TOL)
}

pub fn ppt_report_with_tol(rho: &DensityOperator, bip: Bipartition, tol: f64) -> Result<PptReport> {
    let pt = partial_transpose(rho.matrix(), bip, Side::Right)?;
    let values = eigvalsh(&pt);
    let negative_count = values.iter().filter(|&&x| x < -tol).count();
    Ok(PptReport {
        negative_count,
        min_eigenvalue: values[0],
        entangled: negative_count > 0,
    })
}

/// Sum of the absolute values of the negative eigenvalues of `ρ^{T_B}`.
pub fn negativity(rho: &DensityOperator, bip: Bipartition) -> Result<f64> {
    let pt = partial_transpose(rho.matrix(), bip, Side::Right)?;
    Ok(eigvalsh(&pt).iter().filter(|&&x| x < 0.0).map(|x| -x).sum())
}

/// `E_N = log₂(2N + 1)`.
pub fn log_negativity(rho: &DensityOperator, bip: Bipartition) -> Result<f64> {
    Ok((2.0 * negativity(rho, bip)? + 1.0).log2())
}
