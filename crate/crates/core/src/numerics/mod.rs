//! Numerical kernels: dense Hermitian eigendecomposition and SVD, a banded
//! lowest-eigenpair solver, restarted Lanczos, scalar minimization and a
//! seedable random source.

pub mod banded;
pub mod hermitian;
pub mod lanczos;
pub mod minimize;
pub mod rng;
pub mod svd;

pub use banded::{LowestEigenpair, SymBanded};
pub use hermitian::{
    default_tolerance, eigvalsh, hermitian_eigen, spectral_map, Eigen, HermitianMatrix,
};
pub use lanczos::{lanczos_lowest, LanczosOptions, LanczosResult};
pub use minimize::{scalar_minimize, MinimizeOptions, Minimum};
pub use rng::RandomSource;
pub use svd::{svd, Svd};

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    DMatrix::from_fn(ar * br, ac * bc, |r, c| {
        a[(r / br, c / bc)] * b[(r % br, c % bc)]
    })
}
