//! Finite-dimensional state toolkit: pure and mixed states, Schmidt
//! decomposition, partial trace and transpose, the PPT test, entropies,
//! negativity, mutual information and Haar-random sampling.

pub mod entropy;
pub mod haar;
pub mod ops;
pub mod schmidt;
pub mod state;
pub mod wire;

pub use entropy::{
    entanglement_entropy, entropy_of_spectrum, mutual_information, reduced_entropy, renyi_entropy,
    renyi_of_spectrum, vn_entropy, LogBase,
};
pub use haar::{haar_state, page_experiment, PageStats};
pub use ops::{
    log_negativity, negativity, partial_trace, partial_transpose, ppt_report, ppt_report_with_tol,
    reduced_state, PptReport,
};
pub use schmidt::{
    coefficient_matrix, is_separable_pure, schmidt_decompose, schmidt_rank, schmidt_spectrum,
    SchmidtData,
};
pub use state::{max_entangled, Bipartition, DensityOperator, Side, StateVector};
pub use wire::{parse_state_fixture, ComplexArrayWire, StateFixture};
