//! One-dimensional chains: canonical MPS with truncation bounds, exact
//! ground states of nearest-neighbor Hamiltonians, block entropies, and
//! thermal mutual information against area-law bounds. Entropies are in
//! bits except the quantum thermal mutual information, which is in nats.

pub mod hamiltonian;
pub mod mps;
pub mod thermal;

pub use hamiltonian::{
    block_entropy_curve, ground_state_exact, pauli_x, pauli_y, pauli_z, Boundary, ChainHamiltonian,
    EntropyRow, GroundState, DENSE_GROUND_STATE_DIM, MAX_GROUND_STATE_DIM,
};
pub use mps::{
    canonical_residuals, cut_spectra, mps_from_dense, random_chain_state, renyi_tail_bound,
    tail_weight, truncate, truncation_bound, MpsState, SiteResiduals, Truncation, SVD_CUTOFF,
};
pub use thermal::{
    classical_gibbs_mutual_info, parse_classical_chain, thermal_beta_scan,
    thermal_mutual_info_check, thermal_state, ClassicalChain, ThermalCheck, MAX_GIBBS_CONFIGS,
    MAX_THERMAL_DIM,
};
