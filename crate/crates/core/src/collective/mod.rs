//! Symmetric-subspace engine: Dicke states, collective spin operators, the
//! LMG spectrum, symmetrized correlators under the `σ_z`,
//! `cos θ σ_z + sin θ σ_x` measurement family, Bell operators and violation
//! scans over `θ` and `n`.

pub mod bell;
pub mod spin;

pub use bell::{
    bell_expectation, bell_operator, bell_operator_matrix, collective_observables, dicke_violation,
    lowest_bell_eigenpair, max_violation, ratio_scan, symmetrized_correlators, theta_sweep,
    DickeViolation, ExpressionFamily, ScanRow, SweepRow, ThetaSearch, Violation,
};
pub use spin::{
    collective_operator, dicke_state, lmg_energies, CollectiveOperator, LmgSpectrum, SpinComponent,
    SymmetricState,
};
