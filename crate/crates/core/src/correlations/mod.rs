//! Device-independent layer: behaviors `P(a|x)` in the `(n, m, d)` scenario,
//! nonsignalling checks, deterministic strategies and brute-force local
//! bounds, the correlator representation for two outcomes, CHSH, and
//! translation-invariant two-body expressions.

pub mod behavior;
pub mod correlators;
pub mod functional;
pub mod quantum;
pub mod ti;

pub use behavior::{
    is_nonsignalling, Behavior, DeterministicStrategy, NonsignallingReport, Scenario,
    SignallingWitness,
};
pub use correlators::{behavior_from_correlators, correlators_from_behavior, CorrelatorSet};
pub use functional::{
    chsh_correlator_form, chsh_probability_form, local_bound_bruteforce, parse_functional,
    strategy_count, BellFunctional, BellFunctionalWire, Direction, LocalBound,
};
pub use quantum::{
    behavior_from_quantum, chsh_quantum_demo, chsh_value, qubit_projective, ChshDemo,
    MeasurementSet,
};
pub use ti::{parse_ti_expression, ti_classical_bound, TIBound, TIExpression};
