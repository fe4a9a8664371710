//! Permutationally invariant two-body Bell expressions in the five
//! symmetrized correlators, their exact classical bounds over deterministic
//! strategy counts, and the Rioja, Murcia and Dicke families.

pub mod bound;
pub mod expression;
pub mod families;

pub use bound::{classical_bound_symmetric, SymmetricBound, MAX_SYMMETRIC_PARTIES};
pub use expression::{
    correlators_of_counts, parse_pi_expression, BoundProvenance, PIBellExpression, StrategyCounts,
    SymmetrizedCorrelators,
};
pub use families::{
    dicke_expression, murcia, rioja, rioja_bound_table, Branch, RiojaGrid, RiojaParams, RiojaRow,
};
