//! Exact evaluation of percolation events and lace-expansion coefficients on
//! small graphs.

pub mod enumerate;
pub mod events;
pub mod identity;
pub mod stack;

pub use enumerate::{
    chi_exact, chi_series, pi0_cycle_split, pi0_exact, pi0_series, pi_n_exact, pi_n_series, pi_n_with, tau_all_exact,
    tau_exact, tau_min_length_exact, tau_series, CycleSplit, Truncation,
};
pub use events::{BondConfig, SmallGraph, VertexSet};
pub use identity::{
    identity_residual_series, recursion_residual, recursion_residuals, IdentityReport, OrderViolation,
    RecursionResidual,
};
pub use stack::{pi_n_brute_force, LevelStack};
