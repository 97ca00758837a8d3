//! Bond percolation on hypercubes and tori: exact lace-expansion oracles for
//! small graphs, Monte Carlo estimators for large ones, Fourier diagrams, and
//! the `1/Omega` expansion of the critical point.

pub mod diagrams;
pub mod error;
pub mod graph;
pub mod mc;
pub mod oracle;
pub mod poly;
pub mod report;
pub mod rng;
pub mod series;

pub use error::{Error, Result};
pub use graph::{BondId, DirectedBond, GraphKind, GraphModel, VertexId};
pub use mc::{Estimate, McConfig, PseudoCriticalResult, SolveConfig};
pub use oracle::{BondConfig, LevelStack};
pub use poly::RationalPolynomial;
pub use series::{FitResult, InvOmegaSeries};
