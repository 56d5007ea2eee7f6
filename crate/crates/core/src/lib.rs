//! Quantum-walk graph certificates for strongly regular graphs.
//!
//! The crate builds coined discrete-time (Grover coin, arc space) and
//! continuous-time (tight-binding, Fock space) walk evolutions, turns them into
//! sorted-multiset graph certificates, and checks the closed-form amplitudes
//! and multiplicities those walks obey on strongly regular graphs.
//!
//! - [`graph`]: graphs, graph6 I/O, SRG detection and small-graph utilities.
//! - [`ct_walk`]: continuous-time noninteracting bosons and fermions.
//! - [`dt_walk`]: the Grover-coined step operator and its closed forms.
//! - [`certificates`]: `L0`, `L1`, `L2` and edge-state `L2~` certificates.
//! - [`analytics`]: multiplicity counting and the family verification harness.

// `!(x <= tol)` is used on purpose so that NaN deviations fail the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytics;
pub mod certificates;
pub mod ct_walk;
pub mod dt_walk;
mod error;
pub mod graph;

use serde::{Deserialize, Serialize};

pub use error::WalkError;
pub use graph::{Graph, SrgParams};

/// Exchange statistics of the walkers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistics {
    Boson,
    Fermion,
    Distinguishable,
}
