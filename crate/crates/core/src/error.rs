use thiserror::Error;

use crate::graph::GraphError;
use crate::Statistics;

/// Errors from building or running a walk.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum WalkError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("a walk needs at least one particle")]
    NoParticles,
    #[error("{particles} fermions do not fit on {vertices} sites")]
    TooManyFermions { particles: usize, vertices: usize },
    #[error("{statistics:?} statistics are not supported here")]
    UnsupportedStatistics { statistics: Statistics },
    #[error("state space of dimension {dim} exceeds the ceiling of {max}")]
    TooLarge { dim: u128, max: usize },
    #[error("basis is over {basis} sites but the graph has {graph} vertices")]
    VertexCountMismatch { basis: usize, graph: usize },
    #[error(
        "eigendecomposition of the {dim}x{dim} Hamiltonian failed \
         (Frobenius norm {frobenius_norm:.3e}, max asymmetry {asymmetry:.3e}, reconstruction error {residual:.3e})"
    )]
    Eigendecomposition { dim: usize, frobenius_norm: f64, asymmetry: f64, residual: f64 },
    #[error("SRG adjacency eigenvalues collide ({0}); the 1/J/A basis is degenerate")]
    DegenerateSpectrum(String),
    #[error("Grover coin needs a regular graph: vertex {vertex} has degree {degree}, vertex 0 has {expected}")]
    NotRegular { vertex: usize, degree: usize, expected: usize },
    #[error("Grover coin needs degree at least 1")]
    NoEdges,
    #[error("({0}, {1}) is not an arc of the graph")]
    InvalidArc(usize, usize),
    #[error("state has dimension {found}, operator expects {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("inconsistent vertex relations: {0}")]
    InconsistentRelations(&'static str),
}
