//! Simple undirected graphs stored as bit-packed adjacency rows.
//!
//! Vertices are `0..n`. Row `i` is a `u128` whose bit `j` is set iff `i` and
//! `j` are adjacent, which caps graphs at [`MAX_VERTICES`] vertices. That is
//! far above every strongly regular family we work with and lets common
//! neighbour counts reduce to `popcount(row_i & row_j)`.

mod graph6;
mod iso;
mod srg;

pub use graph6::{encode_graph6, parse_graph6, read_graph6_file, CatalogError, Graph6Error};
pub use iso::{brute_force_isomorphic, common_neighbors_triple, permute, BRUTE_FORCE_MAX_VERTICES};
pub use srg::{
    adjacency_power_coeffs, detect_srg, srg_identity_residual, NotStronglyRegular, PowerCoefficients, SrgParams,
};

use nalgebra::DMatrix;
use thiserror::Error;

/// Largest vertex count a [`Graph`] can hold.
pub const MAX_VERTICES: usize = 128;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph must have at least one vertex")]
    NoVertices,
    #[error("{n} vertices exceeds the supported maximum of {MAX_VERTICES}")]
    TooManyVertices { n: usize },
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("adjacency matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("adjacency matrix must be square, got {rows} rows and a row of length {len}")]
    NotSquare { rows: usize, len: usize },
    #[error("permutation is not a bijection on {n} vertices")]
    NotBijection { n: usize },
    #[error("brute-force isomorphism is limited to {max} vertices, got {n}")]
    TooLargeForBruteForce { n: usize, max: usize },
}

/// A simple undirected graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    rows: Vec<u128>,
    neighbors: Vec<Vec<usize>>,
}

impl Graph {
    fn from_rows_unchecked(rows: Vec<u128>) -> Self {
        let neighbors = rows.iter().map(|&r| (0..rows.len()).filter(|&j| r >> j & 1 == 1).collect()).collect();
        Graph { rows, neighbors }
    }

    fn check_size(n: usize) -> Result<(), GraphError> {
        match n {
            0 => Err(GraphError::NoVertices),
            n if n > MAX_VERTICES => Err(GraphError::TooManyVertices { n }),
            _ => Ok(()),
        }
    }

    /// Builds a graph from an edge list. Duplicate edges are merged.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        Self::check_size(n)?;
        let mut rows = vec![0u128; n];
        for &(a, b) in edges {
            for v in [a, b] {
                if v >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: v, n });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            rows[a] |= 1 << b;
            rows[b] |= 1 << a;
        }
        Ok(Self::from_rows_unchecked(rows))
    }

    /// Builds a graph from a dense 0/1 matrix, validating symmetry and the
    /// zero diagonal.
    pub fn from_matrix<R: AsRef<[bool]>>(matrix: &[R]) -> Result<Self, GraphError> {
        let n = matrix.len();
        Self::check_size(n)?;
        let mut rows = vec![0u128; n];
        for (i, row) in matrix.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(GraphError::NotSquare { rows: n, len: row.len() });
            }
            for (j, &a) in row.iter().enumerate() {
                if a {
                    rows[i] |= 1 << j;
                }
            }
        }
        for i in 0..n {
            if rows[i] >> i & 1 == 1 {
                return Err(GraphError::SelfLoop(i));
            }
            for j in 0..i {
                if (rows[i] >> j & 1) != (rows[j] >> i & 1) {
                    return Err(GraphError::NotSymmetric(i, j));
                }
            }
        }
        Ok(Self::from_rows_unchecked(rows))
    }

    /// Builds a graph from packed adjacency rows.
    pub fn from_rows(rows: Vec<u128>) -> Result<Self, GraphError> {
        let n = rows.len();
        Self::check_size(n)?;
        let matrix: Vec<Vec<bool>> = rows
            .iter()
            .map(|r| {
                if n < 128 && r >> n != 0 {
                    Err(GraphError::VertexOutOfRange { vertex: 127 - r.leading_zeros() as usize, n })
                } else {
                    Ok((0..n).map(|j| r >> j & 1 == 1).collect())
                }
            })
            .collect::<Result<_, _>>()?;
        Self::from_matrix(&matrix)
    }

    pub fn complete(n: usize) -> Result<Self, GraphError> {
        let edges: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        Self::from_edges(n, &edges)
    }

    pub fn cycle(n: usize) -> Result<Self, GraphError> {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).filter(|(a, b)| a != b).collect();
        Self::from_edges(n, &edges)
    }

    pub fn path(n: usize) -> Result<Self, GraphError> {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_edges(n, &edges)
    }

    /// The Petersen graph, labelled outer 5-cycle `0..5`, inner pentagram `5..10`.
    pub fn petersen() -> Self {
        let mut edges = Vec::with_capacity(15);
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        Self::from_edges(10, &edges).expect("static edge list")
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    /// Packed neighbourhood of `i`.
    #[inline]
    pub fn row(&self, i: usize) -> u128 {
        self.rows[i]
    }

    #[inline]
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    #[inline]
    pub fn degree(&self, i: usize) -> usize {
        self.neighbors[i].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.neighbors.iter().map(Vec::len).collect()
    }

    /// The common degree if the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.degree(0);
        self.neighbors.iter().all(|nb| nb.len() == d).then_some(d)
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges as `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.neighbors.iter().enumerate().flat_map(|(i, nb)| nb.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
    }

    /// Number of common neighbours of `i` and `j`, i.e. `(A^2)_ij`.
    #[inline]
    pub fn common_neighbors(&self, i: usize, j: usize) -> usize {
        (self.rows[i] & self.rows[j]).count_ones() as usize
    }

    pub fn is_connected(&self) -> bool {
        let n = self.n();
        let full = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
        let mut seen = 1u128;
        let mut frontier = 1u128;
        while frontier != 0 {
            let mut next = 0u128;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= self.rows[v];
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen == full
    }

    pub fn complement(&self) -> Graph {
        let n = self.n();
        let full = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
        let rows = self.rows.iter().enumerate().map(|(i, r)| !r & full & !(1u128 << i)).collect();
        Self::from_rows_unchecked(rows)
    }

    pub fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v < self.n() {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange { vertex: v, n: self.n() })
        }
    }

    /// Dense adjacency matrix as floats.
    pub fn adjacency_matrix(&self) -> DMatrix<f64> {
        let n = self.n();
        DMatrix::from_fn(n, n, |i, j| if self.adjacent(i, j) { 1.0 } else { 0.0 })
    }

    /// Dense adjacency matrix as integers, for exact arithmetic.
    pub fn adjacency_i64(&self) -> Vec<Vec<i64>> {
        (0..self.n()).map(|i| (0..self.n()).map(|j| self.adjacent(i, j) as i64).collect()).collect()
    }
}
