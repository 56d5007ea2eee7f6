//! Continuous-time walks of noninteracting particles.
//!
//! The Hamiltonian is the tight-binding model `H = -Σ A_ij c†_i c_j` restricted
//! to a fixed particle number. States are occupation lists sorted ascending;
//! bosonic hops carry the ladder factor `√(n_j (n_i + 1))` and fermionic hops
//! the sign `(-1)^(occupied sites strictly between i and j)`.
//!
//! With `H = -A` for one particle, `U(t) = e^{-itH} = e^{+itA}`.

use std::collections::HashMap;
use std::io::Write;

use itertools::Itertools;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::graph::{Graph, SrgParams};
use crate::{Statistics, WalkError};

/// Ceiling on Fock-space dimension for dense evolution.
pub const MAX_BASIS_DIM: usize = 4096;

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Occupation-list basis for `p` particles on `n` sites.
#[derive(Debug, Clone)]
pub struct FockBasis {
    n_vertices: usize,
    n_particles: usize,
    statistics: Statistics,
    states: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl FockBasis {
    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    pub fn statistics(&self) -> Statistics {
        self.statistics
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[Vec<usize>] {
        &self.states
    }

    /// Index of an occupation list, which must already be sorted.
    pub fn index_of(&self, state: &[usize]) -> Option<usize> {
        self.index.get(state).copied()
    }

    /// Index of the state occupying the given sites in any order. For
    /// fermions the second value is the sign of the reordering.
    pub fn index_of_unsorted(&self, sites: &[usize]) -> Option<(usize, f64)> {
        let mut sorted = sites.to_vec();
        let mut sign = 1.0;
        // Insertion sort, counting transpositions.
        for a in 1..sorted.len() {
            let mut b = a;
            while b > 0 && sorted[b - 1] > sorted[b] {
                sorted.swap(b - 1, b);
                sign = -sign;
                b -= 1;
            }
        }
        let sign = if self.statistics == Statistics::Fermion { sign } else { 1.0 };
        self.index_of(&sorted).map(|i| (i, sign))
    }

    /// Image of every basis state under the vertex relabelling `v -> perm[v]`,
    /// as `(new index, sign)`.
    pub fn permutation_image(&self, perm: &[usize]) -> Vec<(usize, f64)> {
        self.states
            .iter()
            .map(|s| {
                let sites: Vec<usize> = s.iter().map(|&v| perm[v]).collect();
                self.index_of_unsorted(&sites).expect("permuted state lies in the basis")
            })
            .collect()
    }
}

/// Builds the complete, lexicographically sorted basis.
pub fn build_basis(n: usize, p: usize, statistics: Statistics) -> Result<FockBasis, WalkError> {
    if p == 0 {
        return Err(WalkError::NoParticles);
    }
    let dim = match statistics {
        Statistics::Boson => binomial((n + p - 1) as u128, p as u128),
        Statistics::Fermion if p > n => return Err(WalkError::TooManyFermions { particles: p, vertices: n }),
        Statistics::Fermion => binomial(n as u128, p as u128),
        Statistics::Distinguishable => return Err(WalkError::UnsupportedStatistics { statistics }),
    };
    if dim > MAX_BASIS_DIM as u128 {
        return Err(WalkError::TooLarge { dim, max: MAX_BASIS_DIM });
    }
    let states: Vec<Vec<usize>> = match statistics {
        Statistics::Boson => (0..n).combinations_with_replacement(p).collect(),
        _ => (0..n).combinations(p).collect(),
    };
    let index = states.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
    Ok(FockBasis { n_vertices: n, n_particles: p, statistics, states, index })
}

/// Tight-binding Hamiltonian on a Fock basis.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    pub basis: FockBasis,
    pub matrix: DMatrix<f64>,
}

pub fn build_hamiltonian(g: &Graph, basis: &FockBasis) -> Result<Hamiltonian, WalkError> {
    if basis.n_vertices != g.n() {
        return Err(WalkError::VertexCountMismatch { basis: basis.n_vertices, graph: g.n() });
    }
    let dim = basis.len();
    let mut h = DMatrix::zeros(dim, dim);
    let mut occupation = vec![0usize; g.n()];
    for (col, state) in basis.states.iter().enumerate() {
        occupation.iter_mut().for_each(|o| *o = 0);
        for &v in state {
            occupation[v] += 1;
        }
        for &j in state.iter().dedup() {
            let pos = state.iter().position(|&v| v == j).expect("occupied");
            for &i in g.neighbors(j) {
                let amplitude = match basis.statistics {
                    Statistics::Boson => ((occupation[j] * (occupation[i] + 1)) as f64).sqrt(),
                    _ => {
                        if occupation[i] > 0 {
                            continue;
                        }
                        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
                        let between = occupation[lo + 1..hi].iter().filter(|&&o| o > 0).count();
                        if between % 2 == 0 {
                            1.0
                        } else {
                            -1.0
                        }
                    }
                };
                let mut next = state.clone();
                next[pos] = i;
                next.sort_unstable();
                let row = basis.index_of(&next).expect("hop stays in the basis");
                h[(row, col)] -= amplitude;
            }
        }
    }
    Ok(Hamiltonian { basis: basis.clone(), matrix: h })
}

/// Spectral decomposition `H = V diag(λ) Vᵀ`, reusable across times.
#[derive(Debug, Clone)]
pub struct CtEvolution {
    pub eigenvalues: DVector<f64>,
    pub eigenvectors: DMatrix<f64>,
}

impl CtEvolution {
    pub fn new(h: &Hamiltonian) -> Result<Self, WalkError> {
        let m = &h.matrix;
        let dim = m.nrows();
        let asymmetry = (m - m.transpose()).amax();
        let failure =
            |residual: f64| WalkError::Eigendecomposition { dim, frobenius_norm: m.norm(), asymmetry, residual };
        if asymmetry > 0.0 {
            return Err(failure(f64::NAN));
        }
        let eig = SymmetricEigen::try_new(m.clone(), f64::EPSILON, 10_000).ok_or_else(|| failure(f64::NAN))?;
        let v = &eig.eigenvectors;
        let residual = (v * DMatrix::from_diagonal(&eig.eigenvalues) * v.transpose() - m).amax();
        if !(residual <= 1e-10 * m.amax().max(1.0)) {
            return Err(failure(residual));
        }
        Ok(CtEvolution { eigenvalues: eig.eigenvalues, eigenvectors: eig.eigenvectors })
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `U(t) = V diag(e^{-iλt}) Vᵀ`.
    pub fn unitary(&self, t: f64) -> DMatrix<Complex64> {
        let v = &self.eigenvectors;
        let mut vc = v.clone();
        let mut vs = v.clone();
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            let (s, c) = (lambda * t).sin_cos();
            vc.column_mut(k).scale_mut(c);
            vs.column_mut(k).scale_mut(-s);
        }
        let re = &vc * v.transpose();
        let im = &vs * v.transpose();
        re.zip_map(&im, Complex64::new)
    }
}

/// One-shot `e^{-itH}`.
pub fn evolve_ct(h: &Hamiltonian, t: f64) -> Result<DMatrix<Complex64>, WalkError> {
    Ok(CtEvolution::new(h)?.unitary(t))
}

/// Largest entry modulus of a complex matrix.
pub fn max_modulus(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `max |(U†U - 1)_mn|`.
pub fn unitarity_deviation(u: &DMatrix<Complex64>) -> f64 {
    let n = u.ncols();
    max_modulus(&(u.adjoint() * u - DMatrix::identity(n, n)))
}

/// `U_{C,1}(t) = α·1 + β·J + γ·A` on any member of an SRG family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SrgCtCoefficients {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub gamma: Complex64,
}

impl SrgCtCoefficients {
    pub fn matrix(&self, g: &Graph) -> DMatrix<Complex64> {
        let n = g.n();
        DMatrix::from_fn(n, n, |i, j| self.entry(i == j, g.adjacent(i, j)))
    }

    #[inline]
    pub fn entry(&self, same: bool, adjacent: bool) -> Complex64 {
        let mut z = self.beta;
        if same {
            z += self.alpha;
        }
        if adjacent {
            z += self.gamma;
        }
        z
    }
}

/// Single-particle evolution coefficients from the three-point SRG spectrum.
///
/// On the all-ones eigenvector `J = N`; on the other two eigenspaces `J = 0`,
/// so `f(A) = e^{itA}` fixes `α + Nβ + dγ = f(d)`, `α + rγ = f(r)`,
/// `α + sγ = f(s)`.
pub fn srg_ct_coeffs(params: &SrgParams, t: f64) -> Result<SrgCtCoefficients, WalkError> {
    let (d, r, s) = params.eigenvalues();
    if (r - s).abs() < 1e-12 || (d - r).abs() < 1e-12 || (d - s).abs() < 1e-12 {
        return Err(WalkError::DegenerateSpectrum(format!("{d}, {r}, {s}")));
    }
    let f = |x: f64| Complex64::from_polar(1.0, t * x);
    let gamma = (f(r) - f(s)) / (r - s);
    let alpha = f(r) - gamma * r;
    let beta = (f(d) - alpha - gamma * d) / params.n as f64;
    Ok(SrgCtCoefficients { alpha, beta, gamma })
}

/// Max residual of `u` after projecting onto `span{1, J, A}` (Frobenius
/// least squares).
pub fn srg_algebra_residual(g: &Graph, u: &DMatrix<Complex64>) -> f64 {
    let n = g.n();
    let basis: [DMatrix<f64>; 3] = [DMatrix::identity(n, n), DMatrix::from_element(n, n, 1.0), g.adjacency_matrix()];
    let gram = DMatrix::from_fn(3, 3, |a, b| basis[a].dot(&basis[b]));
    let rhs_re = DVector::from_fn(3, |a, _| basis[a].dot(&u.map(|z| z.re)));
    let rhs_im = DVector::from_fn(3, |a, _| basis[a].dot(&u.map(|z| z.im)));
    let lu = gram.lu();
    let (Some(cre), Some(cim)) = (lu.solve(&rhs_re), lu.solve(&rhs_im)) else {
        return f64::INFINITY;
    };
    let mut fit = DMatrix::<Complex64>::zeros(n, n);
    for k in 0..3 {
        let c = Complex64::new(cre[k], cim[k]);
        fit += basis[k].map(|x| c * x);
    }
    max_modulus(&(u - fit))
}

/// Writes a complex matrix as `row,col,re,im` lines with a header.
pub fn write_matrix_csv<W: Write>(m: &DMatrix<Complex64>, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["row", "col", "re", "im"])?;
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            let z = m[(r, c)];
            w.serialize((r, c, z.re, z.im))?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_bases() {
        let b = build_basis(2, 2, Statistics::Boson).unwrap();
        assert_eq!(b.states(), &[vec![0, 0], vec![0, 1], vec![1, 1]]);
        let f = build_basis(3, 2, Statistics::Fermion).unwrap();
        assert_eq!(f.states(), &[vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(build_basis(25, 2, Statistics::Boson).unwrap().len(), 325);
        assert_eq!(
            build_basis(2, 3, Statistics::Fermion).unwrap_err(),
            WalkError::TooManyFermions { particles: 3, vertices: 2 }
        );
        assert_eq!(build_basis(4, 0, Statistics::Boson).unwrap_err(), WalkError::NoParticles);
        assert!(matches!(build_basis(26, 4, Statistics::Boson), Err(WalkError::TooLarge { .. })));
    }

    #[test]
    fn basis_sizes_match_binomials() {
        for n in 1..8 {
            for p in 1..5 {
                let b = build_basis(n, p, Statistics::Boson).unwrap();
                assert_eq!(b.len() as u128, binomial((n + p - 1) as u128, p as u128));
                for (i, s) in b.states().iter().enumerate() {
                    assert_eq!(b.index_of(s), Some(i));
                }
                assert!(b.states().windows(2).all(|w| w[0] < w[1]));
                if p <= n {
                    let f = build_basis(n, p, Statistics::Fermion).unwrap();
                    assert_eq!(f.len() as u128, binomial(n as u128, p as u128));
                }
            }
        }
    }

    #[test]
    fn single_particle_hamiltonian_is_minus_adjacency() {
        let g = Graph::petersen();
        for stats in [Statistics::Boson, Statistics::Fermion] {
            let b = build_basis(10, 1, stats).unwrap();
            let h = build_hamiltonian(&g, &b).unwrap();
            assert_eq!(h.matrix, -g.adjacency_matrix());
        }
    }

    #[test]
    fn two_bosons_on_an_edge() {
        // a†_0 a_1 |0,1> = √2 |0,0>; the 3-state matrix is -[[0,√2,0],[√2,0,√2],[0,√2,0]].
        let g = Graph::complete(2).unwrap();
        let b = build_basis(2, 2, Statistics::Boson).unwrap();
        let h = build_hamiltonian(&g, &b).unwrap();
        let r2 = 2f64.sqrt();
        let expected = DMatrix::from_row_slice(3, 3, &[0.0, -r2, 0.0, -r2, 0.0, -r2, 0.0, -r2, 0.0]);
        assert!((h.matrix - expected).amax() < 1e-15);
    }

    #[test]
    fn two_fermions_on_an_edge() {
        let g = Graph::complete(2).unwrap();
        let b = build_basis(2, 2, Statistics::Fermion).unwrap();
        let h = build_hamiltonian(&g, &b).unwrap();
        assert_eq!(h.matrix, DMatrix::zeros(1, 1));
    }

    #[test]
    fn fermion_sign_on_a_path() {
        // Path 0-1-2 with fermions at {0,2}: hopping 2 -> 1 passes no occupied
        // site, 0 -> 1 neither, so both matrix elements are -1.
        let g = Graph::path(3).unwrap();
        let b = build_basis(3, 2, Statistics::Fermion).unwrap();
        let h = build_hamiltonian(&g, &b).unwrap();
        let s02 = b.index_of(&[0, 2]).unwrap();
        let s01 = b.index_of(&[0, 1]).unwrap();
        let s12 = b.index_of(&[1, 2]).unwrap();
        assert_eq!(h.matrix[(s01, s02)], -1.0);
        assert_eq!(h.matrix[(s12, s02)], -1.0);
        // Triangle: {0,1} -> {1,2} hops 0 -> 2 across occupied site 1.
        let tri = Graph::complete(3).unwrap();
        let h = build_hamiltonian(&tri, &b).unwrap();
        assert_eq!(h.matrix[(s12, s01)], 1.0);
        assert_eq!(h.matrix, h.matrix.transpose());
    }

    #[test]
    fn mismatch_rejected() {
        let b = build_basis(4, 1, Statistics::Boson).unwrap();
        assert_eq!(
            build_hamiltonian(&Graph::petersen(), &b).unwrap_err(),
            WalkError::VertexCountMismatch { basis: 4, graph: 10 }
        );
    }

    #[test]
    fn evolution_identity_and_group_property() {
        let g = Graph::petersen();
        let b = build_basis(10, 2, Statistics::Boson).unwrap();
        let h = build_hamiltonian(&g, &b).unwrap();
        let ev = CtEvolution::new(&h).unwrap();
        let id = DMatrix::<Complex64>::identity(b.len(), b.len());
        assert!(max_modulus(&(ev.unitary(0.0) - &id)) < 1e-12);
        let prod = ev.unitary(0.7) * ev.unitary(-0.7);
        assert!(max_modulus(&(prod - id)) < 1e-12);
        assert!(unitarity_deviation(&ev.unitary(1.3)) < 1e-12);
    }

    #[test]
    fn petersen_closed_form() {
        let g = Graph::petersen();
        let p = crate::graph::detect_srg(&g).unwrap();
        let b = build_basis(10, 1, Statistics::Boson).unwrap();
        let ev = CtEvolution::new(&build_hamiltonian(&g, &b).unwrap()).unwrap();
        for t in [0.0, 0.5, 1.0, 2.0] {
            let c = srg_ct_coeffs(&p, t).unwrap();
            assert!(max_modulus(&(ev.unitary(t) - c.matrix(&g))) < 1e-12, "t = {t}");
        }
        let c0 = srg_ct_coeffs(&p, 0.0).unwrap();
        assert!((c0.alpha - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(c0.beta.norm() < 1e-15 && c0.gamma.norm() < 1e-15);
    }

    #[test]
    fn csv_dump() {
        let m = DMatrix::from_row_slice(1, 2, &[Complex64::new(1.0, 0.0), Complex64::new(0.0, -0.5)]);
        let mut buf = Vec::new();
        write_matrix_csv(&m, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "row,col,re,im\n0,0,1.0,0.0\n0,1,0.0,-0.5\n");
    }
}
