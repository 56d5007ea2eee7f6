//! Grover-coined discrete-time walks on the arc space.
//!
//! The basis state `|i, j>` (written `(i, j)` here) puts the particle on
//! vertex `i` with its coin pointing at neighbour `j`. One step applies the
//! Grover coin `-1 + (2/d) J` to the coin register and then swaps particle and
//! coin, giving
//!
//! ```text
//! <i j| U |k l> = A_ij A_kl δ_jk (2/d - δ_il)
//! ```
//!
//! Only the `N·d` arcs are stored. The unused `N² - N·d` rows and columns of
//! the vertex-pair form are identically zero.

mod closed_form;

use std::io::Write;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{Graph, WalkError};

pub use closed_form::{
    dt_element_t1_closed, dt_element_t4_closed, l1_t1_closed, l1_t3_closed, l1_t3_split, TripleRelations,
};

/// Ceiling on the dimension of a multi-particle state vector.
pub const MAX_STATE_DIM: usize = 1 << 22;

/// Lexicographically ordered arcs of a regular graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcBasis {
    n: usize,
    degree: usize,
    arcs: Vec<(usize, usize)>,
    lookup: Vec<u32>,
}

impl ArcBasis {
    pub fn new(g: &Graph) -> Result<Self, WalkError> {
        let n = g.n();
        let degree = g.degree(0);
        if let Some(v) = (0..n).find(|&v| g.degree(v) != degree) {
            return Err(WalkError::NotRegular { vertex: v, degree: g.degree(v), expected: degree });
        }
        if degree == 0 {
            return Err(WalkError::NoEdges);
        }
        let arcs: Vec<(usize, usize)> = (0..n).flat_map(|i| g.neighbors(i).iter().map(move |&j| (i, j))).collect();
        let mut lookup = vec![u32::MAX; n * n];
        for (a, &(i, j)) in arcs.iter().enumerate() {
            lookup[i * n + j] = a as u32;
        }
        Ok(ArcBasis { n, degree, arcs, lookup })
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn arc(&self, index: usize) -> (usize, usize) {
        self.arcs[index]
    }

    pub fn index(&self, i: usize, j: usize) -> Option<usize> {
        if i >= self.n || j >= self.n {
            return None;
        }
        match self.lookup[i * self.n + j] {
            u32::MAX => None,
            a => Some(a as usize),
        }
    }

    fn require(&self, (i, j): (usize, usize)) -> Result<usize, WalkError> {
        self.index(i, j).ok_or(WalkError::InvalidArc(i, j))
    }

    /// Index of the arc `(j, i)` for every arc `(i, j)`.
    pub fn reversal(&self) -> Vec<usize> {
        self.arcs.iter().map(|&(i, j)| self.index(j, i).expect("arcs come in pairs")).collect()
    }
}

/// The single-step operator, stored column-wise with exactly `d` nonzeros
/// per column.
#[derive(Debug, Clone)]
pub struct DtStepOperator {
    basis: ArcBasis,
    targets: Vec<u32>,
    values: Vec<f64>,
}

pub fn build_step_operator(g: &Graph) -> Result<DtStepOperator, WalkError> {
    let basis = ArcBasis::new(g)?;
    let d = basis.degree;
    let transmit = 2.0 / d as f64;
    let reflect = 2.0 / d as f64 - 1.0;
    let mut targets = Vec::with_capacity(basis.len() * d);
    let mut values = Vec::with_capacity(basis.len() * d);
    for &(k, l) in &basis.arcs {
        for &j in g.neighbors(k) {
            targets.push(basis.index(j, k).expect("reverse of a neighbour arc") as u32);
            values.push(if j == l { reflect } else { transmit });
        }
    }
    Ok(DtStepOperator { basis, targets, values })
}

impl DtStepOperator {
    pub fn basis(&self) -> &ArcBasis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn degree(&self) -> usize {
        self.basis.degree
    }

    /// `(row, value)` pairs of column `c`.
    pub fn column(&self, c: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let d = self.basis.degree;
        self.targets[c * d..(c + 1) * d].iter().zip(&self.values[c * d..(c + 1) * d]).map(|(&r, &v)| (r as usize, v))
    }

    /// `out = U x` for real vectors.
    pub fn apply_real(&self, x: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        let d = self.basis.degree;
        for (c, &xc) in x.iter().enumerate() {
            if xc == 0.0 {
                continue;
            }
            for m in c * d..(c + 1) * d {
                out[self.targets[m] as usize] += self.values[m] * xc;
            }
        }
    }

    /// `out = U x` for complex vectors.
    pub fn apply_complex(&self, x: &[Complex64], out: &mut [Complex64]) {
        out.iter_mut().for_each(|o| *o = Complex64::new(0.0, 0.0));
        let d = self.basis.degree;
        for (c, &xc) in x.iter().enumerate() {
            if xc == Complex64::new(0.0, 0.0) {
                continue;
            }
            for m in c * d..(c + 1) * d {
                out[self.targets[m] as usize] += xc * self.values[m];
            }
        }
    }

    /// Propagates a real vector `t` steps.
    pub fn propagate_real(&self, x: &[f64], t: u32) -> Vec<f64> {
        let mut cur = x.to_vec();
        let mut next = vec![0.0; x.len()];
        for _ in 0..t {
            self.apply_real(&cur, &mut next);
            std::mem::swap(&mut cur, &mut next);
        }
        cur
    }

    pub fn dense(&self) -> DMatrix<f64> {
        let dim = self.dim();
        let mut m = DMatrix::zeros(dim, dim);
        for c in 0..dim {
            for (r, v) in self.column(c) {
                m[(r, c)] = v;
            }
        }
        m
    }

    /// Dense `U^t`, built by sparse left multiplication.
    pub fn power(&self, t: u32) -> DMatrix<f64> {
        let dim = self.dim();
        let mut m = DMatrix::<f64>::identity(dim, dim);
        let mut scratch = vec![0.0; dim];
        for _ in 0..t {
            for mut col in m.column_iter_mut() {
                self.apply_real(col.as_slice(), &mut scratch);
                col.as_mut_slice().copy_from_slice(&scratch);
            }
        }
        m
    }

    /// Max entry of `(dU)ᵀ(dU) - d²·1`, evaluated in integers (`dU` has
    /// entries `2 - d·δ`).
    pub fn integer_orthogonality_defect(&self) -> i64 {
        let dim = self.dim();
        let d = self.basis.degree as i64;
        let int_col = |c: usize| -> Vec<(usize, i64)> {
            self.column(c).map(|(r, v)| (r, (v * d as f64).round() as i64)).collect()
        };
        let cols: Vec<_> = (0..dim).map(int_col).collect();
        let mut dense = vec![0i64; dim];
        let mut worst = 0;
        for a in 0..dim {
            for &(r, v) in &cols[a] {
                dense[r] = v;
            }
            for (b, col) in cols.iter().enumerate() {
                let dot: i64 = col.iter().map(|&(r, v)| dense[r] * v).sum();
                let target = if a == b { d * d } else { 0 };
                worst = worst.max((dot - target).abs());
            }
            for &(r, _) in &cols[a] {
                dense[r] = 0;
            }
        }
        worst
    }

    /// Coordinate-list dump, one `row,col,value` line per nonzero.
    pub fn write_coo_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["row", "col", "value"])?;
        for c in 0..self.dim() {
            let mut entries: Vec<_> = self.column(c).collect();
            entries.sort_by_key(|&(r, _)| r);
            for (r, v) in entries {
                w.serialize((r, c, v))?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// A `p`-particle state in the tensor product of arc spaces, particle 1
/// being the most significant index.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiParticleState {
    particles: usize,
    arc_dim: usize,
    amplitudes: Vec<Complex64>,
}

fn state_dim(arc_dim: usize, p: usize) -> Result<usize, WalkError> {
    if p == 0 {
        return Err(WalkError::NoParticles);
    }
    let dim = (arc_dim as u128).checked_pow(p as u32).unwrap_or(u128::MAX);
    if dim > MAX_STATE_DIM as u128 {
        return Err(WalkError::TooLarge { dim, max: MAX_STATE_DIM });
    }
    Ok(dim as usize)
}

impl MultiParticleState {
    pub fn from_amplitudes(arc_dim: usize, particles: usize, amplitudes: Vec<Complex64>) -> Result<Self, WalkError> {
        let dim = state_dim(arc_dim, particles)?;
        if amplitudes.len() != dim {
            return Err(WalkError::DimensionMismatch { expected: dim, found: amplitudes.len() });
        }
        Ok(MultiParticleState { particles, arc_dim, amplitudes })
    }

    /// `|a_1> ⊗ ... ⊗ |a_p>` for arcs given as vertex pairs.
    pub fn basis_state(basis: &ArcBasis, arcs: &[(usize, usize)]) -> Result<Self, WalkError> {
        let dim = state_dim(basis.len(), arcs.len())?;
        let mut index = 0;
        for &arc in arcs {
            index = index * basis.len() + basis.require(arc)?;
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(MultiParticleState { particles: arcs.len(), arc_dim: basis.len(), amplitudes })
    }

    /// Tensor product of single-particle states.
    pub fn product(factors: &[Vec<Complex64>]) -> Result<Self, WalkError> {
        let arc_dim = factors.first().ok_or(WalkError::NoParticles)?.len();
        if let Some(f) = factors.iter().find(|f| f.len() != arc_dim) {
            return Err(WalkError::DimensionMismatch { expected: arc_dim, found: f.len() });
        }
        state_dim(arc_dim, factors.len())?;
        let mut amplitudes = vec![Complex64::new(1.0, 0.0)];
        for f in factors {
            amplitudes = amplitudes.iter().flat_map(|&a| f.iter().map(move |&b| a * b)).collect();
        }
        Ok(MultiParticleState { particles: factors.len(), arc_dim, amplitudes })
    }

    pub fn particles(&self) -> usize {
        self.particles
    }

    pub fn arc_dim(&self) -> usize {
        self.arc_dim
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Amplitude on the product of the given arc indices.
    pub fn amplitude(&self, arc_indices: &[usize]) -> Complex64 {
        let index = arc_indices.iter().fold(0, |acc, &a| acc * self.arc_dim + a);
        self.amplitudes[index]
    }
}

/// Applies `U ⊗ ... ⊗ U` by acting on one particle slot at a time.
pub fn apply_step(op: &DtStepOperator, state: &MultiParticleState) -> Result<MultiParticleState, WalkError> {
    let dim = op.dim();
    if state.arc_dim != dim {
        return Err(WalkError::DimensionMismatch { expected: dim, found: state.arc_dim });
    }
    let d = op.degree();
    let mut cur = state.amplitudes.clone();
    let mut next = vec![Complex64::new(0.0, 0.0); cur.len()];
    for slot in 0..state.particles {
        let stride = dim.pow((state.particles - 1 - slot) as u32);
        let block = dim * stride;
        next.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        for base in (0..cur.len()).step_by(block) {
            for c in 0..dim {
                let src = base + c * stride;
                for m in c * d..(c + 1) * d {
                    let dst = base + op.targets[m] as usize * stride;
                    let v = op.values[m];
                    for r in 0..stride {
                        next[dst + r] += cur[src + r] * v;
                    }
                }
            }
        }
        std::mem::swap(&mut cur, &mut next);
    }
    Ok(MultiParticleState { particles: state.particles, arc_dim: dim, amplitudes: cur })
}

/// `<final| U^t |initial>` by propagating the initial basis vector. Grover
/// amplitudes are real, so the value is returned as `f64`.
pub fn dt_element(g: &Graph, t: u32, final_arc: (usize, usize), initial: (usize, usize)) -> Result<f64, WalkError> {
    let op = build_step_operator(g)?;
    let f = op.basis.require(final_arc)?;
    let s = op.basis.require(initial)?;
    let mut x = vec![0.0; op.dim()];
    x[s] = 1.0;
    Ok(op.propagate_real(&x, t)[f])
}

/// `(|k l, l k> + |l k, k l>) / √2`.
pub fn bosonic_edge_state(basis: &ArcBasis, k: usize, l: usize) -> Result<MultiParticleState, WalkError> {
    let kl = basis.require((k, l))?;
    let lk = basis.require((l, k))?;
    let dim = state_dim(basis.len(), 2)?;
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    amplitudes[kl * basis.len() + lk] = h;
    amplitudes[lk * basis.len() + kl] = h;
    Ok(MultiParticleState { particles: 2, arc_dim: basis.len(), amplitudes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::read_graph6_file;

    fn shrikhande_family() -> Vec<Graph> {
        read_graph6_file(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/srg_16_6_2_2.g6")).unwrap()
    }

    #[test]
    fn arc_basis_layout() {
        let g = Graph::cycle(4).unwrap();
        let b = ArcBasis::new(&g).unwrap();
        assert_eq!(b.arcs(), &[(0, 1), (0, 3), (1, 0), (1, 2), (2, 1), (2, 3), (3, 0), (3, 2)]);
        for (a, &(i, j)) in b.arcs().iter().enumerate() {
            assert_eq!(b.index(i, j), Some(a));
            assert!(b.index(j, i).is_some());
        }
        assert_eq!(b.index(0, 2), None);
        assert_eq!(b.index(0, 9), None);
        let rev = b.reversal();
        assert!((0..b.len()).all(|a| rev[rev[a]] == a && rev[a] != a));
    }

    #[test]
    fn rejects_irregular_and_edgeless() {
        assert!(matches!(build_step_operator(&Graph::path(3).unwrap()), Err(WalkError::NotRegular { .. })));
        assert_eq!(build_step_operator(&Graph::from_edges(3, &[]).unwrap()).unwrap_err(), WalkError::NoEdges);
    }

    #[test]
    fn four_cycle_transmits() {
        // d = 2: 2/d - δ_jl is 0 for the reflected arc and 1 for the other one.
        let g = Graph::cycle(4).unwrap();
        let op = build_step_operator(&g).unwrap();
        let b = op.basis();
        for (c, &(k, l)) in b.arcs().iter().enumerate() {
            let nonzero: Vec<_> = op.column(c).filter(|&(_, v)| v != 0.0).collect();
            assert_eq!(nonzero.len(), 1);
            let (r, v) = nonzero[0];
            let (i, j) = b.arc(r);
            assert_eq!(v, 1.0);
            assert_eq!(j, k);
            assert_ne!(i, l);
            assert!(g.adjacent(i, k));
        }
        // From (0, 1) the particle leaves 0 for its other neighbour 3, the coin
        // recording where it came from; next it moves on to 2.
        assert_eq!(dt_element(&g, 1, (3, 0), (0, 1)).unwrap(), 1.0);
        assert_eq!(dt_element(&g, 1, (1, 0), (0, 1)).unwrap(), 0.0);
        assert_eq!(dt_element(&g, 2, (2, 3), (0, 1)).unwrap(), 1.0);
    }

    #[test]
    fn step_entries_on_shrikhande_family() {
        for g in shrikhande_family() {
            let op = build_step_operator(&g).unwrap();
            assert_eq!(op.dim(), 96);
            for c in 0..op.dim() {
                let vals: Vec<f64> = op.column(c).map(|(_, v)| v).collect();
                assert_eq!(vals.len(), 6);
                assert_eq!(vals.iter().filter(|&&v| v == 1.0 / 3.0).count(), 5);
                assert_eq!(vals.iter().filter(|&&v| v == 1.0 / 3.0 - 1.0).count(), 1);
            }
            assert_eq!(op.integer_orthogonality_defect(), 0);
            let u = op.dense();
            let gram = u.transpose() * &u;
            assert!((gram - DMatrix::identity(96, 96)).amax() < 1e-14);
        }
    }

    #[test]
    fn power_matches_repeated_dense_product() {
        let op = build_step_operator(&Graph::petersen()).unwrap();
        let u = op.dense();
        let mut expected = DMatrix::identity(op.dim(), op.dim());
        for t in 0..5 {
            assert!((op.power(t) - &expected).amax() < 1e-14);
            expected = &u * expected;
        }
    }

    #[test]
    fn norm_is_preserved() {
        let g = Graph::petersen();
        let op = build_step_operator(&g).unwrap();
        let mut s = MultiParticleState::basis_state(op.basis(), &[(0, 1)]).unwrap();
        for _ in 0..100 {
            s = apply_step(&op, &s).unwrap();
        }
        assert!((s.norm() - 1.0).abs() < 1e-10);
        let mut s2 = bosonic_edge_state(op.basis(), 0, 1).unwrap();
        for _ in 0..20 {
            s2 = apply_step(&op, &s2).unwrap();
        }
        assert!((s2.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_particles_factorize() {
        let g = Graph::petersen();
        let op = build_step_operator(&g).unwrap();
        let dim = op.dim();
        let f1: Vec<Complex64> = (0..dim).map(|a| Complex64::new((a as f64).sin(), (a as f64 * 0.3).cos())).collect();
        let f2: Vec<Complex64> = (0..dim).map(|a| Complex64::new(1.0 / (1.0 + a as f64), 0.5)).collect();
        let mut joint = MultiParticleState::product(&[f1.clone(), f2.clone()]).unwrap();
        let (mut x1, mut x2) = (f1, f2);
        let mut scratch = vec![Complex64::new(0.0, 0.0); dim];
        for _ in 0..3 {
            joint = apply_step(&op, &joint).unwrap();
            op.apply_complex(&x1, &mut scratch);
            x1.copy_from_slice(&scratch);
            op.apply_complex(&x2, &mut scratch);
            x2.copy_from_slice(&scratch);
        }
        let expected = MultiParticleState::product(&[x1, x2]).unwrap();
        let err = joint.amplitudes().iter().zip(expected.amplitudes()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-12);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let op = build_step_operator(&Graph::petersen()).unwrap();
        let small =
            MultiParticleState::basis_state(&ArcBasis::new(&Graph::cycle(4).unwrap()).unwrap(), &[(0, 1)]).unwrap();
        assert_eq!(apply_step(&op, &small).unwrap_err(), WalkError::DimensionMismatch { expected: 30, found: 8 });
    }

    #[test]
    fn element_basics() {
        let g = Graph::petersen();
        assert_eq!(dt_element(&g, 0, (0, 1), (0, 1)).unwrap(), 1.0);
        assert_eq!(dt_element(&g, 0, (1, 0), (0, 1)).unwrap(), 0.0);
        assert_eq!(dt_element(&g, 1, (1, 0), (0, 1)).unwrap(), 2.0 / 3.0 - 1.0);
        assert_eq!(dt_element(&g, 1, (4, 0), (0, 1)).unwrap(), 2.0 / 3.0);
        assert_eq!(dt_element(&g, 1, (5, 0), (0, 1)).unwrap(), 2.0 / 3.0);
        assert_eq!(dt_element(&g, 1, (2, 1), (0, 1)).unwrap(), 0.0);
        assert_eq!(dt_element(&g, 1, (0, 2), (0, 1)).unwrap_err(), WalkError::InvalidArc(0, 2));
    }

    #[test]
    fn edge_states() {
        for g in shrikhande_family() {
            let b = ArcBasis::new(&g).unwrap();
            let states: Vec<_> = g.edges().map(|(k, l)| bosonic_edge_state(&b, k, l).unwrap()).collect();
            assert_eq!(states.len(), 48);
            for (s, (k, l)) in states.iter().zip(g.edges()) {
                let nonzero: Vec<_> = s.amplitudes().iter().filter(|z| z.norm() > 0.0).collect();
                assert_eq!(nonzero.len(), 2);
                assert!(nonzero.iter().all(|z| (z.re - 0.5f64.sqrt()).abs() < 1e-16 && z.im == 0.0));
                assert!((s.norm() - 1.0).abs() < 1e-15);
                assert_eq!(&bosonic_edge_state(&b, l, k).unwrap(), s);
            }
            for i in 0..states.len() {
                for j in 0..i {
                    assert_ne!(states[i], states[j]);
                }
            }
        }
        let b = ArcBasis::new(&Graph::petersen()).unwrap();
        assert_eq!(bosonic_edge_state(&b, 0, 2).unwrap_err(), WalkError::InvalidArc(0, 2));
    }

    #[test]
    fn coo_dump() {
        let op = build_step_operator(&Graph::cycle(4).unwrap()).unwrap();
        let mut buf = Vec::new();
        op.write_coo_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 1 + 16);
        assert!(text.starts_with("row,col,value\n"));
    }
}
