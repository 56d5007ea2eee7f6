use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use super::{Certificate, CertificateError, CertificateSpec, Kind, Walk, WalkTime};
use crate::ct_walk::{build_basis, build_hamiltonian, CtEvolution, FockBasis};
use crate::dt_walk::{build_step_operator, DtStepOperator};
use crate::graph::encode_graph6;
use crate::{Graph, Statistics, WalkError};

/// Ceiling on the number of explicitly enumerated certificate entries.
pub const MAX_CERTIFICATE_LEN: u128 = 1 << 26;

const UNITARITY_TOLERANCE: f64 = 1e-8;

/// Hex SHA-256 of the graph's graph6 encoding.
pub fn graph_hash(g: &Graph) -> String {
    Sha256::digest(encode_graph6(g).as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

fn check_len(len: u128) -> Result<(), CertificateError> {
    if len > MAX_CERTIFICATE_LEN {
        return Err(CertificateError::TooLarge { len, max: MAX_CERTIFICATE_LEN });
    }
    Ok(())
}

fn mismatch(spec: &CertificateSpec, what: &str) -> CertificateError {
    CertificateError::InvalidSpec(format!("{spec} is not a {what} spec"))
}

/// Square matrices whose entry moduli feed an `L0` certificate.
pub trait EvolutionMatrix {
    fn dim(&self) -> usize;
    fn modulus(&self, row: usize, col: usize) -> f64;
}

impl EvolutionMatrix for DMatrix<f64> {
    fn dim(&self) -> usize {
        self.ncols()
    }

    fn modulus(&self, row: usize, col: usize) -> f64 {
        self[(row, col)].abs()
    }
}

impl EvolutionMatrix for DMatrix<Complex64> {
    fn dim(&self) -> usize {
        self.ncols()
    }

    fn modulus(&self, row: usize, col: usize) -> f64 {
        self[(row, col)].norm()
    }
}

fn column_norm_deviation<M: EvolutionMatrix + ?Sized>(u: &M) -> f64 {
    (0..u.dim())
        .map(|c| ((0..u.dim()).map(|r| u.modulus(r, c).powi(2)).sum::<f64>().sqrt() - 1.0).abs())
        .fold(0.0, f64::max)
}

/// Sorted entry moduli of an evolution operator.
pub fn build_l0<M: EvolutionMatrix + ?Sized>(u: &M, spec: &CertificateSpec) -> Result<Certificate, CertificateError> {
    if spec.kind != Kind::L0 {
        return Err(mismatch(spec, "L0"));
    }
    let deviation = column_norm_deviation(u);
    if !(deviation <= UNITARITY_TOLERANCE) {
        return Err(CertificateError::NotUnitary { deviation });
    }
    let n = u.dim();
    check_len((n * n) as u128)?;
    let values: Vec<f64> = (0..n).flat_map(|c| (0..n).map(move |r| (r, c))).map(|(r, c)| u.modulus(r, c)).collect();
    Ok(Certificate::from_values(*spec, &values, 0))
}

/// Coin-summed position probabilities `Σ_j |<i j| U^t |k l>|²` for every
/// initial arc and `t = 1..=steps`, laid out as `[arc][(t - 1) * N + i]`.
pub fn dt_position_marginals(op: &DtStepOperator, steps: u32) -> Vec<Vec<f64>> {
    let basis = op.basis();
    let n = basis.n_vertices();
    (0..op.dim())
        .into_par_iter()
        .map(|start| {
            let mut x = vec![0.0; op.dim()];
            x[start] = 1.0;
            let mut next = vec![0.0; op.dim()];
            let mut out = vec![0.0; steps as usize * n];
            for t in 0..steps as usize {
                op.apply_real(&x, &mut next);
                std::mem::swap(&mut x, &mut next);
                let row = &mut out[t * n..(t + 1) * n];
                for (a, &(i, _)) in basis.arcs().iter().enumerate() {
                    row[i] += x[a] * x[a];
                }
            }
            out
        })
        .collect()
}

/// Per initial arc, the `N` position probabilities at `t` (`accumulate =
/// false`) or summed over `1..=t`.
fn dt_single_values(op: &DtStepOperator, t: u32, accumulate: bool) -> Vec<Vec<f64>> {
    let n = op.basis().n_vertices();
    dt_position_marginals(op, t)
        .into_iter()
        .map(|m| {
            if accumulate {
                (0..n).map(|i| (0..t as usize).map(|s| m[s * n + i]).sum()).collect()
            } else {
                m[(t as usize - 1) * n..].to_vec()
            }
        })
        .collect()
}

fn dt_l1_l2(g: &Graph, spec: &CertificateSpec, accumulate: bool) -> Result<Certificate, CertificateError> {
    let WalkTime::Steps(t) = spec.time else { return Err(mismatch(spec, "discrete-time")) };
    let op = build_step_operator(g)?;
    let n = g.n() as u128;
    let dim = op.dim() as u128;
    match spec.particles {
        1 => {
            // Initial pairs (k, l) that are not arcs contribute N zeros each.
            let values: Vec<f64> = dt_single_values(&op, t, accumulate).into_iter().flatten().collect();
            let zeros = n * (n * n - dim);
            Ok(Certificate::from_values(*spec, &values, zeros as u64))
        }
        2 => {
            // Product initial state |k1 l1> ⊗ |k2 l2>; the marginal keeps
            // particle 2's position and sums particle 1 out, which for
            // noninteracting walkers factorises into particle 1's total
            // probability times particle 2's position probability.
            check_len(dim * dim * n)?;
            let nn = g.n();
            let marginals = dt_position_marginals(&op, t);
            let steps: Vec<usize> = if accumulate { (1..=t as usize).collect() } else { vec![t as usize] };
            let totals: Vec<Vec<f64>> = marginals
                .iter()
                .map(|m| steps.iter().map(|&s| m[(s - 1) * nn..s * nn].iter().sum()).collect())
                .collect();
            let mut values = Vec::with_capacity((dim * dim * n) as usize);
            for total in &totals {
                for m in &marginals {
                    for i in 0..nn {
                        values.push(steps.iter().zip(total).map(|(&s, &w)| w * m[(s - 1) * nn + i]).sum::<f64>());
                    }
                }
            }
            // Any non-arc initial pair gives an all-zero row.
            let zeros = n.pow(5) - dim * dim * n;
            Ok(Certificate::from_values(*spec, &values, zeros as u64))
        }
        p => Err(CertificateError::InvalidSpec(format!("discrete L1/L2 need one or two particles, got {p}"))),
    }
}

/// Discrete-time `L1` at step `t`.
pub fn build_l1_dt(g: &Graph, particles: usize, t: u32) -> Result<Certificate, CertificateError> {
    let spec = CertificateSpec::dt(Kind::L1, particles, t)?;
    build_certificate(g, &spec)
}

/// Discrete-time `L2` with horizon `T`.
pub fn build_l2_dt(g: &Graph, particles: usize, horizon: u32) -> Result<Certificate, CertificateError> {
    let spec = CertificateSpec::dt(Kind::L2, particles, horizon)?;
    build_certificate(g, &spec)
}

/// Continuous-time `L1` at time `t`.
pub fn build_l1_ct(
    g: &Graph,
    particles: usize,
    statistics: Statistics,
    t: f64,
) -> Result<Certificate, CertificateError> {
    let spec = CertificateSpec::ct(Kind::L1, particles, statistics, WalkTime::Continuous(t))?;
    build_certificate(g, &spec)
}

/// Continuous-time `L2` over `dt, 2·dt, ..., T·dt`.
pub fn build_l2_ct(
    g: &Graph,
    particles: usize,
    statistics: Statistics,
    horizon: u32,
    dt: f64,
) -> Result<Certificate, CertificateError> {
    let spec = CertificateSpec::ct(Kind::L2, particles, statistics, WalkTime::Grid { steps: horizon, dt })?;
    build_certificate(g, &spec)
}

/// Two-boson `L2` from every bosonic edge state, of length `N² · |E|`.
pub fn build_l2tilde_dt2(g: &Graph, horizon: u32) -> Result<Certificate, CertificateError> {
    let spec = CertificateSpec::dt(Kind::L2Tilde, 2, horizon)?;
    build_certificate(g, &spec)
}

/// Pair probabilities `P(i1, i2)` accumulated over `t = 1..=T` for the edge
/// state `(|kl, lk> + |lk, kl>)/√2`.
///
/// The two-particle state stays `(x ⊗ y + y ⊗ x)/√2` with `x = U^t|kl>` and
/// `y = U^t|lk>`, so summing over both coins gives
/// `½ [X(i1) Y(i2) + Y(i1) X(i2) + 2 C(i1) C(i2)]` with `X(i) = Σ_j x_ij²`,
/// `Y(i) = Σ_j y_ij²` and `C(i) = Σ_j x_ij y_ij` (amplitudes are real).
fn edge_state_pair_probabilities(op: &DtStepOperator, k: usize, l: usize, horizon: u32) -> Vec<f64> {
    let basis = op.basis();
    let n = basis.n_vertices();
    let mut x = vec![0.0; op.dim()];
    let mut y = vec![0.0; op.dim()];
    x[basis.index(k, l).expect("edge")] = 1.0;
    y[basis.index(l, k).expect("edge")] = 1.0;
    let mut scratch = vec![0.0; op.dim()];
    let mut acc = vec![0.0; n * n];
    let (mut xx, mut yy, mut xy) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    for _ in 0..horizon {
        op.apply_real(&x, &mut scratch);
        std::mem::swap(&mut x, &mut scratch);
        op.apply_real(&y, &mut scratch);
        std::mem::swap(&mut y, &mut scratch);
        xx.iter_mut().chain(yy.iter_mut()).chain(xy.iter_mut()).for_each(|v| *v = 0.0);
        for (a, &(i, _)) in basis.arcs().iter().enumerate() {
            xx[i] += x[a] * x[a];
            yy[i] += y[a] * y[a];
            xy[i] += x[a] * y[a];
        }
        for i1 in 0..n {
            for i2 in 0..n {
                acc[i1 * n + i2] += 0.5 * (xx[i1] * yy[i2] + yy[i1] * xx[i2] + 2.0 * xy[i1] * xy[i2]);
            }
        }
    }
    acc
}

fn l2tilde(g: &Graph, spec: &CertificateSpec) -> Result<Certificate, CertificateError> {
    let WalkTime::Steps(horizon) = spec.time else { return Err(mismatch(spec, "discrete-time")) };
    let op = build_step_operator(g)?;
    let edges: Vec<(usize, usize)> = g.edges().collect();
    check_len((g.n() * g.n() * edges.len()) as u128)?;
    let values: Vec<f64> =
        edges.par_iter().map(|&(k, l)| edge_state_pair_probabilities(&op, k, l, horizon)).collect::<Vec<_>>().concat();
    Ok(Certificate::from_values(*spec, &values, 0))
}

fn dt_l0(g: &Graph, spec: &CertificateSpec) -> Result<Certificate, CertificateError> {
    let WalkTime::Steps(t) = spec.time else { return Err(mismatch(spec, "discrete-time")) };
    let op = build_step_operator(g)?;
    let u = op.power(t);
    let n = g.n() as u128;
    let dim = op.dim() as u128;
    let p = spec.particles as u32;
    // Rows and columns of the vertex-pair form outside the arcs are zero.
    let zeros = n.pow(4 * p) - dim.pow(2 * p);
    let mut cert = match p {
        1 => build_l0(&u, spec)?,
        2 => {
            check_len(dim.pow(4))?;
            let deviation = column_norm_deviation(&u);
            if !(deviation <= UNITARITY_TOLERANCE) {
                return Err(CertificateError::NotUnitary { deviation });
            }
            let moduli: Vec<f64> = u.iter().map(|v| v.abs()).collect();
            let values: Vec<f64> = moduli.iter().flat_map(|&a| moduli.iter().map(move |&b| a * b)).collect();
            Certificate::from_values(*spec, &values, 0)
        }
        _ => return Err(CertificateError::InvalidSpec(format!("{spec}: one or two particles"))),
    };
    let zeros = u64::try_from(zeros).map_err(|_| CertificateError::TooLarge { len: zeros, max: u64::MAX as u128 })?;
    cert.add_zeros(zeros);
    Ok(cert)
}

/// Row indices of `sorted(i1 ∪ rest)` for every rest tuple and `i1`, or
/// `None` where the fermionic state vanishes.
fn marginal_rows(basis: &FockBasis) -> Result<Vec<Vec<Option<usize>>>, WalkError> {
    let n = basis.n_vertices();
    let p = basis.n_particles();
    let rests: Vec<Vec<usize>> =
        if p == 1 { vec![vec![]] } else { build_basis(n, p - 1, basis.statistics())?.states().to_vec() };
    Ok(rests
        .iter()
        .map(|rest| {
            (0..n)
                .map(|i1| {
                    if basis.statistics() == Statistics::Fermion && rest.contains(&i1) {
                        return None;
                    }
                    let mut s = rest.clone();
                    s.push(i1);
                    s.sort_unstable();
                    basis.index_of(&s)
                })
                .collect()
        })
        .collect())
}

fn ct_certificate(g: &Graph, spec: &CertificateSpec) -> Result<Certificate, CertificateError> {
    let basis = build_basis(g.n(), spec.particles, spec.statistics)?;
    let h = build_hamiltonian(g, &basis)?;
    let evolution = CtEvolution::new(&h)?;
    let times: Vec<f64> = match spec.time {
        WalkTime::Continuous(t) => vec![t],
        WalkTime::Grid { steps, dt } => (1..=steps).map(|m| m as f64 * dt).collect(),
        WalkTime::Steps(_) => return Err(mismatch(spec, "continuous-time")),
    };
    if spec.kind == Kind::L0 {
        return build_l0(&evolution.unitary(times[0]), spec);
    }
    let rows = marginal_rows(&basis)?;
    let dim = basis.len();
    check_len((rows.len() * dim) as u128)?;
    let mut values = vec![0.0; rows.len() * dim];
    for &t in &times {
        let u = evolution.unitary(t);
        for (r, rest_rows) in rows.iter().enumerate() {
            for j in 0..dim {
                let col = u.column(j);
                values[r * dim + j] += rest_rows.iter().flatten().map(|&row| col[row].norm_sqr()).sum::<f64>();
            }
        }
    }
    Ok(Certificate::from_values(*spec, &values, 0))
}

/// Builds the certificate described by `spec` for `g`.
pub fn build_certificate(g: &Graph, spec: &CertificateSpec) -> Result<Certificate, CertificateError> {
    spec.validate()?;
    let mut cert = match (spec.walk, spec.kind) {
        (Walk::Discrete, Kind::L0) => dt_l0(g, spec)?,
        (Walk::Discrete, Kind::L1) => dt_l1_l2(g, spec, false)?,
        (Walk::Discrete, Kind::L2) => dt_l1_l2(g, spec, true)?,
        (Walk::Discrete, Kind::L2Tilde) => l2tilde(g, spec)?,
        (Walk::Continuous, _) => ct_certificate(g, spec)?,
    };
    cert.graph_hash = Some(graph_hash(g));
    Ok(cert)
}
