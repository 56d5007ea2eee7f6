//! Closed-form Grover-walk amplitudes and probabilities on strongly regular
//! graphs. Every `A²` entry is reduced with `A² = (d-μ)1 + μJ + (λ-μ)A`, so
//! each value depends only on the family parameters, the adjacency and
//! identity relations among the vertices involved, and (at `t = 3`) the
//! number of common neighbours of a vertex triple.

use crate::graph::common_neighbors_triple;
use crate::{Graph, SrgParams, WalkError};

fn ind(b: bool) -> f64 {
    b as u8 as f64
}

fn check_vertices(g: &Graph, vertices: &[usize]) -> Result<(), WalkError> {
    for &v in vertices {
        g.check_vertex(v)?;
    }
    Ok(())
}

/// `<i j| U |k l> = A_ij A_kl δ_jk (2/d - δ_il)` on a `d`-regular graph.
pub fn dt_element_t1_closed(g: &Graph, (i, j): (usize, usize), (k, l): (usize, usize)) -> Result<f64, WalkError> {
    check_vertices(g, &[i, j, k, l])?;
    let d = g.degree(k) as f64;
    Ok(ind(g.adjacent(i, j)) * ind(g.adjacent(k, l)) * ind(j == k) * (2.0 / d - ind(i == l)))
}

/// `<i j| U^4 |k l>` from the family parameters and the six pairwise
/// relations among `i, j, k, l`.
pub fn dt_element_t4_closed(
    g: &Graph,
    p: &SrgParams,
    (i, j): (usize, usize),
    (k, l): (usize, usize),
) -> Result<f64, WalkError> {
    check_vertices(g, &[i, j, k, l])?;
    if !g.adjacent(i, j) || !g.adjacent(k, l) {
        return Ok(0.0);
    }
    let (d, lam, mu) = (p.d as f64, p.lambda as f64, p.mu as f64);
    let a_il = ind(g.adjacent(i, l));
    let a_jk = ind(g.adjacent(j, k));
    let a_ik = ind(g.adjacent(i, k));
    let a_jl = ind(g.adjacent(j, l));
    let d_ik = ind(i == k);
    let d_jl = ind(j == l);
    let d_jk = ind(j == k);
    let lm = lam - mu;
    Ok(4.0 / d.powi(2) * (a_il - a_jk)
        + 2.0 / d * (2.0 * d_ik - a_il * d_ik - a_jk * d_ik + d_jl - a_il * d_jl)
        + d_ik * d_jl
        - 8.0 / d.powi(3) * ((d - mu) * (d_ik + d_jl) + lm * (a_ik + a_jl) + 2.0 * mu)
        + 16.0 / d.powi(4) * (d_jk * (d - mu) * lm + a_jk * (d + lm * lm - mu) + (d + lm) * mu))
}

/// Identity and adjacency relations among a vertex triple `(i, k, l)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TripleRelations {
    pub i_eq_k: bool,
    pub k_eq_l: bool,
    pub i_eq_l: bool,
    pub a_ik: bool,
    pub a_kl: bool,
    pub a_il: bool,
}

impl TripleRelations {
    pub fn of(g: &Graph, i: usize, k: usize, l: usize) -> Result<Self, WalkError> {
        check_vertices(g, &[i, k, l])?;
        Ok(TripleRelations {
            i_eq_k: i == k,
            k_eq_l: k == l,
            i_eq_l: i == l,
            a_ik: g.adjacent(i, k),
            a_kl: g.adjacent(k, l),
            a_il: g.adjacent(i, l),
        })
    }

    /// Rejects flag combinations no vertex triple can realise.
    pub fn validate(&self) -> Result<(), WalkError> {
        let eqs = [self.i_eq_k, self.k_eq_l, self.i_eq_l];
        if eqs.iter().filter(|&&e| e).count() == 2 {
            return Err(WalkError::InconsistentRelations("equality is not transitive"));
        }
        if (self.i_eq_k && self.a_ik) || (self.k_eq_l && self.a_kl) || (self.i_eq_l && self.a_il) {
            return Err(WalkError::InconsistentRelations("a vertex is adjacent to itself"));
        }
        if (self.i_eq_k && self.a_il != self.a_kl)
            || (self.k_eq_l && self.a_ik != self.a_il)
            || (self.i_eq_l && self.a_ik != self.a_kl)
        {
            return Err(WalkError::InconsistentRelations("equal vertices have different neighbours"));
        }
        Ok(())
    }
}

/// `Σ_j |<i j| U |k l>|² = A_ik A_kl (δ_il (1 - 4/d) + 4/d²)`.
pub fn l1_t1_closed(p: &SrgParams, r: &TripleRelations) -> Result<f64, WalkError> {
    r.validate()?;
    let d = p.d as f64;
    Ok(ind(r.a_ik) * ind(r.a_kl) * (ind(r.i_eq_l) * (1.0 - 4.0 / d) + 4.0 / d.powi(2)))
}

/// `Σ_j |<i j| U^3 |k l>|²` as a function of the relations and the triple
/// count `Σ_j A_ij A_jk A_jl`, with every sum over `j` carried out.
fn l1_t3_value(p: &SrgParams, r: &TripleRelations, triple: f64) -> f64 {
    if !r.a_kl {
        return 0.0;
    }
    let (d, lam, mu) = (p.d as f64, p.lambda as f64, p.mu as f64);
    let lm = lam - mu;
    let a = ind(r.a_ik);
    let dl = ind(r.i_eq_l);
    let p_ik = p.a2(r.i_eq_k, r.a_ik);
    let p_il = p.a2(r.i_eq_l, r.a_il);
    // Σ_j A_ij (A²_jk), Σ_j A_ij A_jl (A²_jk), Σ_j A_ij (A²_jk)².
    let s1 = (d - mu) * a + mu * d + lm * p_ik;
    let s2 = (d - mu) * a + mu * p_il + lm * triple;
    let c1 = (d - mu).powi(2) + 2.0 * (d - mu) * mu;
    let c2 = lm * lm + 2.0 * mu * lm;
    let s3 = c1 * a + mu * mu * d + c2 * p_ik;
    16.0 / d.powi(4) * (a * d + (2.0 * a + 1.0) * p_il) - 16.0 * dl / d.powi(3) * (a * d + p_il)
        + 16.0 * dl * a / d.powi(2)
        - 64.0 / d.powi(5) * (a * s1 + s2)
        + dl * (4.0 / d - 4.0 * a / d + 32.0 * s1 / d.powi(4) + a - 16.0 * a / d.powi(2))
        + 64.0 / d.powi(6) * s3
}

/// Three-step coin-summed probability `Σ_j |<i j| U^3 |k l>|²`.
pub fn l1_t3_closed(g: &Graph, p: &SrgParams, i: usize, k: usize, l: usize) -> Result<f64, WalkError> {
    let r = TripleRelations::of(g, i, k, l)?;
    let triple = common_neighbors_triple(g, i, k, l)? as f64;
    Ok(l1_t3_value(p, &r, triple))
}

/// Splits the three-step probability as `g + h · Σ_j A_ij A_jk A_jl`, with
/// `g` and `h` depending only on the family and the relations.
pub fn l1_t3_split(p: &SrgParams, r: &TripleRelations) -> Result<(f64, f64), WalkError> {
    r.validate()?;
    let g0 = l1_t3_value(p, r, 0.0);
    Ok((g0, l1_t3_value(p, r, 1.0) - g0))
}
