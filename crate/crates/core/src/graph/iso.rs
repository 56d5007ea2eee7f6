use super::{Graph, GraphError};

/// Vertex limit for [`brute_force_isomorphic`].
pub const BRUTE_FORCE_MAX_VERTICES: usize = 10;

/// Relabels `g` so that vertex `v` becomes `perm[v]`, i.e. `B = P^-1 A P`.
pub fn permute(g: &Graph, perm: &[usize]) -> Result<Graph, GraphError> {
    let n = g.n();
    if perm.len() != n {
        return Err(GraphError::NotBijection { n });
    }
    let mut hit = vec![false; n];
    for &p in perm {
        if p >= n || std::mem::replace(&mut hit[p], true) {
            return Err(GraphError::NotBijection { n });
        }
    }
    let mut rows = vec![0u128; n];
    for (i, &pi) in perm.iter().enumerate() {
        for &j in g.neighbors(i) {
            rows[pi] |= 1 << perm[j];
        }
    }
    Ok(Graph::from_rows_unchecked(rows))
}

/// Exhaustive isomorphism test for graphs of at most
/// [`BRUTE_FORCE_MAX_VERTICES`] vertices, pruned by degree.
pub fn brute_force_isomorphic(g1: &Graph, g2: &Graph) -> Result<bool, GraphError> {
    for g in [g1, g2] {
        if g.n() > BRUTE_FORCE_MAX_VERTICES {
            return Err(GraphError::TooLargeForBruteForce { n: g.n(), max: BRUTE_FORCE_MAX_VERTICES });
        }
    }
    if g1.n() != g2.n() || g1.edge_count() != g2.edge_count() {
        return Ok(false);
    }
    let (mut d1, mut d2) = (g1.degrees(), g2.degrees());
    d1.sort_unstable();
    d2.sort_unstable();
    if d1 != d2 {
        return Ok(false);
    }
    let mut map = vec![usize::MAX; g1.n()];
    let mut used = vec![false; g2.n()];
    Ok(extend(g1, g2, 0, &mut map, &mut used))
}

fn extend(g1: &Graph, g2: &Graph, v: usize, map: &mut [usize], used: &mut [bool]) -> bool {
    if v == g1.n() {
        return true;
    }
    for w in 0..g2.n() {
        if used[w] || g1.degree(v) != g2.degree(w) {
            continue;
        }
        if (0..v).any(|u| g1.adjacent(u, v) != g2.adjacent(map[u], w)) {
            continue;
        }
        map[v] = w;
        used[w] = true;
        if extend(g1, g2, v + 1, map, used) {
            return true;
        }
        used[w] = false;
    }
    map[v] = usize::MAX;
    false
}

/// `Σ_j A_ij A_jk A_jl`: neighbours shared by all three vertices.
pub fn common_neighbors_triple(g: &Graph, i: usize, k: usize, l: usize) -> Result<usize, GraphError> {
    for v in [i, k, l] {
        g.check_vertex(v)?;
    }
    Ok((g.row(i) & g.row(k) & g.row(l)).count_ones() as usize)
}
