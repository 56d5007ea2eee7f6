use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::Graph;

/// Parameters `(N, d, λ, μ)` of a strongly regular graph family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SrgParams {
    pub n: usize,
    pub d: usize,
    pub lambda: usize,
    pub mu: usize,
}

impl SrgParams {
    /// Validates `0 < d < N - 1` and the counting identity `d(d-λ-1) = (N-d-1)μ`.
    pub fn new(n: usize, d: usize, lambda: usize, mu: usize) -> Result<Self, NotStronglyRegular> {
        if d == 0 || d + 1 >= n {
            return Err(NotStronglyRegular::DegenerateParams { n, d, lambda, mu });
        }
        if lambda + 1 > d || d * (d - lambda - 1) != (n - d - 1) * mu {
            return Err(NotStronglyRegular::InfeasibleParams { n, d, lambda, mu });
        }
        Ok(SrgParams { n, d, lambda, mu })
    }

    /// Adjacency spectrum `(d, r, s)` with `r > s` the roots of
    /// `x^2 - (λ-μ)x - (d-μ) = 0`.
    pub fn eigenvalues(&self) -> (f64, f64, f64) {
        let (d, l, m) = (self.d as f64, self.lambda as f64, self.mu as f64);
        let b = l - m;
        let disc = (b * b + 4.0 * (d - m)).sqrt();
        (d, (b + disc) / 2.0, (b - disc) / 2.0)
    }

    /// `(A^2)_xy` for a pair with the given relation, from `A^2 = (d-μ)1 + μJ + (λ-μ)A`.
    #[inline]
    pub fn a2(&self, same: bool, adjacent: bool) -> f64 {
        let (d, l, m) = (self.d as f64, self.lambda as f64, self.mu as f64);
        (d - m) * same as u8 as f64 + m + (l - m) * adjacent as u8 as f64
    }
}

impl fmt::Display for SrgParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.n, self.d, self.lambda, self.mu)
    }
}

/// Why a graph (or parameter tuple) is not strongly regular.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NotStronglyRegular {
    #[error("graph has {n} vertices; at least 3 are required")]
    TooSmall { n: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph is complete, so μ is undefined (no non-adjacent pairs)")]
    Complete,
    #[error("graph has no edges, so λ is undefined")]
    Edgeless,
    #[error("vertex {vertex} has degree {degree}, vertex 0 has degree {expected}")]
    NotRegular { vertex: usize, degree: usize, expected: usize },
    #[error("adjacent pair ({i}, {j}) shares {found} neighbours, expected λ = {expected}")]
    LambdaMismatch { i: usize, j: usize, found: usize, expected: usize },
    #[error("non-adjacent pair ({i}, {j}) shares {found} neighbours, expected μ = {expected}")]
    MuMismatch { i: usize, j: usize, found: usize, expected: usize },
    #[error("parameters ({n},{d},{lambda},{mu}) need 0 < d < N - 1")]
    DegenerateParams { n: usize, d: usize, lambda: usize, mu: usize },
    #[error("parameters ({n},{d},{lambda},{mu}) violate d(d-λ-1) = (N-d-1)μ")]
    InfeasibleParams { n: usize, d: usize, lambda: usize, mu: usize },
}

/// Returns the SRG parameters of `g`, or the first violated condition.
pub fn detect_srg(g: &Graph) -> Result<SrgParams, NotStronglyRegular> {
    let n = g.n();
    if n < 3 {
        return Err(NotStronglyRegular::TooSmall { n });
    }
    let d = g.degree(0);
    if let Some(v) = (0..n).find(|&v| g.degree(v) != d) {
        return Err(NotStronglyRegular::NotRegular { vertex: v, degree: g.degree(v), expected: d });
    }
    if d == 0 {
        return Err(NotStronglyRegular::Edgeless);
    }
    if d == n - 1 {
        return Err(NotStronglyRegular::Complete);
    }
    if !g.is_connected() {
        return Err(NotStronglyRegular::Disconnected);
    }
    let mut lambda = None;
    let mut mu = None;
    for i in 0..n {
        for j in i + 1..n {
            let c = g.common_neighbors(i, j);
            let (slot, adjacent) = if g.adjacent(i, j) { (&mut lambda, true) } else { (&mut mu, false) };
            match *slot {
                None => *slot = Some(c),
                Some(expected) if expected != c => {
                    return Err(if adjacent {
                        NotStronglyRegular::LambdaMismatch { i, j, found: c, expected }
                    } else {
                        NotStronglyRegular::MuMismatch { i, j, found: c, expected }
                    })
                }
                Some(_) => {}
            }
        }
    }
    let lambda = lambda.ok_or(NotStronglyRegular::Edgeless)?;
    let mu = mu.ok_or(NotStronglyRegular::Complete)?;
    SrgParams::new(n, d, lambda, mu)
}

/// Max entrywise `|A^2 - (d-μ)1 - μJ - (λ-μ)A|`, in exact integer arithmetic.
pub fn srg_identity_residual(g: &Graph, p: &SrgParams) -> u64 {
    let (d, l, m) = (p.d as i64, p.lambda as i64, p.mu as i64);
    let mut worst = 0u64;
    for i in 0..g.n() {
        for j in i..g.n() {
            let a2 = g.common_neighbors(i, j) as i64;
            let expected = (d - m) * (i == j) as i64 + m + (l - m) * g.adjacent(i, j) as i64;
            worst = worst.max((a2 - expected).unsigned_abs());
        }
    }
    worst
}

/// `A^n = α·1 + β·J + γ·A` for any member of an SRG family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PowerCoefficients {
    pub alpha: i128,
    pub beta: i128,
    pub gamma: i128,
}

impl PowerCoefficients {
    /// Entry of the reconstructed matrix for a vertex pair with the given relation.
    pub fn entry(&self, same: bool, adjacent: bool) -> i128 {
        self.alpha * same as i128 + self.beta + self.gamma * adjacent as i128
    }
}

/// Coefficients of `A^n` in the `{1, J, A}` algebra, via
/// `A^{n+1} = A·A^n` with `JA = dA`, `J^2 = NJ` and the SRG reduction of `A^2`.
pub fn adjacency_power_coeffs(p: &SrgParams, n: u32) -> PowerCoefficients {
    let (d, l, m) = (p.d as i128, p.lambda as i128, p.mu as i128);
    let mut c = PowerCoefficients { alpha: 1, beta: 0, gamma: 0 };
    for _ in 0..n {
        c = PowerCoefficients {
            alpha: c.gamma * (d - m),
            beta: c.beta * d + c.gamma * m,
            gamma: c.alpha + c.gamma * (l - m),
        };
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force_params(g: &Graph) -> Option<(usize, usize, usize, usize)> {
        let n = g.n();
        let adj = g.adjacency_i64();
        let d = adj[0].iter().sum::<i64>() as usize;
        let mut lam = std::collections::BTreeSet::new();
        let mut mu = std::collections::BTreeSet::new();
        for i in 0..n {
            if adj[i].iter().sum::<i64>() as usize != d {
                return None;
            }
            for j in 0..n {
                if i == j {
                    continue;
                }
                let c: i64 = (0..n).map(|x| adj[i][x] * adj[j][x]).sum();
                if adj[i][j] == 1 {
                    lam.insert(c);
                } else {
                    mu.insert(c);
                }
            }
        }
        (lam.len() == 1 && mu.len() == 1).then(|| (n, d, *lam.first().unwrap() as usize, *mu.first().unwrap() as usize))
    }

    #[test]
    fn petersen_params() {
        let g = Graph::petersen();
        assert_eq!(brute_force_params(&g), Some((10, 3, 0, 1)));
        assert_eq!(detect_srg(&g), Ok(SrgParams { n: 10, d: 3, lambda: 0, mu: 1 }));
    }

    #[test]
    fn five_cycle_params() {
        let g = Graph::cycle(5).unwrap();
        assert_eq!(brute_force_params(&g), Some((5, 2, 0, 1)));
        assert_eq!(detect_srg(&g), Ok(SrgParams { n: 5, d: 2, lambda: 0, mu: 1 }));
    }

    #[test]
    fn degenerate_graphs() {
        assert_eq!(detect_srg(&Graph::complete(4).unwrap()), Err(NotStronglyRegular::Complete));
        assert_eq!(detect_srg(&Graph::from_edges(4, &[]).unwrap()), Err(NotStronglyRegular::Edgeless));
        assert!(matches!(detect_srg(&Graph::path(4).unwrap()), Err(NotStronglyRegular::NotRegular { .. })));
        let two_triangles = Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert_eq!(detect_srg(&two_triangles), Err(NotStronglyRegular::Disconnected));
        // C6 is regular and connected but opposite vertices share 2 neighbours, others 0 or 1.
        assert!(matches!(detect_srg(&Graph::cycle(6).unwrap()), Err(NotStronglyRegular::MuMismatch { .. })));
    }

    #[test]
    fn identity_residual() {
        let g = Graph::petersen();
        let p = detect_srg(&g).unwrap();
        assert_eq!(srg_identity_residual(&g, &p), 0);
        let wrong = SrgParams { mu: 2, ..p };
        assert!(srg_identity_residual(&g, &wrong) >= 1);
    }

    #[test]
    fn params_validation() {
        assert!(SrgParams::new(16, 6, 2, 2).is_ok());
        assert!(SrgParams::new(25, 12, 5, 6).is_ok());
        assert!(SrgParams::new(26, 10, 3, 4).is_ok());
        assert!(matches!(SrgParams::new(16, 6, 2, 3), Err(NotStronglyRegular::InfeasibleParams { .. })));
        assert!(matches!(SrgParams::new(4, 3, 2, 0), Err(NotStronglyRegular::DegenerateParams { .. })));
    }

    #[test]
    fn power_coefficients_small() {
        let p = SrgParams::new(16, 6, 2, 2).unwrap();
        assert_eq!(adjacency_power_coeffs(&p, 0), PowerCoefficients { alpha: 1, beta: 0, gamma: 0 });
        assert_eq!(adjacency_power_coeffs(&p, 1), PowerCoefficients { alpha: 0, beta: 0, gamma: 1 });
        assert_eq!(adjacency_power_coeffs(&p, 2), PowerCoefficients { alpha: 4, beta: 2, gamma: 0 });
    }

    #[test]
    fn power_coefficients_reconstruct_petersen() {
        let g = Graph::petersen();
        let p = detect_srg(&g).unwrap();
        let a = g.adjacency_i64();
        let n = g.n();
        let mut power: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i128).collect()).collect();
        for k in 0..=8 {
            let c = adjacency_power_coeffs(&p, k);
            for i in 0..n {
                for j in 0..n {
                    assert_eq!(power[i][j], c.entry(i == j, g.adjacent(i, j)), "k={k} ({i},{j})");
                }
            }
            power =
                (0..n).map(|i| (0..n).map(|j| (0..n).map(|x| power[i][x] * a[x][j] as i128).sum()).collect()).collect();
        }
    }

    #[test]
    fn spectrum_of_shrikhande_family() {
        let (d, r, s) = SrgParams::new(16, 6, 2, 2).unwrap().eigenvalues();
        assert_eq!((d, r, s), (6.0, 2.0, -2.0));
    }
}
