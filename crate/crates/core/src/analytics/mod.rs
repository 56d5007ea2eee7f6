//! Multiplicity counting and checks of the closed-form walk results against
//! simulation.

mod verify;

use std::collections::BTreeMap;

use crate::certificates::Certificate;
use crate::{Graph, SrgParams};

pub use verify::{
    verify_family_predictions, verify_family_predictions_with, AnalyticsError, ClaimResult, ClaimStatus,
    VerificationReport, VerifyOptions, REPORT_SCHEMA,
};

/// Counts of binned values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicityHistogram {
    bin_width_bits: u64,
    counts: BTreeMap<i64, u64>,
    total: u64,
}

impl MultiplicityHistogram {
    pub fn bin_width(&self) -> f64 {
        f64::from_bits(self.bin_width_bits)
    }

    fn bin(&self, v: f64) -> i64 {
        (v / self.bin_width()).round() as i64
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    /// Number of distinct bins.
    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    /// Multiplicity of the bin containing `value`.
    pub fn count(&self, value: f64) -> u64 {
        self.counts.get(&self.bin(value)).copied().unwrap_or(0)
    }

    /// `(value, count)` in increasing value order.
    pub fn iter(&self) -> impl Iterator<Item = (f64, u64)> + '_ {
        let w = self.bin_width();
        self.counts.iter().map(move |(&b, &c)| (b as f64 * w, c))
    }

    pub fn from_certificate(cert: &Certificate) -> Self {
        MultiplicityHistogram {
            bin_width_bits: cert.spec.bin_width.to_bits(),
            counts: cert.runs().iter().copied().collect(),
            total: cert.len(),
        }
    }
}

/// Histogram of `values` binned to multiples of `bin_width`.
///
/// # Panics
///
/// If `bin_width` is not positive and finite.
pub fn multiplicity_histogram(values: &[f64], bin_width: f64) -> MultiplicityHistogram {
    assert!(bin_width > 0.0 && bin_width.is_finite(), "bin width must be positive");
    let mut h = MultiplicityHistogram { bin_width_bits: bin_width.to_bits(), counts: BTreeMap::new(), total: 0 };
    for &v in values {
        let b = h.bin(v);
        *h.counts.entry(b).or_insert(0) += 1;
        h.total += 1;
    }
    h
}

/// Multiplicities of `2/d` and `-1 + 2/d` among one-step Grover amplitudes:
/// `(Nμ(N-d-1) + Nλd, Nd)`.
pub fn m_t1_closed(p: &SrgParams) -> (u64, u64) {
    let (n, d, l, m) = (p.n as u64, p.d as u64, p.lambda as u64, p.mu as u64);
    (n * m * (n - d - 1) + n * l * d, n * d)
}

/// `Σ_{ijkl} A_ij A_kl A_ik A_il A_jk A_jl`: ordered 4-cliques, 24 per clique.
pub fn quadruple_clique_count(g: &Graph) -> u64 {
    let mut total = 0u64;
    for i in 0..g.n() {
        for &j in g.neighbors(i) {
            let common = g.row(i) & g.row(j);
            let mut rest = common;
            while rest != 0 {
                let k = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                total += (common & g.row(k)).count_ones() as u64;
            }
        }
    }
    total
}

/// Ordered 4-cycles `(i, j, k, l)` on distinct vertices with
/// `A_ij A_jk A_kl A_li = 1`.
pub fn ordered_four_cycle_count(g: &Graph) -> u64 {
    let mut total = 0u64;
    for i in 0..g.n() {
        for &j in g.neighbors(i) {
            for &k in g.neighbors(j) {
                if k != i {
                    // j itself is a common neighbour of i and k.
                    total += (g.row(i) & g.row(k)).count_ones() as u64 - 1;
                }
            }
        }
    }
    total
}

/// Predicted number of `U^4` entries carrying [`clique_amplitude_t4`].
///
/// For `λ ≠ μ` only mutually adjacent quadruples reach it, giving
/// [`quadruple_clique_count`]. For `λ = μ` the `A_ik` and `A_jl` terms of the
/// four-step amplitude vanish, so every ordered 4-cycle `i-j-k-l` reaches the
/// same value and the count is [`ordered_four_cycle_count`].
pub fn clique_value_multiplicity(g: &Graph, p: &SrgParams) -> u64 {
    if p.lambda == p.mu {
        ordered_four_cycle_count(g)
    } else {
        quadruple_clique_count(g)
    }
}

/// `-16λ/d³ + 16(d + (λ-μ)² - μ + (d + λ - μ)μ)/d⁴`: the four-step amplitude
/// between arcs whose four endpoints are mutually adjacent.
pub fn clique_amplitude_t4(p: &SrgParams) -> f64 {
    let (d, l, m) = (p.d as f64, p.lambda as f64, p.mu as f64);
    -16.0 * l / d.powi(3) + 16.0 * (d + (l - m).powi(2) - m + (d + l - m) * m) / d.powi(4)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{detect_srg, permute, read_graph6_file};

    fn naive_quadruples(g: &Graph) -> u64 {
        let n = g.n();
        let a = |x: usize, y: usize| g.adjacent(x, y) as u64;
        let mut total = 0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        total += a(i, j) * a(k, l) * a(i, k) * a(i, l) * a(j, k) * a(j, l);
                    }
                }
            }
        }
        total
    }

    #[test]
    fn histogram_basics() {
        let h = multiplicity_histogram(&[1.0, 1.0, 0.0], 1e-10);
        assert_eq!(h.count(1.0), 2);
        assert_eq!(h.count(0.0), 1);
        assert_eq!(h.total(), 3);
        assert_eq!(h.iter().collect::<Vec<_>>(), vec![(0.0, 1), (1.0, 2)]);
        let e = multiplicity_histogram(&[], 1e-10);
        assert!(e.is_empty());
        assert_eq!(e.distinct(), 0);
    }

    #[test]
    #[should_panic]
    fn histogram_rejects_zero_width() {
        multiplicity_histogram(&[1.0], 0.0);
    }

    #[test]
    fn t1_multiplicities() {
        assert_eq!(m_t1_closed(&SrgParams::new(16, 6, 2, 2).unwrap()), (480, 96));
        assert_eq!(m_t1_closed(&SrgParams::new(25, 12, 5, 6).unwrap()), (3300, 300));
        assert_eq!(m_t1_closed(&SrgParams::new(26, 10, 3, 4).unwrap()), (2340, 260));
    }

    #[test]
    fn quadruples() {
        assert_eq!(quadruple_clique_count(&Graph::petersen()), 0);
        assert_eq!(quadruple_clique_count(&Graph::complete(4).unwrap()), 24);
        assert_eq!(quadruple_clique_count(&Graph::complete(5).unwrap()), 120);
        for name in ["srg_16_6_2_2.g6", "srg_26_10_3_4.g6"] {
            let gs = read_graph6_file(format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap();
            for g in gs.iter().take(3) {
                let q = quadruple_clique_count(g);
                assert_eq!(q, naive_quadruples(g));
                let perm: Vec<usize> = (0..g.n()).rev().collect();
                assert_eq!(quadruple_clique_count(&permute(g, &perm).unwrap()), q);
            }
        }
        // Rook's graph: 8 lines of 4 mutually adjacent squares; Shrikhande has none.
        let gs = read_graph6_file(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/srg_16_6_2_2.g6")).unwrap();
        assert_eq!(quadruple_clique_count(&gs[0]), 8 * 24);
        assert_eq!(quadruple_clique_count(&gs[1]), 0);
        assert!(detect_srg(&gs[1]).is_ok());
    }

    fn naive_four_cycles(g: &Graph) -> u64 {
        let n = g.n();
        let mut total = 0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let s = [i, j, k, l];
                        let distinct = (0..4).all(|x| (x + 1..4).all(|y| s[x] != s[y]));
                        if distinct && g.adjacent(i, j) && g.adjacent(j, k) && g.adjacent(k, l) && g.adjacent(l, i) {
                            total += 1;
                        }
                    }
                }
            }
        }
        total
    }

    #[test]
    fn four_cycles() {
        assert_eq!(ordered_four_cycle_count(&Graph::petersen()), 0);
        assert_eq!(ordered_four_cycle_count(&Graph::cycle(4).unwrap()), 8);
        assert_eq!(ordered_four_cycle_count(&Graph::complete(4).unwrap()), 24);
        let gs = read_graph6_file(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/srg_16_6_2_2.g6")).unwrap();
        for g in &gs {
            assert_eq!(ordered_four_cycle_count(g), naive_four_cycles(g));
            assert_eq!(ordered_four_cycle_count(g), 480);
        }
    }

    #[test]
    fn clique_value_multiplicity_matches_u4() {
        use crate::dt_walk::build_step_operator;
        for name in ["srg_16_6_2_2.g6", "srg_25_12_5_6.g6", "srg_26_10_3_4.g6"] {
            let gs = read_graph6_file(format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap();
            for g in gs.iter().take(4) {
                let p = detect_srg(g).unwrap();
                let u4 = build_step_operator(g).unwrap().power(4);
                let found = multiplicity_histogram(u4.as_slice(), 1e-10).count(clique_amplitude_t4(&p));
                assert_eq!(found, clique_value_multiplicity(g, &p), "{name}");
                if p.lambda != p.mu {
                    assert_eq!(found, quadruple_clique_count(g));
                }
            }
        }
    }

    #[test]
    fn clique_value_for_rook_family() {
        let p = SrgParams::new(16, 6, 2, 2).unwrap();
        assert!((clique_amplitude_t4(&p) - (-32.0 / 216.0 + 256.0 / 1296.0)).abs() < 1e-15);
    }
}
