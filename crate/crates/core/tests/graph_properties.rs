use proptest::prelude::*;
use qwalk::graph::{
    adjacency_power_coeffs, brute_force_isomorphic, detect_srg, encode_graph6, parse_graph6, permute, read_graph6_file,
    srg_identity_residual,
};
use qwalk::{Graph, SrgParams};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

fn catalog(name: &str) -> Vec<Graph> {
    read_graph6_file(format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

const CATALOGS: [(&str, (usize, usize, usize, usize), usize); 3] = [
    ("srg_16_6_2_2.g6", (16, 6, 2, 2), 2),
    ("srg_25_12_5_6.g6", (25, 12, 5, 6), 15),
    ("srg_26_10_3_4.g6", (26, 10, 3, 4), 10),
];

fn random_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut it = bits.into_iter();
            for j in 1..n {
                for i in 0..j {
                    if it.next().unwrap() {
                        edges.push((i, j));
                    }
                }
            }
            Graph::from_edges(n, &edges).unwrap()
        })
    })
}

fn graph_and_perm(max_n: usize) -> impl Strategy<Value = (Graph, Vec<usize>)> {
    random_graph(max_n).prop_flat_map(|g| {
        let n = g.n();
        (Just(g), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })
}

/// Adjacency matrix as powers of the integer matrix, for the power-coefficient oracle.
fn int_power(a: &[Vec<i64>], n: u32) -> Vec<Vec<i128>> {
    let size = a.len();
    let mut acc: Vec<Vec<i128>> = (0..size).map(|i| (0..size).map(|j| (i == j) as i128).collect()).collect();
    for _ in 0..n {
        acc = (0..size)
            .map(|i| (0..size).map(|j| (0..size).map(|k| acc[i][k] * a[k][j] as i128).sum()).collect())
            .collect();
    }
    acc
}

#[test]
fn catalogs_have_expected_sizes_and_parameters() {
    for (name, (n, d, l, m), count) in CATALOGS {
        let gs = catalog(name);
        assert_eq!(gs.len(), count, "{name}");
        let p = SrgParams::new(n, d, l, m).unwrap();
        for g in &gs {
            assert_eq!(detect_srg(g).unwrap(), p);
            assert_eq!(srg_identity_residual(g, &p), 0);
        }
        for a in 0..gs.len() {
            for b in a + 1..gs.len() {
                assert_ne!(encode_graph6(&gs[a]), encode_graph6(&gs[b]));
            }
        }
    }
}

#[test]
fn power_coefficients_reproduce_matrix_powers() {
    for (name, _, _) in CATALOGS {
        let g = &catalog(name)[0];
        let p = detect_srg(g).unwrap();
        let a = g.adjacency_i64();
        for n in 0..=8 {
            let c = adjacency_power_coeffs(&p, n);
            let power = int_power(&a, n);
            for i in 0..g.n() {
                for j in 0..g.n() {
                    assert_eq!(power[i][j], c.entry(i == j, g.adjacent(i, j)), "{name} n={n}");
                }
            }
        }
    }
}

#[test]
fn petersen_isomorphism_checks() {
    let p = Graph::petersen();
    let q = permute(&p, &[3, 7, 1, 9, 0, 5, 2, 8, 6, 4]).unwrap();
    assert!(brute_force_isomorphic(&p, &q).unwrap());
    assert!(!brute_force_isomorphic(&p, &Graph::cycle(10).unwrap()).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graph6_roundtrip(g in random_graph(30)) {
        let text = encode_graph6(&g);
        prop_assert_eq!(parse_graph6(&text).unwrap(), g);
    }

    #[test]
    fn detect_srg_is_permutation_invariant(idx in 0usize..27, seed in any::<u64>()) {
        let all: Vec<Graph> = CATALOGS.iter().flat_map(|(name, _, _)| catalog(name)).collect();
        let g = &all[idx];
        let mut perm: Vec<usize> = (0..g.n()).collect();
        perm.shuffle(&mut StdRng::seed_from_u64(seed));
        let h = permute(g, &perm).unwrap();
        prop_assert_eq!(detect_srg(&h).unwrap(), detect_srg(g).unwrap());
        prop_assert_eq!(srg_identity_residual(&h, &detect_srg(g).unwrap()), 0);
    }

    #[test]
    fn relabelling_gives_isomorphic_graph((g, perm) in graph_and_perm(8)) {
        let h = permute(&g, &perm).unwrap();
        prop_assert!(brute_force_isomorphic(&g, &h).unwrap());
        prop_assert!(brute_force_isomorphic(&h, &g).unwrap());
        prop_assert!(brute_force_isomorphic(&g, &g).unwrap());
        prop_assert_eq!(g.edge_count(), h.edge_count());
    }

    #[test]
    fn isomorphism_is_transitive(g in random_graph(7), h in random_graph(7), k in random_graph(7)) {
        let gh = brute_force_isomorphic(&g, &h).unwrap();
        let hk = brute_force_isomorphic(&h, &k).unwrap();
        if gh && hk {
            prop_assert!(brute_force_isomorphic(&g, &k).unwrap());
        }
        prop_assert_eq!(gh, brute_force_isomorphic(&h, &g).unwrap());
    }
}
