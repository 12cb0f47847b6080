mod common;

use clusterx_core::laurent::PosRational;
use clusterx_core::seed::{
    check_involution, compose_pullbacks, explore_exchange_graph, find_isomorphism, is_isomorphism, mutate_x, Seed,
    SeedJson,
};
use clusterx_core::Error;
use common::seed_strategy;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn mutation_keeps_skew_symmetrizability(s in seed_strategy(4), k in 0usize..4) {
        let k = k % s.rank();
        let m = s.mutate(k);
        prop_assert!(m.is_skew_symmetrizable());
        prop_assert_eq!(m.multipliers(), s.multipliers());
    }

    #[test]
    fn mutation_flips_signs_at_k(s in seed_strategy(4), k in 0usize..4) {
        let k = k % s.rank();
        let m = s.mutate(k);
        for i in 0..s.rank() {
            prop_assert_eq!(m.epsilon()[i][k], -s.epsilon()[i][k]);
            prop_assert_eq!(m.epsilon()[k][i], -s.epsilon()[k][i]);
        }
    }

    #[test]
    fn exchange_matrix_rule(s in seed_strategy(4), k in 0usize..4) {
        let k = k % s.rank();
        let m = s.mutate(k);
        let e = s.epsilon();
        for i in 0..s.rank() {
            for j in 0..s.rank() {
                if i == k || j == k {
                    continue;
                }
                // eps'_ij = eps_ij + (|eps_ik| eps_kj + eps_ik |eps_kj|) / 2
                let expected = e[i][j] + (e[i][k].abs() * e[k][j] + e[i][k] * e[k][j].abs()) / 2;
                prop_assert_eq!(m.epsilon()[i][j], expected);
            }
        }
    }

    #[test]
    fn matrix_mutation_is_involutive(s in seed_strategy(4), k in 0usize..4) {
        let k = k % s.rank();
        let back = s.mutate(k).mutate(k);
        prop_assert_eq!(back.epsilon(), s.epsilon());
    }

    #[test]
    fn coordinate_mutation_is_involutive(s in seed_strategy(4), k in 0usize..4) {
        let k = k % s.rank();
        prop_assert!(check_involution(&s, k));
    }

    #[test]
    fn relabeling_is_an_isomorphism(s in seed_strategy(4), shift in 0usize..4) {
        let n = s.rank();
        let perm: Vec<usize> = (0..n).map(|i| (i + shift) % n).collect();
        let t = s.permuted(&perm);
        let found = find_isomorphism(&s, &t).expect("isomorphic");
        prop_assert!(is_isomorphism(&s, &t, &found));
    }

    #[test]
    fn json_round_trip(s in seed_strategy(4)) {
        let text = serde_json::to_string(&s.to_json()).unwrap();
        let back: SeedJson = serde_json::from_str(&text).unwrap();
        let parsed = Seed::from_json(&back).unwrap();
        prop_assert_eq!(parsed.epsilon(), s.epsilon());
    }
}

#[test]
fn pentagon_periodicity_is_an_exact_identity() {
    // mu_0, mu_1, mu_0, mu_1, mu_0 on A2 returns the chart with the two
    // coordinates swapped.
    let s0 = Seed::a_n(2);
    let vars = s0.labels().to_vec();
    let mut seed = s0.clone();
    let mut images: Vec<PosRational> = (0..2).map(|i| PosRational::var(&vars, i)).collect();
    for step in 0..5 {
        let k = step % 2;
        let pull = mutate_x(&seed, k);
        images = compose_pullbacks(&pull, &vars, &images).unwrap();
        seed = seed.mutate(k);
    }
    assert!(images[0].same_function(&PosRational::var(&vars, 1)));
    assert!(images[1].same_function(&PosRational::var(&vars, 0)));
    assert_eq!(seed.permuted(&[1, 0]).epsilon(), s0.epsilon());
}

#[test]
fn a_n_graph_sizes_are_catalan() {
    for (n, expected) in [(1, 2), (2, 5), (3, 14), (4, 42)] {
        let g = explore_exchange_graph(&Seed::a_n(n), 1000).unwrap();
        assert_eq!(g.num_nodes(), expected);
        assert_eq!(g.num_undirected_edges(), expected * n / 2);
        assert!(g.edges_are_involutive());
    }
}

#[test]
fn infinite_type_is_truncated() {
    assert!(matches!(explore_exchange_graph(&Seed::punctured_torus(), 50), Err(Error::Truncated(_))));
}

#[test]
fn rejects_non_skew_symmetrizable() {
    assert!(Seed::from_epsilon(vec![vec![0, 1], vec![1, 0]], vec![1, 1], None).is_err());
    assert!(Seed::from_epsilon(vec![vec![0, 2], vec![-1, 0]], vec![1, 1], None).is_err());
    assert!(Seed::from_epsilon(vec![vec![0, 2], vec![-1, 0]], vec![1, 2], None).is_ok());
}
