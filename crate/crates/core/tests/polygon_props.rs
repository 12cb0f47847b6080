use std::collections::{BTreeMap, BTreeSet};

use clusterx_core::completion::polygon_labels;
use clusterx_core::polygon::{
    all_diagonals, associahedron_faces, catalan, chart_coords, cross_ratio, enumerate_triangulations,
    is_cyclic_interval, stasheff_divisor_member, verify_flip_mutation, Chord, Configuration, Triangulation, P1,
};
use clusterx_core::seed::ExchangeGraph;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Proper intersection of segments between vertices placed on the convex
/// curve `(t, t^2)`.
fn segments_cross(a: Chord, b: Chord) -> bool {
    let p = |v: usize| (v as i64, (v * v) as i64);
    let orient = |o: (i64, i64), u: (i64, i64), w: (i64, i64)| {
        ((u.0 - o.0) * (w.1 - o.1) - (u.1 - o.1) * (w.0 - o.0)).signum()
    };
    let (a1, a2, b1, b2) = (p(a.0), p(a.1), p(b.0), p(b.1));
    if [a.0, a.1].iter().any(|v| *v == b.0 || *v == b.1) {
        return false;
    }
    orient(a1, a2, b1) * orient(a1, a2, b2) < 0 && orient(b1, b2, a1) * orient(b1, b2, a2) < 0
}

#[test]
fn crossing_matches_geometry() {
    for size in 4..=9 {
        let chords: Vec<Chord> = (1..=size).flat_map(|a| (a + 1..=size).map(move |b| Chord(a, b))).collect();
        for &a in &chords {
            for &b in &chords {
                assert_eq!(a.crosses(b), segments_cross(a, b), "{a} {b}");
            }
        }
    }
}

/// Triangulation count by the recursion `T(m) = sum T(k) T(m - k + 1)`
/// over the apex of a fixed side.
fn count_oracle(size: usize) -> u64 {
    let mut t = vec![0u64; size + 1];
    t[2] = 1;
    for m in 3..=size {
        t[m] = (2..m).map(|k| t[k] * t[m - k + 1]).sum();
    }
    t[size]
}

#[test]
fn triangulation_counts() {
    for size in 3..=10 {
        let n = enumerate_triangulations(size).unwrap().len();
        assert_eq!(BigInt::from(n), catalan(size - 2));
        assert_eq!(n as u64, count_oracle(size));
    }
}

#[test]
fn triangulations_are_valid_and_distinct() {
    for size in 4..=8 {
        let all = enumerate_triangulations(size).unwrap();
        let set: BTreeSet<Vec<Chord>> = all.iter().map(|t| t.diagonals().to_vec()).collect();
        assert_eq!(set.len(), all.len());
        for t in &all {
            assert_eq!(t.diagonals().len(), size - 3);
            assert_eq!(t.triangles().len(), size - 2);
        }
    }
}

#[test]
fn flip_graph_matches_exchange_graph() {
    for size in 4..=8 {
        let all = enumerate_triangulations(size).unwrap();
        let index: BTreeMap<Vec<Chord>, usize> =
            all.iter().enumerate().map(|(i, t)| (t.diagonals().to_vec(), i)).collect();
        let mut edges = BTreeSet::new();
        for (i, t) in all.iter().enumerate() {
            for &e in t.diagonals() {
                let (t2, _) = t.flip(e).unwrap();
                let j = index[t2.diagonals()];
                edges.insert((i.min(j), i.max(j)));
            }
        }
        let n = size - 3;
        assert_eq!(edges.len(), all.len() * n / 2);
        let g = ExchangeGraph::explore(&Triangulation::zigzag(size).seed(), 10_000, false).unwrap();
        assert_eq!(g.num_nodes(), all.len());
        assert_eq!(g.num_undirected_edges(), edges.len());
        let labels = polygon_labels(&g).expect("labeled");
        let seen: BTreeSet<Vec<Chord>> = labels
            .iter()
            .map(|l| {
                let mut d = l.clone();
                d.sort();
                d
            })
            .collect();
        assert_eq!(seen.len(), all.len());
    }
}

#[test]
fn flips_are_cluster_mutations() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for size in 4..=7 {
        for t in enumerate_triangulations(size).unwrap() {
            for &e in t.diagonals() {
                let check = verify_flip_mutation(&t, e, 6, &mut rng).unwrap();
                assert!(check.ok, "{:?}", check.failure);
            }
        }
    }
}

#[test]
fn stasheff_membership_is_interval_pairs() {
    for size in 4..=8 {
        for mask in 1u32..(1 << size) - 1 {
            let part: BTreeSet<usize> = (1..=size).filter(|v| mask >> (v - 1) & 1 == 1).collect();
            let rest: BTreeSet<usize> = (1..=size).filter(|v| !part.contains(v)).collect();
            if part.len() < 2 || rest.len() < 2 {
                assert!(stasheff_divisor_member(size, &part).is_err());
                continue;
            }
            let expected = is_cyclic_interval(size, &part) && is_cyclic_interval(size, &rest);
            assert_eq!(stasheff_divisor_member(size, &part).unwrap(), expected, "{part:?}");
        }
    }
    for k in 2..=4 {
        let odd: BTreeSet<usize> = (1..=2 * k).filter(|v| v % 2 == 1).collect();
        assert!(!stasheff_divisor_member(2 * k, &odd).unwrap());
    }
}

#[test]
fn face_counts() {
    let counts: Vec<usize> = (0..=3).map(|k| associahedron_faces(6, k).unwrap().len()).collect();
    assert_eq!(counts, vec![1, 9, 21, 14]);
    assert_eq!(associahedron_faces(5, 2).unwrap().len(), 5);
    assert_eq!(all_diagonals(7).len(), 14);
}

fn finite(v: i64) -> P1 {
    P1::Finite(q(v))
}

fn p1_strategy() -> impl Strategy<Value = P1> {
    prop_oneof![
        9 => (-40i64..40, 1i64..6).prop_map(|(a, b)| P1::Finite(BigRational::new(a.into(), b.into()))),
        1 => Just(P1::Inf),
    ]
}

fn distinct4() -> impl Strategy<Value = [P1; 4]> {
    prop::collection::vec(p1_strategy(), 4)
        .prop_filter("distinct", |v| (0..4).all(|i| (i + 1..4).all(|j| v[i] != v[j])))
        .prop_map(|v| [v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()])
}

fn mobius_strategy() -> impl Strategy<Value = [BigRational; 4]> {
    prop::collection::vec(-5i64..=5, 4)
        .prop_filter("invertible", |m| m[0] * m[3] - m[1] * m[2] != 0)
        .prop_map(|m| [q(m[0]), q(m[1]), q(m[2]), q(m[3])])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cross_ratio_shift_by_two(p in distinct4()) {
        let [a, b, c, d] = p;
        prop_assert_eq!(cross_ratio(&a, &b, &c, &d).unwrap(), cross_ratio(&c, &d, &a, &b).unwrap());
    }

    #[test]
    fn cross_ratio_shift_by_one_inverts(p in distinct4()) {
        let [a, b, c, d] = p;
        let r = cross_ratio(&a, &b, &c, &d).unwrap();
        let s = cross_ratio(&b, &c, &d, &a).unwrap();
        prop_assert!(!r.is_zero());
        prop_assert_eq!(r.recip(), s);
    }

    #[test]
    fn cross_ratio_is_projectively_invariant(p in distinct4(), m in mobius_strategy()) {
        let [a, b, c, d] = p.clone();
        let [a2, b2, c2, d2] = p.map(|x| x.mobius(&m));
        prop_assert_eq!(cross_ratio(&a, &b, &c, &d).unwrap(), cross_ratio(&a2, &b2, &c2, &d2).unwrap());
    }

    #[test]
    fn charts_are_projectively_invariant(seed in 0u64..1000, m in mobius_strategy(), which in 0usize..42) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = Configuration::random_generic(7, &mut rng);
        let ts = enumerate_triangulations(7).unwrap();
        let t = &ts[which % ts.len()];
        prop_assert_eq!(chart_coords(t, &c).unwrap(), chart_coords(t, &c.mobius(&m)).unwrap());
    }

    #[test]
    fn positive_configurations_give_positive_charts(seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = Configuration::random_positive(5, &mut rng);
        for t in enumerate_triangulations(5).unwrap() {
            for x in chart_coords(&t, &c).unwrap() {
                prop_assert!(x > BigRational::zero());
            }
        }
    }
}

#[test]
fn cross_ratio_values() {
    let z = q(7);
    assert_eq!(cross_ratio(&P1::Inf, &finite(-1), &finite(0), &P1::Finite(z.clone())).unwrap(), z);
    assert_eq!(cross_ratio(&finite(1), &finite(2), &finite(3), &finite(4)).unwrap(), BigRational::new(1.into(), 3.into()));
    assert_eq!(cross_ratio(&finite(-1), &finite(0), &finite(5), &P1::Inf).unwrap(), BigRational::new(1.into(), 5.into()));
    assert!(cross_ratio(&finite(1), &finite(1), &finite(3), &finite(4)).is_err());
}
