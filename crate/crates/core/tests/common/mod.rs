#![allow(dead_code)]

use clusterx_core::seed::Seed;
use proptest::prelude::*;

/// Skew-symmetrizable seeds of rank `1..=max_rank` with entries in `[-3, 3]`,
/// built as `eps_ij = w_ij d_j` from a skew integer form `w`.
pub fn seed_strategy(max_rank: usize) -> impl Strategy<Value = Seed> {
    (1..=max_rank)
        .prop_flat_map(|n| {
            (
                prop::collection::vec(1i64..=2, n),
                prop::collection::vec(-3i64..=3, n * (n.saturating_sub(1)) / 2),
            )
        })
        .prop_map(|(d, upper)| build_seed(&d, &upper))
}

pub fn build_seed(d: &[i64], upper: &[i64]) -> Seed {
    let n = d.len();
    let mut w = vec![vec![0i64; n]; n];
    let mut it = upper.iter();
    for i in 0..n {
        for j in i + 1..n {
            let mut v = *it.next().unwrap();
            // keep |eps| <= 3 in both directions
            while v != 0 && (v * d[j]).abs().max((v * d[i]).abs()) > 3 {
                v -= v.signum();
            }
            w[i][j] = v;
            w[j][i] = -v;
        }
    }
    let eps = (0..n).map(|i| (0..n).map(|j| w[i][j] * d[j]).collect()).collect();
    Seed::from_epsilon(eps, d.to_vec(), None).unwrap()
}
