use std::collections::{BTreeMap, VecDeque};

use clusterx_core::lamination::{
    canonical_function, canonical_in_chart, canonical_in_chart_with, delta_in_chart, enumerate_laminations,
    laminations_from_coords, tree_coords, tree_coords_raw, ChartExpander, Lamination, PlaneTree, RedRule,
};
use clusterx_core::polygon::{all_diagonals, chart_coords, enumerate_triangulations, Chord, Configuration, Triangulation};
use clusterx_core::Error;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Vec2 = (BigRational, BigRational);

fn det(p: &Vec2, q: &Vec2) -> BigRational {
    &p.0 * &q.1 - &p.1 * &q.0
}

/// Vertex vectors of the red-edge section computed from the chart values
/// alone: points are placed one triangle at a time by solving the
/// cross-ratio relation of the flipped edge, then rescaled so that the red
/// edge of the new triangle has determinant one.
fn section_oracle(t: &Triangulation, rule: RedRule, x: &[BigRational]) -> Vec<Vec2> {
    let n = t.size();
    let tris = t.triangles();
    let root = tris[0];
    let one = BigRational::one();
    let zero = BigRational::zero();
    let mut v: Vec<Option<Vec2>> = vec![None; n + 1];
    v[root[0]] = Some((one.clone(), zero.clone()));
    v[root[1]] = Some((zero.clone(), one.clone()));
    v[root[2]] = Some((-one.clone(), one.clone()));
    let mut queue = VecDeque::from([(root, None::<Chord>)]);
    while let Some((tri, parent)) = queue.pop_front() {
        for e in [Chord(tri[0], tri[1]), Chord(tri[0], tri[2]), Chord(tri[1], tri[2])] {
            if Some(e) == parent || !t.contains(e) {
                continue;
            }
            let [s1, s2] = t.triangles_at(e).unwrap();
            let child = if s1 == tri { s2 } else { s1 };
            let w = child.iter().copied().find(|u| !e.has_vertex(*u)).unwrap();
            let apex = tri.iter().copied().find(|u| !e.has_vertex(*u)).unwrap();
            let mut r = [e.0, e.1, w, apex];
            r.sort();
            let [a, b, c, d] = r;
            let xe = &x[t.index_of(e).unwrap()];
            // X = D_ab D_cd / (D_bc D_ad) for E = (a, c), inverse for (b, d).
            let (num, den) = if e == Chord(a, c) { ([(a, b), (c, d)], [(b, c), (a, d)]) } else { ([(b, c), (a, d)], [(a, b), (c, d)]) };
            // f(z) = prod(num) - X prod(den) is linear in the unknown point z.
            let f = |z: &Vec2| {
                let get = |i: usize| if i == w { z.clone() } else { v[i].clone().unwrap() };
                let p = |pairs: &[(usize, usize); 2]| pairs.iter().fold(one.clone(), |acc, &(i, j)| acc * det(&get(i), &get(j)));
                p(&num) - xe * p(&den)
            };
            let f10 = f(&(one.clone(), zero.clone()));
            let f01 = f(&(zero.clone(), one.clone()));
            let z = (f01, -f10);
            let f1 = Chord::new(w, e.0);
            let f2 = Chord::new(w, e.1);
            let red = match rule {
                RedRule::Smallest => f1.min(f2),
                RedRule::Largest => f1.max(f2),
            };
            let other = if red.0 == w { red.1 } else { red.0 };
            let pv = v[other].clone().unwrap();
            let d = if red.0 == w { det(&z, &pv) } else { det(&pv, &z) };
            let lam = d.recip();
            v[w] = Some((&z.0 * &lam, &z.1 * &lam));
            queue.push_back((child, Some(e)));
        }
    }
    v.into_iter().skip(1).map(|p| p.unwrap()).collect()
}

fn oracle_delta(vecs: &[Vec2], c: Chord) -> BigRational {
    det(&vecs[c.0 - 1], &vecs[c.1 - 1])
}

fn oracle_canonical(l: &Lamination, vecs: &[Vec2]) -> BigRational {
    l.weights().iter().fold(BigRational::one(), |acc, (&c, &w)| {
        let d = oracle_delta(vecs, c);
        acc * num_traits::pow(if w < 0 { d.recip() } else { d }, w.unsigned_abs() as usize)
    })
}

/// Random valid lamination: random non-crossing diagonals with positive
/// weights, then side weights solved around the cycle.
fn random_lamination<R: Rng>(size: usize, rng: &mut R) -> Option<Lamination> {
    let mut diags: Vec<Chord> = Vec::new();
    for c in all_diagonals(size) {
        if rng.gen_bool(0.35) && diags.iter().all(|d| !d.crosses(c)) {
            diags.push(c);
        }
    }
    let mut dsum = vec![0i64; size + 1];
    let mut weights = BTreeMap::new();
    for c in diags {
        let w = rng.gen_range(1..4);
        weights.insert(c, w);
        dsum[c.0] += w;
        dsum[c.1] += w;
    }
    // s[v] is the weight of side (v, v+1); vertex v sees s[v-1] + s[v].
    // s[v] = -dsum[v] - s[v-1], going around from s[0] := side (size, 1).
    let walk = |start: i64| {
        let mut s = vec![0i64; size + 1];
        s[0] = start;
        for v in 1..=size {
            s[v] = -dsum[v] - s[v - 1];
        }
        s
    };
    let s0 = if size % 2 == 1 {
        // s[size] = -s[0] + k  forces 2 s[0] = k
        let k = walk(0)[size];
        if k % 2 != 0 {
            return None;
        }
        k / 2
    } else {
        if walk(0)[size] != 0 {
            return None;
        }
        rng.gen_range(-3..=3)
    };
    let s = walk(s0);
    debug_assert_eq!(s[size], s[0]);
    for v in 1..size {
        if s[v] != 0 {
            weights.insert(Chord(v, v + 1), s[v]);
        }
    }
    if s[0] != 0 {
        weights.insert(Chord(1, size), s[0]);
    }
    Some(Lamination::new(size, weights).expect("solved weights are valid"))
}

fn random_triangulation<R: Rng>(size: usize, rng: &mut R) -> Triangulation {
    let all = enumerate_triangulations(size).unwrap();
    all[rng.gen_range(0..all.len())].clone()
}

fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn coords_round_trip(size in 4usize..=7, seed in any::<u64>(), raw in prop::collection::vec(-6i64..=6, 4)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tree = PlaneTree::from_dual_triangulation(&random_triangulation(size, &mut rng));
        let coords = &raw[..size - 3];
        let l = laminations_from_coords(coords, &tree).unwrap();
        prop_assert_eq!(tree_coords(&l, &tree).unwrap(), coords.to_vec());
    }

    #[test]
    fn lamination_round_trip(size in 4usize..=8, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Some(l) = random_lamination(size, &mut rng) else { return Ok(()); };
        let tree = PlaneTree::from_dual_triangulation(&random_triangulation(size, &mut rng));
        let coords = tree_coords(&l, &tree).unwrap();
        prop_assert_eq!(laminations_from_coords(&coords, &tree).unwrap(), l);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_functions_are_positive_laurent(size in 4usize..=6, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Some(l) = random_lamination(size, &mut rng) else { return Ok(()); };
        let t = random_triangulation(size, &mut rng);
        let f = canonical_in_chart(&l, &t).unwrap();
        prop_assert!(f.is_positive(), "{}", f);
        prop_assert_eq!(canonical_in_chart_with(&l, &t, RedRule::Largest).unwrap(), f);
    }

    #[test]
    fn expansions_match_section_oracle(size in 4usize..=6, seed in any::<u64>(), largest in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rule = if largest { RedRule::Largest } else { RedRule::Smallest };
        let t = random_triangulation(size, &mut rng);
        let c = Configuration::random_positive(size, &mut rng);
        let x = chart_coords(&t, &c).unwrap();
        let vecs = section_oracle(&t, rule, &x);
        let mut ex = ChartExpander::new(&t, rule);
        for a in 1..=size {
            for b in a + 1..=size {
                let d = ex.delta(Chord(a, b));
                prop_assert!(d.is_positive());
                prop_assert_eq!(d.eval(&x).unwrap(), oracle_delta(&vecs, Chord(a, b)));
            }
        }
        let lifted = ex.lift_at(&x).unwrap();
        for (p, o) in lifted.iter().zip(&vecs) {
            prop_assert_eq!(p, o);
        }
    }

    #[test]
    fn canonical_values_agree_with_direct_products(size in 4usize..=6, seed in any::<u64>(), positive in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Some(l) = random_lamination(size, &mut rng) else { return Ok(()); };
        let t = random_triangulation(size, &mut rng);
        let c = if positive { Configuration::random_positive(size, &mut rng) } else { Configuration::random_generic(size, &mut rng) };
        let Ok(x) = chart_coords(&t, &c) else { return Ok(()); };
        let value = canonical_in_chart(&l, &t).unwrap().eval(&x);
        let direct = canonical_function(&l).eval_config(&c).unwrap();
        prop_assert_eq!(value.clone(), Some(direct));
        let vecs = section_oracle(&t, RedRule::Largest, &x);
        prop_assert_eq!(value, Some(oracle_canonical(&l, &vecs)));
    }

    #[test]
    fn cyclic_shift_leaves_values_unchanged(size in 4usize..=7, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Some(l) = random_lamination(size, &mut rng) else { return Ok(()); };
        let c = Configuration::random_generic(size, &mut rng);
        let shift = |v: usize| v % size + 1;
        let weights: BTreeMap<Chord, i64> = l.weights().iter().map(|(c, &w)| (Chord::new(shift(c.0), shift(c.1)), w)).collect();
        let l2 = Lamination::new(size, weights).unwrap();
        let mut pts = c.points().to_vec();
        pts.rotate_right(1);
        let c2 = Configuration::new(pts).unwrap();
        prop_assert_eq!(canonical_function(&l).eval_config(&c).unwrap(), canonical_function(&l2).eval_config(&c2).unwrap());
    }

    #[test]
    fn half_integral_totals_come_from_vertex_violations(
        size in 4usize..=7, raw in prop::collection::vec(-3i64..=3, 28), which in 0usize..4
    ) {
        let chords: Vec<Chord> = (1..=size).flat_map(|a| (a + 1..=size).map(move |b| Chord(a, b))).collect();
        let weights: BTreeMap<Chord, i64> = chords.iter().copied().zip(raw).filter(|(_, w)| *w != 0).collect();
        let ts = enumerate_triangulations(size).unwrap();
        let tree = PlaneTree::from_dual_triangulation(&ts[which % ts.len()]);
        if let Err(Error::HalfIntegral(_)) = tree_coords_raw(size, &weights, &tree) {
            let violated = (1..=size).any(|v| {
                weights.iter().filter(|(c, _)| c.has_vertex(v)).map(|(_, w)| w).sum::<i64>() != 0
            });
            prop_assert!(violated);
        }
    }

    #[test]
    fn bumping_a_boundary_side_gives_a_half_integer(size in 4usize..=7, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Some(l) = random_lamination(size, &mut rng) else { return Ok(()); };
        let tree = PlaneTree::caterpillar(size);
        let (_, hi) = tree.splits()[0];
        let mut weights = l.weights().clone();
        *weights.entry(Chord::new(hi, hi % size + 1)).or_default() += 1;
        prop_assert!(matches!(tree_coords_raw(size, &weights, &tree), Err(Error::HalfIntegral(_))));
    }
}

fn rank(mut m: Vec<Vec<BigRational>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[r][c];
                for j in c..cols {
                    let sub = &f * &m[r][j];
                    m[i][j] -= sub;
                }
            }
        }
        r += 1;
    }
    r
}

#[test]
fn bound_one_canonical_functions_are_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for size in 4..=6 {
        let ls = enumerate_laminations(size, 1).unwrap();
        assert_eq!(ls.len(), 3usize.pow(size as u32 - 3));
        let t = Triangulation::zigzag(size);
        let fs: Vec<_> = ls.iter().map(|l| canonical_in_chart(l, &t).unwrap()).collect();
        let points: Vec<Vec<BigRational>> = (0..ls.len() + 5)
            .map(|_| (0..size - 3).map(|_| BigRational::new(rng.gen_range(1..40).into(), rng.gen_range(1..9).into())).collect())
            .collect();
        let m: Vec<Vec<BigRational>> = fs.iter().map(|f| points.iter().map(|p| f.eval(p).unwrap()).collect()).collect();
        assert_eq!(rank(m), ls.len());
    }
}

#[test]
fn square_side_lamination_is_the_chart_coordinate() {
    let l = Lamination::new(
        4,
        [(Chord(1, 2), 1), (Chord(3, 4), 1), (Chord(2, 3), -1), (Chord(1, 4), -1)].into_iter().collect(),
    )
    .unwrap();
    let t = Triangulation::new(4, vec![Chord(1, 3)]).unwrap();
    assert_eq!(canonical_in_chart(&l, &t).unwrap().to_string(), "1*X1_3");
    let t2 = Triangulation::new(4, vec![Chord(2, 4)]).unwrap();
    assert_eq!(canonical_in_chart(&l, &t2).unwrap().to_string(), "1*X2_4^-1");
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let c = Configuration::random_generic(4, &mut rng);
        assert_eq!(canonical_function(&l).eval_config(&c).unwrap(), chart_coords(&t, &c).unwrap()[0]);
    }
}

#[test]
fn hexagon_delta_counts_monomials_at_one() {
    let t = Triangulation::zigzag(6);
    for f in [Chord(1, 4), Chord(2, 5), Chord(1, 5), Chord(3, 6)] {
        let d = delta_in_chart(f, &t).unwrap();
        assert!(d.is_positive());
        let ones = vec![q(1); 3];
        assert_eq!(d.eval(&ones).unwrap(), BigRational::from_integer(d.coeff_sum()));
    }
}
