use std::collections::BTreeSet;

use clusterx_core::completion::{match_associahedron, strata_poset};
use clusterx_core::lamination::{
    canonical_function, canonical_in_chart_with, enumerate_laminations, laminations_from_coords, tree_coords,
    Lamination, PlaneTree, RedRule,
};
use clusterx_core::laurent::{
    limit_error_bound, numeric_limit_check, standard_vars, tropicalize, LaurentPoly, PosRational,
};
use clusterx_core::polygon::{
    associahedron_faces, catalan, chart_coords, enumerate_triangulations, is_cyclic_interval,
    stasheff_divisor_member, verify_flip_mutation, Configuration, Triangulation,
};
use clusterx_core::seed::{check_involution, compose_pullbacks, explore_exchange_graph, mutate_x, Seed};
use clusterx_core::torus::{apply_s, apply_t, check_patch, orbit_patch, rotate, Triple};
use clusterx_core::tropical::{pl_mutate_coords, positive_part_cover, TropicalPoint};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::args::Suite;

#[derive(Debug, Serialize)]
pub struct PropertyReport {
    pub name: String,
    pub suite: String,
    pub passed: bool,
    pub cases: usize,
    pub detail: String,
}

struct Ctx {
    size_cap: usize,
    seed: u64,
}

impl Ctx {
    /// Independent stream per property, so adding one does not shift the others.
    fn rng(&self, name: &str) -> ChaCha8Rng {
        // FNV-1a
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in name.bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
        ChaCha8Rng::seed_from_u64(self.seed ^ h)
    }
}

struct Tally {
    cases: usize,
    failure: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { cases: 0, failure: None }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(what());
        }
    }

    fn fail(&mut self, what: String) {
        self.check(false, || what);
    }
}

type Check = fn(&Ctx, &mut ChaCha8Rng, &mut Tally);

const CHECKS: &[(Suite, &str, Check)] = &[
    (Suite::Laurent, "tropical_product_and_sum", trop_product_and_sum),
    (Suite::Laurent, "tropical_limit", trop_limit),
    (Suite::Seed, "mutation_involution", mutation_involution),
    (Suite::Seed, "pentagon_periodicity", pentagon),
    (Suite::Seed, "exchange_graph_catalan", graph_catalan),
    (Suite::Tropical, "pl_tropical_duality", pl_duality),
    (Suite::Tropical, "frozen_coordinate", frozen_coordinate),
    (Suite::Tropical, "cone_cover_single_stratum", cone_cover),
    (Suite::Polygon, "flip_is_mutation", flip_is_mutation),
    (Suite::Polygon, "triangulation_counts", triangulation_counts),
    (Suite::Polygon, "stasheff_divisors", stasheff),
    (Suite::Polygon, "pgl2_invariance", pgl2_invariance),
    (Suite::Lamination, "tree_coords_round_trip", tree_round_trip),
    (Suite::Lamination, "canonical_positivity", canonical_positivity),
    (Suite::Lamination, "canonical_consistency", canonical_consistency),
    (Suite::Lamination, "canonical_independence", canonical_independence),
    (Suite::Completion, "strata_counts", strata_counts),
    (Suite::Completion, "associahedron_match", associahedron_match),
    (Suite::Torus, "group_relations", torus_relations),
    (Suite::Torus, "orbit_patch", torus_patch),
];

pub fn run(suite: Suite, size_cap: usize, seed: u64) -> Vec<PropertyReport> {
    let ctx = Ctx { size_cap, seed };
    CHECKS
        .iter()
        .filter(|(s, _, _)| suite == Suite::All || *s == suite)
        .map(|&(s, name, check)| {
            let mut rng = ctx.rng(name);
            let mut tally = Tally::new();
            check(&ctx, &mut rng, &mut tally);
            PropertyReport {
                name: name.to_string(),
                suite: format!("{s:?}").to_lowercase(),
                passed: tally.failure.is_none(),
                cases: tally.cases,
                detail: tally.failure.unwrap_or_default(),
            }
        })
        .collect()
}

fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn random_positive_poly(rng: &mut ChaCha8Rng, nvars: usize) -> LaurentPoly {
    let vars = standard_vars(nvars);
    let terms = rng.gen_range(1..=4);
    (0..terms).fold(LaurentPoly::zero(&vars), |acc, _| {
        let e: Vec<i32> = (0..nvars).map(|_| rng.gen_range(-3..=3)).collect();
        &acc + &LaurentPoly::monomial(&vars, e, rng.gen_range(1..=6))
    })
}

fn random_point(rng: &mut ChaCha8Rng, n: usize, r: i64) -> Vec<BigRational> {
    (0..n).map(|_| q(rng.gen_range(-r..=r))).collect()
}

/// Skew-symmetrizable seed of rank `1..=4` with `|eps_ij| <= 3`.
fn random_seed(rng: &mut ChaCha8Rng) -> Seed {
    let n = rng.gen_range(1..=4);
    let d: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=2)).collect();
    let mut w = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let bound = 3 / d[i].max(d[j]);
            let v = rng.gen_range(-bound..=bound);
            w[i][j] = v;
            w[j][i] = -v;
        }
    }
    let eps = (0..n).map(|i| (0..n).map(|j| w[i][j] * d[j]).collect()).collect();
    Seed::from_epsilon(eps, d, None).expect("skew-symmetrizable by construction")
}

fn trop_product_and_sum(_: &Ctx, rng: &mut ChaCha8Rng, t: &mut Tally) {
    let one = LaurentPoly::one(&standard_vars(3));
    for _ in 0..100 {
        let a = PosRational::new(random_positive_poly(rng, 3), random_positive_poly(rng, 3)).unwrap();
        let b = PosRational::new(random_positive_poly(rng, 3), one.clone()).unwrap();
        let x = random_point(rng, 3, 6);
        let (ta, tb) = (tropicalize(&a).eval(&x), tropicalize(&b).eval(&x));
        t.check(tropicalize(&a.mul(&b)).eval(&x) == &ta + &tb, || format!("product rule fails for {a} and {b}"));
        t.check(tropicalize(&a.add(&b)).eval(&x) == ta.clone().max(tb.clone()), || {
            format!("sum rule fails for {a} and {b}")
        });
    }
}

fn trop_limit(_: &Ctx, rng: &mut ChaCha8Rng, t: &mut Tally) {
    let c = 60.0;
    for _ in 0..50 {
        let f = PosRational::from_poly(random_positive_poly(rng, 2)).unwrap();
        let x = random_point(rng, 2, 3);
        let xf: Vec<f64> = x.iter().map(|v| v.to_f64().unwrap()).collect();
        let trop = tropicalize(&f).eval_f64(&xf);
        let got = numeric_limit_check(&f, &x, &[c])[0];
        let bound = limit_error_bound(&f, c);
        t.check((got - trop).abs() <= bound + 1e-9, || format!("{f} at {xf:?}: {got} vs {trop}, bound {bound}"));
    }
}

fn mutation_involution(_: &Ctx, rng: &mut ChaCha8Rng, t: &mut Tally) {
    for _ in 0..60 {
        let s = random_seed(rng);
        for k in 0..s.rank() {
            t.check(check_involution(&s, k), || format!("mutation at {k} is not an involution on {:?}", s.epsilon()));
            t.check(s.mutate(k).mutate(k).epsilon() == s.epsilon(), || format!("matrix mutation at {k} is not an involution"));
        }
    }
}

fn pentagon(_: &Ctx, _: &mut ChaCha8Rng, t: &mut Tally) {
    let s0 = Seed::a_n(2);
    let vars = s0.labels().to_vec();
    let mut seed = s0.clone();
    let mut images: Vec<PosRational> = (0..2).map(|i| PosRational::var(&vars, i)).collect();
    for step in 0..5 {
        let k = step % 2;
        images = compose_pullbacks(&mutate_x(&seed, k), &vars, &images).unwrap();
        seed = seed.mutate(k);
    }
    t.check(
        images[0].same_function(&PosRational::var(&vars, 1)) && images[1].same_function(&PosRational::var(&vars, 0)),
        || format!("five mutations give {}, {}", images[0], images[1]),
    );
}

fn graph_catalan(ctx: &Ctx, _: &mut ChaCha8Rng, t: &mut Tally) {
    for n in 1..=(ctx.size_cap - 3).min(4) {
        let g = explore_exchange_graph(&Seed::a_n(n), 1000).unwrap();
        let count = enumerate_triangulations(n + 3).unwrap().len();
        t.check(g.num_nodes() == count && BigInt::from(count) == catalan(n + 1), || {
            format!("A{n}: {} seeds, {count} triangulations", g.num_nodes())
        });
    }
}

fn pl_duality(_: &Ctx, rng: &mut ChaCha8Rng, t: &mut Tally) {
    for _ in 0..20 {
        let s = random_seed(rng);
        let k = rng.gen_range(0..s.rank());
        let f = mutate_x(&s, k);
        let s2 = s.mutate(k);
        for _ in 0..25 {
            let x = random_point(rng, s.rank(), 8);
            let y = pl_mutate_coords(s.epsilon(), k, &x);
            // X' = mu^*(X): tropicalizing the pullback gives the PL map
            for (i, fi) in f.iter().enumerate() {
                let ok = tropicalize(fi).eval(&x) == y[i];
                t.check(ok, || format!("coordinate {i} after mutation at {k} of {:?}", s.epsilon()));
            }
            let back = pl_mutate_coords(s2.epsilon(), k, &y);
            t.check(back == x, || format!("PL mutation at {k} is not an involution"));
        }
    }
}

fn frozen_coordinate(_: &Ctx, rng: &mut ChaCha8Rng, t: &mut Tally) {
    for _ in 0..40 {
        let s = random_seed(rng);
        let k = rng.gen_range(0..s.rank());
        let mut x: Vec<BigRational> = random_point(rng, s.rank(), 8).into_iter().map(|v| v.abs()).collect();
        x[k] = BigRational::zero();
        let y = pl_mutate_coords(s.epsilon(), k, &x);
        t.check(y == x, || format!("zero coordinate {k} does not freeze the point"));
    }
}

fn cone_cover(ctx: &Ctx, rng: &mut ChaCha8Rng, t: &mut Tally) {
    for n in 1..=(ctx.size_cap - 3).min(3) {
        let g = explore_exchange_graph(&Seed::a_n(n), 1000).unwrap();
        let p = strata_poset(&g).unwrap();
        for _ in 0..20 {
            let x = TropicalPoint::new(0, random_point(rng, n, 4));
            let cover = positive_part_cover(&g, &x).unwrap();
            let strata: BTreeSet<Option<usize>> =
                cover.iter().map(|c| p.stratum_of(c.chart, &c.zero_set)).collect();
            t.check(!cover.is_empty() && strata.len() == 1 && !strata.contains(&None), || {
                format!("A{n} point {:?} meets {} strata", x.coords, strata.len())
            });
        }
    }
}

fn flip_is_mutation(ctx: &Ctx, rng: &mut ChaCha8Rng, t: &mut Tally) {
    for size in 4..=ctx.size_cap.min(7) {
        for tri in enumerate_triangulations(size).unwrap() {
            for &e in tri.diagonals() {
                match verify_flip_mutation(&tri, e, 3, rng) {
                    Ok(c) => t.check(c.ok, || format!("{tri} at {e}: {}", c.failure.unwrap_or_default())),
                    Err(err) => t.fail(format!("{tri} at {e}: {err}")),
                }
            }
        }
    }
}

fn triangulation_counts(ctx: &Ctx, _: &mut ChaCha8Rng, t: &mut Tally) {
    for size in 3..=(ctx.size_cap + 2).min(10) {
        let n = enumerate_triangulations(size).unwrap().len();
        t.check(BigInt::from(n) == catalan(size - 2), || format!("{size}-gon has {n} triangulations"));
    }
}

fn stasheff(ctx: &Ctx, _: &mut ChaCha8Rng, t: &mut Tally) {
    for size in 4..=(ctx.size_cap + 2).min(8) {
        for mask in 0u32..(1 << size) {
            let part: BTreeSet<usize> = (1..=size).filter(|v| mask >> (v - 1) & 1 == 1).collect();
            let rest: BTreeSet<usize> = (1..=size).filter(|v| !part.contains(v)).collect();
            let got = stasheff_divisor_member(size, &part);
            if part.len() < 2 || rest.len() < 2 {
                t.check(got.is_err(), || format!("{size}-gon, degenerate part {part:?} accepted"));
                continue;
            }
            let expected = is_cyclic_interval(size, &part) && is_cyclic_interval(size, &rest);
            match got {
                Ok(got) => t.check(got == expected, || format!("{size}-gon, part {part:?}")),
                Err(e) => t.fail(format!("{size}-gon, part {part:?}: {e}")),
            }
        }
    }
    let odd: BTreeSet<usize> = [1, 3, 5].into_iter().collect();
    t.check(stasheff_divisor_member(6, &odd).ok() == Some(false), || "{1,3,5} in the hexagon is a divisor".into());
}

fn pgl2_invariance(ctx: &Ctx, rng: &mut ChaCha8Rng, t: &mut Tally) {
    for _ in 0..30 {
        let size = rng.gen_range(4..=ctx.size_cap);
        let c = Configuration::random_generic(size, rng);
        let m = loop {
            let m: [BigRational; 4] = std::array::from_fn(|_| q(rng.gen_range(-5..=5)));
            if &m[0] * &m[3] != &m[1] * &m[2] {
                break m;
            }
        };
        let tris = enumerate_triangulations(size).unwrap();
        let tri = &tris[rng.gen_range(0..tris.len())];
        let c2 = c.mobius(&m);
        match (chart_coords(tri, &c), chart_coords(tri, &c2)) {
            (Ok(a), Ok(b)) => t.check(a == b, || format!("{tri}: chart moves under {m:?}")),
            (a, b) => t.check(a.is_err() && b.is_err(), || format!("{tri}: degenerate on one side only")),
        }
    }
}

fn tree_round_trip(ctx: &Ctx, rng: &mut ChaCha8Rng, t: &mut Tally) {
    for _ in 0..100 {
        let size = rng.gen_range(4..=ctx.size_cap);
        let tree = PlaneTree::caterpillar(size);
        let coords: Vec<i64> = (0..tree.num_edges()).map(|_| rng.gen_range(-6..=6)).collect();
        let back = laminations_from_coords(&coords, &tree).and_then(|l| tree_coords(&l, &tree));
        t.check(back.as_ref().ok() == Some(&coords), || format!("{size}-gon coords {coords:?} give {back:?}"));
    }
}

fn laminations_upto(ctx: &Ctx) -> impl Iterator<Item = (usize, Lamination)> + '_ {
    (4..=ctx.size_cap).flat_map(|size| enumerate_laminations(size, 1).unwrap().into_iter().map(move |l| (size, l)))
}

fn canonical_positivity(ctx: &Ctx, _: &mut ChaCha8Rng, t: &mut Tally) {
    for size in 4..=ctx.size_cap.min(6) {
        let tris = enumerate_triangulations(size).unwrap();
        for (_, l) in laminations_upto(ctx).filter(|(s, _)| *s == size) {
            for tri in &tris {
                match canonical_in_chart_with(&l, tri, RedRule::Smallest) {
                    Ok(f) => t.check(f.is_positive(), || format!("negative coefficient in chart {tri}: {f}")),
                    Err(e) => t.fail(format!("chart {tri}: {e}")),
                }
            }
        }
    }
}

fn canonical_consistency(ctx: &Ctx, rng: &mut ChaCha8Rng, t: &mut Tally) {
    for (size, l) in laminations_upto(ctx) {
        let tris = enumerate_triangulations(size).unwrap();
        let tri = &tris[rng.gen_range(0..tris.len())];
        let c = Configuration::random_positive(size, rng);
        let direct = canonical_function(&l).eval_config(&c).unwrap();
        let x = chart_coords(tri, &c).unwrap();
        for rule in [RedRule::Smallest, RedRule::Largest] {
            let v = canonical_in_chart_with(&l, tri, rule).ok().and_then(|f| f.eval(&x));
            t.check(v.as_ref() == Some(&direct), || format!("chart {tri}, {rule:?}: {v:?} vs {direct}"));
        }
    }
}

fn rank(mut m: Vec<Vec<BigRational>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in r + 1..rows {
            if !m[i][c].is_zero() {
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

fn canonical_independence(ctx: &Ctx, rng: &mut ChaCha8Rng, t: &mut Tally) {
    for size in 4..=ctx.size_cap.min(6) {
        let ls = enumerate_laminations(size, 1).unwrap();
        let tri = Triangulation::zigzag(size);
        let fs: Vec<LaurentPoly> = ls.iter().map(|l| canonical_in_chart_with(l, &tri, RedRule::Smallest).unwrap()).collect();
        let points: Vec<Vec<BigRational>> = (0..ls.len() + 5)
            .map(|_| {
                (0..size - 3)
                    .map(|_| BigRational::new(rng.gen_range(1..40).into(), rng.gen_range(1..9).into()))
                    .collect()
            })
            .collect();
        let m: Vec<Vec<BigRational>> = fs.iter().map(|f| points.iter().map(|p| f.eval(p).unwrap()).collect()).collect();
        let r = rank(m);
        t.check(r == ls.len(), || format!("{size}-gon: rank {r} of {} functions", ls.len()));
    }
}

fn strata_counts(ctx: &Ctx, _: &mut ChaCha8Rng, t: &mut Tally) {
    for n in 1..=(ctx.size_cap - 3).min(4) {
        let g = explore_exchange_graph(&Seed::a_n(n), 1000).unwrap();
        let got = strata_poset(&g).unwrap().counts_by_codim();
        let expected: Vec<usize> = (0..=n).map(|k| associahedron_faces(n + 3, k).unwrap().len()).collect();
        t.check(got == expected, || format!("A{n}: {got:?} vs {expected:?}"));
    }
}

fn associahedron_match(ctx: &Ctx, _: &mut ChaCha8Rng, t: &mut Tally) {
    for n in 1..=(ctx.size_cap - 3).min(4) {
        let g = explore_exchange_graph(&Seed::a_n(n), 1000).unwrap();
        match match_associahedron(&g, n + 3) {
            Ok(m) => t.check(m.ok, || format!("A{n}: {}", m.failure.unwrap_or_default())),
            Err(e) => t.fail(format!("A{n}: {e}")),
        }
    }
}

fn torus_relations(_: &Ctx, rng: &mut ChaCha8Rng, t: &mut Tally) {
    for _ in 0..2000 {
        let p: Triple = std::array::from_fn(|_| rng.gen_range(-50..=50));
        t.check(apply_s(apply_s(p)) == p, || format!("S^2 moves {p:?}"));
        let st = |x| apply_s(apply_t(x));
        t.check(st(st(st(p))) == p, || format!("(ST)^3 moves {p:?}"));
        t.check(st(p) == rotate(p), || format!("ST is not the rotation at {p:?}"));
        let sum = |x: Triple| x.iter().sum::<i64>();
        t.check(sum(apply_s(p)) == sum(p) && sum(apply_t(p)) == sum(p), || format!("sum changes at {p:?}"));
    }
}

fn torus_patch(_: &Ctx, _: &mut ChaCha8Rng, t: &mut Tally) {
    let c = check_patch(&orbit_patch(6));
    t.check(c.ok(), || format!("{c:?}"));
}
