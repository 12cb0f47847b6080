//! Integral laminations of the polygon, their tree coordinates and the
//! canonical functions built from determinant factors.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::laurent::LaurentPoly;
use crate::polygon::{all_diagonals, all_sides, Chord, Configuration, Triangulation};

/// Integer weights on chords. Diagonal weights are positive and the
/// weighted diagonals do not cross; every vertex has weight sum zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lamination {
    size: usize,
    weights: BTreeMap<Chord, i64>,
}

impl Lamination {
    pub fn new(size: usize, weights: BTreeMap<Chord, i64>) -> Result<Self> {
        let weights = validate_raw(size, weights)?;
        for (c, &w) in &weights {
            if c.is_diagonal(size) && w < 0 {
                return invalid(format!("diagonal {c} has negative weight {w}"));
            }
        }
        let diags: Vec<Chord> = weights.keys().copied().filter(|c| c.is_diagonal(size)).collect();
        crate::polygon::check_non_crossing(&diags)?;
        for v in 1..=size {
            let s = vertex_sum(&weights, v);
            if s != 0 {
                return invalid(format!("weights at vertex {v} sum to {s}, not zero"));
            }
        }
        Ok(Lamination { size, weights })
    }

    pub fn zero(size: usize) -> Self {
        Lamination { size, weights: BTreeMap::new() }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn weights(&self) -> &BTreeMap<Chord, i64> {
        &self.weights
    }

    pub fn weight(&self, c: Chord) -> i64 {
        self.weights.get(&c).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn to_json(&self) -> LaminationJson {
        LaminationJson {
            size: self.size,
            weights: self.weights.iter().map(|(c, &w)| WeightJson { chord: [c.0, c.1], w }).collect(),
        }
    }

    pub fn from_json(j: &LaminationJson) -> Result<Self> {
        let mut weights = BTreeMap::new();
        for e in &j.weights {
            *weights.entry(Chord::new(e.chord[0], e.chord[1])).or_insert(0) += e.w;
        }
        Lamination::new(j.size, weights)
    }
}

fn validate_raw(size: usize, weights: BTreeMap<Chord, i64>) -> Result<BTreeMap<Chord, i64>> {
    if size < 3 {
        return invalid(format!("polygon size {size} is below 3"));
    }
    let mut out = BTreeMap::new();
    for (c, w) in weights {
        let c = Chord::new(c.0, c.1);
        if !c.is_valid(size) {
            return invalid(format!("{c} is not a chord of the {size}-gon"));
        }
        if w != 0 {
            out.insert(c, w);
        }
    }
    Ok(out)
}

fn vertex_sum(weights: &BTreeMap<Chord, i64>, v: usize) -> i64 {
    weights.iter().filter(|(c, _)| c.has_vertex(v)).map(|(_, &w)| w).sum()
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct WeightJson {
    pub chord: [usize; 2],
    pub w: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct LaminationJson {
    pub size: usize,
    pub weights: Vec<WeightJson>,
}

/// A trivalent plane tree with one leaf at each polygon vertex, given by
/// the vertex splits of its internal edges. Each split is stored as the
/// side not containing vertex 1, an interval `lo..=hi` of `2..=size`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlaneTree {
    size: usize,
    splits: Vec<(usize, usize)>,
}

impl PlaneTree {
    /// The tree dual to a triangulation of the polygon whose vertices are
    /// the sides `(i, i+1)`: the chord `(a, b)` there cuts off `a+1..=b`.
    pub fn from_dual_triangulation(t: &Triangulation) -> Self {
        let splits = t.diagonals().iter().map(|c| (c.0 + 1, c.1)).collect();
        PlaneTree { size: t.size(), splits }
    }

    /// Build from vertex intervals `lo..=hi`; an interval containing vertex 1
    /// is replaced by its complement.
    pub fn from_splits(size: usize, splits: &[(usize, usize)]) -> Result<Self> {
        let mut chords = Vec::with_capacity(splits.len());
        for &(lo, hi) in splits {
            if lo == 0 || hi > size || lo > hi {
                return invalid(format!("split {lo}..={hi} is not an interval of 1..={size}"));
            }
            let (lo, hi) = if lo == 1 { (hi + 1, size) } else { (lo, hi) };
            let len = hi + 1 - lo;
            if len < 2 || len + 2 > size {
                return invalid(format!("split {lo}..={hi} does not cut off an internal edge"));
            }
            chords.push(Chord(lo - 1, hi));
        }
        let t = Triangulation::new(size, chords)
            .map_err(|e| Error::InvalidInput(format!("splits do not form a trivalent tree: {e}")))?;
        Ok(PlaneTree::from_dual_triangulation(&t))
    }

    /// Splits `2..=k` for `k = 3..size-1`.
    pub fn caterpillar(size: usize) -> Self {
        PlaneTree::from_dual_triangulation(&Triangulation::fan(size, 1))
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn splits(&self) -> &[(usize, usize)] {
        &self.splits
    }

    pub fn num_edges(&self) -> usize {
        self.splits.len()
    }

    fn dual_chord(&self, e: usize) -> Chord {
        let (lo, hi) = self.splits[e];
        Chord(lo - 1, hi)
    }
}

/// Half the weight of chords separating each split, one entry per internal
/// edge. Works on raw weights and fails when a half-integer appears.
pub fn tree_coords_raw(size: usize, weights: &BTreeMap<Chord, i64>, t: &PlaneTree) -> Result<Vec<i64>> {
    if t.size != size {
        return invalid(format!("tree has {} leaves, polygon has {size} vertices", t.size));
    }
    t.splits
        .iter()
        .enumerate()
        .map(|(e, &(lo, hi))| {
            let inside = |v: usize| lo <= v && v <= hi;
            let through: i64 =
                weights.iter().filter(|(c, _)| inside(c.0) != inside(c.1)).map(|(_, &w)| w).sum();
            if through % 2 != 0 {
                Err(Error::HalfIntegral(e))
            } else {
                Ok(through / 2)
            }
        })
        .collect()
}

pub fn tree_coords(l: &Lamination, t: &PlaneTree) -> Result<Vec<i64>> {
    tree_coords_raw(l.size, &l.weights, t)
}

/// The unique lamination with the given tree coordinates.
///
/// Coordinates are extended from the tree's edges to every chord of the
/// dual polygon by the tropical exchange relation, then converted to
/// interval weight sums and differenced back to chord weights.
pub fn laminations_from_coords(coords: &[i64], t: &PlaneTree) -> Result<Lamination> {
    let n = t.size;
    if coords.len() != t.num_edges() {
        return invalid(format!("expected {} coordinates, got {}", t.num_edges(), coords.len()));
    }
    let tree: Vec<Chord> = (0..t.num_edges()).map(|e| t.dual_chord(e)).collect();
    let mut known: HashMap<Chord, i64> = tree.iter().copied().zip(coords.iter().copied()).collect();

    fn val(a: usize, b: usize, n: usize, tree: &[Chord], known: &mut HashMap<Chord, i64>) -> i64 {
        let c = Chord::new(a, b);
        if c.is_side(n) || c.0 == c.1 {
            return 0;
        }
        if let Some(&v) = known.get(&c) {
            return v;
        }
        // A tree chord crossing c that closes a triangle with c's first end.
        let (a, b) = (c.0, c.1);
        let cross = tree
            .iter()
            .copied()
            .filter(|d| d.crosses(c))
            .find(|d| {
                [d.0, d.1].iter().all(|&x| {
                    let s = Chord::new(a, x);
                    tree.iter().all(|&o| o == *d || o == s || !o.crosses(s))
                })
            })
            .expect("a crossing tree chord bounds the triangle at the first endpoint");
        let mut v = [a, b, cross.0, cross.1];
        v.sort();
        let [p, q, r, s] = v;
        let lhs = (val(p, q, n, tree, known) + val(r, s, n, tree, known))
            .max(val(p, s, n, tree, known) + val(q, r, n, tree, known));
        let out = lhs - val(cross.0, cross.1, n, tree, known);
        known.insert(c, out);
        out
    }

    // Weight inside the linear interval i..=j.
    let mut interval = |i: usize, j: usize| -> i64 {
        if j <= i || j - i + 1 >= n - 1 {
            return 0;
        }
        if i >= 2 {
            -val(i - 1, j, n, &tree, &mut known)
        } else {
            -val(j, n, n, &tree, &mut known)
        }
    };
    let mut weights = BTreeMap::new();
    for i in 1..=n {
        for j in i + 1..=n {
            let inner = if j >= i + 2 { interval(i + 1, j - 1) } else { 0 };
            let w = interval(i, j) - interval(i + 1, j) - interval(i, j - 1) + inner;
            if w != 0 {
                weights.insert(Chord(i, j), w);
            }
        }
    }
    Lamination::new(n, weights)
}

/// Every lamination whose coordinates on the caterpillar tree lie in
/// `[-bound, bound]`.
pub fn enumerate_laminations(size: usize, bound: i64) -> Result<Vec<Lamination>> {
    if bound < 0 {
        return invalid("bound must be nonnegative");
    }
    if size < 3 {
        return invalid(format!("polygon size {size} is below 3"));
    }
    let t = PlaneTree::caterpillar(size);
    let m = t.num_edges();
    let mut out = Vec::new();
    let mut c = vec![-bound; m];
    loop {
        out.push(laminations_from_coords(&c, &t)?);
        let mut i = 0;
        while i < m && c[i] == bound {
            c[i] = -bound;
            i += 1;
        }
        if i == m {
            break;
        }
        c[i] += 1;
    }
    Ok(out)
}

/// Formal product of determinant factors, one exponent per chord.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaMonomial {
    pub exponents: BTreeMap<Chord, i64>,
}

impl DeltaMonomial {
    /// Evaluate on a configuration lifted by `lift(vertex) -> vector`.
    pub fn eval_lift<F>(&self, lift: F) -> Result<BigRational>
    where
        F: Fn(usize) -> (BigRational, BigRational),
    {
        let mut out = BigRational::one();
        for (c, &w) in &self.exponents {
            let (a1, b1) = lift(c.0);
            let (a2, b2) = lift(c.1);
            let d = a1 * &b2 - a2 * &b1;
            if d.is_zero() {
                return Err(Error::CoincidentPoints(format!("{c}")));
            }
            out *= num_traits::pow(if w < 0 { d.recip() } else { d }, w.unsigned_abs() as usize);
        }
        Ok(out)
    }

    /// Evaluate on the lift `(y, 1)`, `(1, 0)` of a configuration.
    pub fn eval_config(&self, c: &Configuration) -> Result<BigRational> {
        self.eval_lift(|v| c.point(v).homogeneous())
    }
}

impl fmt::Display for DeltaMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponents.is_empty() {
            return write!(f, "1");
        }
        for (i, (c, w)) in self.exponents.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if *w == 1 {
                write!(f, "D{}_{}", c.0, c.1)?;
            } else {
                write!(f, "D{}_{}^{}", c.0, c.1, w)?;
            }
        }
        Ok(())
    }
}

/// `prod Delta_A^{w_A}` over the lamination's chords.
pub fn canonical_function(l: &Lamination) -> DeltaMonomial {
    DeltaMonomial { exponents: l.weights.clone() }
}

/// Which outgoing edge of each non-root triangle gets `Delta = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum RedRule {
    #[default]
    Smallest,
    Largest,
}

/// Expansions of determinant factors in the cluster chart of `T` under a
/// red-edge section.
pub struct ChartExpander {
    t: Triangulation,
    vars: Vec<String>,
    memo: HashMap<Chord, LaurentPoly>,
    root: [usize; 3],
}

impl ChartExpander {
    pub fn new(t: &Triangulation, rule: RedRule) -> Self {
        let vars: Vec<String> = t.diagonals().iter().map(|c| c.label()).collect();
        let tris = t.triangles();
        let root = tris[0];
        let mut memo: HashMap<Chord, LaurentPoly> = HashMap::new();
        let one = LaurentPoly::one(&vars);
        for (x, y) in [(0, 1), (0, 2), (1, 2)] {
            memo.insert(Chord(root[x], root[y]), one.clone());
        }
        // Walk the dual tree outward from the root triangle.
        let mut queue = VecDeque::from([(root, None::<Chord>)]);
        while let Some((tri, parent)) = queue.pop_front() {
            let edges = [Chord(tri[0], tri[1]), Chord(tri[0], tri[2]), Chord(tri[1], tri[2])];
            for &e in &edges {
                if Some(e) == parent || !t.contains(e) {
                    continue;
                }
                let [s1, s2] = t.triangles_at(e).expect("diagonal of t");
                let child = if s1 == tri { s2 } else { s1 };
                let w = child.iter().copied().find(|v| !e.has_vertex(*v)).expect("apex");
                let f1 = Chord::new(w, e.0);
                let f2 = Chord::new(w, e.1);
                let (red, other) = match rule {
                    RedRule::Smallest => (f1.min(f2), f1.max(f2)),
                    RedRule::Largest => (f1.max(f2), f1.min(f2)),
                };
                memo.insert(red, one.clone());
                // Solve X_E = (product of rectangle sides) for the unknown.
                let ke = t.index_of(e).expect("diagonal index");
                let xe = LaurentPoly::var(&vars, ke);
                let mut r = [e.0, e.1, w, tri.iter().copied().find(|v| !e.has_vertex(*v)).expect("apex")];
                r.sort();
                let [a, b, c, d] = r;
                // For E = (a, c): X = D_ab D_cd / (D_bc D_ad); for E = (b, d)
                // the same expression is X^-1.
                let (num, den) = if e == Chord(a, c) {
                    ([Chord(a, b), Chord(c, d)], [Chord(b, c), Chord(a, d)])
                } else {
                    ([Chord(b, c), Chord(a, d)], [Chord(a, b), Chord(c, d)])
                };
                // X * prod(den) = prod(num); exactly one factor is unknown.
                let mut lhs = xe.clone();
                let mut rhs = one.clone();
                let mut unknown_in_num = None;
                for f in num {
                    if f == other {
                        unknown_in_num = Some(true);
                    } else {
                        rhs = &rhs * &memo[&f];
                    }
                }
                for f in den {
                    if f == other {
                        unknown_in_num = Some(false);
                    } else {
                        lhs = &lhs * &memo[&f];
                    }
                }
                let value = if unknown_in_num.expect("unknown edge lies on the rectangle") {
                    lhs.div_exact(&rhs)
                } else {
                    rhs.div_exact(&lhs)
                }
                .expect("monomials divide");
                memo.insert(other, value);
                queue.push_back((child, Some(e)));
            }
        }
        debug_assert!(all_sides(t.size()).iter().all(|s| memo.contains_key(s)));
        ChartExpander { t: t.clone(), vars, memo, root }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn root_triangle(&self) -> [usize; 3] {
        self.root
    }

    /// Expansion of `Delta_F`; chords outside the triangulation go through
    /// the three-term Plücker relation.
    pub fn delta(&mut self, f: Chord) -> LaurentPoly {
        let f = Chord::new(f.0, f.1);
        if let Some(v) = self.memo.get(&f) {
            return v.clone();
        }
        let (a, b) = (f.0, f.1);
        let cross = self
            .t
            .diagonals()
            .iter()
            .copied()
            .filter(|d| d.crosses(f))
            .find(|d| {
                [d.0, d.1].iter().all(|&x| {
                    let s = Chord::new(a, x);
                    self.t.diagonals().iter().all(|&o| o == *d || o == s || !o.crosses(s))
                })
            })
            .expect("a crossing diagonal bounds the triangle at the first endpoint");
        let mut v = [a, b, cross.0, cross.1];
        v.sort();
        let [p, q, r, s] = v;
        let t1 = &self.delta(Chord(p, q)) * &self.delta(Chord(r, s));
        let t2 = &self.delta(Chord(p, s)) * &self.delta(Chord(q, r));
        let num = &t1 + &t2;
        let den = self.delta(cross);
        let out = num.div_exact(&den).expect("division by a monomial");
        assert!(out.is_positive(), "determinant expansion has a nonpositive coefficient");
        self.memo.insert(f, out.clone());
        out
    }

    /// Vectors of the section: the root triangle's vertices go to `e1`,
    /// `e2`, `-e1 + e2`, and each further vertex is fixed by its two
    /// determinants with an already placed edge. Entries are evaluated at
    /// the chart point `x`.
    pub fn lift_at(&mut self, x: &[BigRational]) -> Result<Vec<(BigRational, BigRational)>> {
        let n = self.t.size();
        let mut vecs: Vec<Option<(BigRational, BigRational)>> = vec![None; n + 1];
        let one = BigRational::one();
        let zero = BigRational::zero();
        vecs[self.root[0]] = Some((one.clone(), zero.clone()));
        vecs[self.root[1]] = Some((zero.clone(), one.clone()));
        vecs[self.root[2]] = Some((-one.clone(), one.clone()));
        let mut changed = true;
        while changed {
            changed = false;
            for tri in self.t.triangles() {
                let placed: Vec<usize> = tri.iter().copied().filter(|&v| vecs[v].is_some()).collect();
                if placed.len() != 2 {
                    continue;
                }
                let w = tri.iter().copied().find(|&v| vecs[v].is_none()).expect("one missing");
                let (u, v) = (placed[0], placed[1]);
                let du = self.delta_value(Chord::new(u, w), x)?;
                let dv = self.delta_value(Chord::new(v, w), x)?;
                // det(p_u, p_w) = sign(u, w) du, det(p_v, p_w) = sign(v, w) dv
                let su = if u < w { du } else { -du };
                let sv = if v < w { dv } else { -dv };
                let pu = vecs[u].clone().expect("placed");
                let pv = vecs[v].clone().expect("placed");
                let det = &pu.0 * &pv.1 - &pu.1 * &pv.0;
                // p_w = alpha p_u + beta p_v
                let beta = &su / &det;
                let alpha = -(&sv) / &det;
                let pw = (&alpha * &pu.0 + &beta * &pv.0, &alpha * &pu.1 + &beta * &pv.1);
                vecs[w] = Some(pw);
                changed = true;
            }
        }
        Ok(vecs.into_iter().skip(1).map(|v| v.expect("every vertex is placed")).collect())
    }

    fn delta_value(&mut self, c: Chord, x: &[BigRational]) -> Result<BigRational> {
        self.delta(c).eval(x).ok_or_else(|| Error::Degenerate(format!("Delta{c} has a pole")))
    }
}

/// Expansion of `Delta_F` in the chart of `T`, smallest-edge red coloring.
pub fn delta_in_chart(f: Chord, t: &Triangulation) -> Result<LaurentPoly> {
    if !f.is_valid(t.size()) {
        return invalid(format!("{f} is not a chord of the {}-gon", t.size()));
    }
    Ok(ChartExpander::new(t, RedRule::Smallest).delta(f))
}

pub fn canonical_in_chart_with(l: &Lamination, t: &Triangulation, rule: RedRule) -> Result<LaurentPoly> {
    if l.size != t.size() {
        return invalid(format!("lamination is on the {}-gon, triangulation on the {}-gon", l.size, t.size()));
    }
    let mut ex = ChartExpander::new(t, rule);
    let mut out = LaurentPoly::one(ex.vars());
    for (&c, &w) in &l.weights {
        let d = ex.delta(c);
        let factor = if w >= 0 {
            d.pow(w as u32)
        } else {
            d.powi(w).ok_or_else(|| invalid::<()>(format!("Delta{c} is not a unit")).unwrap_err())?
        };
        out = &out * &factor;
    }
    Ok(out)
}

/// `prod Delta^w` of the lamination as a Laurent polynomial in the chart
/// of `T`.
pub fn canonical_in_chart(l: &Lamination, t: &Triangulation) -> Result<LaurentPoly> {
    canonical_in_chart_with(l, t, RedRule::Smallest)
}

/// All diagonals and sides of the polygon.
pub fn all_chords(size: usize) -> Vec<Chord> {
    let mut out: Vec<Chord> = all_diagonals(size).into_iter().chain(all_sides(size)).collect();
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygon::chart_coords;

    fn lam(size: usize, w: &[((usize, usize), i64)]) -> Lamination {
        Lamination::new(size, w.iter().map(|&((a, b), x)| (Chord::new(a, b), x)).collect()).unwrap()
    }

    fn square_sides(t: i64) -> Lamination {
        lam(4, &[((1, 2), t), ((3, 4), t), ((2, 3), -t), ((1, 4), -t)])
    }

    fn pentagon_example() -> Lamination {
        lam(5, &[((1, 3), 1), ((3, 4), -1), ((4, 5), 1), ((1, 5), -1)])
    }

    #[test]
    fn square_tree_coordinate() {
        // The caterpillar of the square has the single split {2, 3} | {4, 1}.
        // Pick the tree separating {1, 2} | {3, 4} instead: split 3..=4.
        let t = PlaneTree::from_splits(4, &[(3, 4)]).unwrap();
        assert_eq!(PlaneTree::from_splits(4, &[(1, 2)]).unwrap(), t);
        assert_eq!(tree_coords(&square_sides(5), &t).unwrap(), vec![-5]);
        let back = laminations_from_coords(&[-1], &t).unwrap();
        assert_eq!(back, square_sides(1));
    }

    #[test]
    fn zero_lamination() {
        let t = PlaneTree::caterpillar(6);
        assert_eq!(tree_coords(&Lamination::zero(6), &t).unwrap(), vec![0, 0, 0]);
        assert!(laminations_from_coords(&[0, 0, 0], &t).unwrap().is_zero());
        assert_eq!(canonical_in_chart(&Lamination::zero(6), &Triangulation::fan(6, 1)).unwrap().to_string(), "1");
    }

    #[test]
    fn half_integral_flags_vertex_violation() {
        let mut w = BTreeMap::new();
        w.insert(Chord(1, 3), 1);
        let t = PlaneTree::caterpillar(5);
        assert!(matches!(tree_coords_raw(5, &w, &t), Err(Error::HalfIntegral(_))));
    }

    #[test]
    fn pentagon_example_is_integral() {
        let l = pentagon_example();
        for t in crate::polygon::enumerate_triangulations(5).unwrap() {
            let tree = PlaneTree::from_dual_triangulation(&t);
            let c = tree_coords(&l, &tree).unwrap();
            assert_eq!(laminations_from_coords(&c, &tree).unwrap(), l);
        }
        assert_eq!(canonical_function(&l).to_string(), "D1_3*D1_5^-1*D3_4^-1*D4_5");
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_laminations(6, 0).unwrap().len(), 1);
        assert_eq!(enumerate_laminations(4, 1).unwrap().len(), 3);
        assert_eq!(enumerate_laminations(5, 1).unwrap().len(), 9);
    }

    #[test]
    fn square_canonical_is_cross_ratio() {
        let t = Triangulation::new(4, vec![Chord(1, 3)]).unwrap();
        let p = canonical_in_chart(&square_sides(1), &t).unwrap();
        assert_eq!(p.to_string(), "1*X1_3");
        let t2 = Triangulation::new(4, vec![Chord(2, 4)]).unwrap();
        assert_eq!(canonical_in_chart(&square_sides(1), &t2).unwrap().to_string(), "1*X2_4^-1");
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(1);
        for _ in 0..10 {
            let c = Configuration::random_generic(4, &mut rng);
            let x = chart_coords(&t, &c).unwrap();
            assert_eq!(canonical_function(&square_sides(1)).eval_config(&c).unwrap(), x[0]);
        }
    }

    #[test]
    fn red_delta_is_one() {
        let t = Triangulation::zigzag(6);
        let mut ex = ChartExpander::new(&t, RedRule::Smallest);
        let r = ex.root_triangle();
        assert!(ex.delta(Chord(r[0], r[1])).is_one());
        assert!(!t.contains(Chord(1, 4)));
        let d = delta_in_chart(Chord(1, 4), &t).unwrap();
        assert!(d.is_positive() && d.num_terms() > 1);
        let ones = vec![BigRational::one(); 3];
        assert_eq!(d.eval(&ones).unwrap(), BigRational::from_integer(d.coeff_sum()));
    }

    #[test]
    fn section_lift_reproduces_expansion() {
        let t = Triangulation::zigzag(6);
        let mut ex = ChartExpander::new(&t, RedRule::Smallest);
        let x: Vec<BigRational> = (0..3).map(|i| BigRational::new((i + 2).into(), 3.into())).collect();
        let lift = ex.lift_at(&x).unwrap();
        for c in all_chords(6) {
            let (a1, b1) = &lift[c.0 - 1];
            let (a2, b2) = &lift[c.1 - 1];
            let det = a1 * b2 - a2 * b1;
            assert_eq!(ex.delta(c).eval(&x).unwrap(), det, "chord {c}");
        }
    }
}
