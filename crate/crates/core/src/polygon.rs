//! Chords and triangulations of a convex polygon, flips, the adjacency
//! exchange matrix, cross-ratio charts and associahedron faces.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::seed::{mutate_x, Seed};

/// A chord `(a, b)` of the polygon with vertices `1..=size`, `a < b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Chord(pub usize, pub usize);

impl Chord {
    /// Normalizes the endpoint order.
    pub fn new(i: usize, j: usize) -> Self {
        if i < j {
            Chord(i, j)
        } else {
            Chord(j, i)
        }
    }

    pub fn lo(self) -> usize {
        self.0
    }

    pub fn hi(self) -> usize {
        self.1
    }

    pub fn is_side(self, size: usize) -> bool {
        self.1 == self.0 + 1 || (self.0 == 1 && self.1 == size)
    }

    pub fn is_valid(self, size: usize) -> bool {
        1 <= self.0 && self.0 < self.1 && self.1 <= size
    }

    pub fn is_diagonal(self, size: usize) -> bool {
        self.is_valid(size) && !self.is_side(size)
    }

    /// Strict interior intersection for vertices in convex position.
    pub fn crosses(self, other: Chord) -> bool {
        let (p, q) = (self.0, self.1);
        let (r, s) = (other.0, other.1);
        (p < r && r < q && q < s) || (r < p && p < s && s < q)
    }

    pub fn has_vertex(self, v: usize) -> bool {
        self.0 == v || self.1 == v
    }

    /// Variable name used for this chord in cluster charts.
    pub fn label(self) -> String {
        format!("X{}_{}", self.0, self.1)
    }
}

impl fmt::Display for Chord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.0, self.1)
    }
}

/// All diagonals of the polygon, sorted.
pub fn all_diagonals(size: usize) -> Vec<Chord> {
    let mut out = Vec::new();
    for a in 1..=size {
        for b in a + 1..=size {
            let c = Chord(a, b);
            if !c.is_side(size) {
                out.push(c);
            }
        }
    }
    out
}

pub fn all_sides(size: usize) -> Vec<Chord> {
    (1..=size).map(|i| Chord::new(i, i % size + 1)).collect()
}

/// A maximal set of pairwise non-crossing diagonals, stored sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triangulation {
    size: usize,
    diagonals: Vec<Chord>,
}

impl Triangulation {
    pub fn new(size: usize, diagonals: Vec<Chord>) -> Result<Self> {
        if size < 3 {
            return invalid(format!("polygon size {size} is below 3"));
        }
        let mut diagonals: Vec<Chord> = diagonals.into_iter().map(|c| Chord::new(c.0, c.1)).collect();
        diagonals.sort();
        diagonals.dedup();
        for &c in &diagonals {
            if !c.is_diagonal(size) {
                return invalid(format!("{c} is not a diagonal of the {size}-gon"));
            }
        }
        check_non_crossing(&diagonals)?;
        if diagonals.len() != size - 3 {
            return invalid(format!(
                "a triangulation of the {size}-gon has {} diagonals, got {}",
                size - 3,
                diagonals.len()
            ));
        }
        Ok(Triangulation { size, diagonals })
    }

    /// The fan of diagonals at vertex `v`.
    pub fn fan(size: usize, v: usize) -> Self {
        let diagonals = (1..=size)
            .filter(|&w| w != v && !Chord::new(v, w).is_side(size))
            .map(|w| Chord::new(v, w))
            .collect();
        Triangulation::new(size, diagonals).expect("fan is a triangulation")
    }

    /// The zig-zag triangulation, diagonals listed along the zig-zag path
    /// `size, 2, size-1, 3, ...`.
    pub fn zigzag_path(size: usize) -> Vec<Chord> {
        let mut path = Vec::with_capacity(size);
        let (mut lo, mut hi) = (2, size);
        path.push(hi);
        hi -= 1;
        while path.len() < size {
            if path.len() % 2 == 1 {
                path.push(lo);
                lo += 1;
            } else {
                path.push(hi);
                hi -= 1;
            }
        }
        path.windows(2).take(size.saturating_sub(3)).map(|w| Chord::new(w[0], w[1])).collect()
    }

    pub fn zigzag(size: usize) -> Self {
        Triangulation::new(size, Self::zigzag_path(size)).expect("zig-zag is a triangulation")
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn diagonals(&self) -> &[Chord] {
        &self.diagonals
    }

    pub fn index_of(&self, e: Chord) -> Option<usize> {
        self.diagonals.binary_search(&Chord::new(e.0, e.1)).ok()
    }

    pub fn contains(&self, e: Chord) -> bool {
        self.index_of(e).is_some()
    }

    fn has_edge(&self, c: Chord) -> bool {
        c.is_side(self.size) || self.contains(c)
    }

    /// The triangles, each as sorted vertex triple, sorted.
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        let mut out = Vec::with_capacity(self.size - 2);
        let edges: Vec<Chord> = all_sides(self.size).into_iter().chain(self.diagonals.iter().copied()).collect();
        for &Chord(a, b) in &edges {
            for c in b + 1..=self.size {
                if self.has_edge(Chord(a, c)) && self.has_edge(Chord(b, c)) {
                    out.push([a, b, c]);
                }
            }
        }
        out.sort();
        out
    }

    /// The two triangles on either side of diagonal `e`.
    pub fn triangles_at(&self, e: Chord) -> Result<[[usize; 3]; 2]> {
        let e = Chord::new(e.0, e.1);
        if !self.contains(e) {
            return Err(Error::NotInTriangulation(e.0, e.1));
        }
        let apex: Vec<usize> = (1..=self.size)
            .filter(|&v| !e.has_vertex(v) && self.has_edge(Chord::new(v, e.0)) && self.has_edge(Chord::new(v, e.1)))
            .collect();
        assert_eq!(apex.len(), 2, "a diagonal bounds exactly two triangles");
        let tri = |v: usize| {
            let mut t = [e.0, e.1, v];
            t.sort();
            t
        };
        Ok([tri(apex[0]), tri(apex[1])])
    }

    /// Sorted vertices `a < b < c < d` of the quadrilateral around `e`.
    pub fn rectangle(&self, e: Chord) -> Result<[usize; 4]> {
        let [s, t] = self.triangles_at(e)?;
        let mut v: Vec<usize> = s.iter().chain(t.iter()).copied().collect();
        v.sort();
        v.dedup();
        Ok([v[0], v[1], v[2], v[3]])
    }

    /// Replace `e` by the other diagonal of its quadrilateral.
    pub fn flip(&self, e: Chord) -> Result<(Triangulation, Chord)> {
        let e = Chord::new(e.0, e.1);
        let [a, b, c, d] = self.rectangle(e)?;
        let new = if e == Chord(a, c) { Chord(b, d) } else { Chord(a, c) };
        let mut diagonals: Vec<Chord> = self.diagonals.iter().copied().filter(|&x| x != e).collect();
        diagonals.push(new);
        diagonals.sort();
        Ok((Triangulation { size: self.size, diagonals }, new))
    }

    /// Exchange matrix indexed by the sorted diagonals. `E` and `F` are
    /// adjacent when they are two sides of one triangle; at their shared
    /// vertex `v` the entry is `-1` when the far end of `E` comes first
    /// walking from `v` in increasing label order, else `+1`.
    pub fn adjacency_epsilon(&self) -> Vec<Vec<i64>> {
        let m = self.diagonals.len();
        let mut eps = vec![vec![0; m]; m];
        let tris: BTreeSet<[usize; 3]> = self.triangles().into_iter().collect();
        for (i, &e) in self.diagonals.iter().enumerate() {
            for (j, &f) in self.diagonals.iter().enumerate() {
                if i == j {
                    continue;
                }
                let v = if f.has_vertex(e.0) {
                    e.0
                } else if f.has_vertex(e.1) {
                    e.1
                } else {
                    continue;
                };
                let oe = e.0 + e.1 - v;
                let of = f.0 + f.1 - v;
                let mut t = [v, oe, of];
                t.sort();
                if !tris.contains(&t) {
                    continue;
                }
                let n = self.size;
                let ke = (oe + n - v) % n;
                let kf = (of + n - v) % n;
                eps[i][j] = if ke < kf { -1 } else { 1 };
            }
        }
        eps
    }

    /// The cluster seed of this triangulation, variables named by chord.
    pub fn seed(&self) -> Seed {
        let m = self.diagonals.len();
        let labels = self.diagonals.iter().map(|c| c.label()).collect();
        Seed::from_epsilon(self.adjacency_epsilon(), vec![1; m], Some(labels)).expect("adjacency matrix is skew-symmetric")
    }

    pub fn to_json(&self) -> TriangulationJson {
        TriangulationJson { size: self.size, diagonals: self.diagonals.iter().map(|c| [c.0, c.1]).collect() }
    }

    pub fn from_json(j: &TriangulationJson) -> Result<Self> {
        Triangulation::new(j.size, j.diagonals.iter().map(|d| Chord::new(d[0], d[1])).collect())
    }
}

impl fmt::Display for Triangulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.diagonals.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TriangulationJson {
    pub size: usize,
    pub diagonals: Vec<[usize; 2]>,
}

pub(crate) fn check_non_crossing(chords: &[Chord]) -> Result<()> {
    for (i, a) in chords.iter().enumerate() {
        for b in &chords[i + 1..] {
            if a.crosses(*b) {
                return Err(Error::Crossing(a.0, a.1, b.0, b.1));
            }
        }
    }
    Ok(())
}

/// All triangulations, built by choosing the apex over the side `(i, j)`
/// and recursing into the two sub-polygons.
pub fn enumerate_triangulations(size: usize) -> Result<Vec<Triangulation>> {
    if size < 3 {
        return invalid(format!("polygon size {size} is below 3"));
    }
    fn rec(i: usize, j: usize, memo: &mut BTreeMap<(usize, usize), Vec<Vec<Chord>>>) -> Vec<Vec<Chord>> {
        if j - i < 2 {
            return vec![Vec::new()];
        }
        if let Some(v) = memo.get(&(i, j)) {
            return v.clone();
        }
        let mut out = Vec::new();
        for k in i + 1..j {
            let left = rec(i, k, memo);
            let right = rec(k, j, memo);
            for l in &left {
                for r in &right {
                    let mut s: Vec<Chord> = l.iter().chain(r.iter()).copied().collect();
                    if k - i > 1 {
                        s.push(Chord(i, k));
                    }
                    if j - k > 1 {
                        s.push(Chord(k, j));
                    }
                    out.push(s);
                }
            }
        }
        memo.insert((i, j), out.clone());
        out
    }
    let mut memo = BTreeMap::new();
    let mut out: Vec<Triangulation> = rec(1, size, &mut memo)
        .into_iter()
        .map(|mut d| {
            d.sort();
            Triangulation { size, diagonals: d }
        })
        .collect();
    out.sort();
    Ok(out)
}

/// All `k`-element sets of pairwise non-crossing diagonals.
pub fn associahedron_faces(size: usize, k: usize) -> Result<Vec<Vec<Chord>>> {
    if size < 3 || k > size - 3 {
        return invalid(format!("codimension {k} out of range for the {size}-gon"));
    }
    let diags = all_diagonals(size);
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, k: usize, diags: &[Chord], cur: &mut Vec<Chord>, out: &mut Vec<Vec<Chord>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..diags.len() {
            if cur.iter().all(|c| !c.crosses(diags[i])) {
                cur.push(diags[i]);
                go(i + 1, k, diags, cur, out);
                cur.pop();
            }
        }
    }
    go(0, k, &diags, &mut cur, &mut out);
    Ok(out)
}

/// Whether the partition `I | J` of the vertices has no chord inside `I`
/// crossing a chord inside `J`.
pub fn stasheff_divisor_member(size: usize, part: &BTreeSet<usize>) -> Result<bool> {
    if part.iter().any(|&v| v == 0 || v > size) {
        return invalid("partition names a vertex outside the polygon");
    }
    let other: Vec<usize> = (1..=size).filter(|v| !part.contains(v)).collect();
    let first: Vec<usize> = part.iter().copied().collect();
    if first.len() < 2 || other.len() < 2 {
        return invalid("both parts need at least two vertices");
    }
    let chords = |vs: &[usize]| {
        let mut out = Vec::new();
        for (i, &a) in vs.iter().enumerate() {
            for &b in &vs[i + 1..] {
                out.push(Chord::new(a, b));
            }
        }
        out
    };
    let ci = chords(&first);
    let cj = chords(&other);
    Ok(ci.iter().all(|a| cj.iter().all(|b| !a.crosses(*b))))
}

/// Whether `set` is a set of cyclically consecutive vertices.
pub fn is_cyclic_interval(size: usize, set: &BTreeSet<usize>) -> bool {
    if set.is_empty() || set.len() == size {
        return true;
    }
    // Exactly one vertex of the set has its predecessor outside the set.
    set.iter().filter(|&&v| !set.contains(&(if v == 1 { size } else { v - 1 }))).count() == 1
}

/// A point of the projective line over the rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum P1 {
    Finite(BigRational),
    Inf,
}

impl P1 {
    pub fn int(v: i64) -> Self {
        P1::Finite(BigRational::from_integer(v.into()))
    }

    /// Homogeneous coordinates `(y, 1)` or `(1, 0)`.
    pub fn homogeneous(&self) -> (BigRational, BigRational) {
        match self {
            P1::Finite(y) => (y.clone(), BigRational::one()),
            P1::Inf => (BigRational::one(), BigRational::zero()),
        }
    }

    /// Image under `y -> (a y + b) / (c y + d)`.
    pub fn mobius(&self, m: &[BigRational; 4]) -> P1 {
        let (y, w) = self.homogeneous();
        let num = &m[0] * &y + &m[1] * &w;
        let den = &m[2] * &y + &m[3] * &w;
        if den.is_zero() {
            P1::Inf
        } else {
            P1::Finite(num / den)
        }
    }
}

impl fmt::Display for P1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            P1::Inf => write!(f, "inf"),
            P1::Finite(y) if y.is_integer() => write!(f, "{}", y.numer()),
            P1::Finite(y) => write!(f, "{}/{}", y.numer(), y.denom()),
        }
    }
}

impl std::str::FromStr for P1 {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "inf" || t == "∞" {
            return Ok(P1::Inf);
        }
        crate::tropical::parse_rational(t).map(P1::Finite).map_err(Error::Parse)
    }
}

/// `det [[a_i, a_j], [b_i, b_j]]` for homogeneous lifts.
pub fn delta(p: &P1, q: &P1) -> BigRational {
    let (a1, b1) = p.homogeneous();
    let (a2, b2) = q.homogeneous();
    a1 * b2 - a2 * b1
}

/// `r+(y1, y2, y3, y4) = (y1 - y2)(y3 - y4) / ((y2 - y3)(y1 - y4))`, with
/// infinity handled through homogeneous coordinates.
pub fn cross_ratio(y1: &P1, y2: &P1, y3: &P1, y4: &P1) -> Result<BigRational> {
    let d12 = delta(y1, y2);
    let d34 = delta(y3, y4);
    let d23 = delta(y2, y3);
    let d14 = delta(y1, y4);
    for (d, what) in [(&d12, "y1 = y2"), (&d34, "y3 = y4"), (&d23, "y2 = y3"), (&d14, "y1 = y4")] {
        if d.is_zero() {
            return Err(Error::CoincidentPoints(what.to_string()));
        }
    }
    Ok(d12 * d34 / (d23 * d14))
}

/// Pairwise distinct points labeled by the polygon's vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Configuration {
    points: Vec<P1>,
}

impl Configuration {
    pub fn new(points: Vec<P1>) -> Result<Self> {
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if points[i] == points[j] {
                    return Err(Error::CoincidentPoints(format!("points {} and {} are both {}", i + 1, j + 1, points[i])));
                }
            }
        }
        Ok(Configuration { points })
    }

    pub fn size(&self) -> usize {
        self.points.len()
    }

    /// Point at vertex `v` (1-based).
    pub fn point(&self, v: usize) -> &P1 {
        &self.points[v - 1]
    }

    pub fn points(&self) -> &[P1] {
        &self.points
    }

    pub fn mobius(&self, m: &[BigRational; 4]) -> Configuration {
        Configuration { points: self.points.iter().map(|p| p.mobius(m)).collect() }
    }

    /// Random distinct points, increasing along the vertex labels, so every
    /// chart value is positive.
    pub fn random_positive<R: Rng>(size: usize, rng: &mut R) -> Configuration {
        let mut vals: Vec<BigRational> = Vec::with_capacity(size);
        let mut cur = BigRational::from_integer(rng.gen_range(-20..20).into());
        for _ in 0..size {
            vals.push(cur.clone());
            cur += BigRational::new(rng.gen_range(1..30).into(), rng.gen_range(1..8).into());
        }
        Configuration { points: vals.into_iter().map(P1::Finite).collect() }
    }

    /// Random distinct points in arbitrary order, sometimes with infinity.
    pub fn random_generic<R: Rng>(size: usize, rng: &mut R) -> Configuration {
        loop {
            let mut pts: Vec<P1> = (0..size)
                .map(|_| P1::Finite(BigRational::new(rng.gen_range(-60..=60).into(), rng.gen_range(1..=9).into())))
                .collect();
            if rng.gen_bool(0.3) {
                let i = rng.gen_range(0..size);
                pts[i] = P1::Inf;
            }
            if let Ok(c) = Configuration::new(pts) {
                return c;
            }
        }
    }

    pub fn to_json(&self) -> ConfigurationJson {
        ConfigurationJson { points: self.points.iter().map(|p| p.to_string()).collect() }
    }

    pub fn from_json(j: &ConfigurationJson) -> Result<Self> {
        Configuration::new(j.points.iter().map(|s| s.parse()).collect::<Result<_>>()?)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ConfigurationJson {
    pub points: Vec<String>,
}

/// Cross-ratio coordinate of diagonal `e`: the rectangle `a < b < c < d`
/// around `e`, read from the lower endpoint of `e`.
pub fn chart_coord(t: &Triangulation, c: &Configuration, e: Chord) -> Result<BigRational> {
    let [a, b, cc, d] = t.rectangle(e)?;
    let p = |v: usize| c.point(v);
    if Chord::new(e.0, e.1) == Chord(a, cc) {
        cross_ratio(p(a), p(b), p(cc), p(d))
    } else {
        cross_ratio(p(b), p(cc), p(d), p(a))
    }
}

/// Coordinates of all diagonals of `t`, in the order of `t.diagonals()`.
pub fn chart_coords(t: &Triangulation, c: &Configuration) -> Result<Vec<BigRational>> {
    if c.size() != t.size() {
        return invalid(format!("configuration has {} points, polygon has {} vertices", c.size(), t.size()));
    }
    t.diagonals().iter().map(|&e| chart_coord(t, c, e)).collect()
}

/// Outcome of [`verify_flip_mutation`], naming the first mismatch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlipCheck {
    pub ok: bool,
    pub failure: Option<String>,
}

/// Check that flipping `e` mutates the adjacency matrix and the cross-ratio
/// coordinates exactly as seed mutation at `e` predicts, on `samples`
/// random configurations.
pub fn verify_flip_mutation<R: Rng>(t: &Triangulation, e: Chord, samples: usize, rng: &mut R) -> Result<FlipCheck> {
    let e = Chord::new(e.0, e.1);
    let k = t.index_of(e).ok_or(Error::NotInTriangulation(e.0, e.1))?;
    let (t2, e2) = t.flip(e)?;
    // Old index -> new index, with e going to the flipped diagonal.
    let map: Vec<usize> = t
        .diagonals()
        .iter()
        .map(|&f| t2.index_of(if f == e { e2 } else { f }).expect("flip keeps other diagonals"))
        .collect();
    let seed = t.seed();
    let mutated = seed.mutate(k);
    let eps2 = t2.adjacency_epsilon();
    let m = map.len();
    for i in 0..m {
        for j in 0..m {
            if mutated.epsilon()[i][j] != eps2[map[i]][map[j]] {
                let fail = format!(
                    "exchange entry ({}, {}) after flipping {e}: mutation gives {}, flip gives {}",
                    t.diagonals()[i],
                    t.diagonals()[j],
                    mutated.epsilon()[i][j],
                    eps2[map[i]][map[j]]
                );
                return Ok(FlipCheck { ok: false, failure: Some(fail) });
            }
        }
    }
    let images = mutate_x(&seed, k);
    for s in 0..samples {
        let c = if s % 2 == 0 {
            Configuration::random_positive(t.size(), rng)
        } else {
            Configuration::random_generic(t.size(), rng)
        };
        let old = chart_coords(t, &c)?;
        let new = chart_coords(&t2, &c)?;
        for i in 0..m {
            let predicted = images[i].eval(&old);
            if predicted.as_ref() != Some(&new[map[i]]) {
                let fail = format!(
                    "coordinate of {} after flipping {e}: mutation gives {:?}, cross-ratio gives {}",
                    t.diagonals()[i],
                    predicted.map(|p| p.to_string()),
                    new[map[i]]
                );
                return Ok(FlipCheck { ok: false, failure: Some(fail) });
            }
        }
    }
    Ok(FlipCheck { ok: true, failure: None })
}

/// `Catalan(m)` by the product formula.
pub fn catalan(m: usize) -> BigInt {
    let mut c = BigInt::one();
    for i in 0..m {
        c = c * BigInt::from(2 * (2 * i + 1)) / BigInt::from(i + 2);
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn cross_ratio_examples() {
        let z = P1::Finite(q(7, 3));
        assert_eq!(cross_ratio(&P1::Inf, &P1::int(-1), &P1::int(0), &z).unwrap(), q(7, 3));
        assert_eq!(cross_ratio(&P1::int(1), &P1::int(2), &P1::int(3), &P1::int(4)).unwrap(), q(1, 3));
        let z = P1::int(5);
        assert_eq!(cross_ratio(&P1::int(-1), &P1::int(0), &z, &P1::Inf).unwrap(), q(1, 5));
        assert!(cross_ratio(&P1::int(1), &P1::int(1), &P1::int(3), &P1::int(4)).is_err());
    }

    #[test]
    fn square_chart() {
        let t = Triangulation::new(4, vec![Chord(1, 3)]).unwrap();
        let c = Configuration::new(vec![P1::Inf, P1::int(-1), P1::int(0), P1::Finite(q(5, 2))]).unwrap();
        assert_eq!(chart_coords(&t, &c).unwrap(), vec![q(5, 2)]);
        assert_eq!(t.adjacency_epsilon(), vec![vec![0]]);
    }

    #[test]
    fn flips() {
        let t = Triangulation::new(4, vec![Chord(1, 3)]).unwrap();
        assert_eq!(t.flip(Chord(1, 3)).unwrap().0.diagonals(), &[Chord(2, 4)]);
        let fan = Triangulation::fan(5, 1);
        let (t2, new) = fan.flip(Chord(1, 3)).unwrap();
        assert_eq!(new, Chord(2, 4));
        assert_eq!(t2.diagonals(), &[Chord(1, 4), Chord(2, 4)]);
        assert_eq!(t2.flip(new).unwrap().0, fan);
        assert_eq!(fan.flip(Chord(2, 5)), Err(Error::NotInTriangulation(2, 5)));
    }

    #[test]
    fn fan_adjacency_pentagon() {
        let eps = Triangulation::fan(5, 1).adjacency_epsilon();
        // (1,3) reaches 3 before (1,4) reaches 4 walking up from vertex 1.
        assert_eq!(eps, vec![vec![0, -1], vec![1, 0]]);
    }

    #[test]
    fn zigzag_is_linear_a_n() {
        for size in 4..=10 {
            let t = Triangulation::zigzag(size);
            let path = Triangulation::zigzag_path(size);
            let idx: Vec<usize> = path.iter().map(|&c| t.index_of(c).unwrap()).collect();
            let eps = t.adjacency_epsilon();
            for a in 0..path.len() {
                for b in 0..path.len() {
                    let v = eps[idx[a]][idx[b]];
                    if a.abs_diff(b) == 1 {
                        assert_eq!(v.abs(), 1);
                        assert_eq!(v, -eps[idx[b]][idx[a]]);
                    } else {
                        assert_eq!(v, 0);
                    }
                }
            }
        }
    }

    #[test]
    fn counts() {
        assert_eq!(enumerate_triangulations(4).unwrap().len(), 2);
        assert_eq!(enumerate_triangulations(5).unwrap().len(), 5);
        assert_eq!(enumerate_triangulations(6).unwrap().len(), 14);
        assert_eq!(associahedron_faces(5, 1).unwrap().len(), 5);
        assert_eq!(associahedron_faces(5, 2).unwrap().len(), 5);
        assert_eq!(associahedron_faces(7, 0).unwrap(), vec![Vec::<Chord>::new()]);
        assert_eq!(catalan(4), BigInt::from(14));
    }

    #[test]
    fn stasheff_examples() {
        assert!(stasheff_divisor_member(5, &BTreeSet::from([1, 2])).unwrap());
        assert!(!stasheff_divisor_member(5, &BTreeSet::from([1, 3])).unwrap());
        assert!(!stasheff_divisor_member(8, &BTreeSet::from([1, 3, 5, 7])).unwrap());
        assert!(stasheff_divisor_member(5, &BTreeSet::from([1])).is_err());
    }

    #[test]
    fn flip_bridge_small() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for size in 4..=6 {
            for t in enumerate_triangulations(size).unwrap() {
                for &e in t.diagonals() {
                    let r = verify_flip_mutation(&t, e, 4, &mut rng).unwrap();
                    assert!(r.ok, "{t} at {e}: {:?}", r.failure);
                }
            }
        }
    }
}
