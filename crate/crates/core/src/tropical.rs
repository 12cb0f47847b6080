//! Tropical points, piecewise-linear mutation, valuations, special cones and
//! convex subsets of tropical spaces.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, Error, Result};
use crate::laurent::{tropicalize, PosRational};
use crate::seed::ExchangeGraph;

/// Tropicalized coordinate mutation at `k`:
/// `x'_k = -x_k` and `x'_i = x_i - eps_ik * max(0, -sgn(eps_ik) x_k)`.
pub fn pl_mutate_coords<T>(eps: &[Vec<i64>], k: usize, x: &[T]) -> Vec<T>
where
    T: Clone + Ord + Signed + FromPrimitive,
{
    let xk = &x[k];
    x.iter()
        .enumerate()
        .map(|(i, xi)| {
            if i == k {
                return -xi.clone();
            }
            let e = eps[i][k];
            if e == 0 {
                return xi.clone();
            }
            let s = T::from_i64(-e.signum()).expect("small integer");
            let m = (s * xk.clone()).max(T::zero());
            xi.clone() - T::from_i64(e).expect("small integer") * m
        })
        .collect()
}

/// A point of the tropical space in the coordinates of one chart.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TropicalPoint {
    pub chart: usize,
    pub coords: Vec<BigRational>,
}

impl TropicalPoint {
    pub fn new(chart: usize, coords: Vec<BigRational>) -> Self {
        TropicalPoint { chart, coords }
    }

    pub fn from_ints(chart: usize, coords: &[i64]) -> Self {
        TropicalPoint {
            chart,
            coords: coords.iter().map(|&c| BigRational::from_integer(c.into())).collect(),
        }
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    /// Multiply every coordinate by a positive rational.
    pub fn scaled(&self, lambda: &BigRational) -> Self {
        assert!(lambda.is_positive(), "scaling factor must be positive");
        TropicalPoint { chart: self.chart, coords: self.coords.iter().map(|c| c * lambda).collect() }
    }

    /// Representative in the spherical quotient: largest absolute coordinate
    /// equal to one. The origin is returned unchanged.
    pub fn spherical(&self) -> Self {
        let m = self.coords.iter().map(|c| c.abs()).max().unwrap_or_else(BigRational::zero);
        if m.is_zero() {
            return self.clone();
        }
        self.scaled(&m.recip())
    }

    /// Smallest positive integer multiple with integral coordinates.
    pub fn cleared(&self) -> (BigInt, Vec<BigInt>) {
        let l = self
            .coords
            .iter()
            .fold(BigInt::from(1), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
        let ints = self.coords.iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect();
        (l, ints)
    }
}

#[derive(Serialize, Deserialize)]
struct PointJson {
    chart: String,
    coords: Vec<serde_json::Value>,
}

pub(crate) fn rational_to_json(c: &BigRational) -> serde_json::Value {
    if c.is_integer() {
        match i64::try_from(c.to_integer()) {
            Ok(v) => serde_json::Value::from(v),
            Err(_) => serde_json::Value::from(c.to_integer().to_string()),
        }
    } else {
        serde_json::Value::from(format!("{}/{}", c.numer(), c.denom()))
    }
}

pub(crate) fn rational_from_json(v: &serde_json::Value) -> std::result::Result<BigRational, String> {
    match v {
        serde_json::Value::Number(n) => n
            .as_i64()
            .map(|i| BigRational::from_integer(i.into()))
            .ok_or_else(|| format!("coordinate {n} is not an integer")),
        serde_json::Value::String(s) => parse_rational(s),
        other => Err(format!("coordinate {other} is neither a number nor a string")),
    }
}

/// Parse `p`, `-p` or `p/q`.
pub fn parse_rational(s: &str) -> std::result::Result<BigRational, String> {
    let s = s.trim();
    let bad = || format!("{s:?} is not an exact rational");
    match s.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().map_err(|_| bad())?;
            let b: BigInt = b.trim().parse().map_err(|_| bad())?;
            if b.is_zero() {
                return Err(format!("{s:?} has zero denominator"));
            }
            Ok(BigRational::new(a, b))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

impl Serialize for TropicalPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PointJson { chart: self.chart.to_string(), coords: self.coords.iter().map(rational_to_json).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TropicalPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = PointJson::deserialize(d)?;
        let chart = j
            .chart
            .parse()
            .map_err(|_| D::Error::custom(format!("chart id {:?} is not a node number", j.chart)))?;
        let coords = j.coords.iter().map(rational_from_json).collect::<std::result::Result<_, _>>();
        Ok(TropicalPoint { chart, coords: coords.map_err(D::Error::custom)? })
    }
}

fn check_dim(g: &ExchangeGraph, x: &TropicalPoint) -> Result<()> {
    if x.chart >= g.num_nodes() {
        return invalid(format!("chart {} is not a node of the graph", x.chart));
    }
    if x.coords.len() != g.rank() {
        return invalid(format!("point has {} coordinates, rank is {}", x.coords.len(), g.rank()));
    }
    Ok(())
}

/// Move `x` across the edge at `k` of its chart.
pub fn pl_mutate(g: &ExchangeGraph, x: &TropicalPoint, k: usize) -> Result<TropicalPoint> {
    check_dim(g, x)?;
    if k >= g.rank() {
        return invalid(format!("direction {k} out of range"));
    }
    let e = g.edge(x.chart, k).ok_or(Error::NoPath(x.chart, usize::MAX))?;
    let y = pl_mutate_coords(g.nodes[x.chart].seed.epsilon(), k, &x.coords);
    let mut coords = vec![BigRational::zero(); y.len()];
    for (i, v) in y.into_iter().enumerate() {
        coords[e.perm[i]] = v;
    }
    Ok(TropicalPoint { chart: e.to, coords })
}

/// Express `x` in the coordinates of chart `to` along a shortest path.
pub fn transport(g: &ExchangeGraph, x: &TropicalPoint, to: usize) -> Result<TropicalPoint> {
    check_dim(g, x)?;
    let mut cur = x.clone();
    for e in g.path(x.chart, to)? {
        cur = pl_mutate(g, &cur, e.direction)?;
    }
    Ok(cur)
}

/// Nonnegative coordinates in `chart`, vanishing on `zero_set`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpecialCone {
    pub chart: usize,
    pub zero_set: BTreeSet<usize>,
}

impl SpecialCone {
    pub fn contains_coords(&self, coords: &[BigRational]) -> bool {
        coords.iter().all(|c| !c.is_negative())
            && self.zero_set.iter().all(|&i| coords.get(i).is_some_and(|c| c.is_zero()))
    }
}

pub fn in_special_cone(g: &ExchangeGraph, x: &TropicalPoint, c: &SpecialCone) -> Result<bool> {
    if let Some(&i) = c.zero_set.iter().find(|&&i| i >= g.rank()) {
        return invalid(format!("zero-set index {i} out of range"));
    }
    let y = transport(g, x, c.chart)?;
    Ok(c.contains_coords(&y.coords))
}

/// Charts in which `x` has no negative coordinate, each with the largest
/// zero set `x` satisfies there.
pub fn positive_part_cover(g: &ExchangeGraph, x: &TropicalPoint) -> Result<Vec<SpecialCone>> {
    check_dim(g, x)?;
    let mut out = Vec::new();
    for v in 0..g.num_nodes() {
        let y = transport(g, x, v)?;
        if y.coords.iter().all(|c| !c.is_negative()) {
            let zero_set = (0..y.coords.len()).filter(|&i| y.coords[i].is_zero()).collect();
            out.push(SpecialCone { chart: v, zero_set });
        }
    }
    Ok(out)
}

/// `v_x(F) = -F^t(x)`.
pub fn valuation_of(f: &PosRational, x: &[BigRational]) -> Result<BigRational> {
    if f.is_zero() {
        return invalid("the zero function has no valuation");
    }
    if x.len() != f.vars().len() {
        return invalid(format!("point has {} coordinates, function has {} variables", x.len(), f.vars().len()));
    }
    Ok(-tropicalize(f).eval(x))
}

/// One defining inequality `F^t(x) <= bound`; a missing bound is `+inf`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub f: PosRational,
    pub bound: Option<BigRational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConvexOp {
    Intersect,
    Minkowski,
}

/// Finite list of tropical inequalities in one chart.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ConvexSubset {
    pub constraints: Vec<Constraint>,
}

impl ConvexSubset {
    pub fn new(constraints: Vec<Constraint>) -> Self {
        ConvexSubset { constraints }
    }

    /// `{F^t <= 0}`.
    pub fn spherical(f: PosRational) -> Self {
        ConvexSubset { constraints: vec![Constraint { f, bound: Some(BigRational::zero()) }] }
    }

    pub fn is_spherical(&self) -> bool {
        self.constraints.iter().all(|c| c.bound.as_ref().is_some_and(|b| b.is_zero()))
    }

    pub fn contains(&self, x: &[BigRational]) -> bool {
        self.constraints.iter().all(|c| match &c.bound {
            None => true,
            Some(b) => &tropicalize(&c.f).eval(x) <= b,
        })
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let mut constraints = self.constraints.clone();
        constraints.extend(other.constraints.iter().cloned());
        ConvexSubset { constraints }
    }

    /// Minkowski sum. Spherical subsets multiply their defining functions;
    /// otherwise both sides must use the same functions and bounds add.
    pub fn minkowski(&self, other: &Self) -> Result<Self> {
        if self.is_spherical() && other.is_spherical() {
            let f = self.defining_function()?.mul(&other.defining_function()?);
            return Ok(ConvexSubset::spherical(f));
        }
        if self.constraints.len() != other.constraints.len()
            || self.constraints.iter().zip(&other.constraints).any(|(a, b)| !a.f.same_function(&b.f))
        {
            return Err(Error::ConstraintMismatch);
        }
        let constraints = self
            .constraints
            .iter()
            .zip(&other.constraints)
            .map(|(a, b)| Constraint {
                f: a.f.clone(),
                bound: match (&a.bound, &b.bound) {
                    (Some(x), Some(y)) => Some(x + y),
                    _ => None,
                },
            })
            .collect();
        Ok(ConvexSubset { constraints })
    }

    /// For a spherical subset, the single function whose tropical sublevel
    /// set at zero is the subset: the sum of the constraint functions.
    pub fn defining_function(&self) -> Result<PosRational> {
        let mut it = self.constraints.iter();
        let Some(first) = it.next() else {
            return invalid("empty constraint list has no defining function");
        };
        Ok(it.fold(first.f.clone(), |acc, c| acc.add(&c.f)))
    }
}

pub fn convex_ops(a: &ConvexSubset, b: &ConvexSubset, op: ConvexOp) -> Result<ConvexSubset> {
    match op {
        ConvexOp::Intersect => Ok(a.intersect(b)),
        ConvexOp::Minkowski => a.minkowski(b),
    }
}
