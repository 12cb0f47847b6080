//! Seeds, seed and coordinate mutation, seed isomorphism and exchange graphs.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::laurent::{rational_substitute, LaurentPoly, PosRational};
use crate::tropical::pl_mutate_coords;

/// A lattice basis together with a skew-symmetrizable exchange form.
///
/// The bilinear form is stored through its skew-symmetric rational part
/// `w`, with `(a, b) = w(a, b) * d_b` on basis vectors, so that the
/// exchange matrix of the current basis is `eps[i][j] = w(e_i, e_j) d_j`.
/// Multipliers travel with the indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Seed {
    basis: Vec<Vec<i64>>,
    form: Vec<Vec<BigRational>>,
    d: Vec<i64>,
    labels: Vec<String>,
    eps: Vec<Vec<i64>>,
}

/// Default chart variable names `X0..X{n-1}`.
pub fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("X{i}")).collect()
}

fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

impl Seed {
    /// Build from an exchange matrix and multipliers, with the standard basis.
    pub fn from_epsilon(eps: Vec<Vec<i64>>, d: Vec<i64>, labels: Option<Vec<String>>) -> Result<Self> {
        let n = eps.len();
        if eps.iter().any(|r| r.len() != n) {
            return invalid("exchange matrix must be square");
        }
        if d.len() != n {
            return invalid(format!("expected {n} multipliers, got {}", d.len()));
        }
        if let Some(i) = d.iter().position(|&x| x <= 0) {
            return invalid(format!("multiplier d[{i}] = {} must be positive", d[i]));
        }
        let labels = labels.unwrap_or_else(|| default_labels(n));
        if labels.len() != n {
            return invalid(format!("expected {n} labels, got {}", labels.len()));
        }
        let mut sorted = labels.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != n {
            return invalid("labels must be distinct");
        }
        let form: Vec<Vec<BigRational>> = (0..n)
            .map(|i| (0..n).map(|j| BigRational::new(eps[i][j].into(), d[j].into())).collect())
            .collect();
        for i in 0..n {
            for j in 0..n {
                if form[i][j] != -&form[j][i] {
                    return invalid(format!(
                        "not skew-symmetrizable: eps[{i}][{j}]/d[{j}] != -eps[{j}][{i}]/d[{i}]"
                    ));
                }
            }
        }
        let basis = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        Ok(Seed { basis, form, d, labels, eps })
    }

    /// Linearly oriented A_n: `eps[i][i+1] = 1`, `eps[i+1][i] = -1`.
    pub fn a_n(n: usize) -> Self {
        let mut eps = vec![vec![0; n]; n];
        for i in 0..n.saturating_sub(1) {
            eps[i][i + 1] = 1;
            eps[i + 1][i] = -1;
        }
        Seed::from_epsilon(eps, vec![1; n], None).expect("A_n is skew-symmetric")
    }

    /// The once-punctured torus seed.
    pub fn punctured_torus() -> Self {
        let eps = vec![vec![0, 2, -2], vec![-2, 0, 2], vec![2, -2, 0]];
        Seed::from_epsilon(eps, vec![1; 3], None).expect("torus form is skew-symmetric")
    }

    pub fn rank(&self) -> usize {
        self.d.len()
    }

    pub fn epsilon(&self) -> &[Vec<i64>] {
        &self.eps
    }

    pub fn multipliers(&self) -> &[i64] {
        &self.d
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    fn pair(&self, a: &[i64], b: &[i64]) -> BigRational {
        let mut s = BigRational::zero();
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                if bj != 0 && !self.form[i][j].is_zero() {
                    s += &self.form[i][j] * q(ai * bj);
                }
            }
        }
        s
    }

    fn recompute_eps(&mut self) {
        let n = self.rank();
        for i in 0..n {
            for j in 0..n {
                let v = self.pair(&self.basis[i], &self.basis[j]) * q(self.d[j]);
                assert!(v.is_integer(), "exchange matrix entry is not integral");
                self.eps[i][j] = v.to_integer().to_i64().expect("exchange entry fits i64");
            }
        }
        debug_assert!(self.is_skew_symmetrizable());
    }

    /// `eps[i][j] / d[j] == -eps[j][i] / d[i]` for all pairs.
    pub fn is_skew_symmetrizable(&self) -> bool {
        let n = self.rank();
        (0..n).all(|i| (0..n).all(|j| self.eps[i][j] * self.d[i] == -self.eps[j][i] * self.d[j]))
    }

    /// Seed mutation in direction `k`: `e_i + (eps_ik)_+ e_k` for `i != k`,
    /// and `-e_k`.
    pub fn mutate(&self, k: usize) -> Seed {
        assert!(k < self.rank(), "mutation direction out of range");
        let mut out = self.clone();
        for i in 0..self.rank() {
            if i == k {
                out.basis[i] = self.basis[k].iter().map(|x| -x).collect();
            } else {
                let c = self.eps[i][k].max(0);
                if c != 0 {
                    out.basis[i] =
                        self.basis[i].iter().zip(&self.basis[k]).map(|(a, b)| a + c * b).collect();
                }
            }
        }
        out.recompute_eps();
        out
    }

    /// Restrict to the basis vectors in `keep`, with the induced form.
    pub fn subseed(&self, keep: &[usize]) -> Result<Seed> {
        if keep.is_empty() {
            return invalid("subseed needs at least one index");
        }
        let mut seen = vec![false; self.rank()];
        for &i in keep {
            if i >= self.rank() || seen[i] {
                return invalid(format!("bad subseed index {i}"));
            }
            seen[i] = true;
        }
        let m = keep.len();
        let form: Vec<Vec<BigRational>> = keep
            .iter()
            .map(|&a| keep.iter().map(|&b| self.pair(&self.basis[a], &self.basis[b])).collect())
            .collect();
        let d: Vec<i64> = keep.iter().map(|&i| self.d[i]).collect();
        let eps: Vec<Vec<i64>> = keep.iter().map(|&a| keep.iter().map(|&b| self.eps[a][b]).collect()).collect();
        let basis = (0..m).map(|i| (0..m).map(|j| i64::from(i == j)).collect()).collect();
        let labels = keep.iter().map(|&i| self.labels[i].clone()).collect();
        Ok(Seed { basis, form, d, labels, eps })
    }

    /// The same seed with indices moved: index `i` becomes `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Seed {
        let n = self.rank();
        let mut inv = vec![0; n];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        let basis = (0..n).map(|a| self.basis[inv[a]].clone()).collect();
        let d = (0..n).map(|a| self.d[inv[a]]).collect();
        let labels = (0..n).map(|a| self.labels[inv[a]].clone()).collect();
        let eps = (0..n).map(|a| (0..n).map(|b| self.eps[inv[a]][inv[b]]).collect()).collect();
        Seed { basis, form: self.form.clone(), d, labels, eps }
    }

    /// Exchange data as JSON-friendly value.
    pub fn to_json(&self) -> SeedJson {
        SeedJson {
            n: self.rank(),
            epsilon: self.eps.clone(),
            d: self.d.clone(),
            labels: Some(self.labels.clone()),
            basis: Some(self.basis.clone()),
        }
    }

    pub fn from_json(j: &SeedJson) -> Result<Seed> {
        if j.epsilon.len() != j.n {
            return invalid(format!("n = {} but epsilon has {} rows", j.n, j.epsilon.len()));
        }
        Seed::from_epsilon(j.epsilon.clone(), j.d.clone(), j.labels.clone())
    }
}

/// Seed file format. `basis` is written on output and ignored on input.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SeedJson {
    pub n: usize,
    pub epsilon: Vec<Vec<i64>>,
    pub d: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<Vec<i64>>>,
}

/// Pullback of the chart coordinates under mutation at `k`: the image of
/// each new coordinate as a positive rational function of the old ones,
/// `X_k -> X_k^-1` and `X_i -> X_i (1 + X_k^(-sgn eps_ik))^(-eps_ik)`.
pub fn mutate_x(s: &Seed, k: usize) -> Vec<PosRational> {
    let vars = s.labels();
    let n = s.rank();
    let one = LaurentPoly::one(vars);
    (0..n)
        .map(|i| {
            let xi = PosRational::var(vars, i);
            if i == k {
                return xi.recip().expect("variable is nonzero");
            }
            let e = s.epsilon()[i][k];
            if e == 0 {
                return xi;
            }
            let mut exp = vec![0; n];
            exp[k] = -(e.signum() as i32);
            let base = &one + &LaurentPoly::monomial(vars, exp, 1);
            let factor = PosRational::from_poly(base).expect("positive").powi(-e).expect("nonzero");
            xi.mul(&factor)
        })
        .collect()
}

/// `mutate_x` keyed by variable name.
pub fn mutate_x_map(s: &Seed, k: usize) -> BTreeMap<String, PosRational> {
    s.labels().iter().cloned().zip(mutate_x(s, k)).collect()
}

/// Compose pullbacks: `outer` expresses some coordinates in the variables
/// of `inner`'s target, `inner` expresses those in the base chart.
pub fn compose_pullbacks(
    outer: &[PosRational],
    inner_vars: &[String],
    inner: &[PosRational],
) -> Result<Vec<PosRational>> {
    let subs: BTreeMap<String, PosRational> =
        inner_vars.iter().cloned().zip(inner.iter().cloned()).collect();
    outer.iter().map(|f| rational_substitute(f, &subs)).collect()
}

/// Mutating twice at `k` gives back every coordinate exactly.
pub fn check_involution(s: &Seed, k: usize) -> bool {
    let first = mutate_x(s, k);
    let second = mutate_x(&s.mutate(k), k);
    match compose_pullbacks(&second, s.labels(), &first) {
        Ok(images) => images
            .iter()
            .enumerate()
            .all(|(i, f)| f.same_function(&PosRational::var(s.labels(), i))),
        Err(_) => false,
    }
}

/// Index permutation carrying `a` onto `b`: `perm[i]` is the index in `b`
/// matching index `i` of `a`, with `eps` and multipliers preserved.
pub fn find_isomorphism(a: &Seed, b: &Seed) -> Option<Vec<usize>> {
    let n = a.rank();
    if b.rank() != n {
        return None;
    }
    let sig = |s: &Seed, i: usize| {
        let mut row: Vec<(i64, i64)> = (0..n).map(|j| (s.eps[i][j], s.d[j])).collect();
        row.sort();
        (s.d[i], row)
    };
    let sa: Vec<_> = (0..n).map(|i| sig(a, i)).collect();
    let sb: Vec<_> = (0..n).map(|i| sig(b, i)).collect();
    let mut ma = sa.clone();
    let mut mb = sb.clone();
    ma.sort();
    mb.sort();
    if ma != mb {
        return None;
    }
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(
        i: usize,
        a: &Seed,
        b: &Seed,
        sa: &[(i64, Vec<(i64, i64)>)],
        sb: &[(i64, Vec<(i64, i64)>)],
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        let n = a.rank();
        if i == n {
            return true;
        }
        for c in 0..n {
            if used[c] || sa[i] != sb[c] {
                continue;
            }
            let ok = (0..i).all(|j| a.eps[i][j] == b.eps[c][perm[j]] && a.eps[j][i] == b.eps[perm[j]][c]);
            if !ok {
                continue;
            }
            perm[i] = c;
            used[c] = true;
            if go(i + 1, a, b, sa, sb, perm, used) {
                return true;
            }
            used[c] = false;
        }
        false
    }
    if go(0, a, b, &sa, &sb, &mut perm, &mut used) {
        Some(perm)
    } else {
        None
    }
}

/// `perm` carries `eps` and `d` of `a` exactly onto `b`.
pub fn is_isomorphism(a: &Seed, b: &Seed, perm: &[usize]) -> bool {
    let n = a.rank();
    b.rank() == n
        && (0..n).all(|i| {
            a.d[i] == b.d[perm[i]] && (0..n).all(|j| a.eps[i][j] == b.eps[perm[i]][perm[j]])
        })
}

#[derive(Clone, Debug)]
pub struct GraphNode {
    pub seed: Seed,
    /// Coordinates, in this chart, of the root-chart tropical points
    /// `e_0, .., e_{n-1}, -e_0, .., -e_{n-1}`; row `i` is coordinate `i`.
    pub frame: Vec<Vec<i64>>,
    pub depth: usize,
    /// Pullback of this chart's coordinates to the root chart.
    pub chart: Option<Vec<PosRational>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphEdge {
    pub from: usize,
    pub to: usize,
    pub direction: usize,
    /// `perm[i]` is the index in `to` of index `i` of the mutated seed.
    pub perm: Vec<usize>,
}

/// Charts reachable from a root seed by mutation, identified when their
/// tropical frames agree up to reindexing.
#[derive(Clone, Debug)]
pub struct ExchangeGraph {
    pub nodes: Vec<GraphNode>,
    pub edges: Vec<GraphEdge>,
    pub truncated: bool,
    out: Vec<Vec<Option<usize>>>,
}

fn frame_key(frame: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut rows = frame.to_vec();
    rows.sort();
    rows
}

fn root_frame(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| {
            let mut row = vec![0; 2 * n];
            row[i] = 1;
            row[n + i] = -1;
            row
        })
        .collect()
}

fn mutate_frame(frame: &[Vec<i64>], eps: &[Vec<i64>], k: usize) -> Vec<Vec<i64>> {
    let n = frame.len();
    let cols = frame.first().map_or(0, |r| r.len());
    let mut out = vec![vec![0; cols]; n];
    for c in 0..cols {
        let x: Vec<i64> = (0..n).map(|i| frame[i][c]).collect();
        let y = pl_mutate_coords(eps, k, &x);
        for i in 0..n {
            out[i][c] = y[i];
        }
    }
    out
}

impl ExchangeGraph {
    /// Breadth-first exploration from `root`, stopping once `max_nodes`
    /// charts are known. With `charts` set, each node also gets its composed
    /// pullback to the root chart.
    pub fn explore(root: &Seed, max_nodes: usize, charts: bool) -> Result<Self> {
        if max_nodes == 0 {
            return invalid("max_nodes must be at least 1");
        }
        let n = root.rank();
        let mut nodes = vec![GraphNode { seed: root.clone(), frame: root_frame(n), depth: 0, chart: None }];
        let mut index: HashMap<Vec<Vec<i64>>, usize> = HashMap::new();
        index.insert(frame_key(&nodes[0].frame), 0);
        let mut out: Vec<Vec<Option<usize>>> = vec![vec![None; n]];
        let mut edges = Vec::new();
        let mut truncated = false;
        let mut queue = VecDeque::from([0usize]);
        while let Some(u) = queue.pop_front() {
            for k in 0..n {
                let seed = nodes[u].seed.mutate(k);
                let frame = mutate_frame(&nodes[u].frame, nodes[u].seed.epsilon(), k);
                let key = frame_key(&frame);
                let target = match index.get(&key) {
                    Some(&v) => Some(v),
                    None if nodes.len() < max_nodes => {
                        let v = nodes.len();
                        nodes.push(GraphNode { seed: seed.clone(), frame: frame.clone(), depth: nodes[u].depth + 1, chart: None });
                        out.push(vec![None; n]);
                        index.insert(key, v);
                        queue.push_back(v);
                        Some(v)
                    }
                    None => {
                        truncated = true;
                        None
                    }
                };
                let Some(v) = target else { continue };
                let perm = match_rows(&frame, &nodes[v].frame);
                assert!(
                    is_isomorphism(&seed, &nodes[v].seed, &perm),
                    "charts with equal frames carry non-isomorphic seeds"
                );
                out[u][k] = Some(edges.len());
                edges.push(GraphEdge { from: u, to: v, direction: k, perm });
            }
        }
        let mut g = ExchangeGraph { nodes, edges, truncated, out };
        if charts {
            g.compute_charts()?;
        }
        Ok(g)
    }

    fn compute_charts(&mut self) -> Result<()> {
        let root = &self.nodes[0].seed;
        self.nodes[0].chart = Some((0..root.rank()).map(|i| PosRational::var(root.labels(), i)).collect());
        let max_depth = self.nodes.iter().map(|n| n.depth).max().unwrap_or(0);
        for depth in 1..=max_depth {
            let level: Vec<usize> = (0..self.nodes.len()).filter(|&v| self.nodes[v].depth == depth).collect();
            let computed: Vec<Result<Vec<PosRational>>> = level
                .par_iter()
                .map(|&v| {
                    let e = self
                        .edges
                        .iter()
                        .find(|e| e.to == v && self.nodes[e.from].depth + 1 == depth)
                        .expect("BFS parent edge");
                    let parent = &self.nodes[e.from];
                    let step = mutate_x(&parent.seed, e.direction);
                    let via = compose_pullbacks(&step, parent.seed.labels(), parent.chart.as_ref().expect("parent chart"))?;
                    let mut images = vec![None; via.len()];
                    for (i, f) in via.into_iter().enumerate() {
                        images[e.perm[i]] = Some(f);
                    }
                    Ok(images.into_iter().map(|f| f.expect("perm is a bijection")).collect())
                })
                .collect();
            for (&v, c) in level.iter().zip(computed) {
                self.nodes[v].chart = Some(c?);
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.nodes[0].seed.rank()
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    /// Number of undirected edges among the explored nodes.
    pub fn num_undirected_edges(&self) -> usize {
        self.edges.len() / 2 + self.edges.iter().filter(|e| e.from == e.to).count() / 2
    }

    /// The edge leaving `node` in direction `k`, if explored.
    pub fn edge(&self, node: usize, k: usize) -> Option<&GraphEdge> {
        self.out.get(node)?.get(k)?.map(|e| &self.edges[e])
    }

    /// Shortest sequence of edges from `from` to `to`.
    pub fn path(&self, from: usize, to: usize) -> Result<Vec<&GraphEdge>> {
        if from >= self.nodes.len() || to >= self.nodes.len() {
            return Err(Error::NoPath(from, to));
        }
        let mut prev: Vec<Option<usize>> = vec![None; self.nodes.len()];
        let mut seen = vec![false; self.nodes.len()];
        seen[from] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            if u == to {
                break;
            }
            for e in self.out[u].iter().flatten() {
                let v = self.edges[*e].to;
                if !seen[v] {
                    seen[v] = true;
                    prev[v] = Some(*e);
                    queue.push_back(v);
                }
            }
        }
        if !seen[to] {
            return Err(Error::NoPath(from, to));
        }
        let mut path = Vec::new();
        let mut cur = to;
        while cur != from {
            let e = prev[cur].expect("visited node has a predecessor");
            path.push(&self.edges[e]);
            cur = self.edges[e].from;
        }
        path.reverse();
        Ok(path)
    }

    /// Every explored edge has a return edge along the mutated direction
    /// that undoes its reindexing.
    pub fn edges_are_involutive(&self) -> bool {
        self.edges.iter().all(|e| match self.edge(e.to, e.perm[e.direction]) {
            None => self.truncated,
            Some(back) => back.to == e.from && (0..e.perm.len()).all(|i| back.perm[e.perm[i]] == i),
        })
    }

    pub fn to_json(&self, with_charts: bool) -> GraphJson {
        GraphJson {
            nodes: self
                .nodes
                .iter()
                .enumerate()
                .map(|(id, node)| NodeJson {
                    id,
                    depth: node.depth,
                    seed: node.seed.to_json(),
                    chart: if with_charts {
                        node.chart.as_ref().map(|c| {
                            node.seed.labels().iter().cloned().zip(c.iter().map(|f| f.to_string())).collect()
                        })
                    } else {
                        None
                    },
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeJson { from: e.from, to: e.to, direction: e.direction, perm: e.perm.clone() })
                .collect(),
            truncated: self.truncated,
        }
    }
}

/// `perm[i]` = row of `b` equal to row `i` of `a`. Rows are distinct.
fn match_rows(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<usize> {
    a.iter()
        .map(|r| b.iter().position(|s| s == r).expect("frames agree up to reindexing"))
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NodeJson {
    pub id: usize,
    pub depth: usize,
    pub seed: SeedJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chart: Option<BTreeMap<String, String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EdgeJson {
    pub from: usize,
    pub to: usize,
    pub direction: usize,
    pub perm: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphJson {
    pub nodes: Vec<NodeJson>,
    pub edges: Vec<EdgeJson>,
    pub truncated: bool,
}

/// Explore and fail with [`Error::Truncated`] if the graph is not closed.
pub fn explore_exchange_graph(s: &Seed, max_nodes: usize) -> Result<ExchangeGraph> {
    let g = ExchangeGraph::explore(s, max_nodes, false)?;
    if g.truncated {
        return Err(Error::Truncated(max_nodes));
    }
    Ok(g)
}
