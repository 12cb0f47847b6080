//! Strata of the special completion, indexed by special cones up to the
//! mutations that fix their zero coordinates.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::polygon::{associahedron_faces, enumerate_triangulations, Chord, Triangulation};
use crate::seed::{find_isomorphism, ExchangeGraph, Seed};

/// A polygon obtained by cutting along diagonals, with its vertex labels
/// in cyclic order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SubPolygon {
    pub vertices: Vec<usize>,
}

impl SubPolygon {
    /// Rank `m` of the `A_m` factor; triangles give `0`.
    pub fn rank(&self) -> usize {
        self.vertices.len() - 3
    }

    pub fn type_name(&self) -> String {
        match self.rank() {
            0 => "trivial".to_string(),
            m => format!("A{m}"),
        }
    }
}

/// One stratum, represented by a chart and the zero set of its cone there.
///
/// The cone `{x >= 0, x_c = 0 for c in zero_set}` has codimension
/// `|zero_set|`; its stratum is the cluster variety of the subseed on
/// `zero_set`, so the stratum has codimension `rank - |zero_set|`.
#[derive(Clone, Debug)]
pub struct Stratum {
    pub chart: usize,
    pub zero_set: BTreeSet<usize>,
    pub rank: usize,
    /// Subseed on the zero set; absent for point strata.
    pub seed: Option<Seed>,
    /// For polygon seeds: the diagonals of the chart's triangulation that
    /// are not in the zero set.
    pub cut_diagonals: Option<Vec<Chord>>,
}

impl Stratum {
    pub fn codim(&self) -> usize {
        self.rank - self.zero_set.len()
    }

    pub fn cone_codim(&self) -> usize {
        self.zero_set.len()
    }

    pub fn dim(&self) -> usize {
        self.zero_set.len()
    }
}

/// Strata and the covering relations of the closure order.
#[derive(Clone, Debug)]
pub struct StrataPoset {
    pub strata: Vec<Stratum>,
    /// `(lower, upper)`: `lower` lies in the closure of `upper` and the
    /// codimensions differ by one.
    pub covers: Vec<(usize, usize)>,
    /// Stratum id for every `(chart, zero_set)` pair.
    class_of: HashMap<(usize, BTreeSet<usize>), usize>,
    /// For polygon seeds, the diagonal carried by each index of each chart.
    pub chart_diagonals: Option<Vec<Vec<Chord>>>,
    pub size: Option<usize>,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = x;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
        }
    }
}

fn subset_of(mask: usize, n: usize) -> BTreeSet<usize> {
    (0..n).filter(|i| mask >> i & 1 == 1).collect()
}

/// Label every chart of an `A_n` exchange graph with a triangulation of the
/// `(n+3)`-gon, index by index. `None` when the root seed is not of the
/// polygon form.
pub fn polygon_labels(g: &ExchangeGraph) -> Option<Vec<Vec<Chord>>> {
    let root = &g.nodes[0].seed;
    let n = root.rank();
    let size = n + 3;
    if g.truncated || n > 9 || root.multipliers().iter().any(|&d| d != 1) {
        return None;
    }
    let (t0, perm) = enumerate_triangulations(size)
        .ok()?
        .into_iter()
        .find_map(|t| find_isomorphism(root, &t.seed()).map(|p| (t, p)))?;
    let mut labels: Vec<Option<Vec<Chord>>> = vec![None; g.num_nodes()];
    labels[0] = Some((0..n).map(|i| t0.diagonals()[perm[i]]).collect());
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        let lu = labels[u].clone().expect("labeled");
        let tu = Triangulation::new(size, lu.clone()).ok()?;
        for k in 0..n {
            let e = g.edge(u, k)?;
            let (_, new) = tu.flip(lu[k]).ok()?;
            let mut lv = vec![Chord(0, 0); n];
            for i in 0..n {
                lv[e.perm[i]] = if i == k { new } else { lu[i] };
            }
            match &labels[e.to] {
                Some(existing) if *existing != lv => return None,
                Some(_) => {}
                None => {
                    labels[e.to] = Some(lv);
                    queue.push_back(e.to);
                }
            }
        }
    }
    labels.into_iter().collect()
}

/// All strata of a finite exchange graph with their closure order.
pub fn strata_poset(g: &ExchangeGraph) -> Result<StrataPoset> {
    if g.truncated {
        return Err(Error::Truncated(g.num_nodes()));
    }
    let n = g.rank();
    if n > 16 {
        return invalid(format!("rank {n} is too large for subset enumeration"));
    }
    let subsets = 1usize << n;
    let key = |node: usize, mask: usize| node * subsets + mask;
    let mut uf = UnionFind::new(g.num_nodes() * subsets);
    for e in &g.edges {
        for mask in 0..subsets {
            if mask >> e.direction & 1 == 0 {
                continue;
            }
            let mut image = 0usize;
            for i in 0..n {
                if mask >> i & 1 == 1 {
                    image |= 1 << e.perm[i];
                }
            }
            uf.union(key(e.from, mask), key(e.to, image));
        }
    }
    // Number classes by (codimension, smallest representative).
    let mut reps: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut root_of = vec![0usize; g.num_nodes() * subsets];
    for node in 0..g.num_nodes() {
        for mask in 0..subsets {
            let r = uf.find(key(node, mask));
            root_of[key(node, mask)] = r;
            let codim = n - mask.count_ones() as usize;
            reps.entry((codim, r)).or_insert(key(node, mask));
        }
    }
    let mut order: Vec<(usize, usize, usize)> = reps.iter().map(|(&(c, r), &first)| (c, first, r)).collect();
    order.sort();
    let mut id_of_root: HashMap<usize, usize> = HashMap::new();
    let labels = polygon_labels(g);
    let labels_present = labels.is_some();
    let mut strata = Vec::with_capacity(order.len());
    for (i, &(_, first, r)) in order.iter().enumerate() {
        id_of_root.insert(r, i);
        let (chart, mask) = (first / subsets, first % subsets);
        let zero_set = subset_of(mask, n);
        let keep: Vec<usize> = zero_set.iter().copied().collect();
        let seed = if keep.is_empty() { None } else { Some(g.nodes[chart].seed.subseed(&keep)?) };
        let cut_diagonals = labels.as_ref().map(|l| {
            let mut c: Vec<Chord> = (0..n).filter(|i| !zero_set.contains(i)).map(|i| l[chart][i]).collect();
            c.sort();
            c
        });
        strata.push(Stratum { chart, zero_set, rank: n, seed, cut_diagonals });
    }
    let mut class_of = HashMap::new();
    let mut covers = BTreeSet::new();
    for node in 0..g.num_nodes() {
        for mask in 0..subsets {
            let lower = id_of_root[&root_of[key(node, mask)]];
            class_of.insert((node, subset_of(mask, n)), lower);
            for j in 0..n {
                if mask >> j & 1 == 0 {
                    let upper = id_of_root[&root_of[key(node, mask | 1 << j)]];
                    covers.insert((lower, upper));
                }
            }
        }
    }
    Ok(StrataPoset {
        strata,
        covers: covers.into_iter().collect(),
        class_of,
        chart_diagonals: labels,
        size: labels_present.then_some(n + 3),
    })
}

impl StrataPoset {
    /// Stratum counts indexed by codimension.
    pub fn counts_by_codim(&self) -> Vec<usize> {
        let n = self.strata.first().map_or(0, |s| s.rank);
        let mut out = vec![0; n + 1];
        for s in &self.strata {
            out[s.codim()] += 1;
        }
        out
    }

    /// Cells of the positive part of the completion, by dimension.
    pub fn cell_counts(&self) -> Vec<usize> {
        let mut c = self.counts_by_codim();
        c.reverse();
        c
    }

    /// Stratum id of the cone with `zero_set` in `chart`.
    pub fn stratum_of(&self, chart: usize, zero_set: &BTreeSet<usize>) -> Option<usize> {
        self.class_of.get(&(chart, zero_set.clone())).copied()
    }

    /// Whether stratum `a` lies in the closure of stratum `b`.
    pub fn below(&self, a: usize, b: usize) -> bool {
        if a == b {
            return true;
        }
        let mut seen = BTreeSet::from([a]);
        let mut queue = VecDeque::from([a]);
        while let Some(x) = queue.pop_front() {
            for &(lo, hi) in &self.covers {
                if lo == x && seen.insert(hi) {
                    if hi == b {
                        return true;
                    }
                    queue.push_back(hi);
                }
            }
        }
        false
    }

    pub fn to_json(&self) -> PosetJson {
        PosetJson {
            strata: self
                .strata
                .iter()
                .enumerate()
                .map(|(id, s)| StratumJson {
                    id,
                    chart: s.chart,
                    codim: s.codim(),
                    zero_set: s.zero_set.iter().copied().collect(),
                    cut_diagonals: s.cut_diagonals.as_ref().map(|c| c.iter().map(|d| [d.0, d.1]).collect()),
                    parts: match (&s.cut_diagonals, self.size) {
                        (Some(c), Some(size)) => an_stratum_geometry(c, size)
                            .ok()
                            .map(|p| p.into_iter().map(|q| PartJson { type_name: q.type_name(), vertices: q.vertices }).collect()),
                        _ => None,
                    },
                })
                .collect(),
            covers: self.covers.iter().map(|&(a, b)| [a, b]).collect(),
            counts_by_codim: self.counts_by_codim(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PartJson {
    #[serde(rename = "type")]
    pub type_name: String,
    pub vertices: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StratumJson {
    pub id: usize,
    pub chart: usize,
    pub codim: usize,
    pub zero_set: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cut_diagonals: Option<Vec<[usize; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parts: Option<Vec<PartJson>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PosetJson {
    pub strata: Vec<StratumJson>,
    pub covers: Vec<[usize; 2]>,
    pub counts_by_codim: Vec<usize>,
}

/// Cut the polygon along pairwise non-crossing diagonals.
pub fn an_stratum_geometry(cuts: &[Chord], size: usize) -> Result<Vec<SubPolygon>> {
    for c in cuts {
        if !c.is_diagonal(size) {
            return invalid(format!("{c} is not a diagonal of the {size}-gon"));
        }
    }
    crate::polygon::check_non_crossing(cuts)?;
    let mut parts: Vec<Vec<usize>> = vec![(1..=size).collect()];
    for c in cuts {
        let idx = parts
            .iter()
            .position(|p| p.contains(&c.0) && p.contains(&c.1))
            .expect("each cut lies in one part");
        let p = parts.swap_remove(idx);
        let i = p.iter().position(|&v| v == c.0).expect("endpoint");
        let j = p.iter().position(|&v| v == c.1).expect("endpoint");
        let (i, j) = (i.min(j), i.max(j));
        let first: Vec<usize> = p[i..=j].to_vec();
        let second: Vec<usize> = p[j..].iter().chain(p[..=i].iter()).copied().collect();
        parts.push(first);
        parts.push(second);
    }
    let mut out: Vec<SubPolygon> = parts
        .into_iter()
        .map(|mut v| {
            v.sort();
            SubPolygon { vertices: v }
        })
        .collect();
    out.sort();
    debug_assert_eq!(out.iter().map(|p| p.vertices.len() - 2).sum::<usize>(), size - 2);
    Ok(out)
}

/// Result of comparing the strata poset with the associahedron faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssociahedronMatch {
    pub ok: bool,
    pub strata_counts: Vec<usize>,
    pub face_counts: Vec<usize>,
    pub failure: Option<String>,
}

/// Check that codimension-`k` strata correspond bijectively to `k`-sets of
/// non-crossing diagonals, with closure reversing inclusion.
pub fn match_associahedron(g: &ExchangeGraph, size: usize) -> Result<AssociahedronMatch> {
    let poset = strata_poset(g)?;
    let n = g.rank();
    if size != n + 3 {
        return invalid(format!("rank {n} graph does not belong to the {size}-gon"));
    }
    let face_counts: Vec<usize> =
        (0..=n).map(|k| associahedron_faces(size, k).map(|f| f.len())).collect::<Result<_>>()?;
    let strata_counts = poset.counts_by_codim();
    let fail = |msg: String| AssociahedronMatch {
        ok: false,
        strata_counts: strata_counts.clone(),
        face_counts: face_counts.clone(),
        failure: Some(msg),
    };
    if let Some(k) = (0..=n).find(|&k| strata_counts[k] != face_counts[k]) {
        return Ok(fail(format!(
            "codimension {k}: {} strata, {} faces",
            strata_counts[k], face_counts[k]
        )));
    }
    let Some(_) = &poset.chart_diagonals else {
        return Ok(fail("charts could not be labeled by triangulations".into()));
    };
    let cuts: Vec<Vec<Chord>> = poset.strata.iter().map(|s| s.cut_diagonals.clone().expect("labeled")).collect();
    // The cut sets of a class agree in every chart representing it.
    for ((chart, zs), &id) in &poset.class_of {
        let l = &poset.chart_diagonals.as_ref().expect("labeled")[*chart];
        let mut c: Vec<Chord> = (0..n).filter(|i| !zs.contains(i)).map(|i| l[i]).collect();
        c.sort();
        if c != cuts[id] {
            return Ok(fail(format!("stratum {id} has two different cut sets")));
        }
    }
    for k in 0..=n {
        let mut faces: Vec<Vec<Chord>> = associahedron_faces(size, k)?;
        faces.sort();
        let mut got: Vec<Vec<Chord>> =
            poset.strata.iter().zip(&cuts).filter(|(s, _)| s.codim() == k).map(|(_, c)| c.clone()).collect();
        got.sort();
        if got != faces {
            return Ok(fail(format!("codimension {k}: cut sets differ from the faces")));
        }
    }
    let mut face_covers = 0usize;
    for k in 1..=n {
        face_covers += associahedron_faces(size, k)?.len() * k;
    }
    for &(lo, hi) in &poset.covers {
        let (a, b) = (&cuts[lo], &cuts[hi]);
        if b.len() + 1 != a.len() || !b.iter().all(|c| a.contains(c)) {
            return Ok(fail(format!("cover {lo} < {hi} does not drop exactly one diagonal")));
        }
    }
    if poset.covers.len() != face_covers {
        return Ok(fail(format!("{} covers, {} face inclusions", poset.covers.len(), face_covers)));
    }
    Ok(AssociahedronMatch { ok: true, strata_counts, face_counts, failure: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::Seed;

    fn graph(n: usize) -> ExchangeGraph {
        ExchangeGraph::explore(&Seed::a_n(n), 1000, false).unwrap()
    }

    #[test]
    fn small_counts() {
        assert_eq!(strata_poset(&graph(1)).unwrap().counts_by_codim(), vec![1, 2]);
        assert_eq!(strata_poset(&graph(2)).unwrap().counts_by_codim(), vec![1, 5, 5]);
        assert_eq!(strata_poset(&graph(3)).unwrap().counts_by_codim(), vec![1, 9, 21, 14]);
    }

    #[test]
    fn associahedron_matches() {
        for n in 1..=3 {
            let m = match_associahedron(&graph(n), n + 3).unwrap();
            assert!(m.ok, "{:?}", m.failure);
        }
    }

    #[test]
    fn point_strata_one_per_chart() {
        let g = graph(2);
        let p = strata_poset(&g).unwrap();
        let points: BTreeSet<usize> =
            (0..g.num_nodes()).map(|v| p.stratum_of(v, &BTreeSet::new()).unwrap()).collect();
        assert_eq!(points.len(), 5);
        let open: BTreeSet<usize> =
            (0..g.num_nodes()).map(|v| p.stratum_of(v, &BTreeSet::from([0, 1])).unwrap()).collect();
        assert_eq!(open.len(), 1);
    }

    #[test]
    fn cutting() {
        let hex = an_stratum_geometry(&[Chord(1, 4)], 6).unwrap();
        assert_eq!(hex.iter().map(|p| p.type_name()).collect::<Vec<_>>(), vec!["A1", "A1"]);
        let pent = an_stratum_geometry(&[Chord(1, 3)], 5).unwrap();
        assert_eq!(pent.iter().map(|p| p.type_name()).collect::<Vec<_>>(), vec!["trivial", "A1"]);
        let whole = an_stratum_geometry(&[], 7).unwrap();
        assert_eq!(whole.len(), 1);
        assert_eq!(whole[0].type_name(), "A4");
        assert!(an_stratum_geometry(&[Chord(1, 3), Chord(2, 4)], 5).is_err());
    }

    #[test]
    fn truncated_graph_rejected() {
        let g = ExchangeGraph::explore(&Seed::punctured_torus(), 20, false).unwrap();
        assert!(matches!(strata_poset(&g), Err(Error::Truncated(_))));
    }
}
