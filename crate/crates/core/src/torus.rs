//! Piecewise-linear action of the modular group on tropical points of the
//! punctured torus, and the triangle patch it generates.
//!
//! Points are integer triples `(x, y, z)` of shear-type coordinates on the
//! three edges of an ideal triangulation. The rotation `R = ST` permutes the
//! edges cyclically and `S` is the swap of the first two edges followed by
//! the flip of the third, which makes it an involution.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Triple = [i64; 3];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    S,
    T,
}

/// `(x, y, z) -> (y, z, x)`.
pub fn rotate(p: Triple) -> Triple {
    [p[1], p[2], p[0]]
}

/// Flip of the `z` edge as a map of coordinates, without relabeling. It
/// preserves `x + y + z` but has infinite order.
pub fn edge_flip(p: Triple) -> Triple {
    let [x, y, z] = p;
    [x - 2 * 0i64.max(-z), y + 2 * 0i64.max(z), -z]
}

/// The involution `S`: swap `x` and `y`, then flip the `z` edge.
pub fn apply_s(p: Triple) -> Triple {
    edge_flip([p[1], p[0], p[2]])
}

/// `T = S R`, so that `S T = R` as maps.
pub fn apply_t(p: Triple) -> Triple {
    apply_s(rotate(p))
}

pub fn apply_generator(g: Generator, p: Triple) -> Triple {
    match g {
        Generator::S => apply_s(p),
        Generator::T => apply_t(p),
    }
}

/// Syllables of the free-product normal form in `S` and `U = ST`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Syllable {
    S,
    U(u8),
}

/// A word in `S` and `T`, stored in the canonical form of its group
/// element in `Z/2 * Z/3`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PLWord {
    letters: Vec<Generator>,
}

impl PLWord {
    pub fn identity() -> Self {
        PLWord { letters: Vec::new() }
    }

    /// Reduce an arbitrary word using `S^2 = (ST)^3 = e`.
    pub fn new(letters: &[Generator]) -> Self {
        let mut stack: Vec<Syllable> = Vec::new();
        let push = |s: Syllable, stack: &mut Vec<Syllable>| match (s, stack.last().copied()) {
            (Syllable::S, Some(Syllable::S)) => {
                stack.pop();
            }
            (Syllable::U(a), Some(Syllable::U(b))) => {
                stack.pop();
                if (a + b) % 3 != 0 {
                    stack.push(Syllable::U((a + b) % 3));
                }
            }
            _ => stack.push(s),
        };
        for &g in letters {
            match g {
                Generator::S => push(Syllable::S, &mut stack),
                Generator::T => {
                    push(Syllable::S, &mut stack);
                    push(Syllable::U(1), &mut stack);
                }
            }
        }
        let mut out: Vec<Generator> = Vec::new();
        let mut emit = |g: Generator| {
            if g == Generator::S && out.last() == Some(&Generator::S) {
                out.pop();
            } else {
                out.push(g);
            }
        };
        for s in stack {
            match s {
                Syllable::S => emit(Generator::S),
                Syllable::U(k) => {
                    for _ in 0..k {
                        emit(Generator::S);
                        emit(Generator::T);
                    }
                }
            }
        }
        PLWord { letters: out }
    }

    pub fn letters(&self) -> &[Generator] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// `self` followed on the right by `other`.
    pub fn then(&self, other: &PLWord) -> PLWord {
        let mut l = self.letters.clone();
        l.extend_from_slice(&other.letters);
        PLWord::new(&l)
    }
}

impl fmt::Display for PLWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        for g in &self.letters {
            write!(f, "{}", if *g == Generator::S { 'S' } else { 'T' })?;
        }
        Ok(())
    }
}

impl FromStr for PLWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "e" || s.is_empty() {
            return Ok(PLWord::identity());
        }
        let letters = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                'S' | 's' => Ok(Generator::S),
                'T' | 't' => Ok(Generator::T),
                _ => Err(Error::Parse(format!("unexpected letter {c:?} in word {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PLWord::new(&letters))
    }
}

/// Act by a word; the rightmost letter acts first.
pub fn apply_pl(w: &PLWord, p: Triple) -> Triple {
    w.letters.iter().rev().fold(p, |q, &g| apply_generator(g, q))
}

pub const BASE_TRIANGLE: [Triple; 3] = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];

/// One triangle of the patch, with the shortest word producing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatchTriangle {
    pub word: PLWord,
    pub vertices: [Triple; 3],
}

impl PatchTriangle {
    fn vertex_set(&self) -> BTreeSet<Triple> {
        self.vertices.iter().copied().collect()
    }

    pub fn sides(&self) -> [BTreeSet<Triple>; 3] {
        let v = self.vertices;
        [
            BTreeSet::from([v[0], v[1]]),
            BTreeSet::from([v[1], v[2]]),
            BTreeSet::from([v[2], v[0]]),
        ]
    }
}

/// All reduced words of length at most `max_len`, shortest first.
pub fn reduced_words(max_len: usize) -> Vec<PLWord> {
    let mut seen: BTreeSet<PLWord> = BTreeSet::new();
    let mut out = Vec::new();
    let mut layer: Vec<Vec<Generator>> = vec![Vec::new()];
    for len in 0..=max_len {
        let mut words: Vec<PLWord> = layer.iter().map(|l| PLWord::new(l)).filter(|w| w.len() <= max_len).collect();
        words.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        for w in words {
            if seen.insert(w.clone()) {
                out.push(w);
            }
        }
        if len == max_len {
            break;
        }
        layer = layer
            .iter()
            .flat_map(|l| {
                [Generator::S, Generator::T].into_iter().map(move |g| {
                    let mut m = l.clone();
                    m.push(g);
                    m
                })
            })
            .collect();
    }
    out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    out
}

/// Images of the base triangle under all reduced words up to `max_len`,
/// deduplicated as vertex sets.
pub fn orbit_patch(max_len: usize) -> Vec<PatchTriangle> {
    let mut seen: BTreeSet<BTreeSet<Triple>> = BTreeSet::new();
    let mut out = Vec::new();
    for w in reduced_words(max_len) {
        let t = PatchTriangle { vertices: BASE_TRIANGLE.map(|v| apply_pl(&w, v)), word: w };
        if seen.insert(t.vertex_set()) {
            out.push(t);
        }
    }
    out
}

/// Side-sharing statistics of a patch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatchCheck {
    pub triangles: usize,
    pub distinct: bool,
    pub interior_sides: usize,
    pub bad_sides: Vec<[Triple; 2]>,
}

impl PatchCheck {
    pub fn ok(&self) -> bool {
        self.distinct && self.bad_sides.is_empty()
    }
}

/// Check that triangles are distinct, that no side is used more than twice,
/// and that every side of a triangle whose three neighbours all lie in the
/// patch is shared by exactly two triangles.
pub fn check_patch(patch: &[PatchTriangle]) -> PatchCheck {
    let sets: BTreeSet<BTreeSet<Triple>> = patch.iter().map(|t| t.vertex_set()).collect();
    let distinct = sets.len() == patch.len() && patch.iter().all(|t| t.vertex_set().len() == 3);
    let mut uses: BTreeMap<BTreeSet<Triple>, usize> = BTreeMap::new();
    for t in patch {
        for s in t.sides() {
            *uses.entry(s).or_default() += 1;
        }
    }
    let s_word = PLWord::new(&[Generator::S]);
    let u_word = PLWord::new(&[Generator::S, Generator::T]);
    let mut interior: BTreeSet<BTreeSet<Triple>> = BTreeSet::new();
    for t in patch {
        let mut w = t.word.clone();
        let mut all_present = true;
        for _ in 0..3 {
            let nb = w.then(&s_word);
            let set: BTreeSet<Triple> = BASE_TRIANGLE.iter().map(|&v| apply_pl(&nb, v)).collect();
            all_present &= sets.contains(&set);
            w = w.then(&u_word);
        }
        if all_present {
            interior.extend(t.sides());
        }
    }
    let mut bad: BTreeSet<BTreeSet<Triple>> =
        interior.iter().filter(|s| uses.get(*s).copied().unwrap_or(0) != 2).cloned().collect();
    bad.extend(uses.iter().filter(|(_, &c)| c > 2).map(|(s, _)| s.clone()));
    PatchCheck {
        triangles: patch.len(),
        distinct,
        interior_sides: interior.len(),
        bad_sides: bad
            .into_iter()
            .map(|s| {
                let v: Vec<Triple> = s.into_iter().collect();
                [v[0], v[1]]
            })
            .collect(),
    }
}

/// Planar coordinates of a point of the plane `x + y + z = 1`.
pub fn project(p: Triple) -> [f64; 2] {
    let (x, y) = (p[0] as f64, p[1] as f64);
    [x + 0.5 * y, 0.75f64.sqrt() * y]
}

/// Unit vector from the base triangle's centre toward the projected vertex.
pub fn ray_direction(p: Triple) -> [f64; 2] {
    let c = [0.5, 0.75f64.sqrt() / 3.0];
    let q = project(p);
    let (dx, dy) = (q[0] - c[0], q[1] - c[1]);
    let n = (dx * dx + dy * dy).sqrt();
    if n == 0.0 {
        [0.0, 0.0]
    } else {
        [dx / n, dy / n]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriangleJson {
    pub word: String,
    pub vertices: [Triple; 3],
    pub projected: [[f64; 2]; 3],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RayJson {
    pub vertex: Triple,
    pub direction: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HemisphereJson {
    pub triangles: Vec<TriangleJson>,
    #[serde(default)]
    pub rays: Vec<RayJson>,
}

impl HemisphereJson {
    pub fn from_patch(patch: &[PatchTriangle], rays: bool) -> Self {
        let triangles = patch
            .iter()
            .map(|t| TriangleJson {
                word: t.word.to_string(),
                vertices: t.vertices,
                projected: t.vertices.map(project),
            })
            .collect();
        let rays = if rays {
            let verts: BTreeSet<Triple> = patch.iter().flat_map(|t| t.vertices).collect();
            verts.into_iter().map(|v| RayJson { vertex: v, direction: ray_direction(v) }).collect()
        } else {
            Vec::new()
        };
        HemisphereJson { triangles, rays }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RenderFormat {
    Svg,
    Json,
}

impl FromStr for RenderFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "svg" => Ok(RenderFormat::Svg),
            "json" => Ok(RenderFormat::Json),
            _ => Err(Error::Parse(format!("unknown format {s:?}; expected svg or json"))),
        }
    }
}

/// Render the patch as a standalone SVG or JSON document.
pub fn render_hemisphere(patch: &[PatchTriangle], format: RenderFormat, rays: bool) -> String {
    let doc = HemisphereJson::from_patch(patch, rays);
    match format {
        RenderFormat::Json => serde_json::to_string_pretty(&doc).expect("serializable") + "\n",
        RenderFormat::Svg => render_svg(&doc),
    }
}

fn render_svg(doc: &HemisphereJson) -> String {
    let pts: Vec<[f64; 2]> = doc.triangles.iter().flat_map(|t| t.projected).collect();
    let (mut lo, mut hi) = ([-1.0f64, -1.0f64], [2.0f64, 2.0f64]);
    for p in &pts {
        for i in 0..2 {
            lo[i] = lo[i].min(p[i]);
            hi[i] = hi[i].max(p[i]);
        }
    }
    let scale = 600.0 / (hi[0] - lo[0]).max(hi[1] - lo[1]);
    let map = |p: [f64; 2]| ((p[0] - lo[0]) * scale + 20.0, (hi[1] - p[1]) * scale + 20.0);
    let (w, h) = ((hi[0] - lo[0]) * scale + 40.0, (hi[1] - lo[1]) * scale + 40.0);
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.0}\" height=\"{h:.0}\" viewBox=\"0 0 {w:.2} {h:.2}\">\n"
    );
    for t in &doc.triangles {
        let points: Vec<String> = t
            .projected
            .iter()
            .map(|&p| {
                let (x, y) = map(p);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        s += &format!(
            "  <polygon points=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"0.5\" data-word=\"{}\"/>\n",
            points.join(" "),
            t.word
        );
    }
    for r in &doc.rays {
        let (x, y) = map(project(r.vertex));
        let (x2, y2) = (x + 12.0 * r.direction[0], y - 12.0 * r.direction[1]);
        s += &format!("  <line x1=\"{x:.3}\" y1=\"{y:.3}\" x2=\"{x2:.3}\" y2=\"{y2:.3}\" stroke=\"red\" stroke-width=\"0.5\"/>\n");
    }
    s += "</svg>\n";
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_values() {
        assert_eq!(apply_s([1, 1, -1]), [-1, 1, 1]);
        assert_eq!(edge_flip([1, 1, -1]), [-1, 1, 1]);
        assert_eq!(apply_t([0, 0, 0]), [0, 0, 0]);
        assert_eq!(apply_s(apply_t([4, -2, 7])), rotate([4, -2, 7]));
        // the bare edge flip is not an involution
        assert_eq!(edge_flip(edge_flip([0, 0, 1])), [-2, 2, 1]);
    }

    #[test]
    fn normal_form() {
        let w: PLWord = "SS".parse().unwrap();
        assert!(w.is_identity());
        let w: PLWord = "STSTST".parse().unwrap();
        assert!(w.is_identity());
        let w: PLWord = "TT".parse().unwrap();
        assert_eq!(w.to_string(), "TT");
        let w: PLWord = "SSTSSS".parse().unwrap();
        assert_eq!(w.to_string(), "TS");
        assert!("SX".parse::<PLWord>().is_err());
    }

    #[test]
    fn words_act_consistently_with_their_normal_form() {
        let raw = [Generator::T, Generator::S, Generator::T, Generator::T, Generator::S, Generator::S, Generator::T];
        let p = [3, -5, 2];
        let direct = raw.iter().rev().fold(p, |q, &g| apply_generator(g, q));
        assert_eq!(apply_pl(&PLWord::new(&raw), p), direct);
    }

    #[test]
    fn patch_sizes() {
        let p0 = orbit_patch(0);
        assert_eq!(p0.len(), 1);
        assert_eq!(p0[0].vertices, BASE_TRIANGLE);
        let p6 = orbit_patch(6);
        let c = check_patch(&p6);
        assert!(c.ok(), "{c:?}");
        assert!(c.interior_sides > 0);
        for t in &p6 {
            for v in t.vertices {
                assert_eq!(v.iter().sum::<i64>(), 1);
            }
        }
    }

    #[test]
    fn render_documents() {
        let patch = orbit_patch(4);
        let svg = render_hemisphere(&patch, RenderFormat::Svg, true);
        assert_eq!(svg.matches("<polygon").count(), patch.len());
        let empty = render_hemisphere(&[], RenderFormat::Svg, false);
        assert!(empty.starts_with("<svg") && empty.trim_end().ends_with("</svg>"));
        let json = render_hemisphere(&patch, RenderFormat::Json, true);
        let back: HemisphereJson = serde_json::from_str(&json).unwrap();
        assert_eq!(back, HemisphereJson::from_patch(&patch, true));
    }
}
