use std::collections::BTreeMap;
use std::path::Path;

use clusterx_core::completion::strata_poset;
use clusterx_core::lamination::{
    canonical_function, canonical_in_chart_with, enumerate_laminations, tree_coords, Lamination, LaminationJson,
    PlaneTree, RedRule,
};
use clusterx_core::laurent::PosRational;
use clusterx_core::polygon::{
    associahedron_faces, chart_coords, verify_flip_mutation, Chord, Configuration, ConfigurationJson, Triangulation,
    TriangulationJson,
};
use clusterx_core::seed::{compose_pullbacks, mutate_x, ExchangeGraph, Seed, SeedJson};
use clusterx_core::torus::{orbit_patch, render_hemisphere, HemisphereJson, RenderFormat};
use clusterx_core::tropical::{parse_rational, pl_mutate_coords, positive_part_cover, valuation_of, TropicalPoint};
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::args::*;
use crate::output::{read_json, CliError, CliResult};
use crate::verify;

pub enum Body {
    Json(Value),
    Text(String),
}

/// What a command produced, plus a failure to report after writing it.
pub struct Outcome {
    pub body: Body,
    pub failure: Option<CliError>,
}

impl Outcome {
    fn ok(v: Value) -> Self {
        Outcome { body: Body::Json(v), failure: None }
    }
}

pub fn name(c: &Command) -> &'static str {
    match c {
        Command::Mutate(_) => "mutate",
        Command::Graph(_) => "graph",
        Command::TropMutate(_) => "trop-mutate",
        Command::Cones(_) => "cones",
        Command::Valuation(_) => "valuation",
        Command::Flip(_) => "flip",
        Command::Chart(_) => "chart",
        Command::Associahedron(_) => "associahedron",
        Command::Canon(_) => "canon",
        Command::Laminations(_) => "laminations",
        Command::Completion(_) => "completion",
        Command::TorusBoundary(_) => "torus-boundary",
        Command::Verify(_) => "verify",
    }
}

pub fn run(c: &Command, rng_seed: u64) -> CliResult<Outcome> {
    match c {
        Command::Mutate(a) => mutate(a),
        Command::Graph(a) => graph(a),
        Command::TropMutate(a) => trop_mutate(a),
        Command::Cones(a) => cones(a),
        Command::Valuation(a) => valuation(a),
        Command::Flip(a) => flip(a, rng_seed),
        Command::Chart(a) => chart(a),
        Command::Associahedron(a) => associahedron(a),
        Command::Canon(a) => canon(a),
        Command::Laminations(a) => laminations(a),
        Command::Completion(a) => completion(a),
        Command::TorusBoundary(a) => torus(a),
        Command::Verify(a) => verify_cmd(a, rng_seed),
    }
}

fn load_seed(path: &Path) -> CliResult<Seed> {
    let j: SeedJson = read_json(path)?;
    Seed::from_json(&j).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_triangulation(path: &Path) -> CliResult<Triangulation> {
    let j: TriangulationJson = read_json(path)?;
    Triangulation::from_json(&j).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_lamination(path: &Path) -> CliResult<Lamination> {
    let j: LaminationJson = read_json(path)?;
    Lamination::from_json(&j).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// A point file, or inline comma-separated coordinates in chart 0.
fn load_point(s: &str, n: usize) -> CliResult<TropicalPoint> {
    let path = Path::new(s);
    if path.is_file() || s.ends_with(".json") {
        let p: TropicalPoint = read_json(path)?;
        if p.coords.len() != n {
            return Err(CliError::Input(format!("{s} has {} coordinates, expected {n}", p.coords.len())));
        }
        return Ok(p);
    }
    Ok(TropicalPoint::new(0, parse_point(s, n)?))
}

fn root_point(s: &str, n: usize) -> CliResult<Vec<BigRational>> {
    let p = load_point(s, n)?;
    if p.chart != 0 {
        return Err(CliError::Input(format!("point is in chart {}, expected the seed's own chart 0", p.chart)));
    }
    Ok(p.coords)
}

fn parse_point(s: &str, n: usize) -> CliResult<Vec<BigRational>> {
    let coords = s
        .split(',')
        .map(|p| parse_rational(p.trim()).map_err(|e| CliError::Input(format!("--point: {e}"))))
        .collect::<CliResult<Vec<_>>>()?;
    if coords.len() != n {
        return Err(CliError::Input(format!("--point has {} coordinates, expected {n}", coords.len())));
    }
    Ok(coords)
}

fn check_directions(ks: &[usize], n: usize) -> CliResult<()> {
    match ks.iter().find(|&&k| k >= n) {
        Some(k) => Err(CliError::Input(format!("direction {k} out of range for rank {n}"))),
        None => Ok(()),
    }
}

fn strings(v: &[BigRational]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn mutate(a: &MutateArgs) -> CliResult<Outcome> {
    let mut seed = load_seed(&a.input.seed)?;
    check_directions(&a.k, seed.rank())?;
    let vars = seed.labels().to_vec();
    let mut images: Vec<PosRational> = (0..seed.rank()).map(|i| PosRational::var(&vars, i)).collect();
    for &k in &a.k {
        images = compose_pullbacks(&mutate_x(&seed, k), &vars, &images)?;
        seed = seed.mutate(k);
    }
    let pullback: BTreeMap<&String, String> = vars.iter().zip(images.iter().map(|f| f.to_string())).collect();
    Ok(Outcome::ok(json!({ "directions": a.k, "seed": seed.to_json(), "pullback": pullback })))
}

fn graph(a: &GraphArgs) -> CliResult<Outcome> {
    let seed = load_seed(&a.input.seed)?;
    let g = ExchangeGraph::explore(&seed, a.max_nodes, a.charts)?;
    let failure = g
        .truncated
        .then(|| CliError::Truncated(format!("exchange graph exceeds {} nodes", a.max_nodes)));
    let body = json!({
        "graph": g.to_json(a.charts),
        "num_nodes": g.num_nodes(),
        "num_edges": g.num_undirected_edges(),
    });
    Ok(Outcome { body: Body::Json(body), failure })
}

fn trop_mutate(a: &TropMutateArgs) -> CliResult<Outcome> {
    let mut seed = load_seed(&a.input.seed)?;
    check_directions(&a.k, seed.rank())?;
    let mut x = root_point(&a.point, seed.rank())?;
    let start = strings(&x);
    for &k in &a.k {
        x = pl_mutate_coords(seed.epsilon(), k, &x);
        seed = seed.mutate(k);
    }
    Ok(Outcome::ok(json!({ "start": start, "directions": a.k, "coords": strings(&x), "seed": seed.to_json() })))
}

fn explore_closed(seed: &Seed, max_nodes: usize) -> CliResult<ExchangeGraph> {
    let g = ExchangeGraph::explore(seed, max_nodes, false)?;
    if g.truncated {
        return Err(CliError::Truncated(format!("exchange graph exceeds {max_nodes} nodes")));
    }
    Ok(g)
}

fn cones(a: &ConesArgs) -> CliResult<Outcome> {
    let seed = load_seed(&a.input.seed)?;
    let x = load_point(&a.point, seed.rank())?;
    let g = explore_closed(&seed, a.max_nodes)?;
    let cover = positive_part_cover(&g, &x)?;
    let list: Vec<Value> = cover.iter().map(|c| json!({ "chart": c.chart, "zero_set": c.zero_set })).collect();
    Ok(Outcome::ok(json!({ "point": x, "cones": list })))
}

fn valuation(a: &ValuationArgs) -> CliResult<Outcome> {
    let f = match (&a.function, &a.lamination, &a.triangulation) {
        (Some(s), None, _) => {
            let path = Path::new(s);
            let text = if path.is_file() {
                std::fs::read_to_string(path)
                    .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?
            } else {
                s.clone()
            };
            PosRational::parse(text.trim(), a.vars.as_deref())?
        }
        (None, Some(l), Some(t)) => {
            let l = load_lamination(l)?;
            let t = load_triangulation(t)?;
            let p = canonical_in_chart_with(&l, &t, RedRule::Smallest)?;
            PosRational::from_poly(p)?
        }
        _ => return Err(CliError::Input("give --function, or --lamination with --triangulation".into())),
    };
    let x = load_point(&a.point, f.vars().len())?.coords;
    let v = valuation_of(&f, &x)?;
    Ok(Outcome::ok(json!({ "function": f.to_string(), "vars": f.vars(), "point": strings(&x), "valuation": v.to_string() })))
}

fn flip(a: &FlipArgs, rng_seed: u64) -> CliResult<Outcome> {
    let t = load_triangulation(&a.triangulation)?;
    let &[i, j] = a.diagonal.as_slice() else {
        return Err(CliError::Input(format!("--diagonal takes two vertices, got {}", a.diagonal.len())));
    };
    let e = Chord::new(i, j);
    let (t2, added) = t.flip(e)?;
    let mut body = json!({
        "triangulation": t2.to_json(),
        "removed": [e.0, e.1],
        "added": [added.0, added.1],
    });
    let mut failure = None;
    if a.verify {
        let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
        let check = verify_flip_mutation(&t, e, a.samples, &mut rng)?;
        if !check.ok {
            failure = Some(CliError::Property(check.failure.clone().unwrap_or_default()));
        }
        body["check"] = json!({ "ok": check.ok, "failure": check.failure, "samples": a.samples });
    }
    Ok(Outcome { body: Body::Json(body), failure })
}

fn chart(a: &ChartArgs) -> CliResult<Outcome> {
    let t = load_triangulation(&a.triangulation)?;
    let cj: ConfigurationJson = read_json(&a.config)?;
    let c = Configuration::from_json(&cj).map_err(|e| CliError::Input(format!("{}: {e}", a.config.display())))?;
    if c.size() != t.size() {
        return Err(CliError::Input(format!(
            "configuration has {} points, triangulation is of the {}-gon",
            c.size(),
            t.size()
        )));
    }
    let x = chart_coords(&t, &c)?;
    let coords: BTreeMap<String, String> =
        t.diagonals().iter().map(|d| d.label()).zip(x.iter().map(|v| v.to_string())).collect();
    Ok(Outcome::ok(json!({ "triangulation": t.to_json(), "coords": coords })))
}

fn associahedron(a: &AssociahedronArgs) -> CliResult<Outcome> {
    if a.size < 3 {
        return Err(CliError::Input(format!("polygon size {} is below 3", a.size)));
    }
    let ks: Vec<usize> = match a.codim {
        Some(k) => vec![k],
        None => (0..=a.size - 3).collect(),
    };
    let mut faces = BTreeMap::new();
    let mut counts = BTreeMap::new();
    for k in ks {
        let f = associahedron_faces(a.size, k)?;
        counts.insert(k.to_string(), f.len());
        let list: Vec<Vec<[usize; 2]>> = f.iter().map(|s| s.iter().map(|c| [c.0, c.1]).collect()).collect();
        faces.insert(k.to_string(), list);
    }
    Ok(Outcome::ok(json!({ "size": a.size, "counts": counts, "faces": faces })))
}

fn canon(a: &CanonArgs) -> CliResult<Outcome> {
    let l = load_lamination(&a.lamination)?;
    let t = load_triangulation(&a.triangulation)?;
    let rule = match a.red_rule {
        RedRuleArg::Smallest => RedRule::Smallest,
        RedRuleArg::Largest => RedRule::Largest,
    };
    let f = canonical_in_chart_with(&l, &t, rule)?;
    let positive = f.is_positive();
    let failure = (a.check_positivity && !positive)
        .then(|| CliError::Property(format!("canonical function has a negative coefficient: {f}")));
    let body = json!({
        "lamination": l.to_json(),
        "triangulation": t.to_json(),
        "monomial": canonical_function(&l).to_string(),
        "function": f.to_string(),
        "vars": f.vars(),
        "terms": f.num_terms(),
        "positive": positive,
    });
    Ok(Outcome { body: Body::Json(body), failure })
}

fn laminations(a: &LaminationsArgs) -> CliResult<Outcome> {
    let ls = enumerate_laminations(a.size, a.bound)?;
    let tree = PlaneTree::caterpillar(a.size);
    let list = ls
        .iter()
        .map(|l| Ok(json!({ "coords": tree_coords(l, &tree)?, "lamination": l.to_json() })))
        .collect::<CliResult<Vec<Value>>>()?;
    Ok(Outcome::ok(json!({
        "size": a.size,
        "bound": a.bound,
        "tree_splits": tree.splits(),
        "count": list.len(),
        "laminations": list,
    })))
}

fn completion(a: &CompletionArgs) -> CliResult<Outcome> {
    let seed = load_seed(&a.input.seed)?;
    let g = explore_closed(&seed, a.max_nodes)?;
    let p = strata_poset(&g)?;
    Ok(Outcome::ok(serde_json::to_value(p.to_json()).expect("serializable")))
}

fn torus(a: &TorusArgs) -> CliResult<Outcome> {
    let patch = orbit_patch(a.max_len);
    Ok(match a.format {
        FormatArg::Svg => Outcome { body: Body::Text(render_hemisphere(&patch, RenderFormat::Svg, a.rays)), failure: None },
        FormatArg::Json => {
            let doc = HemisphereJson::from_patch(&patch, a.rays);
            Outcome::ok(serde_json::to_value(doc).expect("serializable"))
        }
    })
}

fn verify_cmd(a: &VerifyArgs, rng_seed: u64) -> CliResult<Outcome> {
    if a.size_cap < 4 {
        return Err(CliError::Input("--size-cap must be at least 4".into()));
    }
    let seed = a.seed.unwrap_or(rng_seed);
    let report = verify::run(a.suite, a.size_cap, seed);
    let failed = report.iter().filter(|p| !p.passed).count();
    let failure = (failed > 0).then(|| {
        let names: Vec<&str> = report.iter().filter(|p| !p.passed).map(|p| p.name.as_str()).collect();
        CliError::Property(format!("{failed} properties failed: {}", names.join(", ")))
    });
    let body = json!({
        "suite": format!("{:?}", a.suite).to_lowercase(),
        "size_cap": a.size_cap,
        "seed": seed,
        "properties": report,
        "passed": report.len() - failed,
        "failed": failed,
    });
    Ok(Outcome { body: Body::Json(body), failure })
}
