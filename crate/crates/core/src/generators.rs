//! Seeded generators for the spatial random graph models.
//!
//! All radii are absolute (geodesic on the unit-circumference circle, chord
//! on `S^t`). Use [`connectivity_scale`] to turn scaled constants into radii.
//!
//! Vertex `i` draws its position from stream `i` of the instance seed, so an
//! instance is a pure function of `(model, params, n, seed)`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::geometry::{self, circle_distance_raw, chord_distance_raw, CircPosition, SpherePosition};
use crate::graph::{Graph, Partition};
use crate::rng::RandomStream;

/// Slack added to candidate windows; the exact distance test decides.
const WINDOW_SLACK: f64 = 1e-12;

/// `(ln n / n)^{1/t}`, the radius unit of the connectivity regime.
pub fn connectivity_scale(n: usize, t: usize) -> f64 {
    if n < 2 {
        return 0.0;
    }
    let nf = n as f64;
    (nf.ln() / nf).powf(1.0 / t as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    Vrg,
    Rag,
    Gbm,
    Gbmt,
    VrgUnion,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Vrg => "vrg",
            Model::Rag => "rag",
            Model::Gbm => "gbm",
            Model::Gbmt => "gbmt",
            Model::VrgUnion => "vrg_union",
        }
    }

    pub fn on_circle(self) -> bool {
        matches!(self, Model::Vrg | Model::Gbm | Model::VrgUnion)
    }

    pub fn has_clusters(self) -> bool {
        matches!(self, Model::Gbm | Model::Gbmt)
    }
}

/// Model together with its absolute-radius parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", content = "params", rename_all = "snake_case")]
pub enum ModelSpec {
    Vrg { r1: f64, r2: f64 },
    Rag { t: usize, r1: f64, r2: f64 },
    Gbm { rs: f64, rd: f64 },
    Gbmt { t: usize, rs: f64, rd: f64 },
    /// Edge iff the geodesic distance is in `[0, inner] ∪ [r1, r2]`.
    VrgUnion { inner: f64, r1: f64, r2: f64 },
}

impl ModelSpec {
    pub fn model(&self) -> Model {
        match self {
            ModelSpec::Vrg { .. } => Model::Vrg,
            ModelSpec::Rag { .. } => Model::Rag,
            ModelSpec::Gbm { .. } => Model::Gbm,
            ModelSpec::Gbmt { .. } => Model::Gbmt,
            ModelSpec::VrgUnion { .. } => Model::VrgUnion,
        }
    }

    /// Surface dimension; 1 for the circle models.
    pub fn dim_t(&self) -> usize {
        match *self {
            ModelSpec::Rag { t, .. } | ModelSpec::Gbmt { t, .. } => t,
            _ => 1,
        }
    }

    pub fn rule(&self) -> EdgeRule {
        match *self {
            ModelSpec::Vrg { r1, r2 } | ModelSpec::Rag { r1, r2, .. } => EdgeRule::Band { r1, r2 },
            ModelSpec::Gbm { rs, rd } | ModelSpec::Gbmt { rs, rd, .. } => EdgeRule::Block { rs, rd },
            ModelSpec::VrgUnion { inner, r1, r2 } => EdgeRule::Union { inner, r1, r2 },
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let ordered = |lo: f64, hi: f64, max: f64| lo >= 0.0 && lo <= hi && hi <= max;
        match *self {
            ModelSpec::Vrg { r1, r2 } => {
                if !ordered(r1, r2, 0.5) {
                    return domain(format!("VRG needs 0 <= r1 <= r2 <= 0.5, got [{r1}, {r2}]"));
                }
            }
            ModelSpec::Rag { t, r1, r2 } => {
                if t < 1 {
                    return Err(Error::Dimension("RAG needs t >= 1".into()));
                }
                if !ordered(r1, r2, 2.0) {
                    return domain(format!("RAG needs 0 <= r1 <= r2 <= 2, got [{r1}, {r2}]"));
                }
            }
            ModelSpec::Gbm { rs, rd } | ModelSpec::Gbmt { rs, rd, .. } => {
                let max = if let ModelSpec::Gbmt { t, .. } = *self {
                    if t < 1 {
                        return Err(Error::Dimension("GBM_t needs t >= 1".into()));
                    }
                    2.0
                } else {
                    0.5
                };
                if !(rd >= 0.0 && rd < rs && rs <= max) {
                    return domain(format!("GBM needs 0 <= rd < rs <= {max}, got rs={rs} rd={rd}"));
                }
                if !n.is_multiple_of(2) {
                    return domain(format!("GBM needs an even vertex count, got {n}"));
                }
            }
            ModelSpec::VrgUnion { inner, r1, r2 } => {
                if !(inner > 0.0 && inner < r1 && r1 < r2 && r2 <= 0.5) {
                    return domain(format!(
                        "patched VRG needs 0 < c < b < a and a log n/n <= 0.5, got radii {inner}, {r1}, {r2}"
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Membership rule applied to a pair's distance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EdgeRule {
    Band { r1: f64, r2: f64 },
    Union { inner: f64, r1: f64, r2: f64 },
    Block { rs: f64, rd: f64 },
}

impl EdgeRule {
    #[inline]
    pub fn admits(&self, d: f64, same_cluster: bool) -> bool {
        match *self {
            EdgeRule::Band { r1, r2 } => r1 <= d && d <= r2,
            EdgeRule::Union { inner, r1, r2 } => d <= inner || (r1 <= d && d <= r2),
            EdgeRule::Block { rs, rd } => d <= if same_cluster { rs } else { rd },
        }
    }

    /// Distance bands outside of which no pair can be an edge.
    fn windows(&self) -> Vec<(f64, f64)> {
        match *self {
            EdgeRule::Band { r1, r2 } => vec![(r1, r2)],
            EdgeRule::Union { inner, r1, r2 } => vec![(0.0, inner), (r1, r2)],
            EdgeRule::Block { rs, .. } => vec![(0.0, rs)],
        }
    }

    fn reach(&self) -> f64 {
        match *self {
            EdgeRule::Band { r2, .. } | EdgeRule::Union { r2, .. } => r2,
            EdgeRule::Block { rs, .. } => rs,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Positions {
    Circle(Vec<CircPosition>),
    Sphere(Vec<SpherePosition>),
}

impl Positions {
    pub fn len(&self) -> usize {
        match self {
            Positions::Circle(p) => p.len(),
            Positions::Sphere(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn as_circle(&self) -> Option<&[CircPosition]> {
        match self {
            Positions::Circle(p) => Some(p),
            Positions::Sphere(_) => None,
        }
    }

    pub fn as_sphere(&self) -> Option<&[SpherePosition]> {
        match self {
            Positions::Sphere(p) => Some(p),
            Positions::Circle(_) => None,
        }
    }

    /// Distance under the metric native to the position type.
    pub fn distance(&self, u: usize, v: usize) -> f64 {
        match self {
            Positions::Circle(p) => circle_distance_raw(p[u].value(), p[v].value()),
            Positions::Sphere(p) => chord_distance_raw(p[u].coords(), p[v].coords()),
        }
    }
}

/// A generated graph together with its hidden geometry.
#[derive(Clone, Debug, PartialEq)]
pub struct GeometricInstance {
    pub spec: ModelSpec,
    pub positions: Positions,
    pub graph: Graph,
    pub truth: Option<Partition>,
    pub seed: u64,
}

impl GeometricInstance {
    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn model(&self) -> Model {
        self.spec.model()
    }

    pub fn dim_t(&self) -> usize {
        self.spec.dim_t()
    }
}

fn sample_positions(spec: &ModelSpec, n: usize, seed: u64) -> Result<Positions> {
    let streams = RandomStream::streams(seed);
    if spec.model().on_circle() {
        Ok(Positions::Circle(
            (0..n)
                .map(|i| geometry::sample_circle(&mut streams.stream(i as u64)))
                .collect(),
        ))
    } else {
        let t = spec.dim_t();
        (0..n)
            .map(|i| geometry::sample_sphere(t, &mut streams.stream(i as u64)))
            .collect::<Result<Vec<_>>>()
            .map(Positions::Sphere)
    }
}

/// Samples positions for `spec` and builds the instance.
pub fn generate(spec: ModelSpec, n: usize, seed: u64) -> Result<GeometricInstance> {
    if n < 1 {
        return domain("vertex count must be at least 1");
    }
    spec.validate(n)?;
    let positions = sample_positions(&spec, n, seed)?;
    build(spec, positions, seed)
}

/// Builds an instance on caller-supplied positions.
pub fn build(spec: ModelSpec, positions: Positions, seed: u64) -> Result<GeometricInstance> {
    let n = positions.len();
    spec.validate(n)?;
    let truth = spec.model().has_clusters().then(|| Partition::halves(n));
    let labels = truth.as_ref().map(Partition::labels);
    let rule = spec.rule();
    let graph = match (&positions, spec.model().on_circle()) {
        (Positions::Circle(p), true) => circle_sweep(p, &rule, labels),
        (Positions::Sphere(p), false) => {
            let t = spec.dim_t();
            if let Some(bad) = p.iter().find(|x| x.dim_t() != t) {
                return Err(Error::Dimension(format!(
                    "position on S^{} for a model on S^{t}",
                    bad.dim_t()
                )));
            }
            sphere_grid(p, &rule, labels)
        }
        _ => {
            return Err(Error::Model(format!(
                "{} positions do not match model {}",
                if spec.model().on_circle() { "sphere" } else { "circle" },
                spec.model().name()
            )))
        }
    };
    Ok(GeometricInstance {
        spec,
        positions,
        graph,
        truth,
        seed,
    })
}

pub fn gen_vrg(n: usize, r1: f64, r2: f64, seed: u64) -> Result<GeometricInstance> {
    generate(ModelSpec::Vrg { r1, r2 }, n, seed)
}

pub fn gen_rag(n: usize, t: usize, r1: f64, r2: f64, seed: u64) -> Result<GeometricInstance> {
    generate(ModelSpec::Rag { t, r1, r2 }, n, seed)
}

/// Vertices `0..n/2` form cluster 0, the rest cluster 1.
pub fn gen_gbm(n: usize, rs: f64, rd: f64, seed: u64) -> Result<GeometricInstance> {
    generate(ModelSpec::Gbm { rs, rd }, n, seed)
}

pub fn gen_gbm_t(n: usize, t: usize, rs: f64, rd: f64, seed: u64) -> Result<GeometricInstance> {
    generate(ModelSpec::Gbmt { t, rs, rd }, n, seed)
}

/// Patched VRG with scaled constants `0 < c < b < a` (units of `log n / n`).
pub fn vrg_union_spec(n: usize, c: f64, b: f64, a: f64) -> Result<ModelSpec> {
    if !(0.0 < c && c < b && b < a) {
        return domain(format!("patched VRG needs 0 < c < b < a, got c={c} b={b} a={a}"));
    }
    let s = connectivity_scale(n, 1);
    if a * s > 0.5 {
        return domain(format!("a log n / n = {} exceeds 0.5", a * s));
    }
    Ok(ModelSpec::VrgUnion {
        inner: c * s,
        r1: b * s,
        r2: a * s,
    })
}

pub fn gen_vrg_union(n: usize, c: f64, b: f64, a: f64, seed: u64) -> Result<GeometricInstance> {
    generate(vrg_union_spec(n, c, b, a)?, n, seed)
}

/// O(n²) reference construction applying `rule` to every pair.
pub fn naive_oracle(positions: &Positions, rule: &EdgeRule, truth: Option<&Partition>) -> Graph {
    let n = positions.len();
    let mut adj = vec![Vec::new(); n];
    for u in 0..n {
        for v in u + 1..n {
            let same = truth.is_none_or(|p| p.label(u) == p.label(v));
            if rule.admits(positions.distance(u, v), same) {
                adj[u].push(v as u32);
                adj[v].push(u as u32);
            }
        }
    }
    Graph::from_adjacency(adj)
}

/// Circle construction: sort once, then for every vertex locate each
/// clockwise distance window by binary search on the unrolled order.
fn circle_sweep(points: &[CircPosition], rule: &EdgeRule, labels: Option<&[u8]>) -> Graph {
    let n = points.len();
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.sort_by(|&a, &b| points[a as usize].value().total_cmp(&points[b as usize].value()));
    // second lap shifted by one full turn
    let unrolled: Vec<f64> = order
        .iter()
        .map(|&i| points[i as usize].value())
        .chain(order.iter().map(|&i| points[i as usize].value() + 1.0))
        .collect();

    let windows = rule.windows();
    let mut adj = vec![Vec::new(); n];
    for k in 0..n {
        let u = order[k] as usize;
        let x = unrolled[k];
        let lap = &unrolled[k + 1..k + n];
        for &(lo, hi) in &windows {
            let start = lap.partition_point(|&y| y - x < lo - WINDOW_SLACK);
            let end = lap.partition_point(|&y| y - x <= hi + WINDOW_SLACK);
            for j in start..end {
                let v = order[(k + 1 + j) % n] as usize;
                let same = labels.is_none_or(|l| l[u] == l[v]);
                let d = circle_distance_raw(points[u].value(), points[v].value());
                if rule.admits(d, same) {
                    adj[u].push(v as u32);
                    adj[v].push(u as u32);
                }
            }
        }
    }
    Graph::from_adjacency(adj)
}

/// Sphere construction: bucket points into cubes of side `reach` in the
/// ambient space and compare each point with the 3^{t+1} surrounding cubes.
fn sphere_grid(points: &[SpherePosition], rule: &EdgeRule, labels: Option<&[u8]>) -> Graph {
    let n = points.len();
    let mut adj = vec![Vec::new(); n];
    if n == 0 {
        return Graph::from_adjacency(adj);
    }
    let dim = points[0].coords().len();
    let side = rule.reach().max(1e-9);
    let cell_of = |p: &SpherePosition| -> Vec<i64> {
        p.coords().iter().map(|c| (c / side).floor() as i64).collect()
    };

    let mut cells: HashMap<Vec<i64>, Vec<u32>> = HashMap::new();
    let keys: Vec<Vec<i64>> = points.iter().map(cell_of).collect();
    for (i, key) in keys.iter().enumerate() {
        cells.entry(key.clone()).or_default().push(i as u32);
    }

    let offsets = 3usize.pow(dim as u32);
    let mut probe = vec![0i64; dim];
    for u in 0..n {
        for code in 0..offsets {
            let mut c = code;
            for (slot, base) in probe.iter_mut().zip(&keys[u]) {
                *slot = base + (c % 3) as i64 - 1;
                c /= 3;
            }
            let Some(bucket) = cells.get(probe.as_slice()) else {
                continue;
            };
            for &v in bucket {
                let v = v as usize;
                if v <= u {
                    continue;
                }
                let same = labels.is_none_or(|l| l[u] == l[v]);
                let d = chord_distance_raw(points[u].coords(), points[v].coords());
                if rule.admits(d, same) {
                    adj[u].push(v as u32);
                    adj[v].push(u as u32);
                }
            }
        }
    }
    Graph::from_adjacency(adj)
}
