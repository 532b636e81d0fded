//! Instance files (JSON) and plain edge lists.
//!
//! Instance JSON layout:
//!
//! ```text
//! {"model": "gbm", "params": {"rs": .., "rd": ..}, "n": 100, "t": 1, "seed": 7,
//!  "positions": [..], "truth": [0, 1, ..], "edges": [[0, 5], ..]}
//! ```
//!
//! Circle positions are numbers in `[0, 1)`, sphere positions are arrays of
//! `t + 1` coordinates. `truth` is present only for the block models. Edges
//! are `[u, v]` pairs with `u < v` in lexicographic order.
//!
//! Edge list layout: a header line `n m`, then one `u v` line per edge.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{naive_oracle, GeometricInstance, ModelSpec, Positions};
use crate::geometry::{CircPosition, SpherePosition};
use crate::graph::{Graph, Partition};

#[derive(Serialize, Deserialize)]
struct InstanceFile {
    #[serde(flatten)]
    spec: ModelSpec,
    n: usize,
    t: usize,
    seed: u64,
    positions: Positions,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    truth: Option<Partition>,
    edges: Vec<(u32, u32)>,
}

pub fn write_instance<W: Write>(inst: &GeometricInstance, mut w: W) -> Result<()> {
    let file = InstanceFile {
        spec: inst.spec,
        n: inst.n(),
        t: inst.dim_t(),
        seed: inst.seed,
        positions: inst.positions.clone(),
        truth: inst.truth.clone(),
        edges: inst.graph.edges().collect(),
    };
    serde_json::to_writer(&mut w, &file)?;
    w.write_all(b"\n")?;
    Ok(())
}

/// Parses and validates an instance. The edge set is taken from the file;
/// use [`verify_against_oracle`] to check it against the geometry.
pub fn read_instance<R: std::io::Read>(r: R) -> Result<GeometricInstance> {
    let file: InstanceFile = serde_json::from_reader(r)?;
    let n = file.n;
    file.spec.validate(n)?;
    if file.t != file.spec.dim_t() {
        return Err(Error::Parse(format!(
            "header t = {} but model parameters say t = {}",
            file.t,
            file.spec.dim_t()
        )));
    }
    if file.positions.len() != n {
        return Err(Error::Parse(format!(
            "{} positions for n = {n}",
            file.positions.len()
        )));
    }
    let positions = match file.positions {
        Positions::Circle(p) if file.spec.model().on_circle() => Positions::Circle(
            p.into_iter()
                .map(|x| CircPosition::new(x.value()))
                .collect::<Result<_>>()?,
        ),
        Positions::Sphere(p) if !file.spec.model().on_circle() => Positions::Sphere(
            p.into_iter()
                .map(|x| {
                    let x = SpherePosition::new(x.coords().to_vec())?;
                    if x.dim_t() != file.t {
                        return Err(Error::Dimension(format!("position on S^{}", x.dim_t())));
                    }
                    Ok(x)
                })
                .collect::<Result<_>>()?,
        ),
        _ => return Err(Error::Parse("position kind does not match model".into())),
    };
    let truth = match (file.truth, file.spec.model().has_clusters()) {
        (Some(p), true) if p.len() == n => Some(p),
        (Some(_), true) => return Err(Error::Parse("truth length differs from n".into())),
        (Some(_), false) => return Err(Error::Parse("truth given for a model without clusters".into())),
        (None, _) => None,
    };
    let graph = Graph::from_edges(n, &file.edges)?;
    Ok(GeometricInstance {
        spec: file.spec,
        positions,
        graph,
        truth,
        seed: file.seed,
    })
}

/// Rebuilds the edge set from the positions by brute force and compares.
/// Block models need their truth to decide which radius applies.
pub fn verify_against_oracle(inst: &GeometricInstance) -> bool {
    let truth = if inst.model().has_clusters() {
        match &inst.truth {
            Some(t) => Some(t.clone()),
            None => Some(Partition::halves(inst.n())),
        }
    } else {
        None
    };
    naive_oracle(&inst.positions, &inst.spec.rule(), truth.as_ref()) == inst.graph
}

pub fn write_edge_list<W: Write>(g: &Graph, mut w: W) -> Result<()> {
    writeln!(w, "{} {}", g.n(), g.edge_count())?;
    for (u, v) in g.edges() {
        writeln!(w, "{u} {v}")?;
    }
    Ok(())
}

pub fn read_edge_list<R: BufRead>(r: R) -> Result<Graph> {
    let mut lines = r.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty edge list".into()))??;
    let (n, m) = parse_pair(&header)?;
    let mut edges = Vec::with_capacity(m);
    for (i, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let (u, v) = parse_pair(&line).map_err(|e| Error::Parse(format!("line {}: {e}", i + 2)))?;
        if u >= v {
            return Err(Error::Parse(format!("line {}: expected u < v", i + 2)));
        }
        edges.push((u as u32, v as u32));
    }
    if edges.len() != m {
        return Err(Error::Parse(format!("header says {m} edges, found {}", edges.len())));
    }
    Graph::from_edges(n, &edges)
}

fn parse_pair(line: &str) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace().map(str::parse::<usize>);
    match (it.next(), it.next(), it.next()) {
        (Some(Ok(a)), Some(Ok(b)), None) => Ok((a, b)),
        _ => Err(Error::Parse(format!("expected two integers, got {line:?}"))),
    }
}

/// Predicted labels, one per line.
pub fn write_labels<W: Write>(p: &Partition, mut w: W) -> Result<()> {
    for l in p.labels() {
        writeln!(w, "{l}")?;
    }
    Ok(())
}
