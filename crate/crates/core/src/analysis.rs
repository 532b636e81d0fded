//! Structural graph queries and the connectivity/isolation regime predicates.
//!
//! The predicates encode asymptotic statements: a verdict describes the
//! predicted regime of the scaled parameters, not a guarantee about any one
//! finite instance.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::generators::{EdgeRule, GeometricInstance};
use crate::geometry::psi;
use crate::graph::Graph;

/// Margins closer to zero than this are reported as [`Verdict::Boundary`].
pub const BOUNDARY_TOL: f64 = 1e-9;

/// Disjoint-set forest with path halving and union by size.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let grand = self.parent[self.parent[x] as usize];
            self.parent[x] = grand;
            x = grand as usize;
        }
        x
    }

    /// Returns `false` if `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra as u32;
        self.size[ra] += self.size[rb];
        true
    }

    /// Dense component ids, numbered in order of first appearance.
    pub fn labeling(&mut self) -> ComponentLabeling {
        let n = self.parent.len();
        let mut id_of_root = vec![u32::MAX; n];
        let mut labels = Vec::with_capacity(n);
        let mut count = 0u32;
        for v in 0..n {
            let r = self.find(v);
            if id_of_root[r] == u32::MAX {
                id_of_root[r] = count;
                count += 1;
            }
            labels.push(id_of_root[r]);
        }
        ComponentLabeling {
            labels,
            count: count as usize,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentLabeling {
    pub labels: Vec<u32>,
    pub count: usize,
}

impl ComponentLabeling {
    pub fn sizes(&self) -> Vec<usize> {
        let mut s = vec![0; self.count];
        for &l in &self.labels {
            s[l as usize] += 1;
        }
        s
    }
}

pub fn connected_components(g: &Graph) -> ComponentLabeling {
    let mut uf = UnionFind::new(g.n());
    for (u, v) in g.edges() {
        uf.union(u as usize, v as usize);
    }
    uf.labeling()
}

pub fn is_connected(g: &Graph) -> bool {
    connected_components(g).count <= 1
}

pub fn count_isolated(g: &Graph) -> usize {
    (0..g.n()).filter(|&u| g.degree(u) == 0).count()
}

/// `n (1 − 2(a − b) log n / n)^{n−1}`: expected number of isolated vertices of
/// a VRG with radii `b log n / n ≤ d ≤ a log n / n`.
pub fn expected_isolated_vrg(n: usize, a: f64, b: f64) -> Result<f64> {
    let nf = n as f64;
    let p = 2.0 * (a - b) * nf.ln() / nf;
    if !(0.0..=1.0).contains(&p) {
        return domain(format!("annulus probability {p} outside [0, 1]"));
    }
    Ok(nf * (1.0 - p).powf(nf - 1.0))
}

/// Number of vertices with no neighbor on their left, i.e. at
/// counterclockwise (decreasing position, modulo 1) displacement in
/// `(0, r_outer]` where `r_outer` is the model's outer radius.
pub fn count_no_left_neighbor(inst: &GeometricInstance) -> Result<usize> {
    let Some(pos) = inst.positions.as_circle() else {
        return Err(Error::Model(format!(
            "no-left-neighbor count needs circle positions, model is {}",
            inst.model().name()
        )));
    };
    let outer = match inst.spec.rule() {
        EdgeRule::Band { r2, .. } | EdgeRule::Union { r2, .. } => r2,
        EdgeRule::Block { rs, .. } => rs,
    };
    let g = &inst.graph;
    Ok((0..g.n())
        .filter(|&u| {
            let x = pos[u].value();
            !g.neighbors(u).iter().any(|&v| {
                let back = (x - pos[v as usize].value()).rem_euclid(1.0);
                back > 0.0 && back <= outer
            })
        })
        .count())
}

/// Size of the intersection of two sorted slices.
#[inline]
fn sorted_intersection_len(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

pub fn common_neighbor_count(g: &Graph, u: usize, v: usize) -> Result<usize> {
    if u == v {
        return domain(format!("common neighbors of vertex {u} with itself"));
    }
    if u >= g.n() || v >= g.n() {
        return domain(format!("vertex out of range for n = {}", g.n()));
    }
    // u, v can never be in their own lists, so they are excluded for free
    Ok(sorted_intersection_len(g.neighbors(u), g.neighbors(v)))
}

/// Triangle count of every edge, aligned with [`Graph::edges`] order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeTriangleCounts {
    pub edges: Vec<(u32, u32)>,
    pub counts: Vec<u32>,
}

impl EdgeTriangleCounts {
    pub fn get(&self, u: u32, v: u32) -> Option<u32> {
        let key = if u < v { (u, v) } else { (v, u) };
        self.edges.binary_search(&key).ok().map(|i| self.counts[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = ((u32, u32), u32)> + '_ {
        self.edges.iter().copied().zip(self.counts.iter().copied())
    }
}

/// Sorted-list merge per edge; parallel over source vertices.
pub fn edge_triangle_counts(g: &Graph) -> EdgeTriangleCounts {
    let per_vertex: Vec<Vec<((u32, u32), u32)>> = (0..g.n())
        .into_par_iter()
        .map(|u| {
            let nu = g.neighbors(u);
            nu.iter()
                .filter(|&&v| v as usize > u)
                .map(|&v| {
                    let c = sorted_intersection_len(nu, g.neighbors(v as usize)) as u32;
                    ((u as u32, v), c)
                })
                .collect()
        })
        .collect();
    let (edges, counts) = per_vertex.into_iter().flatten().unzip();
    EdgeTriangleCounts { edges, counts }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    InRegime,
    OutOfRegime,
    Boundary,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::InRegime => "InRegime",
            Verdict::OutOfRegime => "OutOfRegime",
            Verdict::Boundary => "Boundary",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegimeVerdict {
    pub verdict: Verdict,
    /// Signed distance to the regime boundary; positive inside.
    pub margin: f64,
}

impl RegimeVerdict {
    pub fn from_margin(margin: f64) -> Self {
        let verdict = if margin.abs() < BOUNDARY_TOL {
            Verdict::Boundary
        } else if margin > 0.0 {
            Verdict::InRegime
        } else {
            Verdict::OutOfRegime
        };
        Self { verdict, margin }
    }
}

/// VRG with radii `[b, a] · log n / n` is connected whp iff `a > 1` and
/// `a − b > 0.5`, and disconnected whp if either inequality is reversed.
pub fn predicted_vrg_connectivity(a: f64, b: f64) -> RegimeVerdict {
    RegimeVerdict::from_margin((a - 1.0).min(a - b - 0.5))
}

/// `RAG_t` with radii `[b, a] · (log n / n)^{1/t}` has isolated vertices whp
/// iff `a^t − b^t < ψ(t)`. `InRegime` means isolated vertices exist.
pub fn predicted_isolated_rag(t: usize, a: f64, b: f64) -> RegimeVerdict {
    let width = a.powi(t as i32) - b.powi(t as i32);
    RegimeVerdict::from_margin(psi(t) - width)
}

/// Sufficient condition for connectivity of `RAG_t`:
/// `a^t − b^t ≥ 8(t+1)ψ(t) / (1 − 1/(2^{1+1/t} − 1))` and `a > 2^{1+1/t} b`.
pub fn rag_connectivity_sufficient(t: usize, a: f64, b: f64) -> bool {
    let tf = t as f64;
    let k = 2f64.powf(1.0 + 1.0 / tf);
    let width = a.powi(t as i32) - b.powi(t as i32);
    let need = 8.0 * (tf + 1.0) * psi(t) / (1.0 - 1.0 / (k - 1.0));
    width >= need && a > k * b
}

/// Any of the six sufficient conditions for connectivity of the patched VRG
/// with radii `[0, c] ∪ [b, a]` (units of `log n / n`).
pub fn vrg_union_connectivity_sufficient(c: f64, b: f64, a: f64) -> Result<bool> {
    if !(0.0 < c && c < b && b < a) {
        return domain(format!("patched VRG needs 0 < c < b < a, got c={c} b={b} a={a}"));
    }
    let gap = a - b;
    let narrow = gap < c;
    let far = b > 1.5 * c;
    let conditions = [
        gap + c > 1.0,
        gap > 0.5 && a > 1.0,
        narrow && far && 2.0 * gap + c / 2.0 > 1.0,
        narrow && !far && b - c > 1.0,
        !narrow && !far && a > 1.0,
        !narrow && far && gap + 1.5 * c > 1.0,
    ];
    Ok(conditions.iter().any(|&c| c))
}
