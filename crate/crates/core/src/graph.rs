use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Immutable undirected simple graph in compressed-row layout.
///
/// Neighbor lists are strictly increasing and symmetric; there are no
/// self-loops.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Self {
            offsets: vec![0; n + 1],
            neighbors: Vec::new(),
        }
    }

    /// Builds a graph from undirected edges. Duplicates and both orientations
    /// of the same edge are merged; self-loops are rejected.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Result<Self> {
        let mut degree = vec![0usize; n];
        for &(u, v) in edges {
            if u == v {
                return domain(format!("self-loop at vertex {u}"));
            }
            if u as usize >= n || v as usize >= n {
                return domain(format!("edge ({u}, {v}) out of range for n = {n}"));
            }
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut adj: Vec<Vec<u32>> = degree.iter().map(|&d| Vec::with_capacity(d)).collect();
        for &(u, v) in edges {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        Ok(Self::from_adjacency(adj))
    }

    /// Builds from per-vertex lists that are already symmetric (each edge
    /// listed at both endpoints). Lists are sorted and deduplicated here.
    pub(crate) fn from_adjacency(mut adj: Vec<Vec<u32>>) -> Self {
        let mut offsets = Vec::with_capacity(adj.len() + 1);
        offsets.push(0);
        let total = adj.iter().map(Vec::len).sum();
        let mut neighbors = Vec::with_capacity(total);
        for list in adj.iter_mut() {
            list.sort_unstable();
            list.dedup();
            neighbors.extend_from_slice(list);
            offsets.push(neighbors.len());
        }
        Self { offsets, neighbors }
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn neighbors(&self, u: usize) -> &[u32] {
        &self.neighbors[self.offsets[u]..self.offsets[u + 1]]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&(v as u32)).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .filter(move |&&v| v as usize > u)
                .map(move |&v| (u as u32, v))
        })
    }

    /// Returns the same graph with vertex `v` renamed to `perm[v]`.
    pub fn relabeled(&self, perm: &[u32]) -> Self {
        let mut adj = vec![Vec::new(); self.n()];
        for u in 0..self.n() {
            adj[perm[u] as usize] = self.neighbors(u).iter().map(|&v| perm[v as usize]).collect();
        }
        Self::from_adjacency(adj)
    }

    /// Checks symmetry, strict ordering and absence of self-loops.
    pub fn check_invariants(&self) -> Result<()> {
        for u in 0..self.n() {
            let list = self.neighbors(u);
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return domain(format!("neighbor list of {u} not strictly sorted"));
            }
            for &v in list {
                if v as usize == u {
                    return domain(format!("self-loop at {u}"));
                }
                if !self.has_edge(v as usize, u) {
                    return domain(format!("edge {u}->{v} not mirrored"));
                }
            }
        }
        Ok(())
    }
}

/// Two-way vertex labeling.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition {
    labels: Vec<u8>,
}

impl Partition {
    pub fn new(labels: Vec<u8>) -> Result<Self> {
        if let Some(bad) = labels.iter().find(|&&l| l > 1) {
            return domain(format!("partition label {bad} not in {{0, 1}}"));
        }
        Ok(Self { labels })
    }

    /// First half of the vertices in cluster 0, the rest in cluster 1.
    pub fn halves(n: usize) -> Self {
        Self {
            labels: (0..n).map(|i| u8::from(i >= n / 2)).collect(),
        }
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, v: usize) -> u8 {
        self.labels[v]
    }

    pub fn flipped(&self) -> Self {
        Self {
            labels: self.labels.iter().map(|l| 1 - l).collect(),
        }
    }
}
