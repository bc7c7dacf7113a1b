//! Compact immutable graph representation.
//!
//! Adjacency is stored in CSR form (offset array + flat neighbor array) with
//! sorted, duplicate-free neighbor lists. Directed graphs keep separate out-
//! and in-adjacency; undirected graphs store each edge from both endpoints and
//! expose the same lists through both views.

use std::borrow::Cow;

use thiserror::Error;

/// Dense node identifier. Ingestion remaps arbitrary labels onto `0..n`.
pub type NodeId = u32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("empty edge list with zero declared nodes")]
    EmptyGraph,
    #[error("operation requires a directed graph")]
    NotDirected,
    #[error("operation requires an undirected graph")]
    NotUndirected,
    #[error("graph has no edges")]
    NoEdges,
    #[error("node {0} not in graph")]
    NodeNotFound(NodeId),
    #[error("no node has degree >= 2")]
    NoTriples,
    #[error("component kind does not apply to this graph's directedness")]
    KindMismatch,
}

/// Counts of input edges dropped while building a simple graph.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildReport {
    pub self_loops_dropped: u64,
    pub duplicates_dropped: u64,
}

/// CSR adjacency: `targets[offsets[u]..offsets[u+1]]` are `u`'s neighbors.
#[derive(Debug, Clone, Default)]
struct Adjacency {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
}

impl Adjacency {
    fn neighbors(&self, u: NodeId) -> &[NodeId] {
        let u = u as usize;
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }

    /// Build from an edge list: counting sort into CSR, then per-row sort and
    /// in-place dedup. Returns the number of duplicate entries removed.
    fn build(
        node_count: usize,
        edges: impl Iterator<Item = (NodeId, NodeId)> + Clone,
    ) -> (Self, u64) {
        let mut counts = vec![0usize; node_count + 1];
        let mut total = 0usize;
        for (src, _) in edges.clone() {
            counts[src as usize + 1] += 1;
            total += 1;
        }
        for i in 0..node_count {
            counts[i + 1] += counts[i];
        }
        let offsets = counts;
        let mut cursor = offsets.clone();
        let mut targets = vec![0 as NodeId; total];
        for (src, dst) in edges {
            targets[cursor[src as usize]] = dst;
            cursor[src as usize] += 1;
        }

        let mut dedup_offsets = Vec::with_capacity(node_count + 1);
        dedup_offsets.push(0usize);
        let mut write = 0usize;
        for u in 0..node_count {
            let (start, end) = (offsets[u], offsets[u + 1]);
            targets[start..end].sort_unstable();
            let mut prev: Option<NodeId> = None;
            for i in start..end {
                let v = targets[i];
                if prev != Some(v) {
                    targets[write] = v;
                    write += 1;
                    prev = Some(v);
                }
            }
            dedup_offsets.push(write);
        }
        let dup = (total - write) as u64;
        targets.truncate(write);
        (
            Adjacency {
                offsets: dedup_offsets,
                targets,
            },
            dup,
        )
    }
}

/// Immutable simple graph (no self-loops, no multi-edges), directed or not.
///
/// For undirected graphs `edge_count` counts unordered edges and both
/// adjacency views are identical; for directed graphs it counts directed
/// edges.
#[derive(Debug, Clone)]
pub struct Graph {
    directed: bool,
    out: Adjacency,
    /// Empty for undirected graphs; `out` serves both views.
    in_: Adjacency,
    edge_count: u64,
}

impl Graph {
    /// Build a simple graph from raw edges, dropping self-loops and
    /// duplicates. `node_count` must cover every endpoint; use
    /// [`Graph::from_edges`] to infer it.
    pub fn build(
        directed: bool,
        node_count: usize,
        edges: &[(NodeId, NodeId)],
    ) -> Result<(Self, BuildReport), GraphError> {
        if edges.is_empty() && node_count == 0 {
            return Err(GraphError::EmptyGraph);
        }
        let mut report = BuildReport::default();
        let clean: Vec<(NodeId, NodeId)> = edges
            .iter()
            .copied()
            .filter(|&(s, d)| {
                debug_assert!((s as usize) < node_count && (d as usize) < node_count);
                if s == d {
                    report.self_loops_dropped += 1;
                    false
                } else {
                    true
                }
            })
            .collect();

        let (out, in_, dups, edge_count) = if directed {
            let (out, dup_out) = Adjacency::build(node_count, clean.iter().copied());
            let (in_, _) = Adjacency::build(node_count, clean.iter().map(|&(s, d)| (d, s)));
            let m = out.targets.len() as u64;
            (out, in_, dup_out, m)
        } else {
            let sym = clean
                .iter()
                .copied()
                .chain(clean.iter().map(|&(s, d)| (d, s)));
            let (out, dup_stubs) = Adjacency::build(node_count, sym);
            let m = out.targets.len() as u64 / 2;
            // every duplicate input edge contributes two duplicate stubs
            (out, Adjacency::default(), dup_stubs / 2, m)
        };
        report.duplicates_dropped = dups;
        Ok((
            Graph {
                directed,
                out,
                in_,
                edge_count,
            },
            report,
        ))
    }

    /// Graph with `node_count` nodes and no edges (a sampled subgraph can be
    /// legitimately empty, unlike an ingested one).
    pub fn empty(directed: bool, node_count: usize) -> Self {
        Graph {
            directed,
            out: Adjacency {
                offsets: vec![0; node_count + 1],
                targets: Vec::new(),
            },
            in_: if directed {
                Adjacency {
                    offsets: vec![0; node_count + 1],
                    targets: Vec::new(),
                }
            } else {
                Adjacency::default()
            },
            edge_count: 0,
        }
    }

    /// Build with the node count inferred as `max id + 1`.
    pub fn from_edges(
        directed: bool,
        edges: &[(NodeId, NodeId)],
    ) -> Result<(Self, BuildReport), GraphError> {
        let node_count = edges
            .iter()
            .map(|&(s, d)| s.max(d) as usize + 1)
            .max()
            .unwrap_or(0);
        Self::build(directed, node_count, edges)
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn node_count(&self) -> usize {
        self.out.offsets.len() - 1
    }

    /// Directed edge count for directed graphs, undirected edge count otherwise.
    pub fn edge_count(&self) -> u64 {
        self.edge_count
    }

    pub fn out_neighbors(&self, u: NodeId) -> &[NodeId] {
        self.out.neighbors(u)
    }

    pub fn in_neighbors(&self, u: NodeId) -> &[NodeId] {
        if self.directed {
            self.in_.neighbors(u)
        } else {
            self.out.neighbors(u)
        }
    }

    /// Neighbors of `u` (undirected view for undirected graphs, out-neighbors
    /// for directed ones).
    pub fn neighbors(&self, u: NodeId) -> &[NodeId] {
        self.out.neighbors(u)
    }

    pub fn out_degree(&self, u: NodeId) -> usize {
        self.out.neighbors(u).len()
    }

    pub fn in_degree(&self, u: NodeId) -> usize {
        self.in_neighbors(u).len()
    }

    pub fn contains(&self, u: NodeId) -> bool {
        (u as usize) < self.node_count()
    }

    /// Whether the directed edge `u -> v` (or undirected edge `{u, v}`) exists.
    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.contains(u) && self.contains(v) && self.out.neighbors(u).binary_search(&v).is_ok()
    }

    /// Undirected projection: edge present iff either direction exists.
    /// Borrows `self` when already undirected.
    pub fn undirected_projection(&self) -> Cow<'_, Graph> {
        if !self.directed {
            return Cow::Borrowed(self);
        }
        let n = self.node_count();
        let mut edges = Vec::with_capacity(self.edge_count as usize);
        for u in 0..n as NodeId {
            for &v in self.out_neighbors(u) {
                if u < v || !self.has_edge(v, u) {
                    edges.push((u, v));
                }
            }
        }
        let (g, _) = Graph::build(false, n, &edges).expect("projection of a valid graph");
        Cow::Owned(g)
    }
}
