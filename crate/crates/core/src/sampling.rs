//! Link bootstrap sampling: the two-stage random process by which a target
//! network copies links from an undirected source network.
//!
//! Stage one samples each node independently with the node rate p1 (users
//! connecting their accounts). Stage two lets every sampled node select each
//! incident source link with the link rate p2; a directed copied edge i -> j
//! requires both endpoints sampled and the i -> j selection to fire, each
//! direction drawn independently. The per-incident-link thinning probability
//! seen from a sampled node is therefore p1 * p2, the link copy probability.
//!
//! RNG discipline: node Bernoullis are drawn first in node order, then exactly
//! one uniform per directed candidate (ordered pair of sampled endpoints) in
//! deterministic order, compared against p2. With a fixed seed and p1, raising
//! p2 only ever adds copied edges, which keeps sweep thresholds comparable
//! across cells.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::clustering::{global_clustering, ClusteringMode};
use crate::components::{connected_components, ComponentKind};
use crate::graph::{Graph, NodeId};

#[derive(Debug, Error, PartialEq)]
pub enum SampleError {
    #[error("source graph must be undirected")]
    NotUndirected,
    #[error("sampling rate {0} outside [0, 1]")]
    BadRate(f64),
    #[error("sweep grids must be non-empty and replicas >= 1")]
    BadSweep,
}

/// Node and link sampling rates plus the RNG seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleParams {
    pub node_rate: f64,
    pub link_rate: f64,
    pub seed: u64,
}

impl SampleParams {
    pub fn new(node_rate: f64, link_rate: f64, seed: u64) -> Result<Self, SampleError> {
        for r in [node_rate, link_rate] {
            if !(0.0..=1.0).contains(&r) {
                return Err(SampleError::BadRate(r));
            }
        }
        Ok(SampleParams {
            node_rate,
            link_rate,
            seed,
        })
    }

    /// Link copy probability p1 * p2.
    pub fn copy_prob(&self) -> f64 {
        self.node_rate * self.link_rate
    }
}

/// Structural identity of the sampled source graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceRef {
    pub node_count: usize,
    pub edge_count: u64,
}

/// The copied network: sampled node set plus the copied subgraph over it.
///
/// `graph` is indexed by rank within `sampled_nodes`; isolated sampled nodes
/// are retained as part of the node set.
#[derive(Debug, Clone)]
pub struct CopiedNetwork {
    pub sampled_nodes: Vec<NodeId>,
    pub graph: Graph,
    pub source_ref: SourceRef,
}

impl CopiedNetwork {
    pub fn sampled_count(&self) -> usize {
        self.sampled_nodes.len()
    }
}

fn source_ref(source: &Graph) -> SourceRef {
    SourceRef {
        node_count: source.node_count(),
        edge_count: source.edge_count(),
    }
}

fn draw_nodes(
    source: &Graph,
    rng: &mut ChaCha8Rng,
    prob: impl Fn(NodeId) -> f64,
) -> (Vec<bool>, Vec<u32>, Vec<NodeId>) {
    let n = source.node_count();
    let mut in_sample = vec![false; n];
    for (u, flag) in in_sample.iter_mut().enumerate() {
        *flag = rng.gen::<f64>() < prob(u as NodeId);
    }
    let mut rank = vec![0u32; n];
    let mut sampled = Vec::new();
    for u in 0..n {
        if in_sample[u] {
            rank[u] = sampled.len() as u32;
            sampled.push(u as NodeId);
        }
    }
    (in_sample, rank, sampled)
}

fn copy_links_directed(
    source: &Graph,
    rng: &mut ChaCha8Rng,
    link_rate: f64,
    in_sample: &[bool],
    rank: &[u32],
    sampled: &[NodeId],
) -> CopiedNetwork {
    let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
    for u in 0..source.node_count() as NodeId {
        if !in_sample[u as usize] {
            continue;
        }
        for &v in source.neighbors(u) {
            if in_sample[v as usize] && rng.gen::<f64>() < link_rate {
                edges.push((rank[u as usize], rank[v as usize]));
            }
        }
    }
    let graph = if sampled.is_empty() {
        Graph::empty(true, 0)
    } else {
        Graph::build(true, sampled.len(), &edges)
            .expect("copied subgraph")
            .0
    };
    CopiedNetwork {
        sampled_nodes: sampled.to_vec(),
        graph,
        source_ref: source_ref(source),
    }
}

/// Sample a directed copied network from an undirected source.
pub fn sample(source: &Graph, params: &SampleParams) -> Result<CopiedNetwork, SampleError> {
    if source.is_directed() {
        return Err(SampleError::NotUndirected);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let (in_sample, rank, sampled) = draw_nodes(source, &mut rng, |_| params.node_rate);
    Ok(copy_links_directed(
        source,
        &mut rng,
        params.link_rate,
        &in_sample,
        &rank,
        &sampled,
    ))
}

/// Degree-weighted variant: node i is sampled with min(1, base_rate *
/// deg(i) / mean_degree), modelling more social users connecting their
/// accounts more readily. Link semantics are unchanged.
pub fn sample_degree_weighted(
    source: &Graph,
    base_rate: f64,
    link_rate: f64,
    seed: u64,
) -> Result<CopiedNetwork, SampleError> {
    if source.is_directed() {
        return Err(SampleError::NotUndirected);
    }
    if !(0.0..=1.0).contains(&link_rate) {
        return Err(SampleError::BadRate(link_rate));
    }
    if !(base_rate >= 0.0) {
        return Err(SampleError::BadRate(base_rate));
    }
    let mean_degree = 2.0 * source.edge_count() as f64 / source.node_count() as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (in_sample, rank, sampled) = draw_nodes(source, &mut rng, |u| {
        if mean_degree == 0.0 {
            0.0
        } else {
            (base_rate * source.neighbors(u).len() as f64 / mean_degree).min(1.0)
        }
    });
    Ok(copy_links_directed(
        source,
        &mut rng,
        link_rate,
        &in_sample,
        &rank,
        &sampled,
    ))
}

/// Undirected adaptation of the process: each source link between sampled
/// endpoints is copied once, as an undirected link, with probability p2.
/// This is the form under which the uncorrelated clustering and moment
/// predictions are stated.
pub fn sample_undirected(
    source: &Graph,
    params: &SampleParams,
) -> Result<CopiedNetwork, SampleError> {
    if source.is_directed() {
        return Err(SampleError::NotUndirected);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let (in_sample, rank, sampled) = draw_nodes(source, &mut rng, |_| params.node_rate);
    let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
    for u in 0..source.node_count() as NodeId {
        if !in_sample[u as usize] {
            continue;
        }
        for &v in source.neighbors(u) {
            if v > u && in_sample[v as usize] && rng.gen::<f64>() < params.link_rate {
                edges.push((rank[u as usize], rank[v as usize]));
            }
        }
    }
    let graph = if sampled.is_empty() {
        Graph::empty(false, 0)
    } else {
        Graph::build(false, sampled.len(), &edges)
            .expect("copied subgraph")
            .0
    };
    Ok(CopiedNetwork {
        sampled_nodes: sampled,
        graph,
        source_ref: source_ref(source),
    })
}

/// Structural measurements of one copied network, as collected per sweep cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CopiedMeasurements {
    /// Largest weak component over the sampled node set (0 when empty).
    pub gcc_weak_frac: f64,
    /// Largest strong component over the sampled node set (weak value for an
    /// undirected copied network).
    pub gcc_strong_frac: f64,
    pub reciprocity: Option<f64>,
    pub clustering_mean_local: Option<f64>,
    pub clustering_transitivity: Option<f64>,
    /// Mean out-degree over sampled nodes; None when no node was sampled.
    pub mean_k: Option<f64>,
    /// Second moment of the out-degree; None when no node was sampled.
    pub mean_k2: Option<f64>,
}

pub fn measure(copied: &CopiedNetwork) -> CopiedMeasurements {
    let g = &copied.graph;
    let n = g.node_count();
    if n == 0 {
        return CopiedMeasurements {
            gcc_weak_frac: 0.0,
            gcc_strong_frac: 0.0,
            reciprocity: None,
            clustering_mean_local: None,
            clustering_transitivity: None,
            mean_k: None,
            mean_k2: None,
        };
    }
    let weak = connected_components(g, ComponentKind::Weak)
        .expect("non-empty graph")
        .gcc_fraction_of_nodes;
    let strong = if g.is_directed() {
        connected_components(g, ComponentKind::Strong)
            .expect("non-empty graph")
            .gcc_fraction_of_nodes
    } else {
        weak
    };
    let (mut sum_k, mut sum_k2) = (0u128, 0u128);
    for u in 0..n as NodeId {
        let d = g.out_degree(u) as u64;
        sum_k += d as u128;
        sum_k2 += (d * d) as u128;
    }
    CopiedMeasurements {
        gcc_weak_frac: weak,
        gcc_strong_frac: strong,
        reciprocity: crate::stats::reciprocity(g).ok(),
        clustering_mean_local: global_clustering(g, ClusteringMode::MeanLocal).ok(),
        clustering_transitivity: global_clustering(g, ClusteringMode::Transitivity).ok(),
        mean_k: Some(sum_k as f64 / n as f64),
        mean_k2: Some(sum_k2 as f64 / n as f64),
    }
}

/// One replica's measurements within a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub p1: f64,
    pub p2: f64,
    pub p_e: f64,
    pub replica: u32,
    pub measures: CopiedMeasurements,
}

/// Mean and standard error of the defined values of one metric in one cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aggregate {
    pub mean: f64,
    pub stderr: f64,
    pub count: usize,
}

fn aggregate(values: impl Iterator<Item = Option<f64>>) -> Option<Aggregate> {
    let defined: Vec<f64> = values.flatten().collect();
    if defined.is_empty() {
        return None;
    }
    let n = defined.len() as f64;
    let mean = defined.iter().sum::<f64>() / n;
    let stderr = if defined.len() < 2 {
        0.0
    } else {
        let var = defined.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
        (var / n).sqrt()
    };
    Some(Aggregate {
        mean,
        stderr,
        count: defined.len(),
    })
}

/// Per-cell means and standard errors over replicas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellSummary {
    pub p1: f64,
    pub p2: f64,
    pub p_e: f64,
    pub replicas: u32,
    pub gcc_weak_frac: Option<Aggregate>,
    pub gcc_strong_frac: Option<Aggregate>,
    pub reciprocity: Option<Aggregate>,
    pub clustering_mean_local: Option<Aggregate>,
    pub clustering_transitivity: Option<Aggregate>,
    pub mean_k: Option<Aggregate>,
    pub mean_k2: Option<Aggregate>,
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub cells: Vec<CellSummary>,
}

/// SplitMix64 finalizer; the basis of the seed derivation tree.
fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for one (cell, replica) job, derived from the single user-visible
/// base seed so any job is independently reproducible.
pub fn derive_seed(base: u64, cell: u64, replica: u64) -> u64 {
    splitmix(splitmix(base ^ cell.wrapping_mul(0xD1B5_4A32_D192_ED03)).wrapping_add(replica))
}

/// Run the sampling process over a (p1, p2) grid with seeded replicas.
/// Replicas run in parallel; output order and content depend only on the
/// inputs, not on worker count.
pub fn sweep(
    source: &Graph,
    p1_grid: &[f64],
    p2_grid: &[f64],
    replicas: u32,
    seed: u64,
) -> Result<SweepReport, SampleError> {
    if source.is_directed() {
        return Err(SampleError::NotUndirected);
    }
    if p1_grid.is_empty() || p2_grid.is_empty() || replicas == 0 {
        return Err(SampleError::BadSweep);
    }
    let mut jobs = Vec::new();
    for (ci, &p1) in p1_grid.iter().enumerate() {
        for (cj, &p2) in p2_grid.iter().enumerate() {
            let cell = (ci * p2_grid.len() + cj) as u64;
            let params = SampleParams::new(p1, p2, 0)?;
            for r in 0..replicas {
                jobs.push((cell, r, params));
            }
        }
    }
    let rows: Vec<SweepRow> = jobs
        .par_iter()
        .map(|&(cell, replica, base_params)| {
            let params = SampleParams {
                seed: derive_seed(seed, cell, replica as u64),
                ..base_params
            };
            let copied = sample(source, &params).expect("undirected source");
            SweepRow {
                p1: params.node_rate,
                p2: params.link_rate,
                p_e: params.copy_prob(),
                replica,
                measures: measure(&copied),
            }
        })
        .collect();

    let cells = rows
        .chunks(replicas as usize)
        .map(|chunk| {
            let first = &chunk[0];
            CellSummary {
                p1: first.p1,
                p2: first.p2,
                p_e: first.p_e,
                replicas,
                gcc_weak_frac: aggregate(chunk.iter().map(|r| Some(r.measures.gcc_weak_frac))),
                gcc_strong_frac: aggregate(chunk.iter().map(|r| Some(r.measures.gcc_strong_frac))),
                reciprocity: aggregate(chunk.iter().map(|r| r.measures.reciprocity)),
                clustering_mean_local: aggregate(
                    chunk.iter().map(|r| r.measures.clustering_mean_local),
                ),
                clustering_transitivity: aggregate(
                    chunk.iter().map(|r| r.measures.clustering_transitivity),
                ),
                mean_k: aggregate(chunk.iter().map(|r| r.measures.mean_k)),
                mean_k2: aggregate(chunk.iter().map(|r| r.measures.mean_k2)),
            }
        })
        .collect();

    Ok(SweepReport { rows, cells })
}
