//! Degree distributions, moments and reciprocity.

use std::collections::BTreeMap;

use crate::graph::{Graph, GraphError, NodeId};

/// Empirical degree distributions of a graph with exact integer-sum moments.
///
/// For undirected graphs in- and out-degree coincide, so `in_pmf == out_pmf`
/// and `mean_jk == mean_k2`. `mean_k2` is the second moment of the out-degree
/// (= degree for undirected graphs); `mean_jk` is the mixed in/out moment.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeStats {
    pub in_pmf: BTreeMap<u32, f64>,
    pub out_pmf: BTreeMap<u32, f64>,
    pub joint_pmf: BTreeMap<(u32, u32), f64>,
    pub mean_k: f64,
    pub mean_k2: f64,
    pub mean_jk: f64,
}

/// Compute degree distributions over all nodes of a non-empty graph.
pub fn degree_stats(g: &Graph) -> Result<DegreeStats, GraphError> {
    let n = g.node_count();
    if n == 0 {
        return Err(GraphError::EmptyGraph);
    }
    let mut in_counts: BTreeMap<u32, u64> = BTreeMap::new();
    let mut out_counts: BTreeMap<u32, u64> = BTreeMap::new();
    let mut joint_counts: BTreeMap<(u32, u32), u64> = BTreeMap::new();
    let (mut sum_k, mut sum_k2, mut sum_jk) = (0u128, 0u128, 0u128);
    for u in 0..n as NodeId {
        let kout = g.out_degree(u) as u64;
        let kin = g.in_degree(u) as u64;
        *out_counts.entry(kout as u32).or_insert(0) += 1;
        *in_counts.entry(kin as u32).or_insert(0) += 1;
        *joint_counts.entry((kin as u32, kout as u32)).or_insert(0) += 1;
        sum_k += kout as u128;
        sum_k2 += (kout * kout) as u128;
        sum_jk += (kin * kout) as u128;
    }
    let nf = n as f64;
    let to_pmf = |counts: BTreeMap<u32, u64>| {
        counts
            .into_iter()
            .map(|(k, c)| (k, c as f64 / nf))
            .collect::<BTreeMap<u32, f64>>()
    };
    Ok(DegreeStats {
        in_pmf: to_pmf(in_counts),
        out_pmf: to_pmf(out_counts),
        joint_pmf: joint_counts
            .into_iter()
            .map(|(jk, c)| (jk, c as f64 / nf))
            .collect(),
        mean_k: sum_k as f64 / nf,
        mean_k2: sum_k2 as f64 / nf,
        mean_jk: sum_jk as f64 / nf,
    })
}

/// Fraction of directed edges whose reverse edge also exists.
pub fn reciprocity(g: &Graph) -> Result<f64, GraphError> {
    if !g.is_directed() {
        return Err(GraphError::NotDirected);
    }
    if g.edge_count() == 0 {
        return Err(GraphError::NoEdges);
    }
    let mut mutual = 0u64;
    for u in 0..g.node_count() as NodeId {
        for &v in g.out_neighbors(u) {
            if g.has_edge(v, u) {
                mutual += 1;
            }
        }
    }
    Ok(mutual as f64 / g.edge_count() as f64)
}
