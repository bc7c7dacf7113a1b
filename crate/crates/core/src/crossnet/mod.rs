//! Cross-network analytics over (target, source, mapping) triples.
//!
//! The target is a directed graph whose links are classified as copied
//! (endpoint pair is also a source edge between connected accounts) or native
//! (everything else). Per-user metrics are computed as exact rationals so the
//! canonical fixture can be checked bit-for-bit before any rounding.

mod interact;
mod similar;

pub use interact::{
    interaction_sampling_stats, interaction_subgraph, social_interaction_ratios, InteractionEvent,
    InteractionLog, InteractionUserStats, SocialRatios,
};
pub use similar::{
    binned_series, closeness_by_copy_status, jaccard_similarity, similarity_by_link_class,
    BinRow, BinScale, BinSpec, LinkClassSamples, PairSample,
};

use std::collections::HashMap;

use thiserror::Error;

use crate::graph::{Graph, NodeId};

#[derive(Debug, Error, PartialEq)]
pub enum CrossnetError {
    #[error("mapping references unknown {side} node id {id}")]
    DanglingMapping { side: &'static str, id: NodeId },
    #[error("mapping is not injective (duplicate {side} id {id})")]
    NotInjective { side: &'static str, id: NodeId },
    #[error("node {0} not in target graph")]
    NodeNotFound(NodeId),
    #[error("target graph must be directed")]
    TargetNotDirected,
    #[error("source graph must be undirected")]
    SourceNotUndirected,
    #[error("interaction graph is not a subgraph of the target")]
    NotSubgraph,
    #[error("log bins require positive values (got {0})")]
    BadBinDomain(f64),
    #[error("bad bin spec: {0}")]
    BadBinSpec(String),
}

/// Exact ratio of two counts; `den > 0`. Undefined ratios are represented as
/// `None` at the use sites, never as `Ratio` with a zero denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Option<Ratio> {
        if den == 0 {
            None
        } else {
            Some(Ratio { num, den })
        }
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Exact equality by cross multiplication, independent of reduction.
    pub fn eq_exact(&self, other: &Ratio) -> bool {
        self.num as u128 * other.den as u128 == other.num as u128 * self.den as u128
    }
}

/// Injective association from target node ids to source node ids. Target
/// nodes without an entry are unconnected.
#[derive(Debug, Clone, Default)]
pub struct AccountMapping {
    pairs: Vec<(NodeId, NodeId)>,
}

impl AccountMapping {
    pub fn new(pairs: Vec<(NodeId, NodeId)>) -> Result<Self, CrossnetError> {
        let mut seen_targets = HashMap::new();
        let mut seen_sources = HashMap::new();
        for &(t, s) in &pairs {
            if seen_targets.insert(t, s).is_some() {
                return Err(CrossnetError::NotInjective {
                    side: "target",
                    id: t,
                });
            }
            if seen_sources.insert(s, t).is_some() {
                return Err(CrossnetError::NotInjective {
                    side: "source",
                    id: s,
                });
            }
        }
        Ok(AccountMapping { pairs })
    }

    pub fn pairs(&self) -> &[(NodeId, NodeId)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Which friend set `fr` the reciprocity ratios are computed against.
///
/// The two readings coincide once intersected with a user's target
/// neighborhood (a target edge between connected accounts is copied exactly
/// when its pair is a source edge), but both are kept measurable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FriendSetMode {
    /// All source friends with connected accounts (the source friend list).
    #[default]
    Copiable,
    /// Only neighbors actually joined by a copied target link.
    CopiedOnly,
}

/// Decomposition of a target graph into copied and native links given a
/// source graph and an account mapping.
#[derive(Debug, Clone)]
pub struct NetworkPartition {
    target_nodes: usize,
    connected: Vec<bool>,
    target_to_source: Vec<Option<NodeId>>,
    source_to_target: Vec<Option<NodeId>>,
    /// Directed copied target edges, sorted by (src, dst).
    copied_fwd: Vec<(NodeId, NodeId)>,
    /// Same edges sorted by (dst, src).
    copied_rev: Vec<(NodeId, NodeId)>,
    /// Unordered copiable pairs in target ids, sorted.
    copiable_pairs: Vec<(NodeId, NodeId)>,
    copied_count: u64,
    native_count: u64,
}

/// Classify every target edge as copied or native.
///
/// A directed target edge u -> v is copied iff both endpoints are connected
/// and {map(u), map(v)} is a source edge. Copiable pairs are all source edges
/// between images of connected nodes, reported in target ids.
pub fn partition(
    target: &Graph,
    source: &Graph,
    mapping: &AccountMapping,
) -> Result<NetworkPartition, CrossnetError> {
    if !target.is_directed() {
        return Err(CrossnetError::TargetNotDirected);
    }
    if source.is_directed() {
        return Err(CrossnetError::SourceNotUndirected);
    }
    let tn = target.node_count();
    let sn = source.node_count();
    let mut connected = vec![false; tn];
    let mut t2s: Vec<Option<NodeId>> = vec![None; tn];
    let mut s2t: Vec<Option<NodeId>> = vec![None; sn];
    for &(t, s) in mapping.pairs() {
        if (t as usize) >= tn {
            return Err(CrossnetError::DanglingMapping {
                side: "target",
                id: t,
            });
        }
        if (s as usize) >= sn {
            return Err(CrossnetError::DanglingMapping {
                side: "source",
                id: s,
            });
        }
        connected[t as usize] = true;
        t2s[t as usize] = Some(s);
        s2t[s as usize] = Some(t);
    }

    let mut copied_fwd = Vec::new();
    let mut native_count = 0u64;
    for u in 0..tn as NodeId {
        for &v in target.out_neighbors(u) {
            let is_copied = match (t2s[u as usize], t2s[v as usize]) {
                (Some(su), Some(sv)) => source.has_edge(su, sv),
                _ => false,
            };
            if is_copied {
                copied_fwd.push((u, v));
            } else {
                native_count += 1;
            }
        }
    }
    let copied_count = copied_fwd.len() as u64;
    let mut copied_rev: Vec<(NodeId, NodeId)> = copied_fwd.iter().map(|&(u, v)| (v, u)).collect();
    copied_rev.sort_unstable();

    let mut copiable_pairs = Vec::new();
    for su in 0..sn as NodeId {
        let Some(tu) = s2t[su as usize] else { continue };
        for &sv in source.neighbors(su) {
            if sv > su {
                if let Some(tv) = s2t[sv as usize] {
                    let pair = if tu < tv { (tu, tv) } else { (tv, tu) };
                    copiable_pairs.push(pair);
                }
            }
        }
    }
    copiable_pairs.sort_unstable();

    Ok(NetworkPartition {
        target_nodes: tn,
        connected,
        target_to_source: t2s,
        source_to_target: s2t,
        copied_fwd,
        copied_rev,
        copiable_pairs,
        copied_count,
        native_count,
    })
}

impl NetworkPartition {
    pub fn copied_count(&self) -> u64 {
        self.copied_count
    }

    pub fn native_count(&self) -> u64 {
        self.native_count
    }

    pub fn copiable_count(&self) -> u64 {
        self.copiable_pairs.len() as u64
    }

    pub fn connected_count(&self) -> usize {
        self.connected.iter().filter(|&&c| c).count()
    }

    pub fn is_connected_node(&self, u: NodeId) -> bool {
        (u as usize) < self.target_nodes && self.connected[u as usize]
    }

    pub fn source_of(&self, u: NodeId) -> Option<NodeId> {
        self.target_to_source.get(u as usize).copied().flatten()
    }

    pub fn target_of(&self, s: NodeId) -> Option<NodeId> {
        self.source_to_target.get(s as usize).copied().flatten()
    }

    pub fn is_copied(&self, u: NodeId, v: NodeId) -> bool {
        self.copied_fwd.binary_search(&(u, v)).is_ok()
    }

    pub fn copied_edges(&self) -> &[(NodeId, NodeId)] {
        &self.copied_fwd
    }

    /// Unordered copiable pairs, in target ids.
    pub fn copiable_pairs(&self) -> &[(NodeId, NodeId)] {
        &self.copiable_pairs
    }

    pub fn copied_out_neighbors(&self, u: NodeId) -> Vec<NodeId> {
        let start = self.copied_fwd.partition_point(|&(a, _)| a < u);
        self.copied_fwd[start..]
            .iter()
            .take_while(|&&(a, _)| a == u)
            .map(|&(_, v)| v)
            .collect()
    }

    pub fn copied_in_neighbors(&self, u: NodeId) -> Vec<NodeId> {
        let start = self.copied_rev.partition_point(|&(a, _)| a < u);
        self.copied_rev[start..]
            .iter()
            .take_while(|&&(a, _)| a == u)
            .map(|&(_, v)| v)
            .collect()
    }

    /// The friend set `fr` of a user under the chosen reading; sorted.
    pub fn friend_set(&self, source: &Graph, u: NodeId, mode: FriendSetMode) -> Vec<NodeId> {
        match mode {
            FriendSetMode::Copiable => {
                let Some(su) = self.source_of(u) else {
                    return Vec::new();
                };
                let mut fr: Vec<NodeId> = source
                    .neighbors(su)
                    .iter()
                    .filter_map(|&sv| self.target_of(sv))
                    .collect();
                fr.sort_unstable();
                fr
            }
            FriendSetMode::CopiedOnly => {
                let mut fr = self.copied_out_neighbors(u);
                fr.extend(self.copied_in_neighbors(u));
                fr.sort_unstable();
                fr.dedup();
                fr
            }
        }
    }
}

fn sorted_intersection_len(a: &[NodeId], b: &[NodeId]) -> u64 {
    let (mut i, mut j, mut n) = (0, 0, 0u64);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

fn sorted_union(a: &[NodeId], b: &[NodeId]) -> Vec<NodeId> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    out.extend_from_slice(a);
    out.extend_from_slice(b);
    out.sort_unstable();
    out.dedup();
    out
}

fn sorted_intersection(a: &[NodeId], b: &[NodeId]) -> Vec<NodeId> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn sorted_difference(a: &[NodeId], b: &[NodeId]) -> Vec<NodeId> {
    a.iter()
        .filter(|x| b.binary_search(x).is_err())
        .copied()
        .collect()
}

fn check_node(target: &Graph, node: NodeId) -> Result<(), CrossnetError> {
    if !target.contains(node) {
        return Err(CrossnetError::NodeNotFound(node));
    }
    Ok(())
}

/// Copy ratios (all / follower / following): the fraction of a user's target
/// neighbors that are also source friends. Denominator-empty ratios are
/// `None`.
pub fn copy_ratios(
    part: &NetworkPartition,
    target: &Graph,
    source: &Graph,
    node: NodeId,
) -> Result<(Option<Ratio>, Option<Ratio>, Option<Ratio>), CrossnetError> {
    check_node(target, node)?;
    let fr = part.friend_set(source, node, FriendSetMode::Copiable);
    let ind = target.in_neighbors(node);
    let out = target.out_neighbors(node);
    let all = sorted_union(ind, out);
    let cr = Ratio::new(sorted_intersection_len(&all, &fr), all.len() as u64);
    let cr_ind = Ratio::new(sorted_intersection_len(ind, &fr), ind.len() as u64);
    let cr_out = Ratio::new(sorted_intersection_len(out, &fr), out.len() as u64);
    Ok((cr, cr_ind, cr_out))
}

/// Reciprocity ratios inside and outside the friend set:
/// R_copied = |fr n ind n out| / |fr n (ind u out)|,
/// R_native = |(ind - fr) n (out - fr)| / |(ind - fr) u (out - fr)|.
pub fn reciprocity_ratios(
    part: &NetworkPartition,
    target: &Graph,
    source: &Graph,
    node: NodeId,
    mode: FriendSetMode,
) -> Result<(Option<Ratio>, Option<Ratio>), CrossnetError> {
    check_node(target, node)?;
    let fr = part.friend_set(source, node, mode);
    let ind = target.in_neighbors(node);
    let out = target.out_neighbors(node);
    let fr_ind = sorted_intersection(ind, &fr);
    let fr_out = sorted_intersection(out, &fr);
    let r_copied = Ratio::new(
        sorted_intersection_len(&fr_ind, &fr_out),
        sorted_union(&fr_ind, &fr_out).len() as u64,
    );
    let ind_n = sorted_difference(ind, &fr);
    let out_n = sorted_difference(out, &fr);
    let r_native = Ratio::new(
        sorted_intersection_len(&ind_n, &out_n),
        sorted_union(&ind_n, &out_n).len() as u64,
    );
    Ok((r_copied, r_native))
}

/// Among a user's reciprocated neighbors, the fraction that belong to the
/// friend set.
pub fn copied_fraction_of_reciprocated(
    part: &NetworkPartition,
    target: &Graph,
    source: &Graph,
    node: NodeId,
) -> Result<Option<Ratio>, CrossnetError> {
    check_node(target, node)?;
    let fr = part.friend_set(source, node, FriendSetMode::Copiable);
    let recip = sorted_intersection(target.in_neighbors(node), target.out_neighbors(node));
    Ok(Ratio::new(
        sorted_intersection_len(&recip, &fr),
        recip.len() as u64,
    ))
}

/// User category derived from the copy ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UserCategory {
    /// CR = 0: links only natively.
    Native,
    /// CR = 1: links only to source friends.
    Expat,
    /// 0 < CR < 1.
    Binetworked,
    /// No target links at all.
    Undefined,
}

impl UserCategory {
    pub fn from_copy_ratio(cr: Option<Ratio>) -> Self {
        match cr {
            None => UserCategory::Undefined,
            Some(r) if r.num == 0 => UserCategory::Native,
            Some(r) if r.num == r.den => UserCategory::Expat,
            Some(_) => UserCategory::Binetworked,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            UserCategory::Native => "native",
            UserCategory::Expat => "expat",
            UserCategory::Binetworked => "binetworked",
            UserCategory::Undefined => "undefined",
        }
    }
}

/// Per-user (copied friend count, native friend-of-friend follower count):
/// x = copied out-neighbors of u; y = native in-neighbors adjacent (in the
/// projected target) to at least one copied out-neighbor of u.
pub fn fof_native_follow_stats(part: &NetworkPartition, target: &Graph) -> Vec<(u64, u64)> {
    let proj = target.undirected_projection();
    let p = proj.as_ref();
    (0..target.node_count() as NodeId)
        .map(|u| {
            let copied_out = part.copied_out_neighbors(u);
            let x = copied_out.len() as u64;
            if copied_out.is_empty() {
                return (0, 0);
            }
            let y = target
                .in_neighbors(u)
                .iter()
                .filter(|&&v| !part.is_copied(v, u) && !part.is_copied(u, v))
                .filter(|&&v| copied_out.iter().any(|&c| p.has_edge(v, c)))
                .count() as u64;
            (x, y)
        })
        .collect()
}
