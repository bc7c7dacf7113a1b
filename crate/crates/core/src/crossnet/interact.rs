//! Interaction-log analytics: which links actually carry social activity.

use std::collections::BTreeMap;

use super::{CrossnetError, NetworkPartition, Ratio};
use crate::clustering::all_local_clustering;
use crate::graph::{Graph, NodeId};

/// One timestamped actor -> author event (a repin, like, scrobble, ...).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InteractionEvent {
    pub actor: NodeId,
    pub author: NodeId,
    pub kind: String,
    pub timestamp: i64,
}

/// Event list kept sorted by timestamp.
#[derive(Debug, Clone, Default)]
pub struct InteractionLog {
    events: Vec<InteractionEvent>,
}

impl InteractionLog {
    pub fn new(mut events: Vec<InteractionEvent>) -> Self {
        events.sort_by_key(|e| e.timestamp);
        InteractionLog { events }
    }

    pub fn events(&self) -> &[InteractionEvent] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }
}

/// The subgraph of target links carrying at least one event: the directed
/// edge actor -> author is included iff some event exists for that pair AND
/// the actor follows the author in the target. Events on non-links (including
/// self events) are counted separately as non-social.
pub fn interaction_subgraph(target: &Graph, log: &InteractionLog) -> (Graph, u64) {
    let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
    let mut non_social = 0u64;
    for e in log.events() {
        if e.actor != e.author && target.has_edge(e.actor, e.author) {
            edges.push((e.actor, e.author));
        } else {
            non_social += 1;
        }
    }
    edges.sort_unstable();
    edges.dedup();
    let graph = if target.node_count() == 0 {
        Graph::empty(true, 0)
    } else {
        Graph::build(true, target.node_count(), &edges)
            .expect("interaction subgraph")
            .0
    };
    (graph, non_social)
}

/// How the interaction subgraph samples one user's links.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionUserStats {
    pub node: NodeId,
    /// Reciprocated neighbors with at least one interacting direction.
    pub frac_reciprocated: Option<Ratio>,
    /// Unreciprocated directed links present in the interaction graph.
    pub frac_unreciprocated: Option<Ratio>,
    /// Incident copied directed links present in the interaction graph.
    pub frac_copied: Option<Ratio>,
    /// Incident native directed links present in the interaction graph.
    pub frac_native: Option<Ratio>,
    pub clustering_target: Option<f64>,
    pub clustering_interaction: Option<f64>,
}

/// Per-user sampling fractions of the interaction subgraph, plus the per-user
/// clustering comparison between the interaction graph and the full target.
pub fn interaction_sampling_stats(
    target: &Graph,
    part: &NetworkPartition,
    interaction: &Graph,
) -> Result<Vec<InteractionUserStats>, CrossnetError> {
    if interaction.node_count() != target.node_count() {
        return Err(CrossnetError::NotSubgraph);
    }
    for u in 0..interaction.node_count() as NodeId {
        for &v in interaction.out_neighbors(u) {
            if !target.has_edge(u, v) {
                return Err(CrossnetError::NotSubgraph);
            }
        }
    }
    let clust_target = all_local_clustering(target);
    let clust_inter = all_local_clustering(interaction);
    let mut out = Vec::with_capacity(target.node_count());
    for u in 0..target.node_count() as NodeId {
        let ind = target.in_neighbors(u);
        let outn = target.out_neighbors(u);

        let (mut recip_total, mut recip_hit) = (0u64, 0u64);
        for &v in outn {
            if ind.binary_search(&v).is_ok() {
                recip_total += 1;
                if interaction.has_edge(u, v) || interaction.has_edge(v, u) {
                    recip_hit += 1;
                }
            }
        }

        let (mut unrec_total, mut unrec_hit) = (0u64, 0u64);
        let (mut cop_total, mut cop_hit) = (0u64, 0u64);
        let (mut nat_total, mut nat_hit) = (0u64, 0u64);
        let mut tally = |src: NodeId, dst: NodeId, unreciprocated: bool| {
            let present = interaction.has_edge(src, dst);
            if unreciprocated {
                unrec_total += 1;
                unrec_hit += u64::from(present);
            }
            if part.is_copied(src, dst) {
                cop_total += 1;
                cop_hit += u64::from(present);
            } else {
                nat_total += 1;
                nat_hit += u64::from(present);
            }
        };
        for &v in outn {
            tally(u, v, ind.binary_search(&v).is_err());
        }
        for &v in ind {
            tally(v, u, outn.binary_search(&v).is_err());
        }

        out.push(InteractionUserStats {
            node: u,
            frac_reciprocated: Ratio::new(recip_hit, recip_total),
            frac_unreciprocated: Ratio::new(unrec_hit, unrec_total),
            frac_copied: Ratio::new(cop_hit, cop_total),
            frac_native: Ratio::new(nat_hit, nat_total),
            clustering_target: clust_target[u as usize],
            clustering_interaction: clust_inter[u as usize],
        });
    }
    Ok(out)
}

/// Per-user social interaction ratios on the activity (events made) and
/// influence (events received) sides.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SocialRatios {
    /// Events made over a followed author / all events made.
    pub social_activity: Option<Ratio>,
    /// Events received from a follower / all events received.
    pub social_influence: Option<Ratio>,
    /// Social events made over copied links / all social events made.
    pub fb_activity: Option<Ratio>,
    /// Social events received over copied links / all social events received.
    pub fb_influence: Option<Ratio>,
    /// Events made, by kind.
    pub activity_counts: BTreeMap<String, u64>,
    /// Events received, by kind.
    pub influence_counts: BTreeMap<String, u64>,
}

pub fn social_interaction_ratios(
    target: &Graph,
    part: &NetworkPartition,
    log: &InteractionLog,
) -> Vec<SocialRatios> {
    let n = target.node_count();
    let mut made = vec![(0u64, 0u64, 0u64); n]; // (all, social, fb)
    let mut received = vec![(0u64, 0u64, 0u64); n];
    let mut out: Vec<SocialRatios> = vec![SocialRatios::default(); n];
    for e in log.events() {
        if (e.actor as usize) >= n || (e.author as usize) >= n {
            continue;
        }
        let social = e.actor != e.author && target.has_edge(e.actor, e.author);
        let fb = social && part.is_copied(e.actor, e.author);
        let m = &mut made[e.actor as usize];
        m.0 += 1;
        m.1 += u64::from(social);
        m.2 += u64::from(fb);
        let r = &mut received[e.author as usize];
        r.0 += 1;
        r.1 += u64::from(social);
        r.2 += u64::from(fb);
        *out[e.actor as usize]
            .activity_counts
            .entry(e.kind.clone())
            .or_insert(0) += 1;
        *out[e.author as usize]
            .influence_counts
            .entry(e.kind.clone())
            .or_insert(0) += 1;
    }
    for u in 0..n {
        out[u].social_activity = Ratio::new(made[u].1, made[u].0);
        out[u].fb_activity = Ratio::new(made[u].2, made[u].1);
        out[u].social_influence = Ratio::new(received[u].1, received[u].0);
        out[u].fb_influence = Ratio::new(received[u].2, received[u].1);
    }
    out
}
