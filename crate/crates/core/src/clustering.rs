//! Local and global clustering coefficients.
//!
//! Directed graphs are measured on the undirected projection (edge present if
//! either direction exists). Nodes with projected degree < 2 have an undefined
//! local coefficient and are excluded from averages.

use std::borrow::Cow;

use crate::graph::{Graph, GraphError, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClusteringMode {
    /// Average of defined local coefficients.
    MeanLocal,
    /// 3 * triangles / connected triples.
    Transitivity,
}

fn sorted_intersection_count(a: &[NodeId], b: &[NodeId]) -> u64 {
    let (mut i, mut j, mut count) = (0, 0, 0u64);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Triangles through each node of an undirected graph.
///
/// Walks each edge once and intersects the endpoints' neighbor lists, so the
/// cost is sum over edges of min-degree — fine for the sparse graphs handled
/// here.
fn per_node_triangles(g: &Graph) -> Vec<u64> {
    debug_assert!(!g.is_directed());
    let n = g.node_count();
    let mut tri = vec![0u64; n];
    for u in 0..n as NodeId {
        let nu = g.neighbors(u);
        for &v in nu {
            if v <= u {
                continue;
            }
            // common neighbors w of {u,v} close one triangle each
            let nv = g.neighbors(v);
            let (mut i, mut j) = (0, 0);
            while i < nu.len() && j < nv.len() {
                match nu[i].cmp(&nv[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        let w = nu[i];
                        if w > v {
                            tri[u as usize] += 1;
                            tri[v as usize] += 1;
                            tri[w as usize] += 1;
                        }
                        i += 1;
                        j += 1;
                    }
                }
            }
        }
    }
    tri
}

/// Local clustering coefficient of `node`; `None` when projected degree < 2.
pub fn local_clustering(g: &Graph, node: NodeId) -> Result<Option<f64>, GraphError> {
    if !g.contains(node) {
        return Err(GraphError::NodeNotFound(node));
    }
    let proj = g.undirected_projection();
    Ok(local_on_undirected(proj.as_ref(), node))
}

fn local_on_undirected(g: &Graph, node: NodeId) -> Option<f64> {
    let nbrs = g.neighbors(node);
    let d = nbrs.len();
    if d < 2 {
        return None;
    }
    let mut links = 0u64;
    for (i, &a) in nbrs.iter().enumerate() {
        let na = g.neighbors(a);
        links += sorted_intersection_count(&nbrs[i + 1..], na);
    }
    Some(links as f64 / (d as f64 * (d as f64 - 1.0) / 2.0))
}

/// Global clustering under the requested mode. Errors with `NoTriples` when
/// no node of the projection has degree >= 2.
pub fn global_clustering(g: &Graph, mode: ClusteringMode) -> Result<f64, GraphError> {
    let proj: Cow<'_, Graph> = g.undirected_projection();
    let p = proj.as_ref();
    let n = p.node_count();
    let mut triples = 0u64;
    for u in 0..n as NodeId {
        let d = p.neighbors(u).len() as u64;
        if d >= 2 {
            triples += d * (d - 1) / 2;
        }
    }
    if triples == 0 {
        return Err(GraphError::NoTriples);
    }
    match mode {
        ClusteringMode::Transitivity => {
            let tri: u64 = per_node_triangles(p).iter().sum();
            // per-node counts sum to 3x the number of distinct triangles
            Ok(tri as f64 / triples as f64)
        }
        ClusteringMode::MeanLocal => {
            let tri = per_node_triangles(p);
            let (mut sum, mut defined) = (0.0f64, 0u64);
            for u in 0..n {
                let d = p.neighbors(u as NodeId).len() as u64;
                if d >= 2 {
                    sum += tri[u] as f64 / (d as f64 * (d as f64 - 1.0) / 2.0);
                    defined += 1;
                }
            }
            Ok(sum / defined as f64)
        }
    }
}

/// Local coefficients for every node (None where undefined), computed in one
/// pass over the projection.
pub fn all_local_clustering(g: &Graph) -> Vec<Option<f64>> {
    let proj = g.undirected_projection();
    let p = proj.as_ref();
    let tri = per_node_triangles(p);
    (0..p.node_count())
        .map(|u| {
            let d = p.neighbors(u as NodeId).len() as u64;
            if d < 2 {
                None
            } else {
                Some(tri[u] as f64 / (d as f64 * (d as f64 - 1.0) / 2.0))
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Graph {
        Graph::from_edges(false, &[(0, 1), (1, 2), (2, 0)]).unwrap().0
    }

    #[test]
    fn triangle_node_is_fully_clustered() {
        assert_eq!(local_clustering(&triangle(), 0).unwrap(), Some(1.0));
    }

    #[test]
    fn star_center_has_zero() {
        let (g, _) = Graph::from_edges(false, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        assert_eq!(local_clustering(&g, 0).unwrap(), Some(0.0));
        // leaves have degree 1: undefined
        assert_eq!(local_clustering(&g, 1).unwrap(), None);
    }

    #[test]
    fn triad_fixture() {
        // edges {ab, ac, bc, cd}: a=0 b=1 c=2 d=3
        let (g, _) = Graph::from_edges(false, &[(0, 1), (0, 2), (1, 2), (2, 3)]).unwrap();
        let c = local_clustering(&g, 2).unwrap().unwrap();
        assert!((c - 1.0 / 3.0).abs() < 1e-12);
        let ml = global_clustering(&g, ClusteringMode::MeanLocal).unwrap();
        assert!((ml - 7.0 / 9.0).abs() < 1e-12);
        let t = global_clustering(&g, ClusteringMode::Transitivity).unwrap();
        assert!((t - 0.6).abs() < 1e-12);
    }

    #[test]
    fn trivial_global_values() {
        assert_eq!(
            global_clustering(&triangle(), ClusteringMode::MeanLocal).unwrap(),
            1.0
        );
        assert_eq!(
            global_clustering(&triangle(), ClusteringMode::Transitivity).unwrap(),
            1.0
        );
        let (path, _) = Graph::from_edges(false, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(
            global_clustering(&path, ClusteringMode::MeanLocal).unwrap(),
            0.0
        );
        assert_eq!(
            global_clustering(&path, ClusteringMode::Transitivity).unwrap(),
            0.0
        );
    }

    #[test]
    fn no_triples_error() {
        let (g, _) = Graph::from_edges(false, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(
            global_clustering(&g, ClusteringMode::MeanLocal).unwrap_err(),
            GraphError::NoTriples
        );
    }

    #[test]
    fn unknown_node() {
        assert_eq!(
            local_clustering(&triangle(), 9).unwrap_err(),
            GraphError::NodeNotFound(9)
        );
    }

    #[test]
    fn directed_uses_projection() {
        // one-way triangle plus pendant: projection is {ab, ac, bc, cd}
        let (g, _) = Graph::from_edges(true, &[(0, 1), (2, 0), (1, 2), (2, 3)]).unwrap();
        assert!((local_clustering(&g, 2).unwrap().unwrap() - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn modes_agree_on_vertex_transitive_graphs() {
        for g in [
            triangle(),
            Graph::from_edges(false, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])
                .unwrap()
                .0,
            // K4
            Graph::from_edges(false, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
                .unwrap()
                .0,
        ] {
            match (
                global_clustering(&g, ClusteringMode::MeanLocal),
                global_clustering(&g, ClusteringMode::Transitivity),
            ) {
                (Ok(a), Ok(b)) => assert!((a - b).abs() < 1e-12),
                (Err(a), Err(b)) => assert_eq!(a, b),
                other => panic!("modes disagree: {other:?}"),
            }
        }
    }
}
