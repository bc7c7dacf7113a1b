//! Connected component decomposition.

use crate::graph::{Graph, GraphError, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComponentKind {
    /// Components of the undirected projection of a directed graph.
    Weak,
    /// Strongly connected components (directed reachability equivalence).
    Strong,
    /// Components of an undirected graph.
    Undirected,
}

impl ComponentKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ComponentKind::Weak => "weak",
            ComponentKind::Strong => "strong",
            ComponentKind::Undirected => "undirected",
        }
    }
}

/// Component sizes in descending order plus the giant-component summary.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentReport {
    pub kind: ComponentKind,
    pub component_sizes: Vec<usize>,
    pub gcc_size: usize,
    pub gcc_fraction_of_nodes: f64,
}

impl ComponentReport {
    fn from_sizes(kind: ComponentKind, mut sizes: Vec<usize>, n: usize) -> Self {
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        let gcc_size = sizes.first().copied().unwrap_or(0);
        ComponentReport {
            kind,
            component_sizes: sizes,
            gcc_size,
            gcc_fraction_of_nodes: if n == 0 { 0.0 } else { gcc_size as f64 / n as f64 },
        }
    }
}

/// Union-find with path halving and union by size.
pub struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    pub fn union(&mut self, a: u32, b: u32) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra as usize] < self.size[rb as usize] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb as usize] = ra;
        self.size[ra as usize] += self.size[rb as usize];
    }

    /// Sizes of all disjoint sets.
    pub fn component_sizes(&mut self) -> Vec<usize> {
        let n = self.parent.len();
        let mut counts = vec![0usize; n];
        for x in 0..n as u32 {
            counts[self.find(x) as usize] += 1;
        }
        counts.into_iter().filter(|&c| c > 0).collect()
    }
}

/// Exact component decomposition of `g` under the requested notion.
///
/// `Weak` applies to either directedness (projection of an undirected graph is
/// itself); `Strong` and `Undirected` require matching directedness.
pub fn connected_components(g: &Graph, kind: ComponentKind) -> Result<ComponentReport, GraphError> {
    let n = g.node_count();
    if n == 0 {
        return Err(GraphError::EmptyGraph);
    }
    match kind {
        ComponentKind::Strong if !g.is_directed() => Err(GraphError::KindMismatch),
        ComponentKind::Undirected if g.is_directed() => Err(GraphError::KindMismatch),
        ComponentKind::Weak | ComponentKind::Undirected => {
            let mut uf = UnionFind::new(n);
            for u in 0..n as NodeId {
                for &v in g.out_neighbors(u) {
                    uf.union(u, v);
                }
            }
            Ok(ComponentReport::from_sizes(kind, uf.component_sizes(), n))
        }
        ComponentKind::Strong => Ok(ComponentReport::from_sizes(kind, tarjan_scc_sizes(g), n)),
    }
}

/// Iterative Tarjan SCC; returns the size of each component.
fn tarjan_scc_sizes(g: &Graph) -> Vec<usize> {
    const UNVISITED: u32 = u32::MAX;
    let n = g.node_count();
    let mut index = vec![UNVISITED; n];
    let mut lowlink = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<u32> = Vec::new();
    let mut next_index = 0u32;
    let mut sizes = Vec::new();

    // explicit DFS frames: (node, next child position)
    let mut frames: Vec<(u32, usize)> = Vec::new();
    for root in 0..n as u32 {
        if index[root as usize] != UNVISITED {
            continue;
        }
        frames.push((root, 0));
        index[root as usize] = next_index;
        lowlink[root as usize] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root as usize] = true;

        while let Some(&mut (u, ref mut child)) = frames.last_mut() {
            let nbrs = g.out_neighbors(u);
            if *child < nbrs.len() {
                let v = nbrs[*child];
                *child += 1;
                if index[v as usize] == UNVISITED {
                    index[v as usize] = next_index;
                    lowlink[v as usize] = next_index;
                    next_index += 1;
                    stack.push(v);
                    on_stack[v as usize] = true;
                    frames.push((v, 0));
                } else if on_stack[v as usize] {
                    lowlink[u as usize] = lowlink[u as usize].min(index[v as usize]);
                }
            } else {
                frames.pop();
                if let Some(&(parent, _)) = frames.last() {
                    lowlink[parent as usize] = lowlink[parent as usize].min(lowlink[u as usize]);
                }
                if lowlink[u as usize] == index[u as usize] {
                    let mut size = 0usize;
                    loop {
                        let w = stack.pop().expect("scc stack underflow");
                        on_stack[w as usize] = false;
                        size += 1;
                        if w == u {
                            break;
                        }
                    }
                    sizes.push(size);
                }
            }
        }
    }
    sizes
}
