//! File formats: tab-separated inputs (edge lists, account mappings,
//! interaction logs, interest labels, friend requests) and the CSV/TSV
//! writers used by the CLI.
//!
//! Readers stream line by line; node labels are arbitrary strings remapped to
//! dense ids on ingestion, with the mapping retained for output.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use thiserror::Error;

use crate::crossnet::{InteractionEvent, InteractionLog};
use crate::graph::{BuildReport, Graph, GraphError, NodeId};
use crate::sampling::{SweepReport, SweepRow};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },
    #[error("{path}: {source}")]
    File {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl IoError {
    fn parse(path: &Path, line: usize, msg: impl Into<String>) -> Self {
        IoError::Parse {
            path: path.display().to_string(),
            line,
            msg: msg.into(),
        }
    }

    fn file(path: &Path, source: std::io::Error) -> Self {
        IoError::File {
            path: path.display().to_string(),
            source,
        }
    }
}

/// Bidirectional label <-> dense id mapping built during ingestion.
#[derive(Debug, Clone, Default)]
pub struct NodeIndex {
    labels: Vec<String>,
    ids: HashMap<String, NodeId>,
}

impl NodeIndex {
    pub fn intern(&mut self, label: &str) -> NodeId {
        if let Some(&id) = self.ids.get(label) {
            return id;
        }
        let id = self.labels.len() as NodeId;
        self.labels.push(label.to_string());
        self.ids.insert(label.to_string(), id);
        id
    }

    pub fn get(&self, label: &str) -> Option<NodeId> {
        self.ids.get(label).copied()
    }

    pub fn label(&self, id: NodeId) -> &str {
        &self.labels[id as usize]
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

fn open(path: &Path) -> Result<BufReader<File>, IoError> {
    File::open(path).map(BufReader::new).map_err(|e| IoError::file(path, e))
}

fn is_skippable(line: &str) -> bool {
    let t = line.trim();
    t.is_empty() || t.starts_with('#')
}

/// Edge list plus the label index used to densify it. Self-loop lines still
/// register their label, so `a<TAB>a` declares an isolated node.
#[derive(Debug)]
pub struct EdgeListFile {
    pub edges: Vec<(NodeId, NodeId)>,
    pub index: NodeIndex,
}

/// Read a `src<TAB>dst` edge list; `#` comments and blank lines ignored.
pub fn read_edge_list(path: &Path) -> Result<EdgeListFile, IoError> {
    read_edge_list_with(path, NodeIndex::default())
}

/// Read an edge list, interning labels into an existing index (used when
/// several files must share one id space).
pub fn read_edge_list_with(path: &Path, mut index: NodeIndex) -> Result<EdgeListFile, IoError> {
    let reader = open(path)?;
    let mut edges = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| IoError::file(path, e))?;
        if is_skippable(&line) {
            continue;
        }
        let mut fields = line.split('\t');
        let (src, dst) = match (fields.next(), fields.next()) {
            (Some(s), Some(d)) if !s.is_empty() && !d.is_empty() => (s, d),
            _ => {
                return Err(IoError::parse(
                    path,
                    lineno + 1,
                    "expected `src<TAB>dst`",
                ))
            }
        };
        edges.push((index.intern(src), index.intern(dst)));
    }
    Ok(EdgeListFile { edges, index })
}

/// Read an edge list and build the graph in one step.
pub fn load_graph(path: &Path, directed: bool) -> Result<(Graph, NodeIndex, BuildReport), IoError> {
    let EdgeListFile { edges, index } = read_edge_list(path)?;
    let (graph, report) = Graph::build(directed, index.len(), &edges)?;
    Ok((graph, index, report))
}

/// Account mapping rows `target_id<TAB>source_id`, resolved against both
/// node indexes. Unknown labels are parse errors: a mapping row must refer to
/// nodes present in the corresponding graphs.
pub fn read_mapping(
    path: &Path,
    target_index: &NodeIndex,
    source_index: &NodeIndex,
) -> Result<Vec<(NodeId, NodeId)>, IoError> {
    let reader = open(path)?;
    let mut pairs = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| IoError::file(path, e))?;
        if is_skippable(&line) {
            continue;
        }
        let mut fields = line.split('\t');
        let (t, s) = match (fields.next(), fields.next()) {
            (Some(t), Some(s)) if !t.is_empty() && !s.is_empty() => (t, s),
            _ => {
                return Err(IoError::parse(
                    path,
                    lineno + 1,
                    "expected `target_id<TAB>source_id`",
                ))
            }
        };
        let t = target_index.get(t).ok_or_else(|| {
            IoError::parse(path, lineno + 1, format!("unknown target node `{t}`"))
        })?;
        let s = source_index.get(s).ok_or_else(|| {
            IoError::parse(path, lineno + 1, format!("unknown source node `{s}`"))
        })?;
        pairs.push((t, s));
    }
    Ok(pairs)
}

/// Interaction log rows `actor<TAB>author<TAB>kind<TAB>unix_timestamp`.
pub fn read_interactions(path: &Path, target_index: &NodeIndex) -> Result<InteractionLog, IoError> {
    let reader = open(path)?;
    let mut events = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| IoError::file(path, e))?;
        if is_skippable(&line) {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 4 {
            return Err(IoError::parse(
                path,
                lineno + 1,
                "expected `actor<TAB>author<TAB>kind<TAB>unix_timestamp`",
            ));
        }
        let resolve = |label: &str| {
            target_index.get(label).ok_or_else(|| {
                IoError::parse(path, lineno + 1, format!("unknown node `{label}`"))
            })
        };
        let timestamp: i64 = fields[3].trim().parse().map_err(|_| {
            IoError::parse(path, lineno + 1, format!("bad timestamp `{}`", fields[3]))
        })?;
        events.push(InteractionEvent {
            actor: resolve(fields[0])?,
            author: resolve(fields[1])?,
            kind: fields[2].to_string(),
            timestamp,
        });
    }
    Ok(InteractionLog::new(events))
}

/// Interest rows `node<TAB>comma-separated labels`; an empty label list is a
/// node with an empty interest set.
pub fn read_interests(
    path: &Path,
    target_index: &NodeIndex,
) -> Result<HashMap<NodeId, std::collections::BTreeSet<String>>, IoError> {
    let reader = open(path)?;
    let mut out = HashMap::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| IoError::file(path, e))?;
        if is_skippable(&line) {
            continue;
        }
        let mut fields = line.splitn(2, '\t');
        let node = fields.next().unwrap_or_default();
        if node.is_empty() {
            return Err(IoError::parse(path, lineno + 1, "missing node id"));
        }
        let node = target_index.get(node).ok_or_else(|| {
            IoError::parse(path, lineno + 1, format!("unknown node `{node}`"))
        })?;
        let labels: std::collections::BTreeSet<String> = fields
            .next()
            .unwrap_or("")
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(str::to_string)
            .collect();
        out.insert(node, labels);
    }
    Ok(out)
}

/// One friend request: initiator, responder, and whether it was accepted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FriendRequest {
    pub initiator: NodeId,
    pub responder: NodeId,
    pub accepted: bool,
}

/// Friend request rows `initiator<TAB>responder<TAB>outcome` with outcome one
/// of accepted / ignored / cancelled / pending.
pub fn read_requests(path: &Path, target_index: &NodeIndex) -> Result<Vec<FriendRequest>, IoError> {
    let reader = open(path)?;
    let mut out = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| IoError::file(path, e))?;
        if is_skippable(&line) {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(IoError::parse(
                path,
                lineno + 1,
                "expected `initiator<TAB>responder<TAB>outcome`",
            ));
        }
        let resolve = |label: &str| {
            target_index.get(label).ok_or_else(|| {
                IoError::parse(path, lineno + 1, format!("unknown node `{label}`"))
            })
        };
        let accepted = match fields[2].trim() {
            "accepted" => true,
            "ignored" | "cancelled" | "pending" => false,
            other => {
                return Err(IoError::parse(
                    path,
                    lineno + 1,
                    format!("unknown outcome `{other}`"),
                ))
            }
        };
        out.push(FriendRequest {
            initiator: resolve(fields[0])?,
            responder: resolve(fields[1])?,
            accepted,
        });
    }
    Ok(out)
}

/// Induce a directed target from an undirected friendship edge list plus a
/// request log: friendships become symmetric edge pairs, every request adds
/// the initiator -> responder follow, and accepted requests add the
/// reciprocating responder -> initiator edge.
pub fn induce_directed_from_requests(
    node_count: usize,
    friendships: &[(NodeId, NodeId)],
    requests: &[FriendRequest],
) -> Result<(Graph, BuildReport), GraphError> {
    let mut edges: Vec<(NodeId, NodeId)> = Vec::with_capacity(friendships.len() * 2 + requests.len());
    for &(a, b) in friendships {
        edges.push((a, b));
        edges.push((b, a));
    }
    for r in requests {
        edges.push((r.initiator, r.responder));
        if r.accepted {
            edges.push((r.responder, r.initiator));
        }
    }
    Graph::build(true, node_count, &edges)
}

/// Write an edge list TSV using the index's labels.
pub fn write_edge_list(path: &Path, graph: &Graph, index: Option<&NodeIndex>) -> Result<(), IoError> {
    let file = File::create(path).map_err(|e| IoError::file(path, e))?;
    let mut w = BufWriter::new(file);
    let fmt = |id: NodeId| match index {
        Some(ix) => ix.label(id).to_string(),
        None => id.to_string(),
    };
    let result: std::io::Result<()> = (|| {
        for u in 0..graph.node_count() as NodeId {
            for &v in graph.out_neighbors(u) {
                if graph.is_directed() || u < v {
                    writeln!(w, "{}\t{}", fmt(u), fmt(v))?;
                }
            }
        }
        w.flush()
    })();
    result.map_err(|e| IoError::file(path, e))
}

/// Shortest-round-trip float formatting; empty cell for undefined values.
pub fn csv_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn sweep_row_csv(row: &SweepRow) -> String {
    let m = &row.measures;
    format!(
        "{},{},{},{},{},{},{},{},{},{},{}",
        row.p1,
        row.p2,
        row.p_e,
        row.replica,
        m.gcc_weak_frac,
        m.gcc_strong_frac,
        csv_opt(m.reciprocity),
        csv_opt(m.clustering_mean_local),
        csv_opt(m.clustering_transitivity),
        csv_opt(m.mean_k),
        csv_opt(m.mean_k2),
    )
}

pub const SWEEP_CSV_HEADER: &str = "p1,p2,p_e,replica,gcc_weak_frac,gcc_strong_frac,reciprocity,clustering_mean_local,clustering_transitivity,mean_k,mean_k2";

/// Per-replica sweep rows in the canonical column order.
pub fn write_sweep_csv(path: &Path, report: &SweepReport) -> Result<(), IoError> {
    let file = File::create(path).map_err(|e| IoError::file(path, e))?;
    let mut w = BufWriter::new(file);
    let result: std::io::Result<()> = (|| {
        writeln!(w, "{SWEEP_CSV_HEADER}")?;
        for row in &report.rows {
            writeln!(w, "{}", sweep_row_csv(row))?;
        }
        w.flush()
    })();
    result.map_err(|e| IoError::file(path, e))
}

/// Per-cell means and standard errors.
pub fn write_sweep_cells_csv(path: &Path, report: &SweepReport) -> Result<(), IoError> {
    let file = File::create(path).map_err(|e| IoError::file(path, e))?;
    let mut w = BufWriter::new(file);
    let agg = |a: Option<crate::sampling::Aggregate>| match a {
        Some(a) => format!("{},{},{}", a.mean, a.stderr, a.count),
        None => ",,0".to_string(),
    };
    let result: std::io::Result<()> = (|| {
        writeln!(
            w,
            "p1,p2,p_e,replicas,gcc_weak_mean,gcc_weak_stderr,gcc_weak_n,gcc_strong_mean,gcc_strong_stderr,gcc_strong_n,reciprocity_mean,reciprocity_stderr,reciprocity_n,clustering_mean_local_mean,clustering_mean_local_stderr,clustering_mean_local_n,clustering_transitivity_mean,clustering_transitivity_stderr,clustering_transitivity_n,mean_k_mean,mean_k_stderr,mean_k_n,mean_k2_mean,mean_k2_stderr,mean_k2_n"
        )?;
        for c in &report.cells {
            let parts = [
                agg(c.gcc_weak_frac),
                agg(c.gcc_strong_frac),
                agg(c.reciprocity),
                agg(c.clustering_mean_local),
                agg(c.clustering_transitivity),
                agg(c.mean_k),
                agg(c.mean_k2),
            ];
            writeln!(
                w,
                "{},{},{},{},{}",
                c.p1,
                c.p2,
                c.p_e,
                c.replicas,
                parts.join(",")
            )?;
        }
        w.flush()
    })();
    result.map_err(|e| IoError::file(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write as _;

    fn write_tmp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn edge_list_roundtrip_with_labels() {
        let f = write_tmp("# comment\nalice\tbob\nbob\tcarol\n\nalice\tcarol\n");
        let parsed = read_edge_list(f.path()).unwrap();
        assert_eq!(parsed.edges.len(), 3);
        assert_eq!(parsed.index.len(), 3);
        assert_eq!(parsed.index.get("alice"), Some(0));
        assert_eq!(parsed.index.label(2), "carol");
    }

    #[test]
    fn self_loop_line_registers_isolated_node() {
        let f = write_tmp("a\tb\nloner\tloner\n");
        let (graph, index, report) = load_graph(f.path(), true).unwrap();
        assert_eq!(index.len(), 3);
        assert_eq!(graph.node_count(), 3);
        assert_eq!(graph.edge_count(), 1);
        assert_eq!(report.self_loops_dropped, 1);
    }

    #[test]
    fn bad_edge_line_reports_line_number() {
        let f = write_tmp("a\tb\nbroken line\n");
        let err = read_edge_list(f.path()).unwrap_err();
        assert!(err.to_string().contains(":2:"), "{err}");
    }

    #[test]
    fn mapping_resolves_labels() {
        let tf = write_tmp("t1\tt2\n");
        let sf = write_tmp("s1\ts2\n");
        let (_, tix, _) = load_graph(tf.path(), true).unwrap();
        let (_, six, _) = load_graph(sf.path(), false).unwrap();
        let mf = write_tmp("t1\ts2\n");
        let pairs = read_mapping(mf.path(), &tix, &six).unwrap();
        assert_eq!(pairs, vec![(0, 1)]);
        let bad = write_tmp("t1\tnope\n");
        assert!(read_mapping(bad.path(), &tix, &six).is_err());
    }

    #[test]
    fn interactions_parse_and_sort() {
        let tf = write_tmp("a\tb\nb\tc\n");
        let (_, tix, _) = load_graph(tf.path(), true).unwrap();
        let f = write_tmp("b\tc\trepin\t200\na\tb\tlike\t100\n");
        let log = read_interactions(f.path(), &tix).unwrap();
        assert_eq!(log.len(), 2);
        assert_eq!(log.events()[0].kind, "like");
        assert_eq!(log.events()[1].timestamp, 200);
    }

    #[test]
    fn interests_parse_including_empty() {
        let tf = write_tmp("a\tb\n");
        let (_, tix, _) = load_graph(tf.path(), true).unwrap();
        let f = write_tmp("a\tfood, art\nb\t\n");
        let interests = read_interests(f.path(), &tix).unwrap();
        assert_eq!(interests[&0].len(), 2);
        assert!(interests[&0].contains("art"));
        assert!(interests[&1].is_empty());
    }

    #[test]
    fn requests_induce_directionality() {
        let reqs = vec![
            FriendRequest {
                initiator: 0,
                responder: 1,
                accepted: true,
            },
            FriendRequest {
                initiator: 2,
                responder: 0,
                accepted: false,
            },
        ];
        let (g, _) = induce_directed_from_requests(3, &[], &reqs).unwrap();
        assert!(g.has_edge(0, 1) && g.has_edge(1, 0));
        assert!(g.has_edge(2, 0) && !g.has_edge(0, 2));
    }

    #[test]
    fn write_and_reload_graph() {
        let (g, _) = Graph::from_edges(false, &[(0, 1), (1, 2)]).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("edges.tsv");
        write_edge_list(&path, &g, None).unwrap();
        let (g2, _, _) = load_graph(&path, false).unwrap();
        assert_eq!(g2.edge_count(), 2);
        assert_eq!(g2.node_count(), 3);
    }
}
