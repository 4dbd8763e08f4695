//! Undirected simple graph in compressed adjacency form, plus edge-list ingestion.

use std::collections::{HashMap, VecDeque};
use std::io::BufRead;

use crate::error::{Error, Result};

pub type NodeId = usize;

/// Immutable undirected simple graph with contiguous ids `0..node_count`.
///
/// Adjacency lists are sorted and free of duplicates and self-loops. Every
/// node carries the label it had in the source file (or its id rendered as a
/// string for graphs built in code).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<NodeId>,
    labels: Vec<String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Input arcs are directed; each arc becomes an undirected edge.
    pub directed: bool,
    /// Reject labels that are not non-negative integers.
    pub numeric_labels: bool,
}

impl Graph {
    /// Builds a graph on `node_count` nodes labelled by their ids. Duplicate
    /// edges and self-loops are dropped.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let labels = (0..node_count).map(|v| v.to_string()).collect();
        Self::from_labelled_edges(labels, edges)
    }

    pub fn from_labelled_edges<I>(labels: Vec<String>, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let n = labels.len();
        let mut adj: Vec<Vec<NodeId>> = vec![Vec::new(); n];
        for (u, v) in edges {
            for id in [u, v] {
                if id >= n {
                    return Err(Error::NodeOutOfRange { id, node_count: n });
                }
            }
            if u == v {
                continue;
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        let mut neighbors = Vec::new();
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            neighbors.extend_from_slice(list);
            offsets.push(neighbors.len());
        }
        Ok(Self {
            offsets,
            neighbors,
            labels,
        })
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn degree(&self, v: NodeId) -> Result<usize> {
        self.check(v)?;
        Ok(self.offsets[v + 1] - self.offsets[v])
    }

    /// Sorted neighbors of `v`. Panics if `v` is out of range.
    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.offsets.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn nodes(&self) -> std::ops::Range<NodeId> {
        0..self.node_count()
    }

    /// Every edge once, as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.nodes().flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        u < self.node_count() && self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn label(&self, v: NodeId) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Map from source label to internal id.
    pub fn label_index(&self) -> HashMap<&str, NodeId> {
        self.labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect()
    }

    pub fn check(&self, v: NodeId) -> Result<()> {
        if v < self.node_count() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange {
                id: v,
                node_count: self.node_count(),
            })
        }
    }

    /// Subgraph induced by `nodes`; local id `i` corresponds to `nodes[i]` and
    /// keeps its label.
    pub fn induced_subgraph(&self, nodes: &[NodeId]) -> Result<Graph> {
        let mut local = HashMap::with_capacity(nodes.len());
        for (i, &v) in nodes.iter().enumerate() {
            self.check(v)?;
            local.insert(v, i);
        }
        let labels = nodes.iter().map(|&v| self.labels[v].clone()).collect();
        let edges = nodes.iter().enumerate().flat_map(|(i, &v)| {
            let local = &local;
            self.neighbors(v)
                .iter()
                .filter_map(move |u| local.get(u).map(|&j| (i, j)))
                .filter(|&(i, j)| i < j)
        });
        Graph::from_labelled_edges(labels, edges.collect::<Vec<_>>())
    }

    /// Hop distances from `source`; `None` for unreachable nodes.
    pub fn bfs_distances(&self, source: NodeId) -> Result<Vec<Option<usize>>> {
        self.check(source)?;
        let mut dist = vec![None; self.node_count()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap_or(0);
            for &w in self.neighbors(u) {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        Ok(dist)
    }

    /// Renders the graph as a `label label` edge list.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (u, v) in self.edges() {
            out.push_str(&self.labels[u]);
            out.push(' ');
            out.push_str(&self.labels[v]);
            out.push('\n');
        }
        out
    }
}

/// Parses a whitespace-delimited edge list.
///
/// Lines starting with `#` or `%` are comments. The first two tokens of every
/// other line are node labels; further tokens (weights, timestamps) are
/// ignored. Ids are assigned in order of first appearance. A MatrixMarket
/// banner makes the first data line a size header, which is skipped.
pub fn parse_edge_list(text: &str, opts: ParseOptions) -> Result<Graph> {
    parse_edge_list_reader(text.as_bytes(), opts)
}

pub fn parse_edge_list_reader<R: BufRead>(reader: R, opts: ParseOptions) -> Result<Graph> {
    let mut ids: HashMap<String, NodeId> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut edges = Vec::new();
    let mut skip_size_header = false;

    let mut intern = |label: &str, line: usize| -> Result<NodeId> {
        if opts.numeric_labels && label.parse::<u64>().is_err() {
            return Err(Error::Parse {
                line,
                message: format!("non-numeric node label {label:?}"),
            });
        }
        if let Some(&id) = ids.get(label) {
            return Ok(id);
        }
        let id = labels.len();
        labels.push(label.to_owned());
        ids.insert(label.to_owned(), id);
        Ok(id)
    };

    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim();
        if idx == 0 && trimmed.starts_with("%%MatrixMarket") {
            skip_size_header = true;
            continue;
        }
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        if skip_size_header {
            skip_size_header = false;
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let (Some(a), Some(b)) = (tokens.next(), tokens.next()) else {
            return Err(Error::Parse {
                line: lineno,
                message: format!("expected two node labels, found {trimmed:?}"),
            });
        };
        let u = intern(a, lineno)?;
        let v = intern(b, lineno)?;
        edges.push((u, v));
    }

    let graph = Graph::from_labelled_edges(labels, edges)?;
    if graph.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    Ok(graph)
}
