//! Simple undirected graphs and the whitespace edge-list format.
//!
//! Nodes are dense `u32` indices. When a file is loaded the original ids are
//! kept in [`Graph::original_id`] so partitions can be reported in the
//! caller's numbering.

use std::collections::HashMap;
use std::io::{self, BufRead, BufReader, Read, Write};

use flate2::read::MultiGzDecoder;

use crate::error::GraphError;

/// Node index inside a [`Graph`].
pub type NodeId = u32;

/// Largest node count a graph may hold. Community ids run up to `2n - 1`
/// and must stay representable as [`NodeId`].
pub const MAX_NODES: usize = (u32::MAX / 2) as usize;

/// Immutable simple undirected graph in compressed adjacency form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<NodeId>,
    ids: Vec<u64>,
    edge_count: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LoadOptions {
    /// Compact ids to `0..n` in order of first appearance.
    pub renumber: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct GraphStats {
    pub n: usize,
    pub m: usize,
    pub degree_min: usize,
    pub degree_max: usize,
    pub degree_mean: f64,
}

impl Graph {
    /// Builds a graph on `n` nodes. Self-loops are dropped and parallel edges
    /// collapse to one.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        Self::build(n, edges, (0..n as u64).collect())
    }

    fn build<I>(n: usize, edges: I, ids: Vec<u64>) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        if n > MAX_NODES {
            return Err(GraphError::TooLarge { n });
        }
        let mut adj: Vec<Vec<NodeId>> = vec![Vec::new(); n];
        for (u, v) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(GraphError::NodeOutOfRange {
                    node: u.max(v) as u64,
                    n,
                });
            }
            if u == v {
                continue;
            }
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }

        let mut offsets = Vec::with_capacity(n + 1);
        let mut neighbors = Vec::new();
        offsets.push(0);
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            neighbors.extend_from_slice(list);
            offsets.push(neighbors.len());
            *list = Vec::new();
        }
        let edge_count = neighbors.len() / 2;
        if edge_count == 0 {
            return Err(GraphError::Empty);
        }
        Ok(Graph {
            offsets,
            neighbors,
            ids,
            edge_count,
        })
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Sorted neighbor list of `v`.
    #[inline]
    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        let v = v as usize;
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn degree(&self, v: NodeId) -> usize {
        let v = v as usize;
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Id the node carried in the source file (identity for generated graphs).
    pub fn original_id(&self, v: NodeId) -> u64 {
        self.ids[v as usize]
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        (0..self.node_count() as NodeId).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    pub fn stats(&self) -> GraphStats {
        let n = self.node_count();
        let (mut lo, mut hi) = (usize::MAX, 0);
        for v in 0..n as NodeId {
            let d = self.degree(v);
            lo = lo.min(d);
            hi = hi.max(d);
        }
        GraphStats {
            n,
            m: self.edge_count,
            degree_min: lo,
            degree_max: hi,
            degree_mean: 2.0 * self.edge_count as f64 / n as f64,
        }
    }
}

/// Reads an edge list. Gzip input is recognised by its magic bytes.
///
/// Every non-blank line that does not start with `#` must carry two
/// non-negative integer ids; tokens past the second are ignored. Ids on
/// self-loop lines still register the node, so `v v` declares an isolated
/// node.
pub fn load_edge_list<R: Read>(source: R, options: LoadOptions) -> Result<Graph, GraphError> {
    let mut reader = BufReader::new(source);
    let gzipped = reader.fill_buf()?.starts_with(&[0x1f, 0x8b]);
    if gzipped {
        parse_lines(BufReader::new(MultiGzDecoder::new(reader)), options)
    } else {
        parse_lines(reader, options)
    }
}

fn parse_lines<R: BufRead>(reader: R, options: LoadOptions) -> Result<Graph, GraphError> {
    let mut raw: Vec<(u64, u64)> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let mut tokens = text.split_whitespace();
        let mut next_id = || -> Result<u64, GraphError> {
            let token = tokens.next().ok_or_else(|| GraphError::Parse {
                line: idx + 1,
                message: "expected two node ids".into(),
            })?;
            token.parse::<u64>().map_err(|_| GraphError::Parse {
                line: idx + 1,
                message: format!("invalid node id {token:?}"),
            })
        };
        let u = next_id()?;
        let v = next_id()?;
        raw.push((u, v));
    }

    if options.renumber {
        let mut index: HashMap<u64, NodeId> = HashMap::new();
        let mut ids = Vec::new();
        let mut intern = |x: u64| -> Result<NodeId, GraphError> {
            if let Some(&i) = index.get(&x) {
                return Ok(i);
            }
            if ids.len() >= MAX_NODES {
                return Err(GraphError::TooLarge { n: ids.len() + 1 });
            }
            let i = ids.len() as NodeId;
            index.insert(x, i);
            ids.push(x);
            Ok(i)
        };
        let mut edges = Vec::with_capacity(raw.len());
        for (u, v) in raw {
            let a = intern(u)?;
            let b = intern(v)?;
            edges.push((a, b));
        }
        let n = ids.len();
        Graph::build(n, edges, ids)
    } else {
        let max_id = raw
            .iter()
            .map(|&(u, v)| u.max(v))
            .max()
            .ok_or(GraphError::Empty)?;
        if max_id >= MAX_NODES as u64 {
            return Err(GraphError::TooLarge {
                n: max_id as usize + 1,
            });
        }
        let n = max_id as usize + 1;
        Graph::from_edges(n, raw.into_iter().map(|(u, v)| (u as NodeId, v as NodeId)))
    }
}

/// Writes `g` in edge-list form using the original ids.
///
/// Lines are ordered so that reloading, with or without renumbering,
/// reproduces the same graph: edges are grouped by their higher endpoint and
/// a `v v` marker introduces any node that no earlier line has named.
pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> io::Result<()> {
    writeln!(out, "# nodes {} edges {}", g.node_count(), g.edge_count())?;
    for t in 0..g.node_count() as NodeId {
        let lower: Vec<NodeId> = g
            .neighbors(t)
            .iter()
            .copied()
            .take_while(|&v| v < t)
            .collect();
        if lower.is_empty() {
            // every earlier line names only nodes below t
            writeln!(out, "{0} {0}", g.original_id(t))?;
        }
        for v in lower {
            writeln!(out, "{} {}", g.original_id(v), g.original_id(t))?;
        }
    }
    Ok(())
}
