//! Undirected simple graph in compressed adjacency form, plus the
//! bounded-depth distance oracles every other module queries.
//!
//! Node ids are dense 0-based integers. Adjacency lists are sorted and
//! deduplicated; the structure is immutable after construction, so all
//! queries are safe to share across threads.

use crate::error::{Error, Result};
use std::collections::VecDeque;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

/// Compressed sparse row adjacency. `offsets.len() == node_count + 1`,
/// `adj[offsets[u]..offsets[u+1]]` is the sorted neighbor list of `u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    adj: Vec<usize>,
    edge_count: usize,
}

/// What `load_edge_list` dropped or rewrote while ingesting a file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LoadStats {
    pub self_loops_dropped: usize,
    pub duplicate_edges_dropped: usize,
    /// Set when sparse external ids were compacted to 0..N.
    pub remapped: bool,
    /// When remapped, `original_ids[new_id]` is the id from the file.
    pub original_ids: Option<Vec<usize>>,
}

#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: Graph,
    pub stats: LoadStats,
}

impl Graph {
    /// Graph with `node_count` isolated nodes.
    pub fn with_nodes(node_count: usize) -> Self {
        Graph {
            offsets: vec![0; node_count + 1],
            adj: Vec::new(),
            edge_count: 0,
        }
    }

    /// Build from an edge list. Self-loops and duplicate edges are dropped
    /// silently; use [`load_edge_list`] when the drop counts matter.
    ///
    /// Panics if an endpoint is `>= node_count`.
    pub fn from_edges(node_count: usize, edges: &[(usize, usize)]) -> Self {
        Self::build(node_count, edges.iter().copied()).0
    }

    fn build(
        node_count: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> (Self, usize, usize) {
        let mut pairs = Vec::new();
        let mut self_loops = 0usize;
        for (u, v) in edges {
            assert!(
                u < node_count && v < node_count,
                "edge ({u},{v}) out of range for {node_count} nodes"
            );
            if u == v {
                self_loops += 1;
                continue;
            }
            pairs.push(if u < v { (u, v) } else { (v, u) });
        }
        pairs.sort_unstable();
        let before = pairs.len();
        pairs.dedup();
        let duplicates = before - pairs.len();

        let mut degree = vec![0usize; node_count];
        for &(u, v) in &pairs {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = vec![0usize; node_count + 1];
        for u in 0..node_count {
            offsets[u + 1] = offsets[u] + degree[u];
        }
        let mut adj = vec![0usize; offsets[node_count]];
        let mut cursor = offsets.clone();
        for &(u, v) in &pairs {
            adj[cursor[u]] = v;
            cursor[u] += 1;
            adj[cursor[v]] = u;
            cursor[v] += 1;
        }
        // Sorted insertion order for (u,v) pairs already leaves each v-list
        // sorted, but the u-entries appended into v rows arrive in u order
        // while v-entries in u rows arrive in v order; both are ascending.
        for u in 0..node_count {
            debug_assert!(adj[offsets[u]..offsets[u + 1]].windows(2).all(|w| w[0] < w[1]));
        }
        let edge_count = pairs.len();
        (
            Graph {
                offsets,
                adj,
                edge_count,
            },
            self_loops,
            duplicates,
        )
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn degree(&self, u: usize) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }

    /// Sorted neighbor list of `u`.
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[self.offsets[u]..self.offsets[u + 1]]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Iterate undirected edges once each, as (u, v) with u < v.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.node_count())
            .flat_map(move |u| self.neighbors(u).iter().map(move |&v| (u, v)))
            .filter(|&(u, v)| u < v)
    }

    fn check_node(&self, u: usize) -> Result<()> {
        if u < self.node_count() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange {
                node: u,
                node_count: self.node_count(),
            })
        }
    }

    /// Nodes at shortest distance in `1..=k` from `u`, sorted ascending.
    /// `u` itself is excluded. Breadth-first, truncated at depth `k`; the
    /// full all-pairs table is never materialized.
    pub fn k_hop_set(&self, u: usize, k: usize) -> Result<Vec<usize>> {
        self.check_node(u)?;
        let mut dist = vec![usize::MAX; self.node_count()];
        let mut queue = VecDeque::new();
        let mut out = Vec::new();
        dist[u] = 0;
        queue.push_back(u);
        while let Some(v) = queue.pop_front() {
            if dist[v] == k {
                continue;
            }
            for &w in self.neighbors(v) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    out.push(w);
                    queue.push_back(w);
                }
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    /// True iff the shortest distance between `u` and `v` in the full graph
    /// is at most `k`. `within_k(u, u, k)` is always true.
    pub fn within_k(&self, u: usize, v: usize, k: usize) -> Result<bool> {
        self.check_node(u)?;
        self.check_node(v)?;
        if u == v {
            return Ok(true);
        }
        let mut dist = vec![usize::MAX; self.node_count()];
        let mut queue = VecDeque::new();
        dist[u] = 0;
        queue.push_back(u);
        while let Some(x) = queue.pop_front() {
            if dist[x] == k {
                continue;
            }
            for &w in self.neighbors(x) {
                if dist[w] == usize::MAX {
                    if w == v {
                        return Ok(true);
                    }
                    dist[w] = dist[x] + 1;
                    queue.push_back(w);
                }
            }
        }
        Ok(false)
    }

    /// Write the edge-list format read by [`load_edge_list`]: one `u v`
    /// line per undirected edge, ascending.
    pub fn write_edge_list<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for (u, v) in self.edges() {
            writeln!(w, "{} {}", u, v)?;
        }
        Ok(())
    }
}

/// Read an edge list: UTF-8 text, two whitespace-separated non-negative
/// integers per line, `#` lines ignored, blank lines permitted.
///
/// Ids are kept as-is (missing ids become isolated nodes) unless the id
/// space is sparse (`max_id + 1 > 2 * distinct_ids`), in which case ids
/// are compacted to `0..distinct` in ascending order and the mapping is
/// returned in the stats.
pub fn load_edge_list(path: &Path) -> Result<LoadedGraph> {
    let file = std::fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let reader = BufReader::new(file);
    let mut raw_edges: Vec<(usize, usize)> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let parse = |tok: Option<&str>| -> Result<usize> {
            let tok = tok.ok_or_else(|| Error::Parse {
                path: path.to_path_buf(),
                line: idx + 1,
                msg: "expected two integer tokens".into(),
            })?;
            tok.parse::<usize>().map_err(|_| Error::Parse {
                path: path.to_path_buf(),
                line: idx + 1,
                msg: format!("invalid node id {:?}", tok),
            })
        };
        let u = parse(tokens.next())?;
        let v = parse(tokens.next())?;
        if tokens.next().is_some() {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: idx + 1,
                msg: "expected exactly two tokens".into(),
            });
        }
        raw_edges.push((u, v));
    }

    if raw_edges.is_empty() {
        return Ok(LoadedGraph {
            graph: Graph::with_nodes(0),
            stats: LoadStats::default(),
        });
    }

    let mut ids: Vec<usize> = raw_edges.iter().flat_map(|&(u, v)| [u, v]).collect();
    ids.sort_unstable();
    ids.dedup();
    let max_id = *ids.last().unwrap();

    let mut stats = LoadStats::default();
    let node_count;
    if max_id + 1 > 2 * ids.len() {
        // Sparse id space: compact to dense 0-based ids.
        for (u, v) in raw_edges.iter_mut() {
            *u = ids.binary_search(u).unwrap();
            *v = ids.binary_search(v).unwrap();
        }
        node_count = ids.len();
        stats.remapped = true;
        stats.original_ids = Some(ids);
    } else {
        node_count = max_id + 1;
    }

    let (graph, self_loops, duplicates) = Graph::build(node_count, raw_edges);
    stats.self_loops_dropped = self_loops;
    stats.duplicate_edges_dropped = duplicates;
    Ok(LoadedGraph { graph, stats })
}
