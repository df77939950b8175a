//! Tenuity metrics for candidate subsets: k-lines, k-triangles, common
//! k-hop neighbors, and the potential-friend (PF) measure that unifies
//! them. Lower counts mean a more tenuous subset.
//!
//! All distances are shortest paths in the full host graph, never in the
//! induced subgraph.

use crate::error::{Error, Result};
use crate::graph::Graph;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// A validated candidate subset T together with the hop bound k used for
/// every distance test. Nodes are stored sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TenuousSubset {
    nodes: Vec<usize>,
    k: usize,
}

impl TenuousSubset {
    pub fn new(g: &Graph, nodes: impl IntoIterator<Item = usize>, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidConfig("hop bound k must be >= 1".into()));
        }
        let mut nodes: Vec<usize> = nodes.into_iter().collect();
        nodes.sort_unstable();
        nodes.dedup();
        if nodes.is_empty() {
            return Err(Error::InvalidSubset("subset must contain at least one node".into()));
        }
        if let Some(&bad) = nodes.iter().find(|&&u| u >= g.node_count()) {
            return Err(Error::NodeOutOfRange {
                node: bad,
                node_count: g.node_count(),
            });
        }
        Ok(TenuousSubset { nodes, k })
    }

    /// Sorted, deduplicated node ids.
    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// The PF structure: qualifying pairs and distinct common-neighbor
/// triples, kept separately so both cardinalities stay inspectable.
/// Pairs are (u,v) with u < v; triples are sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PfSet {
    pub pairs: BTreeSet<(usize, usize)>,
    pub triples: BTreeSet<(usize, usize, usize)>,
}

impl PfSet {
    pub fn count(&self) -> usize {
        self.pairs.len() + self.triples.len()
    }
}

/// Flat summary of all tenuity counts for one subset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TenuityReport {
    pub k_line_count: usize,
    pub k_triangle_count: usize,
    pub pf_count: usize,
    pub pf_pairs: usize,
    pub pf_triples: usize,
    pub subset_size: usize,
}

/// Common k-hop neighbors of u and v: every w in V with d(u,w) <= k and
/// d(v,w) <= k, excluding u and v themselves. w ranges over the whole
/// graph, not just any subset under evaluation.
pub fn common_neighbors_k(g: &Graph, u: usize, v: usize, k: usize) -> Result<Vec<usize>> {
    if u == v {
        return Err(Error::InvalidSubset(format!(
            "common neighbors need two distinct nodes, got {u} twice"
        )));
    }
    let nu = g.k_hop_set(u, k)?;
    let nv = g.k_hop_set(v, k)?;
    Ok(intersect_sorted(&nu, &nv)
        .into_iter()
        .filter(|&w| w != u && w != v)
        .collect())
}

fn intersect_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
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

fn sorted_triple(a: usize, b: usize, c: usize) -> (usize, usize, usize) {
    let mut t = [a, b, c];
    t.sort_unstable();
    (t[0], t[1], t[2])
}

/// k-hop neighborhoods for every subset node, indexed like `t.nodes()`.
fn subset_hops(g: &Graph, t: &TenuousSubset) -> Result<Vec<Vec<usize>>> {
    t.nodes().iter().map(|&u| g.k_hop_set(u, t.k())).collect()
}

/// The potential-friend set of T: every unordered pair {u,v} in T with
/// d(u,v) <= k, plus every distinct triple {u,v,w} where {u,v} is any
/// pair in T (no distance condition) and w is a common k-hop neighbor.
/// A triple reachable from several generating pairs appears once.
pub fn pf_set(g: &Graph, t: &TenuousSubset) -> Result<PfSet> {
    let hops = subset_hops(g, t)?;
    let nodes = t.nodes();
    let mut pairs = BTreeSet::new();
    let mut triples = BTreeSet::new();
    for i in 0..nodes.len() {
        for j in (i + 1)..nodes.len() {
            let (u, v) = (nodes[i], nodes[j]);
            if hops[i].binary_search(&v).is_ok() {
                pairs.insert((u, v));
            }
            for w in intersect_sorted(&hops[i], &hops[j]) {
                if w != u && w != v {
                    triples.insert(sorted_triple(u, v, w));
                }
            }
        }
    }
    Ok(PfSet { pairs, triples })
}

/// Number of unordered pairs in T at shortest distance <= k.
pub fn count_k_lines(g: &Graph, t: &TenuousSubset) -> Result<usize> {
    let hops = subset_hops(g, t)?;
    let nodes = t.nodes();
    let mut count = 0;
    for i in 0..nodes.len() {
        for j in (i + 1)..nodes.len() {
            if hops[i].binary_search(&nodes[j]).is_ok() {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Number of unordered triples in T with all three pairwise distances <= k.
pub fn count_k_triangles(g: &Graph, t: &TenuousSubset) -> Result<usize> {
    let hops = subset_hops(g, t)?;
    let nodes = t.nodes();
    let within = |i: usize, j: usize| hops[i].binary_search(&nodes[j]).is_ok();
    let mut count = 0;
    for i in 0..nodes.len() {
        for j in (i + 1)..nodes.len() {
            if !within(i, j) {
                continue;
            }
            for l in (j + 1)..nodes.len() {
                if within(i, l) && within(j, l) {
                    count += 1;
                }
            }
        }
    }
    Ok(count)
}

/// All counts for one subset in a single pass.
pub fn report(g: &Graph, t: &TenuousSubset) -> Result<TenuityReport> {
    let pf = pf_set(g, t)?;
    Ok(TenuityReport {
        k_line_count: count_k_lines(g, t)?,
        k_triangle_count: count_k_triangles(g, t)?,
        pf_count: pf.count(),
        pf_pairs: pf.pairs.len(),
        pf_triples: pf.triples.len(),
        subset_size: t.len(),
    })
}
