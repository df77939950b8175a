// Brute-force reference implementations used to cross-check the library.
// Everything here works from the definitions directly (BFS distance tables,
// exhaustive enumeration, linear scans) and shares no code with the crate.
#![allow(dead_code)]

use std::collections::BTreeSet;

/// Adjacency sets built straight from an edge list, self-loops and
/// duplicates ignored, so the oracle cannot inherit library quirks.
pub fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<BTreeSet<usize>> {
    let mut adj = vec![BTreeSet::new(); n];
    for &(u, v) in edges {
        if u == v {
            continue;
        }
        adj[u].insert(v);
        adj[v].insert(u);
    }
    adj
}

/// All-pairs hop distances by BFS from every node. `None` means unreachable.
pub fn distance_table(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<Option<usize>>> {
    let adj = adjacency(n, edges);
    let mut table = vec![vec![None; n]; n];
    for s in 0..n {
        let dist = &mut table[s];
        dist[s] = Some(0);
        let mut frontier = vec![s];
        let mut depth = 0;
        while !frontier.is_empty() {
            depth += 1;
            let mut next = Vec::new();
            for &u in &frontier {
                for &v in &adj[u] {
                    if dist[v].is_none() {
                        dist[v] = Some(depth);
                        next.push(v);
                    }
                }
            }
            frontier = next;
        }
    }
    table
}

fn within(dist: &[Vec<Option<usize>>], u: usize, v: usize, k: usize) -> bool {
    matches!(dist[u][v], Some(d) if d <= k)
}

/// Pairs {u, v} of subset nodes with hop distance at most k.
pub fn brute_k_lines(dist: &[Vec<Option<usize>>], subset: &[usize], k: usize) -> usize {
    let mut count = 0;
    for (i, &u) in subset.iter().enumerate() {
        for &v in &subset[i + 1..] {
            if within(dist, u, v, k) {
                count += 1;
            }
        }
    }
    count
}

/// Triples {u, v, w} of subset nodes with all three pairwise distances at most k.
pub fn brute_k_triangles(dist: &[Vec<Option<usize>>], subset: &[usize], k: usize) -> usize {
    let mut count = 0;
    for (i, &u) in subset.iter().enumerate() {
        for (j, &v) in subset.iter().enumerate().skip(i + 1) {
            for &w in &subset[j + 1..] {
                if within(dist, u, v, k) && within(dist, u, w, k) && within(dist, v, w, k) {
                    count += 1;
                }
            }
        }
    }
    count
}

/// Common k-hop neighbors of u and v over the whole node set, endpoints excluded.
pub fn brute_common_neighbors(
    dist: &[Vec<Option<usize>>],
    u: usize,
    v: usize,
    k: usize,
) -> Vec<usize> {
    (0..dist.len())
        .filter(|&w| w != u && w != v && within(dist, w, u, k) && within(dist, w, v, k))
        .collect()
}

/// Potential-friend count: close subset pairs plus distinct witness triples.
/// Every unordered subset pair contributes its common k-hop neighbors as
/// {u, v, w} triples whether or not the pair itself is close; triples are
/// deduplicated as node sets before counting.
pub fn brute_pf_count(dist: &[Vec<Option<usize>>], subset: &[usize], k: usize) -> usize {
    let pairs = brute_k_lines(dist, subset, k);
    let mut triples = BTreeSet::new();
    for (i, &u) in subset.iter().enumerate() {
        for &v in &subset[i + 1..] {
            for w in brute_common_neighbors(dist, u, v, k) {
                let mut t = [u, v, w];
                t.sort_unstable();
                triples.insert(t);
            }
        }
    }
    pairs + triples.len()
}

/// The same triple set as `brute_pf_count`, exposed for membership checks.
pub fn brute_pf_triples(
    dist: &[Vec<Option<usize>>],
    subset: &[usize],
    k: usize,
) -> BTreeSet<[usize; 3]> {
    let mut triples = BTreeSet::new();
    for (i, &u) in subset.iter().enumerate() {
        for &v in &subset[i + 1..] {
            for w in brute_common_neighbors(dist, u, v, k) {
                let mut t = [u, v, w];
                t.sort_unstable();
                triples.insert(t);
            }
        }
    }
    triples
}

/// Per-edge shared-neighbor counts as a dense matrix; zero off the edge set.
pub fn brute_motif_counts(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let adj = adjacency(n, edges);
    let mut m = vec![vec![0usize; n]; n];
    for u in 0..n {
        for &v in &adj[u] {
            m[u][v] = adj[u].intersection(&adj[v]).count();
        }
    }
    m
}

/// Erdos-Renyi style graph used by the randomized suites. Simple LCG so the
/// oracle side carries its own reproducible randomness.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next_u64(&mut self) -> u64 {
        // Knuth MMIX constants
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        self.0
    }

    pub fn unit_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn below(&mut self, bound: usize) -> usize {
        (self.next_u64() % bound as u64) as usize
    }
}

pub fn random_graph(n: usize, edge_prob: f64, rng: &mut Lcg) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.unit_f64() < edge_prob {
                edges.push((u, v));
            }
        }
    }
    edges
}

pub fn random_subset(n: usize, size: usize, rng: &mut Lcg) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n).collect();
    for i in 0..size.min(n) {
        let j = i + rng.below(pool.len() - i);
        pool.swap(i, j);
    }
    let mut out = pool[..size.min(n)].to_vec();
    out.sort_unstable();
    out
}

/// Linear-scan range count: points within eps of u, u itself included.
/// Distances accumulate coordinate order, matching the square-sum convention.
pub fn brute_range_count(points: &[Vec<f64>], u: usize, eps: f64) -> usize {
    let limit = eps * eps;
    points
        .iter()
        .filter(|p| {
            let mut acc = 0.0;
            for (a, b) in p.iter().zip(&points[u]) {
                let d = a - b;
                acc += d * d;
            }
            acc <= limit
        })
        .count()
}
