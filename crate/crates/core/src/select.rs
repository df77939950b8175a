//! Subset selection in embedding space: exact Euclidean range queries
//! over a kd-tree, neighborhood densities, greedy picking by density
//! rank, and a binary search on the separation radius to honor a size
//! constraint.
//!
//! Every distance test in this module, including the tree's pruning
//! bounds, goes through one predicate: the dimension-order float sum of
//! squared deltas compared against eps*eps. Tree results are therefore
//! bit-identical to a linear scan using the same predicate.

use crate::error::{Error, Result};
use ndarray::{Array2, ArrayView1};
use serde::{Deserialize, Serialize};

const LEAF_SIZE: usize = 16;

/// Squared Euclidean distance accumulated in dimension order. The
/// canonical form shared by queries, pruning bounds, and test oracles.
pub fn dist_sq(a: ArrayView1<f64>, b: ArrayView1<f64>) -> f64 {
    let mut total = 0.0;
    for (x, y) in a.iter().zip(b.iter()) {
        let d = x - y;
        total += d * d;
    }
    total
}

#[derive(Debug, Clone)]
struct TreeNode {
    lo: usize,
    hi: usize,
    bbox_min: Vec<f64>,
    bbox_max: Vec<f64>,
    /// Indices into the node arena; None for leaves.
    children: Option<(usize, usize)>,
}

/// Exact range-query index over a fixed point set. Balanced kd-tree
/// splitting on the widest bounding-box dimension at the median.
#[derive(Debug, Clone)]
pub struct SpatialIndex {
    points: Array2<f64>,
    /// Point ids arranged so each tree node owns a contiguous slice.
    order: Vec<usize>,
    nodes: Vec<TreeNode>,
}

impl SpatialIndex {
    pub fn new(points: Array2<f64>) -> Result<Self> {
        if points.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig(
                "spatial index requires finite coordinates".into(),
            ));
        }
        let n = points.nrows();
        let mut order: Vec<usize> = (0..n).collect();
        let mut nodes = Vec::new();
        if n > 0 {
            build_node(&points, &mut order, 0, n, &mut nodes);
        }
        Ok(SpatialIndex { points, order, nodes })
    }

    pub fn len(&self) -> usize {
        self.points.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.points.nrows() == 0
    }

    pub fn dim(&self) -> usize {
        self.points.ncols()
    }

    pub fn point(&self, u: usize) -> ArrayView1<'_, f64> {
        self.points.row(u)
    }

    fn check_point(&self, u: usize) -> Result<()> {
        if u < self.len() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange {
                node: u,
                node_count: self.len(),
            })
        }
    }

    fn check_eps(eps: f64) -> Result<()> {
        if eps.is_finite() && eps >= 0.0 {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!("epsilon must be finite and >= 0, got {eps}")))
        }
    }

    /// Visit every point id within eps of q, the query point included if
    /// it belongs to the set.
    fn for_each_in_range(&self, q: ArrayView1<f64>, eps: f64, visit: &mut dyn FnMut(usize)) {
        if self.nodes.is_empty() {
            return;
        }
        let limit = eps * eps;
        let mut stack = vec![0usize];
        while let Some(idx) = stack.pop() {
            let node = &self.nodes[idx];
            let min_d = min_dist_sq(q, &node.bbox_min, &node.bbox_max);
            if min_d > limit {
                continue;
            }
            let max_d = max_dist_sq(q, &node.bbox_min, &node.bbox_max);
            if max_d <= limit {
                for &id in &self.order[node.lo..node.hi] {
                    visit(id);
                }
                continue;
            }
            match node.children {
                Some((l, r)) => {
                    stack.push(l);
                    stack.push(r);
                }
                None => {
                    for &id in &self.order[node.lo..node.hi] {
                        if dist_sq(q, self.points.row(id)) <= limit {
                            visit(id);
                        }
                    }
                }
            }
        }
    }

    /// Like `for_each_in_range` but only counting, so fully contained
    /// subtrees contribute their size without being walked.
    fn count_in_range(&self, q: ArrayView1<f64>, eps: f64) -> usize {
        if self.nodes.is_empty() {
            return 0;
        }
        let limit = eps * eps;
        let mut count = 0;
        let mut stack = vec![0usize];
        while let Some(idx) = stack.pop() {
            let node = &self.nodes[idx];
            let min_d = min_dist_sq(q, &node.bbox_min, &node.bbox_max);
            if min_d > limit {
                continue;
            }
            let max_d = max_dist_sq(q, &node.bbox_min, &node.bbox_max);
            if max_d <= limit {
                count += node.hi - node.lo;
                continue;
            }
            match node.children {
                Some((l, r)) => {
                    stack.push(l);
                    stack.push(r);
                }
                None => {
                    for &id in &self.order[node.lo..node.hi] {
                        if dist_sq(q, self.points.row(id)) <= limit {
                            count += 1;
                        }
                    }
                }
            }
        }
        count
    }

    /// All other points within eps of point u, sorted ascending.
    pub fn eps_neighbors(&self, u: usize, eps: f64) -> Result<Vec<usize>> {
        self.check_point(u)?;
        Self::check_eps(eps)?;
        let mut out = Vec::new();
        self.for_each_in_range(self.points.row(u), eps, &mut |id| {
            if id != u {
                out.push(id);
            }
        });
        out.sort_unstable();
        Ok(out)
    }

    /// |eps_neighbors(u, eps)| without materializing the list.
    pub fn neighbor_count(&self, u: usize, eps: f64) -> Result<usize> {
        self.check_point(u)?;
        Self::check_eps(eps)?;
        // the raw count always includes u itself at distance zero
        Ok(self.count_in_range(self.points.row(u), eps) - 1)
    }

    /// Neighborhood density: fraction of the whole point set lying
    /// within eps of u, u excluded.
    pub fn density(&self, u: usize, eps: f64) -> Result<f64> {
        Ok(self.neighbor_count(u, eps)? as f64 / self.len() as f64)
    }

    /// Range counts for every point at once, each count including the
    /// point itself. Equals count_in_range per point bit for bit (same
    /// predicate, same box bounds), but the traversal walks the tree
    /// against itself so the pair work is shared: node pairs entirely
    /// within or beyond the radius are settled by their subtree sizes
    /// without touching points.
    fn count_all_in_range(&self, eps: f64) -> Vec<usize> {
        // the leaf kernels dominate this walk, so common widths get a
        // monomorphized copy with an unrolled distance loop
        match self.dim() {
            1 => self.count_all_with(eps, dist_sq_fixed::<1>),
            2 => self.count_all_with(eps, dist_sq_fixed::<2>),
            3 => self.count_all_with(eps, dist_sq_fixed::<3>),
            4 => self.count_all_with(eps, dist_sq_fixed::<4>),
            8 => self.count_all_with(eps, dist_sq_fixed::<8>),
            16 => self.count_all_with(eps, dist_sq_fixed::<16>),
            _ => self.count_all_with(eps, dist_sq_flat),
        }
    }

    fn count_all_with<F: Fn(&[f64], &[f64]) -> f64>(&self, eps: f64, dist: F) -> Vec<usize> {
        let n = self.len();
        if self.nodes.is_empty() {
            return Vec::new();
        }
        let dim = self.dim();
        let limit = eps * eps;
        // points gathered into tree order so leaf blocks are contiguous
        let mut pts = vec![0.0f64; n * dim];
        for (pos, &id) in self.order.iter().enumerate() {
            pts[pos * dim..(pos + 1) * dim]
                .copy_from_slice(self.points.row(id).to_slice().expect("row-major points"));
        }
        // counts by tree position; pending adds cover whole subtrees
        let mut counts = vec![0usize; n];
        let mut pending = vec![0usize; self.nodes.len()];
        let mut stack: Vec<(usize, usize)> = vec![(0, 0)];
        while let Some((a, b)) = stack.pop() {
            let na = &self.nodes[a];
            let nb = &self.nodes[b];
            if a == b {
                if max_dist_sq_boxes(&na.bbox_min, &na.bbox_max, &na.bbox_min, &na.bbox_max)
                    <= limit
                {
                    pending[a] += na.hi - na.lo;
                    continue;
                }
                match na.children {
                    Some((l, r)) => {
                        stack.push((l, l));
                        stack.push((r, r));
                        stack.push((l, r));
                    }
                    None => {
                        for i in na.lo..na.hi {
                            // own distance is zero, always in range
                            counts[i] += 1;
                            let pi = &pts[i * dim..(i + 1) * dim];
                            for j in (i + 1)..na.hi {
                                let pj = &pts[j * dim..(j + 1) * dim];
                                if dist(pi, pj) <= limit {
                                    counts[i] += 1;
                                    counts[j] += 1;
                                }
                            }
                        }
                    }
                }
                continue;
            }
            if min_dist_sq_boxes(&na.bbox_min, &na.bbox_max, &nb.bbox_min, &nb.bbox_max) > limit {
                continue;
            }
            if max_dist_sq_boxes(&na.bbox_min, &na.bbox_max, &nb.bbox_min, &nb.bbox_max) <= limit {
                pending[a] += nb.hi - nb.lo;
                pending[b] += na.hi - na.lo;
                continue;
            }
            match (na.children, nb.children) {
                (None, None) => {
                    for i in na.lo..na.hi {
                        let pi = &pts[i * dim..(i + 1) * dim];
                        for j in nb.lo..nb.hi {
                            let pj = &pts[j * dim..(j + 1) * dim];
                            if dist(pi, pj) <= limit {
                                counts[i] += 1;
                                counts[j] += 1;
                            }
                        }
                    }
                }
                (Some((l, r)), None) => {
                    stack.push((l, b));
                    stack.push((r, b));
                }
                (None, Some((l, r))) => {
                    stack.push((a, l));
                    stack.push((a, r));
                }
                (Some((al, ar)), Some((bl, br))) => {
                    // split the larger side to keep box pairs balanced
                    if na.hi - na.lo >= nb.hi - nb.lo {
                        stack.push((al, b));
                        stack.push((ar, b));
                    } else {
                        stack.push((a, bl));
                        stack.push((a, br));
                    }
                }
            }
        }
        // parents precede children in the arena, so one forward pass
        // pushes every pending add down to the leaves
        for idx in 0..self.nodes.len() {
            let add = pending[idx];
            if add == 0 {
                continue;
            }
            match self.nodes[idx].children {
                Some((l, r)) => {
                    pending[l] += add;
                    pending[r] += add;
                }
                None => {
                    let node = &self.nodes[idx];
                    for c in &mut counts[node.lo..node.hi] {
                        *c += add;
                    }
                }
            }
        }
        let mut out = vec![0usize; n];
        for (pos, &id) in self.order.iter().enumerate() {
            out[id] = counts[pos];
        }
        out
    }
}

/// dist_sq on raw coordinate slices; the identical op sequence.
fn dist_sq_flat(a: &[f64], b: &[f64]) -> f64 {
    let mut total = 0.0;
    for (x, y) in a.iter().zip(b.iter()) {
        let d = x - y;
        total += d * d;
    }
    total
}

/// dist_sq_flat for a width known at compile time. The loop keeps the
/// same operation order, so results stay bitwise identical; the fixed
/// bound just lets the compiler unroll it and drop the bounds checks.
#[inline(always)]
fn dist_sq_fixed<const D: usize>(a: &[f64], b: &[f64]) -> f64 {
    let a: &[f64; D] = a.try_into().expect("kernel width matches point width");
    let b: &[f64; D] = b.try_into().expect("kernel width matches point width");
    let mut total = 0.0;
    for d in 0..D {
        let delta = a[d] - b[d];
        total += delta * delta;
    }
    total
}

/// Lower bound on the squared distance between any two points of two
/// boxes; per-dimension gaps summed in dimension order, conservative
/// under IEEE monotone rounding exactly like the point-to-box bound.
fn min_dist_sq_boxes(amin: &[f64], amax: &[f64], bmin: &[f64], bmax: &[f64]) -> f64 {
    let mut total = 0.0;
    for d in 0..amin.len() {
        let gap = if amax[d] < bmin[d] {
            bmin[d] - amax[d]
        } else if bmax[d] < amin[d] {
            amin[d] - bmax[d]
        } else {
            0.0
        };
        total += gap * gap;
    }
    total
}

/// Upper bound on the squared distance between any two points of two
/// boxes; never below the true per-pair value.
fn max_dist_sq_boxes(amin: &[f64], amax: &[f64], bmin: &[f64], bmax: &[f64]) -> f64 {
    let mut total = 0.0;
    for d in 0..amin.len() {
        let span = (amax[d] - bmin[d]).max(bmax[d] - amin[d]);
        total += span * span;
    }
    total
}

fn build_node(
    points: &Array2<f64>,
    order: &mut [usize],
    lo: usize,
    hi: usize,
    nodes: &mut Vec<TreeNode>,
) -> usize {
    let dim = points.ncols();
    let mut bbox_min = vec![f64::INFINITY; dim];
    let mut bbox_max = vec![f64::NEG_INFINITY; dim];
    for &id in &order[lo..hi] {
        for (d, &v) in points.row(id).iter().enumerate() {
            bbox_min[d] = bbox_min[d].min(v);
            bbox_max[d] = bbox_max[d].max(v);
        }
    }
    let this = nodes.len();
    nodes.push(TreeNode {
        lo,
        hi,
        bbox_min,
        bbox_max,
        children: None,
    });
    if hi - lo <= LEAF_SIZE || dim == 0 {
        return this;
    }
    let node = &nodes[this];
    let split_dim = (0..dim)
        .max_by(|&a, &b| {
            let sa = node.bbox_max[a] - node.bbox_min[a];
            let sb = node.bbox_max[b] - node.bbox_min[b];
            sa.partial_cmp(&sb).unwrap()
        })
        .unwrap();
    if nodes[this].bbox_max[split_dim] == nodes[this].bbox_min[split_dim] {
        // all points coincide on every dimension; keep as a leaf
        return this;
    }
    let mid = (hi - lo) / 2;
    order[lo..hi].select_nth_unstable_by(mid, |&a, &b| {
        points[[a, split_dim]]
            .partial_cmp(&points[[b, split_dim]])
            .unwrap()
            .then(a.cmp(&b))
    });
    let left = build_node(points, order, lo, lo + mid, nodes);
    let right = build_node(points, order, lo + mid, hi, nodes);
    nodes[this].children = Some((left, right));
    this
}

/// Smallest possible squared distance from q to any point in the box,
/// accumulated in dimension order. Never exceeds the true per-point
/// value under IEEE monotone rounding, so pruning with it is safe.
fn min_dist_sq(q: ArrayView1<f64>, bbox_min: &[f64], bbox_max: &[f64]) -> f64 {
    let mut total = 0.0;
    for (d, &x) in q.iter().enumerate() {
        let delta = if x < bbox_min[d] {
            bbox_min[d] - x
        } else if x > bbox_max[d] {
            x - bbox_max[d]
        } else {
            0.0
        };
        total += delta * delta;
    }
    total
}

/// Largest possible squared distance from q to any point in the box;
/// never below the true per-point value.
fn max_dist_sq(q: ArrayView1<f64>, bbox_min: &[f64], bbox_max: &[f64]) -> f64 {
    let mut total = 0.0;
    for (d, &x) in q.iter().enumerate() {
        let delta = (x - bbox_min[d]).abs().max((x - bbox_max[d]).abs());
        total += delta * delta;
    }
    total
}

/// Number of unordered pairs in `t` at distance <= eps: the vector-space
/// tenuity score. Zero means fully separated.
pub fn count_eps_pairs(idx: &SpatialIndex, t: &[usize], eps: f64) -> Result<usize> {
    SpatialIndex::check_eps(eps)?;
    let mut member = vec![false; idx.len()];
    for &u in t {
        idx.check_point(u)?;
        member[u] = true;
    }
    let mut count = 0;
    for &u in t {
        idx.for_each_in_range(idx.point(u), eps, &mut |v| {
            if v > u && member[v] {
                count += 1;
            }
        });
    }
    Ok(count)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Strategy {
    #[serde(rename = "max")]
    MaxDensity,
    #[serde(rename = "min")]
    MinDensity,
}

impl Strategy {
    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::MaxDensity => "max",
            Strategy::MinDensity => "min",
        }
    }
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "max" => Ok(Strategy::MaxDensity),
            "min" => Ok(Strategy::MinDensity),
            other => Err(Error::InvalidConfig(format!(
                "unknown strategy {other:?}, expected \"max\" or \"min\""
            ))),
        }
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Separation radius: fixed, or searched automatically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EpsilonSpec {
    Auto,
    Fixed(f64),
}

impl std::str::FromStr for EpsilonSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "auto" {
            return Ok(EpsilonSpec::Auto);
        }
        match s.parse::<f64>() {
            Ok(v) if v.is_finite() && v > 0.0 => Ok(EpsilonSpec::Fixed(v)),
            _ => Err(Error::InvalidConfig(format!(
                "epsilon must be \"auto\" or a positive real, got {s:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectConfig {
    /// Minimum subset size K.
    pub size_k: usize,
    pub strategy: Strategy,
    pub epsilon: EpsilonSpec,
    pub binary_search_iters: usize,
}

impl Default for SelectConfig {
    fn default() -> Self {
        SelectConfig {
            size_k: 1,
            strategy: Strategy::MaxDensity,
            epsilon: EpsilonSpec::Auto,
            binary_search_iters: 30,
        }
    }
}

impl SelectConfig {
    pub fn validate(&self) -> Result<()> {
        if self.size_k == 0 {
            return Err(Error::InvalidConfig("size constraint K must be >= 1".into()));
        }
        if let EpsilonSpec::Fixed(e) = self.epsilon {
            if !(e.is_finite() && e > 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "fixed epsilon must be finite and > 0, got {e}"
                )));
            }
        }
        if self.binary_search_iters == 0 {
            return Err(Error::InvalidConfig("binary_search_iters must be >= 1".into()));
        }
        Ok(())
    }
}

/// A selection result: the chosen nodes and the radius that produced
/// them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectedSubset {
    pub epsilon: f64,
    pub strategy: Strategy,
    pub nodes: Vec<usize>,
}

/// One greedy sweep at a fixed radius: rank all points by neighbor
/// count (highest first for max-density, lowest first for min-density,
/// ties to the lower id), then repeatedly take the best unvisited point
/// and knock out its eps-neighborhood. Counts are computed once against
/// the full point set and never refreshed after removals.
pub fn greedy_select(idx: &SpatialIndex, eps: f64, strategy: Strategy) -> Result<Vec<usize>> {
    SpatialIndex::check_eps(eps)?;
    Ok(greedy_sweep(idx, eps, strategy, None))
}

/// The sweep behind greedy_select. `stop_after` cuts the sweep once
/// that many picks exist: picks only ever accumulate, so reaching the
/// cut proves the full sweep would end at least this large. Used by the
/// radius search, which needs feasibility rather than the full subset.
fn greedy_sweep(
    idx: &SpatialIndex,
    eps: f64,
    strategy: Strategy,
    stop_after: Option<usize>,
) -> Vec<usize> {
    let n = idx.len();
    let counts = idx.count_all_in_range(eps);
    let mut ranked: Vec<usize> = (0..n).collect();
    match strategy {
        Strategy::MaxDensity => {
            ranked.sort_unstable_by_key(|&u| (std::cmp::Reverse(counts[u]), u))
        }
        Strategy::MinDensity => ranked.sort_unstable_by_key(|&u| (counts[u], u)),
    }
    let mut visited = vec![false; n];
    let mut picked = Vec::new();
    for &u in &ranked {
        if visited[u] {
            continue;
        }
        visited[u] = true;
        picked.push(u);
        if stop_after.is_some_and(|k| picked.len() >= k) {
            break;
        }
        idx.for_each_in_range(idx.point(u), eps, &mut |v| {
            visited[v] = true;
        });
    }
    picked.sort_unstable();
    picked
}

/// Upper bound for the radius search: twice the maximum pairwise
/// distance over a deterministic sample of at most 1000 points.
fn radius_upper_bound(idx: &SpatialIndex) -> f64 {
    let n = idx.len();
    if n < 2 {
        return 0.0;
    }
    let stride = n.div_ceil(1000);
    let sample: Vec<usize> = (0..n).step_by(stride).collect();
    let mut max_sq = 0.0f64;
    for (i, &a) in sample.iter().enumerate() {
        for &b in &sample[i + 1..] {
            max_sq = max_sq.max(dist_sq(idx.point(a), idx.point(b)));
        }
    }
    2.0 * max_sq.sqrt()
}

/// Find a subset of at least `size_k` nodes, maximizing the separation
/// radius. Fixed-epsilon configs run one greedy sweep; auto configs
/// bisect on the radius, keeping the largest feasible result seen.
pub fn find_subset(idx: &SpatialIndex, cfg: &SelectConfig) -> Result<(Vec<usize>, f64)> {
    cfg.validate()?;
    let n = idx.len();
    if cfg.size_k > n {
        return Err(Error::InfeasibleSize {
            requested: cfg.size_k,
            available: n,
        });
    }

    if let EpsilonSpec::Fixed(eps) = cfg.epsilon {
        let t = greedy_select(idx, eps, cfg.strategy)?;
        if t.len() < cfg.size_k {
            return Err(Error::InfeasibleSize {
                requested: cfg.size_k,
                available: t.len(),
            });
        }
        return Ok((t, eps));
    }

    if cfg.size_k == n {
        // only a zero radius can keep every point
        let t = greedy_select(idx, 0.0, cfg.strategy)?;
        if t.len() < cfg.size_k {
            return Err(Error::InfeasibleSize {
                requested: cfg.size_k,
                available: t.len(),
            });
        }
        return Ok((t, 0.0));
    }

    let at_zero = greedy_sweep(idx, 0.0, cfg.strategy, Some(cfg.size_k)).len();
    if at_zero < cfg.size_k {
        // coincident points already collapse below K at radius zero;
        // the cut sweep ran to completion, so its size is the true one
        return Err(Error::InfeasibleSize {
            requested: cfg.size_k,
            available: at_zero,
        });
    }
    let mut best_eps = 0.0f64;
    let mut lo = 0.0f64;
    let mut hi = radius_upper_bound(idx);
    for _ in 0..cfg.binary_search_iters {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if greedy_sweep(idx, mid, cfg.strategy, Some(cfg.size_k)).len() >= cfg.size_k {
            if mid > best_eps {
                best_eps = mid;
            }
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // one full sweep materializes the subset the probes vouched for
    let t = greedy_select(idx, best_eps, cfg.strategy)?;
    Ok((t, best_eps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    // proptest's prelude also exports a `Strategy` trait
    use super::Strategy;

    fn line_points(n: usize) -> SpatialIndex {
        let pts = Array2::from_shape_fn((n, 1), |(i, _)| i as f64);
        SpatialIndex::new(pts).unwrap()
    }

    fn random_points(n: usize, dim: usize, seed: u64) -> SpatialIndex {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts = Array2::from_shape_fn((n, dim), |_| rng.random_range(-1.0..1.0));
        SpatialIndex::new(pts).unwrap()
    }

    /// Linear-scan oracle using the canonical predicate.
    fn scan_neighbors(idx: &SpatialIndex, u: usize, eps: f64) -> Vec<usize> {
        let limit = eps * eps;
        (0..idx.len())
            .filter(|&v| v != u && dist_sq(idx.point(u), idx.point(v)) <= limit)
            .collect()
    }

    #[test]
    fn rejects_non_finite_points() {
        let pts = array![[0.0, f64::NAN]];
        assert!(SpatialIndex::new(pts).is_err());
    }

    #[test]
    fn zero_eps_with_distinct_points_has_no_neighbors() {
        let idx = line_points(5);
        for u in 0..5 {
            assert!(idx.eps_neighbors(u, 0.0).unwrap().is_empty());
        }
    }

    #[test]
    fn coincident_points_are_neighbors_at_zero_eps() {
        let pts = array![[1.0, 2.0], [1.0, 2.0], [5.0, 5.0]];
        let idx = SpatialIndex::new(pts).unwrap();
        assert_eq!(idx.eps_neighbors(0, 0.0).unwrap(), vec![1]);
        assert_eq!(idx.eps_neighbors(2, 0.0).unwrap(), Vec::<usize>::new());
    }

    #[test]
    fn out_of_range_and_bad_eps_are_rejected() {
        let idx = line_points(3);
        assert!(matches!(
            idx.eps_neighbors(3, 1.0),
            Err(Error::NodeOutOfRange { node: 3, .. })
        ));
        assert!(idx.eps_neighbors(0, -1.0).is_err());
        assert!(idx.eps_neighbors(0, f64::NAN).is_err());
    }

    /// 21 points: a cluster of 4 around the first anchor, a cluster of 7
    /// around the second, and 8 fillers far from both. With eps = 1 the
    /// anchors see exactly their own clusters.
    fn two_cluster_config() -> (SpatialIndex, usize, usize) {
        let mut rows: Vec<[f64; 2]> = Vec::new();
        rows.push([0.0, 0.0]); // anchor 1
        rows.push([50.0, 0.0]); // anchor 2
        for i in 0..4 {
            rows.push([0.25 + 0.1 * i as f64, 0.25]);
        }
        for i in 0..7 {
            rows.push([50.0 + 0.1 * i as f64, 0.5]);
        }
        for i in 0..8 {
            rows.push([100.0 + 10.0 * i as f64, -40.0]);
        }
        assert_eq!(rows.len(), 21);
        let pts = Array2::from_shape_fn((21, 2), |(i, j)| rows[i][j]);
        (SpatialIndex::new(pts).unwrap(), 0, 1)
    }

    #[test]
    fn densities_on_two_cluster_configuration() {
        let (idx, u1, u2) = two_cluster_config();
        assert_eq!(idx.density(u1, 1.0).unwrap(), 4.0 / 21.0);
        assert_eq!(idx.density(u2, 1.0).unwrap(), 7.0 / 21.0);
        // a far filler sees nobody
        assert_eq!(idx.density(20, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn tree_matches_linear_scan_on_random_sets() {
        for seed in 0..20u64 {
            let n = 20 + (seed as usize * 13) % 180;
            let dim = 1 + (seed as usize) % 5;
            let idx = random_points(n, dim, seed);
            for eps in [0.0, 0.05, 0.3, 0.7, 1.5, 4.0] {
                for u in 0..n {
                    assert_eq!(
                        idx.eps_neighbors(u, eps).unwrap(),
                        scan_neighbors(&idx, u, eps),
                        "seed {seed} n {n} dim {dim} eps {eps} u {u}"
                    );
                    assert_eq!(
                        idx.neighbor_count(u, eps).unwrap(),
                        scan_neighbors(&idx, u, eps).len()
                    );
                }
            }
        }
    }

    #[test]
    fn bulk_counts_equal_per_point_counts() {
        for seed in 0..20u64 {
            let n = 20 + (seed as usize * 17) % 240;
            let dim = 1 + (seed as usize) % 6;
            let idx = random_points(n, dim, seed + 100);
            for eps in [0.0, 0.05, 0.3, 0.7, 1.5, 4.0] {
                let bulk = idx.count_all_in_range(eps);
                let single: Vec<usize> = (0..n)
                    .map(|u| idx.count_in_range(idx.point(u), eps))
                    .collect();
                assert_eq!(bulk, single, "seed {seed} n {n} dim {dim} eps {eps}");
            }
        }
    }

    #[test]
    fn bulk_counts_handle_duplicates_and_tiny_sets() {
        let idx = SpatialIndex::new(array![[1.0, 1.0], [1.0, 1.0], [1.0, 1.0], [5.0, 5.0]]).unwrap();
        assert_eq!(idx.count_all_in_range(0.0), vec![3, 3, 3, 1]);
        let one = SpatialIndex::new(array![[2.0]]).unwrap();
        assert_eq!(one.count_all_in_range(1.0), vec![1]);
        let empty = SpatialIndex::new(Array2::zeros((0, 3))).unwrap();
        assert!(empty.count_all_in_range(1.0).is_empty());
    }

    #[test]
    fn pair_count_examples_and_oracle() {
        let idx = line_points(5);
        assert_eq!(count_eps_pairs(&idx, &[2], 10.0).unwrap(), 0);
        assert_eq!(count_eps_pairs(&idx, &[0, 4], 4.0).unwrap(), 1);
        assert_eq!(count_eps_pairs(&idx, &[0, 4], 3.9).unwrap(), 0);

        let pts = array![[0.0], [0.0]];
        let idx2 = SpatialIndex::new(pts).unwrap();
        assert_eq!(count_eps_pairs(&idx2, &[0, 1], 0.5).unwrap(), 1);

        for seed in 0..10u64 {
            let idx = random_points(40, 3, seed);
            let t: Vec<usize> = (0..40).step_by(4).collect();
            for eps in [0.1, 0.5, 1.0, 2.0] {
                let mut want = 0;
                for (a, &u) in t.iter().enumerate() {
                    for &v in &t[a + 1..] {
                        if dist_sq(idx.point(u), idx.point(v)) <= eps * eps {
                            want += 1;
                        }
                    }
                }
                assert_eq!(count_eps_pairs(&idx, &t, eps).unwrap(), want);
            }
        }
    }

    #[test]
    fn greedy_keeps_everything_at_zero_eps() {
        let idx = line_points(7);
        let t = greedy_select(&idx, 0.0, Strategy::MaxDensity).unwrap();
        assert_eq!(t, (0..7).collect::<Vec<_>>());
    }

    #[test]
    fn greedy_collapses_to_one_at_huge_eps() {
        let idx = line_points(7);
        for strategy in [Strategy::MaxDensity, Strategy::MinDensity] {
            let t = greedy_select(&idx, 100.0, strategy).unwrap();
            assert_eq!(t.len(), 1);
        }
    }

    #[test]
    fn greedy_on_line_matches_hand_trace() {
        // counts at eps 1.5: [1, 2, 2, 2, 1]
        let idx = line_points(5);
        let min_t = greedy_select(&idx, 1.5, Strategy::MinDensity).unwrap();
        assert_eq!(min_t, vec![0, 2, 4]);
        let max_t = greedy_select(&idx, 1.5, Strategy::MaxDensity).unwrap();
        assert_eq!(max_t, vec![1, 3]);
    }

    #[test]
    fn greedy_output_is_separated_and_maximal() {
        for seed in 0..15u64 {
            let idx = random_points(60, 2, seed);
            for eps in [0.1, 0.4, 0.9] {
                for strategy in [Strategy::MaxDensity, Strategy::MinDensity] {
                    let t = greedy_select(&idx, eps, strategy).unwrap();
                    assert_eq!(count_eps_pairs(&idx, &t, eps).unwrap(), 0);
                    // every non-member was knocked out by some member
                    let limit = eps * eps;
                    for v in 0..idx.len() {
                        if t.binary_search(&v).is_err() {
                            assert!(
                                t.iter().any(|&u| dist_sq(idx.point(u), idx.point(v)) <= limit),
                                "seed {seed} eps {eps} {strategy}: {v} not covered"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn find_subset_with_k_equal_n_returns_everyone() {
        let idx = line_points(6);
        let cfg = SelectConfig {
            size_k: 6,
            ..SelectConfig::default()
        };
        let (t, eps) = find_subset(&idx, &cfg).unwrap();
        assert_eq!(t, (0..6).collect::<Vec<_>>());
        assert_eq!(eps, 0.0);
    }

    #[test]
    fn find_subset_with_k_one_returns_singleton() {
        let idx = line_points(6);
        let cfg = SelectConfig {
            size_k: 1,
            ..SelectConfig::default()
        };
        let (t, eps) = find_subset(&idx, &cfg).unwrap();
        assert_eq!(t.len(), 1);
        assert!(eps > 5.0, "eps {eps} should approach the diameter bound");
    }

    #[test]
    fn find_subset_rejects_oversized_k() {
        let idx = line_points(4);
        let cfg = SelectConfig {
            size_k: 5,
            ..SelectConfig::default()
        };
        let err = find_subset(&idx, &cfg).unwrap_err();
        assert!(err.to_string().contains("infeasible size constraint"));
    }

    #[test]
    fn find_subset_on_random_points_meets_constraint() {
        for seed in 0..8u64 {
            let idx = random_points(50, 3, seed);
            for strategy in [Strategy::MaxDensity, Strategy::MinDensity] {
                let cfg = SelectConfig {
                    size_k: 10,
                    strategy,
                    ..SelectConfig::default()
                };
                let (t, eps) = find_subset(&idx, &cfg).unwrap();
                assert!(t.len() >= 10);
                assert!(eps > 0.0);
                assert_eq!(count_eps_pairs(&idx, &t, eps).unwrap(), 0);
            }
        }
    }

    #[test]
    fn find_subset_with_fixed_eps() {
        let idx = line_points(10);
        let cfg = SelectConfig {
            size_k: 3,
            epsilon: EpsilonSpec::Fixed(2.5),
            ..SelectConfig::default()
        };
        let (t, eps) = find_subset(&idx, &cfg).unwrap();
        assert_eq!(eps, 2.5);
        assert!(t.len() >= 3);
        assert_eq!(count_eps_pairs(&idx, &t, eps).unwrap(), 0);

        let too_big = SelectConfig {
            size_k: 2,
            epsilon: EpsilonSpec::Fixed(100.0),
            ..SelectConfig::default()
        };
        assert!(matches!(
            find_subset(&idx, &too_big),
            Err(Error::InfeasibleSize { requested: 2, available: 1 })
        ));
    }

    #[test]
    fn find_subset_reports_coincident_infeasibility() {
        let pts = Array2::zeros((5, 2));
        let idx = SpatialIndex::new(pts).unwrap();
        let cfg = SelectConfig {
            size_k: 2,
            ..SelectConfig::default()
        };
        assert!(matches!(
            find_subset(&idx, &cfg),
            Err(Error::InfeasibleSize { requested: 2, available: 1 })
        ));
    }

    #[test]
    fn epsilon_spec_parses() {
        assert_eq!("auto".parse::<EpsilonSpec>().unwrap(), EpsilonSpec::Auto);
        assert_eq!("1.5".parse::<EpsilonSpec>().unwrap(), EpsilonSpec::Fixed(1.5));
        assert!("-2".parse::<EpsilonSpec>().is_err());
        assert!("nan".parse::<EpsilonSpec>().is_err());
    }

    #[test]
    fn subset_json_shape() {
        let s = SelectedSubset {
            epsilon: 0.75,
            strategy: Strategy::MaxDensity,
            nodes: vec![3, 1, 4],
        };
        let json = serde_json::to_value(&s).unwrap();
        assert_eq!(json["epsilon"], 0.75);
        assert_eq!(json["strategy"], "max");
        assert_eq!(json["nodes"][0], 3);
        let back: SelectedSubset = serde_json::from_value(json).unwrap();
        assert_eq!(back, s);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn range_queries_equal_linear_scan(seed in 0u64..1000, n in 1usize..120, dim in 1usize..6, eps in 0.0f64..2.0) {
            let idx = random_points(n, dim, seed);
            for u in (0..n).step_by(7.max(n / 10)) {
                prop_assert_eq!(idx.eps_neighbors(u, eps).unwrap(), scan_neighbors(&idx, u, eps));
            }
        }

        #[test]
        fn bulk_counts_equal_scan_counts(seed in 0u64..1000, n in 1usize..120, dim in 1usize..6, eps in 0.0f64..2.0) {
            let idx = random_points(n, dim, seed);
            let bulk = idx.count_all_in_range(eps);
            for u in 0..n {
                prop_assert_eq!(bulk[u], scan_neighbors(&idx, u, eps).len() + 1);
            }
        }

        #[test]
        fn greedy_is_always_eps_separated(seed in 0u64..1000, n in 2usize..80, eps in 0.0f64..1.5) {
            let idx = random_points(n, 3, seed);
            for strategy in [Strategy::MaxDensity, Strategy::MinDensity] {
                let t = greedy_select(&idx, eps, strategy).unwrap();
                prop_assert!(!t.is_empty());
                prop_assert_eq!(count_eps_pairs(&idx, &t, eps).unwrap(), 0);
            }
        }
    }
}
