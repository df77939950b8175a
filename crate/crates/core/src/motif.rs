//! Triangle-motif statistics and the aggregation weights built from them.
//!
//! `motif_matrix` counts, for every edge, how many triangles contain it.
//! `agg_weights` turns those counts into row-softmax coefficients plus an
//! identity term; `identity_weights` is the motif-free alternative using
//! symmetric degree normalization with self-loops.

use crate::graph::Graph;
use ndarray::Array2;
use std::io::Write;

/// Per-edge triangle support M. Sparse, symmetric, aligned with the
/// graph's adjacency lists: `vals[offsets[i] + t]` is M(i, adj(i)[t]).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MotifMatrix {
    offsets: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<usize>,
}

impl MotifMatrix {
    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    /// M(i, j); zero when (i, j) is not an edge.
    pub fn get(&self, i: usize, j: usize) -> usize {
        let row = &self.cols[self.offsets[i]..self.offsets[i + 1]];
        match row.binary_search(&j) {
            Ok(pos) => self.vals[self.offsets[i] + pos],
            Err(_) => 0,
        }
    }

    /// Row slice as parallel (neighbor, count) views.
    pub fn row(&self, i: usize) -> (&[usize], &[usize]) {
        let r = self.offsets[i]..self.offsets[i + 1];
        (&self.cols[r.clone()], &self.vals[r])
    }

    /// Debug dump, one "i j count" line per stored entry with i < j.
    pub fn write_triplets<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for i in 0..self.node_count() {
            let (cols, vals) = self.row(i);
            for (&j, &m) in cols.iter().zip(vals) {
                if i < j {
                    writeln!(w, "{} {} {}", i, j, m)?;
                }
            }
        }
        Ok(())
    }
}

/// M(i,j) = |adj(i) ∩ adj(j)| for every edge, via sorted-list
/// intersection. Each unordered edge is intersected once and mirrored.
pub fn motif_matrix(g: &Graph) -> MotifMatrix {
    let n = g.node_count();
    let mut offsets = Vec::with_capacity(n + 1);
    offsets.push(0);
    for i in 0..n {
        offsets.push(offsets[i] + g.degree(i));
    }
    let mut cols = Vec::with_capacity(offsets[n]);
    for i in 0..n {
        cols.extend_from_slice(g.neighbors(i));
    }
    let mut vals = vec![0usize; offsets[n]];
    for i in 0..n {
        let ni = g.neighbors(i);
        for (t, &j) in ni.iter().enumerate() {
            if j < i {
                continue;
            }
            let count = sorted_intersection_size(ni, g.neighbors(j));
            vals[offsets[i] + t] = count;
            let back = g.neighbors(j).binary_search(&i).unwrap();
            vals[offsets[j] + back] = count;
        }
    }
    MotifMatrix { offsets, cols, vals }
}

fn sorted_intersection_size(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
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

/// Sparse aggregation operator: a diagonal term plus per-neighbor
/// coefficients on the adjacency sparsity pattern. Generally asymmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct AggWeights {
    offsets: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
    diag: Vec<f64>,
}

impl AggWeights {
    pub fn node_count(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self, i: usize) -> f64 {
        self.diag[i]
    }

    /// Off-diagonal entry (i, j); zero when (i, j) is not an edge.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let row = &self.cols[self.offsets[i]..self.offsets[i + 1]];
        match row.binary_search(&j) {
            Ok(pos) => self.vals[self.offsets[i] + pos],
            Err(_) => 0.0,
        }
    }

    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let r = self.offsets[i]..self.offsets[i + 1];
        (&self.cols[r.clone()], &self.vals[r])
    }

    /// Y = (diag + W) X, rows aggregated from neighbors.
    pub fn apply(&self, x: &Array2<f64>) -> Array2<f64> {
        assert_eq!(x.nrows(), self.node_count(), "row count mismatch");
        let mut y = Array2::zeros(x.raw_dim());
        for i in 0..self.node_count() {
            let (cols, vals) = self.row(i);
            let mut yi = y.row_mut(i);
            yi.scaled_add(self.diag[i], &x.row(i));
            for (&j, &w) in cols.iter().zip(vals) {
                yi.scaled_add(w, &x.row(j));
            }
        }
        y
    }

    /// Y = (diag + W)ᵀ X; the adjoint needed by backward passes.
    pub fn apply_transpose(&self, x: &Array2<f64>) -> Array2<f64> {
        assert_eq!(x.nrows(), self.node_count(), "row count mismatch");
        let mut y = Array2::zeros(x.raw_dim());
        for i in 0..self.node_count() {
            y.row_mut(i).scaled_add(self.diag[i], &x.row(i));
            let (cols, vals) = self.row(i);
            for (&j, &w) in cols.iter().zip(vals) {
                y.row_mut(j).scaled_add(w, &x.row(i));
            }
        }
        y
    }
}

/// Softmax in place with the max-subtraction guard; counts can reach the
/// graph's maximum degree, far past exp's overflow point.
fn softmax_row(vals: &mut [f64]) {
    if vals.is_empty() {
        return;
    }
    let max = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for v in vals.iter_mut() {
        *v = (*v - max).exp();
        sum += *v;
    }
    for v in vals.iter_mut() {
        *v /= sum;
    }
}

/// Motif-weighted aggregation: each row softmaxes exp(M(i,·)) over the
/// neighbors of i, and the diagonal is exactly 1. Rows therefore sum to
/// 2 for non-isolated nodes; this operator is deliberately not an
/// averaging operator.
pub fn agg_weights(m: &MotifMatrix, g: &Graph) -> AggWeights {
    assert_eq!(m.node_count(), g.node_count(), "motif matrix from a different graph");
    let n = g.node_count();
    let mut offsets = m.offsets.clone();
    let cols = m.cols.clone();
    let mut vals: Vec<f64> = m.vals.iter().map(|&c| c as f64).collect();
    for i in 0..n {
        softmax_row(&mut vals[offsets[i]..offsets[i + 1]]);
    }
    offsets.shrink_to_fit();
    AggWeights {
        offsets,
        cols,
        vals,
        diag: vec![1.0; n],
    }
}

/// Symmetric normalization with self-loops: entry (i,j) is
/// 1/sqrt((deg_i + 1)(deg_j + 1)) on edges and the diagonal is
/// 1/(deg_i + 1). The motif-free aggregation mode.
pub fn identity_weights(g: &Graph) -> AggWeights {
    let n = g.node_count();
    let inv_sqrt: Vec<f64> = (0..n).map(|i| 1.0 / ((g.degree(i) + 1) as f64).sqrt()).collect();
    let mut offsets = Vec::with_capacity(n + 1);
    offsets.push(0);
    let mut cols = Vec::new();
    let mut vals = Vec::new();
    for i in 0..n {
        for &j in g.neighbors(i) {
            cols.push(j);
            vals.push(inv_sqrt[i] * inv_sqrt[j]);
        }
        offsets.push(cols.len());
    }
    AggWeights {
        offsets,
        cols,
        vals,
        diag: inv_sqrt.iter().map(|&s| s * s).collect(),
    }
}
