//! Two-layer graph-convolutional autoencoder trained by full-batch
//! gradient descent with a hand-derived backward pass.
//!
//! The encoder is Z1 = relu(W X W0), Z = W (Z1 W1) where W is an
//! aggregation operator from the motif module. The decoder scores node
//! pairs with sigmoid(z_i . z_j) and the loss is class-weighted binary
//! cross entropy against the adjacency plus self-loops. Everything is
//! f64; gradient checks need the headroom.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::motif::{agg_weights, identity_weights, motif_matrix, AggWeights};
use ndarray::{s, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

/// Largest node count for which dense N x N decoding is allowed.
/// Past this, negative sampling is mandatory.
pub const DENSE_DECODE_LIMIT: usize = 5000;

/// Which aggregation operator drives both encoder layers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AggregationMode {
    /// Triangle-count softmax weights plus identity.
    Motif,
    /// Symmetric degree normalization with self-loops.
    SymNorm,
}

impl AggregationMode {
    pub fn weights(self, g: &Graph) -> AggWeights {
        match self {
            AggregationMode::Motif => agg_weights(&motif_matrix(g), g),
            AggregationMode::SymNorm => identity_weights(g),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            AggregationMode::Motif => "motif",
            AggregationMode::SymNorm => "symnorm",
        }
    }
}

impl std::str::FromStr for AggregationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "motif" => Ok(AggregationMode::Motif),
            "symnorm" => Ok(AggregationMode::SymNorm),
            other => Err(Error::InvalidConfig(format!(
                "unknown aggregation mode {other:?}, expected \"motif\" or \"symnorm\""
            ))),
        }
    }
}

impl std::fmt::Display for AggregationMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Node features. Identity means featureless operation: X is the
/// implicit N x N identity, so X W0 is just W0.
#[derive(Debug, Clone)]
pub enum FeatureMatrix {
    Identity,
    Dense(Array2<f64>),
}

impl FeatureMatrix {
    /// Feature dimension for a graph with `node_count` nodes.
    pub fn dim(&self, node_count: usize) -> usize {
        match self {
            FeatureMatrix::Identity => node_count,
            FeatureMatrix::Dense(x) => x.ncols(),
        }
    }

    pub fn validate(&self, node_count: usize) -> Result<()> {
        match self {
            FeatureMatrix::Identity => Ok(()),
            FeatureMatrix::Dense(x) => {
                if x.nrows() != node_count {
                    return Err(Error::ShapeMismatch(format!(
                        "feature matrix has {} rows but the graph has {} nodes",
                        x.nrows(),
                        node_count
                    )));
                }
                if x.iter().any(|v| !v.is_finite()) {
                    return Err(Error::ShapeMismatch(
                        "feature matrix contains non-finite values".into(),
                    ));
                }
                Ok(())
            }
        }
    }

    /// X W0.
    fn project(&self, w0: &Array2<f64>) -> Array2<f64> {
        match self {
            FeatureMatrix::Identity => w0.clone(),
            FeatureMatrix::Dense(x) => x.dot(w0),
        }
    }

    /// Xᵀ G, the W0 gradient from the gradient at X W0.
    fn grad_w0(&self, g_h0: &Array2<f64>) -> Array2<f64> {
        match self {
            FeatureMatrix::Identity => g_h0.clone(),
            FeatureMatrix::Dense(x) => x.t().dot(g_h0),
        }
    }
}

/// Encoder parameters. W0 is feature-dim x hidden1, W1 is
/// hidden1 x hidden2.
#[derive(Debug, Clone, PartialEq)]
pub struct GcnParams {
    pub w0: Array2<f64>,
    pub w1: Array2<f64>,
}

impl GcnParams {
    /// Glorot-uniform initialization, deterministic per seed.
    pub fn glorot(feature_dim: usize, hidden1: usize, hidden2: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        GcnParams {
            w0: glorot_matrix(feature_dim, hidden1, &mut rng),
            w1: glorot_matrix(hidden1, hidden2, &mut rng),
        }
    }
}

fn glorot_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Array2<f64> {
    let limit = (6.0 / (rows + cols) as f64).sqrt();
    Array2::from_shape_fn((rows, cols), |_| rng.random_range(-limit..limit))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub hidden1: usize,
    pub hidden2: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    pub seed: u64,
    pub mode: AggregationMode,
    pub negative_sampling: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            hidden1: 32,
            hidden2: 16,
            epochs: 200,
            learning_rate: 0.01,
            seed: 0,
            mode: AggregationMode::Motif,
            negative_sampling: false,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.hidden1 == 0 || self.hidden2 == 0 {
            return Err(Error::InvalidConfig("hidden dimensions must be positive".into()));
        }
        if self.epochs == 0 {
            return Err(Error::InvalidConfig("epochs must be >= 1".into()));
        }
        if !(self.learning_rate > 0.0) {
            return Err(Error::InvalidConfig("learning rate must be > 0".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainMeta {
    pub epochs: usize,
    pub initial_loss: f64,
    pub final_loss: f64,
}

/// Trained node representations, one row per node.
#[derive(Debug, Clone)]
pub struct Embedding {
    pub values: Array2<f64>,
    pub mode: AggregationMode,
    pub meta: TrainMeta,
}

fn check_shapes(g: &Graph, x: &FeatureMatrix, w: &AggWeights, p: &GcnParams) -> Result<()> {
    let n = g.node_count();
    if w.node_count() != n {
        return Err(Error::ShapeMismatch(format!(
            "aggregation weights cover {} nodes but the graph has {}",
            w.node_count(),
            n
        )));
    }
    x.validate(n)?;
    if p.w0.nrows() != x.dim(n) {
        return Err(Error::ShapeMismatch(format!(
            "W0 has {} rows but features have dimension {}",
            p.w0.nrows(),
            x.dim(n)
        )));
    }
    if p.w1.nrows() != p.w0.ncols() {
        return Err(Error::ShapeMismatch(format!(
            "W1 has {} rows but W0 has {} columns",
            p.w1.nrows(),
            p.w0.ncols()
        )));
    }
    Ok(())
}

/// Encoder forward pass: Z1 = relu(W X W0), Z = W (Z1 W1). The second
/// layer is linear.
pub fn forward(g: &Graph, x: &FeatureMatrix, w: &AggWeights, p: &GcnParams) -> Result<Array2<f64>> {
    check_shapes(g, x, w, p)?;
    let h0 = x.project(&p.w0);
    let z1 = w.apply(&h0).mapv(|v| v.max(0.0));
    Ok(w.apply(&z1.dot(&p.w1)))
}

fn sigmoid(s: f64) -> f64 {
    1.0 / (1.0 + (-s).exp())
}

/// ln(1 + e^x) without overflow.
fn softplus(x: f64) -> f64 {
    x.max(0.0) + (-x.abs()).exp().ln_1p()
}

/// Loss contribution and d(loss)/d(score) for one reconstruction entry.
fn bce_terms(score: f64, is_positive: bool, pos_weight: f64) -> (f64, f64) {
    let p = sigmoid(score);
    if is_positive {
        (pos_weight * softplus(-score), pos_weight * (p - 1.0))
    } else {
        (softplus(score), p)
    }
}

/// On-demand pairwise decoder over an embedding.
pub struct Decoder<'a> {
    z: &'a Array2<f64>,
}

/// View `z` through the inner-product decoder.
pub fn decode(z: &Array2<f64>) -> Decoder<'_> {
    Decoder { z }
}

impl Decoder<'_> {
    /// sigmoid(z_i . z_j) computed on demand.
    pub fn prob(&self, i: usize, j: usize) -> f64 {
        sigmoid(self.z.row(i).dot(&self.z.row(j)))
    }

    /// Full probability matrix; refused past [`DENSE_DECODE_LIMIT`].
    pub fn dense_probs(&self) -> Result<Array2<f64>> {
        let n = self.z.nrows();
        if n > DENSE_DECODE_LIMIT {
            return Err(Error::InvalidConfig(format!(
                "dense decoding of {n} nodes exceeds the {DENSE_DECODE_LIMIT}-node limit"
            )));
        }
        Ok(self.z.dot(&self.z.t()).mapv(sigmoid))
    }
}

fn positive_weight(g: &Graph) -> f64 {
    let n = g.node_count();
    let n_sq = (n * n) as f64;
    let n_pos = (n + 2 * g.edge_count()) as f64;
    (n_sq - n_pos) / n_pos
}

/// Walk row i of the reconstruction target: calls `f(j, is_positive)`
/// for every ordered column j. Positives are the diagonal and edges.
fn walk_target_row(g: &Graph, i: usize, mut f: impl FnMut(usize, bool)) {
    let nbrs = g.neighbors(i);
    let mut ptr = 0;
    for j in 0..g.node_count() {
        let mut pos = j == i;
        while ptr < nbrs.len() && nbrs[ptr] < j {
            ptr += 1;
        }
        if ptr < nbrs.len() && nbrs[ptr] == j {
            pos = true;
        }
        f(j, pos);
    }
}

/// Mean class-weighted binary cross entropy over all N^2 ordered entries
/// against the adjacency-plus-self-loops target. Streams block rows, so
/// no N x N matrix is materialized, but the work is still quadratic and
/// refused past [`DENSE_DECODE_LIMIT`].
pub fn reconstruction_loss(g: &Graph, z: &Array2<f64>) -> Result<f64> {
    let n = g.node_count();
    if z.nrows() != n {
        return Err(Error::ShapeMismatch(format!(
            "embedding has {} rows but the graph has {} nodes",
            z.nrows(),
            n
        )));
    }
    if n > DENSE_DECODE_LIMIT {
        return Err(Error::InvalidConfig(format!(
            "full reconstruction loss over {n} nodes exceeds the {DENSE_DECODE_LIMIT}-node limit; use negative sampling"
        )));
    }
    if n == 0 {
        return Ok(0.0);
    }
    let w_pos = positive_weight(g);
    let mut total = 0.0;
    const BLOCK: usize = 256;
    for start in (0..n).step_by(BLOCK) {
        let end = (start + BLOCK).min(n);
        let scores = z.slice(s![start..end, ..]).dot(&z.t());
        for (bi, i) in (start..end).enumerate() {
            let row = scores.row(bi);
            walk_target_row(g, i, |j, pos| {
                total += bce_terms(row[j], pos, w_pos).0;
            });
        }
    }
    Ok(total / (n * n) as f64)
}

/// Ordered positive entries of the target: the diagonal plus both
/// orientations of every edge.
fn ordered_positives(g: &Graph) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(g.node_count() + 2 * g.edge_count());
    for i in 0..g.node_count() {
        out.push((i, i));
    }
    for (u, v) in g.edges() {
        out.push((u, v));
        out.push((v, u));
    }
    out
}

/// Uniform ordered non-edge, non-diagonal pairs. May return fewer than
/// `count` on graphs that are nearly complete.
fn sample_negatives(g: &Graph, count: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let n = g.node_count();
    let mut out = Vec::with_capacity(count);
    if n < 2 {
        return out;
    }
    let mut attempts = 0usize;
    let budget = count.saturating_mul(100).max(1000);
    while out.len() < count && attempts < budget {
        attempts += 1;
        let i = rng.random_range(0..n);
        let j = rng.random_range(0..n);
        if i != j && !g.has_edge(i, j) {
            out.push((i, j));
        }
    }
    out
}

/// d(loss)/dZ for the full weighted objective, streamed in block rows.
fn full_loss_grad_z(g: &Graph, z: &Array2<f64>) -> (f64, Array2<f64>) {
    let n = g.node_count();
    let w_pos = positive_weight(g);
    let scale = 1.0 / (n * n) as f64;
    let mut gz = Array2::zeros(z.raw_dim());
    let mut total = 0.0;
    const BLOCK: usize = 256;
    for start in (0..n).step_by(BLOCK) {
        let end = (start + BLOCK).min(n);
        let mut scores = z.slice(s![start..end, ..]).dot(&z.t());
        for (bi, i) in (start..end).enumerate() {
            let mut row = scores.row_mut(bi);
            walk_target_row(g, i, |j, pos| {
                let (loss, ds) = bce_terms(row[j], pos, w_pos);
                total += loss;
                row[j] = ds * scale;
            });
        }
        // The score-gradient matrix is symmetric, so dL/dZ = 2 G Z and
        // each block row depends only on its own G rows.
        let block = scores.dot(z);
        gz.slice_mut(s![start..end, ..]).scaled_add(2.0, &block);
    }
    (total * scale, gz)
}

/// d(loss)/dZ for the sampled objective: all positives plus the given
/// negative entries, unweighted mean.
fn sampled_loss_grad_z(
    g: &Graph,
    z: &Array2<f64>,
    negatives: &[(usize, usize)],
) -> (f64, Array2<f64>) {
    let positives = ordered_positives(g);
    let count = positives.len() + negatives.len();
    let coef = 1.0 / count.max(1) as f64;
    let mut gz = Array2::zeros(z.raw_dim());
    let mut total = 0.0;
    let mut accumulate = |i: usize, j: usize, pos: bool| {
        let score = z.row(i).dot(&z.row(j));
        let (loss, ds) = bce_terms(score, pos, 1.0);
        total += loss;
        let c = ds * coef;
        let zj = z.row(j).to_owned();
        gz.row_mut(i).scaled_add(c, &zj);
        let zi = z.row(i).to_owned();
        gz.row_mut(j).scaled_add(c, &zi);
    };
    for &(i, j) in &positives {
        accumulate(i, j, true);
    }
    for &(i, j) in negatives {
        accumulate(i, j, false);
    }
    (total * coef, gz)
}

/// One evaluation of the training objective with analytic gradients for
/// both parameter matrices. `negatives` selects the sampled objective;
/// `None` is the full weighted loss (subject to the dense-size limit).
pub fn loss_and_param_gradients(
    g: &Graph,
    x: &FeatureMatrix,
    w: &AggWeights,
    p: &GcnParams,
    negatives: Option<&[(usize, usize)]>,
) -> Result<(f64, Array2<f64>, Array2<f64>)> {
    check_shapes(g, x, w, p)?;
    if negatives.is_none() && g.node_count() > DENSE_DECODE_LIMIT {
        return Err(Error::InvalidConfig(format!(
            "full-loss training over {} nodes exceeds the {DENSE_DECODE_LIMIT}-node limit; enable negative sampling",
            g.node_count()
        )));
    }
    let h0 = x.project(&p.w0);
    let s1 = w.apply(&h0);
    let z1 = s1.mapv(|v| v.max(0.0));
    let h1 = z1.dot(&p.w1);
    let z = w.apply(&h1);

    let (loss, gz) = match negatives {
        Some(negs) => sampled_loss_grad_z(g, &z, negs),
        None => full_loss_grad_z(g, &z),
    };

    let g_h1 = w.apply_transpose(&gz);
    let g_w1 = z1.t().dot(&g_h1);
    let g_z1 = g_h1.dot(&p.w1.t());
    let mut g_s1 = g_z1;
    g_s1.zip_mut_with(&s1, |gv, &sv| {
        if sv <= 0.0 {
            *gv = 0.0;
        }
    });
    let g_h0 = w.apply_transpose(&g_s1);
    let g_w0 = x.grad_w0(&g_h0);
    Ok((loss, g_w0, g_w1))
}

/// Full-batch gradient descent from a Glorot init. Deterministic for a
/// fixed config on the same build. Fails fast if the loss leaves the
/// finite range.
pub fn train(g: &Graph, x: &FeatureMatrix, w: &AggWeights, cfg: &TrainConfig) -> Result<Embedding> {
    cfg.validate()?;
    let n = g.node_count();
    x.validate(n)?;
    if n > DENSE_DECODE_LIMIT && !cfg.negative_sampling {
        return Err(Error::InvalidConfig(format!(
            "training over {n} nodes requires negative sampling (limit {DENSE_DECODE_LIMIT})"
        )));
    }
    let mut params = GcnParams::glorot(x.dim(n), cfg.hidden1, cfg.hidden2, cfg.seed);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9e37_79b9_7f4a_7c15);
    let n_pos = n + 2 * g.edge_count();
    let mut sample = || sample_negatives(g, n_pos, &mut rng);

    let mut initial_loss = f64::NAN;
    for epoch in 1..=cfg.epochs {
        let negs = cfg.negative_sampling.then(&mut sample);
        let (loss, g_w0, g_w1) = loss_and_param_gradients(g, x, w, &params, negs.as_deref())?;
        if !loss.is_finite() {
            return Err(Error::NonFiniteLoss { epoch });
        }
        if epoch == 1 {
            initial_loss = loss;
        }
        params.w0.scaled_add(-cfg.learning_rate, &g_w0);
        params.w1.scaled_add(-cfg.learning_rate, &g_w1);
    }

    let negs = cfg.negative_sampling.then(&mut sample);
    let (final_loss, _, _) = loss_and_param_gradients(g, x, w, &params, negs.as_deref())?;
    let values = forward(g, x, w, &params)?;
    Ok(Embedding {
        values,
        mode: cfg.mode,
        meta: TrainMeta {
            epochs: cfg.epochs,
            initial_loss,
            final_loss,
        },
    })
}

/// CSV with header "node,d0,..,d{h-1}", one row per node, values printed
/// with the shortest representation that round-trips in f64.
pub fn write_embedding_csv<W: Write>(values: &Array2<f64>, mut out: W) -> std::io::Result<()> {
    write!(out, "node")?;
    for d in 0..values.ncols() {
        write!(out, ",d{}", d)?;
    }
    writeln!(out)?;
    for (i, row) in values.rows().into_iter().enumerate() {
        write!(out, "{}", i)?;
        for v in row {
            write!(out, ",{}", v)?;
        }
        writeln!(out)?;
    }
    Ok(())
}

/// Read the CSV format written by [`write_embedding_csv`]. Rows must be
/// dense and in node order.
pub fn read_embedding_csv(path: &Path) -> Result<Array2<f64>> {
    let file = std::fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut lines = BufReader::new(file).lines().enumerate();
    let parse_err = |line: usize, msg: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        msg,
    };
    let (_, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "missing header".into()))?;
    let header = header.map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let fields: Vec<&str> = header.trim_end().split(',').collect();
    if fields.first() != Some(&"node") || fields.len() < 2 {
        return Err(parse_err(1, format!("unexpected header {header:?}")));
    }
    let dim = fields.len() - 1;
    let mut rows: Vec<f64> = Vec::new();
    let mut expect = 0usize;
    for (idx, line) in lines {
        let line = line.map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.trim_end().split(',');
        let node: usize = parts
            .next()
            .unwrap()
            .parse()
            .map_err(|_| parse_err(idx + 1, "invalid node id".into()))?;
        if node != expect {
            return Err(parse_err(idx + 1, format!("expected node {expect}, found {node}")));
        }
        let mut count = 0;
        for tok in parts {
            let v: f64 = tok
                .parse()
                .map_err(|_| parse_err(idx + 1, format!("invalid value {tok:?}")))?;
            rows.push(v);
            count += 1;
        }
        if count != dim {
            return Err(parse_err(idx + 1, format!("expected {dim} values, found {count}")));
        }
        expect += 1;
    }
    Array2::from_shape_vec((expect, dim), rows)
        .map_err(|e| parse_err(0, format!("inconsistent shape: {e}")))
}
