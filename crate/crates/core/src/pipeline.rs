//! Command pipeline. Every subcommand of the binary is a thin wrapper
//! over one function here, so the same steps can be driven in-process
//! by tests and examples.
//!
//! Each command writes exactly one artifact plus a `<out>.meta.json`
//! run record. Artifacts are written to a temporary sibling first and
//! renamed into place, so a failed run leaves no partial output.

use crate::datagen::{generate, GenSpec};
use crate::embed::{
    read_embedding_csv, train, write_embedding_csv, AggregationMode, FeatureMatrix, TrainConfig,
    DENSE_DECODE_LIMIT,
};
use crate::error::{Error, Result};
use crate::graph::{load_edge_list, Graph};
use crate::select::{find_subset, EpsilonSpec, SelectConfig, SelectedSubset, SpatialIndex, Strategy};
use crate::tenuity::{pf_set, report, TenuousSubset};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

/// Fold a phase tag into the root seed (FNV-1a over the tag bytes), so
/// one invocation seed drives every phase without correlation.
pub fn split_seed(root: u64, tag: &str) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64 ^ root.rotate_left(17);
    for b in tag.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Flat key=value configuration file. Lines starting with '#' and blank
/// lines are ignored. Command-line flags take precedence over entries.
#[derive(Debug, Clone, Default)]
pub struct ConfigMap(BTreeMap<String, String>);

impl ConfigMap {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut map = BTreeMap::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                path: path.to_path_buf(),
                line: idx + 1,
                msg: format!("expected key=value, got {line:?}"),
            })?;
            map.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(ConfigMap(map))
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    pub fn get_parsed<T>(&self, key: &str) -> Result<Option<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        match self.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|e| {
                Error::InvalidConfig(format!("config key {key}={raw:?}: {e}"))
            }),
        }
    }
}

/// Run record written next to every artifact as `<out>.meta.json`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunMeta {
    pub command: String,
    pub seed: Option<u64>,
    pub duration_ms: f64,
    pub crate_version: String,
    pub params: BTreeMap<String, String>,
}

impl RunMeta {
    fn new(command: &str, seed: Option<u64>) -> Self {
        RunMeta {
            command: command.to_string(),
            seed,
            duration_ms: 0.0,
            crate_version: env!("CARGO_PKG_VERSION").to_string(),
            params: BTreeMap::new(),
        }
    }

    fn param(&mut self, key: &str, value: impl Display) -> &mut Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    fn finish(mut self, artifact: &Path, started: Instant) -> Result<()> {
        self.duration_ms = started.elapsed().as_secs_f64() * 1e3;
        let bytes = to_json_bytes(&self)?;
        write_atomic(&meta_path(artifact), &bytes)
    }
}

/// `<out>.meta.json` for a given artifact path.
pub fn meta_path(artifact: &Path) -> PathBuf {
    let name = artifact
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    artifact.with_file_name(format!("{name}.meta.json"))
}

fn to_json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)
        .map_err(|e| Error::InvalidConfig(format!("serialization failed: {e}")))?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Write via a temporary sibling and rename, removing the temporary on
/// failure.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let tmp = path.with_file_name(format!("{name}.tmp"));
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Err(e) = std::fs::write(&tmp, bytes) {
        let _ = std::fs::remove_file(&tmp);
        return Err(io_err(e));
    }
    std::fs::rename(&tmp, path).map_err(|e| {
        let _ = std::fs::remove_file(&tmp);
        io_err(e)
    })
}

#[derive(Debug, Clone)]
pub struct GenArgs {
    pub nodes: usize,
    pub avg_degree: f64,
    pub max_degree: usize,
    pub seed: u64,
    pub out: PathBuf,
}

/// Generate a degree-capped random graph and write its edge list.
pub fn cmd_gen(args: &GenArgs) -> Result<()> {
    let started = Instant::now();
    let spec = GenSpec {
        nodes: args.nodes,
        target_avg_degree: args.avg_degree,
        max_degree: args.max_degree,
        seed: args.seed,
    };
    let g = generate(&spec)?;
    let mut buf = Vec::new();
    g.write_edge_list(&mut buf).map_err(|source| Error::Io {
        path: args.out.clone(),
        source,
    })?;
    write_atomic(&args.out, &buf)?;
    let mut meta = RunMeta::new("gen", Some(args.seed));
    meta.param("nodes", args.nodes)
        .param("avg_degree", args.avg_degree)
        .param("max_degree", args.max_degree)
        .param("edges", g.edge_count());
    meta.finish(&args.out, started)
}

#[derive(Debug, Clone)]
pub struct EmbedArgs {
    pub graph: PathBuf,
    pub features: Option<PathBuf>,
    pub mode: AggregationMode,
    pub hidden: usize,
    pub dim: usize,
    pub epochs: usize,
    pub lr: f64,
    pub seed: u64,
    /// None means automatic: sampling switches on past the dense limit.
    pub negative_sampling: Option<bool>,
    pub out: PathBuf,
}

/// Train node embeddings for a graph file and write them as CSV.
pub fn cmd_embed(args: &EmbedArgs) -> Result<()> {
    let started = Instant::now();
    let g = load_edge_list(&args.graph)?.graph;
    let x = match &args.features {
        Some(path) => FeatureMatrix::Dense(read_embedding_csv(path)?),
        None => FeatureMatrix::Identity,
    };
    let sampling = args
        .negative_sampling
        .unwrap_or(g.node_count() > DENSE_DECODE_LIMIT);
    let cfg = TrainConfig {
        hidden1: args.hidden,
        hidden2: args.dim,
        epochs: args.epochs,
        learning_rate: args.lr,
        seed: args.seed,
        mode: args.mode,
        negative_sampling: sampling,
    };
    let w = args.mode.weights(&g);
    let emb = train(&g, &x, &w, &cfg)?;
    let mut buf = Vec::new();
    write_embedding_csv(&emb.values, &mut buf).map_err(|source| Error::Io {
        path: args.out.clone(),
        source,
    })?;
    write_atomic(&args.out, &buf)?;
    let mut meta = RunMeta::new("embed", Some(args.seed));
    meta.param("graph", args.graph.display())
        .param("mode", args.mode)
        .param("hidden", args.hidden)
        .param("dim", args.dim)
        .param("epochs", args.epochs)
        .param("lr", args.lr)
        .param("negative_sampling", sampling)
        .param("nodes", g.node_count())
        .param("edges", g.edge_count())
        .param("initial_loss", emb.meta.initial_loss)
        .param("final_loss", emb.meta.final_loss);
    meta.finish(&args.out, started)
}

#[derive(Debug, Clone)]
pub struct FindArgs {
    pub embedding: PathBuf,
    pub size: usize,
    pub strategy: Strategy,
    pub epsilon: EpsilonSpec,
    pub out: PathBuf,
}

/// Select a tenuous subset from an embedding file and write it as JSON.
pub fn cmd_find(args: &FindArgs) -> Result<()> {
    let started = Instant::now();
    let z = read_embedding_csv(&args.embedding)?;
    let idx = SpatialIndex::new(z)?;
    let cfg = SelectConfig {
        size_k: args.size,
        strategy: args.strategy,
        epsilon: args.epsilon,
        binary_search_iters: 30,
    };
    let (nodes, eps) = find_subset(&idx, &cfg)?;
    let subset = SelectedSubset {
        epsilon: eps,
        strategy: args.strategy,
        nodes,
    };
    write_atomic(&args.out, &to_json_bytes(&subset)?)?;
    let mut meta = RunMeta::new("find", None);
    meta.param("embedding", args.embedding.display())
        .param("size", args.size)
        .param("strategy", args.strategy)
        .param("eps_used", eps)
        .param("subset_size", subset.nodes.len());
    meta.finish(&args.out, started)
}

/// Read subset node ids from JSON: either a bare array of ids or any
/// object with a "nodes" array, which covers the find command's output.
pub fn read_subset_nodes(path: &Path) -> Result<Vec<usize>> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        msg: e.to_string(),
    })?;
    let bad = |msg: &str| Error::Parse {
        path: path.to_path_buf(),
        line: 1,
        msg: msg.to_string(),
    };
    let arr = match &value {
        serde_json::Value::Array(a) => a,
        serde_json::Value::Object(o) => o
            .get("nodes")
            .and_then(|v| v.as_array())
            .ok_or_else(|| bad("expected an object with a \"nodes\" array"))?,
        _ => return Err(bad("expected a node array or an object with a \"nodes\" array")),
    };
    arr.iter()
        .map(|v| {
            v.as_u64()
                .map(|x| x as usize)
                .ok_or_else(|| bad("node ids must be non-negative integers"))
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct EvalArgs {
    pub graph: PathBuf,
    pub subset: PathBuf,
    pub k: usize,
    pub out: PathBuf,
}

/// Evaluate the tenuity of a subset file against a graph file.
pub fn cmd_eval(args: &EvalArgs) -> Result<()> {
    let started = Instant::now();
    let g = load_edge_list(&args.graph)?.graph;
    let nodes = read_subset_nodes(&args.subset)?;
    let t = TenuousSubset::new(&g, nodes, args.k)?;
    let r = report(&g, &t)?;
    write_atomic(&args.out, &to_json_bytes(&r)?)?;
    let mut meta = RunMeta::new("eval", None);
    meta.param("graph", args.graph.display())
        .param("subset", args.subset.display())
        .param("k", args.k)
        .param("subset_size", t.len())
        .param("pf_count", r.pf_count);
    meta.finish(&args.out, started)
}

#[derive(Debug, Clone)]
pub struct BaselineArgs {
    pub graph: PathBuf,
    pub size: usize,
    pub trials: usize,
    pub k: usize,
    pub seed: u64,
    pub out: PathBuf,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BaselineReport {
    pub trials: usize,
    pub size: usize,
    pub k: usize,
    pub seed: u64,
    pub min_pf: usize,
    pub median_pf: f64,
    pub max_pf: usize,
}

/// PF counts of `trials` uniform size-K subsets. The reference point
/// any selection strategy has to beat.
pub fn baseline_pf_counts(
    g: &Graph,
    size: usize,
    trials: usize,
    k: usize,
    seed: u64,
) -> Result<Vec<usize>> {
    if trials == 0 {
        return Err(Error::InvalidConfig("baseline needs at least one trial".into()));
    }
    if size == 0 || size > g.node_count() {
        return Err(Error::InfeasibleSize {
            requested: size,
            available: g.node_count(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(split_seed(seed, "baseline-trials"));
    let mut counts = Vec::with_capacity(trials);
    for _ in 0..trials {
        let nodes = rand::seq::index::sample(&mut rng, g.node_count(), size).into_vec();
        let t = TenuousSubset::new(g, nodes, k)?;
        counts.push(pf_set(g, &t)?.count());
    }
    Ok(counts)
}

/// Median of a count sample; the mean of the middle pair on even sizes.
pub fn median_of(counts: &[usize]) -> f64 {
    assert!(!counts.is_empty());
    let mut sorted = counts.to_vec();
    sorted.sort_unstable();
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2] as f64
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) as f64 / 2.0
    }
}

/// Evaluate random size-K subsets and write their PF spread as JSON.
pub fn cmd_baseline(args: &BaselineArgs) -> Result<()> {
    let started = Instant::now();
    let g = load_edge_list(&args.graph)?.graph;
    let counts = baseline_pf_counts(&g, args.size, args.trials, args.k, args.seed)?;
    let out = BaselineReport {
        trials: args.trials,
        size: args.size,
        k: args.k,
        seed: args.seed,
        min_pf: *counts.iter().min().unwrap(),
        median_pf: median_of(&counts),
        max_pf: *counts.iter().max().unwrap(),
    };
    write_atomic(&args.out, &to_json_bytes(&out)?)?;
    let mut meta = RunMeta::new("baseline", Some(args.seed));
    meta.param("graph", args.graph.display())
        .param("size", args.size)
        .param("trials", args.trials)
        .param("k", args.k);
    meta.finish(&args.out, started)
}

#[derive(Debug, Clone)]
pub struct BenchArgs {
    pub sizes: Vec<usize>,
    pub seed: u64,
    pub epochs: usize,
    pub mode: AggregationMode,
    pub dim: usize,
    pub out: PathBuf,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub size: usize,
    pub phase: &'static str,
    pub median_ms: f64,
}

const BENCH_PHASES: [&str; 4] = ["motif", "embed", "select", "eval"];
const BENCH_REPS: usize = 3;

/// Subset size for the timed selection: 2% of the nodes, at least 20.
/// Scaling K with N keeps the feasibility radius at a constant
/// selectivity, so the phase cost tracks the input size instead of a
/// radius whose neighborhoods swallow ever larger point fractions.
fn bench_subset_size(nodes: usize) -> usize {
    (nodes / 50).max(20)
}

/// Time each pipeline phase on generated graphs of the given sizes,
/// three repetitions per phase, reporting the median wall-clock.
/// `dim` sets the embedding width; selection cost depends on it sharply,
/// since exact range counting loses spatial pruning as dimension grows.
pub fn bench_sizes(
    sizes: &[usize],
    seed: u64,
    epochs: usize,
    mode: AggregationMode,
    dim: usize,
) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for &size in sizes {
        let spec = GenSpec {
            nodes: size,
            target_avg_degree: 2.746,
            max_degree: 5,
            seed: split_seed(seed, &format!("gen-{size}")),
        };
        let g = generate(&spec)?;
        let mut times: BTreeMap<&str, Vec<f64>> =
            BENCH_PHASES.iter().map(|&p| (p, Vec::new())).collect();
        for _ in 0..BENCH_REPS {
            let t0 = Instant::now();
            let w = mode.weights(&g);
            times.get_mut("motif").unwrap().push(ms_since(t0));

            let cfg = TrainConfig {
                hidden1: 32,
                hidden2: dim,
                epochs,
                learning_rate: 0.01,
                seed: split_seed(seed, &format!("embed-{size}")),
                mode,
                negative_sampling: true,
            };
            let t0 = Instant::now();
            let emb = train(&g, &FeatureMatrix::Identity, &w, &cfg)?;
            times.get_mut("embed").unwrap().push(ms_since(t0));

            let t0 = Instant::now();
            let idx = SpatialIndex::new(emb.values)?;
            let cfg = SelectConfig {
                size_k: bench_subset_size(size).min(size),
                strategy: Strategy::MaxDensity,
                epsilon: EpsilonSpec::Auto,
                binary_search_iters: 30,
            };
            let (nodes, _) = find_subset(&idx, &cfg)?;
            times.get_mut("select").unwrap().push(ms_since(t0));

            let t0 = Instant::now();
            let t = TenuousSubset::new(&g, nodes, 1)?;
            report(&g, &t)?;
            times.get_mut("eval").unwrap().push(ms_since(t0));
        }
        for phase in BENCH_PHASES {
            let mut samples = times[phase].clone();
            samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
            rows.push(BenchRow {
                size,
                phase,
                median_ms: samples[samples.len() / 2],
            });
        }
    }
    Ok(rows)
}

fn ms_since(t0: Instant) -> f64 {
    t0.elapsed().as_secs_f64() * 1e3
}

/// Run the phase benchmark and write a size,phase,median_ms CSV.
pub fn cmd_bench(args: &BenchArgs) -> Result<()> {
    let started = Instant::now();
    let rows = bench_sizes(&args.sizes, args.seed, args.epochs, args.mode, args.dim)?;
    let mut csv = String::from("size,phase,median_ms\n");
    for row in &rows {
        csv.push_str(&format!("{},{},{}\n", row.size, row.phase, row.median_ms));
    }
    write_atomic(&args.out, csv.as_bytes())?;
    let mut meta = RunMeta::new("bench", Some(args.seed));
    meta.param(
        "sizes",
        args.sizes
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(","),
    )
    .param("epochs", args.epochs)
    .param("mode", args.mode)
    .param("dim", args.dim);
    meta.finish(&args.out, started)
}

/// Comma-separated size list; empty or blank input is an empty list.
pub fn parse_sizes(raw: &str) -> Result<Vec<usize>> {
    let trimmed = raw.trim();
    if trimmed.is_empty() {
        return Ok(Vec::new());
    }
    trimmed
        .split(',')
        .map(|tok| {
            tok.trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidConfig(format!("invalid size {tok:?} in size list")))
        })
        .collect()
}
