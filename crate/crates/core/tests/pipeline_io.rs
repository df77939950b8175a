// Command-level contracts: artifact round trips, reproducibility, and the
// process-facing error behavior of the CLI binary.

mod common;

use std::path::{Path, PathBuf};
use std::process::Command;

use tenuo::embed::AggregationMode;
use tenuo::pipeline::{
    self, bench_sizes, meta_path, read_subset_nodes, BaselineArgs, BenchArgs, EmbedArgs, EvalArgs,
    FindArgs, GenArgs,
};
use tenuo::select::{count_eps_pairs, EpsilonSpec, SpatialIndex, Strategy};

fn read(path: &Path) -> Vec<u8> {
    std::fs::read(path).unwrap_or_else(|e| panic!("read {}: {e}", path.display()))
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_slice(&read(path)).unwrap_or_else(|e| panic!("parse {}: {e}", path.display()))
}

/// Four-node example graph: a 4-cycle 1-2-4-3-1 with chord 2-3. Node 0
/// stays isolated so ids match the one-based drawing.
const EXAMPLE_EDGES: &str = "1 2\n1 3\n2 3\n2 4\n3 4\n";

fn gen_args(dir: &Path, seed: u64, name: &str) -> GenArgs {
    GenArgs {
        nodes: 120,
        avg_degree: 2.746,
        max_degree: 5,
        seed,
        out: dir.join(name),
    }
}

fn embed_args(graph: PathBuf, seed: u64, out: PathBuf) -> EmbedArgs {
    EmbedArgs {
        graph,
        features: None,
        mode: AggregationMode::Motif,
        hidden: 16,
        dim: 4,
        epochs: 15,
        lr: 0.01,
        seed,
        negative_sampling: None,
        out,
    }
}

#[test]
fn artifacts_reproduce_byte_identically_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();

    let a = gen_args(d, 7, "a.edges");
    let b = gen_args(d, 7, "b.edges");
    pipeline::cmd_gen(&a).unwrap();
    pipeline::cmd_gen(&b).unwrap();
    assert_eq!(read(&a.out), read(&b.out), "same seed, same edge list");

    let other = gen_args(d, 8, "c.edges");
    pipeline::cmd_gen(&other).unwrap();
    assert_ne!(read(&a.out), read(&other.out), "different seed, different graph");

    let ea = embed_args(a.out.clone(), 3, d.join("a.emb"));
    let eb = embed_args(b.out.clone(), 3, d.join("b.emb"));
    pipeline::cmd_embed(&ea).unwrap();
    pipeline::cmd_embed(&eb).unwrap();
    assert_eq!(read(&ea.out), read(&eb.out), "same seed, same embedding");

    let fa = FindArgs {
        embedding: ea.out.clone(),
        size: 10,
        strategy: Strategy::MaxDensity,
        epsilon: EpsilonSpec::Auto,
        out: d.join("a.subset.json"),
    };
    let fb = FindArgs { embedding: eb.out.clone(), out: d.join("b.subset.json"), ..fa.clone() };
    pipeline::cmd_find(&fa).unwrap();
    pipeline::cmd_find(&fb).unwrap();
    assert_eq!(read(&fa.out), read(&fb.out), "selection is deterministic");

    // every artifact carries a sibling metadata file with the seed inside
    for (artifact, seed) in [(&a.out, 7u64), (&ea.out, 3u64)] {
        let meta = json(&meta_path(artifact));
        assert_eq!(meta["seed"], serde_json::json!(seed));
        assert!(meta["duration_ms"].as_f64().unwrap() >= 0.0);
        assert!(meta["params"].is_object());
    }
}

#[test]
fn find_output_satisfies_its_own_contract() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let g = gen_args(d, 21, "g.edges");
    pipeline::cmd_gen(&g).unwrap();
    let e = embed_args(g.out.clone(), 5, d.join("g.emb"));
    pipeline::cmd_embed(&e).unwrap();
    let f = FindArgs {
        embedding: e.out.clone(),
        size: 12,
        strategy: Strategy::MaxDensity,
        epsilon: EpsilonSpec::Auto,
        out: d.join("g.subset.json"),
    };
    pipeline::cmd_find(&f).unwrap();

    let nodes = read_subset_nodes(&f.out).unwrap();
    assert!(nodes.len() >= 12, "subset meets the requested size");
    let doc = json(&f.out);
    let eps = doc["epsilon"].as_f64().unwrap();
    assert!(eps >= 0.0);

    let z = tenuo::embed::read_embedding_csv(&e.out).unwrap();
    let idx = SpatialIndex::new(z).unwrap();
    assert_eq!(count_eps_pairs(&idx, &nodes, eps).unwrap(), 0, "pairwise separation holds");
}

#[test]
fn eval_report_is_order_independent_and_matches_hand_count() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let graph = d.join("fig.edges");
    std::fs::write(&graph, EXAMPLE_EDGES).unwrap();

    let forward = d.join("fwd.json");
    let backward = d.join("bwd.json");
    std::fs::write(&forward, "[1, 4]").unwrap();
    std::fs::write(&backward, "{\"nodes\": [4, 1]}").unwrap();

    let out_f = d.join("fwd.report.json");
    let out_b = d.join("bwd.report.json");
    pipeline::cmd_eval(&EvalArgs { graph: graph.clone(), subset: forward, k: 1, out: out_f.clone() })
        .unwrap();
    pipeline::cmd_eval(&EvalArgs { graph: graph.clone(), subset: backward, k: 1, out: out_b.clone() })
        .unwrap();
    assert_eq!(read(&out_f), read(&out_b), "node order in the subset file is irrelevant");

    // 1 and 4 sit two hops apart, but 2 and 3 witness the pair twice
    let r = json(&out_f);
    assert_eq!(r["k_line_count"], 0);
    assert_eq!(r["k_triangle_count"], 0);
    assert_eq!(r["pf_count"], 2);

    // cross-check against the brute-force oracle on the same inputs
    let edges = [(1, 2), (1, 3), (2, 3), (2, 4), (3, 4)];
    let dist = common::distance_table(5, &edges);
    assert_eq!(common::brute_pf_count(&dist, &[1, 4], 1), 2);
}

#[test]
fn baseline_report_brackets_the_median() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let g = gen_args(d, 13, "g.edges");
    pipeline::cmd_gen(&g).unwrap();
    let out = d.join("base.json");
    pipeline::cmd_baseline(&BaselineArgs {
        graph: g.out.clone(),
        size: 8,
        trials: 25,
        k: 1,
        seed: 99,
        out: out.clone(),
    })
    .unwrap();
    let r = json(&out);
    let (min, med, max) = (
        r["min_pf"].as_u64().unwrap() as f64,
        r["median_pf"].as_f64().unwrap(),
        r["max_pf"].as_u64().unwrap() as f64,
    );
    assert!(min <= med && med <= max);
    assert_eq!(r["trials"], 25);
}

#[test]
fn bench_emits_one_row_per_phase_and_size() {
    let rows = bench_sizes(&[1000], 3, 5, AggregationMode::Motif, 2).unwrap();
    let phases: Vec<&str> = rows.iter().map(|r| r.phase).collect();
    assert_eq!(phases, ["motif", "embed", "select", "eval"]);
    assert!(rows.iter().all(|r| r.size == 1000 && r.median_ms >= 0.0));

    // an empty size list still writes a well-formed header-only CSV
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bench.csv");
    pipeline::cmd_bench(&BenchArgs {
        sizes: vec![],
        seed: 3,
        epochs: 5,
        mode: AggregationMode::Motif,
        dim: 2,
        out: out.clone(),
    })
    .unwrap();
    assert_eq!(String::from_utf8(read(&out)).unwrap(), "size,phase,median_ms\n");
}

// Process-level checks against the installed binary.

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tenuo"))
}

#[test]
fn cli_failures_use_exit_code_one_and_a_single_error_line() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let graph = d.join("fig.edges");
    std::fs::write(&graph, EXAMPLE_EDGES).unwrap();

    // an embedding with fewer points than the requested subset size
    let emb = d.join("tiny.emb");
    std::fs::write(&emb, "node,d0,d1\n0,0.0,0.0\n1,1.0,0.0\n2,0.0,1.0\n").unwrap();
    let out = d.join("never.json");
    let res = bin()
        .args(["find", "--embedding"])
        .arg(&emb)
        .args(["--size", "9", "--strategy", "max", "--epsilon", "auto", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(res.status.code(), Some(1));
    let stderr = String::from_utf8(res.stderr).unwrap();
    assert_eq!(stderr.lines().count(), 1, "one machine-parsable line: {stderr:?}");
    assert!(stderr.starts_with("error: "), "stderr was {stderr:?}");
    assert!(stderr.contains("infeasible size constraint"), "stderr was {stderr:?}");
    assert!(!out.exists(), "failed command must not leave an artifact");
    assert!(!meta_path(&out).exists(), "failed command must not leave metadata");

    // missing required flag resolves the same way
    let res = bin().args(["gen", "--nodes", "10"]).output().unwrap();
    assert_eq!(res.status.code(), Some(1));
    let stderr = String::from_utf8(res.stderr).unwrap();
    assert!(stderr.starts_with("error: "), "stderr was {stderr:?}");
    assert_eq!(stderr.lines().count(), 1);
}

#[test]
fn cli_config_file_supplies_defaults_and_flags_override_it() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = d.join("g.edges");
    let cfg = d.join("run.cfg");
    std::fs::write(
        &cfg,
        format!(
            "# defaults for the whole run\nnodes = 40\navg-degree = 2.5\nmax-degree = 5\nseed = 4\nout = {}\n",
            out.display()
        ),
    )
    .unwrap();

    let res = bin().arg("gen").arg("--config").arg(&cfg).output().unwrap();
    assert!(res.status.success(), "stderr: {}", String::from_utf8_lossy(&res.stderr));
    let meta = json(&meta_path(&out));
    assert_eq!(meta["params"]["nodes"], "40");

    // a flag on the command line beats the config entry
    let res = bin()
        .arg("gen")
        .arg("--config")
        .arg(&cfg)
        .args(["--nodes", "25"])
        .output()
        .unwrap();
    assert!(res.status.success(), "stderr: {}", String::from_utf8_lossy(&res.stderr));
    let meta = json(&meta_path(&out));
    assert_eq!(meta["params"]["nodes"], "25");
}

#[test]
fn cli_pipeline_runs_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let graph = d.join("g.edges");
    let emb = d.join("g.emb");
    let subset = d.join("g.subset.json");
    let rep = d.join("g.report.json");

    let steps: Vec<Vec<String>> = vec![
        vec![
            "gen".into(),
            "--nodes".into(), "150".into(),
            "--avg-degree".into(), "2.746".into(),
            "--max-degree".into(), "5".into(),
            "--seed".into(), "11".into(),
            "--out".into(), graph.display().to_string(),
        ],
        vec![
            "embed".into(),
            "--graph".into(), graph.display().to_string(),
            "--mode".into(), "motif".into(),
            "--hidden".into(), "16".into(),
            "--dim".into(), "4".into(),
            "--epochs".into(), "15".into(),
            "--lr".into(), "0.01".into(),
            "--seed".into(), "11".into(),
            "--out".into(), emb.display().to_string(),
        ],
        vec![
            "find".into(),
            "--embedding".into(), emb.display().to_string(),
            "--size".into(), "10".into(),
            "--strategy".into(), "max".into(),
            "--epsilon".into(), "auto".into(),
            "--out".into(), subset.display().to_string(),
        ],
        vec![
            "eval".into(),
            "--graph".into(), graph.display().to_string(),
            "--subset".into(), subset.display().to_string(),
            "--k".into(), "1".into(),
            "--out".into(), rep.display().to_string(),
        ],
    ];
    for step in steps {
        let res = bin().args(&step).output().unwrap();
        assert!(
            res.status.success(),
            "step {:?} failed: {}",
            step[0],
            String::from_utf8_lossy(&res.stderr)
        );
    }
    let r = json(&rep);
    for key in ["k_line_count", "k_triangle_count", "pf_count", "pf_pairs", "pf_triples", "subset_size"] {
        assert!(r.get(key).is_some(), "report missing {key}");
    }
    assert_eq!(r["subset_size"].as_u64().unwrap() as usize, read_subset_nodes(&subset).unwrap().len());
}
