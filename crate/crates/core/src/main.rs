//! Command-line front end. All real work lives in the library's
//! pipeline module; this file only resolves flags against an optional
//! key=value config file and dispatches.

use clap::{Parser, Subcommand};
use std::fmt::Display;
use std::path::PathBuf;
use std::str::FromStr;
use tenuo::embed::AggregationMode;
use tenuo::error::{Error, Result};
use tenuo::pipeline::{self, ConfigMap};
use tenuo::select::{EpsilonSpec, Strategy};

#[derive(Parser)]
#[command(name = "tenuo", version, about = "Tenuous subgraph mining: generate, embed, select, evaluate")]
struct Cli {
    /// key=value config file; explicit flags override its entries
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a degree-capped random graph edge list
    Gen {
        #[arg(long)]
        nodes: Option<usize>,
        #[arg(long = "avg-degree")]
        avg_degree: Option<f64>,
        #[arg(long = "max-degree")]
        max_degree: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Train node embeddings from an edge list
    Embed {
        #[arg(long)]
        graph: Option<PathBuf>,
        /// optional dense feature CSV; identity features otherwise
        #[arg(long)]
        features: Option<PathBuf>,
        /// aggregation mode: motif or symnorm
        #[arg(long)]
        mode: Option<String>,
        /// first hidden layer width
        #[arg(long)]
        hidden: Option<usize>,
        /// embedding dimension
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        epochs: Option<usize>,
        #[arg(long)]
        lr: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        /// force sampling on or off; defaults by graph size
        #[arg(long = "negative-sampling")]
        negative_sampling: Option<bool>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Select a tenuous subset from an embedding CSV
    Find {
        #[arg(long)]
        embedding: Option<PathBuf>,
        /// minimum subset size K
        #[arg(long)]
        size: Option<usize>,
        /// density strategy: max or min
        #[arg(long)]
        strategy: Option<String>,
        /// separation radius: auto or a positive real
        #[arg(long)]
        epsilon: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute tenuity metrics for a subset JSON against a graph
    Eval {
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        subset: Option<PathBuf>,
        /// hop bound for all distance tests
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// PF spread of uniform random subsets, for comparison
    Baseline {
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        size: Option<usize>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time pipeline phases on generated graphs of the given sizes
    Bench {
        /// comma-separated node counts, e.g. 1000,5000
        #[arg(long)]
        sizes: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        epochs: Option<usize>,
        #[arg(long)]
        mode: Option<String>,
        /// embedding width used for the timed runs
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Flag-over-config resolution. Keys are the long flag names.
struct Resolver {
    cfg: ConfigMap,
}

impl Resolver {
    fn req<T>(&self, flag: Option<T>, key: &str) -> Result<T>
    where
        T: FromStr,
        T::Err: Display,
    {
        match flag {
            Some(v) => Ok(v),
            None => self.cfg.get_parsed(key)?.ok_or_else(|| {
                Error::InvalidConfig(format!("missing required option --{key}"))
            }),
        }
    }

    fn opt<T>(&self, flag: Option<T>, key: &str) -> Result<Option<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.cfg.get_parsed(key),
        }
    }

    fn or<T>(&self, flag: Option<T>, key: &str, default: T) -> Result<T>
    where
        T: FromStr,
        T::Err: Display,
    {
        Ok(self.opt(flag, key)?.unwrap_or(default))
    }
}

fn parse_flag<T>(raw: Option<String>, what: &str) -> Result<Option<T>>
where
    T: FromStr<Err = Error>,
{
    raw.map(|s| {
        s.parse::<T>()
            .map_err(|e| Error::InvalidConfig(format!("--{what}: {e}")))
    })
    .transpose()
}

fn run(cli: Cli) -> Result<()> {
    let cfg = match &cli.config {
        Some(path) => ConfigMap::load(path)?,
        None => ConfigMap::empty(),
    };
    let r = Resolver { cfg };
    match cli.command {
        Cmd::Gen {
            nodes,
            avg_degree,
            max_degree,
            seed,
            out,
        } => pipeline::cmd_gen(&pipeline::GenArgs {
            nodes: r.req(nodes, "nodes")?,
            avg_degree: r.req(avg_degree, "avg-degree")?,
            max_degree: r.req(max_degree, "max-degree")?,
            seed: r.or(seed, "seed", 0)?,
            out: r.req(out, "out")?,
        }),
        Cmd::Embed {
            graph,
            features,
            mode,
            hidden,
            dim,
            epochs,
            lr,
            seed,
            negative_sampling,
            out,
        } => pipeline::cmd_embed(&pipeline::EmbedArgs {
            graph: r.req(graph, "graph")?,
            features: r.opt(features, "features")?,
            mode: r.or(
                parse_flag::<AggregationMode>(mode, "mode")?,
                "mode",
                AggregationMode::Motif,
            )?,
            hidden: r.or(hidden, "hidden", 32)?,
            dim: r.or(dim, "dim", 16)?,
            epochs: r.or(epochs, "epochs", 200)?,
            lr: r.or(lr, "lr", 0.01)?,
            seed: r.or(seed, "seed", 0)?,
            negative_sampling: r.opt(negative_sampling, "negative-sampling")?,
            out: r.req(out, "out")?,
        }),
        Cmd::Find {
            embedding,
            size,
            strategy,
            epsilon,
            out,
        } => pipeline::cmd_find(&pipeline::FindArgs {
            embedding: r.req(embedding, "embedding")?,
            size: r.req(size, "size")?,
            strategy: r.or(
                parse_flag::<Strategy>(strategy, "strategy")?,
                "strategy",
                Strategy::MaxDensity,
            )?,
            epsilon: r.or(
                parse_flag::<EpsilonSpec>(epsilon, "epsilon")?,
                "epsilon",
                EpsilonSpec::Auto,
            )?,
            out: r.req(out, "out")?,
        }),
        Cmd::Eval {
            graph,
            subset,
            k,
            out,
        } => pipeline::cmd_eval(&pipeline::EvalArgs {
            graph: r.req(graph, "graph")?,
            subset: r.req(subset, "subset")?,
            k: r.or(k, "k", 1)?,
            out: r.req(out, "out")?,
        }),
        Cmd::Baseline {
            graph,
            size,
            trials,
            k,
            seed,
            out,
        } => pipeline::cmd_baseline(&pipeline::BaselineArgs {
            graph: r.req(graph, "graph")?,
            size: r.req(size, "size")?,
            trials: r.or(trials, "trials", 50)?,
            k: r.or(k, "k", 1)?,
            seed: r.or(seed, "seed", 0)?,
            out: r.req(out, "out")?,
        }),
        Cmd::Bench {
            sizes,
            seed,
            epochs,
            mode,
            dim,
            out,
        } => {
            let raw = match sizes {
                Some(s) => s,
                None => r
                    .cfg
                    .get("sizes")
                    .map(str::to_string)
                    .ok_or_else(|| Error::InvalidConfig("missing required option --sizes".into()))?,
            };
            pipeline::cmd_bench(&pipeline::BenchArgs {
                sizes: pipeline::parse_sizes(&raw)?,
                seed: r.or(seed, "seed", 0)?,
                epochs: r.or(epochs, "epochs", 50)?,
                mode: r.or(
                    parse_flag::<AggregationMode>(mode, "mode")?,
                    "mode",
                    AggregationMode::Motif,
                )?,
                dim: r.or(dim, "dim", 16)?,
                out: r.req(out, "out")?,
            })
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
