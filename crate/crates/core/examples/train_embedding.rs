//! Train a two-layer graph autoencoder on a generated graph, once per
//! aggregation mode, and report the reconstruction loss drop.

use tenuo::datagen::{generate, GenSpec};
use tenuo::embed::{train, AggregationMode, FeatureMatrix, TrainConfig};

fn main() -> tenuo::Result<()> {
    let g = generate(&GenSpec {
        nodes: 200,
        target_avg_degree: 4.0,
        max_degree: 8,
        seed: 11,
    })?;
    println!("graph: {} nodes, {} edges", g.node_count(), g.edge_count());

    for mode in [AggregationMode::Motif, AggregationMode::SymNorm] {
        let cfg = TrainConfig {
            hidden1: 32,
            hidden2: 16,
            epochs: 80,
            learning_rate: 0.01,
            seed: 3,
            mode,
            negative_sampling: false,
        };
        let w = mode.weights(&g);
        let emb = train(&g, &FeatureMatrix::Identity, &w, &cfg)?;
        println!(
            "{:<8} loss {:.6} -> {:.6} over {} epochs, output {}x{}",
            mode.as_str(),
            emb.meta.initial_loss,
            emb.meta.final_loss,
            emb.meta.epochs,
            emb.values.nrows(),
            emb.values.ncols(),
        );
    }
    Ok(())
}
