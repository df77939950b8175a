//! Tenuous subgraph mining: find node sets with minimal latent social
//! proximity by embedding a graph with motif-weighted graph
//! convolutions, then selecting well-separated points in the embedding
//! space, and score results with distance-based tenuity metrics.
//!
//! The pipeline runs in four stages, each usable on its own:
//!
//! 1. [`motif`] counts per-edge triangle support and builds aggregation
//!    weights from it (or degree-normalized weights for the ablation).
//! 2. [`embed`] trains a two-layer graph-convolutional autoencoder with
//!    a hand-derived backward pass and produces node vectors.
//! 3. [`select`] finds a subset whose pairwise embedding distances all
//!    exceed a separation radius, binary-searching the radius to honor
//!    a minimum size K.
//! 4. [`tenuity`] measures any subset on the original graph: k-lines,
//!    k-triangles, and the potential-friend count that a tenuous
//!    subset should keep small.
//!
//! [`graph`] holds the shared graph type, [`datagen`] produces seeded
//! benchmark graphs, and [`pipeline`] wires the stages into the file
//! formats used by the `tenuo` binary.
//!
//! Runnable walkthroughs live in `examples/`:
//!
//! - `generate_graph` builds a degree-capped random graph
//! - `motif_weights` inspects triangle counts and aggregation weights
//! - `train_embedding` trains the autoencoder in both modes
//! - `find_subset` searches the separation radius for a fixed K
//! - `evaluate_tenuity` scores subsets with the metric suite
//! - `pipeline_end_to_end` chains the file-based commands
//! - `scaling_bench` times each phase across graph sizes

pub mod datagen;
pub mod embed;
pub mod error;
pub mod graph;
pub mod motif;
pub mod pipeline;
pub mod select;
pub mod tenuity;

pub use error::{Error, Result};
