//! Pick spread-out points from a clustered cloud with the greedy
//! density sweep, letting the binary search settle the radius.

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tenuo::select::{
    count_eps_pairs, find_subset, EpsilonSpec, SelectConfig, SpatialIndex, Strategy,
};

fn main() -> tenuo::Result<()> {
    // Three tight clusters of 30 points each in the plane.
    let centers = [(0.0, 0.0), (10.0, 0.0), (5.0, 8.0)];
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut points = Array2::zeros((90, 2));
    for (i, mut row) in points.rows_mut().into_iter().enumerate() {
        let (cx, cy) = centers[i / 30];
        row[0] = cx + rng.random_range(-0.5..0.5);
        row[1] = cy + rng.random_range(-0.5..0.5);
    }
    let idx = SpatialIndex::new(points)?;

    for strategy in [Strategy::MaxDensity, Strategy::MinDensity] {
        let cfg = SelectConfig {
            size_k: 6,
            strategy,
            epsilon: EpsilonSpec::Auto,
            ..SelectConfig::default()
        };
        let (nodes, eps) = find_subset(&idx, &cfg)?;
        let close = count_eps_pairs(&idx, &nodes, eps)?;
        println!(
            "{:<4} eps {:.4}: {} nodes, {} pairs within eps (must be 0)",
            strategy.to_string(),
            eps,
            nodes.len(),
            close
        );
        for &u in &nodes {
            let p = idx.point(u);
            println!("  node {:>2} at ({:>6.2}, {:>6.2})", u, p[0], p[1]);
        }
    }
    Ok(())
}
