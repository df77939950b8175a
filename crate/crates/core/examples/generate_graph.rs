//! Generate a degree-capped random graph and print a degree profile.
//!
//! Usage: cargo run --example generate_graph [nodes] [avg_degree] [max_degree] [seed]

use tenuo::datagen::{generate, GenSpec};

fn main() -> tenuo::Result<()> {
    let mut args = std::env::args().skip(1);
    let spec = GenSpec {
        nodes: args.next().and_then(|s| s.parse().ok()).unwrap_or(1000),
        target_avg_degree: args.next().and_then(|s| s.parse().ok()).unwrap_or(2.746),
        max_degree: args.next().and_then(|s| s.parse().ok()).unwrap_or(5),
        seed: args.next().and_then(|s| s.parse().ok()).unwrap_or(7),
    };
    let g = generate(&spec)?;

    println!(
        "generated {} nodes, {} edges (target {})",
        g.node_count(),
        g.edge_count(),
        (spec.nodes as f64 * spec.target_avg_degree / 2.0).round() as usize
    );
    println!(
        "average degree {:.3}",
        2.0 * g.edge_count() as f64 / g.node_count() as f64
    );

    let mut hist = vec![0usize; spec.max_degree + 1];
    for u in 0..g.node_count() {
        hist[g.degree(u)] += 1;
    }
    println!("degree histogram:");
    for (d, count) in hist.iter().enumerate() {
        println!("  deg {}: {}", d, count);
    }

    let mut out = Vec::new();
    g.write_edge_list(&mut out).expect("write to memory");
    println!("edge list is {} bytes; first lines:", out.len());
    for line in String::from_utf8(out).unwrap().lines().take(5) {
        println!("  {}", line);
    }
    Ok(())
}
