//! Score candidate subsets of one small graph by how few k-lines,
//! k-triangles, and potential formations they touch.

use tenuo::graph::Graph;
use tenuo::tenuity::{pf_set, report, TenuousSubset};

fn main() -> tenuo::Result<()> {
    // Two triangles sharing the edge 2-3, node 0 isolated.
    let g = Graph::from_edges(5, &[(1, 2), (1, 3), (2, 3), (2, 4), (3, 4)]);

    for (label, nodes) in [
        ("adjacent pair", vec![2, 3]),
        ("distant pair", vec![1, 4]),
        ("with isolated node", vec![0, 1, 4]),
    ] {
        let t = TenuousSubset::new(&g, nodes.clone(), 1)?;
        let r = report(&g, &t)?;
        println!(
            "{:<20} {:?}: {} k-lines, {} k-triangles, PF {} ({} pairs + {} triples)",
            label, nodes, r.k_line_count, r.k_triangle_count, r.pf_count, r.pf_pairs, r.pf_triples
        );
        let pf = pf_set(&g, &t)?;
        for &(u, v) in &pf.pairs {
            println!("    pair   ({}, {})", u, v);
        }
        for &(u, v, w) in &pf.triples {
            println!("    triple ({}, {}, {})", u, v, w);
        }
    }
    println!("\nlower PF means the subset is harder to entangle in future formations.");
    Ok(())
}
