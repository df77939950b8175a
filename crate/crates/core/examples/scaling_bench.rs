//! Time each pipeline phase across graph sizes. Prints the same CSV the
//! bench subcommand writes. Sizes can be passed as a comma-separated list.

use tenuo::embed::AggregationMode;
use tenuo::pipeline::{bench_sizes, parse_sizes};

fn main() -> tenuo::Result<()> {
    let raw = std::env::args().nth(1).unwrap_or_else(|| "200,400,800".into());
    let sizes = parse_sizes(&raw)?;
    let rows = bench_sizes(&sizes, 9, 30, AggregationMode::Motif, 16)?;
    println!("size,phase,median_ms");
    for row in rows {
        println!("{},{},{}", row.size, row.phase, row.median_ms);
    }
    Ok(())
}
