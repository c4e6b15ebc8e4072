//! Rank distributions for the seven table graphs under both weight modes,
//! next to the published percentages.
//!
//! ```text
//! cargo run --release --example table1 -- [samples] [seed]
//! ```

use maxcut_sdp::experiments::{table1_row, SampleConfig, WeightMode};
use maxcut_sdp::graph::NamedGraph;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let samples = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1000);
    let seed = args.next().map(|s| s.parse()).transpose()?.unwrap_or(2024);

    println!(
        "{:<10} {:<9} {:>22} {:>22} {:>5} {:>4}",
        "graph", "mode", "observed r1/r2/r3 %", "published %", "excl", "CI"
    );
    for mode in [WeightMode::Arbitrary, WeightMode::Positive] {
        for g in NamedGraph::TABLE {
            let row = table1_row(&SampleConfig::new(g, mode, samples, seed))?;
            let pct = |v: [f64; 3]| {
                format!(
                    "{:5.1} {:5.1} {:5.1}",
                    100.0 * v[0],
                    100.0 * v[1],
                    100.0 * v[2]
                )
            };
            println!(
                "{:<10} {:<9} {:>22} {:>22} {:>5} {:>4}",
                g.to_string(),
                mode.to_string(),
                pct(row.observed),
                pct(row.reference),
                row.excluded,
                if row.all_within_ci() { "ok" } else { "out" }
            );
            if !row.all_within_ci() {
                for (tol, f) in &row.sensitivity {
                    println!("{:>21} rank tol {tol:e}: {}", "", pct(*f));
                }
            }
        }
    }
    Ok(())
}
