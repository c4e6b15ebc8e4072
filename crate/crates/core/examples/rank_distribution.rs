//! Rank distribution for one named graph, with a rank-tolerance sweep and the
//! strict complementarity rate.
//!
//! ```text
//! cargo run --release --example rank_distribution -- [graph] [mode] [samples] [seed]
//! ```

use maxcut_sdp::experiments::{
    sample_outcomes, strict_complementarity_rate_of, tolerance_sweep, SampleConfig, WeightMode,
    SENSITIVITY_TOLS,
};
use maxcut_sdp::graph::NamedGraph;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let graph: NamedGraph = args.next().as_deref().unwrap_or("fish").parse()?;
    let mode: WeightMode = args.next().as_deref().unwrap_or("arbitrary").parse()?;
    let samples = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1000);
    let seed = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1);

    let cfg = SampleConfig::new(graph, mode, samples, seed);
    let outcomes = sample_outcomes(&cfg)?;
    for (tol, d) in tolerance_sweep(&outcomes, &SENSITIVITY_TOLS) {
        let pct: Vec<String> = d
            .fractions
            .iter()
            .map(|(r, f)| format!("r{r} {:.1}%", 100.0 * f))
            .collect();
        println!(
            "rank tol {tol:e}: {}  (excluded {})",
            pct.join(", "),
            d.excluded
        );
    }
    println!(
        "strict complementarity {:.1}%",
        100.0 * strict_complementarity_rate_of(&outcomes, cfg.rank_tol)
    );
    Ok(())
}
