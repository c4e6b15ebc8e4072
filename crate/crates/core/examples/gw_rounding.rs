//! Hyperplane rounding of the relaxation on random nonnegative graphs,
//! against the exact maximum cut.
//!
//! ```text
//! cargo run --release --example gw_rounding -- [seed]
//! ```

use maxcut_sdp::experiments::{sample_weights_at, WeightMode};
use maxcut_sdp::graph::complete;
use maxcut_sdp::maxcut::{brute_force_maxcut, gw_round, sdp_value};
use maxcut_sdp::sdp::{solve_default, SdpProblem};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed: u64 = std::env::args()
        .nth(1)
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or(1);
    println!(
        "{:>3} {:>10} {:>10} {:>10} {:>7}",
        "n", "sdp", "rounded", "max cut", "ratio"
    );
    for n in 4..=10 {
        let topo = complete(n);
        let g = topo.with_weights(&sample_weights_at(
            topo.edge_count(),
            WeightMode::Positive,
            seed,
            n as u64,
        )?)?;
        let sol = solve_default(&SdpProblem::maxcut(&g));
        let r = gw_round(&g, &sol, 100, seed)?;
        let best = brute_force_maxcut(&g)?.value;
        println!(
            "{n:>3} {:>10.5} {:>10.5} {:>10.5} {:>7.4}",
            sdp_value(&g, &sol),
            r.value,
            best,
            r.value / best
        );
    }
    Ok(())
}
