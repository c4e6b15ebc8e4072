//! Tests the conjectured dual for an edge sum of two triangles on random
//! weights and prints the tallies.
//!
//! ```text
//! cargo run --release --example conjecture_probe -- [samples] [seed]
//! ```

use maxcut_sdp::experiments::{probe_edge_sum_conjecture, WeightMode};
use maxcut_sdp::graph::{complete, CliqueSumSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let samples = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1000);
    let seed = args.next().map(|s| s.parse()).transpose()?.unwrap_or(5);
    let spec = CliqueSumSpec {
        g1: complete(3),
        g2: complete(3),
        map1: vec![1, 2],
        map2: vec![0, 1],
    };
    for mode in [WeightMode::Arbitrary, WeightMode::Positive] {
        let r = probe_edge_sum_conjecture(&spec, mode, samples, seed)?;
        println!(
            "{mode}: {} evaluated, {} skipped, {} unconverged",
            r.evaluated, r.skipped, r.unconverged
        );
        println!(
            "  conjectured form optimal in {} ({} with +, {} with -), fails in {}",
            r.agree, r.plus_sign_optimal, r.minus_sign_optimal, r.disagree
        );
        println!(
            "  corrected form optimal in {}, rank-1 sum optimum in {}",
            r.corrected_form_optimal, r.sum_rank1
        );
        if let Some(c) = r.counterexamples.first() {
            println!(
                "  first counterexample: sample {} weights {:.3?}",
                c.index, c.weights
            );
        }
    }
    Ok(())
}
