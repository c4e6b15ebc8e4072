//! Rank-1 test for weighted cycles, checked against the solver.
//!
//! ```text
//! cargo run --release --example cycle_rank1 -- 1,1,-1
//! ```

use maxcut_sdp::graph::weighted_cycle;
use maxcut_sdp::maxcut::rank1_certificate;
use maxcut_sdp::sdp::{rank_report, solve_default, SdpProblem, DEFAULT_RANK_TOL};
use maxcut_sdp::structure::{cycle_rank1_analysis, cycle_symmetric_minor_determinant};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cases: Vec<Vec<f64>> = match std::env::args().nth(1) {
        Some(list) => vec![list.split(',').map(str::parse).collect::<Result<_, _>>()?],
        None => vec![
            vec![1.0, 1.0, -1.0],
            vec![1.0, 1.0, 1.0],
            vec![0.2, 1.0, 1.0, 1.0, 1.0],
            vec![2.0, -1.0, 3.0, 0.5, -4.0],
        ],
    };
    for w in cases {
        let a = cycle_rank1_analysis(&w)?;
        let g = weighted_cycle(&w)?;
        let r = rank_report(&solve_default(&SdpProblem::maxcut(&g)), DEFAULT_RANK_TOL);
        println!("weights {w:?}");
        println!(
            "  rank-1: {} ({:?}), dominant margin {:+.4}",
            a.has_rank1, a.reason, a.dominant_margin
        );
        println!("  solver rank {}", r.rank_x);
        if let Some(x) = &a.optimal_cut {
            println!(
                "  unique optimal cut {:?}, certified: {}",
                x.entries(),
                rank1_certificate(&g, x, 1e-9)?
            );
        }
        let minors: Vec<String> = (1..w.len())
            .map(|m| cycle_symmetric_minor_determinant(&w, m).map(|d| format!("{d:.3}")))
            .collect::<Result<_, _>>()?;
        println!("  trailing minors of -L: {}", minors.join(" "));
    }
    Ok(())
}
