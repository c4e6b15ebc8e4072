//! Solves the relaxation of a weighted graph and reports ranks, optimality
//! residuals and the brute-force optimum.
//!
//! ```text
//! cargo run --release --example solve -- [graph.json]
//! ```
//!
//! Without an argument the unit-weight triangle is used, whose relaxation has
//! value 9/4 against a best cut of 2.

use maxcut_sdp::graph::{complete, WeightedGraph};
use maxcut_sdp::maxcut::{brute_force_maxcut, recover_cut_if_rank1, sdp_value};
use maxcut_sdp::sdp::{check_optimality, rank_report, solve_default, SdpProblem, DEFAULT_RANK_TOL};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = match std::env::args().nth(1) {
        Some(path) => WeightedGraph::from_json_str(&std::fs::read_to_string(path)?)?,
        None => complete(3),
    };
    let p = SdpProblem::maxcut(&g);
    let sol = solve_default(&p);
    println!(
        "status {:?} after {} iterations",
        sol.status, sol.iterations
    );
    println!(
        "sdp value {:.9}  (dual {:.9}, gap {:.1e})",
        sdp_value(&g, &sol),
        sol.dual_value,
        sol.gap
    );

    let r = rank_report(&sol, DEFAULT_RANK_TOL);
    println!(
        "rank X = {}, rank S = {}, strictly complementary: {}",
        r.rank_x, r.rank_s, r.strictly_complementary
    );
    let eig: Vec<String> = r.eigenvalues_x.iter().map(|v| format!("{v:.3e}")).collect();
    println!("eigenvalues of X: {}", eig.join(" "));

    let opt = check_optimality(&p, &sol.x, &sol.s, 1e-6)?;
    println!(
        "optimality residual {:.1e}, passes at 1e-6: {}",
        opt.complementarity, opt.optimal
    );

    let bf = brute_force_maxcut(&g)?;
    println!("max cut {} at {:?}", bf.value, bf.x.entries());
    if let Some(x) = recover_cut_if_rank1(&sol, DEFAULT_RANK_TOL) {
        println!("relaxation is tight; its cut is {:?}", x.entries());
    }
    Ok(())
}
