//! Builds the optimal pair of a vertex sum from the optimal pairs of its two
//! parts, and a lower-rank optimum from the same blocks.
//!
//! ```text
//! cargo run --release --example vertex_sum
//! ```

use maxcut_sdp::graph::{vertex_sum, CliqueSumSpec, NamedGraph};
use maxcut_sdp::sdp::{
    check_optimality, numerical_rank, solve_default, SdpProblem, DEFAULT_RANK_TOL,
};
use maxcut_sdp::structure::{compose_vertex_sum, vertex_sum_low_rank_completion};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // A rank-2 triangle glued to a 4-cycle with one negative edge.
    let g1 = NamedGraph::K3.build(None)?;
    let g2 = NamedGraph::C4.build(Some(&[1.0, -2.0, 1.0, 0.5]))?;
    let spec = CliqueSumSpec {
        g1: g1.clone(),
        g2: g2.clone(),
        map1: vec![2],
        map2: vec![0],
    };
    let sum = vertex_sum(&spec)?.graph;

    let s1 = solve_default(&SdpProblem::maxcut(&g1));
    let s2 = solve_default(&SdpProblem::maxcut(&g2));
    let c = compose_vertex_sum(&s1.x, &s1.s, &s2.x, &s2.s, 1e-6, DEFAULT_RANK_TOL)?;
    let p = SdpProblem::maxcut(&sum);
    let rep = check_optimality(&p, &c.x_composed, &c.s_composed, 1e-6)?;
    println!("ranks of the parts: {} and {}", c.rank_x1, c.rank_x2);
    println!(
        "composed X has rank {} (formula {}), optimal on the sum: {}",
        numerical_rank(&c.x_composed, DEFAULT_RANK_TOL),
        c.rank_formula_value,
        rep.optimal
    );

    let direct = solve_default(&p);
    println!(
        "value via composition {:.8}, direct solve {:.8}",
        p.cost().dot(&c.x_composed),
        direct.primal_value
    );

    let low = vertex_sum_low_rank_completion(&s1.x, &s2.x, DEFAULT_RANK_TOL);
    let rep = check_optimality(&p, &low, &c.s_composed, 1e-6)?;
    println!(
        "low-rank optimum has rank {}, optimal: {}",
        numerical_rank(&low, DEFAULT_RANK_TOL),
        rep.optimal
    );
    Ok(())
}
