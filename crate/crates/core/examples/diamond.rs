//! Diamond regimes: when the optimum of two triangles sharing an edge is a
//! rank-1 cut, which cut it is, and its dual.
//!
//! ```text
//! cargo run --release --example diamond -- [w01,w02,w12,w13,w23]
//! ```

use maxcut_sdp::maxcut::{brute_force_maxcut, rank1_certificate};
use maxcut_sdp::structure::{diamond_analysis, DiamondWeights};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cases: Vec<[f64; 5]> = match std::env::args().nth(1) {
        Some(list) => {
            let v: Vec<f64> = list.split(',').map(str::parse).collect::<Result<_, _>>()?;
            vec![v.try_into().map_err(|_| "need five weights")?]
        }
        None => vec![
            [1.0, 1.0, 1.0 / 3.0, 1.0, 1.0],
            [1.0, 1.0 / 3.0, 10.0, 1.0, 1.0 / 3.0],
            [1.0, 20.0, 1.6, 1.2, 10.0],
            [1.0, 4.0, 1.0, 1.0, 4.0],
        ],
    };
    for w in cases {
        let dw = DiamondWeights {
            w01: w[0],
            w02: w[1],
            w12: w[2],
            w13: w[3],
            w23: w[4],
        };
        let g = dw.graph();
        println!("weights {w:.3?}");
        println!(
            "  shared weight {:.3}, aligned bound {:.3} (min form {:.3}), flipped bound {:?}",
            dw.w12,
            dw.aligned_bound(),
            dw.stated_aligned_bound(),
            dw.flipped_bound()
        );
        match diamond_analysis(&g) {
            Ok(a) => {
                println!("  regime {:?}", a.regime);
                if let (Some(x), Some(s)) = (&a.x_star, &a.s_star) {
                    println!(
                        "  optimum {:?}, certified: {}",
                        x.entries(),
                        rank1_certificate(&g, x, 1e-9)?
                    );
                    println!("  S* min eigenvalue {:.2e}", s.min_eigenvalue());
                }
            }
            Err(e) => println!("  precondition fails: {e}"),
        }
        let bf = brute_force_maxcut(&g)?;
        println!("  brute force {:.4} at {:?}", bf.value, bf.x.entries());
    }
    Ok(())
}
