//! Cross-checks against independent implementations: nalgebra for dense
//! linear algebra, direct enumeration for cut values.

use maxcut_sdp::graph::{complete, weighted_cycle, NamedGraph, WeightedGraph};
use maxcut_sdp::linalg::SymMatrix;
use maxcut_sdp::maxcut::{brute_force_maxcut, cut_value, signed_laplacian, CutVector};
use maxcut_sdp::rng::{stream_rng, Gaussian};
use maxcut_sdp::sdp::{solve_default, SdpProblem};
use maxcut_sdp::structure::{
    cycle_symmetric_minor_determinant, diamond_flipped_determinant_polynomial,
    diamond_flipped_minor_determinant, DiamondWeights,
};
use nalgebra::DMatrix;

fn dense(m: &SymMatrix) -> DMatrix<f64> {
    DMatrix::from_fn(m.n(), m.n(), |i, j| m.get(i, j))
}

fn random_sym(n: usize, seed: u64) -> SymMatrix {
    let mut g = Gaussian::new(stream_rng(seed, 0));
    let mut m = SymMatrix::zeros(n);
    for i in 0..n {
        for j in 0..=i {
            m.set(i, j, g.sample());
        }
    }
    m
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

#[test]
fn eigenvalues_match_nalgebra() {
    for seed in 0..40 {
        let n = 1 + (seed as usize % 9);
        let m = random_sym(n, seed);
        let ours = m.eigenvalues();
        let mut theirs: Vec<f64> = dense(&m)
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect();
        theirs.sort_by(f64::total_cmp);
        for (a, b) in ours.iter().zip(&theirs) {
            assert!(
                (a - b).abs() < 1e-10,
                "n={n} seed={seed}: {ours:?} vs {theirs:?}"
            );
        }
    }
}

#[test]
fn cholesky_solve_matches_nalgebra() {
    for seed in 0..20 {
        let n = 2 + seed as usize % 7;
        let a = random_sym(n, seed + 100);
        // A² + I is positive definite.
        let d = dense(&a);
        let spd = &d * &d + DMatrix::identity(n, n);
        let m = SymMatrix::from_row_major_symmetrized(n, spd.as_slice());
        let b: Vec<f64> = (0..n).map(|i| i as f64 - 1.5).collect();
        let ours = m.cholesky().expect("positive definite").solve(&b);
        let theirs = spd
            .clone()
            .cholesky()
            .unwrap()
            .solve(&nalgebra::DVector::from_vec(b));
        for (x, y) in ours.iter().zip(theirs.iter()) {
            assert!((x - y).abs() < 1e-9);
        }
        let ld = m.cholesky().unwrap().log_det();
        assert!(rel_close(ld, spd.determinant().ln(), 1e-10));
    }
}

#[test]
fn cycle_minor_matches_dense_determinant() {
    for seed in 0..30 {
        let n = 3 + seed as usize % 8;
        let w = Gaussian::new(stream_rng(seed, 1)).vector(n);
        let neg_l = dense(&weighted_cycle(&w).unwrap().laplacian()) * -1.0;
        for m in 1..n {
            let minor = neg_l.view((n - m, n - m), (m, m)).clone_owned();
            let d = cycle_symmetric_minor_determinant(&w, m).unwrap();
            assert!(rel_close(d, minor.determinant(), 1e-10), "n={n} m={m}");
        }
    }
}

#[test]
fn diamond_minor_matches_dense_determinant() {
    let all_cuts: Vec<CutVector> = (0..16u32)
        .map(|c| {
            CutVector::new(
                (0..4)
                    .map(|b| if c >> b & 1 == 1 { 1 } else { -1 })
                    .collect(),
            )
            .unwrap()
        })
        .collect();
    for seed in 0..30 {
        let w = Gaussian::new(stream_rng(seed, 2)).vector(5);
        let dw = DiamondWeights {
            w01: w[0],
            w02: w[1],
            w12: w[2],
            w13: w[3],
            w23: w[4],
        };
        let g = dw.graph();
        for x in &all_cuts {
            let l = dense(&signed_laplacian(&g, x).unwrap());
            let oracle = l.view((0, 0), (3, 3)).determinant();
            let ours = diamond_flipped_minor_determinant(&g, x).unwrap();
            assert!(rel_close(ours, oracle, 1e-12));
        }
        let x = CutVector::new(vec![1, -1, 1, 1]).unwrap();
        let poly = diamond_flipped_determinant_polynomial(&dw);
        assert!(rel_close(
            poly,
            diamond_flipped_minor_determinant(&g, &x).unwrap(),
            1e-12
        ));
    }
}

#[test]
fn diamond_minor_with_zero_shared_weight() {
    let dw = DiamondWeights {
        w01: 1.3,
        w02: 0.4,
        w12: 0.0,
        w13: 2.0,
        w23: 0.7,
    };
    let g = WeightedGraph::from_triples(
        4,
        &[
            (0, 1, 1.3),
            (0, 2, 0.4),
            (1, 2, 0.0),
            (1, 3, 2.0),
            (2, 3, 0.7),
        ],
    )
    .unwrap();
    let x = CutVector::new(vec![1, -1, 1, 1]).unwrap();
    let (a, b, d, e) = (1.3, 0.4, 2.0, 0.7);
    let dropped = -a * b * d + a * b * e - a * d * e + b * d * e;
    assert!(rel_close(
        diamond_flipped_minor_determinant(&g, &x).unwrap(),
        dropped,
        1e-12
    ));
    assert!(rel_close(
        diamond_flipped_determinant_polynomial(&dw),
        dropped,
        1e-12
    ));
}

/// Cut weight counted edge by edge.
fn direct_cut(g: &WeightedGraph, x: &CutVector) -> f64 {
    let e = x.entries();
    g.edges()
        .iter()
        .filter(|ed| e[ed.i] != e[ed.j])
        .map(|ed| ed.w)
        .sum()
}

#[test]
fn cut_identity_by_enumeration() {
    for seed in 0..10 {
        let n = 2 + seed as usize % 7;
        let topo = complete(n);
        let w = Gaussian::new(stream_rng(seed, 3)).vector(topo.edge_count());
        let g = topo.with_weights(&w).unwrap();
        let l = g.laplacian();
        for code in 0..(1u32 << n) {
            let x = CutVector::new(
                (0..n)
                    .map(|b| if code >> b & 1 == 1 { 1 } else { -1 })
                    .collect(),
            )
            .unwrap();
            let direct = direct_cut(&g, &x);
            assert!((cut_value(&g, &x) - direct).abs() < 1e-12);
            assert!((0.25 * l.quad(&x.to_f64()) - direct).abs() < 1e-12);
        }
    }
}

#[test]
fn brute_force_matches_enumeration() {
    for seed in 0..20 {
        let n = 2 + seed as usize % 8;
        let topo = complete(n);
        let w = Gaussian::new(stream_rng(seed, 4)).vector(topo.edge_count());
        let g = topo.with_weights(&w).unwrap();
        let best = (0..(1u32 << n))
            .map(|code| {
                let x = CutVector::new(
                    (0..n)
                        .map(|b| if code >> b & 1 == 1 { 1 } else { -1 })
                        .collect(),
                )
                .unwrap();
                direct_cut(&g, &x)
            })
            .fold(f64::NEG_INFINITY, f64::max);
        let bf = brute_force_maxcut(&g).unwrap();
        assert!((bf.value - best).abs() < 1e-12);
        assert_eq!(bf.x.entries()[0], 1);
    }
}

#[test]
fn solver_examples() {
    // Equal-weight triangle: X has off-diagonal −1/2 and value 9/4.
    let sol = solve_default(&SdpProblem::maxcut(&complete(3)));
    assert!(sol.converged());
    assert!((sol.primal_value - 2.25).abs() < 1e-7);
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        assert!((sol.x.get(i, j) + 0.5).abs() < 1e-4);
    }
    // Bipartite graphs with positive weights: relaxation is tight.
    for g in [NamedGraph::C4, NamedGraph::C6] {
        let graph = g.build(None).unwrap();
        let sol = solve_default(&SdpProblem::maxcut(&graph));
        assert!((sol.primal_value - graph.edge_count() as f64).abs() < 1e-6);
    }
}
