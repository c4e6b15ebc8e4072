use maxcut_sdp::graph::{vertex_sum, weighted_cycle, CliqueSumSpec, Edge, WeightedGraph};
use maxcut_sdp::maxcut::{
    brute_force_maxcut, certificate_dual, cut_value, gw_round, rank1_certificate,
    recover_cut_if_rank1, sdp_value, CutVector,
};
use maxcut_sdp::sdp::{
    check_optimality, numerical_rank, rank_report, solve_default, SdpProblem, DEFAULT_RANK_TOL,
};
use maxcut_sdp::structure::{
    compose_vertex_sum, cycle_rank1_analysis, diamond_analysis, vertex_sum_low_rank_completion,
    DiamondRegime, DiamondWeights,
};
use proptest::prelude::*;

fn weight() -> impl Strategy<Value = f64> {
    prop_oneof![-2.0..-0.05f64, 0.05..2.0f64]
}

/// Random graph on `n ∈ [lo, hi]` vertices: each pair is an edge with
/// probability about 2/3.
fn graph(lo: usize, hi: usize) -> impl Strategy<Value = WeightedGraph> {
    (lo..=hi).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        prop::collection::vec((0..3u8, weight()), pairs).prop_map(move |cells| {
            let mut edges = Vec::new();
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    let (keep, w) = cells[k];
                    k += 1;
                    if keep > 0 {
                        edges.push(Edge { i, j, w });
                    }
                }
            }
            WeightedGraph::new(n, edges).unwrap()
        })
    })
}

fn all_cuts(n: usize) -> impl Iterator<Item = CutVector> {
    (0..1u32 << n).map(move |c| {
        CutVector::new(
            (0..n)
                .map(|b| if c >> b & 1 == 1 { 1 } else { -1 })
                .collect(),
        )
        .unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn laplacian_quadratic_form(g in graph(1, 8), x in prop::collection::vec(-3.0..3.0f64, 8)) {
        let l = g.laplacian();
        let x = &x[..g.n()];
        for i in 0..g.n() {
            let row: f64 = (0..g.n()).map(|j| l.get(i, j)).sum();
            prop_assert!(row.abs() < 1e-12);
        }
        let direct: f64 = g.edges().iter().map(|e| e.w * (x[e.i] - x[e.j]).powi(2)).sum();
        prop_assert!((l.quad(x) - direct).abs() < 1e-9 * direct.abs().max(1.0));
    }

    #[test]
    fn relaxation_sandwich_and_optimality(g in graph(2, 8)) {
        let p = SdpProblem::maxcut(&g);
        let sol = solve_default(&p);
        prop_assert!(sol.converged(), "{:?}", sol.status);
        let bf = brute_force_maxcut(&g).unwrap().value;
        prop_assert!(sdp_value(&g, &sol) >= bf - 1e-6);
        let rep = check_optimality(&p, &sol.x, &sol.s, 1e-6).unwrap();
        prop_assert!(rep.optimal, "{rep:?}");
    }

    #[test]
    fn rank_invariant_under_relabeling(g in graph(2, 7), seed in any::<u64>()) {
        let n = g.n();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let h = g.relabeled(&perm).unwrap();
        let a = rank_report(&solve_default(&SdpProblem::maxcut(&g)), DEFAULT_RANK_TOL);
        let b = rank_report(&solve_default(&SdpProblem::maxcut(&h)), DEFAULT_RANK_TOL);
        prop_assume!(!a.ambiguous_x && !b.ambiguous_x);
        prop_assert_eq!(a.rank_x, b.rank_x);
    }

    #[test]
    fn rank_and_argmax_invariant_under_scaling(g in graph(2, 7), c in 0.01..100.0f64) {
        let w: Vec<f64> = g.weights().iter().map(|v| v * c).collect();
        let h = g.with_weights(&w).unwrap();
        let a = rank_report(&solve_default(&SdpProblem::maxcut(&g)), DEFAULT_RANK_TOL);
        let b = rank_report(&solve_default(&SdpProblem::maxcut(&h)), DEFAULT_RANK_TOL);
        prop_assume!(!a.ambiguous_x && !b.ambiguous_x);
        prop_assert_eq!(a.rank_x, b.rank_x);
        prop_assert_eq!(brute_force_maxcut(&g).unwrap().x, brute_force_maxcut(&h).unwrap().x);
    }

    #[test]
    fn certificate_soundness(g in graph(2, 6)) {
        let p = SdpProblem::maxcut(&g);
        let bf = brute_force_maxcut(&g).unwrap().value;
        for x in all_cuts(g.n()) {
            if rank1_certificate(&g, &x, 1e-10).unwrap() {
                let s = certificate_dual(&g, &x).unwrap();
                let rep = check_optimality(&p, &x.outer(), &s, 1e-9).unwrap();
                prop_assert!(rep.optimal, "{rep:?}");
                prop_assert!((cut_value(&g, &x) - bf).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn certificate_completeness(g in graph(2, 8)) {
        let sol = solve_default(&SdpProblem::maxcut(&g));
        let r = rank_report(&sol, DEFAULT_RANK_TOL);
        prop_assume!(!r.ambiguous_x && r.rank_x == 1);
        let x = recover_cut_if_rank1(&sol, 1e-4).expect("rank-1 solution gives a cut");
        prop_assert!(rank1_certificate(&g, &x, 1e-6).unwrap());
        prop_assert!((cut_value(&g, &x) - sdp_value(&g, &sol)).abs() < 1e-6);
    }

    #[test]
    fn cycle_cut_is_unique_optimum(w in prop::collection::vec(weight(), 3..=10)) {
        let a = cycle_rank1_analysis(&w).unwrap();
        prop_assume!(a.has_rank1 && a.dominant_margin.abs() > 1e-9);
        let g = weighted_cycle(&w).unwrap();
        let x = a.optimal_cut.unwrap();
        let best = brute_force_maxcut(&g).unwrap().value;
        prop_assert!((cut_value(&g, &x) - best).abs() < 1e-12);
        let maximizers = all_cuts(w.len())
            .filter(|y| y.entries()[0] == 1 && (cut_value(&g, y) - best).abs() < 1e-12)
            .count();
        prop_assert_eq!(maximizers, 1);
        prop_assert!(rank1_certificate(&g, &x, 1e-9).unwrap());
    }

    #[test]
    fn cycle_analysis_agrees_with_solver(w in prop::collection::vec(weight(), 3..=8)) {
        let a = cycle_rank1_analysis(&w).unwrap();
        prop_assume!(a.dominant_margin.abs() > 1e-3);
        let sol = solve_default(&SdpProblem::maxcut(&weighted_cycle(&w).unwrap()));
        let r = rank_report(&sol, DEFAULT_RANK_TOL);
        prop_assume!(!r.ambiguous_x);
        prop_assert_eq!(a.has_rank1, r.rank_x == 1);
    }

    #[test]
    fn vertex_sum_composition(g1 in graph(1, 5), g2 in graph(1, 5)) {
        let n1 = g1.n();
        let spec = CliqueSumSpec { g1: g1.clone(), g2: g2.clone(), map1: vec![n1 - 1], map2: vec![0] };
        let sum = vertex_sum(&spec).unwrap().graph;
        let s1 = solve_default(&SdpProblem::maxcut(&g1));
        let s2 = solve_default(&SdpProblem::maxcut(&g2));
        let r1 = rank_report(&s1, DEFAULT_RANK_TOL);
        let r2 = rank_report(&s2, DEFAULT_RANK_TOL);
        prop_assume!(!r1.ambiguous_x && !r2.ambiguous_x);
        let c = compose_vertex_sum(&s1.x, &s1.s, &s2.x, &s2.s, 1e-6, DEFAULT_RANK_TOL).unwrap();
        let p = SdpProblem::maxcut(&sum);
        let rep = check_optimality(&p, &c.x_composed, &c.s_composed, 1e-6).unwrap();
        prop_assert!(rep.optimal, "{rep:?}");
        prop_assert_eq!(numerical_rank(&c.x_composed, DEFAULT_RANK_TOL), c.rank_formula_value);

        let low = vertex_sum_low_rank_completion(&s1.x, &s2.x, DEFAULT_RANK_TOL);
        prop_assert!(numerical_rank(&low, DEFAULT_RANK_TOL) <= r1.rank_x.max(r2.rank_x));
        let rep = check_optimality(&p, &low, &c.s_composed, 1e-5).unwrap();
        prop_assert!(rep.optimal, "{rep:?}");
    }

    #[test]
    fn gw_rounding_bounds(g in graph(2, 8), seed in any::<u64>()) {
        let sol = solve_default(&SdpProblem::maxcut(&g));
        let r = gw_round(&g, &sol, 50, seed).unwrap();
        prop_assert!(r.value <= sdp_value(&g, &sol) + 1e-6);
        prop_assert!((r.value - cut_value(&g, &r.x)).abs() < 1e-12);
        prop_assert_eq!(r, gw_round(&g, &sol, 50, seed).unwrap());
    }

    #[test]
    fn graph_json_roundtrip(g in graph(1, 8)) {
        let back = WeightedGraph::from_json_str(&g.to_json_string()).unwrap();
        prop_assert_eq!(back, g);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn diamond_equivalence(w in prop::collection::vec(0.02..2.0f64, 5)) {
        let dw = DiamondWeights { w01: w[0], w02: w[1], w12: w[2], w13: w[3], w23: w[4] };
        let g = dw.graph();
        let Ok(a) = diamond_analysis(&g) else { return Ok(()) };
        let aligned = CutVector::new(vec![-1, 1, 1, -1]).unwrap();
        let best = brute_force_maxcut(&g).unwrap().value;
        let aligned_optimal =
            (cut_value(&g, &aligned) - best).abs() < 1e-12 && rank1_certificate(&g, &aligned, 1e-12).unwrap();
        prop_assume!((a.condition_lhs - a.aligned_bound).abs() > 1e-9);
        prop_assert_eq!(a.regime == DiamondRegime::Aligned, aligned_optimal);

        let flipped_optimal = [[-1, -1], [-1, 1], [1, -1], [1, 1]].iter().any(|e| {
            let x = CutVector::new(vec![e[0], -1, 1, e[1]]).unwrap();
            (cut_value(&g, &x) - best).abs() < 1e-12 && rank1_certificate(&g, &x, 1e-12).unwrap()
        });
        if let Some(fb) = a.flipped_bound {
            prop_assume!((a.condition_lhs - fb).abs() > 1e-9);
        }
        prop_assert_eq!(a.regime == DiamondRegime::Flipped, flipped_optimal);

        if let (Some(x), Some(s)) = (&a.x_star, &a.s_star) {
            prop_assert!(rank1_certificate(&g, x, 1e-9).unwrap());
            prop_assert!(s.mul_vec(&x.to_f64()).iter().all(|v| v.abs() < 1e-8));
            prop_assert!(s.min_eigenvalue() >= -1e-8);
            let rep = check_optimality(&SdpProblem::maxcut(&g), &x.outer(), s, 1e-8).unwrap();
            prop_assert!(rep.optimal, "{rep:?}");
        }
    }
}
