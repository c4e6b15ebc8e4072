use std::path::PathBuf;
use std::process::{Command, Output};

use maxcut_sdp::experiments::{ConjectureReport, DistributionReport, CSV_HEADER};
use maxcut_sdp::graph::NamedGraph;
use maxcut_sdp::sdp::SolveStatus;
use maxcut_sdp::structure::{CycleReason, DiamondRegime};
use maxcut_sdp_cli::{ComposeReport, CycleReport, DiamondReport, RoundReport, SolveReport};
use serde::de::DeserializeOwned;
use serde::Serialize;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maxcut-sdp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Runs a command that must succeed, parses its JSON report and checks that
/// re-serializing gives the same JSON.
fn report<T: DeserializeOwned + Serialize>(args: &[&str]) -> T {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    let parsed: T = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{args:?}: {e}\n{text}"));
    let again: serde_json::Value = serde_json::to_value(&parsed).unwrap();
    assert_eq!(
        again,
        serde_json::from_str::<serde_json::Value>(&text).unwrap()
    );
    parsed
}

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

#[test]
fn solve_triangle_from_file() {
    let path = tmp("k3.json");
    std::fs::write(
        &path,
        r#"{"n": 3, "edges": [[0, 1, 1.0], [0, 2, 1.0], [1, 2, 1.0]]}"#,
    )
    .unwrap();
    let r: SolveReport = report(&["solve", "--graph", path.to_str().unwrap()]);
    assert_eq!(r.status, SolveStatus::Converged);
    assert!((r.primal_value - 2.25).abs() < 1e-7);
    assert_eq!((r.rank.rank_x, r.rank.rank_s), (2, 1));
    assert!(r.optimality.optimal);
    assert_eq!(r.cut, None);
    assert_eq!(r.brute_force.as_ref().unwrap().value, 2.0);

    let same: SolveReport = report(&["solve", "--graph-file", path.to_str().unwrap()]);
    assert_eq!(same, r);
}

#[test]
fn solve_named_with_weights_gives_rank_one_cut() {
    let r: SolveReport = report(&["solve", "--graph", "c4", "--weights", "1,2,3,4"]);
    assert_eq!(r.rank.rank_x, 1);
    let cut = r.cut.expect("bipartite positive weights are tight");
    assert_eq!(cut.entries(), &[1, -1, 1, -1]);
    assert!((r.primal_value - 10.0).abs() < 1e-6);
}

#[test]
fn analyze_cycle_example() {
    let r: CycleReport = report(&["analyze-cycle", "--weights", "1,1,-1"]);
    assert!(r.analysis.has_rank1);
    assert_eq!(r.analysis.reason, CycleReason::EvenPositives);
    assert_eq!(r.solver_rank, None);

    let r: CycleReport = report(&["analyze-cycle", "--weights", "1,1,1", "--verify"]);
    assert!(!r.analysis.has_rank1);
    assert_eq!(r.solver_rank, Some(2));
}

#[test]
fn analyze_diamond() {
    let r: DiamondReport = report(&[
        "analyze-diamond",
        "--weights",
        "1,0.3333333333333333,10,1,0.3333333333333333",
    ]);
    let a = r.analysis.unwrap();
    assert_eq!(a.regime, DiamondRegime::Flipped);
    assert_eq!(a.x_star.unwrap().entries(), &[1, -1, 1, 1]);

    let r: DiamondReport = report(&[
        "analyze-diamond",
        "--weights",
        "1,1,1,1,1",
        "--condition-only",
    ]);
    assert_eq!(r.analysis, None);
    assert_eq!(r.condition_regime, DiamondRegime::Aligned);
    assert_eq!(r.stated_aligned_bound, 0.5);

    // The unit triangles have no rank-1 optimum.
    let out = run(&["analyze-diamond", "--weights", "1,1,1,1,1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(String::from_utf8_lossy(&out.stderr).lines().count(), 1);
}

#[test]
fn compose_vertex_sum() {
    let r: ComposeReport = report(&[
        "compose-vertex-sum",
        "--g1",
        "k3",
        "--g2",
        "c4",
        "--weights2",
        "1,-2,1,0.5",
    ]);
    assert_eq!(r.graph.n(), 6);
    assert!(r.optimality.optimal, "{:?}", r.optimality);
    assert_eq!(r.rank_composed, r.rank_x1 + r.rank_x2 - 1);
    assert_eq!(r.min_rank, r.rank_x1.max(r.rank_x2));
}

#[test]
fn sample_formats() {
    let csv = stdout(&run(&[
        "sample",
        "--graph",
        "c4",
        "--mode",
        "positive",
        "--samples",
        "50",
        "--seed",
        "1",
    ]));
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    assert_eq!(lines.next(), Some("c4,positive,1,50,1,0,1,1e-6"));

    let r: DistributionReport = report(&[
        "sample",
        "--graph",
        "butterfly",
        "--samples",
        "100",
        "--seed",
        "7",
        "--format",
        "json",
    ]);
    assert_eq!(r.config.graph, NamedGraph::Butterfly);
    assert_eq!(r.distribution.counted() + r.distribution.excluded, 100);

    let text = stdout(&run(&[
        "sample",
        "--graph",
        "k3",
        "--samples",
        "20",
        "--seed",
        "2",
        "--format",
        "text",
    ]));
    assert!(text.starts_with("k3 arbitrary weights, 20 samples, seed 2"));
}

#[test]
fn probe_and_round() {
    let r: ConjectureReport = report(&["probe-conjecture", "--samples", "40", "--seed", "3"]);
    assert_eq!(r.skipped + r.unconverged + r.evaluated, 40);
    assert_eq!(r.agree + r.disagree, r.evaluated);

    let r: RoundReport = report(&["round", "--graph", "fish", "--seed", "9", "--trials", "20"]);
    assert!(r.cut.value <= r.sdp_value + 1e-6);
    assert!(r.ratio.unwrap() >= 0.878);
    assert_eq!(r.cut.seed, Some(9));
}

#[test]
fn output_file_and_flat_formats() {
    let path = tmp("round.csv");
    let out = run(&[
        "round",
        "--graph",
        "k3",
        "--seed",
        "1",
        "--format",
        "csv",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.starts_with("field,value\n"));
    assert!(csv.lines().any(|l| l == "cut.value,2.0"));

    let text = stdout(&run(&[
        "analyze-cycle",
        "--weights",
        "1,1,1",
        "--format",
        "text",
    ]));
    assert!(text
        .lines()
        .any(|l| l.starts_with("analysis.has_rank1") && l.ends_with("false")));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["sample", "--graph", "k3"][..],
        &["round", "--graph", "k3"],
        &["probe-conjecture"],
        &["solve", "--graph", "k3", "--bogus"],
        &["solve", "--graph", "k3", "--tol", "0"],
        &["solve", "--graph", "k3", "--rank-tol=-1e-6"],
        &[
            "sample", "--graph", "k3", "--seed", "1", "--mode", "sideways",
        ],
        &["sample", "--graph", "k3", "--seed", "1", "--samples", "0"],
        &["solve"],
        &["frobnicate"],
        &["analyze-diamond", "--weights", "1,1,1"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn domain_errors_exit_1() {
    let bad = tmp("bad.json");
    std::fs::write(&bad, r#"{"n": 2, "edges": [[0, 5, 1.0]]}"#).unwrap();
    let garbage = tmp("garbage.json");
    std::fs::write(&garbage, "not json at all {").unwrap();
    for args in [
        vec!["solve", "--graph-file", bad.to_str().unwrap()],
        vec!["solve", "--graph-file", garbage.to_str().unwrap()],
        vec!["solve", "--graph-file", "/nonexistent/graph.json"],
        vec!["solve", "--graph", "nosuchgraph"],
        vec!["solve", "--graph", "k3", "--weights", "1,2"],
        vec!["analyze-cycle", "--weights", "1,0,1"],
        vec!["analyze-cycle", "--weights", "1,1"],
        vec!["analyze-diamond", "--weights", "1,1,-1,1,1"],
        vec![
            "solve",
            "--graph",
            "k4",
            "--tol",
            "1e-12",
            "--max-iter",
            "2",
        ],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert_eq!(err.lines().count(), 1, "{args:?}: {err}");
    }
}

#[test]
fn help_for_every_subcommand() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    for sub in [
        "solve",
        "analyze-cycle",
        "analyze-diamond",
        "compose-vertex-sum",
        "sample",
        "probe-conjecture",
        "round",
    ] {
        assert!(stdout(&out).contains(sub));
        let help = run(&[sub, "--help"]);
        assert_eq!(help.status.code(), Some(0), "{sub}");
        assert!(stdout(&help).contains("Usage: maxcut-sdp"), "{sub}");
    }
}
