//! Monte-Carlo rank statistics for random edge weights.
//!
//! Sample `i` of a run with seed `s` draws its weights from RNG stream
//! `(s, i)`, so results do not depend on thread count or scheduling.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand_chacha::rand_core::RngCore;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{edge_sum, CliqueSumSpec, GraphError, NamedGraph, WeightedGraph};
use crate::linalg::SymMatrix;
use crate::maxcut::{certificate_dual, recover_cut_if_rank1, MaxCutError};
use crate::rng::{stream_rng, Gaussian};
use crate::sdp::{
    check_optimality, numerical_rank, rank_is_ambiguous, rank_of, solve, SdpError, SdpProblem,
    DEFAULT_MAX_ITER, DEFAULT_RANK_TOL, DEFAULT_TOL,
};
use crate::structure::cycle_rank1_analysis;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("sample count must be at least 1")]
    NoSamples,
    #[error("graph has no edges")]
    NoEdges,
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("cycle needs at least 3 vertices, got {0}")]
    CycleTooShort(usize),
    #[error("unknown weight mode {0:?} (expected arbitrary or positive)")]
    UnknownMode(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Sdp(#[from] SdpError),
    #[error(transparent)]
    MaxCut(#[from] MaxCutError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightMode {
    /// Uniform on the unit sphere.
    Arbitrary,
    /// Uniform on the unit sphere intersected with the positive orthant.
    Positive,
}

impl fmt::Display for WeightMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WeightMode::Arbitrary => "arbitrary",
            WeightMode::Positive => "positive",
        })
    }
}

impl FromStr for WeightMode {
    type Err = ExperimentError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "arbitrary" => Ok(WeightMode::Arbitrary),
            "positive" => Ok(WeightMode::Positive),
            _ => Err(ExperimentError::UnknownMode(s.to_string())),
        }
    }
}

/// Gaussian vector normalized to unit length; absolute values first in
/// positive mode.
pub fn sample_weights<R: RngCore>(
    edge_count: usize,
    mode: WeightMode,
    rng: &mut Gaussian<R>,
) -> Result<Vec<f64>, ExperimentError> {
    if edge_count == 0 {
        return Err(ExperimentError::NoEdges);
    }
    loop {
        let mut w = rng.vector(edge_count);
        if mode == WeightMode::Positive {
            w.iter_mut().for_each(|v| *v = v.abs());
        }
        let norm = w.iter().map(|v| v * v).sum::<f64>().sqrt();
        // Any exact zero would make some edge weightless; redraw.
        if norm > 0.0 && w.iter().all(|v| *v != 0.0) {
            w.iter_mut().for_each(|v| *v /= norm);
            return Ok(w);
        }
    }
}

/// Weights for sample `index` of a run.
pub fn sample_weights_at(
    edge_count: usize,
    mode: WeightMode,
    seed: u64,
    index: u64,
) -> Result<Vec<f64>, ExperimentError> {
    sample_weights(
        edge_count,
        mode,
        &mut Gaussian::new(stream_rng(seed, index)),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleConfig {
    pub graph: NamedGraph,
    pub samples: usize,
    pub mode: WeightMode,
    pub seed: u64,
    pub rank_tol: f64,
    pub solver_tol: f64,
}

impl SampleConfig {
    pub fn new(graph: NamedGraph, mode: WeightMode, samples: usize, seed: u64) -> Self {
        Self {
            graph,
            samples,
            mode,
            seed,
            rank_tol: DEFAULT_RANK_TOL,
            solver_tol: DEFAULT_TOL,
        }
    }

    fn validate(&self) -> Result<WeightedGraph, ExperimentError> {
        if self.samples == 0 {
            return Err(ExperimentError::NoSamples);
        }
        for t in [self.rank_tol, self.solver_tol] {
            if !(t > 0.0) {
                return Err(ExperimentError::BadTolerance(t));
            }
        }
        let g = self.graph.build(None)?;
        if g.edge_count() == 0 {
            return Err(ExperimentError::NoEdges);
        }
        Ok(g)
    }
}

/// Everything kept from one solved sample; ranks are recomputed from the
/// eigenvalues so tolerance sweeps need no re-solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleOutcome {
    pub index: usize,
    pub weights: Vec<f64>,
    pub converged: bool,
    /// Ascending.
    pub eigenvalues_x: Vec<f64>,
    /// Ascending.
    pub eigenvalues_s: Vec<f64>,
    /// Largest residual reported by the optimality check.
    pub optimality_residual: f64,
}

impl SampleOutcome {
    pub fn rank_x(&self, tol: f64) -> usize {
        rank_of(&self.eigenvalues_x, tol)
    }

    pub fn rank_s(&self, tol: f64) -> usize {
        rank_of(&self.eigenvalues_s, tol)
    }

    /// Counted at `tol` unless unconverged or the rank of `X` is ambiguous.
    pub fn counted(&self, tol: f64) -> bool {
        self.converged && !rank_is_ambiguous(&self.eigenvalues_x, tol)
    }
}

fn solve_sample(
    topo: &WeightedGraph,
    mode: WeightMode,
    seed: u64,
    index: usize,
    solver_tol: f64,
) -> Result<SampleOutcome, ExperimentError> {
    let weights = sample_weights_at(topo.edge_count(), mode, seed, index as u64)?;
    let g = topo.with_weights(&weights)?;
    let p = SdpProblem::maxcut(&g);
    let sol = solve(&p, solver_tol, DEFAULT_MAX_ITER)?;
    let rep = check_optimality(&p, &sol.x, &sol.s, f64::INFINITY)?;
    let optimality_residual = [
        rep.primal_diagonal,
        rep.primal_psd,
        rep.dual_structure,
        rep.dual_psd,
        rep.complementarity,
    ]
    .into_iter()
    .fold(0.0, f64::max);
    Ok(SampleOutcome {
        index,
        weights,
        converged: sol.converged(),
        eigenvalues_x: sol.x.eigenvalues(),
        eigenvalues_s: sol.s.eigenvalues(),
        optimality_residual,
    })
}

/// Solves every sample of `cfg`, in index order.
pub fn sample_outcomes(cfg: &SampleConfig) -> Result<Vec<SampleOutcome>, ExperimentError> {
    let topo = cfg.validate()?;
    (0..cfg.samples)
        .into_par_iter()
        .map(|i| solve_sample(&topo, cfg.mode, cfg.seed, i, cfg.solver_tol))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankDistribution {
    pub counts: BTreeMap<usize, usize>,
    /// Over counted samples only.
    pub fractions: BTreeMap<usize, f64>,
    /// Unconverged or rank-ambiguous samples.
    pub excluded: usize,
}

impl RankDistribution {
    pub fn from_outcomes(outcomes: &[SampleOutcome], rank_tol: f64) -> Self {
        let mut counts = BTreeMap::new();
        let mut excluded = 0;
        for o in outcomes {
            if o.counted(rank_tol) {
                *counts.entry(o.rank_x(rank_tol)).or_insert(0) += 1;
            } else {
                excluded += 1;
            }
        }
        let total: usize = counts.values().sum();
        let fractions = counts
            .iter()
            .map(|(&r, &c)| (r, c as f64 / total.max(1) as f64))
            .collect();
        Self {
            counts,
            fractions,
            excluded,
        }
    }

    pub fn counted(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn fraction(&self, rank: usize) -> f64 {
        self.fractions.get(&rank).copied().unwrap_or(0.0)
    }
}

/// Rank distribution of `X` over the samples of `cfg`.
pub fn rank_distribution(cfg: &SampleConfig) -> Result<RankDistribution, ExperimentError> {
    Ok(RankDistribution::from_outcomes(
        &sample_outcomes(cfg)?,
        cfg.rank_tol,
    ))
}

/// Rank distributions for the same samples at each rank tolerance.
pub fn tolerance_sweep(outcomes: &[SampleOutcome], tols: &[f64]) -> Vec<(f64, RankDistribution)> {
    tols.iter()
        .map(|&t| (t, RankDistribution::from_outcomes(outcomes, t)))
        .collect()
}

pub const SENSITIVITY_TOLS: [f64; 3] = [1e-5, 1e-6, 1e-7];

/// Fraction of counted samples with `rank X + rank S = n`.
pub fn strict_complementarity_rate(cfg: &SampleConfig) -> Result<f64, ExperimentError> {
    let outcomes = sample_outcomes(cfg)?;
    Ok(strict_complementarity_rate_of(&outcomes, cfg.rank_tol))
}

pub fn strict_complementarity_rate_of(outcomes: &[SampleOutcome], rank_tol: f64) -> f64 {
    let counted: Vec<_> = outcomes.iter().filter(|o| o.counted(rank_tol)).collect();
    let strict = counted
        .iter()
        .filter(|o| o.rank_x(rank_tol) + o.rank_s(rank_tol) == o.eigenvalues_x.len())
        .count();
    strict as f64 / counted.len().max(1) as f64
}

/// Probability that a triangle with random weights has a rank-1 optimum.
pub fn k3_analytic_probability(mode: WeightMode) -> f64 {
    let s3 = 3f64.sqrt();
    match mode {
        WeightMode::Arbitrary => (6.0 - 2.0 * s3) / 3.0,
        WeightMode::Positive => (9.0 - 4.0 * s3) / 3.0,
    }
}

/// Fraction of sampled weight vectors on `C_n` that admit a rank-1 optimum
/// according to the cycle criterion. No SDP is solved.
pub fn cycle_condition_probability(
    n: usize,
    mode: WeightMode,
    samples: usize,
    seed: u64,
) -> Result<f64, ExperimentError> {
    if n < 3 {
        return Err(ExperimentError::CycleTooShort(n));
    }
    if samples == 0 {
        return Err(ExperimentError::NoSamples);
    }
    let hits: Result<Vec<bool>, ExperimentError> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let w = sample_weights_at(n, mode, seed, i)?;
            Ok(cycle_rank1_analysis(&w)
                .map(|a| a.has_rank1)
                .unwrap_or(false))
        })
        .collect();
    Ok(hits?.iter().filter(|h| **h).count() as f64 / samples as f64)
}

/// Distribution of `r₁ + r₂ − 1` for independent ranks with the given
/// distributions (index = rank).
pub fn vertex_sum_rank_law(
    d1: &BTreeMap<usize, f64>,
    d2: &BTreeMap<usize, f64>,
) -> BTreeMap<usize, f64> {
    let mut out = BTreeMap::new();
    for (&r1, &p1) in d1 {
        for (&r2, &p2) in d2 {
            *out.entry(r1 + r2 - 1).or_insert(0.0) += p1 * p2;
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Reference table

/// Published rank percentages (ranks 1, 2, 3) for each table graph, under
/// arbitrary and positive weights.
pub const TABLE1: [(NamedGraph, [f64; 3], [f64; 3]); 7] = [
    (NamedGraph::K3, [85.0, 15.0, 0.0], [69.0, 31.0, 0.0]),
    (NamedGraph::C4, [77.0, 23.0, 0.0], [100.0, 0.0, 0.0]),
    (NamedGraph::Diamond, [71.0, 29.0, 0.0], [65.0, 35.0, 0.0]),
    (NamedGraph::C5, [73.0, 27.0, 0.0], [45.0, 55.0, 0.0]),
    (NamedGraph::Butterfly, [72.0, 25.0, 3.0], [50.0, 42.0, 8.0]),
    (NamedGraph::C6, [70.0, 30.0, 0.0], [100.0, 0.0, 0.0]),
    (NamedGraph::Fish, [62.0, 34.0, 4.0], [69.0, 31.0, 0.0]),
];

/// Published fractions for `graph` under `mode`, if it is a table row.
pub fn table1_reference(graph: NamedGraph, mode: WeightMode) -> Option<[f64; 3]> {
    TABLE1.iter().find(|row| row.0 == graph).map(|row| {
        let pct = match mode {
            WeightMode::Arbitrary => row.1,
            WeightMode::Positive => row.2,
        };
        pct.map(|p| p / 100.0)
    })
}

/// Two-sided 99% normal-approximation interval for an observed fraction
/// when the true probability is `p`, clamped to `[0, 1]`.
pub fn binomial_ci99(p: f64, samples: usize) -> (f64, f64) {
    const Z: f64 = 2.575_829_303_548_901;
    let half = Z * (p * (1.0 - p) / samples as f64).sqrt();
    ((p - half).max(0.0), (p + half).min(1.0))
}

/// One row of the rank-distribution table compared with the reference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table1Row {
    pub graph: NamedGraph,
    pub mode: WeightMode,
    pub reference: [f64; 3],
    pub observed: [f64; 3],
    /// Fraction of counted samples with rank above 3.
    pub observed_above: f64,
    pub within_ci: [bool; 3],
    pub counted: usize,
    pub excluded: usize,
    /// Rank-1/2/3 fractions at each sensitivity tolerance.
    pub sensitivity: Vec<(f64, [f64; 3])>,
}

impl Table1Row {
    pub fn all_within_ci(&self) -> bool {
        self.within_ci.iter().all(|b| *b) && self.observed_above == 0.0
    }
}

fn first_three(d: &RankDistribution) -> [f64; 3] {
    [d.fraction(1), d.fraction(2), d.fraction(3)]
}

pub fn table1_row(cfg: &SampleConfig) -> Result<Table1Row, ExperimentError> {
    let outcomes = sample_outcomes(cfg)?;
    let dist = RankDistribution::from_outcomes(&outcomes, cfg.rank_tol);
    let reference = table1_reference(cfg.graph, cfg.mode).unwrap_or([f64::NAN; 3]);
    let observed = first_three(&dist);
    let counted = dist.counted();
    let within_ci = std::array::from_fn(|k| {
        let (lo, hi) = binomial_ci99(reference[k], counted);
        observed[k] >= lo && observed[k] <= hi
    });
    let observed_above = dist.fractions.range(4..).map(|(_, f)| f).sum();
    let sensitivity = tolerance_sweep(&outcomes, &SENSITIVITY_TOLS)
        .into_iter()
        .map(|(t, d)| (t, first_three(&d)))
        .collect();
    Ok(Table1Row {
        graph: cfg.graph,
        mode: cfg.mode,
        reference,
        observed,
        observed_above,
        within_ci,
        counted,
        excluded: dist.excluded,
        sensitivity,
    })
}

// ---------------------------------------------------------------------------
// Reports

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistributionReport {
    pub config: SampleConfig,
    pub distribution: RankDistribution,
    pub strict_complementarity_rate: f64,
}

pub fn distribution_report(cfg: &SampleConfig) -> Result<DistributionReport, ExperimentError> {
    let outcomes = sample_outcomes(cfg)?;
    Ok(DistributionReport {
        config: cfg.clone(),
        distribution: RankDistribution::from_outcomes(&outcomes, cfg.rank_tol),
        strict_complementarity_rate: strict_complementarity_rate_of(&outcomes, cfg.rank_tol),
    })
}

pub const CSV_HEADER: &str = "graph,mode,rank,count,fraction,excluded,seed,tol";

impl DistributionReport {
    /// One row per rank from 1 to `max(3, highest observed rank)`.
    pub fn to_csv(&self) -> String {
        let c = &self.config;
        let d = &self.distribution;
        let top = d.counts.keys().next_back().copied().unwrap_or(0).max(3);
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in 1..=top {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{:e}\n",
                c.graph,
                c.mode,
                r,
                d.counts.get(&r).copied().unwrap_or(0),
                d.fraction(r),
                d.excluded,
                c.seed,
                c.rank_tol
            ));
        }
        out
    }

    pub fn to_text(&self) -> String {
        let c = &self.config;
        let d = &self.distribution;
        let mut out = format!(
            "{} {} weights, {} samples, seed {}, rank tol {:e}\n",
            c.graph, c.mode, c.samples, c.seed, c.rank_tol
        );
        for (r, n) in &d.counts {
            out.push_str(&format!("rank {r}: {n} ({:.1}%)\n", 100.0 * d.fraction(*r)));
        }
        out.push_str(&format!("excluded: {}\n", d.excluded));
        out.push_str(&format!(
            "strict complementarity: {:.1}%\n",
            100.0 * self.strict_complementarity_rate
        ));
        out
    }
}

// ---------------------------------------------------------------------------
// Edge-sum probe

/// Tolerances for the probe's dual-feasibility and complementarity tests.
pub const PROBE_DUAL_TOL: f64 = 1e-8;
pub const PROBE_COMPLEMENTARITY_TOL: f64 = 1e-5;
const MAX_COUNTEREXAMPLES: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub index: usize,
    /// Weights of the edge-sum graph in its edge order.
    pub weights: Vec<f64>,
    /// `‖XS‖_max` and `λ_min(S)` for the `+` and `−` sign choices.
    pub residuals: [(f64, f64); 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub samples: usize,
    pub seed: u64,
    pub mode: WeightMode,
    /// Samples whose subgraph optima are not both rank 1 and agreeing.
    pub skipped: usize,
    /// Samples where a solve did not converge.
    pub unconverged: usize,
    pub evaluated: usize,
    /// Evaluated samples where some sign choice gives an optimal dual.
    pub agree: usize,
    pub disagree: usize,
    pub plus_sign_optimal: usize,
    pub minus_sign_optimal: usize,
    /// Evaluated samples whose edge-sum optimum is rank 1.
    pub sum_rank1: usize,
    /// Evaluated samples where the shared-edge-corrected form
    /// `pad(S₁) + pad(S₂) − S_e` is optimal.
    pub corrected_form_optimal: usize,
    pub counterexamples: Vec<Counterexample>,
}

enum ProbeSample {
    Skipped,
    Unconverged,
    Evaluated {
        plus: bool,
        minus: bool,
        sum_rank1: bool,
        corrected: bool,
        residuals: [(f64, f64); 2],
    },
}

fn pad(s: &SymMatrix, relabel: &[usize], n: usize) -> SymMatrix {
    let mut out = SymMatrix::zeros(n);
    for i in 0..s.n() {
        for j in 0..=i {
            out.set(relabel[i], relabel[j], s.get(i, j));
        }
    }
    out
}

/// Tests the conjectured dual for edge sums on random weights.
///
/// For each sample the subgraphs are solved; when both optima are rank 1 and
/// agree on the shared edge, the candidate
/// `pad(S₁*) + pad(S₂*) − ¼[[w, ±w], [±w, w]]` on the shared vertices is
/// checked for dual feasibility and for complementarity with the solved
/// primal of the edge sum.
pub fn probe_edge_sum_conjecture(
    spec: &CliqueSumSpec,
    mode: WeightMode,
    samples: usize,
    seed: u64,
) -> Result<ConjectureReport, ExperimentError> {
    if samples == 0 {
        return Err(ExperimentError::NoSamples);
    }
    let sum = edge_sum(spec)?;
    let shared = sum.shared(spec);
    let (a, b) = (shared[0], shared[1]);
    let n = sum.graph.n();
    let topo = sum.graph.clone();

    let run = |index: usize| -> Result<(ProbeSample, Vec<f64>), ExperimentError> {
        let weights = sample_weights_at(topo.edge_count(), mode, seed, index as u64)?;
        let g = topo.with_weights(&weights)?;
        let g1 = g.induced(&sum.relabel1)?;
        let g2 = g.induced(&sum.relabel2)?;
        let sols: Vec<_> = [&g1, &g2]
            .iter()
            .map(|h| solve(&SdpProblem::maxcut(h), DEFAULT_TOL, DEFAULT_MAX_ITER))
            .collect::<Result<_, _>>()?;
        if sols.iter().any(|s| !s.converged()) {
            return Ok((ProbeSample::Unconverged, weights));
        }
        let (Some(x1), Some(x2)) = (
            recover_cut_if_rank1(&sols[0], DEFAULT_RANK_TOL),
            recover_cut_if_rank1(&sols[1], DEFAULT_RANK_TOL),
        ) else {
            return Ok((ProbeSample::Skipped, weights));
        };
        let p1 = x1.entries()[spec.map1[0]] * x1.entries()[spec.map1[1]];
        let p2 = x2.entries()[spec.map2[0]] * x2.entries()[spec.map2[1]];
        if p1 != p2 {
            return Ok((ProbeSample::Skipped, weights));
        }

        let p = SdpProblem::maxcut(&g);
        let sol = solve(&p, DEFAULT_TOL, DEFAULT_MAX_ITER)?;
        if !sol.converged() {
            return Ok((ProbeSample::Unconverged, weights));
        }
        let base = pad(&certificate_dual(&g1, &x1)?, &sum.relabel1, n).add(&pad(
            &certificate_dual(&g2, &x2)?,
            &sum.relabel2,
            n,
        ));
        let w = g.weight(a, b).expect("shared edge");
        let q = w / 4.0;

        let is_optimal = |s: &SymMatrix| -> (bool, (f64, f64)) {
            let rep = check_optimality(&p, &sol.x, s, f64::INFINITY).expect("dimensions match");
            let lmin = s.min_eigenvalue();
            let ok = rep.dual_structure <= PROBE_DUAL_TOL
                && lmin >= -PROBE_DUAL_TOL
                && rep.complementarity <= PROBE_COMPLEMENTARITY_TOL;
            (ok, (rep.complementarity, lmin))
        };
        let candidate = |sign: f64| {
            let mut s = base.clone();
            s.add_at(a, a, -q);
            s.add_at(b, b, -q);
            s.add_at(a, b, -sign * q);
            s
        };
        let (plus, r_plus) = is_optimal(&candidate(1.0));
        let (minus, r_minus) = is_optimal(&candidate(-1.0));
        let mut corrected_s = base.clone();
        let pf = p1 as f64;
        corrected_s.add_at(a, a, q * pf);
        corrected_s.add_at(b, b, q * pf);
        corrected_s.add_at(a, b, -q);
        let (corrected, _) = is_optimal(&corrected_s);
        let sum_rank1 = numerical_rank(&sol.x, DEFAULT_RANK_TOL) == 1;
        Ok((
            ProbeSample::Evaluated {
                plus,
                minus,
                sum_rank1,
                corrected,
                residuals: [r_plus, r_minus],
            },
            weights,
        ))
    };

    let results: Vec<_> = (0..samples)
        .into_par_iter()
        .map(run)
        .collect::<Result<_, _>>()?;

    let mut report = ConjectureReport {
        samples,
        seed,
        mode,
        skipped: 0,
        unconverged: 0,
        evaluated: 0,
        agree: 0,
        disagree: 0,
        plus_sign_optimal: 0,
        minus_sign_optimal: 0,
        sum_rank1: 0,
        corrected_form_optimal: 0,
        counterexamples: Vec::new(),
    };
    for (index, (outcome, weights)) in results.into_iter().enumerate() {
        match outcome {
            ProbeSample::Skipped => report.skipped += 1,
            ProbeSample::Unconverged => report.unconverged += 1,
            ProbeSample::Evaluated {
                plus,
                minus,
                sum_rank1,
                corrected,
                residuals,
            } => {
                report.evaluated += 1;
                report.plus_sign_optimal += plus as usize;
                report.minus_sign_optimal += minus as usize;
                report.sum_rank1 += sum_rank1 as usize;
                report.corrected_form_optimal += corrected as usize;
                if plus || minus {
                    report.agree += 1;
                } else {
                    report.disagree += 1;
                    if report.counterexamples.len() < MAX_COUNTEREXAMPLES {
                        report.counterexamples.push(Counterexample {
                            index,
                            weights,
                            residuals,
                        });
                    }
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_are_unit_and_deterministic() {
        for mode in [WeightMode::Arbitrary, WeightMode::Positive] {
            let w = sample_weights_at(7, mode, 3, 11).unwrap();
            assert!((w.iter().map(|v| v * v).sum::<f64>() - 1.0).abs() < 1e-12);
            assert_eq!(w, sample_weights_at(7, mode, 3, 11).unwrap());
            if mode == WeightMode::Positive {
                assert!(w.iter().all(|v| *v > 0.0));
            }
        }
        let one = sample_weights_at(1, WeightMode::Positive, 0, 0).unwrap();
        assert_eq!(one, vec![1.0]);
        let one = sample_weights_at(1, WeightMode::Arbitrary, 0, 0).unwrap();
        assert_eq!(one[0].abs(), 1.0);
        assert!(matches!(
            sample_weights_at(0, WeightMode::Arbitrary, 0, 0),
            Err(ExperimentError::NoEdges)
        ));
    }

    #[test]
    fn analytic_identity() {
        let a = k3_analytic_probability(WeightMode::Arbitrary);
        let p = k3_analytic_probability(WeightMode::Positive);
        assert!((a - 0.845299461620749).abs() < 1e-12);
        assert!((p - 0.690598923241497).abs() < 1e-12);
        assert!((p - (2.0 * a - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn even_positive_cycle_always_rank1() {
        assert_eq!(
            cycle_condition_probability(4, WeightMode::Positive, 500, 1).unwrap(),
            1.0
        );
        assert!(cycle_condition_probability(2, WeightMode::Positive, 5, 1).is_err());
    }

    #[test]
    fn two_vertex_graph_is_strictly_complementary() {
        let cfg = SampleConfig::new(NamedGraph::Kn(2), WeightMode::Arbitrary, 50, 9);
        assert_eq!(strict_complementarity_rate(&cfg).unwrap(), 1.0);
        let cfg = SampleConfig::new(NamedGraph::Kn(1), WeightMode::Arbitrary, 5, 9);
        assert!(matches!(
            strict_complementarity_rate(&cfg),
            Err(ExperimentError::NoEdges)
        ));
    }

    #[test]
    fn distribution_counts_add_up() {
        let cfg = SampleConfig::new(NamedGraph::K3, WeightMode::Arbitrary, 200, 5);
        let d = rank_distribution(&cfg).unwrap();
        assert_eq!(d.counted() + d.excluded, 200);
        let total: f64 = d.fractions.values().sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert_eq!(d, rank_distribution(&cfg).unwrap());
    }

    #[test]
    fn csv_and_json() {
        let cfg = SampleConfig::new(NamedGraph::C4, WeightMode::Positive, 20, 1);
        let r = distribution_report(&cfg).unwrap();
        let csv = r.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        assert_eq!(lines.next(), Some("c4,positive,1,20,1,0,1,1e-6"));
        let json = serde_json::to_string(&r).unwrap();
        let back: DistributionReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
        assert!(json.contains("\"graph\":\"c4\""));
    }

    #[test]
    fn rank_law_convolution() {
        let d: BTreeMap<usize, f64> = [(1, 0.8), (2, 0.2)].into_iter().collect();
        let law = vertex_sum_rank_law(&d, &d);
        assert!((law[&1] - 0.64).abs() < 1e-12);
        assert!((law[&2] - 0.32).abs() < 1e-12);
        assert!((law[&3] - 0.04).abs() < 1e-12);
    }

    #[test]
    fn ci_is_degenerate_at_extremes() {
        assert_eq!(binomial_ci99(1.0, 1000), (1.0, 1.0));
        assert_eq!(binomial_ci99(0.0, 1000), (0.0, 0.0));
        let (lo, hi) = binomial_ci99(0.5, 1000);
        assert!((hi - lo - 2.0 * 2.5758293 * (0.25f64 / 1000.0).sqrt()).abs() < 1e-6);
    }
}
