//! Primal–dual interior-point solver for SDPs of max-cut form:
//!
//! ```text
//! maximize  C • X            minimize  Σ y_i
//! s.t.      X_ii = 1          s.t.      S = Diag(y) − C ⪰ 0
//!           X ⪰ 0
//! ```
//!
//! The method is the XZ (HRVW) search direction with a Mehrotra
//! predictor–corrector. Because every constraint is a unit diagonal entry,
//! the Schur complement is the Hadamard product `X ∘ S⁻¹`, a dense
//! positive-definite `n × n` system. Both iterates stay strictly inside their
//! cones, so the solver tracks the central path and converges to the
//! relative interior of the optimal face, i.e. to a maximum-rank optimal
//! primal solution.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::WeightedGraph;
use crate::linalg::{Cholesky, SymMatrix};

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_ITER: usize = 200;
pub const DEFAULT_RANK_TOL: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SdpError {
    #[error("problem dimension must be at least 1")]
    Empty,
    #[error("cost matrix has non-finite entries")]
    NonFinite,
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("dimension mismatch: {0} vs {1}")]
    Dimension(usize, usize),
}

/// Max-cut-form SDP: a symmetric cost matrix; the constraints are implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct SdpProblem {
    c: SymMatrix,
}

impl SdpProblem {
    pub fn new(c: SymMatrix) -> Result<Self, SdpError> {
        if c.n() == 0 {
            return Err(SdpError::Empty);
        }
        if !c.is_finite() {
            return Err(SdpError::NonFinite);
        }
        Ok(Self { c })
    }

    /// The max-cut relaxation of `g`, with `C = L(g) / 4`.
    pub fn maxcut(g: &WeightedGraph) -> Self {
        Self { c: g.cost_matrix() }
    }

    pub fn cost(&self) -> &SymMatrix {
        &self.c
    }

    pub fn n(&self) -> usize {
        self.c.n()
    }

    /// `Diag(y) − C`.
    pub fn slack(&self, y: &[f64]) -> SymMatrix {
        let mut s = self.c.scaled(-1.0);
        for (i, &yi) in y.iter().enumerate() {
            s.add_at(i, i, yi);
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveStatus {
    Converged,
    MaxIterations,
    NumericalFailure,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SdpSolution {
    pub x: SymMatrix,
    pub y: Vec<f64>,
    pub s: SymMatrix,
    pub primal_value: f64,
    pub dual_value: f64,
    pub gap: f64,
    pub iterations: usize,
    pub status: SolveStatus,
}

impl SdpSolution {
    pub fn converged(&self) -> bool {
        self.status == SolveStatus::Converged
    }

    pub fn n(&self) -> usize {
        self.x.n()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

/// Solves with default options.
pub fn solve_default(p: &SdpProblem) -> SdpSolution {
    solve(p, DEFAULT_TOL, DEFAULT_MAX_ITER).expect("default tolerance is valid")
}

/// Runs the interior-point method until the relative duality gap and the
/// diagonal residual are both at most `tol`, then recentres the final
/// iterate so that `‖XS‖_max` is of the order of the gap.
pub fn solve(p: &SdpProblem, tol: f64, max_iter: usize) -> Result<SdpSolution, SdpError> {
    if !(tol > 0.0) {
        return Err(SdpError::BadTolerance(tol));
    }
    let n = p.n();
    let c = p.cost();

    let row_norm = (0..n)
        .map(|i| (0..n).map(|j| c.get(i, j).abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut it = Iterate {
        x: SymMatrix::identity(n),
        y: vec![1.0 + row_norm; n],
        s: SymMatrix::zeros(n),
    };
    it.s = p.slack(&it.y);

    let finish = |it: Iterate, iterations: usize, status: SolveStatus| {
        let primal_value = c.dot(&it.x);
        let dual_value: f64 = it.y.iter().sum();
        SdpSolution {
            gap: dual_value - primal_value,
            x: it.x,
            y: it.y,
            s: it.s,
            primal_value,
            dual_value,
            iterations,
            status,
        }
    };

    let within_tol = |it: &Iterate| {
        let pobj = c.dot(&it.x);
        let dobj: f64 = it.y.iter().sum();
        let pinf =
            it.x.diag()
                .iter()
                .fold(0.0f64, |m, d| m.max((d - 1.0).abs()));
        (dobj - pobj).abs() <= tol * pobj.abs().max(1.0) && pinf <= tol
    };

    // Once the tolerances are met, keep taking steps (a bounded number) while
    // that drives ‖XS‖ down, and remember the best iterate seen.
    let xs_target = XS_TARGET_FACTOR * tol;
    let mut best: Option<(f64, Iterate, usize)> = None;
    let mut extra = 0;
    let mut iter = 0;
    loop {
        if !c.dot(&it.x).is_finite() || !it.y.iter().all(|v| v.is_finite()) {
            break;
        }
        if within_tol(&it) {
            let xs = it.x.product_max_abs(&it.s);
            if best.as_ref().is_none_or(|b| xs < b.0) {
                best = Some((xs, it.clone(), iter));
            }
            if xs <= xs_target || extra == EXTRA_STEPS {
                break;
            }
            extra += 1;
        }
        if iter == max_iter {
            break;
        }
        iter += 1;
        match newton_step(p, &it, None) {
            Some(next) => it = next,
            None => break,
        }
    }
    let (mut best_xs, it, iter) = match best {
        Some(b) => b,
        None => {
            let status = if iter == max_iter {
                SolveStatus::MaxIterations
            } else {
                SolveStatus::NumericalFailure
            };
            return Ok(finish(it, iter, status));
        }
    };
    let mut it = it;

    // Mehrotra steps leave the iterate off the central path, and the
    // off-centrality shows up in XS amplified by the conditioning of X.
    // Short-step path following pulls it back. Steps may transiently raise
    // ‖XS‖, so the best iterate that still meets the tolerances is kept.
    let mut cur = it.clone();
    for _ in 0..CENTERING_STEPS {
        let mu = cur.x.dot(&cur.s) / n as f64;
        if best_xs <= xs_target || best_xs <= 2.0 * mu {
            break;
        }
        let nx = newton_step(p, &cur, Some(CENTERING_SIGMA));
        match nx {
            Some(next) if within_tol(&next) => {
                let xs = next.x.product_max_abs(&next.s);
                cur = next;
                if xs < best_xs {
                    best_xs = xs;
                    it = cur.clone();
                }
            }
            _ => break,
        }
    }
    if best_xs > xs_target {
        if let Some(polished) = polish_dual(p, &it, tol) {
            if within_tol(&polished) && polished.x.product_max_abs(&polished.s) < best_xs {
                it = polished;
            }
        }
    }
    Ok(finish(it, iter, SolveStatus::Converged))
}

/// Refits `y` so that `S` annihilates the dominant eigenvectors of `X`.
///
/// When the Newton steps push `S` against its boundary its null space can
/// drift away from the range of `X`, which leaves `‖XS‖` much larger than the
/// gap. Least squares on `(Diag(y) − C) U = 0`, with `U` the eigenvectors of
/// the non-negligible eigenvalues of `X`, realigns them. `y` is shifted up by
/// `−λ_min(S)` if needed so `S` stays PSD.
fn polish_dual(p: &SdpProblem, it: &Iterate, tol: f64) -> Option<Iterate> {
    let n = p.n();
    let c = p.cost();
    let eig = it.x.eigh();
    let cutoff = tol.sqrt() * eig.values.last().copied().unwrap_or(0.0).max(1.0);
    let range: Vec<&Vec<f64>> = eig
        .values
        .iter()
        .zip(&eig.vectors)
        .filter(|(l, _)| **l > cutoff)
        .map(|(_, v)| v)
        .collect();
    if range.is_empty() || range.len() == n {
        return None;
    }
    let cu: Vec<Vec<f64>> = range.iter().map(|u| c.mul_vec(u)).collect();
    let mut y = Vec::with_capacity(n);
    for i in 0..n {
        let num: f64 = range.iter().zip(&cu).map(|(u, cu)| u[i] * cu[i]).sum();
        let den: f64 = range.iter().map(|u| u[i] * u[i]).sum();
        if den < 1e-12 {
            return None;
        }
        y.push(num / den);
    }
    let lmin = p.slack(&y).min_eigenvalue();
    if lmin < 0.0 {
        y.iter_mut().for_each(|v| *v -= lmin);
    }
    let s = p.slack(&y);
    if !s.is_finite() {
        return None;
    }
    Some(Iterate {
        x: it.x.clone(),
        y,
        s,
    })
}

const CENTERING_STEPS: usize = 50;
const EXTRA_STEPS: usize = 30;
const XS_TARGET_FACTOR: f64 = 10.0;
const CENTERING_SIGMA: f64 = 0.2;

#[derive(Clone)]
struct Iterate {
    x: SymMatrix,
    y: Vec<f64>,
    s: SymMatrix,
}

/// One XZ Newton step. With `centering = None` this is a Mehrotra
/// predictor–corrector step; with `Some(σ)` it is a plain step towards
/// `XS = σμI`. Returns `None` when a factorization fails.
fn newton_step(p: &SdpProblem, it: &Iterate, centering: Option<f64>) -> Option<Iterate> {
    let n = p.n();
    let (x, y, s) = (&it.x, &it.y, &it.s);
    let s_chol = s.cholesky()?;
    let s_inv = s_chol.inverse();
    let x_chol = x.cholesky()?;
    let mu = x.dot(s) / n as f64;

    // Schur complement M = X ∘ S⁻¹.
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            m[i * n + j] = x.get(i, j) * s_inv.get(i, j);
        }
    }
    let m_chol = factor_schur(n, &mut m)?;

    let (dx, dy) = if let Some(sigma) = centering {
        let target = sigma * mu;
        let rhs: Vec<f64> = (0..n).map(|i| target * s_inv.get(i, i) - 1.0).collect();
        let dy = m_chol.solve(&rhs);
        (direction(x, &s_inv, &dy, None, target), dy)
    } else {
        // Predictor (affine scaling, R = 0).
        let dy_a = m_chol.solve(&vec![-1.0; n]);
        let dx_a = direction(x, &s_inv, &dy_a, None, 0.0);
        let ap = (0.95 * step_to_boundary(&x_chol, &dx_a)).min(1.0);
        let ad = (0.95 * step_to_boundary(&s_chol, &SymMatrix::from_diag(&dy_a))).min(1.0);
        let x_aff = x.add(&dx_a.scaled(ap));
        let s_aff = s.add(&SymMatrix::from_diag(&dy_a).scaled(ad));
        let mu_aff = x_aff.dot(&s_aff) / n as f64;
        let sigma = (mu_aff / mu).max(0.0).powi(3).min(1.0);

        // Corrector: R = σμI − ΔX_a ΔS_a with ΔS_a = Diag(Δy_a).
        let target = sigma * mu;
        let rhs: Vec<f64> = (0..n)
            .map(|i| {
                // diag(R S⁻¹)_i = σμ (S⁻¹)_ii − Σ_k (ΔX_a)_ik Δy_a,k (S⁻¹)_ki
                let corr: f64 = (0..n)
                    .map(|k| dx_a.get(i, k) * dy_a[k] * s_inv.get(k, i))
                    .sum();
                target * s_inv.get(i, i) - corr - 1.0
            })
            .collect();
        let dy = m_chol.solve(&rhs);
        (direction(x, &s_inv, &dy, Some((&dx_a, &dy_a)), target), dy)
    };
    let ds = SymMatrix::from_diag(&dy);

    let gamma = if mu < 1e-6 { 0.99 } else { 0.95 };
    let mut ap = (gamma * step_to_boundary(&x_chol, &dx)).min(1.0);
    let mut ad = (gamma * step_to_boundary(&s_chol, &ds)).min(1.0);

    // The boundary step is computed in floating point; back off until both
    // new iterates factor.
    for _ in 0..40 {
        let x_next = x.add(&dx.scaled(ap));
        let y_next: Vec<f64> = y.iter().zip(&dy).map(|(a, b)| a + ad * b).collect();
        if !x_next.is_finite() || y_next.iter().any(|v| !v.is_finite()) {
            return None;
        }
        let s_next = p.slack(&y_next);
        let x_ok = x_next.cholesky().is_some();
        let s_ok = s_next.cholesky().is_some();
        if x_ok && s_ok {
            return Some(Iterate {
                x: x_next,
                y: y_next,
                s: s_next,
            });
        }
        if !x_ok {
            ap *= 0.5;
        }
        if !s_ok {
            ad *= 0.5;
        }
    }
    None
}

/// Cholesky of the Schur complement. Near the optimum `S⁻¹` blows up along
/// the null space of `S` and `M` loses definiteness to rounding; a tiny
/// relative diagonal shift restores it.
fn factor_schur(n: usize, m: &mut [f64]) -> Option<Cholesky> {
    if let Some(c) = Cholesky::from_row_major(n, m) {
        return Some(c);
    }
    let dmax = (0..n).map(|i| m[i * n + i].abs()).fold(0.0, f64::max);
    let mut shift = 1e-15 * dmax;
    for _ in 0..8 {
        for i in 0..n {
            m[i * n + i] += shift;
        }
        if let Some(c) = Cholesky::from_row_major(n, m) {
            return Some(c);
        }
        shift *= 10.0;
    }
    None
}

/// `ΔX = (R S⁻¹ − X − X Diag(Δy) S⁻¹)` symmetrized, with
/// `R = target·I − ΔX_a Diag(Δy_a)` (just `target·I` without a predictor).
fn direction(
    x: &SymMatrix,
    s_inv: &SymMatrix,
    dy: &[f64],
    predictor: Option<(&SymMatrix, &[f64])>,
    target: f64,
) -> SymMatrix {
    let n = x.n();
    // W = target·I − ΔX_a Diag(Δy_a) − X Diag(Δy), then ΔX = W S⁻¹ − X.
    let mut w = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let mut v = -x.get(i, k) * dy[k];
            if let Some((dxa, dya)) = predictor {
                v -= dxa.get(i, k) * dya[k];
            }
            if i == k {
                v += target;
            }
            w[i * n + k] = v;
        }
    }
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let v: f64 = (0..n).map(|k| w[i * n + k] * s_inv.get(k, j)).sum();
            d[i * n + j] = v - x.get(i, j);
        }
    }
    SymMatrix::from_row_major_symmetrized(n, &d)
}

/// Largest `α` with `M + α D ⪰ 0`, given the Cholesky factor of `M`.
fn step_to_boundary(m_chol: &Cholesky, d: &SymMatrix) -> f64 {
    let t = m_chol.congruence_inverse(d);
    let lmin = t.min_eigenvalue();
    if lmin >= 0.0 {
        f64::INFINITY
    } else {
        -1.0 / lmin
    }
}

/// Per-condition residuals of the optimality conditions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimalityReport {
    /// `max |X_ii − 1|`.
    pub primal_diagonal: f64,
    /// `max(0, −λ_min(X))`.
    pub primal_psd: f64,
    /// `‖S − (Diag(y) − C)‖_max` with `y_i = S_ii + C_ii`.
    pub dual_structure: f64,
    /// `max(0, −λ_min(S))`.
    pub dual_psd: f64,
    /// `‖XS‖_max`.
    pub complementarity: f64,
    /// Dual vector recovered from the diagonal of `S`.
    pub y: Vec<f64>,
    pub optimal: bool,
}

/// Checks primal feasibility, dual feasibility and `XS = 0`, each against `tol`.
pub fn check_optimality(
    p: &SdpProblem,
    x: &SymMatrix,
    s: &SymMatrix,
    tol: f64,
) -> Result<OptimalityReport, SdpError> {
    let n = p.n();
    if x.n() != n {
        return Err(SdpError::Dimension(x.n(), n));
    }
    if s.n() != n {
        return Err(SdpError::Dimension(s.n(), n));
    }
    let c = p.cost();
    let primal_diagonal = x.diag().iter().fold(0.0f64, |m, d| m.max((d - 1.0).abs()));
    let primal_psd = (-x.min_eigenvalue()).max(0.0);
    let y: Vec<f64> = (0..n).map(|i| s.get(i, i) + c.get(i, i)).collect();
    let dual_structure = s.sub(&p.slack(&y)).max_abs();
    let dual_psd = (-s.min_eigenvalue()).max(0.0);
    let complementarity = x.product_max_abs(s);
    let optimal = [
        primal_diagonal,
        primal_psd,
        dual_structure,
        dual_psd,
        complementarity,
    ]
    .iter()
    .all(|r| *r <= tol);
    Ok(OptimalityReport {
        primal_diagonal,
        primal_psd,
        dual_structure,
        dual_psd,
        complementarity,
        y,
        optimal,
    })
}

fn rank_threshold(values: &[f64], tol: f64) -> f64 {
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    tol * scale.max(1.0)
}

/// Rank from eigenvalues, with the same cutoff as [`numerical_rank`].
pub fn rank_of(values: &[f64], tol: f64) -> usize {
    let thr = rank_threshold(values, tol);
    values.iter().filter(|v| v.abs() > thr).count()
}

/// Number of eigenvalues with `|λ| > tol · max(1, max |λ|)`.
pub fn numerical_rank(m: &SymMatrix, tol: f64) -> usize {
    rank_of(&m.eigenvalues(), tol)
}

/// Whether some eigenvalue sits within a factor of ten of the rank cutoff.
pub fn rank_is_ambiguous(values: &[f64], tol: f64) -> bool {
    let thr = rank_threshold(values, tol);
    values.iter().any(|v| {
        let a = v.abs();
        a > thr / 10.0 && a < thr * 10.0
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankReport {
    pub rank_x: usize,
    pub rank_s: usize,
    /// Ascending.
    pub eigenvalues_x: Vec<f64>,
    /// Ascending.
    pub eigenvalues_s: Vec<f64>,
    /// `rank_x + rank_s == n`.
    pub strictly_complementary: bool,
    pub tolerance_used: f64,
    /// `rank_x (rank_x + 1) / 2 ≤ n`. When false a lower-rank optimum also exists.
    pub within_pataki_bound: bool,
    pub ambiguous_x: bool,
    pub ambiguous_s: bool,
}

pub fn rank_report(sol: &SdpSolution, tol: f64) -> RankReport {
    let n = sol.n();
    let eigenvalues_x = sol.x.eigenvalues();
    let eigenvalues_s = sol.s.eigenvalues();
    let rank_x = rank_of(&eigenvalues_x, tol);
    let rank_s = rank_of(&eigenvalues_s, tol);
    RankReport {
        rank_x,
        rank_s,
        strictly_complementary: rank_x + rank_s == n,
        tolerance_used: tol,
        within_pataki_bound: rank_x * (rank_x + 1) / 2 <= n,
        ambiguous_x: rank_is_ambiguous(&eigenvalues_x, tol),
        ambiguous_s: rank_is_ambiguous(&eigenvalues_s, tol),
        eigenvalues_x,
        eigenvalues_s,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, WeightedGraph};

    #[test]
    fn two_vertex_edge() {
        let g = WeightedGraph::from_triples(2, &[(0, 1, 1.0)]).unwrap();
        let p = SdpProblem::maxcut(&g);
        let sol = solve_default(&p);
        assert!(sol.converged());
        assert!((sol.primal_value - 1.0).abs() < 1e-7);
        assert!((sol.x.get(0, 1) + 1.0).abs() < 1e-6);
        let r = rank_report(&sol, DEFAULT_RANK_TOL);
        assert_eq!((r.rank_x, r.rank_s), (1, 1));
        assert!(r.strictly_complementary);
    }

    #[test]
    fn zero_cost_returns_identity() {
        let p = SdpProblem::new(SymMatrix::zeros(3)).unwrap();
        let sol = solve_default(&p);
        assert!(sol.converged());
        assert!(sol.x.sub(&SymMatrix::identity(3)).max_abs() < 1e-10);
        assert!(sol.primal_value.abs() < 1e-12);
        let r = rank_report(&sol, DEFAULT_RANK_TOL);
        assert_eq!((r.rank_x, r.rank_s), (3, 0));
    }

    #[test]
    fn triangle_value_is_nine_quarters() {
        let sol = solve_default(&SdpProblem::maxcut(&complete(3)));
        assert!(sol.converged());
        assert!((sol.primal_value - 2.25).abs() < 1e-7);
        assert!((sol.dual_value - 2.25).abs() < 1e-7);
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert!((sol.x.get(i, j) + 0.5).abs() < 1e-6);
                }
            }
        }
        let r = rank_report(&sol, DEFAULT_RANK_TOL);
        assert_eq!((r.rank_x, r.rank_s), (2, 1));
    }

    #[test]
    fn single_vertex() {
        let g = WeightedGraph::new(1, vec![]).unwrap();
        let sol = solve_default(&SdpProblem::maxcut(&g));
        assert!(sol.converged());
        assert!((sol.x.get(0, 0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bad_inputs() {
        assert_eq!(SdpProblem::new(SymMatrix::zeros(0)), Err(SdpError::Empty));
        let p = SdpProblem::maxcut(&complete(3));
        assert!(matches!(solve(&p, 0.0, 10), Err(SdpError::BadTolerance(_))));
        assert!(matches!(
            check_optimality(&p, &SymMatrix::identity(2), &SymMatrix::identity(3), 1e-6),
            Err(SdpError::Dimension(2, 3))
        ));
    }

    #[test]
    fn max_iterations_is_flagged() {
        let sol = solve(&SdpProblem::maxcut(&complete(4)), 1e-12, 2).unwrap();
        assert_eq!(sol.status, SolveStatus::MaxIterations);
        assert_eq!(sol.iterations, 2);
        assert!(sol.gap >= 0.0);
    }

    #[test]
    fn optimality_checks() {
        let g = WeightedGraph::from_triples(2, &[(0, 1, 1.0)]).unwrap();
        let p = SdpProblem::maxcut(&g);
        let x = SymMatrix::outer(&[1.0, -1.0]);
        let s = p.slack(&[0.5, 0.5]);
        let rep = check_optimality(&p, &x, &s, 1e-12).unwrap();
        assert!(rep.optimal, "{rep:?}");
        assert_eq!(rep.y, vec![0.5, 0.5]);

        let zero = SdpProblem::new(SymMatrix::zeros(3)).unwrap();
        let id = SymMatrix::identity(3);
        let rep = check_optimality(&zero, &id, &id, 1e-6).unwrap();
        assert!(!rep.optimal);
        assert_eq!(rep.complementarity, 1.0);

        let mut bad = SymMatrix::identity(3);
        bad.set(0, 0, 0.9);
        let rep = check_optimality(&zero, &bad, &SymMatrix::zeros(3), 1e-6).unwrap();
        assert!(!rep.optimal);
        assert!((rep.primal_diagonal - 0.1).abs() < 1e-12);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(
            numerical_rank(&SymMatrix::outer(&[1.0, -1.0, 1.0]), 1e-6),
            1
        );
        assert_eq!(numerical_rank(&SymMatrix::identity(3), 1e-6), 3);
        assert_eq!(numerical_rank(&SymMatrix::zeros(3), 1e-6), 0);
        assert!(rank_is_ambiguous(&[1.0, 5e-7], 1e-6));
        assert!(!rank_is_ambiguous(&[1.0, 1e-9], 1e-6));
    }
}
