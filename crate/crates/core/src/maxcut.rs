//! The combinatorial side of the relaxation: exact cuts by enumeration,
//! cut recovery from rank-one solutions, hyperplane rounding, and the
//! signed-Laplacian optimality certificate for a candidate cut.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Edge, WeightedGraph};
use crate::linalg::SymMatrix;
use crate::rng::{stream_rng, Gaussian};
use crate::sdp::{numerical_rank, SdpSolution};

/// Largest vertex count accepted by [`brute_force_maxcut`].
pub const BRUTE_FORCE_MAX_N: usize = 26;

/// Eigenvalues of `X` below `−sqrt(GW_TOL)` make rounding refuse the matrix.
pub const GW_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MaxCutError {
    #[error("brute force limited to {max} vertices, graph has {n}")]
    TooLarge { n: usize, max: usize },
    #[error("cut entries must be ±1, found {0} at index {1}")]
    NotSign(f64, usize),
    #[error("cut has {got} entries, graph has {expected} vertices")]
    Length { expected: usize, got: usize },
    #[error("primal matrix is not PSD enough to factor (λ_min = {0:e})")]
    Factorization(f64),
    #[error("at least one rounding trial is required")]
    NoTrials,
}

/// A ±1 assignment of the vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct CutVector(Vec<i8>);

impl CutVector {
    pub fn new(x: Vec<i8>) -> Result<Self, MaxCutError> {
        if let Some((k, &v)) = x.iter().enumerate().find(|(_, &v)| v != 1 && v != -1) {
            return Err(MaxCutError::NotSign(v as f64, k));
        }
        Ok(Self(x))
    }

    /// Signs of `v`, with `sign(0) = +1`.
    pub fn from_signs(v: &[f64]) -> Self {
        Self(v.iter().map(|&a| if a < 0.0 { -1 } else { 1 }).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[i8] {
        &self.0
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(|&v| v as f64).collect()
    }

    /// Representative with first entry `+1`.
    pub fn normalized(&self) -> Self {
        match self.0.first() {
            Some(-1) => self.negated(),
            _ => self.clone(),
        }
    }

    pub fn negated(&self) -> Self {
        Self(self.0.iter().map(|v| -v).collect())
    }

    /// The rank-one primal matrix `x xᵀ`.
    pub fn outer(&self) -> SymMatrix {
        SymMatrix::outer(&self.to_f64())
    }
}

impl TryFrom<Vec<i8>> for CutVector {
    type Error = MaxCutError;
    fn try_from(v: Vec<i8>) -> Result<Self, Self::Error> {
        Self::new(v)
    }
}

impl From<CutVector> for Vec<i8> {
    fn from(c: CutVector) -> Self {
        c.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutResult {
    pub x: CutVector,
    /// Total weight of the edges crossing the cut.
    pub value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Total weight of edges whose endpoints get opposite signs.
pub fn cut_value(g: &WeightedGraph, x: &CutVector) -> f64 {
    g.edges()
        .iter()
        .filter(|e| x.0[e.i] != x.0[e.j])
        .map(|e| e.w)
        .sum()
}

/// Exact maximum cut over all `2^{n−1}` assignments with `x_0 = +1`. Ties
/// keep the lexicographically smallest vector (with `−1 < +1`).
pub fn brute_force_maxcut(g: &WeightedGraph) -> Result<CutResult, MaxCutError> {
    let n = g.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(MaxCutError::TooLarge {
            n,
            max: BRUTE_FORCE_MAX_N,
        });
    }
    let scale = g.edges().iter().map(|e| e.w.abs()).sum::<f64>().max(1.0);
    let eps = 1e-12 * scale;
    let mut best_bits = 0u32;
    let mut best_val = f64::NEG_INFINITY;
    // Bit k (k ≥ 1) of `bits` set means x_k = +1. Iterating `bits` upward
    // from 0 visits vectors in lexicographic order over (x_1, .., x_{n−1})
    // when the most significant bit is x_1.
    let free = n.saturating_sub(1);
    for code in 0u32..(1u32 << free) {
        let val: f64 = g
            .edges()
            .iter()
            .filter(|e| sign_of(code, e.i, free) != sign_of(code, e.j, free))
            .map(|e| e.w)
            .sum();
        if val > best_val + eps {
            best_val = val;
            best_bits = code;
        }
    }
    let x: Vec<i8> = (0..n).map(|v| sign_of(best_bits, v, free)).collect();
    let x = CutVector(x);
    let value = cut_value(g, &x);
    Ok(CutResult {
        x,
        value,
        seed: None,
    })
}

#[inline]
fn sign_of(code: u32, v: usize, free: usize) -> i8 {
    if v == 0 || (code >> (free - v)) & 1 == 1 {
        1
    } else {
        -1
    }
}

/// `C • X` for the max-cut cost of `g`.
pub fn sdp_value(g: &WeightedGraph, sol: &SdpSolution) -> f64 {
    g.cost_matrix().dot(&sol.x)
}

/// If `X` is numerically rank one and its scaled leading eigenvector is a
/// sign vector within `tol`, returns that cut (normalized to `x_0 = +1`).
pub fn recover_cut_if_rank1(sol: &SdpSolution, tol: f64) -> Option<CutVector> {
    rank1_factor(&sol.x, tol)
}

pub(crate) fn rank1_factor(x: &SymMatrix, tol: f64) -> Option<CutVector> {
    if x.n() == 0 || numerical_rank(x, tol) != 1 {
        return None;
    }
    let eig = x.eigh();
    let n = x.n();
    let lam = eig.values[n - 1];
    let mut v: Vec<f64> = eig.vectors[n - 1].iter().map(|a| a * lam.sqrt()).collect();
    if v[0] < 0.0 {
        v.iter_mut().for_each(|a| *a = -*a);
    }
    if v.iter().all(|a| (a.abs() - 1.0).abs() <= tol) {
        Some(CutVector::from_signs(&v))
    } else {
        None
    }
}

/// Hyperplane rounding: factor `X = V Vᵀ` and cut by the sign of `V r` for
/// Gaussian `r`. Trial `t` draws from stream `(seed, t)`; the best cut wins,
/// earliest trial on ties.
pub fn gw_round(
    g: &WeightedGraph,
    sol: &SdpSolution,
    trials: usize,
    seed: u64,
) -> Result<CutResult, MaxCutError> {
    if trials == 0 {
        return Err(MaxCutError::NoTrials);
    }
    let n = sol.n();
    if n != g.n() {
        return Err(MaxCutError::Length {
            expected: g.n(),
            got: n,
        });
    }
    let eig = sol.x.eigh();
    let lmin = eig.values.first().copied().unwrap_or(0.0);
    if lmin < -GW_TOL.sqrt() {
        return Err(MaxCutError::Factorization(lmin));
    }
    let lmax = eig.values.last().copied().unwrap_or(0.0).max(1.0);
    // Columns of V: sqrt(λ_k) v_k for the numerically positive part.
    let factors: Vec<Vec<f64>> = eig
        .values
        .iter()
        .zip(&eig.vectors)
        .filter(|(l, _)| **l > GW_TOL * lmax)
        .map(|(l, v)| v.iter().map(|a| a * l.sqrt()).collect())
        .collect();
    let dim = factors.len();

    let (_, _, x) = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let r = Gaussian::new(stream_rng(seed, t)).vector(dim);
            let proj: Vec<f64> = (0..n)
                .map(|i| factors.iter().zip(&r).map(|(col, rk)| col[i] * rk).sum())
                .collect();
            let x = CutVector::from_signs(&proj);
            (t, x)
        })
        .map(|(t, x)| (t, cut_value(g, &x), x))
        .reduce_with(|a, b| {
            if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) {
                b
            } else {
                a
            }
        })
        .expect("trials ≥ 1");
    let value = cut_value(g, &x);
    Ok(CutResult {
        x,
        value,
        seed: Some(seed),
    })
}

/// `L(G, w̄)` with `w̄_ij = −x_i x_j w_ij`.
pub fn signed_laplacian(g: &WeightedGraph, x: &CutVector) -> Result<SymMatrix, MaxCutError> {
    if x.len() != g.n() {
        return Err(MaxCutError::Length {
            expected: g.n(),
            got: x.len(),
        });
    }
    let edges: Vec<Edge> = g
        .edges()
        .iter()
        .map(|e| Edge {
            w: -(x.0[e.i] as f64) * (x.0[e.j] as f64) * e.w,
            ..*e
        })
        .collect();
    Ok(WeightedGraph::new(g.n(), edges)
        .expect("same topology")
        .laplacian())
}

/// Dual slack certifying `x xᵀ`: `S = ¼ D L(G, w̄) D` with `D = Diag(x)`,
/// which equals `Diag(y) − C` for `y_i = x_i (C x)_i` and satisfies `S x = 0`.
pub fn certificate_dual(g: &WeightedGraph, x: &CutVector) -> Result<SymMatrix, MaxCutError> {
    let l = signed_laplacian(g, x)?;
    let n = g.n();
    let mut s = SymMatrix::zeros(n);
    for i in 0..n {
        for j in 0..=i {
            s.set(i, j, 0.25 * (x.0[i] * x.0[j]) as f64 * l.get(i, j));
        }
    }
    Ok(s)
}

/// True iff `λ_min(L(G, w̄)) ≥ −tol`, which certifies that `x xᵀ` is an
/// optimal primal solution.
pub fn rank1_certificate(g: &WeightedGraph, x: &CutVector, tol: f64) -> Result<bool, MaxCutError> {
    Ok(signed_laplacian(g, x)?.min_eigenvalue() >= -tol)
}
