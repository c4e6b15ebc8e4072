//! Structural results for cycles, vertex sums and the diamond graph.
//!
//! Vertex labels are 0-based throughout. The diamond is the edge sum of two
//! triangles `{0,1,2}` and `{1,2,3}` glued along the edge `(1,2)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::WeightedGraph;
use crate::linalg::SymMatrix;
use crate::maxcut::{
    brute_force_maxcut, certificate_dual, cut_value, signed_laplacian, CutVector, MaxCutError,
};
use crate::sdp::{numerical_rank, DEFAULT_RANK_TOL};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StructureError {
    #[error("cycle needs at least 3 edges, got {0}")]
    CycleTooShort(usize),
    #[error("edge {index} has zero weight")]
    ZeroWeight { index: usize },
    #[error("minor size {m} out of range for a cycle on {n} vertices")]
    MinorIndex { m: usize, n: usize },
    #[error("matrix dimensions do not match: {0}")]
    Dimension(String),
    #[error("{which} is not optimal (worst residual {residual:e})")]
    NotOptimal { which: &'static str, residual: f64 },
    #[error("graph is not a diamond on vertices 0..3 with shared edge (1,2)")]
    NotDiamond,
    #[error("edge ({i},{j}) has non-positive weight {w}")]
    NonPositiveWeight { i: usize, j: usize, w: f64 },
    #[error("triangle {0} has no rank-1 optimal solution")]
    TriangleNotRank1(usize),
    #[error("triangle cuts disagree on the shared edge")]
    TrianglesDisagree,
    #[error(transparent)]
    MaxCut(#[from] MaxCutError),
}

// ---------------------------------------------------------------------------
// Cycles

/// Why a cycle admits a rank-1 optimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycleReason {
    EvenPositives,
    /// Edge `m` satisfies `1/|w_m| ≥ Σ_{i≠m} 1/|w_i|`.
    DominantWeight(usize),
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "CycleAnalysisJson", try_from = "CycleAnalysisJson")]
pub struct CycleAnalysis {
    pub has_rank1: bool,
    pub reason: CycleReason,
    pub optimal_cut: Option<CutVector>,
    /// `1/|w_m| − Σ_{i≠m} 1/|w_i|` for the smallest `|w_m|`. Non-negative
    /// exactly when the dominant-weight inequality holds.
    pub dominant_margin: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CycleAnalysisJson {
    has_rank1: bool,
    reason: String,
    dominant_edge: Option<usize>,
    optimal_cut: Option<CutVector>,
    dominant_margin: f64,
}

impl From<CycleAnalysis> for CycleAnalysisJson {
    fn from(a: CycleAnalysis) -> Self {
        let (reason, dominant_edge) = match a.reason {
            CycleReason::EvenPositives => ("EvenPositives", None),
            CycleReason::DominantWeight(m) => ("DominantWeight", Some(m)),
            CycleReason::None => ("None", None),
        };
        Self {
            has_rank1: a.has_rank1,
            reason: reason.to_string(),
            dominant_edge,
            optimal_cut: a.optimal_cut,
            dominant_margin: a.dominant_margin,
        }
    }
}

impl TryFrom<CycleAnalysisJson> for CycleAnalysis {
    type Error = String;
    fn try_from(j: CycleAnalysisJson) -> Result<Self, String> {
        let reason = match (j.reason.as_str(), j.dominant_edge) {
            ("EvenPositives", None) => CycleReason::EvenPositives,
            ("DominantWeight", Some(m)) => CycleReason::DominantWeight(m),
            ("None", None) => CycleReason::None,
            (r, m) => return Err(format!("invalid reason {r:?} with dominant_edge {m:?}")),
        };
        Ok(Self {
            has_rank1: j.has_rank1,
            reason,
            optimal_cut: j.optimal_cut,
            dominant_margin: j.dominant_margin,
        })
    }
}

/// Rank-1 test for the cycle whose edge `i` joins `i` and `i+1 mod n` with
/// weight `weights[i]`. When a rank-1 optimum exists it is unique, and the
/// corresponding cut is returned with `x_0 = +1`.
pub fn cycle_rank1_analysis(weights: &[f64]) -> Result<CycleAnalysis, StructureError> {
    let n = weights.len();
    if n < 3 {
        return Err(StructureError::CycleTooShort(n));
    }
    if let Some(index) = weights.iter().position(|w| *w == 0.0) {
        return Err(StructureError::ZeroWeight { index });
    }
    let positives = weights.iter().filter(|w| **w > 0.0).count();

    let m = (0..n)
        .min_by(|&a, &b| weights[a].abs().total_cmp(&weights[b].abs()))
        .expect("n ≥ 3");
    let rest: f64 = (0..n)
        .filter(|&i| i != m)
        .map(|i| 1.0 / weights[i].abs())
        .sum();
    let dominant_margin = 1.0 / weights[m].abs() - rest;

    let reason = if positives % 2 == 0 {
        CycleReason::EvenPositives
    } else if dominant_margin >= 0.0 {
        CycleReason::DominantWeight(m)
    } else {
        CycleReason::None
    };

    let optimal_cut = match reason {
        CycleReason::None => None,
        _ => {
            // Cut every edge whose weight is positive and keep every negative
            // edge, except the dominant edge, which goes the other way.
            let mut x = vec![1i8; n];
            for i in 0..n - 1 {
                let mut s: i8 = if weights[i] > 0.0 { -1 } else { 1 };
                if reason == CycleReason::DominantWeight(i) {
                    s = -s;
                }
                x[i + 1] = x[i] * s;
            }
            Some(CutVector::new(x).expect("entries are ±1"))
        }
    };

    Ok(CycleAnalysis {
        has_rank1: reason != CycleReason::None,
        reason,
        optimal_cut,
        dominant_margin,
    })
}

/// Determinant of the lower-right `m × m` principal minor of `−L(C_n, w)`,
/// computed as the `m`-th elementary symmetric polynomial of the `m + 1`
/// numbers `−w_{n−m−1}, …, −w_{n−1}` through the recurrence
/// `d_m = −w_{n−m−1} d_{m−1} + (−1)^m w_{n−m} ⋯ w_{n−1}`, `d_0 = 1`.
pub fn cycle_symmetric_minor_determinant(weights: &[f64], m: usize) -> Result<f64, StructureError> {
    let n = weights.len();
    if n < 3 {
        return Err(StructureError::CycleTooShort(n));
    }
    if m == 0 || m >= n {
        return Err(StructureError::MinorIndex { m, n });
    }
    let mut d = 1.0;
    for k in 1..=m {
        let tail: f64 = weights[n - k..].iter().product();
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        d = -weights[n - k - 1] * d + sign * tail;
    }
    Ok(d)
}

// ---------------------------------------------------------------------------
// Vertex sums

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexSumComposition {
    pub x_composed: SymMatrix,
    pub s_composed: SymMatrix,
    pub rank_x1: usize,
    pub rank_x2: usize,
    /// `rank X₁ + rank X₂ − 1`.
    pub rank_formula_value: usize,
}

fn check_pair(
    which: &'static str,
    x: &SymMatrix,
    s: &SymMatrix,
    tol: f64,
) -> Result<(), StructureError> {
    if x.n() != s.n() || x.n() == 0 {
        return Err(StructureError::Dimension(format!(
            "{which}: X is {}×{0}, S is {}×{1}",
            x.n(),
            s.n()
        )));
    }
    let diag = x.diag().iter().fold(0.0f64, |m, d| m.max((d - 1.0).abs()));
    let residual = diag
        .max(-x.min_eigenvalue())
        .max(-s.min_eigenvalue())
        .max(x.product_max_abs(s));
    if residual.is_nan() || residual > tol {
        return Err(StructureError::NotOptimal { which, residual });
    }
    Ok(())
}

/// Glues the optimal pairs of `g1` and `g2` along the last vertex of `g1`
/// and the first vertex of `g2`.
///
/// Each pair is checked for unit diagonal, `X ⪰ 0`, `S ⪰ 0` and `XS = 0`
/// within `tol`; ranks are taken at relative tolerance `rank_tol`.
pub fn compose_vertex_sum(
    x1: &SymMatrix,
    s1: &SymMatrix,
    x2: &SymMatrix,
    s2: &SymMatrix,
    tol: f64,
    rank_tol: f64,
) -> Result<VertexSumComposition, StructureError> {
    check_pair("first pair", x1, s1, tol)?;
    check_pair("second pair", x2, s2, tol)?;
    let (n1, n2) = (x1.n(), x2.n());
    let n = n1 + n2 - 1;
    let g = n1 - 1;

    let mut x = SymMatrix::zeros(n);
    for i in 0..n1 {
        for j in 0..=i {
            x.set(i, j, x1.get(i, j));
        }
    }
    for i in 0..n2 {
        for j in 0..=i {
            x.set(g + i, g + j, x2.get(i, j));
        }
    }
    // Off-diagonal block y₁ y₂ᵀ.
    for i in 0..g {
        for j in 1..n2 {
            x.set(i, g + j, x1.get(i, g) * x2.get(j, 0));
        }
    }
    let s = s1.embed(n, 0).add(&s2.embed(n, g));

    let rank_x1 = numerical_rank(x1, rank_tol);
    let rank_x2 = numerical_rank(x2, rank_tol);
    Ok(VertexSumComposition {
        x_composed: x,
        s_composed: s,
        rank_x1,
        rank_x2,
        rank_formula_value: rank_x1 + rank_x2 - 1,
    })
}

/// Gram factor `V` (`r × n`, row-major by column index) with `X = VᵀV`,
/// keeping the eigenpairs above the rank cutoff.
fn gram_columns(x: &SymMatrix, rank_tol: f64, dim: usize) -> Vec<Vec<f64>> {
    let eig = x.eigh();
    let n = x.n();
    let r = numerical_rank(x, rank_tol);
    let mut cols = vec![vec![0.0; dim]; n];
    for (k, idx) in (n - r..n).enumerate() {
        let l = eig.values[idx].max(0.0).sqrt();
        for (i, col) in cols.iter_mut().enumerate() {
            col[k] = l * eig.vectors[idx][i];
        }
    }
    cols
}

/// A vertex-sum primal matrix with the same diagonal blocks as the block
/// composition but rank at most `max(rank X₁, rank X₂)`.
///
/// Both Gram factors are placed in a common space of that dimension and the
/// second is reflected so the glued vertex receives the same vector in both.
/// No edge crosses between the two parts, so the objective is unchanged.
pub fn vertex_sum_low_rank_completion(x1: &SymMatrix, x2: &SymMatrix, rank_tol: f64) -> SymMatrix {
    let r = numerical_rank(x1, rank_tol)
        .max(numerical_rank(x2, rank_tol))
        .max(1);
    let v1 = gram_columns(x1, rank_tol, r);
    let mut v2 = gram_columns(x2, rank_tol, r);
    let u = &v1[x1.n() - 1];
    let v = v2[0].clone();

    // Orthogonal map sending v to u (both unit vectors): the Householder
    // reflection along v − u, or along v + u followed by negation when v and
    // u are close, which keeps the reflection vector well away from zero.
    let diff: f64 = v.iter().zip(u).map(|(a, b)| (a - b).powi(2)).sum();
    let sum: f64 = v.iter().zip(u).map(|(a, b)| (a + b).powi(2)).sum();
    let negate = diff <= sum;
    let w: Vec<f64> = v
        .iter()
        .zip(u)
        .map(|(a, b)| if negate { a + b } else { a - b })
        .collect();
    let ww = diff.max(sum);
    for col in v2.iter_mut() {
        let t = 2.0 * w.iter().zip(col.iter()).map(|(a, b)| a * b).sum::<f64>() / ww;
        col.iter_mut().zip(&w).for_each(|(c, wk)| {
            *c -= t * wk;
            if negate {
                *c = -*c;
            }
        });
    }
    let cols: Vec<&Vec<f64>> = v1.iter().chain(v2.iter().skip(1)).collect();
    let n = cols.len();
    let mut x = SymMatrix::zeros(n);
    for i in 0..n {
        for j in 0..=i {
            x.set(i, j, cols[i].iter().zip(cols[j]).map(|(a, b)| a * b).sum());
        }
    }
    // Keep the diagonal blocks exact.
    let g = x1.n() - 1;
    for i in 0..x1.n() {
        for j in 0..=i {
            x.set(i, j, x1.get(i, j));
        }
    }
    for i in 0..x2.n() {
        for j in 0..=i {
            x.set(g + i, g + j, x2.get(i, j));
        }
    }
    x
}

/// Rank guaranteed to be achievable by some optimal solution of the vertex
/// sum: `max(rank X₁, rank X₂)`. The claim is checked against the witness of
/// [`vertex_sum_low_rank_completion`] in debug builds.
pub fn vertex_sum_min_rank_exists(x1: &SymMatrix, x2: &SymMatrix) -> usize {
    let r = numerical_rank(x1, DEFAULT_RANK_TOL).max(numerical_rank(x2, DEFAULT_RANK_TOL));
    debug_assert!(
        numerical_rank(
            &vertex_sum_low_rank_completion(x1, x2, DEFAULT_RANK_TOL),
            DEFAULT_RANK_TOL
        ) <= r
    );
    r
}

// ---------------------------------------------------------------------------
// Diamond

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DiamondRegime {
    /// Shared edge uncut: `x = (−1, 1, 1, −1)`.
    Aligned,
    /// Shared edge cut: `x = (ε₁, −1, 1, ε₂)`.
    Flipped,
    Neither,
}

/// Diamond weights in canonical order `(w01, w02, w12, w13, w23)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiamondWeights {
    pub w01: f64,
    pub w02: f64,
    pub w12: f64,
    pub w13: f64,
    pub w23: f64,
}

pub const DIAMOND_EDGES: [(usize, usize); 5] = [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)];

impl DiamondWeights {
    pub fn from_graph(g: &WeightedGraph) -> Result<Self, StructureError> {
        if g.n() != 4 || g.edge_count() != 5 {
            return Err(StructureError::NotDiamond);
        }
        let w: Vec<f64> = DIAMOND_EDGES
            .iter()
            .map(|&(i, j)| g.weight(i, j).ok_or(StructureError::NotDiamond))
            .collect::<Result<_, _>>()?;
        Ok(Self {
            w01: w[0],
            w02: w[1],
            w12: w[2],
            w13: w[3],
            w23: w[4],
        })
    }

    pub fn graph(&self) -> WeightedGraph {
        let w = self.as_array();
        let t: Vec<_> = DIAMOND_EDGES
            .iter()
            .zip(w)
            .map(|(&(i, j), w)| (i, j, w))
            .collect();
        WeightedGraph::from_triples(4, &t).expect("valid diamond")
    }

    pub fn as_array(&self) -> [f64; 5] {
        [self.w01, self.w02, self.w12, self.w13, self.w23]
    }

    /// `h(w01, w02) + h(w13, w23)` with `h(a, b) = 1/(1/a + 1/b)`: the
    /// effective conductance between vertices 1 and 2 once the shared edge is
    /// removed. The aligned cut is optimal exactly when `w12` is at most this.
    pub fn aligned_bound(&self) -> f64 {
        let h = |a: f64, b: f64| 1.0 / (1.0 / a + 1.0 / b);
        h(self.w01, self.w02) + h(self.w13, self.w23)
    }

    /// `min(h(w01, w02), h(w13, w23))`. Sufficient for the aligned cut but not
    /// necessary: it misses diamonds whose triangle optima both cut the
    /// shared edge.
    pub fn stated_aligned_bound(&self) -> f64 {
        let h = |a: f64, b: f64| 1.0 / (1.0 / a + 1.0 / b);
        h(self.w01, self.w02).min(h(self.w13, self.w23))
    }

    /// `1/|1/w01 − 1/w02| + 1/|1/w13 − 1/w23|`, or `None` when a difference
    /// vanishes and the flipped condition cannot hold.
    pub fn flipped_bound(&self) -> Option<f64> {
        let d1 = (1.0 / self.w01 - 1.0 / self.w02).abs();
        let d2 = (1.0 / self.w13 - 1.0 / self.w23).abs();
        if d1 == 0.0 || d2 == 0.0 {
            None
        } else {
            Some(1.0 / d1 + 1.0 / d2)
        }
    }

    /// Regime from the weight inequalities alone, without the triangle
    /// precondition.
    pub fn regime(&self) -> DiamondRegime {
        if self.w12 <= self.aligned_bound() {
            DiamondRegime::Aligned
        } else if self.flipped_bound().is_some_and(|b| self.w12 >= b) {
            DiamondRegime::Flipped
        } else {
            DiamondRegime::Neither
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiamondAnalysis {
    pub regime: DiamondRegime,
    pub x_star: Option<CutVector>,
    pub s_star: Option<SymMatrix>,
    /// The shared weight `w12`.
    pub condition_lhs: f64,
    /// The bound it is compared against: the flipped bound in the Flipped
    /// regime, the aligned bound otherwise.
    pub condition_rhs: f64,
    pub aligned_bound: f64,
    pub flipped_bound: Option<f64>,
}

fn triangle_cuts(w: &DiamondWeights) -> Result<(CutVector, CutVector), StructureError> {
    // Triangle {0,1,2} as the cycle 0→1→2→0, triangle {1,2,3} as 1→2→3→1.
    let t1 = cycle_rank1_analysis(&[w.w01, w.w12, w.w02])?;
    let t2 = cycle_rank1_analysis(&[w.w12, w.w23, w.w13])?;
    let x1 = t1.optimal_cut.ok_or(StructureError::TriangleNotRank1(1))?;
    let x2 = t2.optimal_cut.ok_or(StructureError::TriangleNotRank1(2))?;
    let (a, b) = (x1.entries(), x2.entries());
    if a[1] * a[2] != b[0] * b[1] {
        return Err(StructureError::TrianglesDisagree);
    }
    Ok((x1, x2))
}

/// Closed-form dual for the diamond at the rank-1 optimum `x`:
/// the padded triangle duals minus the dual of the shared edge alone,
/// `S* = pad(S₁) + pad(S₂) − S_e`. The shared-edge term is
/// `(w12/4)[[−p, 1], [1, −p]]` on vertices 1, 2 with `p = x₁x₂`.
pub fn diamond_dual(w: &DiamondWeights, x: &CutVector) -> Result<SymMatrix, StructureError> {
    if x.len() != 4 {
        return Err(MaxCutError::Length {
            expected: 4,
            got: x.len(),
        }
        .into());
    }
    let e = x.entries();
    let tri1 = WeightedGraph::from_triples(3, &[(0, 1, w.w01), (0, 2, w.w02), (1, 2, w.w12)])
        .expect("triangle");
    let tri2 = WeightedGraph::from_triples(3, &[(0, 1, w.w12), (0, 2, w.w13), (1, 2, w.w23)])
        .expect("triangle");
    let s1 = certificate_dual(&tri1, &CutVector::new(e[..3].to_vec())?)?;
    let s2 = certificate_dual(&tri2, &CutVector::new(e[1..].to_vec())?)?;
    let p = (e[1] * e[2]) as f64;
    let mut s = s1.embed(4, 0).add(&s2.embed(4, 1));
    let q = w.w12 / 4.0;
    s.add_at(1, 1, q * p);
    s.add_at(2, 2, q * p);
    s.add_at(1, 2, -q);
    Ok(s)
}

/// Regime classification for a positively weighted diamond whose two
/// triangles have rank-1 optima that agree on the shared edge.
pub fn diamond_analysis(g: &WeightedGraph) -> Result<DiamondAnalysis, StructureError> {
    let w = DiamondWeights::from_graph(g)?;
    for (&(i, j), wt) in DIAMOND_EDGES.iter().zip(w.as_array()) {
        if !(wt > 0.0) {
            return Err(StructureError::NonPositiveWeight { i, j, w: wt });
        }
    }
    triangle_cuts(&w)?;

    let regime = w.regime();
    let aligned_bound = w.aligned_bound();
    let flipped_bound = w.flipped_bound();
    let x_star = match regime {
        DiamondRegime::Aligned => Some(CutVector::new(vec![-1, 1, 1, -1])?),
        DiamondRegime::Flipped => {
            let canon = w.graph();
            let best = brute_force_maxcut(&canon)?.value;
            let mut chosen: Option<(f64, CutVector)> = None;
            for e1 in [-1i8, 1] {
                for e2 in [-1i8, 1] {
                    let x = CutVector::new(vec![e1, -1, 1, e2])?;
                    let v = cut_value(&canon, &x);
                    if chosen.as_ref().is_none_or(|(bv, _)| v > *bv) {
                        chosen = Some((v, x));
                    }
                }
            }
            let (v, x) = chosen.expect("four candidates");
            debug_assert!((v - best).abs() <= 1e-9 * best.abs().max(1.0));
            Some(x)
        }
        DiamondRegime::Neither => None,
    };
    let s_star = x_star.as_ref().map(|x| diamond_dual(&w, x)).transpose()?;
    let condition_rhs = match regime {
        DiamondRegime::Flipped => flipped_bound.expect("flipped regime has a bound"),
        _ => aligned_bound,
    };
    Ok(DiamondAnalysis {
        regime,
        x_star,
        s_star,
        condition_lhs: w.w12,
        condition_rhs,
        aligned_bound,
        flipped_bound,
    })
}

fn det3(m: &SymMatrix) -> f64 {
    let a = |i, j| m.get(i, j);
    a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1))
        - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
        + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0))
}

/// Determinant of the upper-left `3 × 3` block of `L(G, w̄)`,
/// `w̄_ij = −x_i x_j w_ij`, for a diamond `g` and cut `x`.
pub fn diamond_flipped_minor_determinant(
    g: &WeightedGraph,
    x: &CutVector,
) -> Result<f64, StructureError> {
    DiamondWeights::from_graph(g)?;
    let l = signed_laplacian(g, x)?;
    Ok(det3(&l.principal(&[0, 1, 2])))
}

/// Expanded form of [`diamond_flipped_minor_determinant`] at
/// `x = (1, −1, 1, 1)`, with `a = w01, b = w02, c = w12, d = w13, e = w23`:
/// `c(a − b)(d − e) − abd + abe − ade + bde`.
pub fn diamond_flipped_determinant_polynomial(w: &DiamondWeights) -> f64 {
    let (a, b, c, d, e) = (w.w01, w.w02, w.w12, w.w13, w.w23);
    c * (a - b) * (d - e) - a * b * d + a * b * e - a * d * e + b * d * e
}
