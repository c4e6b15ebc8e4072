//! Weighted undirected graphs, their Laplacians, the named families used in
//! the experiments, and vertex/edge clique sums.
//!
//! Vertices are `0..n`. An edge is stored once, in the orientation it was
//! given; lookups treat `(i, j)` and `(j, i)` as the same pair.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::SymMatrix;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("graph must have at least one vertex")]
    Empty,
    #[error("edge {index} ({i}, {j}) references a vertex outside 0..{n}")]
    VertexOutOfRange {
        index: usize,
        i: usize,
        j: usize,
        n: usize,
    },
    #[error("edge {index} is a self-loop on vertex {i}")]
    SelfLoop { index: usize, i: usize },
    #[error("edge {index} ({i}, {j}) duplicates an earlier edge")]
    Duplicate { index: usize, i: usize, j: usize },
    #[error("edge {index} has non-finite weight")]
    NonFiniteWeight { index: usize },
    #[error("expected {expected} weights, got {got}")]
    WeightCount { expected: usize, got: usize },
    #[error("unknown graph name `{0}`")]
    UnknownName(String),
    #[error("invalid clique sum: {0}")]
    CliqueSpec(String),
    #[error("shared edge weights differ: {0} vs {1}")]
    SharedWeightMismatch(f64, f64),
    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<GraphError>,
    },
    #[error("malformed graph JSON: {0}")]
    Json(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub w: f64,
}

impl Edge {
    fn key(&self) -> (usize, usize) {
        (self.i.min(self.j), self.i.max(self.j))
    }
}

/// Vertex count plus a simple weighted edge list.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<Edge>,
}

impl WeightedGraph {
    pub fn new(n: usize, edges: Vec<Edge>) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut seen = HashSet::with_capacity(edges.len());
        for (index, e) in edges.iter().enumerate() {
            if e.i >= n || e.j >= n {
                return Err(GraphError::VertexOutOfRange {
                    index,
                    i: e.i,
                    j: e.j,
                    n,
                });
            }
            if e.i == e.j {
                return Err(GraphError::SelfLoop { index, i: e.i });
            }
            if !e.w.is_finite() {
                return Err(GraphError::NonFiniteWeight { index });
            }
            if !seen.insert(e.key()) {
                return Err(GraphError::Duplicate {
                    index,
                    i: e.i,
                    j: e.j,
                });
            }
        }
        Ok(Self { n, edges })
    }

    /// Convenience constructor from `(i, j, w)` triples.
    pub fn from_triples(n: usize, triples: &[(usize, usize, f64)]) -> Result<Self, GraphError> {
        Self::new(
            n,
            triples.iter().map(|&(i, j, w)| Edge { i, j, w }).collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.edges.iter().map(|e| e.w).collect()
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.w).sum()
    }

    pub fn weight(&self, i: usize, j: usize) -> Option<f64> {
        let key = (i.min(j), i.max(j));
        self.edges.iter().find(|e| e.key() == key).map(|e| e.w)
    }

    /// Indices of edges whose weight is exactly zero. Such edges are legal
    /// here but rejected by the cycle analysis.
    pub fn zero_weight_edges(&self) -> Vec<usize> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.w == 0.0)
            .map(|(k, _)| k)
            .collect()
    }

    /// Same topology and edge order with new weights.
    pub fn with_weights(&self, weights: &[f64]) -> Result<Self, GraphError> {
        if weights.len() != self.edges.len() {
            return Err(GraphError::WeightCount {
                expected: self.edges.len(),
                got: weights.len(),
            });
        }
        let edges = self
            .edges
            .iter()
            .zip(weights)
            .map(|(e, &w)| Edge { w, ..*e })
            .collect();
        Self::new(self.n, edges)
    }

    /// Induced subgraph on `vertices`; vertex `vertices[k]` becomes `k`.
    /// Edges keep their original relative order.
    pub fn induced(&self, vertices: &[usize]) -> Result<Self, GraphError> {
        let mut map = vec![usize::MAX; self.n];
        for (k, &v) in vertices.iter().enumerate() {
            if v >= self.n {
                return Err(GraphError::CliqueSpec(format!("vertex {v} out of range")));
            }
            map[v] = k;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| map[e.i] != usize::MAX && map[e.j] != usize::MAX)
            .map(|e| Edge {
                i: map[e.i],
                j: map[e.j],
                w: e.w,
            })
            .collect();
        Self::new(vertices.len(), edges)
    }

    /// Relabels vertices with `perm[old] = new`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Self, GraphError> {
        let edges = self
            .edges
            .iter()
            .map(|e| Edge {
                i: perm[e.i],
                j: perm[e.j],
                w: e.w,
            })
            .collect();
        Self::new(self.n, edges)
    }

    /// `L_ij = −w_ij` on edges, `L_ii = Σ_k w_ik`; rows sum to zero.
    pub fn laplacian(&self) -> SymMatrix {
        let mut l = SymMatrix::zeros(self.n);
        for e in &self.edges {
            l.add_at(e.i, e.j, -e.w);
            l.add_at(e.i, e.i, e.w);
            l.add_at(e.j, e.j, e.w);
        }
        l
    }

    /// Max-cut objective matrix `C = L / 4`.
    pub fn cost_matrix(&self) -> SymMatrix {
        self.laplacian().scaled(0.25)
    }

    /// Parses the `{"n": .., "edges": [[i, j, w], ..]}` format. Validation
    /// failures on a particular edge are reported with the line it sits on.
    pub fn from_json_str(text: &str) -> Result<Self, GraphError> {
        let raw: GraphJson =
            serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
        let n = raw.n;
        let edges = raw
            .edges
            .iter()
            .map(|&(i, j, w)| Edge { i, j, w })
            .collect();
        Self::new(n, edges).map_err(|err| {
            let index = match &err {
                GraphError::VertexOutOfRange { index, .. }
                | GraphError::SelfLoop { index, .. }
                | GraphError::Duplicate { index, .. }
                | GraphError::NonFiniteWeight { index } => Some(*index),
                _ => None,
            };
            match index.and_then(|k| edge_line(text, k)) {
                Some(line) => GraphError::AtLine {
                    line,
                    source: Box::new(err),
                },
                None => err,
            }
        })
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&GraphJson::from(self)).expect("graph serializes")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphJson {
    n: usize,
    edges: Vec<(usize, usize, f64)>,
}

impl From<&WeightedGraph> for GraphJson {
    fn from(g: &WeightedGraph) -> Self {
        Self {
            n: g.n,
            edges: g.edges.iter().map(|e| (e.i, e.j, e.w)).collect(),
        }
    }
}

impl Serialize for WeightedGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GraphJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeightedGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = GraphJson::deserialize(d)?;
        let edges = raw
            .edges
            .iter()
            .map(|&(i, j, w)| Edge { i, j, w })
            .collect();
        WeightedGraph::new(raw.n, edges).map_err(serde::de::Error::custom)
    }
}

/// 1-based line of the `k`-th entry of the top-level `"edges"` array.
fn edge_line(text: &str, k: usize) -> Option<usize> {
    let start = text.find("\"edges\"")?;
    let bytes = text.as_bytes();
    let mut pos = start + "\"edges\"".len();
    while pos < bytes.len() && bytes[pos] != b'[' {
        pos += 1;
    }
    let mut depth = 0usize;
    let mut seen = 0usize;
    let mut in_str = false;
    while pos < bytes.len() {
        let c = bytes[pos];
        if in_str {
            if c == b'\\' {
                pos += 1;
            } else if c == b'"' {
                in_str = false;
            }
        } else {
            match c {
                b'"' => in_str = true,
                b'[' => {
                    depth += 1;
                    if depth == 2 {
                        if seen == k {
                            return Some(text[..pos].matches('\n').count() + 1);
                        }
                        seen += 1;
                    }
                }
                b']' => {
                    depth = depth.saturating_sub(1);
                    if depth == 0 {
                        return None;
                    }
                }
                _ => {}
            }
        }
        pos += 1;
    }
    None
}

/// Two graphs glued along a shared clique of one or two vertices.
#[derive(Debug, Clone)]
pub struct CliqueSumSpec {
    pub g1: WeightedGraph,
    pub g2: WeightedGraph,
    /// Shared clique vertices in `g1`.
    pub map1: Vec<usize>,
    /// Corresponding vertices in `g2`, position by position.
    pub map2: Vec<usize>,
}

/// Result of a clique sum with the vertex relabeling that produced it.
#[derive(Debug, Clone)]
pub struct CliqueSum {
    pub graph: WeightedGraph,
    /// `relabel1[v]` is the new label of `g1`'s vertex `v`.
    pub relabel1: Vec<usize>,
    /// `relabel2[v]` is the new label of `g2`'s vertex `v`.
    pub relabel2: Vec<usize>,
}

impl CliqueSum {
    /// New labels of the shared clique, in `map1` order.
    pub fn shared(&self, spec: &CliqueSumSpec) -> Vec<usize> {
        spec.map1.iter().map(|&v| self.relabel1[v]).collect()
    }
}

impl CliqueSumSpec {
    fn validate(&self, k: usize) -> Result<(), GraphError> {
        if self.map1.len() != k || self.map2.len() != k {
            return Err(GraphError::CliqueSpec(format!(
                "expected {k} shared vertices per side, got {} and {}",
                self.map1.len(),
                self.map2.len()
            )));
        }
        for (map, g, side) in [(&self.map1, &self.g1, 1), (&self.map2, &self.g2, 2)] {
            if let Some(&v) = map.iter().find(|&&v| v >= g.n()) {
                return Err(GraphError::CliqueSpec(format!("vertex {v} not in g{side}")));
            }
            if k == 2 {
                if map[0] == map[1] {
                    return Err(GraphError::CliqueSpec(format!(
                        "repeated shared vertex in g{side}"
                    )));
                }
                if g.weight(map[0], map[1]).is_none() {
                    return Err(GraphError::CliqueSpec(format!(
                        "({}, {}) is not an edge of g{side}",
                        map[0], map[1]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Canonical labels: `g1`'s private vertices in order, then the shared
    /// clique (in `map1` order), then `g2`'s private vertices in order.
    fn relabel(&self) -> (Vec<usize>, Vec<usize>) {
        let k = self.map1.len();
        let n1 = self.g1.n();
        let mut r1 = vec![0; n1];
        let mut next = 0;
        for v in 0..n1 {
            if let Some(p) = self.map1.iter().position(|&m| m == v) {
                r1[v] = n1 - k + p;
            } else {
                r1[v] = next;
                next += 1;
            }
        }
        let mut r2 = vec![0; self.g2.n()];
        let mut next = n1;
        for v in 0..self.g2.n() {
            if let Some(p) = self.map2.iter().position(|&m| m == v) {
                r2[v] = n1 - k + p;
            } else {
                r2[v] = next;
                next += 1;
            }
        }
        (r1, r2)
    }

    fn glue(&self, k: usize) -> Result<CliqueSum, GraphError> {
        let (r1, r2) = self.relabel();
        let n = self.g1.n() + self.g2.n() - k;
        let shared: HashSet<(usize, usize)> = if k == 2 {
            let (a, b) = (r1[self.map1[0]], r1[self.map1[1]]);
            [(a.min(b), a.max(b))].into_iter().collect()
        } else {
            HashSet::new()
        };
        let mut edges: Vec<Edge> = self
            .g1
            .edges()
            .iter()
            .map(|e| Edge {
                i: r1[e.i],
                j: r1[e.j],
                w: e.w,
            })
            .collect();
        for e in self.g2.edges() {
            let (i, j) = (r2[e.i], r2[e.j]);
            if !shared.contains(&(i.min(j), i.max(j))) {
                edges.push(Edge { i, j, w: e.w });
            }
        }
        Ok(CliqueSum {
            graph: WeightedGraph::new(n, edges)?,
            relabel1: r1,
            relabel2: r2,
        })
    }
}

/// Glues two graphs at one vertex. The shared vertex becomes `n1 − 1`.
pub fn vertex_sum(spec: &CliqueSumSpec) -> Result<CliqueSum, GraphError> {
    spec.validate(1)?;
    spec.glue(1)
}

/// Glues two graphs along an edge of equal weight. The shared edge becomes
/// `(n1 − 2, n1 − 1)` and appears once in the result.
pub fn edge_sum(spec: &CliqueSumSpec) -> Result<CliqueSum, GraphError> {
    spec.validate(2)?;
    let w1 = spec
        .g1
        .weight(spec.map1[0], spec.map1[1])
        .unwrap_or_default();
    let w2 = spec
        .g2
        .weight(spec.map2[0], spec.map2[1])
        .unwrap_or_default();
    if w1 != w2 {
        return Err(GraphError::SharedWeightMismatch(w1, w2));
    }
    spec.glue(2)
}

/// Graph families with a fixed edge order.
///
/// Cycles list `(i, i+1 mod k)` for `i = 0..k`; cliques list edges
/// lexicographically. `Butterfly` and `Fish` are vertex sums of a triangle
/// (glued at its vertex 2) with a triangle or a 4-cycle (glued at vertex 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum NamedGraph {
    K3,
    C4,
    C5,
    C6,
    Diamond,
    Butterfly,
    Fish,
    Kn(usize),
    Cn(usize),
}

impl NamedGraph {
    /// The seven rows of the rank-distribution table, in order.
    pub const TABLE: [NamedGraph; 7] = [
        NamedGraph::K3,
        NamedGraph::C4,
        NamedGraph::Diamond,
        NamedGraph::C5,
        NamedGraph::Butterfly,
        NamedGraph::C6,
        NamedGraph::Fish,
    ];

    /// Topology with unit weights.
    pub fn topology(self) -> WeightedGraph {
        match self {
            NamedGraph::K3 => complete(3),
            NamedGraph::C4 => cycle(4),
            NamedGraph::C5 => cycle(5),
            NamedGraph::C6 => cycle(6),
            NamedGraph::Kn(k) => complete(k.max(1)),
            NamedGraph::Cn(k) => cycle(k.max(3)),
            NamedGraph::Diamond => {
                let spec = CliqueSumSpec {
                    g1: complete(3),
                    g2: complete(3),
                    map1: vec![1, 2],
                    map2: vec![0, 1],
                };
                edge_sum(&spec).expect("diamond").graph
            }
            NamedGraph::Butterfly => {
                let spec = CliqueSumSpec {
                    g1: complete(3),
                    g2: complete(3),
                    map1: vec![2],
                    map2: vec![0],
                };
                vertex_sum(&spec).expect("butterfly").graph
            }
            NamedGraph::Fish => {
                let spec = CliqueSumSpec {
                    g1: complete(3),
                    g2: cycle(4),
                    map1: vec![2],
                    map2: vec![0],
                };
                vertex_sum(&spec).expect("fish").graph
            }
        }
    }

    /// Named topology with the given weights (all ones when `None`).
    pub fn build(self, weights: Option<&[f64]>) -> Result<WeightedGraph, GraphError> {
        if let NamedGraph::Cn(k) = self {
            if k < 3 {
                return Err(GraphError::UnknownName(format!("c{k}")));
            }
        }
        if let NamedGraph::Kn(0) = self {
            return Err(GraphError::Empty);
        }
        let g = self.topology();
        match weights {
            Some(w) => g.with_weights(w),
            None => Ok(g),
        }
    }
}

impl fmt::Display for NamedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedGraph::K3 => write!(f, "k3"),
            NamedGraph::C4 => write!(f, "c4"),
            NamedGraph::C5 => write!(f, "c5"),
            NamedGraph::C6 => write!(f, "c6"),
            NamedGraph::Diamond => write!(f, "diamond"),
            NamedGraph::Butterfly => write!(f, "butterfly"),
            NamedGraph::Fish => write!(f, "fish"),
            NamedGraph::Kn(k) => write!(f, "k{k}"),
            NamedGraph::Cn(k) => write!(f, "c{k}"),
        }
    }
}

impl From<NamedGraph> for String {
    fn from(g: NamedGraph) -> String {
        g.to_string()
    }
}

impl TryFrom<String> for NamedGraph {
    type Error = GraphError;
    fn try_from(s: String) -> Result<Self, GraphError> {
        s.parse()
    }
}

impl FromStr for NamedGraph {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        let parsed = match lower.as_str() {
            "k3" | "triangle" => Some(NamedGraph::K3),
            "c4" => Some(NamedGraph::C4),
            "c5" => Some(NamedGraph::C5),
            "c6" => Some(NamedGraph::C6),
            "diamond" => Some(NamedGraph::Diamond),
            "butterfly" => Some(NamedGraph::Butterfly),
            "fish" => Some(NamedGraph::Fish),
            other => {
                let num = |p: &str| other.strip_prefix(p).and_then(|r| r.parse::<usize>().ok());
                if let Some(k) = num("k").filter(|&k| k >= 1) {
                    Some(NamedGraph::Kn(k))
                } else {
                    num("c").filter(|&k| k >= 3).map(NamedGraph::Cn)
                }
            }
        };
        parsed.ok_or_else(|| GraphError::UnknownName(s.to_string()))
    }
}

/// Complete graph with unit weights, edges in lexicographic order.
pub fn complete(k: usize) -> WeightedGraph {
    let mut edges = Vec::new();
    for i in 0..k {
        for j in (i + 1)..k {
            edges.push(Edge { i, j, w: 1.0 });
        }
    }
    WeightedGraph::new(k, edges).expect("complete graph")
}

/// Cycle with unit weights; edge `i` joins `i` and `i + 1 mod k`.
pub fn cycle(k: usize) -> WeightedGraph {
    let edges = (0..k)
        .map(|i| Edge {
            i,
            j: (i + 1) % k,
            w: 1.0,
        })
        .collect();
    WeightedGraph::new(k, edges).expect("cycle graph")
}

/// Cycle with the given weights on edges `(i, i+1 mod k)`.
pub fn weighted_cycle(weights: &[f64]) -> Result<WeightedGraph, GraphError> {
    if weights.len() < 3 {
        return Err(GraphError::WeightCount {
            expected: 3,
            got: weights.len(),
        });
    }
    cycle(weights.len()).with_weights(weights)
}
