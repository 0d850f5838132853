//! Simple undirected graphs, the standard generator families and the JSON
//! graph file format.
//!
//! Vertices are `0..n`. Generated star, wheel and random-hub graphs put the
//! hub (the fully connected vertex) at index 0. Edges are stored as a sorted
//! set of pairs `(u, v)` with `u < v`; matrices are materialized on demand.

use std::collections::{BTreeSet, VecDeque};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{CtqwError, Result};
use crate::linalg::ComplexOperator;

/// A simple undirected graph: no self loops, no multi-edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    /// Builds a graph from an edge list. Self loops, out-of-range endpoints and
    /// repeated edges (in either orientation) are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(CtqwError::InvalidGraph("a graph needs at least one vertex".into()));
        }
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(CtqwError::InvalidGraph(format!("self loop at vertex {u}")));
            }
            for x in [u, v] {
                if x >= n {
                    return Err(CtqwError::VertexOutOfRange { vertex: x, n });
                }
            }
            if !set.insert((u.min(v), u.max(v))) {
                return Err(CtqwError::InvalidGraph(format!(
                    "duplicate edge ({}, {})",
                    u.min(v),
                    u.max(v)
                )));
            }
        }
        Ok(Self { n, edges: set })
    }

    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, std::iter::empty())
    }

    /// Number of vertices `N`.
    pub fn order(&self) -> usize {
        self.n
    }

    /// Number of edges `M`.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(CtqwError::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    /// Number of edges incident to `v`.
    pub fn degree(&self, v: usize) -> Result<usize> {
        self.check_vertex(v)?;
        Ok(self.edges.iter().filter(|&&(a, b)| a == v || b == v).count())
    }

    /// All degrees, indexed by vertex.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(u, v) in &self.edges {
            d[u] += 1;
            d[v] += 1;
        }
        d
    }

    pub fn neighbors(&self, v: usize) -> Result<Vec<usize>> {
        self.check_vertex(v)?;
        Ok(self
            .edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect())
    }

    /// Whether `v` is adjacent to every other vertex.
    pub fn is_fully_connected(&self, v: usize) -> Result<bool> {
        Ok(self.degree(v)? == self.n - 1)
    }

    /// All vertices of degree `N - 1`, ascending.
    pub fn fully_connected_vertices(&self) -> VertexSet {
        let members = self
            .degrees()
            .into_iter()
            .enumerate()
            .filter(|&(_, d)| d == self.n - 1)
            .map(|(v, _)| v)
            .collect();
        VertexSet { members }
    }

    /// First fully connected vertex, if any.
    pub fn hub(&self) -> Option<usize> {
        self.fully_connected_vertices().iter().next()
    }

    pub fn is_connected(&self) -> bool {
        let adj = self.adjacency_lists();
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    fn adjacency_lists(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    /// Symmetric 0/1 adjacency matrix with zero diagonal.
    pub fn adjacency_matrix(&self) -> ComplexOperator {
        let mut a = ComplexOperator::zeros(self.n);
        for &(u, v) in &self.edges {
            a[(u, v)].re = 1.0;
            a[(v, u)].re = 1.0;
        }
        a
    }

    /// Diagonal degree matrix `D`.
    pub fn degree_matrix(&self) -> ComplexOperator {
        let mut d = ComplexOperator::zeros(self.n);
        for (v, deg) in self.degrees().into_iter().enumerate() {
            d[(v, v)].re = deg as f64;
        }
        d
    }

    /// Graph Laplacian `L = D - A`.
    pub fn laplacian_matrix(&self) -> ComplexOperator {
        let mut l = self.degree_matrix();
        for &(u, v) in &self.edges {
            l[(u, v)].re = -1.0;
            l[(v, u)].re = -1.0;
        }
        l
    }

    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            n: self.n,
            edges: self.edges.iter().map(|&(u, v)| [u, v]).collect(),
        }
    }

    pub fn from_file(file: &GraphFile) -> Result<Self> {
        if let Some([u, v]) = file.edges.iter().find(|[u, v]| u > v) {
            return Err(CtqwError::InvalidGraph(format!(
                "edge [{u}, {v}] must be written with the smaller endpoint first"
            )));
        }
        Self::new(file.n, file.edges.iter().map(|&[u, v]| (u, v)))
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: GraphFile = serde_json::from_str(s).map_err(|e| CtqwError::Parse(e.to_string()))?;
        Self::from_file(&file)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("graph file serializes")
    }

    pub fn read_json(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let s = std::fs::read_to_string(path)
            .map_err(|e| CtqwError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&s)
    }

    pub fn write_json(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json_string() + "\n")
            .map_err(|e| CtqwError::Io(format!("{}: {e}", path.display())))
    }
}

/// On-disk graph representation: `{"n": int, "edges": [[u, v], ...]}` with `u < v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

/// A sorted set of distinct vertex indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(transparent)]
pub struct VertexSet {
    members: Vec<usize>,
}

impl VertexSet {
    /// Validates indices against a graph order `n`. Duplicates are rejected.
    pub fn new(members: impl IntoIterator<Item = usize>, n: usize) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        if let Some(w) = members.windows(2).find(|w| w[0] == w[1]) {
            return Err(CtqwError::InvalidParameter(format!("vertex {} listed twice", w[0])));
        }
        if let Some(&v) = members.last().filter(|&&v| v >= n) {
            return Err(CtqwError::VertexOutOfRange { vertex: v, n });
        }
        Ok(Self { members })
    }

    pub fn single(v: usize, n: usize) -> Result<Self> {
        Self::new([v], n)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.members
    }
}

// ---------------------------------------------------------------------------
// Generators

fn require(family: &'static str, n: usize, min: usize) -> Result<()> {
    if n < min {
        Err(CtqwError::GraphTooSmall { family, n, min })
    } else {
        Ok(())
    }
}

/// Complete graph `K_n`.
pub fn make_complete(n: usize) -> Result<Graph> {
    require("complete", n, 1)?;
    Graph::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
}

/// Star graph `S_n` with center 0.
pub fn make_star(n: usize) -> Result<Graph> {
    require("star", n, 2)?;
    Graph::new(n, (1..n).map(|v| (0, v)))
}

/// Wheel graph `W_n`: hub 0 joined to a rim cycle on `1..n`.
pub fn make_wheel(n: usize) -> Result<Graph> {
    require("wheel", n, 4)?;
    let spokes = (1..n).map(|v| (0, v));
    let rim = (1..n).map(|v| (v, if v + 1 < n { v + 1 } else { 1 }));
    Graph::new(n, spokes.chain(rim))
}

/// Path graph `P_n` on `0 - 1 - ... - (n-1)`.
pub fn make_path(n: usize) -> Result<Graph> {
    require("path", n, 1)?;
    Graph::new(n, (1..n).map(|v| (v - 1, v)))
}

/// `K_n` with the edge `(n-2, n-1)` removed, leaving `n - 2` fully connected vertices.
pub fn make_near_complete(n: usize) -> Result<Graph> {
    require("near-complete", n, 3)?;
    Graph::new(
        n,
        (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|&e| e != (n - 2, n - 1)),
    )
}

/// Random graph with vertex 0 fully connected; every other pair is an edge
/// with probability `p`. Uses ChaCha8 seeded from `seed`, so the result is a
/// pure function of `(n, p, seed)`.
pub fn make_random_with_hub(n: usize, p: f64, seed: u64) -> Result<Graph> {
    require("random-hub", n, 2)?;
    make_random_with_hubs(n, 1, p, seed)
}

/// Like [`make_random_with_hub`] but with vertices `0..hubs` all fully connected.
pub fn make_random_with_hubs(n: usize, hubs: usize, p: f64, seed: u64) -> Result<Graph> {
    require("random-hub", n, 2)?;
    if hubs == 0 || hubs >= n {
        return Err(CtqwError::InvalidParameter(format!(
            "hub count must be in 1..{n}, got {hubs}"
        )));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(CtqwError::InvalidParameter(format!(
            "edge probability must be in [0, 1], got {p}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if u < hubs || rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn complete_adjacency() {
        let a = make_complete(3).unwrap().adjacency_matrix();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 0.0 } else { 1.0 };
                assert_eq!(a[(i, j)], Complex64::new(want, 0.0));
            }
        }
    }

    #[test]
    fn edgeless_adjacency_is_zero() {
        let g = Graph::empty(4).unwrap();
        assert_eq!(g.adjacency_matrix().max_abs(), 0.0);
    }

    #[test]
    fn star_adjacency() {
        let a = make_star(4).unwrap().adjacency_matrix();
        for i in 0..4 {
            for j in 0..4 {
                let want = if (i == 0) != (j == 0) { 1.0 } else { 0.0 };
                assert_eq!(a[(i, j)].re, want, "({i},{j})");
            }
        }
    }

    #[test]
    fn laplacian_k2_and_star() {
        let l = make_complete(2).unwrap().laplacian_matrix();
        let want = ComplexOperator::from_real_rows(&[vec![1.0, -1.0], vec![-1.0, 1.0]]).unwrap();
        assert_eq!(l, want);

        let g = make_star(4).unwrap();
        let l = g.laplacian_matrix();
        let expected = &g.degree_matrix() - &g.adjacency_matrix();
        assert_eq!(l, expected);
        assert_eq!(l[(0, 0)].re, 3.0);
        assert_eq!(l[(2, 2)].re, 1.0);
    }

    #[test]
    fn degrees() {
        let k5 = make_complete(5).unwrap();
        assert!((0..5).all(|v| k5.degree(v).unwrap() == 4));
        assert_eq!(make_star(8).unwrap().degree(0).unwrap(), 7);
        let g = Graph::new(3, [(0, 1)]).unwrap();
        assert_eq!(g.degree(2).unwrap(), 0);
        assert!(matches!(g.degree(3), Err(CtqwError::VertexOutOfRange { .. })));
    }

    #[test]
    fn fully_connected_sets() {
        assert_eq!(make_complete(6).unwrap().fully_connected_vertices().as_slice(), &[0, 1, 2, 3, 4, 5]);
        assert_eq!(make_star(8).unwrap().fully_connected_vertices().as_slice(), &[0]);
        assert!(make_path(4).unwrap().fully_connected_vertices().is_empty());
    }

    #[test]
    fn generator_edge_counts() {
        assert_eq!(make_complete(4).unwrap().edge_count(), 6);
        assert_eq!(make_star(8).unwrap().edge_count(), 7);
        assert_eq!(make_wheel(8).unwrap().edge_count(), 14);
        assert_eq!(make_near_complete(4).unwrap().edge_count(), 5);
    }

    #[test]
    fn wheel_rim_is_cycle() {
        let g = make_wheel(6).unwrap();
        for v in 1..6 {
            assert_eq!(g.degree(v).unwrap(), 3);
        }
        assert!(g.has_edge(5, 1));
        assert!(g.has_edge(1, 2));
    }

    #[test]
    fn generator_minimum_sizes() {
        assert!(make_complete(0).is_err());
        assert!(make_star(1).is_err());
        assert!(make_wheel(3).is_err());
        assert!(make_near_complete(2).is_err());
        assert!(make_random_with_hub(1, 0.5, 0).is_err());
    }

    #[test]
    fn near_complete_structure() {
        assert_eq!(make_near_complete(5).unwrap().fully_connected_vertices().len(), 3);
        assert_eq!(make_near_complete(3).unwrap(), make_star(3).unwrap());
    }

    #[test]
    fn random_hub_extremes() {
        for seed in [0, 1, 99] {
            assert_eq!(make_random_with_hub(8, 0.0, seed).unwrap(), make_star(8).unwrap());
            assert_eq!(make_random_with_hub(8, 1.0, seed).unwrap(), make_complete(8).unwrap());
        }
        let g = make_random_with_hub(8, 0.5, 42).unwrap();
        assert_eq!(g.degree(0).unwrap(), 7);
        assert_eq!(g, make_random_with_hub(8, 0.5, 42).unwrap());
        assert!(make_random_with_hub(8, 1.5, 42).is_err());
    }

    #[test]
    fn multi_hub_generator() {
        let g = make_random_with_hubs(9, 3, 0.3, 5).unwrap();
        for h in 0..3 {
            assert!(g.is_fully_connected(h).unwrap());
        }
        assert!(make_random_with_hubs(5, 5, 0.3, 5).is_err());
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(Graph::new(3, [(1, 1)]).is_err());
        assert!(Graph::new(3, [(0, 1), (1, 0)]).is_err());
        assert!(Graph::new(3, [(0, 3)]).is_err());
    }

    #[test]
    fn json_reader_rules() {
        let g = Graph::from_json_str(r#"{"n": 3, "edges": [[0, 1], [1, 2]]}"#).unwrap();
        assert_eq!(g, make_path(3).unwrap());
        assert!(Graph::from_json_str(r#"{"n": 3, "edges": [[1, 1]]}"#).is_err());
        assert!(Graph::from_json_str(r#"{"n": 3, "edges": [[0, 1], [0, 1]]}"#).is_err());
        assert!(Graph::from_json_str(r#"{"n": 3, "edges": [[1, 0]]}"#).is_err());
        let w = make_wheel(7).unwrap();
        assert_eq!(Graph::from_json_str(&w.to_json_string()).unwrap(), w);
    }

    #[test]
    fn vertex_set_validation() {
        let s = VertexSet::new([3, 1], 4).unwrap();
        assert_eq!(s.as_slice(), &[1, 3]);
        assert!(VertexSet::new([1, 1], 4).is_err());
        assert!(VertexSet::new([4], 4).is_err());
    }
}
