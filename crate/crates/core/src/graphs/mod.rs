//! Dense simple graphs with bitset adjacency rows.

pub(crate) mod canon;
mod graph6;
mod vertex_set;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{argument, resource, Error, Result};

pub use canon::{anchored_canonical_form, is_anchored_canonical, CanonicalForm, MAX_CANON_ORDER};
pub use graph6::{decode_graph6, encode_graph6};
pub use vertex_set::VertexSet;

/// Largest order accepted by the brute-force connectivity routine.
pub const MAX_CONNECTIVITY_ORDER: usize = 12;

#[inline]
pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

/// Simple undirected graph; row `u` has bit `v` set iff `{u, v}` is an edge.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DenseGraph {
    n: usize,
    words: usize,
    adj: Vec<u64>,
}

impl std::fmt::Debug for DenseGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "DenseGraph(n={}, edges={})", self.n, self.edge_count())
    }
}

impl DenseGraph {
    pub fn empty(n: usize) -> Self {
        let words = words_for(n);
        DenseGraph {
            n,
            words,
            adj: vec![0; n * words],
        }
    }

    pub fn complete(n: usize) -> Self {
        Self::from_fn(n, |_, _| true)
    }

    pub fn cycle(n: usize) -> Self {
        Self::from_fn(n, |u, v| (u + 1) % n == v || (v + 1) % n == u)
    }

    pub fn path(n: usize) -> Self {
        Self::from_fn(n, |u, v| u + 1 == v || v + 1 == u)
    }

    /// Builds a graph from a symmetric predicate evaluated on `u < v`.
    pub fn from_fn(n: usize, mut adjacent: impl FnMut(usize, usize) -> bool) -> Self {
        let mut g = Self::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                if adjacent(u, v) {
                    g.set_edge(u, v);
                }
            }
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(argument(format!(
                    "edge ({u}, {v}) out of range for order {n}"
                )));
            }
            if u == v {
                return Err(argument(format!("loop at vertex {u}")));
            }
            g.set_edge(u, v);
        }
        Ok(g)
    }

    /// Builds a graph directly from adjacency rows; symmetry and
    /// irreflexivity are verified.
    pub fn from_rows(n: usize, adj: Vec<u64>) -> Result<Self> {
        let words = words_for(n);
        if adj.len() != n * words {
            return Err(argument("adjacency buffer has the wrong size"));
        }
        let g = DenseGraph { n, words, adj };
        g.check_invariants()?;
        Ok(g)
    }

    pub(crate) fn set_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v);
        self.adj[u * self.words + v / 64] |= 1 << (v % 64);
        self.adj[v * self.words + u / 64] |= 1 << (u % 64);
    }

    pub(crate) fn check_invariants(&self) -> Result<()> {
        let tail = if self.n.is_multiple_of(64) {
            u64::MAX
        } else {
            (1u64 << (self.n % 64)) - 1
        };
        for u in 0..self.n {
            if self.has_edge(u, u) {
                return Err(Error::Internal(format!("loop at vertex {u}")));
            }
            if self.words > 0 && self.row(u)[self.words - 1] & !tail != 0 {
                return Err(Error::Internal(format!("row {u} has bits beyond order")));
            }
            for v in self.neighbors(u).iter() {
                if !self.has_edge(v, u) {
                    return Err(Error::Internal(format!("edge ({u}, {v}) not symmetric")));
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn words_per_row(&self) -> usize {
        self.words
    }

    #[inline]
    pub fn row(&self, u: usize) -> &[u64] {
        &self.adj[u * self.words..(u + 1) * self.words]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn neighbors(&self, u: usize) -> VertexSet {
        VertexSet::from_words(self.n, self.row(u).to_vec())
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|u| self.degree(u)).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in self.neighbors(u).iter().filter(|&v| v > u) {
                out.push((u, v));
            }
        }
        out
    }

    pub fn is_complete(&self) -> bool {
        (0..self.n).all(|u| self.degree(u) + 1 == self.n)
    }

    pub fn complement(&self) -> DenseGraph {
        Self::from_fn(self.n, |u, v| !self.has_edge(u, v))
    }

    pub fn vertex_set(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    /// Vertices adjacent to every member of `set`. The empty set yields all
    /// vertices.
    pub fn common_neighbors(&self, set: &VertexSet) -> Result<VertexSet> {
        if set.width() != self.n {
            return Err(argument(format!(
                "vertex set of width {} used with graph of order {}",
                set.width(),
                self.n
            )));
        }
        let mut acc = VertexSet::full(self.n);
        for u in set.iter() {
            acc.intersect_words(self.row(u));
        }
        Ok(acc)
    }

    /// Induced subgraph on `set`; the returned map lists the original index of
    /// each new vertex in ascending order.
    pub fn induced_subgraph(&self, set: &VertexSet) -> Result<(DenseGraph, Vec<usize>)> {
        if set.width() != self.n {
            return Err(argument("vertex set width does not match graph order"));
        }
        if set.is_empty() {
            return Err(argument("induced subgraph of the empty set"));
        }
        Ok(self.induced_on(&set.iter().collect::<Vec<_>>()))
    }

    /// Induced subgraph on an explicit list of vertices, in the given order.
    pub(crate) fn induced_on(&self, verts: &[usize]) -> (DenseGraph, Vec<usize>) {
        let mut sub = DenseGraph::empty(verts.len());
        for (i, &u) in verts.iter().enumerate() {
            for (j, &v) in verts.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    sub.set_edge(i, j);
                }
            }
        }
        (sub, verts.to_vec())
    }

    /// First (`which == 1`) or second (`which == 2`) subconstituent at `v`.
    pub fn subconstituent(&self, v: usize, which: u8) -> Result<DenseGraph> {
        if v >= self.n {
            return Err(argument(format!("vertex {v} out of range")));
        }
        let set = match which {
            1 => self.neighbors(v),
            2 => {
                let mut s = self.neighbors(v).complement();
                s.remove(v);
                s
            }
            _ => {
                return Err(argument(format!(
                    "subconstituent index {which} not in {{1, 2}}"
                )))
            }
        };
        if set.is_empty() {
            return Ok(DenseGraph::empty(0));
        }
        Ok(self.induced_subgraph(&set)?.0)
    }

    /// Returns `(v, k, lambda, mu)` when the graph is strongly regular.
    ///
    /// Determined by scanning all vertex pairs. When there are no adjacent
    /// (non-adjacent) pairs, `lambda` (`mu`) is reported as 0.
    pub fn srg_parameters(&self) -> Option<Srg> {
        let n = self.n;
        if n < 3 {
            return None;
        }
        let k = self.degree(0);
        if (1..n).any(|u| self.degree(u) != k) {
            return None;
        }
        // per-row: Some((lambda, mu)) with None entries for unobserved classes
        let rows: Option<Vec<(Option<usize>, Option<usize>)>> = (0..n)
            .into_par_iter()
            .map(|u| {
                let ru = self.row(u);
                let mut lam = None;
                let mut mu = None;
                for v in u + 1..n {
                    let c: usize = ru
                        .iter()
                        .zip(self.row(v))
                        .map(|(a, b)| (a & b).count_ones() as usize)
                        .sum();
                    let slot = if self.has_edge(u, v) {
                        &mut lam
                    } else {
                        &mut mu
                    };
                    match *slot {
                        None => *slot = Some(c),
                        Some(prev) if prev != c => return None,
                        _ => {}
                    }
                }
                Some((lam, mu))
            })
            .collect();
        let mut lambda = None;
        let mut mu = None;
        for (l, m) in rows? {
            for (slot, val) in [(&mut lambda, l), (&mut mu, m)] {
                if let Some(x) = val {
                    match *slot {
                        None => *slot = Some(x),
                        Some(p) if p != x => return None,
                        _ => {}
                    }
                }
            }
        }
        let srg = Srg {
            v: n as u64,
            k: k as u64,
            lambda: lambda.unwrap_or(0) as u64,
            mu: mu.unwrap_or(0) as u64,
        };
        if mu.is_some() {
            debug_assert!(srg.counting_identity_holds());
        }
        Some(srg)
    }

    /// Size of a minimum vertex cut (`n - 1` for complete graphs), found by
    /// testing vertex subsets in increasing size.
    pub fn vertex_connectivity(&self) -> Result<usize> {
        let n = self.n;
        if n > MAX_CONNECTIVITY_ORDER {
            return Err(resource(format!(
                "vertex connectivity is brute force; order {n} exceeds {MAX_CONNECTIVITY_ORDER}"
            )));
        }
        if n <= 1 {
            return Ok(0);
        }
        let rows: Vec<u32> = (0..n).map(|u| self.row(u)[0] as u32).collect();
        let all = (1u32 << n) - 1;
        for k in 0..n.saturating_sub(1) {
            let mut removed: u32 = (1u32 << k) - 1;
            while removed <= all {
                if !small_connected(&rows, all & !removed) {
                    return Ok(k);
                }
                if k == 0 {
                    break;
                }
                removed = next_combination(removed);
            }
        }
        Ok(n - 1)
    }

    /// `true` iff removing any fewer than `k` vertices leaves a connected,
    /// non-empty graph. Complete graphs `K_n` count as `n`-connected.
    pub fn is_k_connected(&self, k: usize) -> Result<bool> {
        if k == 0 {
            return Ok(true);
        }
        if self.n < k {
            return Ok(false);
        }
        if self.is_complete() {
            return Ok(true);
        }
        Ok(self.vertex_connectivity()? >= k)
    }

    /// `{"n": .., "edges": [[u, v], ..]}` with `u < v`, sorted.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(GraphJson {
            n: self.n,
            edges: self.edges().into_iter().map(|(u, v)| [u, v]).collect(),
        })
        .expect("graph json")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let parsed: GraphJson = serde_json::from_value(value.clone())
            .map_err(|e| argument(format!("bad graph json: {e}")))?;
        let edges: Vec<(usize, usize)> = parsed.edges.iter().map(|e| (e[0], e[1])).collect();
        Self::from_edges(parsed.n, &edges)
    }

    pub fn to_graph6(&self) -> Result<String> {
        encode_graph6(self)
    }
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<[usize; 2]>,
}

/// Gosper's hack: next larger integer with the same popcount.
fn next_combination(x: u32) -> u32 {
    let c = x & x.wrapping_neg();
    let r = x + c;
    (((r ^ x) >> 2) / c) | r
}

fn small_connected(rows: &[u32], alive: u32) -> bool {
    if alive == 0 {
        return false;
    }
    let start = alive.trailing_zeros() as usize;
    let mut seen = 1u32 << start;
    let mut frontier = seen;
    while frontier != 0 {
        let u = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let fresh = rows[u] & alive & !seen;
        seen |= fresh;
        frontier |= fresh;
    }
    seen == alive
}

/// The basic parameters of a strongly regular graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Srg {
    pub v: u64,
    pub k: u64,
    pub lambda: u64,
    pub mu: u64,
}

impl Srg {
    /// `k (k - lambda - 1) = (v - k - 1) mu`.
    pub fn counting_identity_holds(&self) -> bool {
        let lhs = self.k as i128 * (self.k as i128 - self.lambda as i128 - 1);
        let rhs = (self.v as i128 - self.k as i128 - 1) * self.mu as i128;
        lhs == rhs
    }

    /// Eigenvalues and multiplicities when they are integers.
    pub fn spectrum(&self) -> Option<SrgParameters> {
        let (v, k, l, m) = (
            self.v as i64,
            self.k as i64,
            self.lambda as i64,
            self.mu as i64,
        );
        let disc = (l - m) * (l - m) + 4 * (k - m);
        if disc < 0 {
            return None;
        }
        let root = disc.isqrt();
        if root * root != disc || root == 0 {
            return None;
        }
        if (l - m + root) % 2 != 0 {
            return None;
        }
        let r = (l - m + root) / 2;
        let s = (l - m - root) / 2;
        let num = 2 * k + (v - 1) * (l - m);
        if num % root != 0 {
            return None;
        }
        let q = num / root;
        if (v - 1 - q) % 2 != 0 || v - 1 - q < 0 || v - 1 + q < 0 {
            return None;
        }
        let params = SrgParameters {
            v: self.v,
            k: self.k,
            lambda: self.lambda,
            mu: self.mu,
            r,
            s,
            f: ((v - 1 - q) / 2) as u64,
            g: ((v - 1 + q) / 2) as u64,
        };
        params.trace_identities_hold().then_some(params)
    }
}

/// Full parameter set of a strongly regular graph, with the restricted
/// eigenvalues `r > s` and their multiplicities `f`, `g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SrgParameters {
    pub v: u64,
    pub k: u64,
    pub lambda: u64,
    pub mu: u64,
    pub r: i64,
    pub s: i64,
    pub f: u64,
    pub g: u64,
}

impl SrgParameters {
    pub fn basic(&self) -> Srg {
        Srg {
            v: self.v,
            k: self.k,
            lambda: self.lambda,
            mu: self.mu,
        }
    }

    /// `1 + f + g = v` and `k + f r + g s = 0`.
    pub fn trace_identities_hold(&self) -> bool {
        1 + self.f + self.g == self.v
            && self.k as i64 + self.f as i64 * self.r + self.g as i64 * self.s == 0
    }
}
