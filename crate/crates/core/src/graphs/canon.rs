//! Canonical labeling of small graphs with a distinguished anchor set.
//!
//! Anchors are placed at positions `0..m` and the remaining vertices at
//! `m..n`; among all such placements the one whose graph6 bit string (upper
//! triangle, column by column) is lexicographically largest is canonical.
//! Branch and bound over positions: a partial labeling is abandoned as soon
//! as its columns compare below the best complete labeling found so far.

use crate::error::{argument, resource, Result};

use super::DenseGraph;

/// Largest order handled by the canonical labeling routines.
pub const MAX_CANON_ORDER: usize = 16;

/// Canonical code and the labeling realizing it: `labeling[p]` is the
/// original vertex placed at position `p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CanonicalForm {
    pub code: Vec<u8>,
    pub labeling: Vec<usize>,
}

/// Adjacency of a graph on at most 16 vertices, one `u16` per row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) struct SmallGraph {
    pub n: usize,
    pub rows: [u16; MAX_CANON_ORDER],
}

impl SmallGraph {
    pub fn from_dense(g: &DenseGraph) -> Self {
        assert!(g.order() <= MAX_CANON_ORDER);
        let mut rows = [0u16; MAX_CANON_ORDER];
        for (u, r) in rows.iter_mut().enumerate().take(g.order()) {
            *r = g.row(u)[0] as u16;
        }
        SmallGraph { n: g.order(), rows }
    }

    /// Graph on `n` vertices whose edges are the set bits of `mask`, listed in
    /// graph6 order (pair `(i, j)`, `i < j`, has index `j (j - 1) / 2 + i`).
    pub fn from_pair_mask(n: usize, mask: u128) -> Self {
        let mut rows = [0u16; MAX_CANON_ORDER];
        let mut idx = 0;
        for j in 1..n {
            for i in 0..j {
                if mask >> idx & 1 == 1 {
                    rows[i] |= 1 << j;
                    rows[j] |= 1 << i;
                }
                idx += 1;
            }
        }
        SmallGraph { n, rows }
    }

    pub fn to_dense(self) -> DenseGraph {
        DenseGraph::from_fn(self.n, |u, v| self.rows[u] >> v & 1 == 1)
    }

    #[inline]
    fn adj(&self, u: usize, v: usize) -> u16 {
        self.rows[u] >> v & 1
    }

    /// Column `p` of the relabeled upper triangle, first entry most
    /// significant.
    #[inline]
    fn column(&self, perm: &[u8], p: usize, v: usize) -> u16 {
        let mut c = 0;
        for &q in &perm[..p] {
            c = (c << 1) | self.adj(v, q as usize);
        }
        c
    }

    /// Bit string of the graph under the identity labeling.
    pub fn code(&self) -> u128 {
        let mut code = 0u128;
        for j in 1..self.n {
            for i in 0..j {
                code = (code << 1) | self.adj(i, j) as u128;
            }
        }
        code
    }
}

struct Search<'a> {
    g: &'a SmallGraph,
    anchors: u16,
    perm: [u8; MAX_CANON_ORDER],
    cols: [u16; MAX_CANON_ORDER],
    best_cols: [u16; MAX_CANON_ORDER],
    best_perm: [u8; MAX_CANON_ORDER],
    have_best: bool,
}

impl Search<'_> {
    fn allowed(&self, p: usize, m: usize) -> u16 {
        let all = ((1u32 << self.g.n) - 1) as u16;
        if p < m {
            self.anchors
        } else {
            all & !self.anchors
        }
    }

    fn run(&mut self, p: usize, m: usize, used: u16) {
        let n = self.g.n;
        if p == n {
            if !self.have_best || self.cols[..n] > self.best_cols[..n] {
                self.best_cols = self.cols;
                self.best_perm = self.perm;
                self.have_best = true;
            }
            return;
        }
        let mut cand = self.allowed(p, m) & !used;
        while cand != 0 {
            let v = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            self.perm[p] = v as u8;
            self.cols[p] = self.g.column(&self.perm, p, v);
            if self.have_best && self.cols[..=p] < self.best_cols[..=p] {
                continue;
            }
            self.run(p + 1, m, used | 1 << v);
        }
    }
}

/// Canonical labeling of `g` with anchors at `0..m` (anchor set
/// `0..m` in `g` as given). Returns the maximal code and a labeling.
pub(crate) fn canonical_small(g: &SmallGraph, m: usize) -> (u128, [u8; MAX_CANON_ORDER]) {
    let anchors = ((1u32 << m) - 1) as u16;
    canonical_small_with(g, anchors, m)
}

fn canonical_small_with(g: &SmallGraph, anchors: u16, m: usize) -> (u128, [u8; MAX_CANON_ORDER]) {
    let mut s = Search {
        g,
        anchors,
        perm: [0; MAX_CANON_ORDER],
        cols: [0; MAX_CANON_ORDER],
        best_cols: [0; MAX_CANON_ORDER],
        best_perm: [0; MAX_CANON_ORDER],
        have_best: false,
    };
    s.run(0, m, 0);
    let mut code = 0u128;
    for p in 1..g.n {
        code = (code << p) | s.best_cols[p] as u128;
    }
    (code, s.best_perm)
}

/// `true` iff no anchor-preserving relabeling of `g` (anchors `0..m`) has a
/// larger code than the identity. Stops at the first larger column prefix.
pub(crate) fn is_canonical_small(g: &SmallGraph, m: usize) -> bool {
    let n = g.n;
    let mut ident = [0u16; MAX_CANON_ORDER];
    let id_perm: [u8; MAX_CANON_ORDER] = std::array::from_fn(|i| i as u8);
    for (p, c) in ident.iter_mut().enumerate().take(n) {
        *c = g.column(&id_perm, p, p);
    }
    let anchors = ((1u32 << m) - 1) as u16;
    let all = ((1u32 << n) - 1) as u16;
    let mut perm = [0u8; MAX_CANON_ORDER];
    // Returns false when some labeling beats the identity.
    fn go(
        g: &SmallGraph,
        ident: &[u16; MAX_CANON_ORDER],
        perm: &mut [u8; MAX_CANON_ORDER],
        p: usize,
        used: u16,
        anchors: u16,
        all: u16,
        m: usize,
    ) -> bool {
        if p == g.n {
            return true;
        }
        let mut cand = if p < m { anchors } else { all & !anchors } & !used;
        while cand != 0 {
            let v = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            perm[p] = v as u8;
            let c = g.column(perm, p, v);
            if c > ident[p] {
                return false;
            }
            if c == ident[p] && !go(g, ident, perm, p + 1, used | 1 << v, anchors, all, m) {
                return false;
            }
        }
        true
    }
    go(g, &ident, &mut perm, 0, 0, anchors, all, m)
}

pub(crate) fn code_bytes(n: usize, m: usize, code: u128) -> Vec<u8> {
    let bits = n * n.saturating_sub(1) / 2;
    let mut out = vec![n as u8, m as u8];
    let nbytes = bits.div_ceil(8);
    let aligned = code << (nbytes * 8 - bits);
    for k in (0..nbytes).rev() {
        out.push((aligned >> (8 * k)) as u8);
    }
    out
}

/// Canonical form of `(g, anchors)`. Two anchored graphs are isomorphic by a
/// map sending anchors onto anchors iff their codes are equal.
pub fn anchored_canonical_form(g: &DenseGraph, anchors: &[usize]) -> Result<CanonicalForm> {
    let n = g.order();
    if n > MAX_CANON_ORDER {
        return Err(resource(format!("order {n} exceeds {MAX_CANON_ORDER}")));
    }
    let mut mask = 0u16;
    for &a in anchors {
        if a >= n {
            return Err(argument(format!("anchor {a} out of range")));
        }
        if mask >> a & 1 == 1 {
            return Err(argument(format!("anchor {a} repeated")));
        }
        mask |= 1 << a;
    }
    let small = SmallGraph::from_dense(g);
    let (code, perm) = canonical_small_with(&small, mask, anchors.len());
    Ok(CanonicalForm {
        code: code_bytes(n, anchors.len(), code),
        labeling: perm[..n].iter().map(|&v| v as usize).collect(),
    })
}

/// `true` iff `g` with anchors `0..m` already carries its canonical labeling.
pub fn is_anchored_canonical(g: &DenseGraph, m: usize) -> Result<bool> {
    if g.order() > MAX_CANON_ORDER {
        return Err(resource(format!(
            "order {} exceeds {MAX_CANON_ORDER}",
            g.order()
        )));
    }
    if m > g.order() {
        return Err(argument("more anchors than vertices"));
    }
    Ok(is_canonical_small(&SmallGraph::from_dense(g), m))
}
