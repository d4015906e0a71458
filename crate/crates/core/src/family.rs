//! The graphs Γ^(m) on GF(2)^{2m}, their relation colorings, parameter
//! table, the auxiliary graphs Υ_a / Υ_b, and the elliptic companion Γ̂^(m).
//!
//! Vertex `i` is the vector whose coordinate `j` is bit `j` of `i`; the
//! `x`-block occupies bits `0..m` and the `y`-block bits `m..2m`. Both
//! graphs are Cayley graphs: adjacency depends only on the difference
//! `v + w`.

use std::collections::BTreeMap;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::coherent::ColorMatrix;
use crate::error::{argument, Error, Result};
use crate::gf2::{form_word, low_mask, BitVector, FormKind};
use crate::graphs::{DenseGraph, SrgParameters, VertexSet};

/// `m` together with `theta = 2^(m-3)` as an exact rational.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FamilyParams {
    pub m: usize,
    pub theta: Ratio<i128>,
}

impl FamilyParams {
    pub fn new(m: usize) -> Result<Self> {
        if !(2..=32).contains(&m) {
            return Err(argument(format!("m = {m} outside 2..=32")));
        }
        let theta = if m >= 3 {
            Ratio::from_integer(1i128 << (m - 3))
        } else {
            Ratio::new(1, 2)
        };
        Ok(FamilyParams { m, theta })
    }
}

fn check_range(m: usize, lo: usize, hi: usize) -> Result<()> {
    if !(lo..=hi).contains(&m) {
        return Err(argument(format!("m = {m} outside {lo}..={hi}")));
    }
    Ok(())
}

/// Cayley graph on GF(2)^{2m} with connection set `{d : adjacent(d)}`.
fn cayley_graph(m: usize, adjacent: impl Fn(u64) -> bool + Sync) -> DenseGraph {
    let n = 1usize << (2 * m);
    let words = n.div_ceil(64);
    let rows: Vec<u64> = (0..n)
        .into_par_iter()
        .flat_map_iter(|u| {
            let mut row = vec![0u64; words];
            for v in 0..n {
                if u != v && adjacent((u ^ v) as u64) {
                    row[v / 64] |= 1 << (v % 64);
                }
            }
            row
        })
        .collect();
    DenseGraph::from_rows(n, rows).expect("connection set is symmetric and avoids zero")
}

/// Relation index `1..=4` of a difference vector: zero, nonzero in the
/// singular subspace `y = 0`, on the quadric outside it, off the quadric.
#[inline]
pub(crate) fn rho_class(m: usize, d: u64) -> u8 {
    if d == 0 {
        1
    } else if d >> m == 0 {
        2
    } else if form_word(FormKind::Hyperbolic, m, d) == 0 {
        3
    } else {
        4
    }
}

/// Relation index `1..=5` of a difference vector for the elliptic form:
/// zero, the singular subspace `Ŝ = {(x, 0) : x_m = 0}` minus zero, the
/// quadric minus `Ŝ`, the orthogonal complement of `Ŝ` minus `Ŝ`, the rest.
#[inline]
pub(crate) fn sigma_class(m: usize, d: u64) -> u8 {
    let x = d & low_mask(m);
    let y = d >> m;
    let in_s = y == 0 && x >> (m - 1) == 0;
    // [d, (e_i, 0)] = y_i, so d is orthogonal to Ŝ iff y_i = 0 for i < m
    let in_perp = y & low_mask(m - 1) == 0;
    let in_q = form_word(FormKind::Elliptic, m, d) == 0;
    if d == 0 {
        1
    } else if in_s {
        2
    } else if in_q {
        debug_assert!(!in_perp);
        3
    } else if in_perp {
        4
    } else {
        5
    }
}

/// Edge iff the difference lies on the quadric but outside the singular
/// subspace `y = 0`.
pub fn build_gamma(m: usize) -> Result<DenseGraph> {
    check_range(m, 2, 6)?;
    Ok(cayley_graph(m, |d| rho_class(m, d) == 3))
}

/// Edge iff the difference lies in `Ŝ` minus zero or outside both the
/// elliptic quadric and `Ŝ^⊥`.
pub fn build_gamma_hat(m: usize) -> Result<DenseGraph> {
    check_range(m, 3, 6)?;
    Ok(cayley_graph(m, |d| matches!(sigma_class(m, d), 2 | 5)))
}

/// First subconstituent of Γ^(m) at the zero vector.
pub fn build_gamma1(m: usize) -> Result<DenseGraph> {
    build_gamma(m)?.subconstituent(0, 1)
}

/// Second subconstituent of Γ^(m) at the zero vector.
pub fn build_gamma2(m: usize) -> Result<DenseGraph> {
    build_gamma(m)?.subconstituent(0, 2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RelationFamily {
    /// Four relations from the hyperbolic form.
    Rho,
    /// Five relations from the elliptic form.
    Sigma,
}

/// The relation (1-based) containing `(v, w)`.
pub fn color_of_pair(fam: RelationFamily, m: usize, v: &BitVector, w: &BitVector) -> Result<u8> {
    check_range(m, 2, 32)?;
    if v.len() != 2 * m || w.len() != 2 * m {
        return Err(argument("vector length differs from 2m"));
    }
    let d = v.bits() ^ w.bits();
    Ok(match fam {
        RelationFamily::Rho => rho_class(m, d),
        RelationFamily::Sigma => sigma_class(m, d),
    })
}

/// Coloring of all pairs by relation, color `i - 1` for relation `i`.
pub fn relation_coloring(fam: RelationFamily, m: usize) -> Result<ColorMatrix> {
    check_range(m, if fam == RelationFamily::Rho { 2 } else { 3 }, 6)?;
    let n = 1usize << (2 * m);
    let colors: Vec<u32> = (0..n * n)
        .into_par_iter()
        .map(|e| {
            let d = ((e / n) ^ (e % n)) as u64;
            (match fam {
                RelationFamily::Rho => rho_class(m, d),
                RelationFamily::Sigma => sigma_class(m, d),
            }) as u32
                - 1
        })
        .collect();
    ColorMatrix::new(n, colors)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ParameterRow {
    Gamma,
    Gamma1,
    Gamma2,
}

/// One row of the parameter table, evaluated exactly at `theta = 2^(m-3)`.
pub fn expected_parameters(m: usize, which: ParameterRow) -> Result<SrgParameters> {
    let t = FamilyParams::new(m)?.theta;
    let c = |k: i128| Ratio::from_integer(k);
    let (v, k, l, mu, r, s, f, g) = match which {
        ParameterRow::Gamma => (
            c(64) * t * t,
            c(4) * t * (c(8) * t - c(1)),
            c(4) * t * (c(4) * t - c(1)),
            c(4) * t * (c(4) * t - c(1)),
            c(4) * t,
            -c(4) * t,
            c(4) * t * (c(8) * t - c(1)),
            (c(4) * t + c(1)) * (c(8) * t - c(1)),
        ),
        ParameterRow::Gamma1 => (
            c(4) * t * (c(8) * t - c(1)),
            c(4) * t * (c(4) * t - c(1)),
            c(2) * t * (c(4) * t - c(1)),
            c(4) * t * (c(2) * t - c(1)),
            c(4) * t,
            -c(2) * t,
            (c(4) * t - c(1)) * (c(8) * t - c(1)) / c(3),
            c(4) * (c(4) * t - c(1)) * (c(4) * t + c(1)) / c(3),
        ),
        ParameterRow::Gamma2 => (
            (c(4) * t + c(1)) * (c(8) * t - c(1)),
            c(16) * t * t,
            c(2) * t * (c(4) * t - c(1)),
            c(8) * t * t,
            c(2) * t,
            -c(4) * t,
            c(4) * (c(4) * t + c(1)) * (c(4) * t - c(1)) / c(3),
            c(2) * (c(2) * t + c(1)) * (c(8) * t - c(1)) / c(3),
        ),
    };
    let int = |name: &str, x: Ratio<i128>| -> Result<i128> {
        if x.is_integer() {
            Ok(x.to_integer())
        } else {
            Err(Error::Internal(format!(
                "{name} = {x} is not an integer at m = {m}"
            )))
        }
    };
    let nat = |name: &str, x: Ratio<i128>| -> Result<u64> {
        let x = int(name, x)?;
        u64::try_from(x).map_err(|_| Error::Internal(format!("{name} = {x} is negative")))
    };
    let params = SrgParameters {
        v: nat("v", v)?,
        k: nat("k", k)?,
        lambda: nat("lambda", l)?,
        mu: nat("mu", mu)?,
        r: int("r", r)? as i64,
        s: int("s", s)? as i64,
        f: nat("f", f)?,
        g: nat("g", g)?,
    };
    if !params.trace_identities_hold() {
        return Err(Error::Internal(format!(
            "trace identities fail for {which:?} at m = {m}"
        )));
    }
    Ok(params)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum UpsilonKind {
    /// Non-neighbors of `a = (e_1, 0)`.
    A,
    /// Non-neighbors of `b = (e_1, e_1)`.
    B,
}

/// An induced subgraph of Γ^(m) with its vertices in the host.
#[derive(Clone, Debug)]
pub struct Upsilon {
    pub graph: DenseGraph,
    /// `vertex_map[i]` is the host vertex of vertex `i`, ascending.
    pub vertex_map: Vec<usize>,
}

impl Upsilon {
    pub fn local_index(&self, host: usize) -> Option<usize> {
        self.vertex_map.binary_search(&host).ok()
    }
}

/// Host vertex of `a = (e_1, 0)` or `b = (e_1, e_1)`.
pub fn upsilon_base(m: usize, which: UpsilonKind) -> usize {
    match which {
        UpsilonKind::A => 1,
        UpsilonKind::B => 1 | 1 << m,
    }
}

/// Neighbors of zero in Γ^(m) that are not neighbors of `a` (resp. `b`).
pub fn build_upsilon(m: usize, which: UpsilonKind) -> Result<Upsilon> {
    check_range(m, 3, 6)?;
    upsilon_in(&build_gamma(m)?, m, which)
}

/// As [`build_upsilon`], on an already constructed Γ^(m).
pub fn upsilon_in(gamma: &DenseGraph, m: usize, which: UpsilonKind) -> Result<Upsilon> {
    if gamma.order() != 1 << (2 * m) {
        return Err(argument("host order differs from 2^(2m)"));
    }
    let base = upsilon_base(m, which);
    let set = gamma.neighbors(0).difference(&gamma.neighbors(base));
    let (graph, vertex_map) = gamma.induced_subgraph(&set)?;
    Ok(Upsilon { graph, vertex_map })
}

/// Host vertices `(0, e_2)`, `(0, e_3)`, `(0, e_4)`: a triangle of Υ_b whose
/// common neighborhood is smaller than that of any triangle of Υ_a.
pub fn witness_triangle(m: usize) -> Result<[usize; 3]> {
    check_range(m, 4, 6)?;
    Ok([1 << (m + 1), 1 << (m + 2), 1 << (m + 3)])
}

/// Distribution of common-neighborhood sizes over all triangles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriangleProfile {
    /// size -> number of (unordered) triangles
    pub histogram: BTreeMap<usize, usize>,
}

impl TriangleProfile {
    pub fn triangles(&self) -> usize {
        self.histogram.values().sum()
    }

    pub fn min(&self) -> Option<usize> {
        self.histogram.keys().next().copied()
    }

    pub fn max(&self) -> Option<usize> {
        self.histogram.keys().next_back().copied()
    }

    pub fn is_constant(&self) -> bool {
        self.histogram.len() == 1
    }
}

pub fn triangle_common_neighbors(g: &DenseGraph, a: usize, b: usize, c: usize) -> usize {
    g.row(a)
        .iter()
        .zip(g.row(b))
        .zip(g.row(c))
        .map(|((x, y), z)| (x & y & z).count_ones() as usize)
        .sum()
}

pub fn triangle_profile(g: &DenseGraph) -> TriangleProfile {
    let n = g.order();
    let partial: Vec<BTreeMap<usize, usize>> = (0..n)
        .into_par_iter()
        .map(|a| {
            let mut hist = BTreeMap::new();
            let above = |v: usize| -> VertexSet {
                let mut s = g.neighbors(v);
                for u in 0..=v {
                    s.remove(u);
                }
                s
            };
            let na = above(a);
            for b in na.iter() {
                for c in na.intersection(&g.neighbors(b)).iter().filter(|&c| c > b) {
                    *hist
                        .entry(triangle_common_neighbors(g, a, b, c))
                        .or_insert(0) += 1;
                }
            }
            hist
        })
        .collect();
    let mut histogram = BTreeMap::new();
    for h in partial {
        for (k, v) in h {
            *histogram.entry(k).or_insert(0) += v;
        }
    }
    TriangleProfile { histogram }
}
