//! Equitable partitions of the common neighbourhoods used in the (3,5)
//! regularity argument, with their partition matrices written in terms of
//! the structure constants one level down.

use serde::Serialize;

use crate::coherent::expected_constants;
use crate::error::{argument, Error, Result};
use crate::family::{self, build_gamma, UpsilonKind};
use crate::graphs::{DenseGraph, VertexSet};
use crate::regularity::GraphType;

/// Disjoint non-empty classes covering `0..width`, in a fixed order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedPartition {
    width: usize,
    classes: Vec<VertexSet>,
}

impl OrderedPartition {
    pub fn new(width: usize, classes: Vec<VertexSet>) -> Result<Self> {
        let mut seen = VertexSet::empty(width);
        for (i, c) in classes.iter().enumerate() {
            if c.width() != width {
                return Err(argument(format!(
                    "class {i} has width {} instead of {width}",
                    c.width()
                )));
            }
            if c.is_empty() {
                return Err(argument(format!("class {i} is empty")));
            }
            if !seen.intersection(c).is_empty() {
                return Err(argument(format!("class {i} overlaps an earlier class")));
            }
            for v in c.iter() {
                seen.insert(v);
            }
        }
        if seen.len() != width {
            return Err(argument("classes do not cover every vertex"));
        }
        Ok(OrderedPartition { width, classes })
    }

    pub fn from_labels(labels: &[usize]) -> Result<Self> {
        let count = labels.iter().map(|&l| l + 1).max().unwrap_or(0);
        let mut classes = vec![VertexSet::empty(labels.len()); count];
        for (v, &l) in labels.iter().enumerate() {
            classes[l].insert(v);
        }
        OrderedPartition::new(labels.len(), classes)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn classes(&self) -> &[VertexSet] {
        &self.classes
    }

    pub fn sizes(&self) -> Vec<u64> {
        self.classes.iter().map(|c| c.len() as u64).collect()
    }
}

/// `a[i][j]`: neighbours in class `j` of any vertex of class `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionMatrix {
    pub a: Vec<Vec<u64>>,
}

impl PartitionMatrix {
    pub fn dimension(&self) -> usize {
        self.a.len()
    }
}

/// A vertex whose neighbour count into some class differs from the first
/// vertex of its own class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonEquitable {
    pub vertex: usize,
    pub class: usize,
    pub target: usize,
    pub expected: u64,
    pub found: u64,
}

pub fn verify_equitable(
    g: &DenseGraph,
    p: &OrderedPartition,
) -> Result<std::result::Result<PartitionMatrix, NonEquitable>> {
    if p.width != g.order() {
        return Err(argument(format!(
            "partition of {} points for a graph of order {}",
            p.width,
            g.order()
        )));
    }
    let c = p.classes.len();
    let mut a = vec![vec![0u64; c]; c];
    for (i, class) in p.classes.iter().enumerate() {
        let mut first = true;
        for v in class.iter() {
            let nb = g.neighbors(v);
            for (j, target) in p.classes.iter().enumerate() {
                let found = nb.intersection(target).len() as u64;
                if first {
                    a[i][j] = found;
                } else if a[i][j] != found {
                    return Ok(Err(NonEquitable {
                        vertex: v,
                        class: i,
                        target: j,
                        expected: a[i][j],
                        found,
                    }));
                }
            }
            first = false;
        }
    }
    Ok(Ok(PartitionMatrix { a }))
}

/// `sizesᵀ · a · 1`: the number of arcs of a graph with this equitable
/// partition.
pub fn arc_count_from_partition(sizes: &[u64], matrix: &PartitionMatrix) -> Result<u64> {
    if sizes.len() != matrix.a.len() || matrix.a.iter().any(|r| r.len() != sizes.len()) {
        return Err(argument("sizes and matrix dimensions differ"));
    }
    Ok(sizes
        .iter()
        .zip(&matrix.a)
        .map(|(s, row)| s * row.iter().sum::<u64>())
        .sum())
}

/// Coordinate projections `GF(2)^{2m} -> GF(2)^{2m-d}` applied blockwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Projection {
    /// Drop coordinate 1 of both blocks.
    DropFirst,
    /// Drop coordinates 1 and `m` of both blocks.
    DropFirstAndLast,
    /// Drop coordinates 1 and 2 of both blocks.
    DropFirstTwo,
}

impl Projection {
    /// Block length after projecting.
    pub fn target_m(self, m: usize) -> usize {
        match self {
            Projection::DropFirst => m - 1,
            Projection::DropFirstAndLast | Projection::DropFirstTwo => m - 2,
        }
    }

    pub fn apply(self, m: usize, v: usize) -> usize {
        let low = (1usize << m) - 1;
        let (x, y) = (v & low, v >> m);
        let t = self.target_m(m);
        let keep = (1usize << t) - 1;
        let shift = match self {
            Projection::DropFirst | Projection::DropFirstAndLast => 1,
            Projection::DropFirstTwo => 2,
        };
        ((x >> shift) & keep) | (((y >> shift) & keep) << t)
    }

    /// `true` iff no two of `vertices` share an image.
    pub fn is_injective_on(self, m: usize, vertices: impl IntoIterator<Item = usize>) -> bool {
        let mut seen = vec![false; 1 << (2 * self.target_m(m))];
        vertices
            .into_iter()
            .all(|v| !std::mem::replace(&mut seen[self.apply(m, v)], true))
    }
}

/// The five situations analysed for the double-cone types over an edge plus
/// an isolated vertex (two base triples) and over three isolated vertices
/// (three base triples).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ProofCase {
    T3Case1,
    T3Case2,
    T4Case1,
    T4Case2,
    T4Case3,
}

impl ProofCase {
    pub const ALL: [ProofCase; 5] = [
        ProofCase::T3Case1,
        ProofCase::T3Case2,
        ProofCase::T4Case1,
        ProofCase::T4Case2,
        ProofCase::T4Case3,
    ];

    pub fn projection(self) -> Projection {
        match self {
            ProofCase::T3Case1 | ProofCase::T3Case2 => Projection::DropFirstAndLast,
            _ => Projection::DropFirstTwo,
        }
    }

    /// The type whose extension counts the case computes: anchors `a, b, c`
    /// at `0, 1, 2`, both extra vertices joined to everything.
    pub fn graph_type(self) -> GraphType {
        let mut edges = vec![(3, 4)];
        for a in 0..3 {
            edges.push((a, 3));
            edges.push((a, 4));
        }
        if matches!(self, ProofCase::T3Case1 | ProofCase::T3Case2) {
            edges.push((0, 2));
        }
        GraphType::new(
            DenseGraph::from_edges(5, &edges).expect("valid"),
            vec![0, 1, 2],
        )
        .expect("valid")
    }
}

/// A case of the argument realised in `Γ^(m)`.
#[derive(Clone, Debug)]
pub struct ProofPartition {
    pub case: ProofCase,
    pub m: usize,
    /// `(u, v, w)` as images of the anchors `(a, b, c)`.
    pub base: [usize; 3],
    /// Subgraph induced on the common neighbourhood of the base triple.
    pub host: DenseGraph,
    /// Vertex of `Γ^(m)` for each host vertex.
    pub vertex_map: Vec<usize>,
    pub partition: OrderedPartition,
}

fn unit(j: usize) -> usize {
    1 << (j - 1)
}

fn vertex(m: usize, x: usize, y: usize) -> usize {
    x | (y << m)
}

/// Coordinate `j` (1-based) of a block.
fn bit(block: usize, j: usize) -> usize {
    block >> (j - 1) & 1
}

/// Coordinates `from..=to` (1-based) of a block are all zero.
fn zero_range(block: usize, from: usize, to: usize) -> bool {
    (from..=to).all(|j| bit(block, j) == 0)
}

fn base_triple(case: ProofCase, m: usize) -> [usize; 3] {
    let (e1, e2, em) = (unit(1), unit(2), unit(m));
    match case {
        ProofCase::T3Case1 => [0, vertex(m, e1, e1), vertex(m, 0, em)],
        ProofCase::T3Case2 => [0, vertex(m, e1, 0), vertex(m, 0, e1)],
        ProofCase::T4Case1 => [0, vertex(m, e1, 0), vertex(m, e2, 0)],
        ProofCase::T4Case2 => [0, vertex(m, e1, 0), vertex(m, e2, e2)],
        ProofCase::T4Case3 => [0, vertex(m, e1, e1), vertex(m, e1 | e2, e2)],
    }
}

/// Class (0-based) of a common neighbour `(x, y)`, or `None` if it falls
/// in none of the listed classes.
fn class_of(case: ProofCase, m: usize, x: usize, y: usize) -> Option<usize> {
    let (x1, xm, y1, ym) = (bit(x, 1), bit(x, m), bit(y, 1), bit(y, m));
    match case {
        ProofCase::T3Case1 => match (x1, y1, ym) {
            (1, 0, 0) => Some(0),
            (1, 0, 1) => Some(1),
            (0, 1, 0) => Some(2),
            (0, 1, 1) if !zero_range(y, 2, m - 1) => Some(3),
            (0, 1, 1) if x != 0 => Some(4),
            (0, 1, 1) if x == 0 && y == unit(1) | unit(m) => Some(5),
            _ => None,
        },
        ProofCase::T3Case2 => match (xm, ym) {
            (1, 0) => Some(0),
            (1, 1) => Some(1),
            (0, 0) => Some(2),
            (0, 1) if !zero_range(y, 1, m - 1) => Some(3),
            (0, 1) if x != 0 => Some(4),
            (0, 1) => Some(5),
            _ => None,
        },
        ProofCase::T4Case1 | ProofCase::T4Case2 | ProofCase::T4Case3 => {
            let key = (x1, bit(x, 2), y1, bit(y, 2));
            let table: [(usize, usize, usize, usize); 4] = match case {
                ProofCase::T4Case1 => [(0, 0, 0, 0), (0, 1, 0, 0), (1, 0, 0, 0), (1, 1, 0, 0)],
                ProofCase::T4Case2 => [(0, 0, 0, 1), (0, 1, 0, 0), (1, 0, 0, 1), (1, 1, 0, 0)],
                _ => [(0, 0, 1, 0), (0, 1, 1, 1), (1, 0, 0, 1), (1, 1, 0, 0)],
            };
            table.iter().position(|&k| k == key)
        }
    }
}

pub fn build_proof_partition(m: usize, case: ProofCase) -> Result<ProofPartition> {
    if !(4..=5).contains(&m) {
        return Err(argument(format!(
            "proof partitions are built for m in 4..=5, got {m}"
        )));
    }
    build_in(&build_gamma(m)?, m, case)
}

/// As [`build_proof_partition`] with a prebuilt `Γ^(m)`.
pub fn build_in(gamma: &DenseGraph, m: usize, case: ProofCase) -> Result<ProofPartition> {
    if gamma.order() != 1 << (2 * m) {
        return Err(argument("host order does not match m"));
    }
    let base = base_triple(case, m);
    let triple = VertexSet::from_indices(gamma.order(), &base)?;
    let common = gamma.common_neighbors(&triple)?;
    let (host, vertex_map) = gamma.induced_subgraph(&common)?;
    let low = (1usize << m) - 1;
    let mut labels = Vec::with_capacity(vertex_map.len());
    for &v in &vertex_map {
        let label = class_of(case, m, v & low, v >> m).ok_or_else(|| {
            Error::Internal(format!("common neighbour {v} lies in no class of {case:?}"))
        })?;
        labels.push(label);
    }
    let partition = OrderedPartition::from_labels(&labels)?;
    Ok(ProofPartition {
        case,
        m,
        base,
        host,
        vertex_map,
        partition,
    })
}

impl ProofPartition {
    /// The projection is one-to-one on every class.
    pub fn projection_injective(&self) -> bool {
        let pi = self.case.projection();
        self.partition
            .classes()
            .iter()
            .all(|c| pi.is_injective_on(self.m, c.iter().map(|v| self.vertex_map[v])))
    }

    /// Partition matrix predicted from the structure constants of the
    /// configuration on `GF(2)^{2(m-2)}`.
    pub fn symbolic_matrix(&self) -> Result<PartitionMatrix> {
        symbolic_matrix(self.case, self.m)
    }

    /// Class sizes and matrix written directly in `θ_m`.
    pub fn closed_form(&self) -> (Vec<u64>, PartitionMatrix) {
        closed_form(self.case, self.m)
    }

    pub fn to_json(&self, matrix: Option<&PartitionMatrix>) -> serde_json::Value {
        serde_json::json!({
            "case": self.case,
            "m": self.m,
            "base": self.base,
            "sizes": self.partition.sizes(),
            "matrix": matrix.map(|p| &p.a),
        })
    }
}

pub fn symbolic_matrix(case: ProofCase, m: usize) -> Result<PartitionMatrix> {
    if m < 4 {
        return Err(argument(format!("m = {m} too small")));
    }
    let c = expected_constants(m - 2)?;
    // relations numbered from 1
    let p = |i: usize, j: usize, k: usize| c[i - 1][j - 1][k - 1];
    let s3 = |k: usize| p(3, 1, k) + p(3, 2, k) + p(3, 3, k);
    let a = match case {
        ProofCase::T3Case1 => vec![
            vec![p(3, 3, 3), s3(3), p(3, 4, 3), p(3, 4, 3), p(2, 4, 3), 0],
            vec![s3(3), p(3, 3, 3), p(3, 4, 3), p(3, 4, 3), p(2, 4, 3), 0],
            vec![
                p(3, 4, 3),
                p(3, 4, 3),
                p(3, 3, 3),
                s3(3),
                p(2, 3, 3),
                p(1, 3, 3),
            ],
            vec![
                p(3, 4, 3),
                p(3, 4, 3),
                s3(3),
                p(3, 3, 3),
                p(2, 3, 3),
                p(1, 3, 3),
            ],
            vec![p(3, 4, 2), p(3, 4, 2), p(3, 3, 2), p(3, 3, 2), 0, 0],
            vec![0, 0, p(3, 3, 1), p(3, 3, 1), 0, 0],
        ],
        ProofCase::T3Case2 => vec![
            vec![
                p(3, 3, 3),
                p(4, 1, 3) + p(4, 2, 3) + p(4, 3, 3),
                p(3, 3, 3),
                p(3, 4, 3),
                p(2, 4, 3),
                0,
            ],
            vec![s3(4), p(4, 3, 4), p(3, 4, 4), p(3, 3, 4), p(2, 3, 4), 0],
            vec![
                p(3, 3, 3),
                p(4, 4, 3),
                p(3, 3, 3),
                s3(3),
                p(2, 3, 3),
                p(1, 3, 3),
            ],
            vec![
                p(3, 4, 3),
                p(4, 3, 3),
                s3(3),
                p(3, 3, 3),
                p(2, 3, 3),
                p(1, 3, 3),
            ],
            vec![p(3, 4, 2), p(4, 3, 2), p(3, 3, 2), p(3, 3, 2), 0, 0],
            vec![0, 0, p(3, 3, 1), p(3, 3, 1), 0, 0],
        ],
        ProofCase::T4Case1 => vec![vec![p(3, 3, 3); 4]; 4],
        ProofCase::T4Case2 => {
            let (a, b) = (p(3, 3, 3), p(3, 4, 3));
            vec![
                vec![a, b, a, b],
                vec![b, a, b, a],
                vec![a, b, a, b],
                vec![b, a, b, a],
            ]
        }
        ProofCase::T4Case3 => {
            let (a, b) = (p(3, 3, 3), p(3, 4, 3));
            (0..4)
                .map(|i| (0..4).map(|j| if i == j { a } else { b }).collect())
                .collect()
        }
    };
    Ok(PartitionMatrix { a })
}

/// Class sizes and partition matrix as polynomials in `θ_m = 2^(m-3)`.
pub fn closed_form(case: ProofCase, m: usize) -> (Vec<u64>, PartitionMatrix) {
    let t = 1u64 << (m - 3);
    let big = t * (2 * t - 1);
    let tt = t * (t - 1);
    let sq = t * t;
    match case {
        ProofCase::T3Case1 | ProofCase::T3Case2 => (
            vec![big, big, big, big, 2 * t - 1, 1],
            PartitionMatrix {
                a: vec![
                    vec![tt, sq, tt, tt, t, 0],
                    vec![sq, tt, tt, tt, t, 0],
                    vec![tt, tt, tt, sq, t - 1, 1],
                    vec![tt, tt, sq, tt, t - 1, 1],
                    vec![sq, sq, tt, tt, 0, 0],
                    vec![0, 0, big, big, 0, 0],
                ],
            },
        ),
        _ => (
            vec![big; 4],
            PartitionMatrix {
                a: vec![vec![tt; 4]; 4],
            },
        ),
    }
}

/// `Υ_a` maps bijectively onto `GF(2)^{2m-2}` under [`Projection::DropFirst`]
/// and the image of its edge set is exactly the edge set of `Γ^(m-1)`.
pub fn upsilon_a_projects_onto_gamma(m: usize) -> Result<bool> {
    let ups = family::build_upsilon(m, UpsilonKind::A)?;
    let pi = Projection::DropFirst;
    if ups.vertex_map.len() != 1 << (2 * (m - 1))
        || !pi.is_injective_on(m, ups.vertex_map.iter().copied())
    {
        return Ok(false);
    }
    let smaller = build_gamma(m - 1)?;
    let img: Vec<usize> = ups.vertex_map.iter().map(|&v| pi.apply(m, v)).collect();
    let n = img.len();
    Ok((0..n)
        .all(|i| (i + 1..n).all(|j| ups.graph.has_edge(i, j) == smaller.has_edge(img[i], img[j]))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regularity::count_extensions;

    #[test]
    fn single_class_and_c4() {
        let c5 = DenseGraph::cycle(5);
        let p = OrderedPartition::from_labels(&[0; 5]).unwrap();
        let mat = verify_equitable(&c5, &p).unwrap().unwrap();
        assert_eq!(mat.a, vec![vec![2]]);
        assert_eq!(arc_count_from_partition(&p.sizes(), &mat).unwrap(), 10);

        let c4 = DenseGraph::cycle(4);
        let good = OrderedPartition::from_labels(&[0, 1, 0, 1]).unwrap();
        assert_eq!(
            verify_equitable(&c4, &good).unwrap().unwrap().a,
            vec![vec![0, 2], vec![2, 0]]
        );
        let bad = OrderedPartition::from_labels(&[0, 1, 1, 1]).unwrap();
        let w = verify_equitable(&c4, &bad).unwrap().unwrap_err();
        assert_eq!(
            (w.vertex, w.class, w.target, w.expected, w.found),
            (2, 1, 0, 1, 0)
        );
    }

    #[test]
    fn malformed_partitions() {
        let e = VertexSet::empty(3);
        assert!(OrderedPartition::new(3, vec![e.clone()]).is_err());
        let a = VertexSet::from_indices(3, &[0, 1]).unwrap();
        let b = VertexSet::from_indices(3, &[1, 2]).unwrap();
        assert!(OrderedPartition::new(3, vec![a.clone(), b]).is_err());
        assert!(OrderedPartition::new(3, vec![a]).is_err());
        let p = OrderedPartition::from_labels(&[0, 0]).unwrap();
        assert!(verify_equitable(&DenseGraph::cycle(5), &p).is_err());
        let mat = PartitionMatrix { a: vec![vec![1]] };
        assert!(arc_count_from_partition(&[1, 2], &mat).is_err());
        assert!(build_proof_partition(3, ProofCase::T3Case1).is_err());
    }

    #[test]
    fn projections() {
        // m = 4: x = 0b1011, y = 0b0110
        let v = 0b1011 | 0b0110 << 4;
        assert_eq!(Projection::DropFirst.apply(4, v), 0b101 | 0b011 << 3);
        assert_eq!(Projection::DropFirstAndLast.apply(4, v), 0b01 | 0b11 << 2);
        assert_eq!(Projection::DropFirstTwo.apply(4, v), 0b10 | 0b01 << 2);
        assert!(!Projection::DropFirst.is_injective_on(4, [0, 1]));
    }

    #[test]
    fn cases_at_m4() {
        let gamma = build_gamma(4).unwrap();
        let expected_sizes = [
            vec![6, 6, 6, 6, 3, 1],
            vec![6, 6, 6, 6, 3, 1],
            vec![6, 6, 6, 6],
            vec![6, 6, 6, 6],
            vec![6, 6, 6, 6],
        ];
        for (case, sizes) in ProofCase::ALL.into_iter().zip(expected_sizes) {
            let pp = build_in(&gamma, 4, case).unwrap();
            assert_eq!(pp.partition.sizes(), sizes, "{case:?}");
            assert!(pp.projection_injective(), "{case:?}");
            let mat = verify_equitable(&pp.host, &pp.partition).unwrap().unwrap();
            assert_eq!(mat, pp.symbolic_matrix().unwrap(), "{case:?}");
            let arcs = arc_count_from_partition(&pp.partition.sizes(), &mat).unwrap();
            let direct = count_extensions(&gamma, &case.graph_type(), &pp.base).unwrap();
            assert_eq!(arcs, direct, "{case:?}");
            let (s, c) = pp.closed_form();
            assert_eq!(arc_count_from_partition(&s, &c).unwrap(), arcs, "{case:?}");
        }
    }

    /// Common neighbourhoods rebuilt from explicit bit conditions.
    #[test]
    fn neighbourhoods_match_bit_conditions() {
        for m in [4usize, 5] {
            let low = (1usize << m) - 1;
            let all = 0..1usize << (2 * m);
            let lemma = |case: ProofCase| -> Vec<usize> {
                all.clone()
                    .filter(|&v| {
                        let (x, y) = (v & low, v >> m);
                        let base = y != 0 && (x & y).count_ones() % 2 == 0;
                        base && match case {
                            ProofCase::T3Case1 => {
                                bit(x, m) == 0
                                    && bit(x, 1) != bit(y, 1)
                                    && (bit(y, m) == 0 || !zero_range(y, 1, m - 1))
                                    && (bit(y, 1) == 0 || !zero_range(y, 2, m))
                            }
                            ProofCase::T3Case2 => bit(x, 1) == 0 && bit(y, 1) == 0,
                            ProofCase::T4Case1 => bit(y, 1) == 0 && bit(y, 2) == 0,
                            ProofCase::T4Case2 => {
                                bit(y, 1) == 0
                                    && bit(x, 2) != bit(y, 2)
                                    && (bit(y, 2) == 0 || !zero_range(y, 3, m))
                            }
                            ProofCase::T4Case3 => {
                                bit(x, 1) != bit(y, 1)
                                    && bit(y, 2) == bit(x, 2) ^ bit(x, 1)
                                    && (bit(y, 1) == 0 || !zero_range(y, 2, m))
                                    && (bit(y, 2) == 0 || bit(y, 1) == 1 || !zero_range(y, 3, m))
                                    && (bit(y, 1) & bit(y, 2) == 0 || !zero_range(y, 3, m))
                            }
                        }
                    })
                    .collect()
            };
            let gamma = build_gamma(m).unwrap();
            for case in ProofCase::ALL {
                assert_eq!(
                    build_in(&gamma, m, case).unwrap().vertex_map,
                    lemma(case),
                    "m={m} {case:?}"
                );
            }
        }
    }

    #[test]
    fn symbolic_top_left_at_m4() {
        assert_eq!(symbolic_matrix(ProofCase::T3Case1, 4).unwrap().a[0][0], 2);
    }

    #[test]
    fn upsilon_a_is_smaller_gamma() {
        assert!(upsilon_a_projects_onto_gamma(4).unwrap());
    }
}
