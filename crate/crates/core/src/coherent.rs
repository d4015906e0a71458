//! Pair colorings, 2-dimensional Weisfeiler-Leman stabilization, coherent
//! configuration axioms and structure constants, and orbit certificates.

use std::collections::{HashMap, HashSet};

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{argument, resource, Error, Result};
use crate::graphs::{words_for, DenseGraph};
use crate::groups::{self, Domain, GeneratorSet};

/// Largest order accepted by the Weisfeiler-Leman routines.
pub const MAX_WL_ORDER: usize = 4096;

/// A color for every ordered pair of `0..n`, colors `0..rank` all in use.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ColorMatrix {
    n: usize,
    rank: usize,
    colors: Vec<u32>,
}

impl ColorMatrix {
    /// Wraps a row-major color array. Labels are kept as given; they must be
    /// exactly `0..rank` for some `rank`.
    pub fn new(n: usize, colors: Vec<u32>) -> Result<Self> {
        if colors.len() != n * n {
            return Err(argument(format!(
                "expected {} colors, got {}",
                n * n,
                colors.len()
            )));
        }
        let rank = colors.iter().max().map_or(0, |&c| c as usize + 1);
        let mut used = vec![false; rank];
        for &c in &colors {
            used[c as usize] = true;
        }
        if used.iter().any(|u| !u) {
            return Err(argument("color labels are not contiguous"));
        }
        Ok(ColorMatrix { n, rank, colors })
    }

    /// Builds colors from a function of the pair, then renumbers them by
    /// first row-major occurrence.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> u32 + Sync) -> Self {
        let colors: Vec<u32> = (0..n * n)
            .into_par_iter()
            .map(|e| f(e / n, e % n))
            .collect();
        Self::canonical_from(n, colors)
    }

    fn canonical_from(n: usize, colors: Vec<u32>) -> Self {
        let mut map = HashMap::new();
        let colors: Vec<u32> = colors
            .into_iter()
            .map(|c| {
                let next = map.len() as u32;
                *map.entry(c).or_insert(next)
            })
            .collect();
        ColorMatrix {
            n,
            rank: map.len(),
            colors,
        }
    }

    /// Diagonal, edges and non-edges of `g`, numbered by first occurrence.
    pub fn from_graph(g: &DenseGraph) -> Self {
        Self::from_fn(g.order(), |x, y| {
            if x == y {
                0
            } else if g.has_edge(x, y) {
                1
            } else {
                2
            }
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u32 {
        self.colors[x * self.n + y]
    }

    /// The same partition with colors renumbered by first row-major
    /// occurrence.
    pub fn canonical(&self) -> ColorMatrix {
        Self::canonical_from(self.n, self.colors.clone())
    }

    /// `true` iff every class of `self` lies inside a class of `coarser`.
    pub fn refines(&self, coarser: &ColorMatrix) -> bool {
        if self.n != coarser.n {
            return false;
        }
        let mut image = vec![u32::MAX; self.rank];
        self.colors.iter().zip(&coarser.colors).all(|(&a, &b)| {
            let slot = &mut image[a as usize];
            if *slot == u32::MAX {
                *slot = b;
            }
            *slot == b
        })
    }

    pub fn same_partition(&self, other: &ColorMatrix) -> bool {
        self.rank == other.rank && self.refines(other)
    }

    /// Number of pairs of each color in row `x`.
    pub fn row_valencies(&self, x: usize) -> Vec<usize> {
        let mut out = vec![0; self.rank];
        for y in 0..self.n {
            out[self.get(x, y) as usize] += 1;
        }
        out
    }
}

/// For each pair `(x, y)`, the sorted list of `(i * rank + j, count)` over
/// color pairs with `count = |{z : c(x,z) = i, c(z,y) = j}| > 0`.
///
/// Two kernels: one intersects per-color bitsets of row `x` and column `y`,
/// the other sorts the `n` color pairs directly. The first is used when the
/// rank is small compared with `n`.
struct Composition<'a> {
    colors: &'a ColorMatrix,
    words: usize,
    // row_sets[(x * rank + i) * words ..] = {z : c(x,z) = i}
    row_sets: Vec<u64>,
    // col_sets[(y * rank + j) * words ..] = {z : c(z,y) = j}
    col_sets: Vec<u64>,
    row_colors: Vec<Vec<u32>>,
    col_colors: Vec<Vec<u32>>,
}

const BITSET_BUDGET_WORDS: usize = 1 << 26;

impl<'a> Composition<'a> {
    fn new(colors: &'a ColorMatrix) -> Option<Self> {
        let n = colors.n;
        let r = colors.rank;
        let words = words_for(n);
        let total = n.checked_mul(r)?.checked_mul(words)?;
        if total > BITSET_BUDGET_WORDS || r * r * words > 8 * n {
            return None;
        }
        let mut row_sets = vec![0u64; total];
        let mut col_sets = vec![0u64; total];
        let mut row_seen = vec![vec![false; r]; n];
        let mut col_seen = vec![vec![false; r]; n];
        for x in 0..n {
            for z in 0..n {
                let c = colors.get(x, z) as usize;
                row_sets[(x * r + c) * words + z / 64] |= 1 << (z % 64);
                row_seen[x][c] = true;
                // pair (x, z) is in column z with row index x
                col_sets[(z * r + c) * words + x / 64] |= 1 << (x % 64);
                col_seen[z][c] = true;
            }
        }
        let list = |seen: Vec<Vec<bool>>| -> Vec<Vec<u32>> {
            seen.into_iter()
                .map(|s| (0..r as u32).filter(|&c| s[c as usize]).collect())
                .collect()
        };
        Some(Composition {
            colors,
            words,
            row_sets,
            col_sets,
            row_colors: list(row_seen),
            col_colors: list(col_seen),
        })
    }

    fn counts(&self, x: usize, y: usize, out: &mut Vec<u32>) {
        let r = self.colors.rank;
        let w = self.words;
        for &i in &self.row_colors[x] {
            let a = &self.row_sets[(x * r + i as usize) * w..][..w];
            for &j in &self.col_colors[y] {
                let b = &self.col_sets[(y * r + j as usize) * w..][..w];
                let c: u32 = a.iter().zip(b).map(|(p, q)| (p & q).count_ones()).sum();
                if c > 0 {
                    out.push(i * r as u32 + j);
                    out.push(c);
                }
            }
        }
    }
}

fn counts_by_sorting(
    colors: &ColorMatrix,
    x: usize,
    y: usize,
    scratch: &mut Vec<u64>,
    out: &mut Vec<u32>,
) {
    let r = colors.rank as u64;
    scratch.clear();
    scratch.extend((0..colors.n).map(|z| colors.get(x, z) as u64 * r + colors.get(z, y) as u64));
    scratch.sort_unstable();
    let mut k = 0;
    while k < scratch.len() {
        let key = scratch[k];
        let start = k;
        while k < scratch.len() && scratch[k] == key {
            k += 1;
        }
        out.push(key as u32);
        out.push((k - start) as u32);
    }
}

/// Calls `f(y, counts)` for every `y`, with the composition counts of
/// `(x, y)` as produced by [`Composition`].
fn for_each_in_row(
    colors: &ColorMatrix,
    kernel: Option<&Composition>,
    x: usize,
    mut f: impl FnMut(usize, &[u32]),
) {
    let mut out = Vec::new();
    let mut scratch = Vec::new();
    for y in 0..colors.n {
        out.clear();
        match kernel {
            Some(k) => k.counts(x, y, &mut out),
            None => counts_by_sorting(colors, x, y, &mut scratch, &mut out),
        }
        f(y, &out);
    }
}

fn check_wl_order(n: usize) -> Result<()> {
    if n > MAX_WL_ORDER {
        return Err(resource(format!("order {n} exceeds {MAX_WL_ORDER}")));
    }
    if (n as u64) * (n as u64) > u32::MAX as u64 {
        return Err(resource("too many pairs"));
    }
    Ok(())
}

/// One refinement round: the new color of `(x, y)` is determined by its old
/// color, the old color of `(y, x)`, and the composition counts.
fn refine_once(colors: &ColorMatrix) -> ColorMatrix {
    let n = colors.n;
    let kernel = Composition::new(colors);
    let rows: Vec<(Vec<Vec<u32>>, Vec<u32>)> = (0..n)
        .into_par_iter()
        .map(|x| {
            let mut local: HashMap<Vec<u32>, u32> = HashMap::new();
            let mut order = Vec::new();
            let mut ids = Vec::with_capacity(n);
            for_each_in_row(colors, kernel.as_ref(), x, |y, counts| {
                let mut sig = Vec::with_capacity(counts.len() + 2);
                sig.push(colors.get(x, y));
                sig.push(colors.get(y, x));
                sig.extend_from_slice(counts);
                let next = local.len() as u32;
                let id = *local.entry(sig).or_insert_with_key(|s| {
                    order.push(s.clone());
                    next
                });
                ids.push(id);
            });
            (order, ids)
        })
        .collect();
    let mut global: HashMap<Vec<u32>, u32> = HashMap::new();
    let mut colors_out = Vec::with_capacity(n * n);
    for (order, ids) in rows {
        let map: Vec<u32> = order
            .into_iter()
            .map(|sig| {
                let next = global.len() as u32;
                *global.entry(sig).or_insert(next)
            })
            .collect();
        colors_out.extend(ids.into_iter().map(|l| map[l as usize]));
    }
    ColorMatrix {
        n,
        rank: global.len(),
        colors: colors_out,
    }
}

/// Coarsest coherent refinement of `initial` (2-dimensional
/// Weisfeiler-Leman). Colors of the result are numbered by first row-major
/// occurrence.
pub fn wl_closure(initial: &ColorMatrix) -> Result<ColorMatrix> {
    check_wl_order(initial.n)?;
    let mut current = initial.canonical();
    loop {
        let next = refine_once(&current);
        debug_assert!(next.refines(&current));
        if next.rank == current.rank {
            if !next.refines(initial) {
                return Err(Error::Internal("closure does not refine its input".into()));
            }
            return Ok(next);
        }
        current = next;
    }
}

/// Which coherent configuration axiom failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Axiom {
    /// A color occurs both on and off the diagonal.
    DiagonalSeparation,
    /// A color is neither symmetric nor asymmetric.
    SymmetricOrAsymmetric,
    /// Two pairs of one color have different composition counts.
    ConstantIntersectionNumbers,
}

/// First violated axiom with two witness pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoherenceFailure {
    pub axiom: Axiom,
    pub first: (usize, usize),
    pub second: (usize, usize),
}

/// A coloring verified to be a coherent configuration, with its structure
/// constants `p[i][j][k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoherentConfig {
    colors: ColorMatrix,
    constants: Vec<u64>,
}

impl CoherentConfig {
    pub fn colors(&self) -> &ColorMatrix {
        &self.colors
    }

    pub fn rank(&self) -> usize {
        self.colors.rank
    }

    /// `|{z : c(x,z) = i, c(z,y) = j}|` for any `(x, y)` of color `k`.
    pub fn constant(&self, i: usize, j: usize, k: usize) -> u64 {
        let r = self.rank();
        self.constants[(i * r + j) * r + k]
    }

    /// `{"rank": r, "p": p[i][j][k]}`.
    pub fn constants_json(&self) -> serde_json::Value {
        let r = self.rank();
        let p: Vec<Vec<Vec<u64>>> = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| (0..r).map(|k| self.constant(i, j, k)).collect())
                    .collect()
            })
            .collect();
        serde_json::json!({ "rank": r, "p": p })
    }
}

/// Checks the coherent configuration axioms exhaustively.
pub fn verify_coherent(
    colors: &ColorMatrix,
) -> Result<std::result::Result<CoherentConfig, CoherenceFailure>> {
    let n = colors.n;
    let r = colors.rank;
    check_wl_order(n)?;
    // diagonal separation
    let mut on_diag: Vec<Option<usize>> = vec![None; r];
    for x in 0..n {
        on_diag[colors.get(x, x) as usize].get_or_insert(x);
    }
    for x in 0..n {
        for y in 0..n {
            if x != y {
                if let Some(d) = on_diag[colors.get(x, y) as usize] {
                    return Ok(Err(CoherenceFailure {
                        axiom: Axiom::DiagonalSeparation,
                        first: (d, d),
                        second: (x, y),
                    }));
                }
            }
        }
    }
    // symmetric or asymmetric
    let mut sym_witness: Vec<Option<(usize, usize)>> = vec![None; r];
    let mut asym_witness: Vec<Option<(usize, usize)>> = vec![None; r];
    for x in 0..n {
        for y in 0..n {
            let k = colors.get(x, y) as usize;
            let slot = if colors.get(y, x) as usize == k {
                &mut sym_witness[k]
            } else {
                &mut asym_witness[k]
            };
            slot.get_or_insert((x, y));
            if let (Some(a), Some(b)) = (sym_witness[k], asym_witness[k]) {
                return Ok(Err(CoherenceFailure {
                    axiom: Axiom::SymmetricOrAsymmetric,
                    first: a,
                    second: b,
                }));
            }
        }
    }
    // intersection numbers: per row, the first pair of each color with its
    // counts, or a conflict inside the row
    let kernel = Composition::new(colors);
    let rows: Vec<std::result::Result<Vec<(usize, Vec<u32>)>, (usize, usize)>> = (0..n)
        .into_par_iter()
        .map(|x| {
            let mut seen: Vec<Option<(usize, Vec<u32>)>> = vec![None; r];
            let mut conflict = None;
            for_each_in_row(colors, kernel.as_ref(), x, |y, counts| {
                let k = colors.get(x, y) as usize;
                match &seen[k] {
                    None => seen[k] = Some((y, counts.to_vec())),
                    Some((y0, c)) if conflict.is_none() && c.as_slice() != counts => {
                        conflict = Some((*y0, y))
                    }
                    _ => {}
                }
            });
            match conflict {
                Some(c) => Err(c),
                None => Ok(seen.into_iter().flatten().collect()),
            }
        })
        .collect();
    let mut reference: Vec<Option<((usize, usize), Vec<u32>)>> = vec![None; r];
    for (x, row) in rows.into_iter().enumerate() {
        let row = match row {
            Ok(row) => row,
            Err((y0, y1)) => {
                return Ok(Err(CoherenceFailure {
                    axiom: Axiom::ConstantIntersectionNumbers,
                    first: (x, y0),
                    second: (x, y1),
                }))
            }
        };
        for (y, counts) in row {
            let k = colors.get(x, y) as usize;
            match &reference[k] {
                None => reference[k] = Some(((x, y), counts)),
                Some((w, c)) if *c != counts => {
                    return Ok(Err(CoherenceFailure {
                        axiom: Axiom::ConstantIntersectionNumbers,
                        first: *w,
                        second: (x, y),
                    }));
                }
                _ => {}
            }
        }
    }
    let mut constants = vec![0u64; r * r * r];
    for (k, entry) in reference.into_iter().enumerate() {
        let (_, counts) = entry.expect("every color occurs");
        for pair in counts.chunks(2) {
            let (ij, c) = (pair[0] as usize, pair[1] as u64);
            constants[ij * r + k] = c;
        }
    }
    Ok(Ok(CoherentConfig {
        colors: colors.clone(),
        constants,
    }))
}

/// The tabulated structure constants of the rank-4 configuration on
/// GF(2)^{2m}, as `p[i][j][k]` with indices `0..4` for the relations
/// (diagonal, singular subspace, quadric, non-quadric). Evaluated exactly
/// with `theta = 2^(m-3)`; valid from `m = 2`.
pub fn expected_constants(m: usize) -> Result<[[[u64; 4]; 4]; 4]> {
    if !(2..=32).contains(&m) {
        return Err(argument(format!("m = {m} outside 2..=32")));
    }
    let t = if m >= 3 {
        Ratio::from_integer(1i128 << (m - 3))
    } else {
        Ratio::new(1i128, 2)
    };
    let one = Ratio::from_integer(1i128);
    let c = |k: i128| Ratio::from_integer(k);
    let a = c(8) * t - one; // 8θ-1
    let b = c(4) * t - one; // 4θ-1
    let four_t = c(4) * t;
    let lam = four_t * b; // 4θ(4θ-1)
    let val = four_t * a; // 4θ(8θ-1)
    let sq = c(16) * t * t; // 16θ²
    let zero = c(0);
    // rows[i][k][j]
    let rows: [[[Ratio<i128>; 4]; 4]; 4] = [
        [
            [one, zero, zero, zero],
            [zero, one, zero, zero],
            [zero, zero, one, zero],
            [zero, zero, zero, one],
        ],
        [
            [zero, a, zero, zero],
            [one, c(8) * t - c(2), zero, zero],
            [zero, zero, b, four_t],
            [zero, zero, four_t, b],
        ],
        [
            [zero, zero, val, zero],
            [zero, zero, lam, sq],
            [one, b, lam, lam],
            [zero, four_t, lam, lam],
        ],
        [
            [zero, zero, zero, val],
            [zero, zero, sq, lam],
            [zero, four_t, lam, lam],
            [one, b, lam, lam],
        ],
    ];
    let mut out = [[[0u64; 4]; 4]; 4];
    for i in 0..4 {
        for k in 0..4 {
            for j in 0..4 {
                let v = rows[i][k][j];
                if !v.is_integer() || v < zero {
                    return Err(Error::Internal(format!(
                        "constant p[{i}][{j}][{k}] = {v} is not a non-negative integer"
                    )));
                }
                out[i][j][k] = v.to_integer() as u64;
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Certified,
    Inconclusive,
}

/// Upper and lower bounds on the orbitals of the full automorphism group.
///
/// The pair orbits of a group of automorphisms refine the orbitals of the
/// full group, which refine every isomorphism-invariant pair coloring. Two
/// invariant colorings are used: the Weisfeiler-Leman closure, and the
/// closure color together with the triangle profile of the subgraph on
/// `N(x) \ N[y]`. When either separates all the pair orbits the orbitals
/// are exactly those orbits.
#[derive(Clone, Debug)]
pub struct SchurianCertificate {
    pub verdict: Verdict,
    pub wl_rank: usize,
    pub group_pair_orbits: usize,
    /// Pair orbits with pairwise distinct invariants.
    pub separated_orbits: usize,
    pub closure: ColorMatrix,
    /// The pair orbits of the group, numbered by first row-major occurrence.
    pub orbitals: ColorMatrix,
}

pub fn certify_orbitals(g: &DenseGraph, gens: &GeneratorSet) -> Result<SchurianCertificate> {
    let closure = wl_closure(&ColorMatrix::from_graph(g))?;
    certify_with_closure(g, closure, gens)
}

/// As [`certify_orbitals`], reusing a previously computed closure of `g`.
pub fn certify_with_closure(
    g: &DenseGraph,
    closure: ColorMatrix,
    gens: &GeneratorSet,
) -> Result<SchurianCertificate> {
    if gens.degree() != g.order() || closure.n != g.order() {
        return Err(argument("graph, closure and generators differ in order"));
    }
    if !gens.preserves_graph(g) {
        return Err(argument("generators do not preserve the graph"));
    }
    let orbits = groups::orbits(gens, Domain::Pairs, None)?;
    let n = closure.n;
    // Both labelings number classes by first row-major occurrence, so equal
    // partitions give identical label arrays.
    let separated_orbits = if orbits.labels == closure.colors {
        orbits.count
    } else {
        let mut reps = vec![usize::MAX; orbits.count];
        for (e, &l) in orbits.labels.iter().enumerate() {
            if reps[l as usize] == usize::MAX {
                reps[l as usize] = e;
            }
        }
        let mut invariants: Vec<(u32, Vec<(usize, usize)>)> = reps
            .iter()
            .map(|&e| {
                let (x, y) = (e / n, e % n);
                Ok((closure.get(x, y), local_profile(g, x, y)?))
            })
            .collect::<Result<_>>()?;
        invariants.sort();
        invariants.dedup();
        invariants.len()
    };
    let orbitals = ColorMatrix::new(n, orbits.labels)?;
    Ok(SchurianCertificate {
        verdict: if separated_orbits == orbits.count {
            Verdict::Certified
        } else {
            Verdict::Inconclusive
        },
        wl_rank: closure.rank,
        group_pair_orbits: orbits.count,
        separated_orbits,
        closure,
        orbitals,
    })
}

/// Histogram of common-neighbour counts of the triangles of the subgraph
/// induced on the neighbours of `x` that are neither `y` nor adjacent to it.
fn local_profile(g: &DenseGraph, x: usize, y: usize) -> Result<Vec<(usize, usize)>> {
    if x == y {
        return Ok(Vec::new());
    }
    let mut set = g.neighbors(x).difference(&g.neighbors(y));
    set.remove(y);
    if set.is_empty() {
        return Ok(Vec::new());
    }
    let (sub, _) = g.induced_subgraph(&set)?;
    Ok(crate::family::triangle_profile(&sub)
        .histogram
        .into_iter()
        .collect())
}

/// Orbits and realized color patterns at one tuple size.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LevelCount {
    pub size: usize,
    pub orbits: usize,
    pub patterns: usize,
}

/// Outcome of comparing group orbits with color patterns on tuples of size
/// `1..=k`. Level 1 counts points, level 2 all ordered pairs (including
/// `x = y`), level 3 ordered triples of distinct points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomogeneityReport {
    pub k: usize,
    pub levels: Vec<LevelCount>,
}

impl HomogeneityReport {
    /// Every tuple pattern is a single orbit at every level.
    pub fn holds(&self) -> bool {
        self.levels.iter().all(|l| l.orbits == l.patterns)
    }
}

/// Compares orbits of `gens` on `j`-tuples with the realized color patterns
/// for `j <= k`. Orbits can never be coarser than patterns, so equality at
/// every level means each pattern class is one orbit. For `k = 3` the group
/// must contain all translations of GF(2)^{2m}; triples are then reduced to
/// pairs `(y, z)` with the first point at zero.
pub fn homogeneity_degree(
    colors: &ColorMatrix,
    gens: &GeneratorSet,
    k: usize,
) -> Result<HomogeneityReport> {
    if !(1..=3).contains(&k) {
        return Err(argument(format!("homogeneity degree {k} not in 1..=3")));
    }
    let n = colors.n;
    if gens.degree() != n {
        return Err(argument("generator degree differs from the coloring order"));
    }
    if !gens
        .permutations()
        .iter()
        .all(|p| groups::preserves_colors(p, colors))
    {
        return Err(argument("generators do not preserve the coloring"));
    }
    let mut levels = Vec::new();
    let points = groups::orbits(gens, Domain::Points, None)?;
    let diag: HashSet<u32> = (0..n).map(|x| colors.get(x, x)).collect();
    levels.push(LevelCount {
        size: 1,
        orbits: points.count,
        patterns: diag.len(),
    });
    if k >= 2 {
        let pairs = groups::orbits(gens, Domain::Pairs, None)?;
        let patterns: HashSet<[u32; 4]> = (0..n * n)
            .map(|e| {
                let (x, y) = (e / n, e % n);
                [
                    colors.get(x, y),
                    colors.get(y, x),
                    colors.get(x, x),
                    colors.get(y, y),
                ]
            })
            .collect();
        levels.push(LevelCount {
            size: 2,
            orbits: pairs.count,
            patterns: patterns.len(),
        });
    }
    if k == 3 {
        let stab = gens.zero_stabilizer().ok_or_else(|| {
            argument("triple reduction needs an affine group containing all translations")
        })?;
        let orbits = groups::pair_orbits_off_zero(&stab)?;
        let patterns: HashSet<[u32; 9]> = (0..n)
            .into_par_iter()
            .filter(|&y| y != 0)
            .flat_map_iter(|y| {
                (1..n).filter(move |&z| z != y).map(move |z| {
                    let t = [0, y, z];
                    std::array::from_fn(|e| colors.get(t[e / 3], t[e % 3]))
                })
            })
            .collect();
        levels.push(LevelCount {
            size: 3,
            orbits: orbits.count,
            patterns: patterns.len(),
        });
    }
    Ok(HomogeneityReport { k, levels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn random_graph(n: usize, seed: u64) -> DenseGraph {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        DenseGraph::from_fn(n, |_, _| rng.gen_bool(0.5))
    }

    #[test]
    fn small_closures() {
        let k4 = wl_closure(&ColorMatrix::from_graph(&DenseGraph::complete(4))).unwrap();
        assert_eq!(k4.rank(), 2);
        let c5 = wl_closure(&ColorMatrix::from_graph(&DenseGraph::cycle(5))).unwrap();
        assert_eq!(c5.rank(), 3);
        // a path on 4 vertices: ends, middles; pairs split further
        let p4 = wl_closure(&ColorMatrix::from_graph(&DenseGraph::path(4))).unwrap();
        assert!(verify_coherent(&p4).unwrap().is_ok());
        assert!(p4.rank() > 3);
    }

    #[test]
    fn kernels_agree() {
        for seed in 0..5 {
            let g = random_graph(70, seed);
            let colors = ColorMatrix::from_graph(&g);
            let kernel = Composition::new(&colors).expect("small rank uses bitsets");
            for x in [0, 13, 69] {
                let mut via_bits = Vec::new();
                for_each_in_row(&colors, Some(&kernel), x, |_, c| via_bits.push(c.to_vec()));
                let mut via_sort = Vec::new();
                for_each_in_row(&colors, None, x, |_, c| via_sort.push(c.to_vec()));
                assert_eq!(via_bits, via_sort);
            }
        }
    }

    #[test]
    fn rank3_coloring_of_c6_is_not_coherent() {
        let colors = ColorMatrix::from_graph(&DenseGraph::cycle(6));
        let failure = verify_coherent(&colors).unwrap().unwrap_err();
        assert_eq!(failure.axiom, Axiom::ConstantIntersectionNumbers);
        let (a, b) = (failure.first, failure.second);
        assert_eq!(colors.get(a.0, a.1), colors.get(b.0, b.1));
    }

    #[test]
    fn diagonal_and_symmetry_failures() {
        // one color everywhere
        let flat = ColorMatrix::new(2, vec![0; 4]).unwrap();
        assert_eq!(
            verify_coherent(&flat).unwrap().unwrap_err().axiom,
            Axiom::DiagonalSeparation
        );
        // a 3-vertex coloring where color 1 holds (0,1),(1,0) and (0,2) only
        let c = ColorMatrix::new(3, vec![0, 1, 1, 1, 0, 2, 2, 2, 0]).unwrap();
        assert_eq!(
            verify_coherent(&c).unwrap().unwrap_err().axiom,
            Axiom::SymmetricOrAsymmetric
        );
    }

    #[test]
    fn expected_constants_spot_values() {
        let p = expected_constants(4).unwrap();
        assert_eq!(p[1][1][1], 14);
        assert_eq!(p[2][2][0], 120);
        assert_eq!(p[2][3][1], 64);
        let p2 = expected_constants(2).unwrap();
        assert_eq!(p2[2][2][2], 2);
        for m in 2..=6 {
            let p = expected_constants(m).unwrap();
            // summing over j gives the valency of relation i
            for k in 0..4 {
                for i in 0..4 {
                    let s: u64 = (0..4).map(|j| p[i][j][k]).sum();
                    let big = (1u64 << (m - 1)) * ((1 << m) - 1);
                    let valency = [1u64, (1 << m) - 1, big, big];
                    assert_eq!(s, valency[i], "m={m} i={i} k={k}");
                }
            }
        }
    }

    #[test]
    fn certificates_for_small_graphs() {
        let k4 = DenseGraph::complete(4);
        let cert = certify_orbitals(&k4, &GeneratorSet::trivial(4)).unwrap();
        assert_eq!(cert.verdict, Verdict::Inconclusive);
        assert_eq!((cert.wl_rank, cert.group_pair_orbits), (2, 16));
        let rot: Vec<u32> = (0..5).map(|i| (i + 1) % 5).collect();
        let refl: Vec<u32> = (0..5).map(|i| (5 - i) % 5).collect();
        let dihedral = GeneratorSet::from_permutations(5, vec![rot, refl]).unwrap();
        let cert = certify_orbitals(&DenseGraph::cycle(5), &dihedral).unwrap();
        assert_eq!(cert.verdict, Verdict::Certified);
        assert_eq!(cert.wl_rank, 3);
        let bad = GeneratorSet::from_permutations(5, vec![vec![1, 0, 2, 3, 4]]).unwrap();
        assert!(certify_orbitals(&DenseGraph::cycle(5), &bad).is_err());
    }

    /// The closure of a strongly regular graph stops at rank 3; the fourth
    /// orbital is separated by the local triangle profile.
    #[test]
    fn orbitals_of_gamma4() {
        let g = crate::family::build_gamma(4).unwrap();
        let cert = certify_orbitals(&g, &crate::groups::gm_generators(4).unwrap()).unwrap();
        assert_eq!(cert.verdict, Verdict::Certified);
        assert_eq!(
            (cert.wl_rank, cert.group_pair_orbits, cert.separated_orbits),
            (3, 4, 4)
        );
        let rho = crate::family::relation_coloring(crate::family::RelationFamily::Rho, 4).unwrap();
        assert!(cert.orbitals.same_partition(&rho));
    }

    #[test]
    fn homogeneity_of_c5() {
        let rot: Vec<u32> = (0..5).map(|i| (i + 1) % 5).collect();
        let refl: Vec<u32> = (0..5).map(|i| (5 - i) % 5).collect();
        let dihedral = GeneratorSet::from_permutations(5, vec![rot.clone(), refl]).unwrap();
        let colors = ColorMatrix::from_graph(&DenseGraph::cycle(5));
        assert!(homogeneity_degree(&colors, &dihedral, 2).unwrap().holds());
        let cyclic = GeneratorSet::from_permutations(5, vec![rot]).unwrap();
        let report = homogeneity_degree(&colors, &cyclic, 2).unwrap();
        assert!(!report.holds());
        assert!(homogeneity_degree(&colors, &dihedral, 4).is_err());
        assert!(homogeneity_degree(&colors, &dihedral, 3).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn closure_is_idempotent_coherent_refinement(seed in any::<u64>()) {
            let g = random_graph(20, seed);
            let input = ColorMatrix::from_graph(&g);
            let closed = wl_closure(&input).unwrap();
            prop_assert!(closed.refines(&input));
            prop_assert_eq!(wl_closure(&closed).unwrap(), closed.clone());
            prop_assert!(verify_coherent(&closed).unwrap().is_ok());
        }
    }
}
