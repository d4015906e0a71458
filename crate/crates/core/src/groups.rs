//! Affine groups on GF(2)^{2m} given by generators, and their orbits on
//! points and ordered pairs.
//!
//! Groups are never enumerated. Each generator is turned into a permutation
//! of the point set once, and orbits are closed with union-find.

use petgraph::unionfind::UnionFind;

use crate::coherent::ColorMatrix;
use crate::error::{argument, resource, Result};
use crate::gf2::{BitMatrix, BitVector};

/// Largest domain (points or pairs) an orbit computation will allocate.
pub const MAX_ORBIT_DOMAIN: usize = 1 << 20;

/// `v -> A v + w`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineMap {
    matrix: BitMatrix,
    translation: BitVector,
}

impl AffineMap {
    pub fn new(matrix: BitMatrix, translation: BitVector) -> Result<Self> {
        if !matrix.is_square() || matrix.cols() != translation.len() {
            return Err(argument(
                "affine map needs a square matrix matching the translation",
            ));
        }
        if matrix.inverse()?.is_none() {
            return Err(argument("affine map matrix is singular"));
        }
        Ok(AffineMap {
            matrix,
            translation,
        })
    }

    pub fn linear(matrix: BitMatrix) -> Result<Self> {
        let n = matrix.cols();
        Self::new(matrix, BitVector::zero(n))
    }

    pub fn translation_by(w: BitVector) -> Self {
        AffineMap {
            matrix: BitMatrix::identity(w.len()),
            translation: w,
        }
    }

    pub fn dimension(&self) -> usize {
        self.translation.len()
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.matrix
    }

    pub fn translation(&self) -> &BitVector {
        &self.translation
    }

    pub fn is_linear(&self) -> bool {
        self.translation.is_zero()
    }

    #[inline]
    pub(crate) fn apply_word(&self, v: u64) -> u64 {
        self.matrix.apply_word(v) ^ self.translation.bits()
    }

    pub fn apply(&self, v: &BitVector) -> Result<BitVector> {
        self.matrix.mul_vec(v)?.add(&self.translation)
    }

    pub fn inverse(&self) -> AffineMap {
        let inv = self
            .matrix
            .inverse()
            .ok()
            .flatten()
            .expect("invertible by construction");
        let w = inv.mul_vec(&self.translation).expect("dimensions agree");
        AffineMap {
            matrix: inv,
            translation: w,
        }
    }

    /// The map as a permutation of `0..2^dim`.
    pub fn point_permutation(&self) -> Vec<u32> {
        (0..1u64 << self.dimension())
            .map(|v| self.apply_word(v) as u32)
            .collect()
    }
}

/// A permutation group given by generators, each stored as a permutation of
/// its point set. Affine generator sets also keep the maps themselves.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    degree: usize,
    m: Option<usize>,
    maps: Vec<AffineMap>,
    perms: Vec<Vec<u32>>,
}

fn check_m(m: usize) -> Result<()> {
    if !(2..=6).contains(&m) {
        return Err(argument(format!("m = {m} outside 2..=6")));
    }
    Ok(())
}

impl GeneratorSet {
    /// Generators acting on GF(2)^{2m}, vertex `i` being the vector with bits `i`.
    pub fn from_affine(m: usize, maps: Vec<AffineMap>) -> Result<Self> {
        check_m(m)?;
        if maps.iter().any(|a| a.dimension() != 2 * m) {
            return Err(argument("affine map dimension differs from 2m"));
        }
        let perms = maps.iter().map(AffineMap::point_permutation).collect();
        Ok(GeneratorSet {
            degree: 1 << (2 * m),
            m: Some(m),
            maps,
            perms,
        })
    }

    /// Generators given directly as permutations of `0..degree`.
    pub fn from_permutations(degree: usize, perms: Vec<Vec<u32>>) -> Result<Self> {
        for p in &perms {
            if p.len() != degree {
                return Err(argument("permutation length differs from degree"));
            }
            let mut seen = vec![false; degree];
            for &x in p {
                let x = x as usize;
                if x >= degree || std::mem::replace(&mut seen[x], true) {
                    return Err(argument("generator is not a permutation"));
                }
            }
        }
        Ok(GeneratorSet {
            degree,
            m: None,
            maps: Vec::new(),
            perms,
        })
    }

    pub fn trivial(degree: usize) -> Self {
        GeneratorSet {
            degree,
            m: None,
            maps: Vec::new(),
            perms: Vec::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn m(&self) -> Option<usize> {
        self.m
    }

    pub fn len(&self) -> usize {
        self.perms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perms.is_empty()
    }

    pub fn permutations(&self) -> &[Vec<u32>] {
        &self.perms
    }

    pub fn affine_maps(&self) -> &[AffineMap] {
        &self.maps
    }

    /// For an affine set that contains every translation, the stabilizer of
    /// the zero vector: the group generated by the linear parts.
    pub fn zero_stabilizer(&self) -> Option<GeneratorSet> {
        let m = self.m?;
        let shifts: Vec<u64> = self
            .maps
            .iter()
            .filter(|a| a.matrix == BitMatrix::identity(2 * m))
            .map(|a| a.translation.bits())
            .collect();
        let span = BitMatrix::from_rows(2 * m, shifts).ok()?.rank();
        if span != 2 * m {
            return None;
        }
        let linear = self
            .maps
            .iter()
            .filter(|a| a.matrix != BitMatrix::identity(2 * m))
            .map(|a| AffineMap::linear(a.matrix.clone()))
            .collect::<Result<Vec<_>>>()
            .ok()?;
        GeneratorSet::from_affine(m, linear).ok()
    }

    /// `true` iff every generator maps edges to edges.
    pub fn preserves_graph(&self, g: &crate::graphs::DenseGraph) -> bool {
        g.order() == self.degree
            && self.perms.iter().all(|p| {
                g.edges()
                    .iter()
                    .all(|&(u, v)| g.has_edge(p[u] as usize, p[v] as usize))
            })
    }
}

/// The standard generators of the stabilizer `H_m` of the zero vector in
/// the isometry group of the hyperbolic form: `diag(A, (A^T)^{-1})` for a
/// transvection and the cyclic permutation generating `GL(m, 2)`, and
/// `[[I, S], [O, I]]` for each elementary symmetric zero-diagonal `S`.
pub fn hm_generators(m: usize) -> Result<GeneratorSet> {
    check_m(m)?;
    let id = BitMatrix::identity(m);
    let zero = BitMatrix::zero(m, m);
    let mut transvection = id.clone();
    transvection.set(0, 1, true);
    let mut cycle = BitMatrix::zero(m, m);
    for i in 0..m {
        cycle.set((i + 1) % m, i, true);
    }
    let mut maps = Vec::new();
    for a in [transvection, cycle] {
        let a_inv_t = a.transpose().inverse()?.expect("invertible");
        maps.push(AffineMap::linear(BitMatrix::from_blocks(
            &a, &zero, &zero, &a_inv_t,
        )?)?);
    }
    for i in 0..m {
        for j in i + 1..m {
            let mut s = BitMatrix::zero(m, m);
            s.set(i, j, true);
            s.set(j, i, true);
            maps.push(AffineMap::linear(BitMatrix::from_blocks(
                &id, &s, &zero, &id,
            )?)?);
        }
    }
    GeneratorSet::from_affine(m, maps)
}

/// `hm_generators(m)` together with the `2m` unit translations.
pub fn gm_generators(m: usize) -> Result<GeneratorSet> {
    let mut maps = hm_generators(m)?.maps;
    for i in 0..2 * m {
        maps.push(AffineMap::translation_by(BitVector::unit(2 * m, i)));
    }
    GeneratorSet::from_affine(m, maps)
}

/// The `2m` unit translations; automorphisms of every Cayley graph on
/// GF(2)^{2m}.
pub fn translation_generators(m: usize) -> Result<GeneratorSet> {
    check_m(m)?;
    let maps = (0..2 * m)
        .map(|i| AffineMap::translation_by(BitVector::unit(2 * m, i)))
        .collect();
    GeneratorSet::from_affine(m, maps)
}

/// What the group acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    Points,
    /// Ordered pairs `(x, y)`, indexed as `x * degree + y`.
    Pairs,
}

/// Orbit labels of a domain: `labels[e]` is the orbit index of element `e`
/// (`u32::MAX` for elements excluded by the filter). Orbits are numbered in
/// order of their smallest element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitPartition {
    pub labels: Vec<u32>,
    pub count: usize,
}

impl OrbitPartition {
    pub const EXCLUDED: u32 = u32::MAX;

    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.count];
        for (e, &l) in self.labels.iter().enumerate() {
            if l != Self::EXCLUDED {
                out[l as usize].push(e);
            }
        }
        out
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.count];
        for &l in &self.labels {
            if l != Self::EXCLUDED {
                out[l as usize] += 1;
            }
        }
        out
    }
}

/// Orbits of the group on `domain`, restricted to elements accepted by
/// `filter`. The filtered set must be invariant under the generators.
pub fn orbits(
    gens: &GeneratorSet,
    domain: Domain,
    filter: Option<&(dyn Fn(usize) -> bool + Sync)>,
) -> Result<OrbitPartition> {
    let n = gens.degree;
    let size = match domain {
        Domain::Points => n,
        Domain::Pairs => n.saturating_mul(n),
    };
    if size > MAX_ORBIT_DOMAIN {
        return Err(resource(format!(
            "orbit domain of {size} elements exceeds {MAX_ORBIT_DOMAIN}"
        )));
    }
    let keep = |e: usize| filter.is_none_or(|f| f(e));
    let mut uf = UnionFind::<u32>::new(size);
    for p in &gens.perms {
        for e in 0..size {
            if !keep(e) {
                continue;
            }
            let image = match domain {
                Domain::Points => p[e] as usize,
                Domain::Pairs => p[e / n] as usize * n + p[e % n] as usize,
            };
            if !keep(image) {
                return Err(argument(
                    "filtered domain is not invariant under the generators",
                ));
            }
            uf.union(e as u32, image as u32);
        }
    }
    let mut root_label = vec![OrbitPartition::EXCLUDED; size];
    let mut labels = vec![OrbitPartition::EXCLUDED; size];
    let mut count = 0u32;
    for e in 0..size {
        if !keep(e) {
            continue;
        }
        let r = uf.find_mut(e as u32) as usize;
        if root_label[r] == OrbitPartition::EXCLUDED {
            root_label[r] = count;
            count += 1;
        }
        labels[e] = root_label[r];
    }
    Ok(OrbitPartition {
        labels,
        count: count as usize,
    })
}

/// Orbits of `H_m` on ordered pairs of distinct nonzero vectors. Since the
/// full group is translations extended by `H_m`, this equals the number of
/// orbits of `G_m` on ordered triples of distinct vectors (the first entry
/// moved to zero).
pub fn triple_orbit_count(m: usize) -> Result<usize> {
    if !(2..=5).contains(&m) {
        return Err(argument(format!("m = {m} outside 2..=5")));
    }
    pair_orbits_off_zero(&hm_generators(m)?).map(|p| p.count)
}

/// Orbits on `{(y, z) : y, z != 0, y != z}`, pairs indexed as in
/// [`Domain::Pairs`].
pub fn pair_orbits_off_zero(stabilizer: &GeneratorSet) -> Result<OrbitPartition> {
    let n = stabilizer.degree;
    let filter = move |e: usize| {
        let (y, z) = (e / n, e % n);
        y != 0 && z != 0 && y != z
    };
    orbits(stabilizer, Domain::Pairs, Some(&filter))
}

/// `true` iff the permutation preserves every pair color.
pub fn preserves_colors(perm: &[u32], colors: &ColorMatrix) -> bool {
    let n = colors.order();
    perm.len() == n
        && (0..n).all(|x| {
            let px = perm[x] as usize;
            (0..n).all(|y| colors.get(px, perm[y] as usize) == colors.get(x, y))
        })
}

/// `true` iff the affine map preserves every pair color of a coloring on
/// GF(2)^{2m}.
pub fn preserves_relations(map: &AffineMap, colors: &ColorMatrix) -> bool {
    colors.order() == 1 << map.dimension() && preserves_colors(&map.point_permutation(), colors)
}
