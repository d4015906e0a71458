//! Graph types, their enumeration up to anchored isomorphism, and
//! verification of type regularity by counting induced extensions.
//!
//! A type `(Θ, anchors)` is regular in a host `G` when every induced
//! embedding `κ` of the anchored subgraph `Δ` extends to the same number of
//! induced embeddings of `Θ`.

use std::ops::ControlFlow;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{argument, resource, Result};
use crate::graphs::canon::{code_bytes, is_canonical_small, SmallGraph};
use crate::graphs::{anchored_canonical_form, DenseGraph};
use crate::groups::{self, Domain, GeneratorSet};

/// Largest type order accepted by the enumeration.
pub const MAX_TYPE_ORDER: usize = 7;

/// A graph `Θ` with an ordered list of distinct anchor vertices; `Δ` is the
/// subgraph induced on the anchors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GraphType {
    theta: DenseGraph,
    anchors: Vec<usize>,
}

impl GraphType {
    pub fn new(theta: DenseGraph, anchors: Vec<usize>) -> Result<Self> {
        let n = theta.order();
        if n > crate::graphs::MAX_CANON_ORDER {
            return Err(argument(format!("type order {n} too large")));
        }
        let mut seen = vec![false; n];
        for &a in &anchors {
            if a >= n || std::mem::replace(&mut seen[a], true) {
                return Err(argument(format!("anchor {a} repeated or out of range")));
            }
        }
        Ok(GraphType { theta, anchors })
    }

    pub fn theta(&self) -> &DenseGraph {
        &self.theta
    }

    pub fn anchors(&self) -> &[usize] {
        &self.anchors
    }

    /// `(m, n)`: number of anchors and order of `Θ`.
    pub fn order(&self) -> (usize, usize) {
        (self.anchors.len(), self.theta.order())
    }

    pub fn delta(&self) -> DenseGraph {
        self.theta.induced_on(&self.anchors).0
    }

    pub fn non_anchors(&self) -> Vec<usize> {
        (0..self.theta.order())
            .filter(|v| !self.anchors.contains(v))
            .collect()
    }

    /// Code shared exactly by the types isomorphic to this one via a map
    /// sending anchors onto anchors.
    pub fn canonical_code(&self) -> Vec<u8> {
        anchored_canonical_form(&self.theta, &self.anchors)
            .expect("validated at construction")
            .code
    }

    /// `graph6` of `Θ` followed by the anchor list, e.g. `DUW 0,1,2`.
    pub fn record(&self) -> String {
        let anchors: Vec<String> = self.anchors.iter().map(|a| a.to_string()).collect();
        format!(
            "{} {}",
            self.theta.to_graph6().expect("small"),
            anchors.join(",")
        )
    }
}

/// All types of order `(m, n)` up to anchored isomorphism, anchors at
/// `0..m`, sorted by canonical code.
pub fn enumerate_graph_types(m: usize, n: usize) -> Result<Vec<GraphType>> {
    if n > MAX_TYPE_ORDER {
        return Err(resource(format!(
            "type enumeration limited to order {MAX_TYPE_ORDER}"
        )));
    }
    if m > n {
        return Err(argument(format!("m = {m} exceeds n = {n}")));
    }
    let pairs = n * n.saturating_sub(1) / 2;
    let mut canonical: Vec<u128> = (0..1u64 << pairs)
        .into_par_iter()
        .filter_map(|mask| {
            let g = SmallGraph::from_pair_mask(n, mask as u128);
            is_canonical_small(&g, m).then(|| g.code())
        })
        .collect();
    canonical.sort_unstable();
    canonical
        .into_iter()
        .map(|code| {
            // the code lists pairs column by column, first pair most significant
            let mut mask = 0u128;
            for idx in 0..pairs {
                if code >> (pairs - 1 - idx) & 1 == 1 {
                    mask |= 1 << idx;
                }
            }
            GraphType::new(
                SmallGraph::from_pair_mask(n, mask).to_dense(),
                (0..m).collect(),
            )
        })
        .collect()
}

/// `Θ` with every pair of anchors joined.
pub fn type_closure(t: &GraphType) -> DenseGraph {
    let th = &t.theta;
    DenseGraph::from_fn(th.order(), |u, v| {
        th.has_edge(u, v) || (t.anchors.contains(&u) && t.anchors.contains(&v))
    })
}

/// Types whose closure is `(m + 1)`-connected, complete graphs `K_n`
/// counting as `n`-connected.
pub fn filter_types(types: &[GraphType], m: usize) -> Result<Vec<GraphType>> {
    let mut out = Vec::new();
    for t in types {
        if type_closure(t).is_k_connected(m + 1)? {
            out.push(t.clone());
        }
    }
    Ok(out)
}

/// Placement order and constraints for matching a pattern graph into a host.
#[derive(Clone, Debug)]
struct Plan {
    /// For each level, earlier levels whose images must be adjacent, and
    /// those whose images must not be.
    adjacent: Vec<Vec<usize>>,
    apart: Vec<Vec<usize>>,
}

impl Plan {
    fn new(pattern: &DenseGraph, order: &[usize]) -> Self {
        let mut adjacent = Vec::new();
        let mut apart = Vec::new();
        for (lvl, &p) in order.iter().enumerate() {
            let (a, b): (Vec<usize>, Vec<usize>) =
                (0..lvl).partition(|&e| pattern.has_edge(order[e], p));
            adjacent.push(a);
            apart.push(b);
        }
        Plan { adjacent, apart }
    }

    fn levels(&self) -> usize {
        self.adjacent.len()
    }
}

/// Backtracking over a [`Plan`] with bitset candidate sets.
struct Matcher<'a> {
    g: &'a DenseGraph,
    plan: Plan,
    words: usize,
    tail: u64,
}

impl<'a> Matcher<'a> {
    fn new(g: &'a DenseGraph, plan: Plan) -> Self {
        let n = g.order();
        let tail = if n.is_multiple_of(64) {
            u64::MAX
        } else {
            (1u64 << (n % 64)) - 1
        };
        Matcher {
            g,
            plan,
            words: g.words_per_row(),
            tail,
        }
    }

    fn candidates(&self, level: usize, images: &[usize], out: &mut [u64]) {
        out.fill(u64::MAX);
        if let Some(last) = out.last_mut() {
            *last = self.tail;
        }
        for &e in &self.plan.adjacent[level] {
            for (o, r) in out.iter_mut().zip(self.g.row(images[e])) {
                *o &= r;
            }
        }
        for &e in &self.plan.apart[level] {
            for (o, r) in out.iter_mut().zip(self.g.row(images[e])) {
                *o &= !r;
            }
        }
        for &v in &images[..level] {
            out[v / 64] &= !(1 << (v % 64));
        }
    }

    fn scratch(&self) -> Vec<u64> {
        vec![0; self.plan.levels() * self.words]
    }

    /// Completions of `images[..level]` to all levels. `scratch` starts at
    /// this level's buffer.
    fn count_from(&self, level: usize, images: &mut Vec<usize>, scratch: &mut [u64]) -> u64 {
        let levels = self.plan.levels();
        if level == levels {
            return 1;
        }
        let (buf, rest) = scratch.split_at_mut(self.words);
        self.candidates(level, images, buf);
        if level + 1 == levels {
            return buf.iter().map(|x| x.count_ones() as u64).sum();
        }
        let mut total = 0;
        for (wi, &word) in buf.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let v = wi * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                images.truncate(level);
                images.push(v);
                total += self.count_from(level + 1, images, rest);
            }
        }
        images.truncate(level);
        total
    }

    /// Visits every completion of `images[..level]` in lexicographic order.
    fn for_each_from(
        &self,
        level: usize,
        images: &mut Vec<usize>,
        scratch: &mut [u64],
        f: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if level == self.plan.levels() {
            return f(images);
        }
        let (buf, rest) = scratch.split_at_mut(self.words);
        self.candidates(level, images, buf);
        for (wi, &word) in buf.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let v = wi * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                images.truncate(level);
                images.push(v);
                self.for_each_from(level + 1, images, rest, f)?;
            }
        }
        images.truncate(level);
        ControlFlow::Continue(())
    }
}

/// Counts extensions of embeddings of `Δ` to embeddings of `Θ` in a fixed
/// host. Non-anchor vertices are placed in order of descending degree in
/// `Θ` (ties by index).
pub struct ExtensionCounter<'a> {
    matcher: Matcher<'a>,
    delta: DenseGraph,
    m: usize,
}

impl<'a> ExtensionCounter<'a> {
    pub fn new(g: &'a DenseGraph, t: &GraphType) -> Self {
        let mut rest = t.non_anchors();
        rest.sort_by_key(|&v| (std::cmp::Reverse(t.theta.degree(v)), v));
        let order: Vec<usize> = t.anchors.iter().copied().chain(rest).collect();
        ExtensionCounter {
            matcher: Matcher::new(g, Plan::new(&t.theta, &order)),
            delta: t.delta(),
            m: t.anchors.len(),
        }
    }

    /// `true` iff `kappa` is an induced embedding of `Δ`.
    pub fn is_embedding(&self, kappa: &[usize]) -> bool {
        let g = self.matcher.g;
        kappa.len() == self.m
            && kappa.iter().all(|&v| v < g.order())
            && (0..self.m).all(|i| {
                (i + 1..self.m).all(|j| {
                    kappa[i] != kappa[j]
                        && g.has_edge(kappa[i], kappa[j]) == self.delta.has_edge(i, j)
                })
            })
    }

    pub fn count(&self, kappa: &[usize]) -> Result<u64> {
        if !self.is_embedding(kappa) {
            return Err(argument(format!(
                "{kappa:?} is not an induced embedding of the anchored subgraph"
            )));
        }
        Ok(self.count_unchecked(kappa))
    }

    fn count_unchecked(&self, kappa: &[usize]) -> u64 {
        let mut images = kappa.to_vec();
        let mut scratch = self.matcher.scratch();
        self.matcher.count_from(
            self.m,
            &mut images,
            &mut scratch[self.m * self.matcher.words..],
        )
    }
}

/// Number of ways to complete `kappa` to an induced embedding of `Θ`.
pub fn count_extensions(g: &DenseGraph, t: &GraphType, kappa: &[usize]) -> Result<u64> {
    ExtensionCounter::new(g, t).count(kappa)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RegularityStatus {
    /// Every embedding of `Δ` extends the same number of times.
    Constant { value: u64 },
    /// Two embeddings with different extension counts.
    Violated {
        first: Vec<usize>,
        first_count: u64,
        second: Vec<usize>,
        second_count: u64,
    },
    /// `Δ` does not embed; the count is taken to be zero.
    VacuousZero,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeTag {
    Exhaustive,
    OrbitReduced,
}

/// How embeddings of `Δ` are enumerated.
#[derive(Clone, Copy, Debug)]
pub enum Mode<'g> {
    /// Every embedding.
    Exhaustive,
    /// One embedding per orbit of a group of automorphisms.
    OrbitReduced(&'g GeneratorSet),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularityReport {
    pub type_code: Vec<u8>,
    pub record: String,
    pub order: [usize; 2],
    pub status: RegularityStatus,
    pub mode: ModeTag,
    /// Embeddings of `Δ` whose extensions were counted.
    pub embeddings: u64,
}

#[derive(Serialize)]
struct Witness<'a> {
    kappa: &'a [usize],
    count: u64,
}

impl Serialize for RegularityReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let code: String = self.type_code.iter().map(|b| format!("{b:02x}")).collect();
        let (status, witnesses) = match &self.status {
            RegularityStatus::Constant { .. } => ("constant", Vec::new()),
            RegularityStatus::VacuousZero => ("vacuous", Vec::new()),
            RegularityStatus::Violated {
                first,
                first_count,
                second,
                second_count,
            } => (
                "violated",
                vec![
                    Witness {
                        kappa: first,
                        count: *first_count,
                    },
                    Witness {
                        kappa: second,
                        count: *second_count,
                    },
                ],
            ),
        };
        serde_json::json!({
            "type": code,
            "record": self.record,
            "order": self.order,
            "status": status,
            "value": self.value(),
            "witnesses": witnesses,
            "mode": self.mode,
            "embeddings": self.embeddings,
        })
        .serialize(s)
    }
}

impl RegularityReport {
    pub fn is_regular(&self) -> bool {
        !matches!(self.status, RegularityStatus::Violated { .. })
    }

    pub fn value(&self) -> Option<u64> {
        match self.status {
            RegularityStatus::Constant { value } => Some(value),
            RegularityStatus::VacuousZero => Some(0),
            RegularityStatus::Violated { .. } => None,
        }
    }
}

/// Largest host accepted by the exhaustive mode.
pub const MAX_EXHAUSTIVE_HOST: usize = 1024;

pub fn check_type_regularity(
    g: &DenseGraph,
    t: &GraphType,
    mode: Mode,
) -> Result<RegularityReport> {
    let (m, n) = t.order();
    let counter = ExtensionCounter::new(g, t);
    let (status, embeddings, tag) = match mode {
        Mode::Exhaustive => {
            if g.order() > MAX_EXHAUSTIVE_HOST {
                return Err(resource(format!(
                    "exhaustive mode limited to hosts of order {MAX_EXHAUSTIVE_HOST}"
                )));
            }
            let (s, e) = exhaustive(g, t, &counter);
            (s, e, ModeTag::Exhaustive)
        }
        Mode::OrbitReduced(gens) => {
            if !gens.preserves_graph(g) {
                return Err(argument("generators do not preserve the host graph"));
            }
            let reps = embedding_representatives(gens, m)?;
            let mut first: Option<(Vec<usize>, u64)> = None;
            let mut status = None;
            let mut count = 0;
            for kappa in reps.iter().filter(|k| counter.is_embedding(k)) {
                count += 1;
                let c = counter.count_unchecked(kappa);
                match &first {
                    None => first = Some((kappa.clone(), c)),
                    Some((k0, c0)) if *c0 != c => {
                        status = Some(RegularityStatus::Violated {
                            first: k0.clone(),
                            first_count: *c0,
                            second: kappa.clone(),
                            second_count: c,
                        });
                        break;
                    }
                    _ => {}
                }
            }
            let status = status.unwrap_or(match first {
                None => RegularityStatus::VacuousZero,
                Some((_, value)) => RegularityStatus::Constant { value },
            });
            (status, count, ModeTag::OrbitReduced)
        }
    };
    Ok(RegularityReport {
        type_code: t.canonical_code(),
        record: t.record(),
        order: [m, n],
        status,
        mode: tag,
        embeddings,
    })
}

/// Every embedding of `Δ` in lexicographic order. The witness pair of a
/// violation is the lexicographically first embedding and the first one
/// after it with a different count, independent of scheduling.
fn exhaustive(
    g: &DenseGraph,
    t: &GraphType,
    counter: &ExtensionCounter,
) -> (RegularityStatus, u64) {
    let delta = t.delta();
    let m = delta.order();
    let lex = Matcher::new(g, Plan::new(&delta, &(0..m).collect::<Vec<_>>()));
    let mut first: Option<Vec<usize>> = None;
    {
        let mut images = Vec::new();
        let mut scratch = lex.scratch();
        let _ = lex.for_each_from(0, &mut images, &mut scratch, &mut |k| {
            first = Some(k.to_vec());
            ControlFlow::Break(())
        });
    }
    let Some(first) = first else {
        return (RegularityStatus::VacuousZero, 0);
    };
    let reference = counter.count_unchecked(&first);
    if m == 0 {
        return (RegularityStatus::Constant { value: reference }, 1);
    }
    let lowest_bad = AtomicUsize::new(usize::MAX);
    let chunks: Vec<(u64, Option<(Vec<usize>, u64)>)> = (0..g.order())
        .into_par_iter()
        .map(|v0| {
            if v0 > lowest_bad.load(Ordering::Relaxed) {
                return (0, None);
            }
            let mut images = vec![v0];
            let mut scratch = lex.scratch();
            let mut ext_scratch = counter.matcher.scratch();
            let mut seen = 0u64;
            let mut bad = None;
            let _ = lex.for_each_from(1, &mut images, &mut scratch[lex.words..], &mut |k| {
                seen += 1;
                let mut im = k.to_vec();
                let c = counter.matcher.count_from(
                    m,
                    &mut im,
                    &mut ext_scratch[m * counter.matcher.words..],
                );
                if c != reference {
                    bad = Some((k.to_vec(), c));
                    lowest_bad.fetch_min(v0, Ordering::Relaxed);
                    return ControlFlow::Break(());
                }
                ControlFlow::Continue(())
            });
            (seen, bad)
        })
        .collect();
    let total = chunks.iter().map(|c| c.0).sum();
    match chunks.into_iter().find_map(|c| c.1) {
        Some((second, c)) => (
            RegularityStatus::Violated {
                first,
                first_count: reference,
                second,
                second_count: c,
            },
            total,
        ),
        None => (RegularityStatus::Constant { value: reference }, total),
    }
}

/// One ordered `k`-tuple of distinct vertices per orbit of the group.
/// Triples are reduced to pairs with the first point at zero, which needs an
/// affine group containing all translations.
pub fn embedding_representatives(gens: &GeneratorSet, k: usize) -> Result<Vec<Vec<usize>>> {
    let n = gens.degree();
    let firsts = |p: &groups::OrbitPartition| -> Vec<usize> {
        let mut seen = vec![false; p.count];
        let mut out = Vec::new();
        for (e, &l) in p.labels.iter().enumerate() {
            if l != groups::OrbitPartition::EXCLUDED
                && !std::mem::replace(&mut seen[l as usize], true)
            {
                out.push(e);
            }
        }
        out
    };
    match k {
        0 => Ok(vec![Vec::new()]),
        1 => {
            let p = groups::orbits(gens, Domain::Points, None)?;
            Ok(firsts(&p).into_iter().map(|v| vec![v]).collect())
        }
        2 => {
            let off_diag = move |e: usize| e / n != e % n;
            let p = groups::orbits(gens, Domain::Pairs, Some(&off_diag))?;
            Ok(firsts(&p).into_iter().map(|e| vec![e / n, e % n]).collect())
        }
        3 => {
            let stab = gens.zero_stabilizer().ok_or_else(|| {
                argument("triple reduction needs an affine group containing all translations")
            })?;
            let p = groups::pair_orbits_off_zero(&stab)?;
            Ok(firsts(&p)
                .into_iter()
                .map(|e| vec![0, e / n, e % n])
                .collect())
        }
        _ => Err(argument(format!(
            "orbit reduction supports at most 3 anchors, got {k}"
        ))),
    }
}

/// Options for [`check_mn_regularity`].
#[derive(Clone, Copy, Debug, Default)]
pub struct MnOptions<'g> {
    /// Only check types whose closure is `(k + 1)`-connected.
    pub use_filter: bool,
    /// Check one embedding per orbit of this group instead of all.
    pub gens: Option<&'g GeneratorSet>,
}

/// Regularity for every type of order `(k, l)` with `1 <= k <= m` and
/// `k < l <= n` (types with `l = k` are trivially regular with count 1).
pub fn check_mn_regularity(
    g: &DenseGraph,
    m: usize,
    n: usize,
    opts: MnOptions,
) -> Result<Vec<RegularityReport>> {
    if m > n || n > MAX_TYPE_ORDER {
        return Err(argument(format!("order ({m}, {n}) out of range")));
    }
    let mode = match opts.gens {
        Some(gens) => Mode::OrbitReduced(gens),
        None => Mode::Exhaustive,
    };
    let mut reports = Vec::new();
    for k in 1..=m {
        for l in k + 1..=n {
            let mut types = enumerate_graph_types(k, l)?;
            if opts.use_filter {
                types = filter_types(&types, k)?;
            }
            for t in &types {
                reports.push(check_type_regularity(g, t, mode)?);
            }
        }
    }
    Ok(reports)
}

/// Canonical code bytes of an anchored graph given as a pair mask; exposed
/// for the enumeration tests.
#[doc(hidden)]
pub fn code_of_mask(n: usize, m: usize, mask: u128) -> Vec<u8> {
    let g = SmallGraph::from_pair_mask(n, mask);
    code_bytes(n, m, crate::graphs::canon::canonical_small(&g, m).0)
}
