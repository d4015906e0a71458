//! Acceptance run: one line per criterion. Criterion 11 is experimental and
//! does not affect the exit status.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use hireg::coherent::{
    certify_orbitals, expected_constants, homogeneity_degree, verify_coherent, wl_closure,
    ColorMatrix, Verdict,
};
use hireg::family::{
    build_gamma, build_gamma1, build_gamma_hat, build_upsilon, expected_parameters,
    relation_coloring, triangle_common_neighbors, triangle_profile, witness_triangle, ParameterRow,
    RelationFamily, UpsilonKind,
};
use hireg::gf2::{solve_symmetric_zero_diag, BitMatrix, BitVector};
use hireg::graphs::{decode_graph6, encode_graph6, DenseGraph};
use hireg::groups::{gm_generators, translation_generators, triple_orbit_count};
use hireg::partitions::{
    arc_count_from_partition, build_in, closed_form, verify_equitable, ProofCase,
};
use hireg::regularity::{
    check_mn_regularity, count_extensions, enumerate_graph_types, filter_types, type_closure,
    MnOptions, RegularityReport,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn theta(m: usize) -> u64 {
    1 << (m - 3)
}

fn criterion_1() -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    for m in 3..=5 {
        let t = theta(m);
        let want = (
            64 * t * t,
            4 * t * (8 * t - 1),
            4 * t * (4 * t - 1),
            4 * t * (4 * t - 1),
        );
        let (s, took) = timed(|| build_gamma(m).unwrap().srg_parameters());
        let got = s.map(|s| (s.v, s.k, s.lambda, s.mu));
        let budget = Duration::from_secs(if m <= 4 { 10 } else { 120 });
        pass &= got == Some(want) && took < budget;
        notes.push(format!("m={m} {got:?} in {:.2}s", took.as_secs_f64()));
    }
    for m in 3..=4 {
        let g = build_gamma(m).unwrap();
        for (row, which) in [(ParameterRow::Gamma1, 1), (ParameterRow::Gamma2, 2)] {
            let e = expected_parameters(m, row).unwrap();
            let got = g.subconstituent(0, which).unwrap().srg_parameters();
            pass &= got == Some(e.basic());
        }
        notes.push(format!("m={m} subconstituents checked"));
    }
    outcome(pass, notes.join("; "))
}

fn criterion_2() -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    for m in 3..=5 {
        let (cert, took) = timed(|| {
            certify_orbitals(&build_gamma(m).unwrap(), &gm_generators(m).unwrap()).unwrap()
        });
        let rho = relation_coloring(RelationFamily::Rho, m).unwrap();
        let ok = cert.verdict == Verdict::Certified
            && cert.orbitals.rank() == 4
            && cert.orbitals.same_partition(&rho)
            && (m < 5 || took < Duration::from_secs(900));
        pass &= ok;
        notes.push(format!(
            "m={m} {:?} (wl rank {}, {} group orbits, {} separated) in {:.2}s",
            cert.verdict,
            cert.wl_rank,
            cert.group_pair_orbits,
            cert.separated_orbits,
            took.as_secs_f64()
        ));
    }
    outcome(pass, notes.join("; "))
}

fn criterion_3() -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    for m in 3..=5 {
        let rho = relation_coloring(RelationFamily::Rho, m).unwrap();
        let table = expected_constants(m).unwrap();
        let matched = match verify_coherent(&rho).unwrap() {
            Ok(cfg) => (0..64)
                .filter(|c| {
                    cfg.constant(c / 16, c / 4 % 4, c % 4) == table[c / 16][c / 4 % 4][c % 4]
                })
                .count(),
            Err(_) => 0,
        };
        pass &= matched == 64;
        notes.push(format!("m={m} {matched}/64 cells"));
    }
    outcome(pass, notes.join("; "))
}

/// Distinct color patterns of ordered triples of distinct points.
fn realized_triple_patterns(c: &ColorMatrix) -> usize {
    let n = c.order();
    let mut seen = HashSet::new();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if x != y && y != z && x != z {
                    seen.insert([
                        c.get(x, y),
                        c.get(y, x),
                        c.get(x, z),
                        c.get(z, x),
                        c.get(y, z),
                        c.get(z, y),
                    ]);
                }
            }
        }
    }
    seen.len()
}

fn criterion_4() -> Outcome {
    let rho4 = relation_coloring(RelationFamily::Rho, 4).unwrap();
    let orbits = triple_orbit_count(4).unwrap();
    let patterns = realized_triple_patterns(&rho4);
    let mut pass = orbits == 21 && patterns == 21;
    let mut notes = vec![format!(
        "triple orbits {orbits}, realized patterns {patterns}"
    )];
    for m in 4..=5 {
        let rho = relation_coloring(RelationFamily::Rho, m).unwrap();
        let report = homogeneity_degree(&rho, &gm_generators(m).unwrap(), 3).unwrap();
        pass &= report.holds();
        let levels: Vec<String> = report
            .levels
            .iter()
            .map(|l| format!("{}/{}", l.orbits, l.patterns))
            .collect();
        notes.push(format!("m={m} orbits/patterns {}", levels.join(" ")));
    }
    outcome(pass, notes.join("; "))
}

fn criterion_5() -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    for m in 4..=5 {
        let a = build_upsilon(m, UpsilonKind::A).unwrap();
        let b = build_upsilon(m, UpsilonKind::B).unwrap();
        let pa = triangle_profile(&a.graph);
        let pb = triangle_profile(&b.graph);
        let w = witness_triangle(m)
            .unwrap()
            .map(|v| b.local_index(v).unwrap());
        let witness = triangle_common_neighbors(&b.graph, w[0], w[1], w[2]);
        let same_shape = a.graph.order() == b.graph.order()
            && (0..a.graph.order()).all(|v| a.graph.degree(v) == a.graph.degree(0))
            && (0..b.graph.order()).all(|v| b.graph.degree(v) == a.graph.degree(0));
        let t = theta(m) as usize;
        let constant = if pa.is_constant() { pa.min() } else { None };
        let mut ok =
            same_shape && constant == Some(t * (2 * t - 1)) && witness == t * (4 * t - 3) / 2;
        if m == 4 {
            ok &= constant == Some(6) && pb.min() == Some(5);
        } else {
            ok &= constant == Some(28) && witness == 26;
        }
        pass &= ok;
        notes.push(format!(
            "m={m} Υa constant {constant:?}, Υb min {:?}, witness triangle {witness}, equal order/valency {same_shape}",
            pb.min()
        ));
    }
    outcome(pass, notes.join("; "))
}

fn criterion_6() -> Outcome {
    let types = enumerate_graph_types(3, 5).unwrap();
    let kept = filter_types(&types, 3).unwrap();
    let all_k5 = kept.iter().all(|t| type_closure(t).is_complete());
    let (big, took) = timed(|| enumerate_graph_types(3, 7).unwrap().len());
    let pass = types.len() == 148
        && kept.len() == 4
        && all_k5
        && big == 20364
        && took < Duration::from_secs(1800);
    outcome(
        pass,
        format!(
            "(3,5): {} types, {} kept, closures K5 {all_k5}; (3,7): {big} types in {:.2}s",
            types.len(),
            kept.len(),
            took.as_secs_f64()
        ),
    )
}

fn value_of(reports: &[RegularityReport], case: ProofCase) -> Option<u64> {
    let code = case.graph_type().canonical_code();
    reports
        .iter()
        .find(|r| r.type_code == code)
        .and_then(|r| r.value())
}

fn criterion_7() -> Outcome {
    let g = build_gamma(4).unwrap();
    let gens = gm_generators(4).unwrap();
    let filtered = |gens| MnOptions {
        use_filter: true,
        gens,
    };
    let (ex, took) = timed(|| check_mn_regularity(&g, 3, 5, filtered(None)).unwrap());
    let (or, took_orbit) = timed(|| check_mn_regularity(&g, 3, 5, filtered(Some(&gens))).unwrap());
    let all_constant = ex.iter().chain(&or).all(|r| r.is_regular());
    let agree = ex.len() == or.len()
        && ex
            .iter()
            .zip(&or)
            .all(|(a, b)| a.type_code == b.type_code && a.value() == b.value());
    let t3 = value_of(&ex, ProofCase::T3Case1);
    let t4 = value_of(&ex, ProofCase::T4Case1);
    let pass = all_constant
        && agree
        && t3 == Some(336)
        && t4 == Some(192)
        && took < Duration::from_secs(600);
    outcome(
        pass,
        format!(
            "{} reports, all constant {all_constant}, modes agree {agree}, T3 {t3:?}, T4 {t4:?}; exhaustive {:.1}s, orbit {:.1}s",
            ex.len(),
            took.as_secs_f64(),
            took_orbit.as_secs_f64()
        ),
    )
}

fn criterion_8() -> Outcome {
    let g = build_gamma1(4).unwrap();
    let (reports, took) = timed(|| check_mn_regularity(&g, 2, 4, MnOptions::default()).unwrap());
    let all = reports.iter().all(|r| r.is_regular());
    outcome(
        all && took < Duration::from_secs(300),
        format!(
            "{} reports, all constant {all}, {:.1}s",
            reports.len(),
            took.as_secs_f64()
        ),
    )
}

fn criterion_9() -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    for m in 4..=5 {
        let gamma = build_gamma(m).unwrap();
        for case in ProofCase::ALL {
            let pp = build_in(&gamma, m, case).unwrap();
            let Ok(matrix) = verify_equitable(&pp.host, &pp.partition).unwrap() else {
                pass = false;
                notes.push(format!("m={m} {case:?} not equitable"));
                continue;
            };
            let arcs = arc_count_from_partition(&pp.partition.sizes(), &matrix).unwrap();
            let (sizes, closed) = closed_form(case, m);
            let closed_arcs = arc_count_from_partition(&sizes, &closed).unwrap();
            let direct = count_extensions(&gamma, &case.graph_type(), &pp.base).unwrap();
            let ok =
                matrix == pp.symbolic_matrix().unwrap() && arcs == closed_arcs && arcs == direct;
            pass &= ok;
            notes.push(format!("m={m} {case:?} arcs {arcs}"));
        }
    }
    outcome(pass, notes.join("; "))
}

fn criterion_10() -> Outcome {
    // symmetric solver against enumeration of all symmetric zero-diagonal matrices
    let mut solver_ok = true;
    for m in 1..=4 {
        let slots: Vec<(usize, usize)> = (0..m)
            .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
            .collect();
        let mats: Vec<BitMatrix> = (0u32..1 << slots.len())
            .map(|mask| {
                let mut s = BitMatrix::zero(m, m);
                for (k, &(i, j)) in slots.iter().enumerate() {
                    if mask >> k & 1 == 1 {
                        s.set(i, j, true);
                        s.set(j, i, true);
                    }
                }
                s
            })
            .collect();
        for u in 0..1u64 << m {
            for v in 0..1u64 << m {
                let (u, v) = (BitVector::new(m, u).unwrap(), BitVector::new(m, v).unwrap());
                let exists = mats.iter().any(|s| s.mul_vec(&u).unwrap() == v);
                let solved = solve_symmetric_zero_diag(&u, &v).unwrap();
                solver_ok &= solved.is_some() == exists;
                if let Some(s) = solved {
                    solver_ok &=
                        s.is_symmetric() && s.has_zero_diagonal() && s.mul_vec(&u).unwrap() == v;
                }
            }
        }
    }
    // WL refinement and idempotence on random graphs
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut wl_ok = true;
    for _ in 0..50 {
        let p: f64 = rng.gen_range(0.1..0.9);
        let mut draws = vec![false; 400];
        for d in draws.iter_mut() {
            *d = rng.gen_bool(p);
        }
        let g = DenseGraph::from_fn(20, |u, v| u < v && draws[u * 20 + v]);
        let start = ColorMatrix::from_graph(&g);
        let closure = wl_closure(&start).unwrap();
        wl_ok &= closure.refines(&start)
            && wl_closure(&closure).unwrap().same_partition(&closure)
            && verify_coherent(&closure).unwrap().is_ok();
    }
    // graph6 round trip for every labelled graph on at most 6 vertices
    let mut g6_ok = true;
    let mut graphs = 0usize;
    for n in 0..=6usize {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        for mask in 0u32..1 << pairs.len() {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            let g = DenseGraph::from_edges(n, &edges).unwrap();
            g6_ok &= decode_graph6(&encode_graph6(&g).unwrap()).unwrap() == g;
            graphs += 1;
        }
    }
    outcome(
        solver_ok && wl_ok && g6_ok,
        format!("solver {solver_ok}, WL on 50 graphs {wl_ok}, graph6 on {graphs} graphs {g6_ok}"),
    )
}

fn criterion_11() -> Outcome {
    let sigma = relation_coloring(RelationFamily::Sigma, 4).unwrap();
    let rank = verify_coherent(&sigma).unwrap().ok().map(|c| c.rank());
    let srg = build_gamma_hat(4).unwrap().srg_parameters();
    let g5 = build_gamma_hat(5).unwrap();
    let shifts = translation_generators(5).unwrap();
    let (reports, took) = timed(|| {
        check_mn_regularity(
            &g5,
            2,
            4,
            MnOptions {
                use_filter: false,
                gens: Some(&shifts),
            },
        )
    });
    let verdict = match &reports {
        Ok(r) => format!(
            "{} types, all constant {}",
            r.len(),
            r.iter().all(|x| x.is_regular())
        ),
        Err(e) => format!("error {e}"),
    };
    outcome(
        rank == Some(5) && srg.is_some() && reports.is_ok(),
        format!(
            "Ĉ(4) rank {rank:?}; Γ̂(4) srg {:?}; Γ̂(5) (2,4): {verdict} in {:.1}s",
            srg.map(|s| (s.v, s.k, s.lambda, s.mu)),
            took.as_secs_f64()
        ),
    )
}

fn main() {
    let criteria: [(usize, fn() -> Outcome); 11] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
        (11, criterion_11),
    ];
    let mut failed = Vec::new();
    for (id, run) in criteria {
        let (o, took) = timed(run);
        let experimental = id == 11;
        let tag = match (o.pass, experimental) {
            (true, _) => "PASS",
            (false, false) => "FAIL",
            (false, true) => "FAIL (experimental)",
        };
        println!(
            "criterion {id:>2}: {tag} [{:.1}s] {}",
            took.as_secs_f64(),
            o.detail
        );
        if !o.pass && !experimental {
            failed.push(id);
        }
    }
    println!("limitation: statements for all m are sampled at m in {{3, 4, 5}} only");
    if failed.is_empty() {
        println!("acceptance: all gating criteria pass");
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
