use hireg::graphs::{anchored_canonical_form, decode_graph6, encode_graph6, DenseGraph, VertexSet};
use hireg::Error;
use petgraph::graph::UnGraph;
use proptest::prelude::*;

fn random_graph(n: usize, bits: &[bool]) -> DenseGraph {
    let mut k = 0;
    DenseGraph::from_fn(n, |u, v| {
        if u < v {
            k += 1;
            bits[(k - 1) % bits.len()]
        } else {
            false
        }
    })
}

#[test]
fn graph6_known_strings() {
    assert_eq!(encode_graph6(&DenseGraph::complete(3)).unwrap(), "Bw");
    assert_eq!(encode_graph6(&DenseGraph::empty(1)).unwrap(), "@");
    assert_eq!(encode_graph6(&DenseGraph::empty(0)).unwrap(), "?");
    assert_eq!(decode_graph6("Bw").unwrap(), DenseGraph::complete(3));
    let p = DenseGraph::from_edges(5, &[(0, 1), (0, 2), (1, 2), (3, 4)]).unwrap();
    assert_eq!(decode_graph6(&encode_graph6(&p).unwrap()).unwrap(), p);
}

#[test]
fn graph6_malformed_input() {
    assert!(matches!(decode_graph6("B"), Err(Error::Parse { .. })));
    assert!(matches!(decode_graph6("B\u{7f}"), Err(Error::Parse { .. })));
    assert!(matches!(decode_graph6(""), Err(Error::Parse { .. })));
}

#[test]
fn graph6_exhaustive_small_orders() {
    for n in 0..=6usize {
        let pairs = n * n.saturating_sub(1) / 2;
        for mask in 0u32..1 << pairs {
            let bits: Vec<bool> = (0..pairs.max(1)).map(|i| mask >> i & 1 == 1).collect();
            let g = if pairs == 0 {
                DenseGraph::empty(n)
            } else {
                random_graph(n, &bits)
            };
            assert_eq!(decode_graph6(&encode_graph6(&g).unwrap()).unwrap(), g);
        }
    }
}

#[test]
fn srg_parameters_of_known_graphs() {
    let pentagon = DenseGraph::cycle(5).srg_parameters().unwrap();
    assert_eq!(
        (pentagon.v, pentagon.k, pentagon.lambda, pentagon.mu),
        (5, 2, 0, 1)
    );
    // Petersen graph: complement of the line graph of K5
    let pairs: Vec<(usize, usize)> = (0..5)
        .flat_map(|a| (a + 1..5).map(move |b| (a, b)))
        .collect();
    let petersen = DenseGraph::from_fn(10, |u, v| {
        let (a, b) = (pairs[u], pairs[v]);
        u != v && a.0 != b.0 && a.0 != b.1 && a.1 != b.0 && a.1 != b.1
    });
    let s = petersen.srg_parameters().unwrap();
    assert_eq!((s.v, s.k, s.lambda, s.mu), (10, 3, 0, 1));
    assert!(s.counting_identity_holds());
    assert!(DenseGraph::path(4).srg_parameters().is_none());
}

#[test]
fn connectivity_conventions() {
    assert_eq!(DenseGraph::complete(5).vertex_connectivity().unwrap(), 4);
    assert!(DenseGraph::complete(5).is_k_connected(5).unwrap());
    assert_eq!(DenseGraph::cycle(6).vertex_connectivity().unwrap(), 2);
    assert_eq!(DenseGraph::path(4).vertex_connectivity().unwrap(), 1);
    assert_eq!(DenseGraph::empty(3).vertex_connectivity().unwrap(), 0);
    assert!(matches!(
        DenseGraph::empty(40).vertex_connectivity(),
        Err(Error::Resource(_))
    ));
}

#[test]
fn canonical_form_order_limit() {
    assert!(matches!(
        anchored_canonical_form(&DenseGraph::empty(20), &[]),
        Err(Error::Resource(_))
    ));
}

proptest! {
    #[test]
    fn graph6_round_trip(n in 0usize..=40, bits in prop::collection::vec(any::<bool>(), 1..64)) {
        let g = random_graph(n, &bits);
        prop_assert_eq!(decode_graph6(&encode_graph6(&g).unwrap()).unwrap(), g);
    }

    #[test]
    fn components_agree_with_petgraph(n in 1usize..=10, bits in prop::collection::vec(any::<bool>(), 1..45)) {
        let g = random_graph(n, &bits);
        let mut pg = UnGraph::<(), ()>::new_undirected();
        let nodes: Vec<_> = (0..n).map(|_| pg.add_node(())).collect();
        for (u, v) in g.edges() {
            pg.add_edge(nodes[u], nodes[v], ());
        }
        let connected = petgraph::algo::connected_components(&pg) == 1;
        prop_assert_eq!(g.is_k_connected(1).unwrap(), connected || n == 1);
    }

    #[test]
    fn canonical_codes_are_label_invariant(n in 1usize..=7, bits in prop::collection::vec(any::<bool>(), 1..21), seed in any::<u64>()) {
        let g = random_graph(n, &bits);
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        // keep vertex 0 fixed so it can serve as an anchor
        let p0 = perm.iter().position(|&x| x == 0).unwrap();
        perm.swap(0, p0);
        let h = DenseGraph::from_fn(n, |u, v| g.has_edge(perm[u], perm[v]));
        let a = anchored_canonical_form(&g, &[0]).unwrap();
        let b = anchored_canonical_form(&h, &[0]).unwrap();
        prop_assert_eq!(a.code, b.code);
    }

    #[test]
    fn common_neighbours_by_definition(n in 1usize..=12, bits in prop::collection::vec(any::<bool>(), 1..66), pick in any::<u16>()) {
        let g = random_graph(n, &bits);
        let chosen: Vec<usize> = (0..n).filter(|i| pick >> i & 1 == 1).collect();
        let set = VertexSet::from_indices(n, &chosen).unwrap();
        let common = g.common_neighbors(&set).unwrap();
        for v in 0..n {
            let direct = chosen.iter().all(|&c| g.has_edge(c, v));
            prop_assert_eq!(common.contains(v), direct);
        }
    }
}
