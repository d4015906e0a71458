mod common;

use hireg::family::{build_gamma, relation_coloring, RelationFamily};
use hireg::gf2::BitVector;
use hireg::groups::{
    gm_generators, hm_generators, orbits, preserves_colors, translation_generators,
    triple_orbit_count, AffineMap, Domain, GeneratorSet,
};
use proptest::prelude::*;

#[test]
fn generators_are_automorphisms() {
    for m in 2..=5 {
        let gens = gm_generators(m).unwrap();
        assert!(gens.preserves_graph(&build_gamma(m).unwrap()), "m = {m}");
        let rho = relation_coloring(RelationFamily::Rho, m).unwrap();
        assert!(gens
            .permutations()
            .iter()
            .all(|p| preserves_colors(p, &rho)));
    }
}

#[test]
fn stabilizer_order() {
    for m in 2..=4 {
        let order = common::linear_group_order(&hm_generators(m).unwrap());
        assert_eq!(order, common::hm_order_formula(m), "m = {m}");
    }
    assert_eq!(common::hm_order_formula(4), 1_290_240);
}

#[test]
fn orbit_counts_on_points_and_pairs() {
    for m in 2..=4 {
        let gens = gm_generators(m).unwrap();
        assert_eq!(orbits(&gens, Domain::Points, None).unwrap().count, 1);
        assert_eq!(orbits(&gens, Domain::Pairs, None).unwrap().count, 4);
        let shifts = translation_generators(m).unwrap();
        assert_eq!(orbits(&shifts, Domain::Points, None).unwrap().count, 1);
        assert_eq!(
            orbits(&shifts, Domain::Pairs, None).unwrap().count,
            1 << (2 * m)
        );
    }
}

/// Burnside over the enumerated stabilizer: the number of orbits on pairs of
/// distinct nonzero vectors is the mean of `f (f - 1)` with `f` the number
/// of fixed nonzero vectors.
#[test]
fn triple_orbits_by_burnside() {
    for m in 2..=3 {
        let elements = common::linear_group_elements(&hm_generators(m).unwrap());
        assert_eq!(elements.len(), common::hm_order_formula(m));
        let total: usize = elements
            .iter()
            .map(|a| {
                let f = (1..1u64 << (2 * m))
                    .filter(|&b| {
                        let v = BitVector::new(2 * m, b).unwrap();
                        a.mul_vec(&v).unwrap() == v
                    })
                    .count();
                f * f.saturating_sub(1)
            })
            .sum();
        assert_eq!(total % elements.len(), 0);
        assert_eq!(
            triple_orbit_count(m).unwrap(),
            total / elements.len(),
            "m = {m}"
        );
    }
}

#[test]
fn argument_errors() {
    assert!(gm_generators(1).is_err());
    assert!(triple_orbit_count(6).is_err());
    assert!(GeneratorSet::from_permutations(3, vec![vec![0, 0, 1]]).is_err());
    assert!(GeneratorSet::from_permutations(3, vec![vec![0, 1]]).is_err());
}

proptest! {
    #[test]
    fn affine_inverse(m in 2usize..=5, seed in any::<u64>(), pick in 0usize..64) {
        let gens = gm_generators(m).unwrap();
        let maps = gens.affine_maps();
        let a: &AffineMap = &maps[pick % maps.len()];
        let v = BitVector::new(2 * m, seed & ((1 << (2 * m)) - 1)).unwrap();
        prop_assert_eq!(a.inverse().apply(&a.apply(&v).unwrap()).unwrap(), v);
        let perm = a.point_permutation();
        prop_assert_eq!(perm[v.bits() as usize] as u64, a.apply(&v).unwrap().bits());
    }
}
