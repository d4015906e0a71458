#![allow(dead_code)]

use std::collections::HashSet;

use hireg::gf2::BitMatrix;
use hireg::groups::GeneratorSet;

fn pack(a: &BitMatrix) -> u128 {
    a.row_words()
        .iter()
        .enumerate()
        .fold(0u128, |acc, (i, &w)| acc | (w as u128) << (12 * i))
}

fn unpack(n: usize, code: u128) -> BitMatrix {
    BitMatrix::from_rows(
        n,
        (0..n).map(|i| (code >> (12 * i)) as u64 & 0xfff).collect(),
    )
    .unwrap()
}

/// Every element of the linear group generated by the linear parts of
/// `gens`, by breadth-first closure (dimension at most 10).
pub fn linear_group_elements(gens: &GeneratorSet) -> Vec<BitMatrix> {
    let n = 2 * gens.m().expect("affine generators");
    assert!(n <= 10);
    let mats: Vec<BitMatrix> = gens
        .affine_maps()
        .iter()
        .map(|a| a.matrix().clone())
        .collect();
    let id = BitMatrix::identity(n);
    let mut seen: HashSet<u128> = HashSet::from([pack(&id)]);
    let mut frontier = vec![id];
    let mut all = frontier.clone();
    while let Some(a) = frontier.pop() {
        for g in &mats {
            let b = g.mul(&a).unwrap();
            if seen.insert(pack(&b)) {
                frontier.push(b.clone());
                all.push(b);
            }
        }
    }
    all
}

/// Order of the linear group generated by `gens` without materializing
/// matrices beyond a packed set.
pub fn linear_group_order(gens: &GeneratorSet) -> usize {
    let n = 2 * gens.m().expect("affine generators");
    let mats: Vec<BitMatrix> = gens
        .affine_maps()
        .iter()
        .map(|a| a.matrix().clone())
        .collect();
    let start = pack(&BitMatrix::identity(n));
    let mut seen: HashSet<u128> = HashSet::from([start]);
    let mut frontier = vec![start];
    while let Some(code) = frontier.pop() {
        let a = unpack(n, code);
        for g in &mats {
            let b = pack(&g.mul(&a).unwrap());
            if seen.insert(b) {
                frontier.push(b);
            }
        }
    }
    seen.len()
}

/// `|GL(m, 2)| * 2^{m(m-1)/2}`.
pub fn hm_order_formula(m: usize) -> usize {
    let q = 1usize << m;
    let gl: usize = (0..m).map(|i| q - (1 << i)).product();
    gl << (m * (m - 1) / 2)
}
