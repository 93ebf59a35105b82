#![allow(dead_code)]

use cochar::{build_root_datum, GroupSpec, LeviSet, RootDatum};
use proptest::prelude::*;

pub const GROUPS: [&[(usize, usize)]; 9] = [
    &[(1, 2)],
    &[(1, 3)],
    &[(1, 4)],
    &[(1, 5)],
    &[(2, 2)],
    &[(3, 2)],
    &[(2, 3)],
    &[(1, 2), (1, 3)],
    &[(2, 1), (1, 2)],
];

pub fn datum(i: usize) -> RootDatum {
    build_root_datum(&GroupSpec::product(GROUPS[i])).unwrap()
}

/// A group from the list with an integer cocharacter.
pub fn group_and_mu(lo: i64, hi: i64) -> impl Strategy<Value = (RootDatum, Vec<i64>)> {
    (0..GROUPS.len()).prop_flat_map(move |i| {
        let rd = datum(i);
        let n = rd.rank();
        (Just(rd), proptest::collection::vec(lo..=hi, n))
    })
}

/// Same, with `μ` made dominant.
pub fn group_and_dominant(lo: i64, hi: i64) -> impl Strategy<Value = (RootDatum, Vec<i64>)> {
    group_and_mu(lo, hi).prop_map(|(rd, mu)| {
        let d = rd.dominant_rep(rd.delta(), &mu);
        (rd, d)
    })
}

/// Same, with `μ` dominant and minuscule on every embedding copy.
pub fn group_and_minuscule() -> impl Strategy<Value = (RootDatum, Vec<i64>)> {
    group_and_mu(0, 1).prop_map(|(rd, mu)| {
        let d = rd.dominant_rep(rd.delta(), &mu);
        (rd, d)
    })
}

pub fn pick_stable(rd: &RootDatum, k: usize) -> LeviSet {
    let levis = rd.stable_levis();
    levis[k % levis.len()]
}
