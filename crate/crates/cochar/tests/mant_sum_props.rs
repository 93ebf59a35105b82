mod common;

use cochar::kottwitz::{b_transfer, enumerate_b};
use cochar::mant_sum::{act, galois_orbit_partition, i_set, m_sum, r_set, reflex_subgroup, rel_set};
use cochar::root_datum::perm_apply;
use cochar::rational::to_qvec;
use common::*;
use proptest::prelude::*;
use std::collections::BTreeSet;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn rel_sets_decompose_through_the_levi((rd, mu) in group_and_dominant(0, 2)) {
        for b in enumerate_b(&rd, &mu).unwrap() {
            let (sub, bs) = b_transfer(&rd, &b, b.levi).unwrap();
            for s in b.levi.subsets().into_iter().filter(|&s| rd.is_gamma_stable(s)) {
                let direct: BTreeSet<_> = rel_set(&rd, s, &b, &mu).unwrap().into_iter().collect();
                let mut union = BTreeSet::new();
                let mut count = 0;
                for p in i_set(&rd, b.levi, &b, &mu).unwrap() {
                    for q in rel_set(&sub, s, &bs, &p.mu).unwrap() {
                        count += 1;
                        union.insert(q);
                    }
                }
                prop_assert_eq!(count, union.len());
                prop_assert_eq!(&direct, &union);
            }
        }
    }

    #[test]
    fn sets_are_reflex_invariant((rd, mu) in group_and_dominant(0, 2)) {
        let group = reflex_subgroup(&rd, &mu);
        for b in enumerate_b(&rd, &mu).unwrap() {
            let r = r_set(&rd, &b, &mu).unwrap();
            prop_assert!(galois_orbit_partition(&rd, &r, &group).is_some());
            for s in b.levi.subsets().into_iter().filter(|&s| rd.is_gamma_stable(s)) {
                prop_assert!(galois_orbit_partition(&rd, &rel_set(&rd, s, &b, &mu).unwrap(), &group).is_some());
            }
            let sum = m_sum(&rd, &b, &mu).unwrap();
            for (p, c) in sum.iter() {
                for &g in &group {
                    prop_assert_eq!(sum.coeff(&act(&rd, g, p)), c);
                }
            }
        }
    }

    #[test]
    fn stabilizers_of_regular_points((rd, _mu) in group_and_mu(0, 0), k in 0usize..64) {
        let s = pick_stable(&rd, k);
        // a strictly decreasing cocharacter on every factor copy
        let mut x = vec![0i64; rd.rank()];
        for b in rd.delta_blocks() {
            for (i, c) in b.range().enumerate() {
                x[c] = (b.len - i) as i64;
            }
        }
        let point = rd.theta(s, &x);
        for a in rd.delta().difference(s).indices() {
            prop_assert!(rd.pair_root(&point, a) > cochar::rational::zero());
        }
        let levi_group: BTreeSet<_> = rd.levi_datum(s).unwrap().relative_weyl_group().into_iter().collect();
        for w in rd.relative_weyl_group() {
            prop_assert_eq!(perm_apply(&w, &point) == point, levi_group.contains(&w));
        }
        prop_assert_eq!(to_qvec(&x).len(), point.len());
    }
}
