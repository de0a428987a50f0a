mod common;

use hurwitz_core::partitions::{branch_count, partitions_of};
use hurwitz_core::symgroup::{count_factorizations, complex_hurwitz};
use hurwitz_core::tropical::tropical_complex_hurwitz;
use hurwitz_core::value::HurwitzValue;
use num_bigint::BigUint;

#[test]
fn factorization_counts_match_brute_force() {
    let mut n = 0;
    for d in 1..=4u32 {
        for l in partitions_of(d) {
            for m in partitions_of(d) {
                for g in 0..=1 {
                    let r = branch_count(g, &l, &m).unwrap();
                    if !(0..=4).contains(&r) {
                        continue;
                    }
                    let want = common::complex_count(l.parts(), m.parts(), r as usize);
                    assert_eq!(
                        count_factorizations(g, &l, &m).unwrap(),
                        BigUint::from(want),
                        "g={g} {l} {m}"
                    );
                    let v = HurwitzValue::ratio(want as i64, common::factorial(d as usize) as i64);
                    assert_eq!(complex_hurwitz(g, &l, &m).unwrap(), v);
                    if r > 0 {
                        assert_eq!(tropical_complex_hurwitz(g, &l, &m).unwrap(), v);
                    }
                    n += 1;
                }
            }
        }
    }
    assert!(n > 30);
}
