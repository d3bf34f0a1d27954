mod common;

use dualcx::{smith_invariants, smith_normal_form, FiniteAbelianSubgroup, IntMatrix, TorsionVector};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use proptest::prelude::*;

fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-12i64..=12, c), r))
}

fn to_int(m: &[Vec<i64>]) -> IntMatrix {
    IntMatrix::from_rows(m)
}

fn group_input() -> impl Strategy<Value = (u64, usize, Vec<Vec<u64>>)> {
    (prop::sample::select(vec![2u64, 3, 4, 6, 8, 9, 12]), 1usize..=3).prop_flat_map(|(m, n)| {
        (Just(m), Just(n), prop::collection::vec(prop::collection::vec(0..m, n), 0..=3))
    })
}

fn build(m: u64, n: usize, gens: &[Vec<u64>]) -> FiniteAbelianSubgroup {
    FiniteAbelianSubgroup::generated_by(gens.iter().map(|g| TorsionVector::new(m, g.clone())).collect(), m, n)
        .unwrap()
}

fn all_elements(m: u64, n: usize) -> Vec<Vec<u64>> {
    (0..m.pow(n as u32))
        .map(|mut k| {
            (0..n)
                .map(|_| {
                    let c = k % m;
                    k /= m;
                    c
                })
                .collect()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn snf_matches_determinantal_divisors(m in matrix()) {
        let a = to_int(&m);
        let snf = smith_normal_form(&a);
        prop_assert_eq!(&(&snf.u * &a) * &snf.v, snf.d.clone());
        prop_assert!(snf.u.determinant().unwrap().abs() == BigInt::from(1));
        prop_assert!(snf.v.determinant().unwrap().abs() == BigInt::from(1));
        for i in 0..snf.d.rows() {
            for j in 0..snf.d.cols() {
                if i != j {
                    prop_assert!(snf.d[(i, j)].is_zero());
                }
            }
        }
        let factors = snf.invariant_factors();
        for w in factors.windows(2) {
            prop_assert!(w[1].is_multiple_of(&w[0]));
        }
        let oracle: Vec<i128> = common::smith_by_minors(&m);
        let got: Vec<i128> = factors.iter().map(|x| x.to_i128().unwrap()).collect();
        prop_assert_eq!(got, oracle);
        prop_assert_eq!(smith_invariants(&a), factors);
    }

    #[test]
    fn group_structure_matches_enumeration((m, n, gens) in group_input()) {
        let g = build(m, n, &gens);
        let elements = common::enumerate_span(&gens, m, n);
        prop_assert_eq!(g.order().to_usize().unwrap(), elements.len());
        prop_assert_eq!(g.invariant_factors().to_vec(), common::invariant_factors_by_counting(&elements, m));
        prop_assert_eq!(g.rank(), g.invariant_factors().len());
        for x in all_elements(m, n) {
            prop_assert_eq!(g.contains(&TorsionVector::new(m, x.clone())), elements.contains(&x));
        }
    }

    #[test]
    fn intersection_with_span_is_a_subgroup((m, n, gens) in group_input(), span in prop::collection::vec(prop::collection::vec(-2i64..=2, 1..=2), 1..=3)) {
        let g = build(m, n, &gens);
        let cols = span[0].len();
        let rows: Vec<Vec<BigInt>> = (0..n).map(|i| (0..cols).map(|j| BigInt::from(span.get(i).map_or(0, |r| r.get(j).copied().unwrap_or(0)))).collect()).collect();
        let s = IntMatrix::from_rows(&rows);
        let h = g.intersect_with_span(&s);
        prop_assert!(h.is_subgroup_of(&g));
        // brute force: elements of G whose lift differs from an integer
        // combination of the span columns by a multiple of m
        let mut span_mod = vec![vec![0u64; n]];
        for j in 0..cols {
            span_mod.push((0..n).map(|i| s[(i, j)].mod_floor(&BigInt::from(m)).to_u64().unwrap()).collect());
        }
        let reachable = common::enumerate_span(&span_mod[1..], m, n);
        for x in common::enumerate_span(&gens, m, n) {
            prop_assert_eq!(h.contains(&TorsionVector::new(m, x.clone())), reachable.contains(&x));
        }
    }

    #[test]
    fn character_kernel_is_antitone(m in prop::sample::select(vec![2u64, 3, 4, 6]), r in 1usize..=3, chars in prop::collection::vec(prop::collection::vec(0u64..12, 3), 4)) {
        let chars: Vec<TorsionVector> = chars.iter().map(|c| TorsionVector::new(m, c[..r].to_vec())).collect();
        let small = FiniteAbelianSubgroup::equal_character_kernel(&chars, &[0, 1]).unwrap();
        let mid = FiniteAbelianSubgroup::equal_character_kernel(&chars, &[0, 1, 2]).unwrap();
        let all = FiniteAbelianSubgroup::equal_character_kernel(&chars, &[0, 1, 2, 3]).unwrap();
        prop_assert!(all.is_subgroup_of(&mid));
        prop_assert!(mid.is_subgroup_of(&small));
        for g in all_elements(m, r) {
            let g = TorsionVector::new(m, g);
            let agree = chars[1..].iter().all(|c| c.pair(&g) == chars[0].pair(&g));
            prop_assert_eq!(all.contains(&g), agree);
        }
    }

    #[test]
    fn rescaling_the_modulus_preserves_structure((m, n, gens) in group_input(), k in 2u64..=3) {
        let g = build(m, n, &gens);
        let big = g.rescale(k);
        prop_assert_eq!(big.modulus(), m * k);
        prop_assert_eq!(big.invariant_factors(), g.invariant_factors());
        let small = big.with_minimal_modulus();
        prop_assert_eq!(small.invariant_factors(), g.invariant_factors());
    }
}
