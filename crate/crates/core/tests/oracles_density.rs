use num_bigint::BigUint;
use proptest::prelude::*;
use smooth_world::arith::{enumerate_smooth, iroot_floor, PrimeBase};
use smooth_world::density::{count_smooth_nth_powers, density_row, nth_power_lower_bound, pattern_upper_bound};
use smooth_world::naive::{oracle_fixed_difference, oracle_smooth_sweep, oracle_triple_loop, oracle_triple_loop_dm};
use smooth_world::oracles::{
    ap_in_powers, dm_check, fixed_difference_pairs, fixed_difference_pairs_u64, flt_check, power_gap_check, GapCheck,
};

fn roots(sols: &[smooth_world::oracles::PowerSolution]) -> Vec<(u64, u64, u64)> {
    sols.iter().map(|s| (s.roots[0], s.roots[1], s.roots[2])).collect()
}

#[test]
fn scans_match_triple_loops() {
    for n in 1..=4 {
        assert_eq!(roots(&flt_check(n, 60).unwrap()), oracle_triple_loop(n, 60), "flt n = {n}");
        assert_eq!(roots(&dm_check(n, 60).unwrap()), oracle_triple_loop_dm(n, 60), "dm n = {n}");
    }
}

#[test]
fn cube_factorization_recheck() {
    // x^3 + y^3 = (x + y)(x^2 - xy + y^2); the factored form is never a cube
    for x in 1u64..=200 {
        for y in x..=200 {
            let sum = x.pow(3) + y.pow(3);
            let factored = (x + y) * (x * x + y * y - x * y);
            assert_eq!(sum, factored);
            assert!(iroot_floor(factored as u128, 3).pow(3) != factored as u128, "{x}^3 + {y}^3");
        }
    }
    assert!(flt_check(3, 400).unwrap().is_empty());
}

#[test]
fn every_ap_solution_rechecks() {
    for (n, len, bound) in [(2u32, 3usize, 200u64), (1, 5, 30), (2, 4, 100)] {
        for s in ap_in_powers(n, len, bound).unwrap() {
            s.recheck(None).unwrap();
            let t = s.terms();
            assert!(t.windows(3).all(|w| &w[0] + &w[2] == &w[1] * 2u32));
        }
    }
}

#[test]
fn density_brackets_exact_counts() {
    for k in 1..=3 {
        let base = PrimeBase::first(k).unwrap();
        for n in 1..=3 {
            for limit in [100u64, 1_000, 10_000, 100_000, 1_000_000] {
                let row = density_row(&base, n, limit).unwrap();
                assert!(row.violations().is_empty(), "{k} {n} {limit}: {:?}", row.violations());
                assert!(row.lower_bound <= row.smooth_nth_power_count);
                assert!(row.smooth_count as f64 <= row.upper_bound);
            }
        }
    }
}

#[test]
fn density_spot_row() {
    let row = density_row(&PrimeBase::new(vec![2, 3]).unwrap(), 2, 100).unwrap();
    assert_eq!((row.smooth_count, row.smooth_nth_power_count, row.lower_bound), (20, 7, 4));
    assert!((row.upper_bound - 39.686).abs() < 1e-3);
}

proptest! {
    #[test]
    fn nth_power_count_is_root_enumeration(k in 1usize..=4, n in 1u32..=4, limit in 1u64..1_000_000) {
        let base = PrimeBase::first(k).unwrap();
        let root = iroot_floor(limit as u128, n) as u64;
        let expected = enumerate_smooth(&base, root).unwrap().len() as u64;
        prop_assert_eq!(count_smooth_nth_powers(&base, n, limit).unwrap(), expected);
        prop_assert!(nth_power_lower_bound(&base, n, limit).unwrap() <= expected);
    }

    #[test]
    fn upper_bound_covers_smooth_count(k in 1usize..=4, limit in 1u64..50_000) {
        let base = PrimeBase::first(k).unwrap();
        let exact = oracle_smooth_sweep(base.primes(), limit).len() as f64;
        prop_assert!(exact <= pattern_upper_bound(&base, limit) + 1e-9);
    }

    #[test]
    fn fixed_difference_matches_scan(n in 2u32..=4, d in 1u64..=400) {
        prop_assert_eq!(fixed_difference_pairs_u64(n, d).unwrap(), oracle_fixed_difference(n, d));
        prop_assert_eq!(fixed_difference_pairs(n, &BigUint::from(d)).unwrap(), oracle_fixed_difference(n, d));
    }

    #[test]
    fn gap_inequality(n in 2u32..=8, z in 1u64..20_000) {
        prop_assert_eq!(power_gap_check(n, z).unwrap(), GapCheck::Pass);
    }
}
