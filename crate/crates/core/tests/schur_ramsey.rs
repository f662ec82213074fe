use proptest::prelude::*;
use smooth_world::naive::{has_mono_triple, oracle_all_colorings};
use smooth_world::ramsey::{
    difference_edge_coloring, find_k2w, guaranteed_universe_size, seeded_pair_coloring, triangle_to_schur,
    find_monochromatic_triangle, verify_ramsey_333_reduction, K2Outcome,
};
use smooth_world::naive::oracle_iterative_k2;
use smooth_world::schur::{
    count_distinct_monochromatic_triples, count_monochromatic_triples, factorial_e_bound,
    find_monochromatic_triple, min_triple_ratio, schur_number, trial_rng, Budget, Coloring,
};

#[test]
fn schur_numbers_agree_with_full_enumeration() {
    // s_t - 1 admits a triple-free coloring; s_t does not
    for (t, expected) in [(1u32, 2u64), (2, 5), (3, 14)] {
        let cert = schur_number(t, Budget::unlimited()).unwrap();
        assert!(cert.proof_exhaustive);
        assert_eq!(cert.s_t, expected);
        cert.recheck().unwrap();
        assert!(cert.s_t as u128 <= factorial_e_bound(t).unwrap());
    }
    for (t, s) in [(1u32, 2usize), (2, 5)] {
        let (pass, total) = oracle_all_colorings(t, s, has_mono_triple).unwrap();
        assert_eq!(pass, total, "every {t}-coloring of [1, {s}] has a triple");
        let (pass, total) = oracle_all_colorings(t, s - 1, has_mono_triple).unwrap();
        assert!(pass < total);
    }
}

#[test]
fn budget_trip_is_flagged() {
    let cert = schur_number(3, Budget::nodes(10)).unwrap();
    assert!(!cert.proof_exhaustive);
    cert.recheck().unwrap();
}

#[test]
fn triple_count_grows_quadratically() {
    for t in [2u32, 3] {
        let expected = 1.0 / (4.0 * (t * t) as f64);
        let ratios: Vec<f64> = [100u64, 200, 400, 800].iter().map(|&n| min_triple_ratio(t, n, 10_000, 7)).collect();
        for r in &ratios {
            assert!(*r > 0.5 * expected && *r < 1.5 * expected, "t = {t}: {ratios:?}");
        }
        let (lo, hi) = ratios.iter().fold((f64::MAX, 0.0f64), |(l, h), &r| (l.min(r), h.max(r)));
        assert!(hi / lo < 1.5, "t = {t}: {ratios:?}");
    }
}

proptest! {
    #[test]
    fn found_triples_recheck(seed in any::<u64>(), n in 5u64..60, t in 1u32..4) {
        let c = Coloring::random(n, t, &mut trial_rng(seed, 0));
        match find_monochromatic_triple(&c) {
            Some(tr) => {
                prop_assert!(tr.recheck(&c).is_ok());
                prop_assert!(count_monochromatic_triples(&c) >= 1);
            }
            None => prop_assert!(!has_mono_triple(c.as_slice())),
        }
        prop_assert!(count_distinct_monochromatic_triples(&c) <= count_monochromatic_triples(&c));
    }

    #[test]
    fn all_one_count_closed_form(n in 1u64..300) {
        let expected: u64 = (2..=n).map(|c| c / 2).sum();
        prop_assert_eq!(count_monochromatic_triples(&Coloring::constant(n)), expected);
    }

    #[test]
    fn ramsey_reduction_always_lands(seed in any::<u64>(), t in 1u32..=3) {
        let c = Coloring::random(16, t, &mut trial_rng(seed, 1));
        let triple = verify_ramsey_333_reduction(&c, t).unwrap();
        prop_assert!(triple.recheck(&c).is_ok());
        let ec = difference_edge_coloring(&c, 17).unwrap();
        let tri = find_monochromatic_triangle(&ec).unwrap();
        prop_assert!(triangle_to_schur(tri, &c).unwrap().recheck(&c).is_ok());
    }

    #[test]
    fn k2w_at_guarantee(seed in any::<u64>(), (t, w) in prop::sample::select(vec![(1u32, 5usize), (2, 3), (3, 2), (2, 2)])) {
        let size = guaranteed_universe_size(t, w as u64).unwrap() as u64;
        let universe: Vec<u64> = (1..=size).collect();
        let rule = seeded_pair_coloring(seed, t);
        let K2Outcome::Found(wit) = find_k2w(&universe, &rule, t, w).unwrap() else {
            panic!("insufficient at the guaranteed size")
        };
        prop_assert!(wit.recheck(&rule).is_ok());
        prop_assert_eq!(wit.partners.len(), w);
        let (anchors, partners, color) = oracle_iterative_k2(&universe, &rule, t, w).unwrap();
        prop_assert!(partners.iter().all(|&x| anchors.iter().all(|&a| rule(a, x) == color)));
    }
}
