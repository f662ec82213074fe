use proptest::prelude::*;
use smooth_world::arith::PrimeBase;
use smooth_world::experiments::{
    exit_status, run_theorem1, run_theorem3, run_theorem5, run_theorem8, ExperimentReport, Outcome, Payload,
};
use smooth_world::folkman::{find_folkman_set, smooth_folkman_pipeline};
use smooth_world::naive::{oracle_folkman, oracle_smooth_sweep, oracle_triple_loop};
use smooth_world::schur::{smooth_monochromatic_triples, trial_rng, Coloring};

fn base(p: &[u64]) -> PrimeBase {
    PrimeBase::new(p.to_vec()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pruned_folkman_matches_brute_force(seed in any::<u64>(), n in 3u64..=200, t in 1u32..=3, s in 2usize..=3) {
        // brute force over C(200, 3) subsets is slow; keep the big cases two-colored and rarer
        let c = Coloring::random(n, t, &mut trial_rng(seed, 0));
        let fast = find_folkman_set(&c, s).unwrap();
        let slow = oracle_folkman(c.as_slice(), s);
        prop_assert_eq!(fast.as_ref().map(|w| w.elements.clone()), slow);
        if let Some(w) = fast {
            prop_assert!(w.recheck(|m| c.get(m)).is_ok());
        }
    }
}

#[test]
fn folkman_pairs_are_smooth_triples() {
    for (b, n, limit) in [(&[2u64, 3, 5][..], 2u32, 10_000u64), (&[2, 3, 5, 7], 2, 5_000), (&[2, 3], 3, 100_000)] {
        let b = base(b);
        let folk = smooth_folkman_pipeline(&b, n, limit, 2, usize::MAX).unwrap();
        let mut pairs: Vec<(u64, u64)> = folk.witnesses.iter().map(|w| (w.witness.elements[0], w.witness.elements[1])).collect();
        pairs.sort();
        let mut triples: Vec<(u64, u64)> =
            smooth_monochromatic_triples(&b, n, limit).unwrap().iter().map(|t| (t.a, t.b)).collect();
        triples.sort();
        assert_eq!(pairs, triples, "base {b} n {n} N {limit}");
        assert_eq!(folk.total as usize, pairs.len());
    }
}

#[test]
fn pythagorean_count_matches_theorem1() {
    // every monochromatic smooth triple for n = 2 is R * (x^2, y^2, z^2)
    // with R a squarefree product of base primes and x, y, z smooth
    let primes = [2u64, 3, 5];
    let limit = 10_000u64;
    let smooth = oracle_smooth_sweep(&primes, 100);
    let pyth: Vec<_> = oracle_triple_loop(2, 100)
        .into_iter()
        .filter(|(x, y, z)| [x, y, z].iter().all(|v| smooth.contains(v)))
        .collect();
    let mut expected = 0;
    for mask in 0..1u32 << primes.len() {
        let r: u64 = (0..primes.len()).filter(|i| mask >> i & 1 == 1).map(|i| primes[i]).product();
        expected += pyth.iter().filter(|&&(_, _, z)| r * z * z <= limit).count() as u64;
    }
    let report = run_theorem1(&base(&primes), 2, limit).unwrap();
    assert_eq!(report.witness_count, expected);
    assert!(expected > 0);
    report.recheck().unwrap();
}

#[test]
fn theorem_pipelines_end_to_end() {
    let t1 = run_theorem1(&base(&[2, 3, 5]), 3, 100_000).unwrap();
    assert_eq!(t1.outcome, Outcome::AbsenceCertified);
    assert_eq!(exit_status(&t1, &ExperimentReport::recheck), 0);

    let t3 = run_theorem3(&base(&[2, 3, 5, 7]), 2, 100).unwrap();
    let Payload::Progression(ap) = &t3.payload else { panic!("{:?}", t3.payload) };
    assert_eq!(ap.terms, [1, 25, 49]);
    assert_eq!(exit_status(&t3, &ExperimentReport::recheck), 0);

    let t5 = run_theorem5(&base(&[2, 3, 5]), 2, 25, 2).unwrap();
    let Payload::Folkman { sets, .. } = &t5.payload else { panic!() };
    assert_eq!(sets[0].witness.elements, [9, 16]);
    assert_eq!(sets[0].images, [3, 4, 5]);

    for r in [
        run_theorem5(&base(&[2, 3, 5]), 3, 10_000, 2).unwrap(),
        run_theorem8(&base(&[2, 3]), 3, 200, 4).unwrap(),
    ] {
        assert_ne!(r.outcome, Outcome::WitnessFound, "{r:?}");
        assert_eq!(exit_status(&r, &ExperimentReport::recheck), 0);
    }
}
