//! Subcommand execution. Every subcommand yields one or more [`Report`]s
//! plus an exit status.

use std::time::{Duration, Instant};

use serde_json::{json, Value};

use crate::arith::{decompose, enumerate_smooth, power_multiplier, PrimeBase};
use crate::config::{RunConfig, Subcommand};
use crate::density::density_report;
use crate::error::{Error, Result};
use crate::experiments::{exit_status, run_theorem1, run_theorem3, run_theorem5, run_theorem8, ExperimentReport};
use crate::folkman::smooth_folkman_pipeline;
use crate::naive;
use crate::oracles::{
    ap_in_powers, dm_check, fixed_difference_pairs_u64, flt_check, power_gap_check, GapCheck, PowerSolution,
};
use crate::ramsey::{
    find_k2w, find_monochromatic_triangle, guaranteed_universe_size, pentagon_coloring, ramsey_vertices,
    seeded_pair_coloring, triangle_free_two_coloring, verify_ramsey_333_reduction, K2Outcome,
};
use crate::report::{big, emit_reports, experiment_to_report, fixed6, Report};
use crate::schur::{
    count_distinct_monochromatic_triples, count_monochromatic_triples, factorial_e_bound,
    find_smooth_monochromatic_triple, min_triple_ratio, schur_number, trial_rng, Budget, Coloring,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_SENSATIONAL: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

/// Reports plus the exit status they imply.
#[derive(Debug)]
pub struct RunResult {
    pub reports: Vec<Report>,
    pub status: i32,
}

impl RunResult {
    fn single(report: Report, status: i32) -> Self {
        RunResult { reports: vec![report], status }
    }

    fn merge(&mut self, other: RunResult) {
        self.reports.extend(other.reports);
        self.status = worse(self.status, other.status);
    }
}

/// Internal errors outrank sensational witnesses, which outrank success.
fn worse(a: i32, b: i32) -> i32 {
    let rank = |s| match s {
        EXIT_INTERNAL => 3,
        EXIT_SENSATIONAL => 2,
        EXIT_OK => 0,
        _ => 1,
    };
    if rank(b) > rank(a) {
        b
    } else {
        a
    }
}

fn experiment(r: &ExperimentReport, cfg: &RunConfig) -> RunResult {
    let status = exit_status(r, &ExperimentReport::recheck);
    let mut report = experiment_to_report(r, cfg.timing);
    report.seed = cfg.seed;
    RunResult::single(report, status)
}

fn stamp(mut report: Report, cfg: &RunConfig, started: Instant) -> Report {
    report.seed = cfg.seed;
    report.timing_ms = cfg.timing.then(|| started.elapsed().as_millis() as u64);
    report
}

fn passfail(ok: bool) -> i32 {
    if ok {
        EXIT_OK
    } else {
        EXIT_INTERNAL
    }
}

fn world_params(report: Report, base: &PrimeBase, n: u32, limit: u64) -> Report {
    report.param("base", base.primes().to_vec()).param("n", n).param("N", limit)
}

/// Rechecks solutions; an `n >= 3` FLT/DM solution that survives is sensational.
fn power_solutions(tag: &str, sols: &[PowerSolution], n: u32, bound: u64, cfg: &RunConfig, started: Instant) -> RunResult {
    let rechecked = sols.iter().all(|s| s.recheck(None).is_ok());
    let outcome = if sols.is_empty() { "absence_certified" } else { "witness_found" };
    let mut report = Report::new(tag, outcome).param("n", n).param("B", bound);
    report.witnesses = sols.iter().map(|s| json!(s.roots)).collect();
    let terms: Vec<Value> = sols.iter().map(|s| Value::Array(s.terms().iter().map(big).collect())).collect();
    report = report.stat("count", sols.len()).stat("terms", terms);
    let status = if !rechecked {
        EXIT_INTERNAL
    } else if n >= 3 && !sols.is_empty() {
        EXIT_SENSATIONAL
    } else {
        EXIT_OK
    };
    RunResult::single(stamp(report, cfg, started), status)
}

fn budget(cfg: &RunConfig) -> Budget {
    Budget {
        max_nodes: cfg.budget_nodes,
        max_time: cfg.budget_seconds.map(Duration::from_secs),
    }
}

fn schur_number_report(t: u32, budget: Budget, cfg: &RunConfig) -> Result<RunResult> {
    let started = Instant::now();
    let cert = schur_number(t, budget)?;
    let bound = factorial_e_bound(t)?;
    let ok = cert.recheck().is_ok() && (cert.s_t as u128) <= bound;
    let outcome = if cert.proof_exhaustive { "exact" } else { "budget_exhausted" };
    let mut report = Report::new("SCHUR_NUMBER", outcome).param("t", t);
    report.witnesses = vec![json!(cert.witness.classes())];
    report = report
        .stat("s_t", cert.s_t)
        .stat("n_max", cert.n_max)
        .stat("factorial_e_bound", bound.to_string())
        .stat("proof_exhaustive", cert.proof_exhaustive)
        .stat("nodes", cert.nodes);
    Ok(RunResult::single(stamp(report, cfg, started), passfail(ok)))
}

fn ramsey_facts(cfg: &RunConfig) -> Result<RunResult> {
    let started = Instant::now();
    let k6_free = triangle_free_two_coloring(6)?;
    let pentagon = pentagon_coloring();
    let pentagon_clean = find_monochromatic_triangle(&pentagon).is_none();
    let naive_k6 = naive::oracle_triangle_free_count(6);
    let ok = k6_free.is_none() && pentagon_clean && naive_k6 == 0;
    let edges: Vec<Value> = (1..=5u64)
        .flat_map(|i| (i + 1..=5).map(move |j| (i, j)))
        .map(|(i, j)| json!([i, j, pentagon.color(i, j)]))
        .collect();
    let mut report = Report::new("RAMSEY_TINY", if ok { "completed" } else { "failed" });
    report.witnesses = vec![Value::Array(edges)];
    report = report
        .stat("k6_colorings_scanned", 1u64 << 15)
        .stat("k6_triangle_free", naive_k6)
        .stat("k5_pentagon_triangle_free", pentagon_clean);
    Ok(RunResult::single(stamp(report, cfg, started), passfail(ok)))
}

fn ramsey_reduce(colors: u32, limit: u64, trials: u64, cfg: &RunConfig) -> Result<RunResult> {
    let started = Instant::now();
    let v = ramsey_vertices(colors)?;
    let limit = limit.max(v - 1);
    let mut triples = Vec::new();
    for i in 0..trials {
        let coloring = Coloring::random(limit, colors, &mut trial_rng(cfg.seed, i));
        let t = verify_ramsey_333_reduction(&coloring, colors)?;
        t.recheck(&coloring)?;
        triples.push(json!([t.a, t.b, t.c, t.color]));
    }
    let mut report = Report::new("RAMSEY_TO_SCHUR", "completed")
        .param("t", colors)
        .param("N", limit)
        .param("trials", trials);
    report = report.stat("rechecked", triples.len()).stat("vertices", v);
    report.witnesses = triples;
    Ok(RunResult::single(stamp(report, cfg, started), EXIT_OK))
}

fn k2_sweep(colors: u32, w: usize, limit: u64, trials: u64, cfg: &RunConfig) -> Result<RunResult> {
    let started = Instant::now();
    let guarantee = guaranteed_universe_size(colors, w as u64)?;
    let universe: Vec<u64> = (1..=limit).collect();
    let mut found = 0u64;
    let mut insufficient = 0u64;
    let mut oracle_agree = 0u64;
    let mut witnesses = Vec::new();
    for i in 0..trials {
        let rule = seeded_pair_coloring(cfg.seed.wrapping_add(i), colors);
        match find_k2w(&universe, &rule, colors, w)? {
            K2Outcome::Found(wit) => {
                wit.recheck(&rule)?;
                found += 1;
                if witnesses.len() < 8 {
                    witnesses.push(json!({"anchors": wit.anchors, "partners": wit.partners, "color": wit.color}));
                }
            }
            K2Outcome::Insufficient { .. } => insufficient += 1,
        }
        if let Some((anchors, partners, color)) = naive::oracle_iterative_k2(&universe, &rule, colors, w) {
            let valid = partners.len() == w
                && partners.iter().all(|&x| anchors.iter().all(|&a| rule(a, x) == color));
            oracle_agree += valid as u64;
        }
    }
    let at_guarantee = limit as u128 >= guarantee;
    let ok = !at_guarantee || (insufficient == 0 && oracle_agree == trials);
    let mut report = Report::new("K2W", if ok { "completed" } else { "failed" })
        .param("t", colors)
        .param("w", w)
        .param("universe", limit)
        .param("trials", trials);
    report.witnesses = witnesses;
    report = report
        .stat("guaranteed_universe_size", guarantee.to_string())
        .stat("found", found)
        .stat("insufficient", insufficient)
        .stat("iterative_oracle_valid", oracle_agree);
    Ok(RunResult::single(stamp(report, cfg, started), passfail(ok)))
}

fn density(base: &PrimeBase, n: u32, limit: u64, cfg: &RunConfig) -> Result<RunResult> {
    let started = Instant::now();
    let limits: Vec<u64> = std::iter::successors(Some(100u64), |&x| x.checked_mul(10))
        .take_while(|&x| x <= limit)
        .collect();
    let limits = if limits.is_empty() { vec![limit] } else { limits };
    let table = density_report(base, n, &limits)?;
    let violations = table.violations();
    let mut report = world_params(Report::new("DENSITY", "completed"), base, n, limit);
    report.witnesses = table
        .rows
        .iter()
        .map(|r| {
            json!({
                "N": r.limit,
                "smooth": r.smooth_count,
                "smooth_nth_powers": r.smooth_nth_power_count,
                "upper_bound": fixed6(r.upper_bound),
                "lower_bound": r.lower_bound,
                "delta": fixed6(r.delta_estimate),
                "all_nth_powers": r.all_nth_powers,
                "scaled_delta": fixed6(r.scaled_delta),
                "crossover": r.crossover,
            })
        })
        .collect();
    report = report
        .stat("violations", violations)
        .stat("first_crossover", table.first_crossover)
        .stat("note", "crossover extrapolates the finite-prime density; real n-th powers number floor(N^(1/n))");
    report.table = Some(table);
    Ok(RunResult::single(stamp(report, cfg, started), passfail(violations == 0)))
}

fn density_grid(cfg: &RunConfig) -> Result<RunResult> {
    let mut all = RunResult { reports: Vec::new(), status: EXIT_OK };
    for k in 1..=3 {
        let base = PrimeBase::first(k)?;
        for n in 1..=3 {
            all.merge(density(&base, n, 1_000_000, cfg)?);
        }
    }
    Ok(all)
}

fn gaps(n: u32, limit: u64, difference: Option<u64>, cfg: &RunConfig) -> Result<RunResult> {
    let started = Instant::now();
    let check = power_gap_check(n, limit)?;
    let mut report = Report::new("POWER_GAPS", "completed").param("n", n).param("Z", limit);
    report = report.stat(
        "gap_check",
        match check {
            GapCheck::Pass => json!("pass"),
            GapCheck::Counterexample(z) => json!({"counterexample": z}),
        },
    );
    if let Some(d) = difference {
        let pairs = fixed_difference_pairs_u64(n, d)?;
        report = report.param("d", d);
        report.witnesses = pairs.iter().map(|&(u, v)| json!([u, v])).collect();
    }
    Ok(RunResult::single(stamp(report, cfg, started), passfail(check == GapCheck::Pass)))
}

fn gap_agreement(cfg: &RunConfig) -> Result<RunResult> {
    let started = Instant::now();
    let mut gap_ok = true;
    for n in 2..=6 {
        gap_ok &= power_gap_check(n, 10_000)? == GapCheck::Pass;
    }
    let mut mismatches = 0u64;
    for n in 2..=4 {
        let expected = naive::oracle_fixed_difference_all(n, 1000);
        for d in 1..=1000 {
            mismatches += (fixed_difference_pairs_u64(n, d)? != expected[d as usize]) as u64;
        }
    }
    let ok = gap_ok && mismatches == 0;
    let report = Report::new("POWER_GAPS_SWEEP", if ok { "completed" } else { "failed" })
        .param("n", json!([2, 6]))
        .param("Z", 10_000)
        .param("d_max", 1000)
        .stat("gap_check", if gap_ok { "pass" } else { "fail" })
        .stat("fixed_difference_mismatches", mismatches);
    Ok(RunResult::single(stamp(report, cfg, started), passfail(ok)))
}

fn oracle_agreement(cfg: &RunConfig) -> Result<RunResult> {
    let started = Instant::now();
    let mut mismatches = 0u64;
    for n in 1..=4 {
        let flt: Vec<_> = flt_check(n, 60)?.iter().map(|s| (s.roots[0], s.roots[1], s.roots[2])).collect();
        mismatches += (flt != naive::oracle_triple_loop(n, 60)) as u64;
        let dm: Vec<_> = dm_check(n, 60)?.iter().map(|s| (s.roots[0], s.roots[1], s.roots[2])).collect();
        mismatches += (dm != naive::oracle_triple_loop_dm(n, 60)) as u64;
    }
    let report = Report::new("ORACLE_AGREEMENT", if mismatches == 0 { "completed" } else { "failed" })
        .param("B", 60)
        .param("n", json!([1, 4]))
        .stat("mismatches", mismatches);
    Ok(RunResult::single(stamp(report, cfg, started), passfail(mismatches == 0)))
}

fn color(cfg: &RunConfig) -> Result<RunResult> {
    let started = Instant::now();
    let m = cfg.value.unwrap_or(cfg.limit);
    let mut report = Report::new("COLOR", "completed").param("base", cfg.base.primes().to_vec()).param("n", cfg.n).param("m", m);
    match decompose(m, &cfg.base, cfg.n)? {
        Some(d) => {
            let p = power_multiplier(&d.color, &cfg.base, cfg.n)?;
            report.witnesses = vec![json!([d.q, d.r_part])];
            report = report.stat("color", d.color.to_string()).stat("q", d.q).stat("r", d.r_part).stat("multiplier", big(&p));
        }
        None => report = report.stat("color", "non-smooth"),
    }
    Ok(RunResult::single(stamp(report, cfg, started), EXIT_OK))
}

fn schur_count(cfg: &RunConfig) -> Result<RunResult> {
    let started = Instant::now();
    let ratio = min_triple_ratio(cfg.colors, cfg.limit, cfg.trials, cfg.seed);
    let all_one = Coloring::constant(cfg.limit);
    let report = Report::new("SCHUR_COUNT", "completed")
        .param("t", cfg.colors)
        .param("N", cfg.limit)
        .param("trials", cfg.trials)
        .stat("min_count_over_n_squared", fixed6(ratio))
        .stat("all_one_count", count_monochromatic_triples(&all_one))
        .stat("all_one_distinct_count", count_distinct_monochromatic_triples(&all_one));
    Ok(RunResult::single(stamp(report, cfg, started), EXIT_OK))
}

/// Runs one subcommand on the current rayon pool.
pub fn run(cfg: &RunConfig) -> Result<RunResult> {
    let started = Instant::now();
    let (base, n, limit) = (&cfg.base, cfg.n, cfg.limit);
    Ok(match cfg.command {
        Subcommand::Color => color(cfg)?,
        Subcommand::Smooth => {
            let smooth = enumerate_smooth(base, limit)?;
            let mut report = Report::new("SMOOTH", "completed")
                .param("base", base.primes().to_vec())
                .param("N", limit)
                .stat("count", smooth.len());
            report.witnesses = vec![json!(smooth)];
            RunResult::single(stamp(report, cfg, started), EXIT_OK)
        }
        Subcommand::SchurSearch => {
            let found = find_smooth_monochromatic_triple(base, n, limit)?;
            let mut report = world_params(
                Report::new("SCHUR_SEARCH", if found.is_some() { "witness_found" } else { "absence_certified" }),
                base,
                n,
                limit,
            );
            let status = match &found {
                Some(t) => {
                    let eq = crate::schur::extract_nth_power_equation(t, base, n);
                    report.witnesses = vec![json!(t.as_array())];
                    report = report.stat("color", t.color.to_string());
                    match eq {
                        Ok((x, y, z)) => {
                            report = report.stat("extracted", json!([x, y, z]));
                            if n >= 3 { EXIT_SENSATIONAL } else { EXIT_OK }
                        }
                        Err(_) => EXIT_INTERNAL,
                    }
                }
                None => EXIT_OK,
            };
            RunResult::single(stamp(report, cfg, started), status)
        }
        Subcommand::SchurNumber => schur_number_report(cfg.colors, budget(cfg), cfg)?,
        Subcommand::SchurCount => schur_count(cfg)?,
        Subcommand::RamseyReduce => ramsey_reduce(cfg.colors, limit, cfg.trials, cfg)?,
        Subcommand::K2 => k2_sweep(cfg.colors, cfg.w, limit, cfg.trials, cfg)?,
        Subcommand::Flt => power_solutions("FLT", &flt_check(n, limit)?, n, limit, cfg, started),
        Subcommand::Dm => power_solutions("DM", &dm_check(n, limit)?, n, limit, cfg, started),
        Subcommand::Ap => {
            let sols = ap_in_powers(n, cfg.length, limit)?;
            let mut r = power_solutions("AP", &sols, n, limit, cfg, started);
            r.reports[0].params.insert("L".into(), json!(cfg.length));
            // three cubes (or higher) in progression would refute DM(n)
            if cfg.length == 3 || n < 3 || sols.is_empty() {
                r
            } else {
                r.status = EXIT_SENSATIONAL;
                r
            }
        }
        Subcommand::Gaps => gaps(n, limit, cfg.difference, cfg)?,
        Subcommand::Density => density(base, n, limit, cfg)?,
        Subcommand::Folkman => {
            let rep = smooth_folkman_pipeline(base, n, limit, cfg.s, 16)?;
            let mut report = world_params(
                Report::new("FOLKMAN", if rep.total == 0 { "absence_certified" } else { "witness_found" }),
                base,
                n,
                limit,
            )
            .param("s", cfg.s);
            report.witnesses = rep.witnesses.iter().map(|w| json!(w.witness.elements)).collect();
            report = report
                .stat("total", rep.total)
                .stat("exhausted", rep.exhausted)
                .stat("images", rep.witnesses.iter().map(|w| json!(w.images)).collect::<Vec<_>>());
            let status = if n >= 3 && rep.total > 0 { EXIT_SENSATIONAL } else { EXIT_OK };
            RunResult::single(stamp(report, cfg, started), status)
        }
        Subcommand::Theorem1 => experiment(&run_theorem1(base, n, limit)?, cfg),
        Subcommand::Theorem3 => experiment(&run_theorem3(base, n, limit)?, cfg),
        Subcommand::Theorem5 => experiment(&run_theorem5(base, n, limit, cfg.s)?, cfg),
        Subcommand::Theorem8 => experiment(&run_theorem8(base, n, limit, cfg.w)?, cfg),
        Subcommand::Suite => suite(cfg)?,
    })
}

/// The acceptance experiments at their default sizes.
pub fn suite(cfg: &RunConfig) -> Result<RunResult> {
    let mut all = RunResult { reports: Vec::new(), status: EXIT_OK };
    let b = |p: &[u64]| PrimeBase::new(p.to_vec());
    let started = Instant::now();

    for t in 1..=3 {
        all.merge(schur_number_report(t, Budget::unlimited(), cfg)?);
    }
    all.merge(ramsey_facts(cfg)?);
    all.merge(ramsey_reduce(2, 16, 100, cfg)?);

    for (n, bound) in [(3, 500), (4, 200), (2, 100)] {
        all.merge(power_solutions("FLT", &flt_check(n, bound)?, n, bound, cfg, started));
    }
    for (n, bound) in [(3, 500), (2, 10)] {
        all.merge(power_solutions("DM", &dm_check(n, bound)?, n, bound, cfg, started));
    }
    all.merge(oracle_agreement(cfg)?);

    all.merge(experiment(&run_theorem1(&b(&[2, 3, 5])?, 2, 25)?, cfg));
    all.merge(experiment(&run_theorem1(&b(&[2, 3, 5])?, 3, 100_000)?, cfg));
    all.merge(experiment(&run_theorem3(&b(&[2, 3, 5, 7])?, 2, 100)?, cfg));
    all.merge(experiment(&run_theorem3(&b(&[2, 3, 5])?, 3, 1_000_000)?, cfg));
    let ap4 = ap_in_powers(2, 4, 100)?;
    let mut ap4_report = power_solutions("AP", &ap4, 2, 100, cfg, started);
    ap4_report.reports[0].params.insert("L".into(), json!(4));
    // four squares in progression do not exist
    if !ap4.is_empty() {
        ap4_report.status = EXIT_SENSATIONAL;
    }
    all.merge(ap4_report);

    all.merge(density_grid(cfg)?);
    all.merge(gap_agreement(cfg)?);

    for (t, w) in [(1u32, 5usize), (2, 3), (3, 2)] {
        let size = guaranteed_universe_size(t, w as u64)? as u64;
        all.merge(k2_sweep(t, w, size, 200, cfg)?);
    }

    all.merge(experiment(&run_theorem5(&b(&[2, 3, 5])?, 2, 25, 2)?, cfg));
    all.merge(experiment(&run_theorem5(&b(&[2, 3, 5])?, 3, 10_000, 2)?, cfg));
    all.merge(experiment(&run_theorem5(&b(&[2, 3, 5])?, 2, 10_000, 3)?, cfg));
    all.merge(experiment(&run_theorem8(&b(&[2])?, 2, 40, 3)?, cfg));
    all.merge(experiment(&run_theorem8(&b(&[2, 3])?, 3, 200, 4)?, cfg));
    Ok(all)
}

/// Builds a pool with the configured worker count and runs the subcommand;
/// returns rendered output and exit status.
pub fn execute(cfg: &RunConfig) -> (String, i32) {
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cfg.threads).build() {
        Ok(p) => p,
        Err(e) => return (format!("error: cannot start {} workers: {e}\n", cfg.threads), EXIT_INTERNAL),
    };
    match pool.install(|| run(cfg)) {
        Ok(result) => match emit_reports(&result.reports, cfg.format) {
            Ok(text) => (text, result.status),
            Err(e) => (format!("error: {e}\n"), EXIT_USAGE),
        },
        Err(e @ (Error::Usage(_) | Error::Cap(_) | Error::Domain(_))) => (format!("error: {e}\n"), EXIT_USAGE),
        Err(e) => (format!("error: {e}\n"), EXIT_INTERNAL),
    }
}
