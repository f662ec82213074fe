//! Exponent-pattern bounds on smooth counts and smooth n-th powers.
//!
//! Upper bound on smooth `m <= N`: `prod (1 + log N / log p_i)`.
//! Lower bound on smooth n-th powers `<= N`: `prod floor(1 + log N / (n k log p_i))`,
//! counting `p_i^(n j) <= N^(1/k)` in every coordinate.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::arith::{check_exponent, enumerate_smooth, factor_over_base, iroot_floor, Factorization, PrimeBase};
use crate::error::Result;

/// Width of the band in which a floating-point bound is not trusted.
pub const GUARD: f64 = 1e-9;

pub fn pattern_upper_bound(base: &PrimeBase, limit: u64) -> f64 {
    let log_n = (limit as f64).ln();
    base.primes()
        .iter()
        .map(|&p| 1.0 + log_n / (p as f64).ln())
        .product()
}

/// Largest `j` with `p^(step * j) <= limit`, in integers.
fn exact_exponent_count(p: u64, step: u64, limit: u64) -> u64 {
    let mut j = 0;
    let mut acc: u128 = 1;
    loop {
        let mut next = acc;
        for _ in 0..step {
            next = match next.checked_mul(p as u128) {
                Some(v) if v <= limit as u128 => v,
                _ => return j,
            };
        }
        acc = next;
        j += 1;
    }
}

/// Integer lower bound on the number of smooth n-th powers `<= N`, plus the
/// number of factors whose float value fell inside the guard band and were
/// re-resolved exactly.
pub fn nth_power_lower_bound_detail(base: &PrimeBase, n: u32, limit: u64) -> Result<(u64, usize)> {
    check_exponent(n)?;
    let k = base.len() as u64;
    let log_n = (limit as f64).ln();
    let mut product = 1u64;
    let mut ties = 0;
    for &p in base.primes() {
        let x = log_n / (n as u64 * k) as f64 / (p as f64).ln();
        let floor = x.floor();
        let frac = x - floor;
        let whole = if frac < GUARD || 1.0 - frac < GUARD {
            ties += 1;
            exact_exponent_count(p, n as u64 * k, limit)
        } else {
            floor as u64
        };
        product = product.saturating_mul(1 + whole);
    }
    Ok((product, ties))
}

pub fn nth_power_lower_bound(base: &PrimeBase, n: u32, limit: u64) -> Result<u64> {
    nth_power_lower_bound_detail(base, n, limit).map(|(v, _)| v)
}

/// Smooth `m <= N` whose exponents are all divisible by `n`.
pub fn count_smooth_nth_powers(base: &PrimeBase, n: u32, limit: u64) -> Result<u64> {
    check_exponent(n)?;
    let mut count = 0;
    for m in enumerate_smooth(base, limit)? {
        if let Factorization::Smooth(e) = factor_over_base(m, base)? {
            count += e.exps().iter().all(|&x| x % n == 0) as u64;
        }
    }
    Ok(count)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityRow {
    pub base: PrimeBase,
    pub n: u32,
    pub limit: u64,
    pub smooth_count: u64,
    pub smooth_nth_power_count: u64,
    pub upper_bound: f64,
    pub lower_bound: u64,
    /// `lower_bound / upper_bound`.
    pub delta_estimate: f64,
    /// `floor(N^(1/n))`, the count of all n-th powers in `[1, N]`.
    pub all_nth_powers: u64,
    /// `delta_estimate * N > N^(1/n)`.
    pub crossover: bool,
    /// `delta_estimate * (n k)^k`, logged for inspection.
    pub scaled_delta: f64,
    pub guard_ties: usize,
}

impl DensityRow {
    /// Names of any violated bracketing invariants.
    pub fn violations(&self) -> Vec<&'static str> {
        let mut bad = Vec::new();
        if self.lower_bound > self.smooth_nth_power_count {
            bad.push("lower_bound > smooth_nth_power_count");
        }
        if self.smooth_count as f64 > self.upper_bound + GUARD {
            bad.push("smooth_count > upper_bound");
        }
        if !(self.delta_estimate > 0.0 && self.delta_estimate <= 1.0 + GUARD) {
            bad.push("delta_estimate outside (0, 1]");
        }
        if self.smooth_nth_power_count > self.all_nth_powers {
            bad.push("smooth n-th powers exceed all n-th powers");
        }
        bad
    }
}

pub fn density_row(base: &PrimeBase, n: u32, limit: u64) -> Result<DensityRow> {
    check_exponent(n)?;
    let smooth = enumerate_smooth(base, limit)?;
    let smooth_count = smooth.len() as u64;
    let smooth_nth_power_count = count_smooth_nth_powers(base, n, limit)?;
    let upper_bound = pattern_upper_bound(base, limit) + GUARD;
    let (lower_bound, guard_ties) = nth_power_lower_bound_detail(base, n, limit)?;
    let delta_estimate = lower_bound as f64 / upper_bound;
    let all_nth_powers = iroot_floor(limit as u128, n) as u64;
    let k = base.len() as i32;
    Ok(DensityRow {
        base: base.clone(),
        n,
        limit,
        smooth_count,
        smooth_nth_power_count,
        upper_bound,
        lower_bound,
        delta_estimate,
        all_nth_powers,
        crossover: delta_estimate * limit as f64 > all_nth_powers as f64,
        scaled_delta: delta_estimate * ((n as u64 * k as u64) as f64).powi(k),
        guard_ties,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub rows: Vec<DensityRow>,
    /// Smallest `N` where the finite-world density would exceed `N^(1/n)`.
    pub first_crossover: Option<u64>,
}

impl DensityReport {
    pub fn violations(&self) -> usize {
        self.rows.iter().map(|r| r.violations().len()).sum()
    }
}

pub fn density_report(base: &PrimeBase, n: u32, limits: &[u64]) -> Result<DensityReport> {
    let mut sorted = limits.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let rows = sorted
        .iter()
        .map(|&limit| density_row(base, n, limit))
        .collect::<Result<Vec<_>>>()?;
    let first_crossover = rows.iter().find(|r| r.crossover).map(|r| r.limit);
    Ok(DensityReport { rows, first_crossover })
}

pub const CSV_HEADER: &str = "base,n,N,smooth,smooth_nth_powers,upper_bound,lower_bound,delta,crossover";

/// Base is written with `;` between primes so the row stays nine fields.
pub fn density_csv(report: &DensityReport) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in &report.rows {
        let primes: Vec<String> = r.base.primes().iter().map(u64::to_string).collect();
        writeln!(
            out,
            "{},{},{},{},{},{:.6},{},{:.6},{}",
            primes.join(";"),
            r.n,
            r.limit,
            r.smooth_count,
            r.smooth_nth_power_count,
            r.upper_bound,
            r.lower_bound,
            r.delta_estimate,
            r.crossover
        )
        .expect("writing to a String");
    }
    out
}
