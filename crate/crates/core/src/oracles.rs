//! Exhaustive, exact searches for solutions of power equations.
//!
//! All scans run over a table of `r^n` for `r <= B`. The table is `u128`
//! when `2 * B^n` fits and `BigUint` otherwise; witnesses never depend on
//! which representation was used.

use std::cmp::Ordering;
use std::ops::{Add, Sub};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{check_exponent, iroot_floor, nth_root_exact_u128};
use crate::error::{domain, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Equation {
    /// `x^n + y^n = z^n`
    Flt,
    /// `x^n + y^n = 2 z^n`, `x < z < y`
    Dm,
    /// distinct n-th powers in arithmetic progression
    Ap,
    /// `v^n - u^n = d`
    FixedDiff,
}

/// A solution given by the roots of its terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerSolution {
    pub equation: Equation,
    pub n: u32,
    /// `(x, y, z)` for FLT, `(x, z, y)` for DM, the roots of the terms for AP,
    /// `(u, v)` for fixed differences.
    pub roots: Vec<u64>,
    pub bound: u64,
}

pub fn pow_big(r: u64, n: u32) -> BigUint {
    BigUint::from(r).pow(n)
}

impl PowerSolution {
    /// The n-th powers of the roots.
    pub fn terms(&self) -> Vec<BigUint> {
        self.roots.iter().map(|&r| pow_big(r, self.n)).collect()
    }

    /// Independent recheck in arbitrary precision. `difference` is only
    /// consulted for [`Equation::FixedDiff`].
    pub fn recheck(&self, difference: Option<&BigUint>) -> Result<()> {
        let t = self.terms();
        let positive = self.roots.iter().all(|&r| r >= 1);
        let ok = positive
            && match self.equation {
                Equation::Flt => {
                    t.len() == 3 && self.roots[0] <= self.roots[1] && &t[0] + &t[1] == t[2]
                }
                Equation::Dm => {
                    let r = &self.roots;
                    t.len() == 3 && r[0] < r[1] && r[1] < r[2] && &t[0] + &t[2] == &t[1] + &t[1]
                }
                Equation::Ap => {
                    t.len() >= 3
                        && self.roots.windows(2).all(|w| w[0] < w[1])
                        && t.windows(3).all(|w| &w[0] + &w[2] == &w[1] + &w[1])
                }
                Equation::FixedDiff => {
                    t.len() == 2 && difference.is_some_and(|d| t[1] > t[0] && &t[1] - &t[0] == *d)
                }
            };
        if ok {
            Ok(())
        } else {
            Err(Error::Recheck(format!(
                "{:?} witness {:?} fails for n = {}",
                self.equation, self.roots, self.n
            )))
        }
    }
}

trait Exact: Clone + Ord + for<'a> Add<&'a Self, Output = Self> + for<'a> Sub<&'a Self, Output = Self> {}
impl Exact for u128 {}
impl Exact for BigUint {}

enum PowerTable {
    Small(Vec<u128>),
    Big(Vec<BigUint>),
}

impl PowerTable {
    /// `table[r] = r^n` for `0 <= r <= bound`.
    fn build(n: u32, bound: u64) -> Self {
        let fits = (bound as u128)
            .checked_pow(n)
            .and_then(|top| top.checked_mul(2))
            .is_some();
        if fits {
            PowerTable::Small((0..=bound as u128).map(|r| r.pow(n)).collect())
        } else {
            PowerTable::Big((0..=bound).map(|r| pow_big(r, n)).collect())
        }
    }
}

fn check_bound(bound: u64) -> Result<()> {
    if bound > 1 << 24 {
        return Err(Error::Cap(format!("search bound {bound} exceeds 2^24")));
    }
    Ok(())
}

fn flt_scan<T: Exact>(p: &[T]) -> Vec<(u64, u64, u64)> {
    let mut out = Vec::new();
    for z in 2..p.len() {
        let (mut x, mut y) = (1usize, z - 1);
        while x <= y {
            match (p[x].clone() + &p[y]).cmp(&p[z]) {
                Ordering::Equal => {
                    out.push((x as u64, y as u64, z as u64));
                    x += 1;
                    y -= 1;
                }
                Ordering::Less => x += 1,
                Ordering::Greater => y -= 1,
            }
        }
    }
    out
}

/// All `x <= y < z <= B` with `x^n + y^n = z^n`, ordered by `z` then `x`.
pub fn flt_check(n: u32, bound: u64) -> Result<Vec<PowerSolution>> {
    check_exponent(n)?;
    check_bound(bound)?;
    let found = match PowerTable::build(n, bound) {
        PowerTable::Small(p) => flt_scan(&p),
        PowerTable::Big(p) => flt_scan(&p),
    };
    Ok(found
        .into_iter()
        .map(|(x, y, z)| PowerSolution { equation: Equation::Flt, n, roots: vec![x, y, z], bound })
        .collect())
}

fn dm_scan<T: Exact>(p: &[T]) -> Vec<(u64, u64, u64)> {
    let top = p.len() - 1;
    let mut out = Vec::new();
    for z in 2..top {
        let target = p[z].clone() + &p[z];
        let (mut x, mut y) = (1usize, top);
        while x < z && y > z {
            match (p[x].clone() + &p[y]).cmp(&target) {
                Ordering::Equal => {
                    out.push((x as u64, z as u64, y as u64));
                    x += 1;
                    y -= 1;
                }
                Ordering::Less => x += 1,
                Ordering::Greater => y -= 1,
            }
        }
    }
    out.sort_by_key(|&(x, z, y)| (y, x, z));
    out
}

/// All `x < z < y <= B` with `x^n + y^n = 2 z^n`, ordered by `y`, then `x`.
pub fn dm_check(n: u32, bound: u64) -> Result<Vec<PowerSolution>> {
    check_exponent(n)?;
    check_bound(bound)?;
    let found = match PowerTable::build(n, bound) {
        PowerTable::Small(p) => dm_scan(&p),
        PowerTable::Big(p) => dm_scan(&p),
    };
    Ok(found
        .into_iter()
        .map(|(x, z, y)| PowerSolution { equation: Equation::Dm, n, roots: vec![x, z, y], bound })
        .collect())
}

fn ap_scan<T: Exact>(p: &[T], length: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for r0 in 1..p.len() {
        for r1 in r0 + 1..p.len() {
            let step = p[r1].clone() - &p[r0];
            let mut roots = vec![r0 as u64, r1 as u64];
            let mut term = p[r1].clone();
            let mut from = r1 + 1;
            while roots.len() < length {
                term = term + &step;
                match p[from..].binary_search(&term) {
                    Ok(i) => {
                        from += i;
                        roots.push(from as u64);
                        from += 1;
                    }
                    Err(_) => break,
                }
            }
            if roots.len() == length {
                out.push(roots);
            }
        }
    }
    out.sort_by(|a, b| a.last().cmp(&b.last()).then_with(|| a.cmp(b)));
    out
}

/// `L`-term progressions of distinct n-th powers whose roots are all `<= B`.
pub fn ap_in_powers(n: u32, length: usize, bound: u64) -> Result<Vec<PowerSolution>> {
    check_exponent(n)?;
    check_bound(bound)?;
    if length < 3 {
        return domain("progressions need at least 3 terms");
    }
    let found = match PowerTable::build(n, bound) {
        PowerTable::Small(p) => ap_scan(&p, length),
        PowerTable::Big(p) => ap_scan(&p, length),
    };
    Ok(found
        .into_iter()
        .map(|roots| PowerSolution { equation: Equation::Ap, n, roots, bound })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GapCheck {
    Pass,
    Counterexample(u64),
}

fn pow_u128(r: u64, n: u32) -> Option<u128> {
    (r as u128).checked_pow(n)
}

/// Checks `z^n - (z-1)^n >= z^(n-1)` for every `1 <= z <= Z`.
pub fn power_gap_check(n: u32, limit: u64) -> Result<GapCheck> {
    check_exponent(n)?;
    if n < 2 {
        return domain("gap check needs n >= 2");
    }
    for z in 1..=limit {
        let holds = match (pow_u128(z, n), pow_u128(z - 1, n), pow_u128(z, n - 1)) {
            (Some(hi), Some(lo), Some(floor)) => hi - lo >= floor,
            _ => pow_big(z, n) - pow_big(z - 1, n) >= pow_big(z, n - 1),
        };
        if !holds {
            return Ok(GapCheck::Counterexample(z));
        }
    }
    Ok(GapCheck::Pass)
}

/// Longest scan `fixed_difference_pairs` will run.
pub const MAX_DIFFERENCE_SCAN: u64 = 100_000_000;

/// Every `(u, v)` with `u >= 1` and `v^n - u^n = d`, ascending.
///
/// Complete: once `v^(n-1) > d` the gap below `v^n` already exceeds `d`,
/// and gaps only grow.
pub fn fixed_difference_pairs(n: u32, d: &BigUint) -> Result<Vec<(u64, u64)>> {
    check_exponent(n)?;
    if n < 2 {
        return domain("fixed differences need n >= 2");
    }
    if d.is_zero() {
        return domain("difference must be positive");
    }
    let top = d.nth_root(n - 1);
    let top = top
        .to_u64()
        .filter(|&t| t <= MAX_DIFFERENCE_SCAN)
        .ok_or_else(|| Error::Cap(format!("difference {d} needs a scan longer than {MAX_DIFFERENCE_SCAN}")))?;
    let mut out = Vec::new();
    match d.to_u128() {
        Some(small) if pow_u128(top + 1, n).is_some() => {
            for v in 2..=top {
                let vn = (v as u128).pow(n);
                if vn <= small {
                    continue;
                }
                if let Some(u) = nth_root_exact_u128(vn - small, n) {
                    out.push((u as u64, v));
                }
            }
        }
        _ => {
            for v in 2..=top {
                let vn = pow_big(v, n);
                if vn <= *d {
                    continue;
                }
                let rest = vn - d;
                let u = rest.nth_root(n);
                if u.pow(n) == rest {
                    out.push((u.to_u64().expect("u < v"), v));
                }
            }
        }
    }
    Ok(out)
}

/// Convenience wrapper for machine-sized differences.
pub fn fixed_difference_pairs_u64(n: u32, d: u64) -> Result<Vec<(u64, u64)>> {
    fixed_difference_pairs(n, &BigUint::from(d))
}

/// Exact count of all n-th powers in `[1, N]`: `floor(N^(1/n))`.
pub fn count_all_nth_powers(n: u32, limit: u64) -> u64 {
    iroot_floor(limit as u128, n) as u64
}
