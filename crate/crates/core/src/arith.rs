//! Exact arithmetic over a fixed, finite prime base.
//!
//! Every positive integer that factors completely over the base is
//! `m = Q^n * R` with `R` n-th-power-free; its color is the exponent vector
//! of `R`, i.e. the exponents of `m` reduced mod `n`. Integers with a prime
//! factor outside the base get the [`ResidueColor::NonSmooth`] sentinel.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

pub const MAX_PRIMES: usize = 16;
pub const MAX_EXPONENT: u32 = 16;
pub const MAX_LIMIT: u64 = 1 << 40;

/// Upper bound on the length of a materialized smooth list.
pub const MAX_ENUMERATION: usize = 50_000_000;

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for the full `u64` range.
pub fn is_prime(p: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if p < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if p.is_multiple_of(w) {
            return p == w;
        }
    }
    let mut d = p - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, p);
        if x == 1 || x == p - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, p);
            if x == p - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The complete list of primes of a finite world, strictly ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct PrimeBase {
    primes: Vec<u64>,
}

impl PrimeBase {
    pub fn new(primes: Vec<u64>) -> Result<Self> {
        if primes.is_empty() {
            return domain("prime base must contain at least one prime");
        }
        if primes.len() > MAX_PRIMES {
            return Err(Error::Cap(format!(
                "prime base has {} primes, at most {MAX_PRIMES} allowed",
                primes.len()
            )));
        }
        if let Some(&bad) = primes.iter().find(|&&p| !is_prime(p)) {
            return domain(format!("{bad} is not prime"));
        }
        if primes.windows(2).any(|w| w[0] >= w[1]) {
            return domain("primes must be strictly increasing");
        }
        Ok(PrimeBase { primes })
    }

    /// The first `k` primes.
    pub fn first(k: usize) -> Result<Self> {
        let primes = (2u64..).filter(|&p| is_prime(p)).take(k).collect();
        PrimeBase::new(primes)
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }
}

impl TryFrom<Vec<u64>> for PrimeBase {
    type Error = Error;

    fn try_from(primes: Vec<u64>) -> Result<Self> {
        PrimeBase::new(primes)
    }
}

impl From<PrimeBase> for Vec<u64> {
    fn from(base: PrimeBase) -> Self {
        base.primes
    }
}

impl fmt::Display for PrimeBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.primes.iter().map(u64::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExponentVector(pub Vec<u32>);

impl ExponentVector {
    pub fn exps(&self) -> &[u32] {
        &self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Factorization {
    Smooth(ExponentVector),
    /// The part of `m` left after dividing out every base prime.
    NonSmooth { cofactor: u64 },
}

pub fn check_exponent(n: u32) -> Result<()> {
    if n == 0 {
        return domain("exponent n must be at least 1");
    }
    if n > MAX_EXPONENT {
        return Err(Error::Cap(format!(
            "exponent {n} exceeds the cap of {MAX_EXPONENT}"
        )));
    }
    Ok(())
}

pub fn factor_over_base(m: u64, base: &PrimeBase) -> Result<Factorization> {
    if m == 0 {
        return domain("cannot factor 0");
    }
    let mut rest = m;
    let mut exps = Vec::with_capacity(base.len());
    for &p in base.primes() {
        let mut e = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            e += 1;
        }
        exps.push(e);
    }
    Ok(if rest == 1 {
        Factorization::Smooth(ExponentVector(exps))
    } else {
        Factorization::NonSmooth { cofactor: rest }
    })
}

/// True when every prime factor of `m` lies in the base.
pub fn is_smooth(m: u64, base: &PrimeBase) -> bool {
    if m == 0 {
        return false;
    }
    let mut rest = m;
    for &p in base.primes() {
        while rest.is_multiple_of(p) {
            rest /= p;
        }
    }
    rest == 1
}

/// Exponents mod `n` of a smooth integer, or the sentinel.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResidueColor {
    Smooth(Vec<u32>),
    NonSmooth,
}

impl ResidueColor {
    pub fn is_smooth(&self) -> bool {
        matches!(self, ResidueColor::Smooth(_))
    }

    pub fn residues(&self) -> Option<&[u32]> {
        match self {
            ResidueColor::Smooth(r) => Some(r),
            ResidueColor::NonSmooth => None,
        }
    }
}

impl fmt::Display for ResidueColor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResidueColor::Smooth(r) => {
                let parts: Vec<String> = r.iter().map(u32::to_string).collect();
                write!(f, "({})", parts.join(","))
            }
            ResidueColor::NonSmooth => f.write_str("non-smooth"),
        }
    }
}

/// `m = q^n * r_part` with `r_part` n-th-power-free over the base.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmoothDecomposition {
    pub m: u64,
    pub q: u64,
    pub r_part: u64,
    pub color: ResidueColor,
}

/// Returns `None` exactly when `m` is not smooth over the base.
pub fn decompose(m: u64, base: &PrimeBase, n: u32) -> Result<Option<SmoothDecomposition>> {
    check_exponent(n)?;
    let exps = match factor_over_base(m, base)? {
        Factorization::Smooth(v) => v.0,
        Factorization::NonSmooth { .. } => return Ok(None),
    };
    let mut q = 1u64;
    let mut r_part = 1u64;
    let mut residues = Vec::with_capacity(exps.len());
    for (&p, &e) in base.primes().iter().zip(&exps) {
        // both factors divide m, so neither product can overflow
        q *= p.pow(e / n);
        r_part *= p.pow(e % n);
        residues.push(e % n);
    }
    Ok(Some(SmoothDecomposition {
        m,
        q,
        r_part,
        color: ResidueColor::Smooth(residues),
    }))
}

pub fn color_of(m: u64, base: &PrimeBase, n: u32) -> Result<ResidueColor> {
    Ok(match decompose(m, base, n)? {
        Some(d) => d.color,
        None => ResidueColor::NonSmooth,
    })
}

/// Number of colors in the extended palette: `n^k` smooth colors plus the sentinel.
pub fn palette_size(base: &PrimeBase, n: u32) -> Result<u128> {
    check_exponent(n)?;
    (n as u128)
        .checked_pow(base.len() as u32)
        .and_then(|s| s.checked_add(1))
        .ok_or_else(|| Error::Cap(format!("palette {n}^{} + 1 does not fit", base.len())))
}

/// Dense palette index: mixed-radix value of the residues, sentinel last.
pub fn color_index(color: &ResidueColor, n: u32, k: usize) -> u128 {
    match color {
        ResidueColor::Smooth(r) => r.iter().fold(0u128, |acc, &x| acc * n as u128 + x as u128),
        ResidueColor::NonSmooth => (n as u128).pow(k as u32),
    }
}

/// Inverse of [`color_index`].
pub fn color_from_index(index: u128, n: u32, k: usize) -> ResidueColor {
    let smooth_colors = (n as u128).pow(k as u32);
    if index >= smooth_colors {
        return ResidueColor::NonSmooth;
    }
    let mut residues = vec![0u32; k];
    let mut rest = index;
    for slot in residues.iter_mut().rev() {
        *slot = (rest % n as u128) as u32;
        rest /= n as u128;
    }
    ResidueColor::Smooth(residues)
}

/// `P = prod p_i^(n - r_i)`: multiplying any integer of this color by `P`
/// yields a perfect n-th power.
pub fn power_multiplier(color: &ResidueColor, base: &PrimeBase, n: u32) -> Result<BigUint> {
    check_exponent(n)?;
    let residues = match color {
        ResidueColor::Smooth(r) => r,
        ResidueColor::NonSmooth => return domain("the non-smooth color has no power multiplier"),
    };
    if residues.len() != base.len() {
        return domain("color length does not match the prime base");
    }
    if let Some(&r) = residues.iter().find(|&&r| r >= n) {
        return domain(format!("residue {r} is not below the modulus {n}"));
    }
    Ok(base
        .primes()
        .iter()
        .zip(residues)
        .fold(BigUint::one(), |acc, (&p, &r)| {
            acc * BigUint::from(p).pow(n - r)
        }))
}

/// All base-smooth integers in `[1, limit]`, ascending.
pub fn enumerate_smooth(base: &PrimeBase, limit: u64) -> Result<Vec<u64>> {
    if limit == 0 {
        return domain("limit must be positive");
    }
    if limit > MAX_LIMIT {
        return Err(Error::Cap(format!("limit {limit} exceeds 2^40")));
    }
    let mut out = vec![1u64];
    for &p in base.primes() {
        let mut grown = Vec::new();
        for &m in &out {
            let mut v = m;
            while let Some(next) = v.checked_mul(p).filter(|&x| x <= limit) {
                grown.push(next);
                v = next;
            }
        }
        out.extend(grown);
        if out.len() > MAX_ENUMERATION {
            return Err(Error::Cap(format!(
                "more than {MAX_ENUMERATION} smooth integers below {limit}"
            )));
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// `floor(v^(1/n))` computed exactly.
pub fn iroot_floor(v: u128, n: u32) -> u128 {
    assert!(n >= 1, "root degree must be positive");
    if n == 1 || v < 2 {
        return v;
    }
    let mut r = (v as f64).powf(1.0 / n as f64) as u128;
    let fits = |r: u128| r.checked_pow(n).is_some_and(|p| p <= v);
    while !fits(r) {
        r -= 1;
    }
    while fits(r + 1) {
        r += 1;
    }
    r
}

/// `Some(r)` iff `r^n == v`.
pub fn nth_root_exact_u128(v: u128, n: u32) -> Option<u128> {
    let r = iroot_floor(v, n);
    (r.checked_pow(n) == Some(v)).then_some(r)
}

pub fn nth_root_exact(v: &BigUint, n: u32) -> Option<BigUint> {
    assert!(n >= 1, "root degree must be positive");
    if let Some(small) = v.to_u128() {
        return nth_root_exact_u128(small, n).map(BigUint::from);
    }
    let r = v.nth_root(n);
    (r.pow(n) == *v).then_some(r)
}

pub fn is_perfect_power(v: &BigUint, n: u32) -> bool {
    !v.is_zero() && nth_root_exact(v, n).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base(p: &[u64]) -> PrimeBase {
        PrimeBase::new(p.to_vec()).unwrap()
    }

    #[test]
    fn primality_small_and_large() {
        let small: Vec<u64> = (0..50).filter(|&p| is_prime(p)).collect();
        assert_eq!(small, [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]);
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to 2,3,5,7
    }

    #[test]
    fn prime_base_validation() {
        assert!(PrimeBase::new(vec![2, 9]).is_err());
        assert!(PrimeBase::new(vec![3, 2]).is_err());
        assert!(PrimeBase::new(vec![2, 2]).is_err());
        assert!(PrimeBase::new(vec![]).is_err());
        assert!(matches!(PrimeBase::first(17), Err(Error::Cap(_))));
        assert_eq!(PrimeBase::first(3).unwrap().primes(), &[2, 3, 5]);
    }

    #[test]
    fn factor_examples() {
        let b = base(&[2, 3, 5]);
        assert_eq!(
            factor_over_base(72, &b).unwrap(),
            Factorization::Smooth(ExponentVector(vec![3, 2, 0]))
        );
        assert_eq!(
            factor_over_base(1, &b).unwrap(),
            Factorization::Smooth(ExponentVector(vec![0, 0, 0]))
        );
        assert_eq!(
            factor_over_base(14, &b).unwrap(),
            Factorization::NonSmooth { cofactor: 7 }
        );
        assert!(matches!(factor_over_base(0, &b), Err(Error::Domain(_))));
    }

    #[test]
    fn decompose_examples() {
        let d = decompose(72, &base(&[2, 3, 5]), 3).unwrap().unwrap();
        assert_eq!((d.q, d.r_part), (2, 9));
        assert_eq!(d.color, ResidueColor::Smooth(vec![0, 2, 0]));

        let d = decompose(1, &base(&[2, 3]), 2).unwrap().unwrap();
        assert_eq!((d.q, d.r_part), (1, 1));
        assert_eq!(d.color, ResidueColor::Smooth(vec![0, 0]));

        let d = decompose(216_000, &base(&[2, 3, 5]), 3).unwrap().unwrap();
        assert_eq!((d.q, d.r_part), (60, 1));
        assert_eq!(d.color, ResidueColor::Smooth(vec![0, 0, 0]));

        assert_eq!(decompose(14, &base(&[2, 3, 5]), 3).unwrap(), None);
        assert!(decompose(8, &base(&[2]), 0).is_err());
    }

    #[test]
    fn color_examples() {
        assert_eq!(
            color_of(72, &base(&[2, 3, 5]), 3).unwrap(),
            ResidueColor::Smooth(vec![0, 2, 0])
        );
        assert_eq!(color_of(64, &base(&[2]), 3).unwrap(), ResidueColor::Smooth(vec![0]));
        assert_eq!(color_of(10, &base(&[2, 3]), 2).unwrap(), ResidueColor::NonSmooth);
    }

    #[test]
    fn multiplier_examples() {
        let b = base(&[2, 3, 5]);
        let p = power_multiplier(&ResidueColor::Smooth(vec![0, 2, 0]), &b, 3).unwrap();
        assert_eq!(p, BigUint::from(3000u32));
        assert_eq!(nth_root_exact(&(p * 72u32), 3), Some(BigUint::from(60u32)));

        let b2 = base(&[2]);
        let p = power_multiplier(&ResidueColor::Smooth(vec![0]), &b2, 2).unwrap();
        assert_eq!(p, BigUint::from(4u32));
        let p = power_multiplier(&ResidueColor::Smooth(vec![1]), &b2, 2).unwrap();
        assert_eq!(p, BigUint::from(2u32));

        assert!(power_multiplier(&ResidueColor::NonSmooth, &b2, 2).is_err());
        assert!(power_multiplier(&ResidueColor::Smooth(vec![2]), &b2, 2).is_err());
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(enumerate_smooth(&base(&[2]), 10).unwrap(), [1, 2, 4, 8]);
        assert_eq!(
            enumerate_smooth(&base(&[2, 3]), 20).unwrap(),
            [1, 2, 3, 4, 6, 8, 9, 12, 16, 18]
        );
        assert_eq!(enumerate_smooth(&base(&[2, 3]), 100).unwrap().len(), 20);
        assert!(enumerate_smooth(&base(&[2]), MAX_LIMIT + 1).is_err());
    }

    #[test]
    fn roots() {
        assert_eq!(nth_root_exact(&BigUint::from(216_000u32), 3), Some(BigUint::from(60u32)));
        assert_eq!(nth_root_exact(&BigUint::from(1u32), 7), Some(BigUint::from(1u32)));
        assert_eq!(nth_root_exact(&BigUint::from(50u32), 2), None);
        assert_eq!(iroot_floor(u128::MAX, 2), u64::MAX as u128);
        assert_eq!(iroot_floor(1_000_000, 3), 100);
        assert_eq!(iroot_floor(999_999, 3), 99);
        let big = BigUint::from(3u32).pow(100);
        assert_eq!(nth_root_exact(&big, 50), Some(BigUint::from(9u32)));
        assert_eq!(nth_root_exact(&(big + 1u32), 50), None);
    }

    #[test]
    fn palette_indexing_round_trips() {
        for idx in 0..=27u128 {
            let c = color_from_index(idx, 3, 3);
            assert_eq!(color_index(&c, 3, 3), idx);
        }
        assert_eq!(color_from_index(27, 3, 3), ResidueColor::NonSmooth);
        assert_eq!(palette_size(&base(&[2, 3, 5]), 3).unwrap(), 28);
    }
}
