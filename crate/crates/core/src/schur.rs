//! Monochromatic solutions of `a + b = c` (with `a = b` permitted).

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{check_exponent, decompose, enumerate_smooth, PrimeBase, ResidueColor};
use crate::error::{domain, Error, Result};

/// An explicit coloring of `[1, N]` with colors in `[0, palette)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    palette: u32,
    colors: Vec<u32>,
}

impl Coloring {
    /// `colors[i]` is the color of the integer `i + 1`.
    pub fn new(palette: u32, colors: Vec<u32>) -> Result<Self> {
        if palette == 0 {
            return domain("palette must have at least one color");
        }
        if let Some(&c) = colors.iter().find(|&&c| c >= palette) {
            return domain(format!("color {c} outside palette of size {palette}"));
        }
        Ok(Coloring { palette, colors })
    }

    pub fn from_fn(limit: u64, palette: u32, f: impl Fn(u64) -> u32) -> Result<Self> {
        Coloring::new(palette, (1..=limit).map(f).collect())
    }

    pub fn constant(limit: u64) -> Self {
        Coloring { palette: 1, colors: vec![0; limit as usize] }
    }

    /// Color `m mod 2`.
    pub fn parity(limit: u64) -> Self {
        Coloring { palette: 2, colors: (1..=limit).map(|m| (m % 2) as u32).collect() }
    }

    pub fn random<R: Rng>(limit: u64, palette: u32, rng: &mut R) -> Self {
        assert!(palette > 0, "palette must be nonempty");
        Coloring {
            palette,
            colors: (0..limit).map(|_| rng.gen_range(0..palette)).collect(),
        }
    }

    /// The domain bound `N`.
    pub fn limit(&self) -> u64 {
        self.colors.len() as u64
    }

    pub fn palette(&self) -> u32 {
        self.palette
    }

    /// Color of `m`, for `1 <= m <= N`.
    pub fn color(&self, m: u64) -> u32 {
        self.colors[(m - 1) as usize]
    }

    pub fn get(&self, m: u64) -> Option<u32> {
        m.checked_sub(1).and_then(|i| self.colors.get(i as usize)).copied()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.colors
    }

    /// Members of each color class, ascending.
    pub fn classes(&self) -> Vec<Vec<u64>> {
        let mut out = vec![Vec::new(); self.palette as usize];
        for (i, &c) in self.colors.iter().enumerate() {
            out[c as usize].push(i as u64 + 1);
        }
        out
    }
}

/// `a + b = c` with `a <= b`, all three of one color.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SchurTriple<C = u32> {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub color: C,
}

pub type SmoothTriple = SchurTriple<ResidueColor>;

impl<C> SchurTriple<C> {
    /// Ordering key for witness tie-breaking: by `c`, then `a`.
    pub fn key(&self) -> (u64, u64) {
        (self.c, self.a)
    }

    pub fn as_array(&self) -> [u64; 3] {
        [self.a, self.b, self.c]
    }
}

impl SchurTriple<u32> {
    pub fn recheck(&self, coloring: &Coloring) -> Result<()> {
        let ok = self.a >= 1
            && self.a <= self.b
            && self.a.checked_add(self.b) == Some(self.c)
            && [self.a, self.b, self.c]
                .iter()
                .all(|&m| coloring.get(m) == Some(self.color));
        if ok {
            Ok(())
        } else {
            Err(Error::Recheck(format!(
                "({}, {}, {}) is not a monochromatic Schur triple of color {}",
                self.a, self.b, self.c, self.color
            )))
        }
    }
}

/// Smallest monochromatic triple by `(c, a)`, or `None` after a full scan.
pub fn find_monochromatic_triple(coloring: &Coloring) -> Option<SchurTriple> {
    let colors = coloring.as_slice();
    for c in 2..=coloring.limit() {
        let cc = colors[(c - 1) as usize];
        for a in 1..=c / 2 {
            let b = c - a;
            if colors[(a - 1) as usize] == cc && colors[(b - 1) as usize] == cc {
                return Some(SchurTriple { a, b, c, color: cc });
            }
        }
    }
    None
}

/// Number of monochromatic pairs `a <= b`, `a + b <= N`.
pub fn count_monochromatic_triples(coloring: &Coloring) -> u64 {
    count_with(coloring, false)
}

/// Same count restricted to `a < b`.
pub fn count_distinct_monochromatic_triples(coloring: &Coloring) -> u64 {
    count_with(coloring, true)
}

fn count_with(coloring: &Coloring, distinct: bool) -> u64 {
    let colors = coloring.as_slice();
    let n = colors.len();
    let mut total = 0u64;
    for c in 2..=n {
        let cc = colors[c - 1];
        let top = if distinct { (c - 1) / 2 } else { c / 2 };
        let mut here = 0u64;
        for a in 1..=top {
            here += (colors[a - 1] == cc && colors[c - a - 1] == cc) as u64;
        }
        total += here;
    }
    total
}

/// Minimum over `trials` seeded random `t`-colorings of `[1, N]` of the
/// monochromatic triple count, divided by `N^2`.
///
/// Trial `i` draws its coloring from a stream seeded by `(seed, i)`, so the
/// result does not depend on how trials are spread over threads.
pub fn min_triple_ratio(palette: u32, limit: u64, trials: u64, seed: u64) -> f64 {
    let min = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i);
            count_monochromatic_triples(&Coloring::random(limit, palette, &mut rng))
        })
        .min()
        .unwrap_or(0);
    min as f64 / (limit as f64 * limit as f64)
}

/// Per-trial random stream, independent of scheduling.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// `floor(t! * e)`, evaluated as `sum_{j=0..t} t!/j!`.
pub fn factorial_e_bound(t: u32) -> Result<u128> {
    if t == 0 {
        return domain("palette must have at least one color");
    }
    // t!/j! for j = t, t-1, ..., 0 is 1, t, t(t-1), ...
    let mut term = 1u128;
    let mut sum = 1u128;
    for j in (1..=t).rev() {
        term = term
            .checked_mul(j as u128)
            .ok_or_else(|| Error::Cap(format!("floor({t}! e) does not fit in 128 bits")))?;
        sum += term;
    }
    Ok(sum)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub max_time: Option<Duration>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn nodes(n: u64) -> Self {
        Budget { max_nodes: Some(n), max_time: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchurCertificate {
    pub colors: u32,
    /// Largest `N` for which a triple-free coloring was found.
    pub n_max: u64,
    pub witness: Coloring,
    /// `n_max + 1`; exact only when `proof_exhaustive` is set.
    pub s_t: u64,
    pub proof_exhaustive: bool,
    pub nodes: u64,
}

impl SchurCertificate {
    pub fn recheck(&self) -> Result<()> {
        if self.witness.limit() != self.n_max || self.witness.palette() != self.colors {
            return Err(Error::Recheck("witness coloring has the wrong shape".into()));
        }
        if let Some(t) = find_monochromatic_triple(&self.witness) {
            return Err(Error::Recheck(format!(
                "witness coloring contains ({}, {}, {})",
                t.a, t.b, t.c
            )));
        }
        if self.s_t != self.n_max + 1 {
            return Err(Error::Recheck("s_t must be n_max + 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone)]
struct BitSet(Vec<u64>);

impl BitSet {
    fn new(bits: usize) -> Self {
        BitSet(vec![0; bits / 64 + 1])
    }
    fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn remove(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }
    /// True if `a + (m - a) = m` for some `a` in the set.
    fn has_pair_summing_to(&self, m: usize) -> bool {
        for (w, &word) in self.0.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let a = w * 64 + bits.trailing_zeros() as usize;
                if 2 * a > m {
                    return false;
                }
                if self.contains(m - a) {
                    return true;
                }
                bits &= bits - 1;
            }
        }
        false
    }
}

struct SchurSearch {
    colors: u32,
    cap: usize,
    classes: Vec<BitSet>,
    assignment: Vec<u32>,
    best: Vec<u32>,
    nodes: u64,
    budget: Budget,
    started: Instant,
    tripped: bool,
}

impl SchurSearch {
    fn out_of_budget(&mut self) -> bool {
        if self.tripped {
            return true;
        }
        if self.budget.max_nodes.is_some_and(|n| self.nodes >= n) {
            self.tripped = true;
        }
        if self.nodes.is_multiple_of(4096)
            && self.budget.max_time.is_some_and(|t| self.started.elapsed() >= t)
        {
            self.tripped = true;
        }
        self.tripped
    }

    /// `assignment` holds colors of `1..=m-1`; try to color `m`.
    fn extend(&mut self, m: usize, used: u32) {
        if self.assignment.len() > self.best.len() {
            self.best = self.assignment.clone();
        }
        if m > self.cap || self.out_of_budget() {
            return;
        }
        // a fresh color may only be the next unused one
        let choices = (used + 1).min(self.colors);
        for c in 0..choices {
            self.nodes += 1;
            let class = &mut self.classes[c as usize];
            if class.has_pair_summing_to(m) {
                continue;
            }
            class.insert(m);
            self.assignment.push(c);
            self.extend(m + 1, used.max(c + 1));
            self.assignment.pop();
            self.classes[c as usize].remove(m);
            if self.tripped {
                return;
            }
        }
    }
}

/// Exhaustive backtracking for `s_t`, the least `N` such that every
/// `t`-coloring of `[1, N]` has a monochromatic `a + b = c`.
///
/// Integers are colored `1, 2, 3, ...` in order with `color(1) = 0`, and a
/// color index is only opened after all smaller ones are in use.
pub fn schur_number(colors: u32, budget: Budget) -> Result<SchurCertificate> {
    let bound = factorial_e_bound(colors)?;
    if bound > 1 << 20 {
        return Err(Error::Cap(format!("{colors} colors is beyond exhaustive range")));
    }
    let cap = bound as usize;
    let mut search = SchurSearch {
        colors,
        cap,
        classes: vec![BitSet::new(cap + 1); colors as usize],
        assignment: Vec::with_capacity(cap),
        best: Vec::new(),
        nodes: 0,
        budget,
        started: Instant::now(),
        tripped: false,
    };
    search.extend(1, 0);
    let n_max = search.best.len() as u64;
    let witness = Coloring::new(colors, search.best)?;
    let cert = SchurCertificate {
        colors,
        n_max,
        witness,
        s_t: n_max + 1,
        proof_exhaustive: !search.tripped,
        nodes: search.nodes,
    };
    cert.recheck()?;
    Ok(cert)
}

fn smooth_triple_at(base: &PrimeBase, n: u32, a: u64, c: u64, color_c: &ResidueColor) -> Option<SmoothTriple> {
    let b = c - a;
    let da = decompose(a, base, n).ok()??;
    if da.color != *color_c {
        return None;
    }
    let db = decompose(b, base, n).ok()??;
    (db.color == *color_c).then(|| SchurTriple { a, b, c, color: color_c.clone() })
}

fn smooth_colors(base: &PrimeBase, n: u32, limit: u64) -> Result<(Vec<u64>, Vec<ResidueColor>)> {
    check_exponent(n)?;
    let smooth = enumerate_smooth(base, limit)?;
    let colors = smooth
        .iter()
        .map(|&m| decompose(m, base, n).map(|d| d.expect("enumerated values are smooth").color))
        .collect::<Result<_>>()?;
    Ok((smooth, colors))
}

/// Smallest (by `c`, then `a`) triple of smooth integers `<= N` with
/// `a + b = c` and one smooth color.
pub fn find_smooth_monochromatic_triple(
    base: &PrimeBase,
    n: u32,
    limit: u64,
) -> Result<Option<SmoothTriple>> {
    let (smooth, colors) = smooth_colors(base, n, limit)?;
    Ok(smooth
        .par_iter()
        .zip(colors.par_iter())
        .find_map_first(|(&c, color_c)| {
            smooth
                .iter()
                .take_while(|&&a| 2 * a <= c)
                .find_map(|&a| smooth_triple_at(base, n, a, c, color_c))
        }))
}

/// Every smooth monochromatic triple `<= N`, ordered by `(c, a)`.
pub fn smooth_monochromatic_triples(base: &PrimeBase, n: u32, limit: u64) -> Result<Vec<SmoothTriple>> {
    let (smooth, colors) = smooth_colors(base, n, limit)?;
    Ok(smooth
        .par_iter()
        .zip(colors.par_iter())
        .flat_map_iter(|(&c, color_c)| {
            smooth
                .iter()
                .take_while(move |&&a| 2 * a <= c)
                .filter_map(move |&a| smooth_triple_at(base, n, a, c, color_c))
        })
        .collect())
}

/// Pairs of smooth `a <= b` with `a + b <= N`, and how many of those sums
/// are not smooth.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EscapeStats {
    pub smooth_pairs: u64,
    pub non_smooth_sums: u64,
}

impl EscapeStats {
    pub fn fraction(&self) -> f64 {
        if self.smooth_pairs == 0 {
            0.0
        } else {
            self.non_smooth_sums as f64 / self.smooth_pairs as f64
        }
    }
}

pub fn smooth_sum_escape(base: &PrimeBase, limit: u64) -> Result<EscapeStats> {
    let smooth = enumerate_smooth(base, limit)?;
    let (pairs, escapes) = smooth
        .par_iter()
        .enumerate()
        .map(|(i, &a)| {
            let mut pairs = 0u64;
            let mut escapes = 0u64;
            for &b in &smooth[i..] {
                if a + b > limit {
                    break;
                }
                pairs += 1;
                escapes += smooth.binary_search(&(a + b)).is_err() as u64;
            }
            (pairs, escapes)
        })
        .reduce(|| (0, 0), |x, y| (x.0 + y.0, x.1 + y.1));
    Ok(EscapeStats { smooth_pairs: pairs, non_smooth_sums: escapes })
}

/// Divides a smooth monochromatic triple by its common `R`, giving
/// `x^n + y^n = z^n`.
pub fn extract_nth_power_equation(triple: &SmoothTriple, base: &PrimeBase, n: u32) -> Result<(u64, u64, u64)> {
    if !triple.color.is_smooth() {
        return domain("triple color is not smooth");
    }
    let parts = [triple.a, triple.b, triple.c]
        .iter()
        .map(|&m| decompose(m, base, n))
        .collect::<Result<Vec<_>>>()?;
    let mut qs = [0u64; 3];
    for (slot, part) in qs.iter_mut().zip(&parts) {
        match part {
            Some(d) if d.color == triple.color => *slot = d.q,
            _ => return domain("triple is not monochromatic under the smooth coloring"),
        }
    }
    let [x, y, z] = qs;
    let pow = |v: u64| BigUint::from(v).pow(n);
    if triple.a + triple.b != triple.c || pow(x) + pow(y) != pow(z) {
        return Err(Error::Recheck(format!(
            "extracted ({x}, {y}, {z}) does not satisfy x^{n} + y^{n} = z^{n}"
        )));
    }
    Ok((x, y, z))
}
