//! Deliberately naive reference implementations.
//!
//! Nothing here calls into the optimized modules; each routine re-derives
//! its answer from first principles so the two can be compared.

use num_bigint::BigUint;

fn pow(r: u64, n: u32) -> BigUint {
    BigUint::from(r).pow(n)
}

/// Every prime factor of `m` by trial division over all `d >= 2`.
fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= m {
        while m.is_multiple_of(d) {
            out.push(d);
            m /= d;
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// `m <= N` all of whose prime factors are in `primes`.
pub fn oracle_smooth_sweep(primes: &[u64], limit: u64) -> Vec<u64> {
    (1..=limit)
        .filter(|&m| prime_factors(m).iter().all(|p| primes.contains(p)))
        .collect()
}

/// `(x, y, z)`, `x <= y < z <= B`, with `x^n + y^n = z^n`, by a plain triple loop.
pub fn oracle_triple_loop(n: u32, bound: u64) -> Vec<(u64, u64, u64)> {
    let mut out = Vec::new();
    for z in 1..=bound {
        for x in 1..z {
            for y in x..z {
                if pow(x, n) + pow(y, n) == pow(z, n) {
                    out.push((x, y, z));
                }
            }
        }
    }
    out
}

/// `(x, z, y)`, `x < z < y <= B`, with `x^n + y^n = 2 z^n`, ordered by `y` then `x`.
pub fn oracle_triple_loop_dm(n: u32, bound: u64) -> Vec<(u64, u64, u64)> {
    let mut out = Vec::new();
    for y in 1..=bound {
        for x in 1..y {
            for z in x + 1..y {
                if pow(x, n) + pow(y, n) == pow(z, n) * 2u32 {
                    out.push((x, z, y));
                }
            }
        }
    }
    out
}

/// True if `colors` (color of `i + 1` at index `i`) has `a + b = c` in one class.
pub fn has_mono_triple(colors: &[u32]) -> bool {
    let n = colors.len();
    (1..=n).any(|a| (a..=n).any(|b| a + b <= n && colors[a - 1] == colors[b - 1] && colors[b - 1] == colors[a + b - 1]))
}

/// Runs `predicate` on every `t`-coloring of `[1, N]`; returns
/// `(passing, total)`. Refuses more than `2^25` colorings.
pub fn oracle_all_colorings(t: u32, limit: usize, predicate: impl Fn(&[u32]) -> bool) -> Option<(u64, u64)> {
    let total = (t as u64).checked_pow(limit as u32).filter(|&x| x <= 1 << 25)?;
    let mut colors = vec![0u32; limit];
    let mut passing = 0;
    for code in 0..total {
        let mut rest = code;
        for c in colors.iter_mut() {
            *c = (rest % t as u64) as u32;
            rest /= t as u64;
        }
        passing += predicate(&colors) as u64;
    }
    Some((passing, total))
}

/// Two-colorings of `K_V` (edges in lexicographic order) with no
/// monochromatic triangle.
pub fn oracle_triangle_free_count(v: usize) -> u64 {
    let edges: Vec<(usize, usize)> = (0..v).flat_map(|i| (i + 1..v).map(move |j| (i, j))).collect();
    let mut count = 0;
    for mask in 0u64..1 << edges.len() {
        let color = |i: usize, j: usize| {
            let e = edges.iter().position(|&p| p == (i.min(j), i.max(j))).unwrap();
            mask >> e & 1
        };
        let mut clean = true;
        'scan: for i in 0..v {
            for j in i + 1..v {
                for k in j + 1..v {
                    if color(i, j) == color(i, k) && color(i, k) == color(j, k) {
                        clean = false;
                        break 'scan;
                    }
                }
            }
        }
        count += clean as u64;
    }
    count
}

/// `(u, v)` with `1 <= u < v <= d + 1` and `v^n - u^n = d`.
pub fn oracle_fixed_difference(n: u32, d: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for v in 1..=d + 1 {
        for u in 1..v {
            if pow(v, n) - pow(u, n) == BigUint::from(d) {
                out.push((u, v));
            }
        }
    }
    out
}

/// [`oracle_fixed_difference`] for every `d <= d_max` at once: all pairs
/// `u < v <= d_max + 1` are enumerated and bucketed by `v^n - u^n`.
/// Entry `d` is sorted by `v`, then `u`.
pub fn oracle_fixed_difference_all(n: u32, d_max: u64) -> Vec<Vec<(u64, u64)>> {
    let mut out = vec![Vec::new(); d_max as usize + 1];
    let cap = BigUint::from(d_max);
    for v in 1..=d_max + 1 {
        let pv = pow(v, n);
        for u in 1..v {
            let diff = &pv - pow(u, n);
            if diff <= cap {
                let d: u64 = diff.try_into().expect("bounded by d_max");
                out[d as usize].push((u, v));
            }
        }
    }
    out
}

/// The step-by-step construction: anchor `a_i` keeps the most frequent
/// color `c_i` (ties to the smallest) among the survivors, until some
/// `c_i` repeats. Returns `(anchors, partners, color)`.
pub fn oracle_iterative_k2(
    universe: &[u64],
    rule: impl Fn(u64, u64) -> u32,
    t: u32,
    w: usize,
) -> Option<([u64; 2], Vec<u64>, u32)> {
    let anchors = universe.get(..t as usize + 1)?;
    let mut survivors: Vec<u64> = universe[t as usize + 1..].to_vec();
    let mut chosen: Vec<u32> = Vec::new();
    for (i, &a) in anchors.iter().enumerate() {
        let mut counts = vec![0usize; t as usize];
        for &x in &survivors {
            counts[rule(a, x) as usize] += 1;
        }
        let best = (0..t as usize).max_by_key(|&c| (counts[c], std::cmp::Reverse(c)))?;
        survivors.retain(|&x| rule(a, x) as usize == best);
        if let Some(j) = chosen.iter().position(|&c| c as usize == best) {
            if survivors.len() < w {
                return None;
            }
            survivors.truncate(w);
            return Some(([anchors[j], anchors[i]], survivors, best as u32));
        }
        chosen.push(best as u32);
    }
    None
}

/// Smallest `a_1 < ... < a_s` (lexicographic) whose nonempty subset sums are
/// pairwise distinct, `<= N` and of one color, by trying every `s`-subset.
pub fn oracle_folkman(colors: &[u32], s: usize) -> Option<Vec<u64>> {
    let n = colors.len() as u64;
    if (s as u64) > n {
        return None;
    }
    let mut set: Vec<u64> = (1..=s as u64).collect();
    loop {
        if set.iter().all(|&x| x <= n) {
            let mut ok = true;
            let target = colors[set[0] as usize - 1];
            let mut seen = Vec::new();
            for mask in 1u32..1 << s {
                let sum: u64 = (0..s).filter(|i| mask >> i & 1 == 1).map(|i| set[i]).sum();
                if sum > n || colors[sum as usize - 1] != target || seen.contains(&sum) {
                    ok = false;
                    break;
                }
                seen.push(sum);
            }
            if ok {
                return Some(set);
            }
        }
        // next combination of s values from [1, n]
        let mut i = s;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if set[i] < n - (s - 1 - i) as u64 {
                break;
            }
        }
        set[i] += 1;
        for j in i + 1..s {
            set[j] = set[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_two_coloring_of_five_has_a_triple() {
        assert_eq!(oracle_all_colorings(2, 5, has_mono_triple), Some((32, 32)));
        let (pass, total) = oracle_all_colorings(2, 4, has_mono_triple).unwrap();
        assert_eq!(total - pass, 2); // {1,4},{2,3} and its swap
    }

    #[test]
    fn guard_rejects_large_enumerations() {
        assert_eq!(oracle_all_colorings(3, 20, |_| true), None);
    }

    #[test]
    fn smooth_sweep_small() {
        assert_eq!(oracle_smooth_sweep(&[2, 3], 20), [1, 2, 3, 4, 6, 8, 9, 12, 16, 18]);
        assert_eq!(oracle_smooth_sweep(&[2, 3], 100).len(), 20);
    }

    #[test]
    fn loops_small() {
        assert_eq!(oracle_triple_loop(2, 13), [(3, 4, 5), (6, 8, 10), (5, 12, 13)]);
        assert!(oracle_triple_loop_dm(2, 10).contains(&(1, 5, 7)));
        assert!(oracle_triple_loop(3, 30).is_empty());
    }

    #[test]
    fn ramsey_k5_k6() {
        assert_eq!(oracle_triangle_free_count(6), 0);
        // the pentagon and its complement
        assert_eq!(oracle_triangle_free_count(5), 12);
    }

    #[test]
    fn fixed_difference_sweep_matches_single() {
        let all = oracle_fixed_difference_all(2, 60);
        for d in 0..=60 {
            if d > 0 {
                assert_eq!(all[d as usize], oracle_fixed_difference(2, d), "d = {d}");
            }
        }
        assert_eq!(all[15], [(1, 4), (7, 8)]);
    }

    #[test]
    fn iterative_k2_constant() {
        let u: Vec<u64> = (1..=10).collect();
        assert_eq!(oracle_iterative_k2(&u, |_, _| 0, 1, 5), Some(([1, 2], vec![3, 4, 5, 6, 7], 0)));
    }

    #[test]
    fn folkman_brute_force() {
        assert_eq!(oracle_folkman(&[0; 7], 3), Some(vec![1, 2, 4]));
        let parity: Vec<u32> = (1..=20).map(|m| m % 2).collect();
        assert_eq!(oracle_folkman(&parity, 3), Some(vec![2, 4, 8]));
        assert_eq!(oracle_folkman(&parity[..3], 2), None);
    }
}
