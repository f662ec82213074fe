//! Sets whose every nonempty subset sum has one color.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{check_exponent, decompose, enumerate_smooth, nth_root_exact_u128, PrimeBase, ResidueColor};
use crate::error::{domain, Error, Result};
use crate::schur::Coloring;

pub const MAX_FOLKMAN_SIZE: usize = 5;

/// A subset sum with the 1-based indices of the elements it adds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetSum {
    pub indices: Vec<usize>,
    pub sum: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FolkmanWitness<C = u32> {
    pub elements: Vec<u64>,
    pub color: C,
    /// All `2^s - 1` sums, ordered by index bitmask.
    pub sums: Vec<SubsetSum>,
}

pub fn subset_sums(elements: &[u64]) -> Vec<SubsetSum> {
    (1usize..1 << elements.len())
        .map(|mask| {
            let indices: Vec<usize> = (0..elements.len()).filter(|i| mask >> i & 1 == 1).collect();
            SubsetSum {
                sum: indices.iter().map(|&i| elements[i]).sum(),
                indices: indices.into_iter().map(|i| i + 1).collect(),
            }
        })
        .collect()
}

impl<C: PartialEq> FolkmanWitness<C> {
    fn with_sums(elements: Vec<u64>, color: C) -> Self {
        let sums = subset_sums(&elements);
        FolkmanWitness { elements, color, sums }
    }

    /// Recomputes every subset sum and looks up its color.
    pub fn recheck(&self, color_of: impl Fn(u64) -> Option<C>) -> Result<()> {
        let distinct = self.elements.windows(2).all(|w| w[0] < w[1])
            && self.elements.first().is_some_and(|&a| a >= 1);
        if !distinct {
            return Err(Error::Recheck("elements must be positive and strictly ascending".into()));
        }
        let fresh = subset_sums(&self.elements);
        if fresh != self.sums {
            return Err(Error::Recheck("listed subset sums do not match the elements".into()));
        }
        let mut values: Vec<u64> = fresh.iter().map(|s| s.sum).collect();
        values.sort_unstable();
        if values.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Recheck("subset sums are not pairwise distinct".into()));
        }
        for s in &fresh {
            if color_of(s.sum).as_ref() != Some(&self.color) {
                return Err(Error::Recheck(format!("subset sum {} has the wrong color", s.sum)));
            }
        }
        Ok(())
    }
}

fn check_size(s: usize) -> Result<()> {
    if s < 2 {
        return domain("Folkman sets need s >= 2");
    }
    if s > MAX_FOLKMAN_SIZE {
        return Err(Error::Cap(format!("s = {s} exceeds the cap of {MAX_FOLKMAN_SIZE}")));
    }
    Ok(())
}

/// Depth-first search shared by both entry points. `candidates` is
/// ascending; `color(v)` is `None` outside the admissible set.
struct Dfs<'a, C, F: Fn(u64) -> Option<C>> {
    candidates: &'a [u64],
    color: F,
    limit: u64,
    s: usize,
}

impl<C: PartialEq + Clone, F: Fn(u64) -> Option<C>> Dfs<'_, C, F> {
    /// Extends `chosen` (whose subset sums are `sums`, all of color `target`)
    /// with candidates from index `from` on. Calls `emit` for each complete
    /// set, in lexicographic order; stops when `emit` returns false.
    fn run(
        &self,
        chosen: &mut Vec<u64>,
        sums: &mut Vec<u64>,
        total: u64,
        target: &C,
        from: usize,
        emit: &mut dyn FnMut(&[u64]) -> bool,
    ) -> bool {
        if chosen.len() == self.s {
            return emit(chosen);
        }
        for (offset, &x) in self.candidates[from..].iter().enumerate() {
            if total + x > self.limit {
                break;
            }
            let old = sums.len();
            // new sums are x and p + x; each must be fresh and on-color
            let fresh = |v: u64| !sums[..old].contains(&v) && (self.color)(v).as_ref() == Some(target);
            let fits = fresh(x) && sums[..old].iter().all(|&p| fresh(p + x));
            if !fits {
                continue;
            }
            sums.push(x);
            for i in 0..old {
                let v = sums[i] + x;
                sums.push(v);
            }
            chosen.push(x);
            let go_on = self.run(chosen, sums, total + x, target, from + offset + 1, emit);
            chosen.pop();
            sums.truncate(old);
            if !go_on {
                return false;
            }
        }
        true
    }

    /// Witnesses whose first element is `candidates[first]`.
    fn rooted_at(&self, first: usize, max: usize) -> Vec<Vec<u64>> {
        let a = self.candidates[first];
        let Some(target) = (self.color)(a) else {
            return Vec::new();
        };
        let mut found = Vec::new();
        let mut emit = |set: &[u64]| {
            found.push(set.to_vec());
            found.len() < max
        };
        self.run(&mut vec![a], &mut vec![a], a, &target, first + 1, &mut emit);
        found
    }
}

/// Lexicographically smallest `a_1 < ... < a_s` whose `2^s - 1` subset sums
/// are pairwise distinct, `<= N` and monochromatic.
pub fn find_folkman_set(coloring: &Coloring, s: usize) -> Result<Option<FolkmanWitness>> {
    check_size(s)?;
    let candidates: Vec<u64> = (1..=coloring.limit()).collect();
    let dfs = Dfs {
        candidates: &candidates,
        color: |m| coloring.get(m),
        limit: coloring.limit(),
        s,
    };
    let found = (0..candidates.len())
        .into_par_iter()
        .find_map_first(|i| dfs.rooted_at(i, 1).into_iter().next());
    Ok(found.map(|elements| {
        let color = coloring.color(elements[0]);
        FolkmanWitness::with_sums(elements, color)
    }))
}

/// A smooth Folkman set together with `sum / R` roots for every subset sum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmoothFolkman {
    pub witness: FolkmanWitness<ResidueColor>,
    /// The shared n-th-power-free part.
    pub r_part: u64,
    /// `(sum / R)^(1/n)` for each entry of `witness.sums`.
    pub images: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FolkmanReport {
    pub s: usize,
    pub limit: u64,
    /// Total number of witnesses found.
    pub total: u64,
    /// The first `max_witnesses` witnesses in lexicographic order.
    pub witnesses: Vec<SmoothFolkman>,
    pub exhausted: bool,
}

fn divided_images(base: &PrimeBase, n: u32, witness: &FolkmanWitness<ResidueColor>) -> Result<SmoothFolkman> {
    let first = decompose(witness.elements[0], base, n)?
        .ok_or_else(|| Error::Recheck("witness element is not smooth".into()))?;
    let r = first.r_part;
    let images = witness
        .sums
        .iter()
        .map(|s| {
            if s.sum % r != 0 {
                return Err(Error::Recheck(format!("{} is not divisible by R = {r}", s.sum)));
            }
            nth_root_exact_u128((s.sum / r) as u128, n)
                .map(|q| q as u64)
                .ok_or_else(|| Error::Recheck(format!("{} / {r} is not an n-th power", s.sum)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SmoothFolkman { witness: witness.clone(), r_part: r, images })
}

/// All `s`-sets of smooth integers whose subset sums are smooth, at most `N`,
/// and share one smooth color; each is divided by its common `R`.
pub fn smooth_folkman_pipeline(
    base: &PrimeBase,
    n: u32,
    limit: u64,
    s: usize,
    max_witnesses: usize,
) -> Result<FolkmanReport> {
    check_exponent(n)?;
    check_size(s)?;
    let smooth = enumerate_smooth(base, limit)?;
    let colors: HashMap<u64, ResidueColor> = smooth
        .iter()
        .map(|&m| {
            let d = decompose(m, base, n)?.expect("enumerated values are smooth");
            Ok((m, d.color))
        })
        .collect::<Result<_>>()?;
    let dfs = Dfs {
        candidates: &smooth,
        color: |m| colors.get(&m).cloned(),
        limit,
        s,
    };
    let per_root: Vec<Vec<Vec<u64>>> = (0..smooth.len())
        .into_par_iter()
        .map(|i| dfs.rooted_at(i, usize::MAX))
        .collect();
    let all: Vec<Vec<u64>> = per_root.into_iter().flatten().collect();
    let total = all.len() as u64;
    let witnesses = all
        .into_iter()
        .take(max_witnesses)
        .map(|elements| {
            let color = colors[&elements[0]].clone();
            let w = FolkmanWitness::with_sums(elements, color);
            w.recheck(|m| colors.get(&m).cloned())?;
            divided_images(base, n, &w)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FolkmanReport { s, limit, total, witnesses, exhausted: true })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn folkman_examples() {
        let w = find_folkman_set(&Coloring::constant(7), 3).unwrap().unwrap();
        assert_eq!(w.elements, [1, 2, 4]);
        let mut sums: Vec<u64> = w.sums.iter().map(|s| s.sum).collect();
        sums.sort();
        assert_eq!(sums, (1..=7).collect::<Vec<_>>());

        let w = find_folkman_set(&Coloring::parity(20), 3).unwrap().unwrap();
        assert_eq!(w.elements, [2, 4, 8]);
        let c = Coloring::parity(20);
        w.recheck(|m| c.get(m)).unwrap();

        assert_eq!(find_folkman_set(&Coloring::parity(3), 2).unwrap(), None);
    }

    #[test]
    fn size_limits() {
        assert!(find_folkman_set(&Coloring::constant(10), 1).is_err());
        assert!(find_folkman_set(&Coloring::constant(10), 6).is_err());
    }

    #[test]
    fn recheck_catches_tampering() {
        let c = Coloring::constant(7);
        let mut w = find_folkman_set(&c, 3).unwrap().unwrap();
        w.sums[0].sum = 99;
        assert!(w.recheck(|m| c.get(m)).is_err());
    }

    #[test]
    fn smooth_pythagorean() {
        let b = PrimeBase::new(vec![2, 3, 5]).unwrap();
        let rep = smooth_folkman_pipeline(&b, 2, 25, 2, 10).unwrap();
        assert_eq!(rep.total, 1);
        let w = &rep.witnesses[0];
        assert_eq!(w.witness.elements, [9, 16]);
        assert_eq!(w.images, [3, 4, 5]);
        assert_eq!(w.r_part, 1);
    }

    #[test]
    fn smooth_cubes_absent() {
        let b = PrimeBase::new(vec![2, 3, 5]).unwrap();
        let rep = smooth_folkman_pipeline(&b, 3, 100_000, 2, 10).unwrap();
        assert_eq!(rep.total, 0);
        assert!(rep.exhausted);
    }
}
