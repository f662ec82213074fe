//! Edge colorings of complete graphs on `[1, V]`: monochromatic triangles,
//! the difference-coloring reduction to Schur triples, and the bipartite
//! `K_{2,w}` pigeonhole finder.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::schur::{Coloring, SchurTriple};

/// Explicit coloring of every pair `i < j` of `[1, V]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeColoring {
    vertices: u64,
    palette: u32,
    /// Row-major upper triangle.
    table: Vec<u32>,
}

impl EdgeColoring {
    pub fn from_rule(vertices: u64, palette: u32, rule: impl Fn(u64, u64) -> u32) -> Result<Self> {
        if palette == 0 {
            return domain("palette must have at least one color");
        }
        let mut table = Vec::with_capacity((vertices * vertices.saturating_sub(1) / 2) as usize);
        for i in 1..=vertices {
            for j in i + 1..=vertices {
                let c = rule(i, j);
                if c >= palette {
                    return domain(format!("edge ({i}, {j}) has color {c} outside palette {palette}"));
                }
                table.push(c);
            }
        }
        Ok(EdgeColoring { vertices, palette, table })
    }

    pub fn vertices(&self) -> u64 {
        self.vertices
    }

    pub fn palette(&self) -> u32 {
        self.palette
    }

    fn slot(&self, i: u64, j: u64) -> usize {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        debug_assert!(1 <= i && j <= self.vertices && i != j);
        let v = self.vertices;
        // edges before row i, then offset within the row
        ((i - 1) * (2 * v - i) / 2 + (j - i - 1)) as usize
    }

    pub fn color(&self, i: u64, j: u64) -> u32 {
        self.table[self.slot(i, j)]
    }
}

/// Edge `(i, j)` gets the color of `|i - j|`. Needs `coloring` on `[1, V-1]`.
pub fn difference_edge_coloring(coloring: &Coloring, vertices: u64) -> Result<EdgeColoring> {
    if vertices >= 2 && coloring.limit() < vertices - 1 {
        return domain(format!(
            "coloring of [1, {}] cannot color differences up to {}",
            coloring.limit(),
            vertices - 1
        ));
    }
    EdgeColoring::from_rule(vertices, coloring.palette(), |i, j| coloring.color(j - i))
}

/// Lexicographically smallest monochromatic triangle `i < j < k`.
pub fn find_monochromatic_triangle(ec: &EdgeColoring) -> Option<(u64, u64, u64)> {
    let v = ec.vertices();
    for i in 1..=v {
        for j in i + 1..=v {
            let c = ec.color(i, j);
            for k in j + 1..=v {
                if ec.color(i, k) == c && ec.color(j, k) == c {
                    return Some((i, j, k));
                }
            }
        }
    }
    None
}

/// `(j - i) + (k - j) = k - i`, normalized so `a <= b`.
pub fn triangle_to_schur(triangle: (u64, u64, u64), coloring: &Coloring) -> Result<SchurTriple> {
    let (i, j, k) = triangle;
    if !(i < j && j < k) {
        return domain(format!("({i}, {j}, {k}) is not an increasing triple"));
    }
    let (x, y) = (j - i, k - j);
    let triple = SchurTriple {
        a: x.min(y),
        b: x.max(y),
        c: k - i,
        color: coloring
            .get(k - i)
            .ok_or_else(|| Error::Domain(format!("difference {} outside the coloring", k - i)))?,
    };
    triple.recheck(coloring)?;
    Ok(triple)
}

/// Number of vertices that forces a monochromatic triangle in every
/// `t`-coloring of `K_V`: `R(3) = 3`, `R(3,3) = 6`, `R(3,3,3) = 17`.
pub fn ramsey_vertices(colors: u32) -> Result<u64> {
    match colors {
        1 => Ok(3),
        2 => Ok(6),
        3 => Ok(17),
        _ => domain(format!("no tabulated triangle Ramsey number for {colors} colors")),
    }
}

/// Schur via Ramsey: color `K_V` by differences, take a monochromatic
/// triangle, and read off the triple.
pub fn verify_ramsey_333_reduction(coloring: &Coloring, colors: u32) -> Result<SchurTriple> {
    let v = ramsey_vertices(colors)?;
    if coloring.palette() > colors {
        return domain(format!(
            "coloring uses a palette of {} but the reduction was asked for {colors}",
            coloring.palette()
        ));
    }
    let ec = difference_edge_coloring(coloring, v)?;
    let triangle = find_monochromatic_triangle(&ec).ok_or_else(|| {
        Error::Recheck(format!("no monochromatic triangle in a {colors}-coloring of K_{v}"))
    })?;
    triangle_to_schur(triangle, coloring)
}

/// The pentagon/pentagram coloring of `K_5`: color 0 iff `|i - j|` is 1 or 4.
pub fn pentagon_coloring() -> EdgeColoring {
    EdgeColoring::from_rule(5, 2, |i, j| u32::from(!matches!(j - i, 1 | 4)))
        .expect("two colors")
}

/// Scans all `2^(V choose 2)` two-colorings of `K_V`; returns the first
/// triangle-free one, if any.
pub fn triangle_free_two_coloring(vertices: u64) -> Result<Option<EdgeColoring>> {
    let edges = vertices * vertices.saturating_sub(1) / 2;
    if edges > 24 {
        return Err(Error::Cap(format!("2^{edges} colorings is beyond exhaustive range")));
    }
    for mask in 0u32..1 << edges {
        let table = (0..edges).map(|e| mask >> e & 1).collect();
        let ec = EdgeColoring { vertices, palette: 2, table };
        if find_monochromatic_triangle(&ec).is_none() {
            return Ok(Some(ec));
        }
    }
    Ok(None)
}

/// Two anchors and `w` partners joined by `2w` edges of one color.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartiteWitness {
    pub anchors: [u64; 2],
    pub partners: Vec<u64>,
    pub color: u32,
}

impl BipartiteWitness {
    pub fn recheck(&self, rule: impl Fn(u64, u64) -> u32) -> Result<()> {
        let [v1, v2] = self.anchors;
        let shape = v1 < v2
            && self.partners.windows(2).all(|p| p[0] < p[1])
            && !self.partners.contains(&v1)
            && !self.partners.contains(&v2);
        if !shape {
            return Err(Error::Recheck("bipartite witness is not in canonical form".into()));
        }
        for &x in &self.partners {
            for v in [v1, v2] {
                let c = rule(v, x);
                if c != self.color {
                    return Err(Error::Recheck(format!(
                        "edge ({v}, {x}) has color {c}, expected {}",
                        self.color
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum K2Outcome {
    Found(BipartiteWitness),
    /// The most frequent anchor-color vector had only `largest_class` members.
    Insufficient { largest_class: u64 },
}

/// Vector-color pigeonhole: the first `t + 1` elements are anchors, every
/// other element is labelled by the colors of its edges to the anchors, and
/// the most frequent label (ties to the smallest) supplies `W`. Two anchors
/// with equal entries in that label form `V`.
pub fn find_k2w(
    universe: &[u64],
    rule: impl Fn(u64, u64) -> u32,
    colors: u32,
    w: usize,
) -> Result<K2Outcome> {
    if colors == 0 {
        return domain("palette must have at least one color");
    }
    let anchor_count = colors as usize + 1;
    if universe.len() < anchor_count {
        return domain(format!(
            "universe of {} elements is smaller than t + 1 = {anchor_count}",
            universe.len()
        ));
    }
    if universe.windows(2).any(|p| p[0] >= p[1]) {
        return domain("universe must be strictly ascending");
    }
    let (anchors, rest) = universe.split_at(anchor_count);
    let mut classes: BTreeMap<Vec<u32>, Vec<u64>> = BTreeMap::new();
    for &x in rest {
        let label = anchors
            .iter()
            .map(|&a| {
                let c = rule(a, x);
                if c >= colors {
                    domain(format!("edge ({a}, {x}) has color {c} outside palette {colors}"))
                } else {
                    Ok(c)
                }
            })
            .collect::<Result<Vec<u32>>>()?;
        classes.entry(label).or_default().push(x);
    }
    let mut best: Option<(&Vec<u32>, &Vec<u64>)> = None;
    for (label, members) in &classes {
        if best.is_none_or(|(_, b)| members.len() > b.len()) {
            best = Some((label, members));
        }
    }
    let (label, members) = match best {
        Some((l, m)) if m.len() >= w.max(1) => (l, m),
        other => {
            return Ok(K2Outcome::Insufficient {
                largest_class: other.map_or(0, |(_, m)| m.len() as u64),
            })
        }
    };
    let (i1, i2) = (0..anchor_count)
        .flat_map(|i| (i + 1..anchor_count).map(move |j| (i, j)))
        .find(|&(i, j)| label[i] == label[j])
        .expect("t + 1 entries over t colors repeat");
    let witness = BipartiteWitness {
        anchors: [anchors[i1], anchors[i2]],
        partners: members[..w].to_vec(),
        color: label[i1],
    };
    witness.recheck(&rule)?;
    Ok(K2Outcome::Found(witness))
}

/// `(t + 1) + (w - 1) t^(t+1) + 1`: at this universe size some label class
/// must reach `w` members.
pub fn guaranteed_universe_size(colors: u32, w: u64) -> Result<u128> {
    if colors == 0 || w == 0 {
        return domain("t and w must be positive");
    }
    (colors as u128)
        .checked_pow(colors + 1)
        .and_then(|labels| labels.checked_mul(w as u128 - 1))
        .and_then(|x| x.checked_add(colors as u128 + 2))
        .ok_or_else(|| Error::Cap(format!("guaranteed size for t = {colors}, w = {w} overflows")))
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// A pseudo-random `t`-coloring of pairs, symmetric and a pure function of
/// `(seed, {i, j})`.
pub fn seeded_pair_coloring(seed: u64, colors: u32) -> impl Fn(u64, u64) -> u32 + Clone {
    assert!(colors > 0, "palette must be nonempty");
    move |i, j| {
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        let h = splitmix64(splitmix64(seed ^ lo.rotate_left(32)) ^ hi);
        (h % colors as u64) as u32
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn difference_examples() {
        let ec = difference_edge_coloring(&Coloring::parity(4), 5).unwrap();
        assert_eq!(ec.color(1, 4), 1);
        let ec = difference_edge_coloring(&Coloring::constant(6), 7).unwrap();
        assert!((1..=7).all(|i| (i + 1..=7).all(|j| ec.color(i, j) == 0)));
        let chi = Coloring::new(2, vec![0, 1]).unwrap();
        let ec = difference_edge_coloring(&chi, 3).unwrap();
        assert_eq!((ec.color(1, 2), ec.color(2, 3), ec.color(1, 3)), (0, 0, 1));
        assert!(difference_edge_coloring(&Coloring::constant(2), 5).is_err());
    }

    #[test]
    fn edge_slots_cover_the_table() {
        let ec = EdgeColoring::from_rule(7, 1, |_, _| 0).unwrap();
        let mut seen: Vec<usize> = (1..=7u64)
            .flat_map(|i| (i + 1..=7).map(move |j| (i, j)))
            .map(|(i, j)| ec.slot(i, j))
            .collect();
        seen.sort();
        assert_eq!(seen, (0..21).collect::<Vec<_>>());
    }

    #[test]
    fn triangle_examples() {
        let ec = EdgeColoring::from_rule(3, 1, |_, _| 0).unwrap();
        assert_eq!(find_monochromatic_triangle(&ec), Some((1, 2, 3)));
        assert_eq!(find_monochromatic_triangle(&pentagon_coloring()), None);
    }

    #[test]
    fn triangle_to_schur_examples() {
        let c = Coloring::constant(20);
        assert_eq!(triangle_to_schur((2, 5, 11), &c).unwrap().as_array(), [3, 6, 9]);
        assert_eq!(triangle_to_schur((1, 2, 3), &c).unwrap().as_array(), [1, 1, 2]);
        assert_eq!(triangle_to_schur((1, 4, 5), &c).unwrap().as_array(), [1, 3, 4]);
        assert!(triangle_to_schur((1, 4, 5), &Coloring::parity(10)).is_err());
        assert!(triangle_to_schur((3, 2, 5), &c).is_err());
    }

    #[test]
    fn reduction_examples() {
        let t = verify_ramsey_333_reduction(&Coloring::constant(5), 1).unwrap();
        assert_eq!(t.as_array(), [1, 1, 2]);
        let t = verify_ramsey_333_reduction(&Coloring::parity(16), 2).unwrap();
        assert_eq!(t.color, 0);
        assert_eq!(t.as_array(), [2, 2, 4]);
    }

    #[test]
    fn k6_forces_and_k5_escapes() {
        assert_eq!(triangle_free_two_coloring(6).unwrap(), None);
        let ec = triangle_free_two_coloring(5).unwrap().unwrap();
        assert_eq!(find_monochromatic_triangle(&ec), None);
    }

    #[test]
    fn k2w_constant() {
        let universe: Vec<u64> = (1..=10).collect();
        let out = find_k2w(&universe, |_, _| 0, 1, 5).unwrap();
        assert_eq!(
            out,
            K2Outcome::Found(BipartiteWitness { anchors: [1, 2], partners: vec![3, 4, 5, 6, 7], color: 0 })
        );
    }

    #[test]
    fn k2w_sum_parity() {
        let universe: Vec<u64> = (1..=20).collect();
        let rule = |i: u64, j: u64| ((i + j) % 2) as u32;
        let K2Outcome::Found(w) = find_k2w(&universe, rule, 2, 5).unwrap() else {
            panic!("expected a witness");
        };
        // anchors 1,2,3: 8 odd partners see (0,1,0), 9 even ones see (1,0,1)
        assert_eq!(w.anchors, [1, 3]);
        assert_eq!(w.color, 1);
        assert_eq!(w.partners, [4, 6, 8, 10, 12]);
        w.recheck(rule).unwrap();
    }

    #[test]
    fn k2w_errors_and_insufficient() {
        assert!(find_k2w(&[1, 2], |_, _| 0, 2, 1).is_err());
        assert!(find_k2w(&[1, 2, 3, 4], |_, _| 5, 2, 1).is_err());
        assert!(find_k2w(&[3, 2, 1], |_, _| 0, 2, 1).is_err());
        let out = find_k2w(&[1, 2, 3, 4], |_, _| 0, 1, 5).unwrap();
        assert_eq!(out, K2Outcome::Insufficient { largest_class: 2 });
    }

    #[test]
    fn guaranteed_sizes() {
        assert_eq!(guaranteed_universe_size(1, 5).unwrap(), 7);
        assert_eq!(guaranteed_universe_size(2, 2).unwrap(), 12);
        assert!(guaranteed_universe_size(40, 2).is_err());
    }
}
