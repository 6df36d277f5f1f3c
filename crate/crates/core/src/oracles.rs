//! Slow, independent reference computations used to validate the fast
//! paths. Nothing here is used by the production code.

use std::collections::{HashMap, HashSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::function::factorial::ln_binomial;

use crate::building::matrix::fq;
use crate::building::{all_flags, Flag, LatticeClass, LaurentMatrix, LaurentPoly};
use crate::tree_flats::{walls_separating, GroupWord, TreeFlats, Wall};

// ---------------------------------------------------------------- tree of flats

/// Word lengths by breadth-first search in the Cayley graph.
pub fn cayley_bfs(radius: u64) -> HashMap<GroupWord, u64> {
    let mut dist = HashMap::from([(GroupWord::identity(), 0)]);
    let mut queue = VecDeque::from([GroupWord::identity()]);
    while let Some(v) = queue.pop_front() {
        let d = dist[&v];
        if d == radius {
            continue;
        }
        for s in TreeFlats::generators() {
            let w = v.multiply(&s);
            if !dist.contains_key(&w) {
                dist.insert(w.clone(), d + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Vertices near the flat and line through `anchor`, out to `r`.
fn sample_region(anchor: &GroupWord, r: i64) -> Vec<GroupWord> {
    let mut out = Vec::new();
    for m in -r..=r {
        for n in -r..=r {
            let v = anchor.multiply(&GroupWord::a(m, n));
            for k in [-1, 0, 1] {
                out.push(v.multiply(&GroupWord::b(k)));
            }
        }
    }
    for k in -r..=r {
        let v = anchor.multiply(&GroupWord::b(k));
        out.push(v.clone());
        for (m, n) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
            out.push(v.multiply(&GroupWord::a(m, n)));
        }
    }
    out
}

fn region_for(w1: &Wall, w2: &Wall) -> Vec<GroupWord> {
    let r = 2 + w1.offset.abs().max(w2.offset.abs());
    let mut v = sample_region(&w1.anchor, r);
    v.extend(sample_region(&w2.anchor, r));
    v
}

/// Transverse iff all four quadrants meet the sampled region.
pub fn transverse_by_quadrants(w1: &Wall, w2: &Wall) -> bool {
    let mut seen = HashSet::new();
    for v in region_for(w1, w2) {
        seen.insert((w1.side(&v), w2.side(&v)));
    }
    w1 != w2 && seen.len() == 4
}

/// Vertices of the carrier of `w` inside `region`: endpoints of edges the
/// wall separates.
fn carrier_in(w: &Wall, region: &[GroupWord]) -> HashSet<GroupWord> {
    let mut out = HashSet::new();
    for v in region {
        for s in TreeFlats::generators() {
            let u = v.multiply(&s);
            if w.separates(v, &u) {
                out.insert(v.clone());
                out.insert(u);
            }
        }
    }
    out
}

pub fn osculate_by_carriers(w1: &Wall, w2: &Wall) -> bool {
    if w1 == w2 || transverse_by_quadrants(w1, w2) {
        return false;
    }
    let region = region_for(w1, w2);
    let c1 = carrier_in(w1, &region);
    let c2 = carrier_in(w2, &region);
    c1.intersection(&c2).next().is_some()
}

/// Walls dual to edges inside the carrier of `w1`; any wall transverse to
/// `w1` is among them.
fn walls_crossing_carrier(w1: &Wall, w2: &Wall) -> Vec<Wall> {
    let carrier = carrier_in(w1, &region_for(w1, w2));
    let mut out = HashSet::new();
    for v in &carrier {
        for s in TreeFlats::generators() {
            let u = v.multiply(&s);
            if carrier.contains(&u) {
                out.extend(walls_separating(v, &u));
            }
        }
    }
    let mut v: Vec<Wall> = out.into_iter().collect();
    v.sort();
    v
}

/// `L`-separated iff no `L+1` pairwise disjoint walls are transverse to
/// both.
pub fn l_separated_by_search(w1: &Wall, w2: &Wall, level: u32) -> bool {
    let cross: Vec<Wall> = walls_crossing_carrier(w1, w2)
        .into_iter()
        .filter(|w| w != w1 && w != w2 && transverse_by_quadrants(w, w1) && transverse_by_quadrants(w, w2))
        .collect();
    let need = level as usize + 1;
    fn grow(cands: &[Wall], chosen: &mut Vec<Wall>, need: usize) -> bool {
        if chosen.len() == need {
            return true;
        }
        for (i, c) in cands.iter().enumerate() {
            if chosen.iter().all(|d| !transverse_by_quadrants(c, d) && !osculate_by_carriers(c, d)) {
                chosen.push(c.clone());
                if grow(&cands[i + 1..], chosen, need) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    !grow(&cross, &mut Vec::new(), need)
}

/// `d_L` by enumerating every subset of separating walls, checking all
/// pairs (not only neighbours) for the chain conditions.
pub fn dl_brute_force(x: &GroupWord, y: &GroupWord, level: u32) -> u64 {
    use crate::tree_flats::{are_disjoint, are_transverse, is_l_separated};
    if x == y {
        return 0;
    }
    let walls = walls_separating(x, y);
    let n = walls.len();
    assert!(n <= 20, "brute force is exponential");
    // compat[i]: walls after i that may share a chain with it
    let mut compat = vec![0u32; n];
    let mut disjoint = vec![vec![false; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            if !are_transverse(&walls[i], &walls[j]).unwrap() && is_l_separated(&walls[i], &walls[j], level).unwrap() {
                compat[i] |= 1 << j;
            }
            disjoint[i][j] = are_disjoint(&walls[i], &walls[j]);
        }
    }
    let mut best = 0;
    for mask in 1u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let mut valid = true;
        let mut prev: Option<usize> = None;
        for i in (0..n).filter(|i| mask >> i & 1 == 1) {
            let later = mask & !((2u32 << i) - 1);
            if later & !compat[i] != 0 || prev.is_some_and(|p| !disjoint[p][i]) {
                valid = false;
                break;
            }
            prev = Some(i);
        }
        if valid {
            best = size;
        }
    }
    1 + best as u64
}

// -------------------------------------------------------------------- building

/// Exponents `a₁ ≥ a₂ ≥ a₃` from minimum valuations of `k×k` minors:
/// `a₃ = δ₁`, `a₃ + a₂ = δ₂`, `a₃ + a₂ + a₁ = δ₃`.
pub fn divisors_by_minors(m: &LaurentMatrix) -> [i64; 3] {
    let d1 = m.min_valuation().unwrap();
    let mut d2 = i64::MAX;
    for r in [[0, 1], [0, 2], [1, 2]] {
        for c in [[0, 1], [0, 2], [1, 2]] {
            if let Some(v) = m.minor(r, c).valuation() {
                d2 = d2.min(v);
            }
        }
    }
    let d3 = m.det().valuation().unwrap();
    [d3 - d2, d2 - d1, d1]
}

/// A random nonsingular matrix with entries of exponent in `[lo, hi]`.
pub fn random_laurent_matrix(rng: &mut impl Rng, q: u32, lo: i64, hi: i64) -> LaurentMatrix {
    loop {
        let mut m = LaurentMatrix::zero(q);
        for i in 0..3 {
            for j in 0..3 {
                let coeffs: Vec<u32> = (lo..=hi).map(|_| if rng.gen_bool(0.4) { rng.gen_range(0..q) } else { 0 }).collect();
                m.set(i, j, LaurentPoly::from_coeffs(q, lo, coeffs));
            }
        }
        if !m.det().is_zero() {
            return m;
        }
    }
}

/// A random element of `GL₃(𝔽_q[t])` with unit determinant, as a product
/// of elementary matrices.
pub fn random_unimodular(rng: &mut impl Rng, q: u32, len: usize) -> LaurentMatrix {
    let mut m = LaurentMatrix::identity(q);
    for _ in 0..len {
        let (i, j) = loop {
            let i = rng.gen_range(0..3);
            let j = rng.gen_range(0..3);
            if i != j {
                break (i, j);
            }
        };
        let coeffs: Vec<u32> = (0..3).map(|_| rng.gen_range(0..q)).collect();
        m = m.mul(&LaurentMatrix::elementary(q, i, j, LaurentPoly::from_coeffs(q, 0, coeffs)));
    }
    m
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `|a·ϖ₁ + b·ϖ₂|` with unit coweights at angle `π/3` in the plane.
pub fn apartment_embedding_length(a: u64, b: u64) -> f64 {
    let (w1, w2) = ((1.0, 0.0), (0.5, 3f64.sqrt() / 2.0));
    let x = a as f64 * w1.0 + b as f64 * w2.0;
    let y = a as f64 * w1.1 + b as f64 * w2.1;
    x.hypot(y)
}

/// All-pairs distances in the flag graph (adjacent iff sharing the point
/// or the line but not both).
pub fn flag_graph_distances(q: u32) -> Vec<Vec<u8>> {
    let flags = all_flags(q);
    let n = flags.len();
    let adj = |a: &Flag, b: &Flag| a != b && (a.point == b.point || a.line == b.line);
    let mut out = vec![vec![u8::MAX; n]; n];
    for s in 0..n {
        out[s][s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for w in 0..n {
                if out[s][w] == u8::MAX && adj(&flags[v], &flags[w]) {
                    out[s][w] = out[s][v] + 1;
                    queue.push_back(w);
                }
            }
        }
    }
    out
}

/// The residue simplex of a neighbour of the standard vertex, read from
/// the reduction of its lattice: a plane (type 1) gives the point as its
/// normal form, a line (type 2) gives its normal directly.
fn neighbour_simplex(v: &LatticeClass) -> (u8, fq::Vec3) {
    let q = v.modulus();
    let red = v.basis().reduce_at(0);
    let cols: Vec<fq::Vec3> = (0..3).map(|j| [red[0][j], red[1][j], red[2][j]]).filter(|c| *c != [0, 0, 0]).collect();
    let first = cols[0];
    match cols.iter().find(|c| fq::cross(&first, c, q) != [0, 0, 0]) {
        Some(second) => (1, fq::normalize(&fq::cross(&first, second, q), q).unwrap()),
        None => (2, fq::normalize(&first, q).unwrap()),
    }
}

/// Germ of `[o, y]` at the standard vertex from nearest neighbours: the
/// closest type-1 neighbour gives the point, the closest type-2 the line.
pub fn germ_by_neighbours(y: &LatticeClass) -> Option<Flag> {
    let q = y.modulus();
    let o = LatticeClass::standard(q);
    let mut best: [Option<(u64, fq::Vec3, usize)>; 2] = [None, None];
    for v in crate::building::neighbours(&o) {
        let (ty, vec) = neighbour_simplex(&v);
        let d = crate::building::vector_distance(&v, y).squared_length();
        let slot = &mut best[ty as usize - 1];
        match slot {
            Some((bd, _, count)) if d == *bd => *count += 1,
            Some((bd, _, _)) if d > *bd => {}
            _ => *slot = Some((d, vec, 1)),
        }
    }
    match best {
        [Some((_, p, 1)), Some((_, n, 1))] => Flag::new(p, n, q).ok(),
        _ => None,
    }
}

// ----------------------------------------------------------------- binomials

/// `P(S_n = k)` for the simple symmetric walk, `k ≡ n mod 2`.
pub fn simple_walk_pmf(n: u64, k: i64) -> f64 {
    if k.unsigned_abs() > n || (n as i64 - k) % 2 != 0 {
        return 0.0;
    }
    let up = (n as i64 + k) / 2;
    (ln_binomial(n, up as u64) - n as f64 * std::f64::consts::LN_2).exp()
}

/// `E|S_n|` exactly: `n·C(n, n/2)/2ⁿ` for even `n`, and
/// `E|S_n| = E|S_{n+1}|` for odd `n`.
pub fn simple_walk_mean_abs(n: u64) -> f64 {
    let m = if n % 2 == 0 { n } else { n + 1 };
    (m as f64).ln().exp() * (ln_binomial(m, m / 2) - m as f64 * std::f64::consts::LN_2).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_abs_small_cases() {
        assert!((simple_walk_mean_abs(1) - 1.0).abs() < 1e-12);
        assert!((simple_walk_mean_abs(2) - 1.0).abs() < 1e-12);
        // S_4 ∈ {±4: 1/16, ±2: 4/16, 0: 6/16}
        assert!((simple_walk_mean_abs(4) - 1.5).abs() < 1e-12);
        let direct: f64 = (-10..=10).map(|k: i64| k.abs() as f64 * simple_walk_pmf(10, k)).sum();
        assert!((simple_walk_mean_abs(10) - direct).abs() < 1e-12);
    }

    #[test]
    fn embedding_lengths() {
        assert!((apartment_embedding_length(1, 1) - 3f64.sqrt()).abs() < 1e-15);
        assert!((apartment_embedding_length(3, 2) - 19f64.sqrt()).abs() < 1e-14);
    }
}
