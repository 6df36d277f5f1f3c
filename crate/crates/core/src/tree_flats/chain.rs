use super::wall::{are_disjoint, are_transverse, is_l_separated, walls_separating, Wall};
use super::word::GroupWord;

/// A chain of pairwise `L`-separated, nested walls with non-touching
/// neighbours.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LChain {
    pub walls: Vec<Wall>,
    pub level: u32,
}

impl LChain {
    pub fn len(&self) -> usize {
        self.walls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walls.is_empty()
    }

    /// Checks the chain conditions directly.
    pub fn is_valid(&self) -> bool {
        let pairwise = self.walls.iter().enumerate().all(|(i, a)| {
            self.walls[i + 1..].iter().all(|b| {
                a != b
                    && !are_transverse(a, b).unwrap_or(true)
                    && is_l_separated(a, b, self.level).unwrap_or(false)
            })
        });
        pairwise && self.walls.windows(2).all(|w| are_disjoint(&w[0], &w[1]))
    }
}

/// May two separating walls sit next to each other in an `L`-chain?
pub(crate) fn chain_compatible(a: &Wall, b: &Wall, level: u32) -> bool {
    are_disjoint(a, b) && is_l_separated(a, b, level).unwrap_or(false)
}

/// Longest `L`-chain among the walls separating `x` from `y`.
///
/// Separating walls that are pairwise non-transverse are nested in the
/// order a geodesic crosses them, so the search is a longest path in that
/// order. Walls of one flat are crossed contiguously and no two of them
/// can share a chain, which makes checking consecutive pairs enough.
pub fn longest_l_chain(x: &GroupWord, y: &GroupWord, level: u32) -> LChain {
    let walls = walls_separating(x, y);
    let n = walls.len();
    let mut best = vec![1usize; n];
    let mut prev: Vec<Option<usize>> = vec![None; n];
    for j in 0..n {
        for i in 0..j {
            if best[i] + 1 > best[j] && chain_compatible(&walls[i], &walls[j], level) {
                best[j] = best[i] + 1;
                prev[j] = Some(i);
            }
        }
    }
    let Some(mut end) = (0..n).max_by_key(|&j| (best[j], std::cmp::Reverse(j))) else {
        return LChain { walls: Vec::new(), level };
    };
    let mut picked = vec![walls[end].clone()];
    while let Some(p) = prev[end] {
        picked.push(walls[p].clone());
        end = p;
    }
    picked.reverse();
    LChain { walls: picked, level }
}

/// `d_L(x, y) = 1 + (largest L-chain separating x, y)`, and `0` on the
/// diagonal.
pub fn chain_metric_dl(x: &GroupWord, y: &GroupWord, level: u32) -> u64 {
    if x == y {
        return 0;
    }
    1 + longest_l_chain(x, y, level).len() as u64
}
