//! The tree of flats: `ℤ² ∗ ℤ` acting on its square complex.
//!
//! Walls are combinatorial hyperplanes; "thickness" of curtains is modelled
//! by forbidding consecutive chain walls whose dual edges share a vertex.
//! The resulting chain metric can differ from the continuous curtain
//! metric by a factor of at most two, which leaves hyperbolicity,
//! loxodromy and drift positivity untouched.

pub mod certificate;
pub mod chain;
pub mod wall;
pub mod word;

pub use certificate::{contraction_certificate, find_skewering, SkeweringWitness};
pub use chain::{chain_metric_dl, longest_l_chain, LChain};
pub use wall::{are_disjoint, are_transverse, is_l_separated, osculate, walls_separating, Wall, WallFamily};
pub use word::{word_distance, GroupWord, Syllable};

use crate::exact::ExactReal;
use crate::hyperbolic::{IsometricAction, MetricSpace};

/// Which metric to put on the vertex set of the tree of flats.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TreeFlatsMetric {
    /// Cayley-graph metric for `A(±1,0), A(0,±1), B(±1)`.
    Word,
    /// The chain metric `d_L`.
    Chain { level: u32 },
}

#[derive(Clone, Copy, Debug)]
pub struct TreeFlats {
    pub metric: TreeFlatsMetric,
}

impl TreeFlats {
    pub fn word() -> Self {
        Self { metric: TreeFlatsMetric::Word }
    }

    pub fn chain(level: u32) -> Self {
        Self { metric: TreeFlatsMetric::Chain { level } }
    }

    /// The standard symmetric generating set.
    pub fn generators() -> Vec<GroupWord> {
        vec![
            GroupWord::a(1, 0),
            GroupWord::a(-1, 0),
            GroupWord::a(0, 1),
            GroupWord::a(0, -1),
            GroupWord::b(1),
            GroupWord::b(-1),
        ]
    }

    /// All elements at word distance ≤ `radius` from the identity.
    pub fn ball(radius: u64) -> Vec<GroupWord> {
        let mut seen = std::collections::BTreeSet::from([GroupWord::identity()]);
        let mut frontier = vec![GroupWord::identity()];
        for _ in 0..radius {
            let mut next = Vec::new();
            for w in &frontier {
                for s in Self::generators() {
                    let v = w.multiply(&s);
                    if seen.insert(v.clone()) {
                        next.push(v);
                    }
                }
            }
            frontier = next;
        }
        seen.into_iter().collect()
    }
}

impl MetricSpace for TreeFlats {
    type Point = GroupWord;

    fn distance(&self, x: &GroupWord, y: &GroupWord) -> ExactReal {
        let d = match self.metric {
            TreeFlatsMetric::Word => word_distance(x, y),
            TreeFlatsMetric::Chain { level } => chain_metric_dl(x, y, level),
        };
        ExactReal::from_integer(d as i64)
    }
}

impl IsometricAction for TreeFlats {
    type Element = GroupWord;

    fn basepoint(&self) -> GroupWord {
        GroupWord::identity()
    }
    fn identity(&self) -> GroupWord {
        GroupWord::identity()
    }
    fn compose(&self, g: &GroupWord, h: &GroupWord) -> GroupWord {
        g.multiply(h)
    }
    fn inverse(&self, g: &GroupWord) -> GroupWord {
        g.inverse()
    }
    fn act(&self, g: &GroupWord, x: &GroupWord) -> GroupWord {
        g.multiply(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::stable_translation_length;

    #[test]
    fn ball_sizes() {
        // 1 + 6 + (flat: 12 at radius 2 in ℤ², minus 4 already counted) …
        assert_eq!(TreeFlats::ball(1).len(), 7);
        let b2 = TreeFlats::ball(2);
        assert!(b2.iter().all(|w| w.length() <= 2));
        assert_eq!(b2.len(), 1 + 6 + 8 + 2 + 4 * 2 + 2 * 4);
    }

    #[test]
    fn certified_elements_translate_in_dl() {
        let space = TreeFlats::chain(0);
        for s in ["B(1)", "A(1,0).B(1)", "B(2).A(0,-1)"] {
            let g: GroupWord = s.parse().unwrap();
            assert!(contraction_certificate(&g, 0, 4).unwrap());
            let r = stable_translation_length(&space, &g, &GroupWord::identity(), 12, 0.0).unwrap();
            assert!(r.stable_estimate > 0.0, "{s}");
        }
    }
}
