use std::fmt;

use serde::{Deserialize, Serialize};

use super::word::{GroupWord, Syllable};
use crate::{Error, Result};

/// Which family of edges a wall is dual to.
///
/// `AHorizontal` walls cut the edges `(m,n) → (m+1,n)` of a flat,
/// `AVertical` walls cut `(m,n) → (m,n+1)`, and `B` walls cut a single
/// edge of a `⟨B⟩`-line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum WallFamily {
    AHorizontal,
    AVertical,
    B,
}

impl WallFamily {
    pub fn is_a(self) -> bool {
        !matches!(self, WallFamily::B)
    }
}

/// A hyperplane of the square complex of `ℤ² ∗ ℤ`.
///
/// `anchor` is the shortest representative of the coset carrying the wall
/// (the flat `anchor·ℤ²` or the line `anchor·⟨B⟩`); the wall sits at
/// coordinate `offset + ½` along its direction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Wall {
    pub anchor: GroupWord,
    pub family: WallFamily,
    pub offset: i64,
}

/// Anchor and coordinates of `v` inside its flat `anchor·ℤ²`.
pub(crate) fn flat_position(v: &GroupWord) -> (GroupWord, (i64, i64)) {
    match v.split_trailing(true) {
        (anchor, Some(Syllable::A(m, n))) => (anchor, (m, n)),
        (anchor, _) => (anchor, (0, 0)),
    }
}

/// Anchor and coordinate of `v` on its line `anchor·⟨B⟩`.
pub(crate) fn line_position(v: &GroupWord) -> (GroupWord, i64) {
    match v.split_trailing(false) {
        (anchor, Some(Syllable::B(k))) => (anchor, k),
        (anchor, _) => (anchor, 0),
    }
}

impl Wall {
    pub fn new(anchor: GroupWord, family: WallFamily, offset: i64) -> Self {
        Self { anchor, family, offset }
    }

    /// Coordinate of the gate projection of `x` onto the wall's flat or line,
    /// along the wall's direction.
    fn projected_coordinate(&self, x: &GroupWord) -> i64 {
        let rel = self.anchor.inverse().multiply(x);
        match (self.family, rel.syllables().first()) {
            (WallFamily::AHorizontal, Some(Syllable::A(m, _))) => *m,
            (WallFamily::AVertical, Some(Syllable::A(_, n))) => *n,
            (WallFamily::B, Some(Syllable::B(k))) => *k,
            _ => 0,
        }
    }

    /// `true` iff `x` lies in the upper halfspace (coordinate `> offset`).
    pub fn side(&self, x: &GroupWord) -> bool {
        self.projected_coordinate(x) > self.offset
    }

    pub fn separates(&self, x: &GroupWord, y: &GroupWord) -> bool {
        self.side(x) != self.side(y)
    }

    /// The image `h·w`, re-anchored to canonical form.
    pub fn translate(&self, h: &GroupWord) -> Wall {
        let moved = h.multiply(&self.anchor);
        match self.family {
            WallFamily::B => {
                let (anchor, k) = line_position(&moved);
                Wall::new(anchor, WallFamily::B, self.offset + k)
            }
            family => {
                let (anchor, (m, n)) = flat_position(&moved);
                let shift = if family == WallFamily::AHorizontal { m } else { n };
                Wall::new(anchor, family, self.offset + shift)
            }
        }
    }

    /// The two endpoints of one edge dual to this wall.
    pub fn dual_edge(&self) -> (GroupWord, GroupWord) {
        let step = |k: i64| match self.family {
            WallFamily::AHorizontal => GroupWord::a(k, 0),
            WallFamily::AVertical => GroupWord::a(0, k),
            WallFamily::B => GroupWord::b(k),
        };
        (
            self.anchor.multiply(&step(self.offset)),
            self.anchor.multiply(&step(self.offset + 1)),
        )
    }

    fn carrier_contains(&self, v: &GroupWord) -> bool {
        match self.family {
            WallFamily::B => {
                let (anchor, k) = line_position(v);
                anchor == self.anchor && (k == self.offset || k == self.offset + 1)
            }
            family => {
                let (anchor, (m, n)) = flat_position(v);
                let c = if family == WallFamily::AHorizontal { m } else { n };
                anchor == self.anchor && (c == self.offset || c == self.offset + 1)
            }
        }
    }
}

impl fmt::Display for Wall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fam = match self.family {
            WallFamily::AHorizontal => "A-horizontal",
            WallFamily::AVertical => "A-vertical",
            WallFamily::B => "B",
        };
        write!(f, "[{} | {} | {}/2]", self.anchor, fam, 2 * self.offset + 1)
    }
}

/// Every wall separating `x` from `y`, in the order a geodesic from `x`
/// crosses them (inside a flat: horizontal walls first, then vertical).
pub fn walls_separating(x: &GroupWord, y: &GroupWord) -> Vec<Wall> {
    let path = x.inverse().multiply(y);
    let mut at = x.clone();
    let mut out = Vec::with_capacity(path.length() as usize);
    let run = |start: i64, delta: i64| -> Vec<i64> {
        if delta >= 0 {
            (start..start + delta).collect()
        } else {
            (start + delta..start).rev().collect()
        }
    };
    for s in path.syllables() {
        match *s {
            Syllable::A(m, n) => {
                let (anchor, (m0, n0)) = flat_position(&at);
                for k in run(m0, m) {
                    out.push(Wall::new(anchor.clone(), WallFamily::AHorizontal, k));
                }
                for k in run(n0, n) {
                    out.push(Wall::new(anchor.clone(), WallFamily::AVertical, k));
                }
            }
            Syllable::B(k) => {
                let (anchor, k0) = line_position(&at);
                for j in run(k0, k) {
                    out.push(Wall::new(anchor.clone(), WallFamily::B, j));
                }
            }
        }
        at = at.multiply(&GroupWord::normalize([*s]));
    }
    out
}

/// Two distinct walls are transverse iff they are perpendicular walls of
/// the same flat.
pub fn are_transverse(w1: &Wall, w2: &Wall) -> Result<bool> {
    if w1 == w2 {
        return Err(Error::InvalidInput(format!("transversality of a wall with itself: {w1}")));
    }
    Ok(w1.family.is_a() && w2.family.is_a() && w1.anchor == w2.anchor && w1.family != w2.family)
}

/// Distinct non-transverse walls whose carriers share a vertex.
pub fn osculate(w1: &Wall, w2: &Wall) -> bool {
    if w1 == w2 || are_transverse(w1, w2).unwrap_or(false) {
        return false;
    }
    let (a, b) = w1.dual_edge();
    let (c, d) = w2.dual_edge();
    // A B-wall's carrier is a single edge, so checking its endpoints against
    // the other carrier is exhaustive; two A-walls only meet in one flat.
    match (w1.family, w2.family) {
        (WallFamily::B, _) => w2.carrier_contains(&a) || w2.carrier_contains(&b),
        (_, WallFamily::B) => w1.carrier_contains(&c) || w1.carrier_contains(&d),
        _ => w1.anchor == w2.anchor && (w1.offset - w2.offset).abs() == 1,
    }
}

/// Disjoint = distinct, not transverse, and carriers not touching.
pub fn are_disjoint(w1: &Wall, w2: &Wall) -> bool {
    w1 != w2 && !are_transverse(w1, w2).unwrap_or(true) && !osculate(w1, w2)
}

/// Exact `L`-separation in this complex: a wall transverse to both `w1`
/// and `w2` lives in a flat containing both, which forces them to be
/// parallel walls of that flat, and then the perpendicular family is an
/// infinite transverse chain. Any other non-transverse pair has no common
/// transversal at all, so it is `L`-separated for every `L ≥ 0`.
pub fn is_l_separated(w1: &Wall, w2: &Wall, _level: u32) -> Result<bool> {
    if are_transverse(w1, w2)? {
        return Err(Error::InvalidInput(format!("walls {w1} and {w2} are transverse")));
    }
    Ok(!(w1.family.is_a() && w1.family == w2.family && w1.anchor == w2.anchor))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree_flats::word::word_distance;

    fn e() -> GroupWord {
        GroupWord::identity()
    }

    #[test]
    fn separating_b_segment() {
        let ws = walls_separating(&e(), &GroupWord::b(3));
        let offsets: Vec<i64> = ws.iter().map(|w| w.offset).collect();
        assert_eq!(offsets, vec![0, 1, 2]);
        assert!(ws.iter().all(|w| w.family == WallFamily::B && w.anchor.is_identity()));
        assert!(walls_separating(&GroupWord::b(3), &GroupWord::b(3)).is_empty());
    }

    #[test]
    fn separating_count_and_side() {
        let x: GroupWord = "A(1,-2).B(3).A(2,1)".parse().unwrap();
        let y: GroupWord = "A(2,0).B(-1)".parse().unwrap();
        let ws = walls_separating(&x, &y);
        assert_eq!(ws.len() as u64, word_distance(&x, &y));
        for w in &ws {
            assert!(w.separates(&x, &y), "{w}");
        }
    }

    #[test]
    fn transversality_examples() {
        let h = Wall::new(e(), WallFamily::AHorizontal, 0);
        let v = Wall::new(e(), WallFamily::AVertical, 0);
        let h2 = Wall::new(e(), WallFamily::AHorizontal, 1);
        let b = Wall::new(e(), WallFamily::B, 0);
        assert!(are_transverse(&h, &v).unwrap());
        assert!(!are_transverse(&h, &h2).unwrap());
        assert!(!are_transverse(&h, &b).unwrap());
        assert!(are_transverse(&h, &h).is_err());
    }

    #[test]
    fn osculation() {
        let b0 = Wall::new(e(), WallFamily::B, 0);
        let b1 = Wall::new(e(), WallFamily::B, 1);
        let b2 = Wall::new(e(), WallFamily::B, 2);
        assert!(osculate(&b0, &b1));
        assert!(!osculate(&b0, &b2));
        assert!(are_disjoint(&b0, &b2));
        // The B-edge at e touches the flat at e along its vertex e.
        let h0 = Wall::new(e(), WallFamily::AHorizontal, 0);
        let hm = Wall::new(e(), WallFamily::AHorizontal, -1);
        let h3 = Wall::new(e(), WallFamily::AHorizontal, 3);
        assert!(osculate(&b0, &h0));
        assert!(osculate(&hm, &b0));
        assert!(!osculate(&h3, &b0));
    }

    #[test]
    fn l_separation_examples() {
        let h0 = Wall::new(e(), WallFamily::AHorizontal, 0);
        let h3 = Wall::new(e(), WallFamily::AHorizontal, 3);
        assert!(!is_l_separated(&h0, &h3, 5).unwrap());
        let b0 = Wall::new(e(), WallFamily::B, 0);
        let b2 = Wall::new(e(), WallFamily::B, 2);
        assert!(is_l_separated(&b0, &b2, 0).unwrap());
        let far = Wall::new(GroupWord::b(1), WallFamily::AHorizontal, 2);
        assert!(is_l_separated(&h0, &far, 0).unwrap());
        let v0 = Wall::new(e(), WallFamily::AVertical, 0);
        assert!(is_l_separated(&h0, &v0, 0).is_err());
    }

    #[test]
    fn translate_reanchors() {
        let w = Wall::new(GroupWord::b(1), WallFamily::AHorizontal, 0);
        let moved = w.translate(&GroupWord::b(-1));
        assert_eq!(moved, Wall::new(e(), WallFamily::AHorizontal, 0));
        let a = Wall::new(e(), WallFamily::AHorizontal, 0);
        assert_eq!(a.translate(&GroupWord::a(3, 1)).offset, 3);
        assert!(a.translate(&GroupWord::a(3, 1)).anchor.is_identity());
    }
}
