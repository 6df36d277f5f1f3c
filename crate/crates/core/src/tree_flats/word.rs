use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::Error;

/// One syllable of a word in `ℤ² ∗ ℤ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Syllable {
    A(i64, i64),
    B(i64),
}

impl Syllable {
    pub fn is_zero(&self) -> bool {
        matches!(self, Syllable::A(0, 0) | Syllable::B(0))
    }

    pub fn same_factor(&self, other: &Syllable) -> bool {
        matches!(
            (self, other),
            (Syllable::A(..), Syllable::A(..)) | (Syllable::B(_), Syllable::B(_))
        )
    }

    pub fn length(&self) -> u64 {
        match *self {
            Syllable::A(m, n) => m.unsigned_abs() + n.unsigned_abs(),
            Syllable::B(k) => k.unsigned_abs(),
        }
    }

    pub fn inverse(&self) -> Syllable {
        match *self {
            Syllable::A(m, n) => Syllable::A(-m, -n),
            Syllable::B(k) => Syllable::B(-k),
        }
    }

    fn merge(&self, other: &Syllable) -> Syllable {
        match (*self, *other) {
            (Syllable::A(a, b), Syllable::A(c, d)) => Syllable::A(a + c, b + d),
            (Syllable::B(a), Syllable::B(b)) => Syllable::B(a + b),
            _ => unreachable!("merge across factors"),
        }
    }
}

/// An element of `ℤ² ∗ ℤ` in free-product normal form: alternating
/// nonzero syllables. The empty word is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct GroupWord {
    syllables: Vec<Syllable>,
}

impl GroupWord {
    pub fn identity() -> Self {
        Self::default()
    }

    /// Free-product normal form of an arbitrary syllable list.
    pub fn normalize(raw: impl IntoIterator<Item = Syllable>) -> Self {
        let mut out: Vec<Syllable> = Vec::new();
        for s in raw {
            if s.is_zero() {
                continue;
            }
            match out.last() {
                Some(last) if last.same_factor(&s) => {
                    let merged = last.merge(&s);
                    out.pop();
                    if !merged.is_zero() {
                        out.push(merged);
                    }
                }
                _ => out.push(s),
            }
        }
        Self { syllables: out }
    }

    pub fn a(m: i64, n: i64) -> Self {
        Self::normalize([Syllable::A(m, n)])
    }

    pub fn b(k: i64) -> Self {
        Self::normalize([Syllable::B(k)])
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Word length for the generators `A(±1,0), A(0,±1), B(±1)`.
    pub fn length(&self) -> u64 {
        self.syllables.iter().map(Syllable::length).sum()
    }

    pub fn inverse(&self) -> Self {
        Self {
            syllables: self.syllables.iter().rev().map(Syllable::inverse).collect(),
        }
    }

    pub fn multiply(&self, other: &GroupWord) -> GroupWord {
        // Cancel from the junction; only the meeting point can merge.
        let mut left = self.syllables.clone();
        let mut right = other.syllables.iter().copied().peekable();
        while let (Some(last), Some(next)) = (left.last().copied(), right.peek().copied()) {
            if !last.same_factor(&next) {
                break;
            }
            left.pop();
            right.next();
            let merged = last.merge(&next);
            if !merged.is_zero() {
                left.push(merged);
                break;
            }
        }
        left.extend(right);
        GroupWord { syllables: left }
    }

    pub fn power(&self, n: u32) -> GroupWord {
        (0..n).fold(GroupWord::identity(), |acc, _| acc.multiply(self))
    }

    /// Splits off a trailing syllable of the given factor, returning the
    /// remaining prefix and the syllable (or the word itself and `None`).
    pub(crate) fn split_trailing(&self, want_a: bool) -> (GroupWord, Option<Syllable>) {
        match self.syllables.last() {
            Some(s @ Syllable::A(..)) if want_a => (self.drop_last(), Some(*s)),
            Some(s @ Syllable::B(_)) if !want_a => (self.drop_last(), Some(*s)),
            _ => (self.clone(), None),
        }
    }

    fn drop_last(&self) -> GroupWord {
        GroupWord {
            syllables: self.syllables[..self.syllables.len() - 1].to_vec(),
        }
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return write!(f, "e");
        }
        for (i, s) in self.syllables.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            match s {
                Syllable::A(m, n) => write!(f, "A({m},{n})")?,
                Syllable::B(k) => write!(f, "B({k})")?,
            }
        }
        Ok(())
    }
}

impl FromStr for GroupWord {
    type Err = Error;

    /// Parses `A(1,0).B(2).A(-1,3)`; `e` or the empty string is the
    /// identity. Input need not be reduced.
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        if s.is_empty() || s == "e" {
            return Ok(GroupWord::identity());
        }
        let bad = || Error::Parse(format!("invalid group word `{s}`"));
        let mut raw = Vec::new();
        for part in s.split('.') {
            let part = part.trim();
            let inner = part
                .get(2..part.len().saturating_sub(1))
                .filter(|_| part.len() >= 3 && part.as_bytes()[1] == b'(' && part.ends_with(')'))
                .ok_or_else(bad)?;
            let nums: Vec<i64> = inner
                .split(',')
                .map(|x| x.trim().parse::<i64>())
                .collect::<Result<_, _>>()
                .map_err(|_| bad())?;
            let syl = match (&part[..1], nums.as_slice()) {
                ("A", [m, n]) => Syllable::A(*m, *n),
                ("B", [k]) => Syllable::B(*k),
                _ => return Err(bad()),
            };
            raw.push(syl);
        }
        Ok(GroupWord::normalize(raw))
    }
}

/// `|g⁻¹h|`.
pub fn word_distance(g: &GroupWord, h: &GroupWord) -> u64 {
    g.inverse().multiply(h).length()
}
