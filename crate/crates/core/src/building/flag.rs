//! Flags of the projective plane over `𝔽_q`: chambers of a vertex residue.
//!
//! Both components are stored as normalised vectors (first nonzero
//! coordinate 1). The point is a linear form on `o/t·o`; the line is given
//! by its normal vector, and incidence is `point · line = 0`. Under an
//! element of `GL₃(O)` with reduction `ḡ`, points transform by `ḡ^{-T}` and
//! normals by `ḡ`.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::matrix::fq::{self, Mat3, Vec3};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Flag {
    pub point: Vec3,
    pub line: Vec3,
    pub q: u32,
}

/// The simplex of a residue picked out by a segment: a chamber for regular
/// directions, a single vertex otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Germ {
    Chamber(Flag),
    /// Type `(1,0)` direction.
    Point(Vec3),
    /// Type `(0,1)` direction, stored by the line's normal.
    Line(Vec3),
}

impl Germ {
    pub fn flag(&self) -> Option<Flag> {
        match self {
            Germ::Chamber(f) => Some(*f),
            _ => None,
        }
    }
}

impl Flag {
    /// Builds a flag from arbitrary nonzero vectors, normalising both.
    pub fn new(point: Vec3, line: Vec3, q: u32) -> Result<Self> {
        let p = fq::normalize(&point, q).ok_or_else(|| Error::InvalidInput("zero point vector".into()))?;
        let n = fq::normalize(&line, q).ok_or_else(|| Error::InvalidInput("zero line vector".into()))?;
        if fq::dot(&p, &n, q) != 0 {
            return Err(Error::InvalidInput("point is not on the line".into()));
        }
        Ok(Self { point: p, line: n, q })
    }

    /// `(⟨e₁⟩, ⟨e₁, e₂⟩)`.
    pub fn standard(q: u32) -> Self {
        Self { point: [1, 0, 0], line: [0, 0, 1], q }
    }

    /// Image under the residue action of `ḡ ∈ GL₃(𝔽_q)`.
    pub fn transform(&self, g: &Mat3) -> Flag {
        let q = self.q;
        let g_inv = fq::inverse(g, q).expect("invertible reduction");
        let p = fq::mul_vec(&fq::transpose(&g_inv), &self.point, q);
        let n = fq::mul_vec(g, &self.line, q);
        Flag::new(p, n, q).expect("incidence is preserved")
    }

    /// Position in the lexicographic enumeration of all flags.
    pub fn id(&self) -> usize {
        all_flags(self.q).binary_search(self).expect("normalised flag")
    }

    pub fn from_id(q: u32, id: usize) -> Option<Flag> {
        all_flags(q).get(id).copied()
    }
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.point;
        let [x, y, z] = self.line;
        write!(f, "(point [{a},{b},{c}], line [{x},{y},{z}])")
    }
}

/// Normalised nonzero vectors of `𝔽_q³` in lexicographic order.
pub fn projective_points(q: u32) -> Vec<Vec3> {
    let mut out = Vec::new();
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                let v = [a, b, c];
                if fq::normalize(&v, q) == Some(v) {
                    out.push(v);
                }
            }
        }
    }
    out
}

fn enumerate_flags(q: u32) -> Vec<Flag> {
    let pts = projective_points(q);
    let mut out = Vec::new();
    for p in &pts {
        for n in &pts {
            if fq::dot(p, n, q) == 0 {
                out.push(Flag { point: *p, line: *n, q });
            }
        }
    }
    out
}

/// All `(q²+q+1)(q+1)` flags, sorted. Cached for small moduli.
pub fn all_flags(q: u32) -> &'static [Flag] {
    static CACHE: OnceLock<std::sync::Mutex<Vec<(u32, &'static [Flag])>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let mut guard = cache.lock().unwrap();
    if let Some((_, f)) = guard.iter().find(|(k, _)| *k == q) {
        return f;
    }
    let leaked: &'static [Flag] = Box::leak(enumerate_flags(q).into_boxed_slice());
    guard.push((q, leaked));
    leaked
}

pub fn flags_opposite(f1: &Flag, f2: &Flag) -> Result<bool> {
    if f1.q != f2.q {
        return Err(Error::FieldMismatch(f1.q, f2.q));
    }
    let q = f1.q;
    Ok(fq::dot(&f2.line, &f1.point, q) != 0 && fq::dot(&f1.line, &f2.point, q) != 0)
}

/// Gallery distance in the flag graph; the diameter is 3.
pub fn gallery_distance_res(f1: &Flag, f2: &Flag) -> Result<u8> {
    if f1 == f2 {
        return Ok(0);
    }
    if flags_opposite(f1, f2)? {
        return Ok(3);
    }
    if f1.point == f2.point || f1.line == f2.line {
        return Ok(1);
    }
    Ok(2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(all_flags(2).len(), 21);
        assert_eq!(all_flags(3).len(), 52);
        assert_eq!(projective_points(5).len(), 31);
    }

    #[test]
    fn opposite_examples() {
        let f1 = Flag::standard(2);
        let f2 = Flag::new([0, 0, 1], [1, 0, 0], 2).unwrap();
        assert!(flags_opposite(&f1, &f2).unwrap());
        assert!(!flags_opposite(&f1, &f1).unwrap());
        assert!(flags_opposite(&f1, &Flag::standard(3)).is_err());
        for q in [2, 3] {
            for f in all_flags(q) {
                let opp = all_flags(q).iter().filter(|g| flags_opposite(f, g).unwrap()).count();
                assert_eq!(opp as u32, q * q * q);
            }
        }
    }

    #[test]
    fn gallery_examples() {
        let f = Flag::standard(2);
        assert_eq!(gallery_distance_res(&f, &f).unwrap(), 0);
        let g = Flag::new([1, 0, 0], [0, 1, 0], 2).unwrap();
        assert_eq!(gallery_distance_res(&f, &g).unwrap(), 1);
    }

    #[test]
    fn ids_round_trip() {
        for (i, f) in all_flags(3).iter().enumerate() {
            assert_eq!(f.id(), i);
            assert_eq!(Flag::from_id(3, i), Some(*f));
        }
    }

    #[test]
    fn transform_preserves_opposition() {
        let g: Mat3 = [[1, 1, 0], [0, 1, 1], [1, 0, 1]];
        let q = 3;
        let flags = all_flags(q);
        for a in flags.iter().take(10) {
            for b in flags {
                assert_eq!(
                    flags_opposite(a, b).unwrap(),
                    flags_opposite(&a.transform(&g), &b.transform(&g)).unwrap()
                );
            }
        }
    }
}
