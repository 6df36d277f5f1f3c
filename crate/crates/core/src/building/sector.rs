//! Germs of segments at a vertex and points of Weyl sectors.

use serde::{Deserialize, Serialize};

use super::flag::{projective_points, Flag, Germ};
use super::lattice::{canonicalize, smith_form, LatticeClass, VectorDistance};
use super::matrix::fq::{self, Vec3};
use super::matrix::LaurentMatrix;
use crate::{Error, Result};

/// The sector `Q(base, C)` based at a vertex, identified by its germ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectorGerm {
    pub base: LatticeClass,
    pub flag: Flag,
}

/// A sector given by an explicit frame `u ∈ GL₃(O)`, used where the
/// frame is known to more than first order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sector {
    pub base: LatticeClass,
    pub frame: LaurentMatrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GermReport {
    pub distance: VectorDistance,
    pub flag_id: Option<usize>,
}

fn first_nonzero_row(m: &fq::Mat3) -> Option<Vec3> {
    m.iter().copied().find(|r| r.iter().any(|&c| c != 0))
}

fn first_nonzero_col(m: &fq::Mat3) -> Option<Vec3> {
    first_nonzero_row(&fq::transpose(m))
}

/// The simplex of `Res(o)` containing the initial piece of `[o, y]`,
/// read off the Smith transform of `H_o⁻¹·H_y` reduced mod `t`.
pub fn germ_flag(o: &LatticeClass, y: &LatticeClass) -> Result<Germ> {
    if o == y {
        return Err(Error::InvalidInput("germ of a degenerate segment".into()));
    }
    let q = o.modulus();
    let m = o.basis_inverse().mul(y.basis());
    let s = smith_form(&m)?;
    let [d0, d1, d2] = s.exponents;
    let left = s.left.reduce_at(0);
    let point = fq::normalize(&left[2], q).expect("unimodular transform");
    let normal = fq::normalize(&fq::cross(&left[1], &left[2], q), q).expect("unimodular transform");
    Ok(match (d2 > d1, d1 > d0) {
        (true, true) => Germ::Chamber(Flag { point, line: normal, q }),
        (true, false) => Germ::Point(point),
        (false, true) => Germ::Line(normal),
        (false, false) => unreachable!("distinct classes"),
    })
}

/// Germ from a transition matrix and its exact inverse, without
/// elimination: the point is any nonzero row of the leading part of `M⁻¹`,
/// the line normal any nonzero column of the leading part of `M`.
pub fn germ_from_transition(m: &LaurentMatrix, m_inv: &LaurentMatrix, d: VectorDistance) -> Option<Germ> {
    let q = m.modulus();
    let point = || {
        let v = m_inv.min_valuation().unwrap();
        fq::normalize(&first_nonzero_row(&m_inv.reduce_at(v)).unwrap(), q).unwrap()
    };
    let normal = || {
        let v = m.min_valuation().unwrap();
        fq::normalize(&first_nonzero_col(&m.reduce_at(v)).unwrap(), q).unwrap()
    };
    match (d.a > 0, d.b > 0) {
        (true, true) => Some(Germ::Chamber(Flag { point: point(), line: normal(), q })),
        (true, false) => Some(Germ::Point(point())),
        (false, true) => Some(Germ::Line(normal())),
        (false, false) => None,
    }
}

fn complete_basis(fixed: &[Vec3], q: u32) -> Vec<Vec3> {
    let mut out = fixed.to_vec();
    for e in [[1, 0, 0], [0, 1, 0], [0, 0, 1]] {
        if out.len() == 3 {
            break;
        }
        let mut m = [[0u32; 3]; 3];
        for (i, v) in out.iter().chain(std::iter::once(&e)).enumerate() {
            m[i] = *v;
        }
        let rank_ok = match out.len() {
            0 => true,
            1 => fq::cross(&out[0], &e, q) != [0, 0, 0],
            _ => fq::det(&m, q) != 0,
        };
        if rank_ok {
            out.push(e);
        }
    }
    out
}

/// A constant frame `u` whose sector at the standard vertex has germ
/// `flag`: the rows of `u⁻¹` are the point, a second form on the line,
/// and a third form off it.
pub fn flag_frame(flag: &Flag) -> LaurentMatrix {
    let q = flag.q;
    // Forms vanishing on the normal: the line as a subspace of the dual.
    let on_line = projective_points(q)
        .into_iter()
        .find(|w| fq::dot(w, &flag.line, q) == 0 && fq::cross(w, &flag.point, q) != [0, 0, 0])
        .expect("a line has q+1 ≥ 3 points");
    let basis = complete_basis(&[flag.point, on_line], q);
    let w_t: fq::Mat3 = [basis[0], basis[1], basis[2]];
    let u = fq::inverse(&w_t, q).expect("independent forms");
    LaurentMatrix::constant(q, u)
}

impl SectorGerm {
    pub fn new(base: LatticeClass, flag: Flag) -> Result<Self> {
        if base.modulus() != flag.q {
            return Err(Error::FieldMismatch(base.modulus(), flag.q));
        }
        Ok(Self { base, flag })
    }

    pub fn sector(&self) -> Sector {
        Sector { base: self.base.clone(), frame: flag_frame(&self.flag) }
    }
}

impl Sector {
    pub fn point(&self, v: VectorDistance) -> LatticeClass {
        let q = self.base.modulus();
        let d = LaurentMatrix::monomial_diagonal(q, [(v.a + v.b) as i64, v.b as i64, 0]);
        canonicalize(&self.base.basis().mul(&self.frame).mul(&d)).expect("nonsingular")
    }

    /// A sector whose germ at `o` contains the direction of `[o, y]`,
    /// with frame taken from the full Smith transform so that `y` itself
    /// lies on it.
    pub fn through(o: &LatticeClass, y: &LatticeClass) -> Result<Sector> {
        let m = o.basis_inverse().mul(y.basis());
        let s = smith_form(&m)?;
        // left·M·right = diag(ascending); the frame is left⁻¹ with columns
        // reversed so exponents descend.
        let left_inv = s.left_inverse();
        let mut frame = left_inv;
        frame.swap_cols(0, 2);
        Ok(Sector { base: o.clone(), frame })
    }
}

/// The vertex of `Q(base, C)` at vector `v` from `base`.
pub fn sector_point(germ: &SectorGerm, v: VectorDistance) -> LatticeClass {
    germ.sector().point(v)
}

/// The `2(q²+q+1)` vertices adjacent to `x`: one of type `(1,0)` per
/// point and one of type `(0,1)` per line of the residue.
pub fn neighbours(x: &LatticeClass) -> Vec<LatticeClass> {
    let q = x.modulus();
    let pts = projective_points(q);
    let mut out = Vec::with_capacity(2 * pts.len());
    for p in &pts {
        let line = pts.iter().find(|n| fq::dot(p, n, q) == 0).unwrap();
        let g = SectorGerm { base: x.clone(), flag: Flag { point: *p, line: *line, q } };
        out.push(sector_point(&g, VectorDistance::new(1, 0)));
    }
    for n in &pts {
        let point = pts.iter().find(|p| fq::dot(p, n, q) == 0).unwrap();
        let g = SectorGerm { base: x.clone(), flag: Flag { point: *point, line: *n, q } };
        out.push(sector_point(&g, VectorDistance::new(0, 1)));
    }
    out
}

/// Vertices within combinatorial distance `radius` of `x`, in BFS order.
pub fn ball(x: &LatticeClass, radius: usize) -> Vec<LatticeClass> {
    let mut seen = std::collections::HashSet::from([x.clone()]);
    let mut out = vec![x.clone()];
    let mut frontier = vec![x.clone()];
    for _ in 0..radius {
        let mut next = Vec::new();
        for v in &frontier {
            for w in neighbours(v) {
                if seen.insert(w.clone()) {
                    out.push(w.clone());
                    next.push(w);
                }
            }
        }
        frontier = next;
    }
    out
}
