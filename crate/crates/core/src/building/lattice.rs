//! Lattice classes (vertices of the building) and relative position.
//!
//! Elimination over the valuation ring `𝔽_q[[t]]` is carried out on exact
//! Laurent polynomials. After scaling a matrix `M` to be integral with
//! `N = val det M`, the lattice `M·O³` contains `t^N·O³`, so every term of
//! exponent `> N` can be discarded without changing the lattice or its
//! elementary divisors. That bound keeps power-series quotients finite.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::matrix::LaurentMatrix;
use super::poly::LaurentPoly;
use crate::{Error, Result};

/// Weyl-chamber valued distance `(a, b)` between vertices: with elementary
/// divisors `a₁ ≥ a₂ ≥ a₃` of the transition matrix, `a = a₁ − a₂` and
/// `b = a₂ − a₃`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VectorDistance {
    pub a: u64,
    pub b: u64,
}

impl VectorDistance {
    pub fn new(a: u64, b: u64) -> Self {
        Self { a, b }
    }

    pub fn from_divisors(d: [i64; 3]) -> Self {
        debug_assert!(d[0] >= d[1] && d[1] >= d[2]);
        Self { a: (d[0] - d[1]) as u64, b: (d[1] - d[2]) as u64 }
    }

    pub fn swap(self) -> Self {
        Self { a: self.b, b: self.a }
    }

    pub fn is_zero(self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn is_regular(self) -> bool {
        self.a > 0 && self.b > 0
    }

    /// `a² + ab + b²`, the squared CAT(0) length.
    pub fn squared_length(self) -> u64 {
        self.a * self.a + self.a * self.b + self.b * self.b
    }

    pub fn length(self) -> f64 {
        (self.squared_length() as f64).sqrt()
    }
}

impl fmt::Display for VectorDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

/// Makes `m` integral by a scalar power of `t`. Returns the shifted matrix
/// and the shift applied.
fn make_integral(m: &LaurentMatrix) -> Result<(LaurentMatrix, i64)> {
    let v = m.min_valuation().ok_or(Error::Singular)?;
    Ok((m.shift(-v), -v))
}

fn truncate_all(m: &mut LaurentMatrix, bound: i64) {
    for i in 0..3 {
        for j in 0..3 {
            let x = m.get(i, j).truncate_above(bound);
            m.set(i, j, x);
        }
    }
}

/// Result of Smith elimination `left · M · right ≡ diag(t^d₀, t^d₁, t^d₂)`
/// with `d₀ ≤ d₁ ≤ d₂`. `left` is a product of unimodular row operations
/// over the valuation ring, exact modulo `t^precision`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub exponents: [i64; 3],
    pub left: LaurentMatrix,
    /// Terms of exponent `≥ precision` were discarded along the way.
    pub precision: i64,
}

impl SmithForm {
    /// `X` with `left·X ≡ I mod t^precision`; its columns, in reverse
    /// order, frame an apartment through both lattices.
    pub fn left_inverse(&self) -> LaurentMatrix {
        let q = self.left.modulus();
        let det = self.left.det();
        let w = det.unit_inverse(self.precision);
        let mut x = self.left.adjugate();
        for i in 0..3 {
            for j in 0..3 {
                let v = (x.get(i, j) * &w).truncate_above(self.precision);
                x.set(i, j, v);
            }
        }
        debug_assert_eq!(x.modulus(), q);
        x
    }
}

/// Smith normal form over `𝔽_q[[t]]` with the left transform.
pub fn smith_form(m: &LaurentMatrix) -> Result<SmithForm> {
    let q = m.modulus();
    let det = m.det();
    if det.is_zero() {
        return Err(Error::Singular);
    }
    let (mut a, shift) = make_integral(m)?;
    let n_val = a.det().valuation().unwrap();
    let bound = n_val + 1;
    truncate_all(&mut a, bound);
    let mut left = LaurentMatrix::identity(q);
    let mut exps = [0i64; 3];
    for k in 0..3 {
        // Pivot: entry of least valuation in the trailing block.
        let mut best: Option<(i64, usize, usize)> = None;
        for i in k..3 {
            for j in k..3 {
                if let Some(v) = a.get(i, j).valuation() {
                    if best.map_or(true, |(bv, _, _)| v < bv) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let (v, pi, pj) = best.ok_or(Error::Singular)?;
        a.swap_rows(k, pi);
        left.swap_rows(k, pi);
        a.swap_cols(k, pj);
        // Normalise the pivot to exactly t^v.
        let unit = a.get(k, k).shift(-v);
        let w = unit.unit_inverse(bound);
        for j in 0..3 {
            let x = (a.get(k, j) * &w).truncate_above(bound);
            a.set(k, j, x);
            let y = (left.get(k, j) * &w).truncate_above(bound);
            left.set(k, j, y);
        }
        let pivot_col_fix = a.get(k, k).truncate_above(v + 1);
        a.set(k, k, pivot_col_fix);
        for i in k + 1..3 {
            let factor = -&a.get(i, k).shift(-v);
            if factor.is_zero() {
                continue;
            }
            a.row_axpy(i, k, &factor);
            left.row_axpy(i, k, &factor);
            for j in 0..3 {
                let x = a.get(i, j).truncate_above(bound);
                a.set(i, j, x);
                let y = left.get(i, j).truncate_above(bound);
                left.set(i, j, y);
            }
            a.set(i, k, LaurentPoly::zero(q));
        }
        for j in k + 1..3 {
            let factor = -&a.get(k, j).shift(-v);
            if factor.is_zero() {
                continue;
            }
            a.col_axpy(j, k, &factor);
            for i in 0..3 {
                let x = a.get(i, j).truncate_above(bound);
                a.set(i, j, x);
            }
            a.set(k, j, LaurentPoly::zero(q));
        }
        exps[k] = v - shift;
    }
    Ok(SmithForm { exponents: exps, left, precision: bound })
}

/// Elementary divisor exponents `a₁ ≥ a₂ ≥ a₃` over `𝔽_q[[t]]`.
pub fn elementary_divisors(m: &LaurentMatrix) -> Result<[i64; 3]> {
    let s = smith_form(m)?;
    let [d0, d1, d2] = s.exponents;
    Ok([d2, d1, d0])
}

/// A homothety class of `O`-lattices in `K³`, stored as its canonical
/// basis: upper triangular, diagonal `t^dᵢ`, entries in row `i` reduced
/// below `t^dᵢ`, and minimum entry valuation 0.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LatticeClass {
    basis: LaurentMatrix,
}

impl LatticeClass {
    pub fn standard(q: u32) -> Self {
        Self { basis: LaurentMatrix::identity(q) }
    }

    pub fn basis(&self) -> &LaurentMatrix {
        &self.basis
    }

    pub fn modulus(&self) -> u32 {
        self.basis.modulus()
    }

    /// Diagonal exponents of the canonical basis.
    pub fn diagonal_exponents(&self) -> [i64; 3] {
        [0, 1, 2].map(|i| self.basis.get(i, i).valuation().unwrap())
    }

    /// Colour in `{0, 1, 2}`: `val det` of the canonical basis mod 3.
    pub fn vertex_type(&self) -> u8 {
        self.diagonal_exponents().iter().sum::<i64>().rem_euclid(3) as u8
    }

    /// The class of `g·L`.
    pub fn act(&self, g: &LaurentMatrix) -> LatticeClass {
        canonicalize(&g.mul(&self.basis)).expect("isometries map lattices to lattices")
    }

    /// Exact inverse of the canonical basis (its determinant is a monomial).
    pub fn basis_inverse(&self) -> LaurentMatrix {
        self.basis.inverse().expect("canonical bases have monomial determinant")
    }
}

impl fmt::Display for LatticeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.basis)
    }
}

impl fmt::Debug for LatticeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LatticeClass{}", self.basis)
    }
}

/// Canonical form of the class of the lattice spanned by the columns of `m`.
pub fn canonicalize(m: &LaurentMatrix) -> Result<LatticeClass> {
    let q = m.modulus();
    if m.det().is_zero() {
        return Err(Error::Singular);
    }
    let (mut a, _) = make_integral(m)?;
    let n_val = a.det().valuation().unwrap();
    let bound = n_val + 1;
    truncate_all(&mut a, bound);
    // Column operations only; clear rows bottom-up to get upper triangular.
    for k in (0..3).rev() {
        let (v, pj) = (0..=k)
            .filter_map(|j| a.get(k, j).valuation().map(|v| (v, j)))
            .min()
            .ok_or(Error::Singular)?;
        a.swap_cols(k, pj);
        let unit = a.get(k, k).shift(-v);
        let w = unit.unit_inverse(bound);
        for i in 0..3 {
            let x = (a.get(i, k) * &w).truncate_above(bound);
            a.set(i, k, x);
        }
        for j in 0..k {
            let factor = -&a.get(k, j).shift(-v);
            if factor.is_zero() {
                continue;
            }
            a.col_axpy(j, k, &factor);
            for i in 0..3 {
                let x = a.get(i, j).truncate_above(bound);
                a.set(i, j, x);
            }
            a.set(k, j, LaurentPoly::zero(q));
        }
        a.set(k, k, LaurentPoly::monomial(q, 1, v));
    }
    // Reduce above-diagonal entries of row i modulo t^{d_i}, right to left
    // within each column so earlier reductions are not undone.
    for j in 1..3 {
        for i in (0..j).rev() {
            let d = a.get(i, i).valuation().unwrap();
            let high = a.get(i, j).high_part(d);
            if high.is_zero() {
                continue;
            }
            let factor = -&high.shift(-d);
            a.col_axpy(j, i, &factor);
        }
    }
    let v = a.min_valuation().ok_or(Error::Singular)?;
    Ok(LatticeClass { basis: a.shift(-v) })
}

/// `(a₁, a₂, a₃)` from minimum valuations: `a₃ = min val M`,
/// `a₂ + a₃ = val det + min val M⁻¹`, `a₁ = val det − a₂ − a₃`.
/// `m_inv` must be the exact inverse of `m`.
pub fn divisors_from_inverse_pair(m: &LaurentMatrix, m_inv: &LaurentMatrix, det_val: i64) -> [i64; 3] {
    let a3 = m.min_valuation().expect("nonsingular");
    let a23 = det_val + m_inv.min_valuation().expect("nonsingular");
    [det_val - a23, a23 - a3, a3]
}

/// Vector distance from the relative position of two lattice classes.
pub fn vector_distance(x: &LatticeClass, y: &LatticeClass) -> VectorDistance {
    let transition = x.basis_inverse().mul(y.basis());
    VectorDistance::from_divisors(elementary_divisors(&transition).expect("nonsingular"))
}

/// Transition matrix `H_x⁻¹·H_y` and its inverse.
pub fn transition_pair(x: &LatticeClass, y: &LatticeClass) -> (LaurentMatrix, LaurentMatrix) {
    let m = x.basis_inverse().mul(y.basis());
    let m_inv = y.basis_inverse().mul(x.basis());
    (m, m_inv)
}

/// Same value as [`vector_distance`], computed from minimum valuations of
/// the transition matrix and its inverse.
pub fn vector_distance_fast(x: &LatticeClass, y: &LatticeClass) -> VectorDistance {
    let (m, m_inv) = transition_pair(x, y);
    let det_val: i64 = y.diagonal_exponents().iter().sum::<i64>() - x.diagonal_exponents().iter().sum::<i64>();
    VectorDistance::from_divisors(divisors_from_inverse_pair(&m, &m_inv, det_val))
}

/// `√(a² + ab + b²)` in the unit-edge normalisation.
pub fn cat0_distance(x: &LatticeClass, y: &LatticeClass) -> f64 {
    vector_distance_fast(x, y).length()
}



/// A vertex with its canonical basis and inverse precomputed, for
/// repeated relative-position queries against moving group elements.
#[derive(Clone, Debug)]
pub struct VertexFrame {
    pub class: LatticeClass,
    h: LaurentMatrix,
    h_inv: LaurentMatrix,
    det_val: i64,
    standard: bool,
}

impl VertexFrame {
    pub fn new(class: LatticeClass) -> Self {
        let h = class.basis().clone();
        let h_inv = class.basis_inverse();
        let det_val = class.diagonal_exponents().iter().sum();
        let standard = class == LatticeClass::standard(class.modulus());
        Self { class, h, h_inv, det_val, standard }
    }

    /// Transition from `self` to `z·to`, its inverse, and `val det`,
    /// given `z` together with its exact inverse.
    pub fn relative(&self, to: &VertexFrame, z: &LaurentMatrix, z_inv: &LaurentMatrix) -> (LaurentMatrix, LaurentMatrix, i64) {
        let m = match (self.standard, to.standard) {
            (true, true) => z.clone(),
            (true, false) => z.mul(&to.h),
            (false, true) => self.h_inv.mul(z),
            (false, false) => self.h_inv.mul(z).mul(&to.h),
        };
        let m_inv = match (self.standard, to.standard) {
            (true, true) => z_inv.clone(),
            (true, false) => to.h_inv.mul(z_inv),
            (false, true) => z_inv.mul(&self.h),
            (false, false) => to.h_inv.mul(z_inv).mul(&self.h),
        };
        (m, m_inv, to.det_val - self.det_val)
    }

    /// `vector_distance(self, z·to)`.
    pub fn distance_to(&self, to: &VertexFrame, z: &LaurentMatrix, z_inv: &LaurentMatrix) -> VectorDistance {
        let (m, m_inv, d) = self.relative(to, z, z_inv);
        VectorDistance::from_divisors(divisors_from_inverse_pair(&m, &m_inv, d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(e: [i64; 3]) -> LaurentMatrix {
        LaurentMatrix::monomial_diagonal(2, e)
    }

    #[test]
    fn divisors_examples() {
        assert_eq!(elementary_divisors(&diag([2, 1, 0])).unwrap(), [2, 1, 0]);
        assert_eq!(elementary_divisors(&LaurentMatrix::identity(2)).unwrap(), [0, 0, 0]);
        assert_eq!(elementary_divisors(&diag([0, 3, -1])).unwrap(), [3, 0, -1]);
        assert!(matches!(elementary_divisors(&LaurentMatrix::zero(2)), Err(Error::Singular)));
    }

    #[test]
    fn divisors_of_conjugated_diagonal() {
        let q = 3;
        let k1 = LaurentMatrix::elementary(q, 0, 1, LaurentPoly::parse("1 + t + 2t^2", q).unwrap());
        let k2 = LaurentMatrix::elementary(q, 2, 0, LaurentPoly::parse("2 + t", q).unwrap());
        let k3 = LaurentMatrix::elementary(q, 1, 2, LaurentPoly::parse("t^3", q).unwrap());
        let u = k1.mul(&k2).mul(&k3);
        let v = k3.mul(&k1).mul(&k2).transpose();
        let m = u.mul(&LaurentMatrix::monomial_diagonal(q, [4, -1, 2])).mul(&v);
        assert_eq!(elementary_divisors(&m).unwrap(), [4, 2, -1]);
    }

    #[test]
    fn canonical_examples() {
        let id = canonicalize(&LaurentMatrix::identity(2)).unwrap();
        assert_eq!(id, LatticeClass::standard(2));
        assert_eq!(id.vertex_type(), 0);
        let c = canonicalize(&diag([1, 0, 0])).unwrap();
        assert_eq!(c.vertex_type(), 1);
        assert_eq!(canonicalize(&diag([4, 3, 3])).unwrap(), c);
        let m = LaurentMatrix::parse("[[1+t, t^-1, 0], [t, 1, 1], [0, t^2, 1]]", 2).unwrap();
        let once = canonicalize(&m).unwrap();
        assert_eq!(canonicalize(once.basis()).unwrap(), once);
        assert_eq!(canonicalize(&m.shift(3)).unwrap(), once);
    }

    #[test]
    fn vector_distance_examples() {
        let o = LatticeClass::standard(2);
        let y = |e| canonicalize(&diag(e)).unwrap();
        assert_eq!(vector_distance(&o, &o), VectorDistance::new(0, 0));
        assert_eq!(vector_distance(&o, &y([1, 0, 0])), VectorDistance::new(1, 0));
        assert_eq!(vector_distance(&o, &y([1, 1, 0])), VectorDistance::new(0, 1));
        assert_eq!(vector_distance(&o, &y([2, 1, 0])), VectorDistance::new(1, 1));
        assert_eq!(vector_distance(&y([2, 1, 0]), &o), VectorDistance::new(1, 1));
        assert_eq!(vector_distance(&y([3, 0, 0]), &o), VectorDistance::new(0, 3));
        assert_eq!(vector_distance_fast(&y([3, 0, 0]), &o), VectorDistance::new(0, 3));
    }

    #[test]
    fn cat0_examples() {
        assert_eq!(VectorDistance::new(1, 0).length(), 1.0);
        assert_eq!(VectorDistance::new(0, 1).length(), 1.0);
        assert!((VectorDistance::new(1, 1).length() - 3f64.sqrt()).abs() < 1e-15);
        assert!((VectorDistance::new(3, 2).length() - 19f64.sqrt()).abs() < 1e-15);
    }
}
