use std::fmt;

use super::poly::{fq_inv, fq_mul, fq_neg, LaurentPoly};
use crate::{Error, Result};

/// A 3×3 matrix over `𝔽_q[t, t⁻¹]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentMatrix {
    q: u32,
    e: [[LaurentPoly; 3]; 3],
}

impl LaurentMatrix {
    pub fn from_entries(q: u32, e: [[LaurentPoly; 3]; 3]) -> Result<Self> {
        for row in &e {
            for x in row {
                if x.modulus() != q {
                    return Err(Error::FieldMismatch(q, x.modulus()));
                }
            }
        }
        Ok(Self { q, e })
    }

    pub fn zero(q: u32) -> Self {
        let z = || LaurentPoly::zero(q);
        Self { q, e: [[z(), z(), z()], [z(), z(), z()], [z(), z(), z()]] }
    }

    pub fn identity(q: u32) -> Self {
        Self::monomial_diagonal(q, [0, 0, 0])
    }

    /// `diag(t^e₀, t^e₁, t^e₂)`.
    pub fn monomial_diagonal(q: u32, exps: [i64; 3]) -> Self {
        let mut m = Self::zero(q);
        for (i, &e) in exps.iter().enumerate() {
            m.e[i][i] = LaurentPoly::monomial(q, 1, e);
        }
        m
    }

    /// Elementary matrix `I + c·E_ij`, `i ≠ j`.
    pub fn elementary(q: u32, i: usize, j: usize, c: LaurentPoly) -> Self {
        assert_ne!(i, j, "elementary matrix needs i ≠ j");
        let mut m = Self::identity(q);
        m.e[i][j] = c;
        m
    }

    /// A constant matrix from `𝔽_q` entries.
    pub fn constant(q: u32, rows: [[u32; 3]; 3]) -> Self {
        let mut m = Self::zero(q);
        for i in 0..3 {
            for j in 0..3 {
                m.e[i][j] = LaurentPoly::monomial(q, rows[i][j], 0);
            }
        }
        m
    }

    pub fn modulus(&self) -> u32 {
        self.q
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.e[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: LaurentPoly) {
        debug_assert_eq!(x.modulus(), self.q);
        self.e[i][j] = x;
    }

    pub fn entries(&self) -> &[[LaurentPoly; 3]; 3] {
        &self.e
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.q, other.q);
        let mut out = Self::zero(self.q);
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = LaurentPoly::zero(self.q);
                for k in 0..3 {
                    let (a, b) = (&self.e[i][k], &other.e[k][j]);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = &acc + &(a * b);
                }
                out.e[i][j] = acc;
            }
        }
        out
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.q != other.q {
            return Err(Error::FieldMismatch(self.q, other.q));
        }
        Ok(self.mul(other))
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zero(self.q);
        for i in 0..3 {
            for j in 0..3 {
                out.e[i][j] = self.e[j][i].clone();
            }
        }
        out
    }

    /// Multiplication by the scalar `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        let mut out = self.clone();
        for row in out.e.iter_mut() {
            for x in row.iter_mut() {
                *x = x.shift(k);
            }
        }
        out
    }

    pub fn minor(&self, r: [usize; 2], c: [usize; 2]) -> LaurentPoly {
        &(&self.e[r[0]][c[0]] * &self.e[r[1]][c[1]]) - &(&self.e[r[0]][c[1]] * &self.e[r[1]][c[0]])
    }

    pub fn det(&self) -> LaurentPoly {
        let mut acc = LaurentPoly::zero(self.q);
        for j in 0..3 {
            let cols = match j {
                0 => [1, 2],
                1 => [0, 2],
                _ => [0, 1],
            };
            let term = &self.e[0][j] * &self.minor([1, 2], cols);
            acc = if j == 1 { &acc - &term } else { &acc + &term };
        }
        acc
    }

    /// The adjugate, `adj(M)·M = det(M)·I`.
    pub fn adjugate(&self) -> Self {
        let others = |k: usize| match k {
            0 => [1, 2],
            1 => [0, 2],
            _ => [0, 1],
        };
        let mut out = Self::zero(self.q);
        for i in 0..3 {
            for j in 0..3 {
                let m = self.minor(others(j), others(i));
                out.e[i][j] = if (i + j) % 2 == 1 { -&m } else { m };
            }
        }
        out
    }

    /// Exact inverse; defined when the determinant is a monomial `c·t^k`.
    pub fn inverse(&self) -> Result<Self> {
        let det = self.det();
        if det.is_zero() {
            return Err(Error::Singular);
        }
        if det.span() != 1 {
            return Err(Error::InvalidInput(format!(
                "determinant {det} is not a unit of the Laurent ring"
            )));
        }
        let v = det.valuation().unwrap();
        let c_inv = fq_inv(det.lowest_coeff(), self.q);
        let adj = self.adjugate();
        let mut out = Self::zero(self.q);
        for i in 0..3 {
            for j in 0..3 {
                out.e[i][j] = adj.e[i][j].scale(c_inv).shift(-v);
            }
        }
        Ok(out)
    }

    /// Minimum valuation over all entries; `None` for the zero matrix.
    pub fn min_valuation(&self) -> Option<i64> {
        self.e.iter().flatten().filter_map(LaurentPoly::valuation).min()
    }

    /// Coefficients at exponent `v` of every entry: the reduction mod `t`
    /// of `t^(-v)·M` when `v` is the minimum valuation.
    pub fn reduce_at(&self, v: i64) -> [[u32; 3]; 3] {
        let mut out = [[0u32; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] = self.e[i][j].reduce_at(v);
            }
        }
        out
    }

    pub fn is_sl3(&self) -> bool {
        self.det().is_one()
    }

    /// Largest coefficient span among entries.
    pub fn max_span(&self) -> usize {
        self.e.iter().flatten().map(LaurentPoly::span).max().unwrap_or(0)
    }

    /// `col_dst += c·col_src`.
    pub(crate) fn col_axpy(&mut self, dst: usize, src: usize, c: &LaurentPoly) {
        for i in 0..3 {
            let add = &self.e[i][src] * c;
            self.e[i][dst] = &self.e[i][dst] + &add;
        }
    }

    /// `row_dst += c·row_src`.
    pub(crate) fn row_axpy(&mut self, dst: usize, src: usize, c: &LaurentPoly) {
        for j in 0..3 {
            let add = c * &self.e[src][j];
            self.e[dst][j] = &self.e[dst][j] + &add;
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        for row in self.e.iter_mut() {
            row.swap(a, b);
        }
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        self.e.swap(a, b);
    }

    /// Parses `[[a, b, c], [d, e, f], [g, h, i]]` with Laurent polynomial
    /// entries, or the shorthand `diag(x, y, z)`.
    pub fn parse(s: &str, q: u32) -> Result<Self> {
        let t = s.trim();
        if let Some(inner) = t.strip_prefix("diag(").and_then(|r| r.strip_suffix(')')) {
            let parts: Vec<&str> = inner.split(',').collect();
            if parts.len() != 3 {
                return Err(Error::Parse(format!("diag needs three entries: `{s}`")));
            }
            let mut m = Self::zero(q);
            for (i, p) in parts.iter().enumerate() {
                m.e[i][i] = LaurentPoly::parse(p, q)?;
            }
            return Ok(m);
        }
        let bad = || Error::Parse(format!("invalid 3×3 matrix `{s}`"));
        let inner = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or_else(bad)?;
        let rows: Vec<&str> = inner
            .split(']')
            .map(|r| r.trim().trim_start_matches(',').trim())
            .filter(|r| !r.is_empty())
            .collect();
        if rows.len() != 3 {
            return Err(bad());
        }
        let mut m = Self::zero(q);
        for (i, row) in rows.iter().enumerate() {
            let row = row.strip_prefix('[').ok_or_else(bad)?;
            let cells: Vec<&str> = row.split(',').collect();
            if cells.len() != 3 {
                return Err(bad());
            }
            for (j, cell) in cells.iter().enumerate() {
                m.e[i][j] = LaurentPoly::parse(cell, q)?;
            }
        }
        Ok(m)
    }
}

impl fmt::Display for LaurentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.e.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[{}, {}, {}]", row[0], row[1], row[2])?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for LaurentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Small dense linear algebra over `𝔽_q` for residue computations.
pub mod fq {
    use super::*;

    pub type Vec3 = [u32; 3];
    pub type Mat3 = [[u32; 3]; 3];

    pub fn dot(a: &Vec3, b: &Vec3, q: u32) -> u32 {
        ((0..3).map(|i| a[i] as u64 * b[i] as u64).sum::<u64>() % q as u64) as u32
    }

    pub fn cross(a: &Vec3, b: &Vec3, q: u32) -> Vec3 {
        let m = |x: u32, y: u32| fq_mul(x, y, q);
        let s = |x: u32, y: u32| (x + fq_neg(y, q)) % q;
        [
            s(m(a[1], b[2]), m(a[2], b[1])),
            s(m(a[2], b[0]), m(a[0], b[2])),
            s(m(a[0], b[1]), m(a[1], b[0])),
        ]
    }

    /// Scales so the first nonzero coordinate is 1; `None` for zero.
    pub fn normalize(v: &Vec3, q: u32) -> Option<Vec3> {
        let lead = v.iter().copied().find(|&c| c != 0)?;
        let inv = fq_inv(lead, q);
        Some([fq_mul(v[0], inv, q), fq_mul(v[1], inv, q), fq_mul(v[2], inv, q)])
    }

    pub fn transpose(m: &Mat3) -> Mat3 {
        let mut out = [[0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] = m[j][i];
            }
        }
        out
    }

    pub fn mul_vec(m: &Mat3, v: &Vec3, q: u32) -> Vec3 {
        [dot(&m[0], v, q), dot(&m[1], v, q), dot(&m[2], v, q)]
    }

    pub fn det(m: &Mat3, q: u32) -> u32 {
        let c = cross(&m[1], &m[2], q);
        dot(&m[0], &c, q)
    }

    pub fn inverse(m: &Mat3, q: u32) -> Option<Mat3> {
        let d = det(m, q);
        if d == 0 {
            return None;
        }
        let d_inv = fq_inv(d, q);
        // Rows of the inverse transpose are cross products of rows.
        let c0 = cross(&m[1], &m[2], q);
        let c1 = cross(&m[2], &m[0], q);
        let c2 = cross(&m[0], &m[1], q);
        let mut inv = [[0; 3]; 3];
        for i in 0..3 {
            inv[i][0] = fq_mul(c0[i], d_inv, q);
            inv[i][1] = fq_mul(c1[i], d_inv, q);
            inv[i][2] = fq_mul(c2[i], d_inv, q);
        }
        Some(inv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_of_identity_and_elementary() {
        assert!(LaurentMatrix::identity(2).det().is_one());
        let e = LaurentMatrix::elementary(3, 0, 2, LaurentPoly::monomial(3, 2, -1));
        assert!(e.is_sl3());
        let d = LaurentMatrix::monomial_diagonal(2, [2, 1, 0]);
        assert_eq!(d.det(), LaurentPoly::monomial(2, 1, 3));
    }

    #[test]
    fn inverse_round_trip() {
        let q = 3;
        let a = LaurentMatrix::elementary(q, 0, 1, LaurentPoly::parse("t^-1 + 2", q).unwrap());
        let b = LaurentMatrix::elementary(q, 2, 0, LaurentPoly::parse("t", q).unwrap());
        let m = a.mul(&b).mul(&LaurentMatrix::monomial_diagonal(q, [1, -2, 0]));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), LaurentMatrix::identity(q));
        let singular = LaurentMatrix::zero(q);
        assert!(matches!(singular.inverse(), Err(Error::Singular)));
    }

    #[test]
    fn parse_forms() {
        let m = LaurentMatrix::parse("diag(t,1,t^-1)", 2).unwrap();
        assert!(m.is_sl3());
        let n = LaurentMatrix::parse(&m.to_string(), 2).unwrap();
        assert_eq!(m, n);
        assert!(LaurentMatrix::parse("[[1,0],[0,1]]", 2).is_err());
    }

    #[test]
    fn fq_inverse() {
        let m = [[1, 1, 0], [0, 1, 1], [1, 0, 0]];
        let inv = fq::inverse(&m, 2).unwrap();
        for i in 0..3 {
            let col = [inv[0][i], inv[1][i], inv[2][i]];
            let mut e = [0; 3];
            e[i] = 1;
            assert_eq!(fq::mul_vec(&m, &col, 2), e);
        }
    }
}
