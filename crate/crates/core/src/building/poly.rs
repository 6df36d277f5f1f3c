//! Exact arithmetic in `𝔽_q[t, t⁻¹]` for prime `q`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::{Error, Result};

pub(crate) fn fq_add(a: u32, b: u32, q: u32) -> u32 {
    let s = a + b;
    if s >= q {
        s - q
    } else {
        s
    }
}

pub(crate) fn fq_mul(a: u32, b: u32, q: u32) -> u32 {
    ((a as u64 * b as u64) % q as u64) as u32
}

pub(crate) fn fq_neg(a: u32, q: u32) -> u32 {
    if a == 0 {
        0
    } else {
        q - a
    }
}

pub(crate) fn fq_inv(a: u32, q: u32) -> u32 {
    assert!(a % q != 0, "inverse of zero in F_{q}");
    let mut result = 1u64;
    let mut base = a as u64 % q as u64;
    let mut e = q - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % q as u64;
        }
        base = base * base % q as u64;
        e >>= 1;
    }
    result as u32
}

pub fn is_prime(q: u32) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| q % d != 0)
}

/// A Laurent polynomial over `𝔽_q`, stored densely from its lowest
/// nonzero exponent. Both ends of `coeffs` are nonzero; the zero
/// polynomial has empty `coeffs`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    q: u32,
    low: i64,
    coeffs: Vec<u32>,
}

impl LaurentPoly {
    pub fn zero(q: u32) -> Self {
        Self { q, low: 0, coeffs: Vec::new() }
    }

    pub fn one(q: u32) -> Self {
        Self::monomial(q, 1, 0)
    }

    /// `c·t^e`.
    pub fn monomial(q: u32, c: u32, e: i64) -> Self {
        Self::from_coeffs(q, e, vec![c % q])
    }

    /// `Σ coeffs[i]·t^(low+i)`, reduced mod `q` and trimmed.
    pub fn from_coeffs(q: u32, low: i64, coeffs: Vec<u32>) -> Self {
        let mut p = Self { q, low, coeffs: coeffs.into_iter().map(|c| c % q).collect() };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|&&c| c == 0).count();
        if lead == self.coeffs.len() {
            self.coeffs.clear();
            self.low = 0;
        } else if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i64;
        }
    }

    pub fn modulus(&self) -> u32 {
        self.q
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.coeffs == [1]
    }

    /// Lowest exponent, `None` for zero (valuation `+∞`).
    pub fn valuation(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.low)
    }

    /// Highest exponent, `None` for zero.
    pub fn degree(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.low + self.coeffs.len() as i64 - 1)
    }

    pub fn coeff(&self, e: i64) -> u32 {
        let i = e - self.low;
        if i < 0 {
            0
        } else {
            self.coeffs.get(i as usize).copied().unwrap_or(0)
        }
    }

    /// Number of stored coefficients (span of the support).
    pub fn span(&self) -> usize {
        self.coeffs.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, u32)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(move |(i, &c)| (self.low + i as i64, c))
    }

    pub fn check_same_field(&self, other: &Self) -> Result<()> {
        if self.q == other.q {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.q, other.q))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same_field(other)?;
        Ok(self.combine(other, 1))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_same_field(other)?;
        Ok(self.product(other))
    }

    /// `self + c·other·t^shift`.
    pub fn add_scaled(&self, other: &Self, c: u32, shift: i64) -> Self {
        let q = self.q;
        let c = c % q;
        if other.is_zero() || c == 0 {
            return self.clone();
        }
        if self.is_zero() {
            let coeffs = other.coeffs.iter().map(|&x| fq_mul(x, c, q)).collect();
            return Self::from_coeffs(q, other.low + shift, coeffs);
        }
        let o_low = other.low + shift;
        let low = self.low.min(o_low);
        let high = self.degree().unwrap().max(o_low + other.coeffs.len() as i64 - 1);
        let mut coeffs = vec![0u32; (high - low + 1) as usize];
        let off = (self.low - low) as usize;
        coeffs[off..off + self.coeffs.len()].copy_from_slice(&self.coeffs);
        let off = (o_low - low) as usize;
        if c == 1 {
            for (slot, &x) in coeffs[off..].iter_mut().zip(&other.coeffs) {
                *slot = fq_add(*slot, x, q);
            }
        } else {
            for (slot, &x) in coeffs[off..].iter_mut().zip(&other.coeffs) {
                *slot = fq_add(*slot, fq_mul(x, c, q), q);
            }
        }
        Self::from_coeffs(q, low, coeffs)
    }

    fn combine(&self, other: &Self, sign: i32) -> Self {
        let c = if sign >= 0 { 1 } else { fq_neg(1, self.q) };
        self.add_scaled(other, c, 0)
    }

    fn product(&self, other: &Self) -> Self {
        let q = self.q;
        if self.is_zero() || other.is_zero() {
            return Self::zero(q);
        }
        if other.coeffs.len() == 1 {
            return Self::zero(q).add_scaled(self, other.coeffs[0], other.low);
        }
        if self.coeffs.len() == 1 {
            return Self::zero(q).add_scaled(other, self.coeffs[0], self.low);
        }
        let mut acc = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                acc[i + j] += a as u64 * b as u64;
            }
            if i % 1024 == 1023 {
                for x in acc.iter_mut() {
                    *x %= q as u64;
                }
            }
        }
        let coeffs = acc.into_iter().map(|x| (x % q as u64) as u32).collect();
        Self::from_coeffs(q, self.low + other.low, coeffs)
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Self { q: self.q, low: self.low + k, coeffs: self.coeffs.clone() }
    }

    pub fn scale(&self, c: u32) -> Self {
        Self::zero(self.q).add_scaled(self, c, 0)
    }

    /// Drops every term of exponent `≥ bound`.
    pub fn truncate_above(&self, bound: i64) -> Self {
        if self.is_zero() || self.degree().unwrap() < bound {
            return self.clone();
        }
        if bound <= self.low {
            return Self::zero(self.q);
        }
        Self::from_coeffs(self.q, self.low, self.coeffs[..(bound - self.low) as usize].to_vec())
    }

    /// Keeps only the terms of exponent `≥ bound`.
    pub fn high_part(&self, bound: i64) -> Self {
        if self.is_zero() || bound <= self.low {
            return self.clone();
        }
        let skip = (bound - self.low) as usize;
        if skip >= self.coeffs.len() {
            return Self::zero(self.q);
        }
        Self::from_coeffs(self.q, bound, self.coeffs[skip..].to_vec())
    }

    /// Coefficient of the lowest term (zero for the zero polynomial).
    pub fn lowest_coeff(&self) -> u32 {
        self.coeffs.first().copied().unwrap_or(0)
    }

    /// For a power series unit `u` (valuation 0), a polynomial `w` with
    /// `u·w ≡ 1 mod t^precision`.
    pub fn unit_inverse(&self, precision: i64) -> Self {
        assert_eq!(self.valuation(), Some(0), "unit_inverse needs valuation 0");
        let q = self.q;
        let n = precision.max(1) as usize;
        let c0_inv = fq_inv(self.coeffs[0], q);
        let mut w = vec![0u32; n];
        w[0] = c0_inv;
        for k in 1..n {
            let mut s = 0u64;
            for i in 1..=k.min(self.coeffs.len() - 1) {
                s += self.coeffs[i] as u64 * w[k - i] as u64;
            }
            let s = (s % q as u64) as u32;
            w[k] = fq_mul(fq_neg(s, q), c0_inv, q);
        }
        Self::from_coeffs(q, 0, w)
    }

    /// Evaluation of `t^(-v)·self` at `t = 0`, i.e. the coefficient at
    /// exponent `v`.
    pub fn reduce_at(&self, v: i64) -> u32 {
        self.coeff(v)
    }

    /// Parses `t^-1 + 1 + t^2`, `2t^3 - t`, `3`, `0`.
    pub fn parse(s: &str, q: u32) -> Result<Self> {
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let bad = || Error::Parse(format!("invalid Laurent polynomial `{s}`"));
        let mut out = Self::zero(q);
        let mut rest = cleaned.as_str();
        while !rest.is_empty() {
            let negative = rest.starts_with('-');
            if rest.starts_with('+') || rest.starts_with('-') {
                rest = &rest[1..];
            }
            let end = rest[1.min(rest.len())..]
                .find(['+', '-'])
                .map(|i| i + 1)
                .unwrap_or(rest.len());
            // A '-' right after '^' belongs to the exponent.
            let mut end = end;
            while end < rest.len() && rest.as_bytes()[end] == b'-' && rest.as_bytes()[end - 1] == b'^' {
                end = rest[end + 1..].find(['+', '-']).map(|i| i + end + 1).unwrap_or(rest.len());
            }
            let term = &rest[..end];
            rest = &rest[end..];
            let (coef_str, power) = match term.find('t') {
                Some(i) => {
                    let exp = &term[i + 1..];
                    let e = if exp.is_empty() {
                        1
                    } else {
                        exp.strip_prefix('^').ok_or_else(bad)?.parse::<i64>().map_err(|_| bad())?
                    };
                    (term[..i].trim_end_matches('*'), e)
                }
                None => (term, 0),
            };
            let c: u64 = if coef_str.is_empty() {
                1
            } else {
                coef_str.parse::<u64>().map_err(|_| bad())?
            };
            let c = (c % q as u64) as u32;
            let c = if negative { fq_neg(c, q) } else { c };
            out = out.add_scaled(&Self::one(q), c, power);
        }
        Ok(out)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        debug_assert_eq!(self.q, rhs.q);
        self.combine(rhs, 1)
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        debug_assert_eq!(self.q, rhs.q);
        self.combine(rhs, -1)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        debug_assert_eq!(self.q, rhs.q);
        self.product(rhs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(fq_neg(1, self.q))
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match (e, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "t")?,
                (1, c) => write!(f, "{c}t")?,
                (e, 1) => write!(f, "t^{e}")?,
                (e, c) => write!(f, "{c}t^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
