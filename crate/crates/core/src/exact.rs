//! Exact real numbers of the form `Σ cᵢ·√rᵢ` with rational `cᵢ` and
//! square-free radicands `rᵢ`.
//!
//! Integer-valued metrics only ever touch the radicand `1`; the building
//! metric `√(a² + ab + b²)` adds genuine surds. Keeping distances in this
//! form makes Gromov products and Busemann cocycles exact, so identities
//! like the cocycle relation hold with zero residual.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_rational::Rational64;
use num_traits::{Signed, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ExactReal {
    terms: BTreeMap<u64, Rational64>,
}

/// Splits `n` into `(s, r)` with `n = s²·r` and `r` square-free.
fn square_free_split(mut n: u64) -> (u64, u64) {
    let mut outside = 1u64;
    let mut inside = 1u64;
    let mut p = 2u64;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        outside *= p.pow(e / 2);
        if e % 2 == 1 {
            inside *= p;
        }
        p += 1;
    }
    (outside, inside * n)
}

impl ExactReal {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(Rational64::from_integer(n))
    }

    pub fn from_rational(r: Rational64) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(1, r);
        }
        Self { terms }
    }

    /// `√n`, simplified to `s·√r` with `r` square-free.
    pub fn sqrt(n: u64) -> Self {
        if n == 0 {
            return Self::zero();
        }
        let (s, r) = square_free_split(n);
        let mut terms = BTreeMap::new();
        terms.insert(r, Rational64::from_integer(s as i64));
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value as an integer, if it is one.
    pub fn as_integer(&self) -> Option<i64> {
        match self.terms.len() {
            0 => Some(0),
            1 => {
                let (&r, c) = self.terms.iter().next()?;
                (r == 1 && c.is_integer()).then(|| c.to_integer())
            }
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(&r, c)| c.to_f64().unwrap_or(f64::NAN) * (r as f64).sqrt())
            .sum()
    }

    pub fn half(&self) -> Self {
        self.scale(Rational64::new(1, 2))
    }

    pub fn scale(&self, k: Rational64) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(&r, &c)| (r, c * k)).collect(),
        }
    }

    fn accumulate(&mut self, other: &Self, sign: i64) {
        for (&r, &c) in &other.terms {
            let entry = self.terms.entry(r).or_insert_with(Rational64::zero);
            *entry += c * sign;
            if entry.is_zero() {
                self.terms.remove(&r);
            }
        }
    }

    /// Sign test. Exact when the value is rational; otherwise decided in
    /// binary64, which is adequate for the short surd sums produced here.
    pub fn signum(&self) -> i32 {
        if let Some(c) = self.rational_value() {
            return if c.is_positive() {
                1
            } else if c.is_negative() {
                -1
            } else {
                0
            };
        }
        let v = self.to_f64();
        if v > 0.0 {
            1
        } else if v < 0.0 {
            -1
        } else {
            0
        }
    }

    fn rational_value(&self) -> Option<Rational64> {
        match self.terms.len() {
            0 => Some(Rational64::zero()),
            1 => self.terms.get(&1).copied(),
            _ => None,
        }
    }
}

impl PartialOrd for ExactReal {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some((self - other).signum().cmp(&0))
    }
}

impl Add for &ExactReal {
    type Output = ExactReal;
    fn add(self, rhs: &ExactReal) -> ExactReal {
        let mut out = self.clone();
        out.accumulate(rhs, 1);
        out
    }
}

impl Sub for &ExactReal {
    type Output = ExactReal;
    fn sub(self, rhs: &ExactReal) -> ExactReal {
        let mut out = self.clone();
        out.accumulate(rhs, -1);
        out
    }
}

impl Add for ExactReal {
    type Output = ExactReal;
    fn add(mut self, rhs: ExactReal) -> ExactReal {
        self.accumulate(&rhs, 1);
        self
    }
}

impl Sub for ExactReal {
    type Output = ExactReal;
    fn sub(mut self, rhs: ExactReal) -> ExactReal {
        self.accumulate(&rhs, -1);
        self
    }
}

impl AddAssign<&ExactReal> for ExactReal {
    fn add_assign(&mut self, rhs: &ExactReal) {
        self.accumulate(rhs, 1);
    }
}

impl SubAssign<&ExactReal> for ExactReal {
    fn sub_assign(&mut self, rhs: &ExactReal) {
        self.accumulate(rhs, -1);
    }
}

impl Neg for ExactReal {
    type Output = ExactReal;
    fn neg(self) -> ExactReal {
        self.scale(Rational64::from_integer(-1))
    }
}

impl Mul<i64> for &ExactReal {
    type Output = ExactReal;
    fn mul(self, k: i64) -> ExactReal {
        self.scale(Rational64::from_integer(k))
    }
}

impl From<i64> for ExactReal {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl fmt::Display for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (&r, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let c = c.abs();
            match (r, c.is_integer() && c.to_integer() == 1) {
                (1, _) => write!(f, "{c}")?,
                (_, true) => write!(f, "√{r}")?,
                _ => write!(f, "{c}·√{r}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_simplifies() {
        assert_eq!(ExactReal::sqrt(12), &ExactReal::sqrt(3) * 2);
        assert_eq!(ExactReal::sqrt(49).as_integer(), Some(7));
        assert_eq!(ExactReal::sqrt(0), ExactReal::zero());
    }

    #[test]
    fn telescoping_is_exact() {
        let a = ExactReal::sqrt(19);
        let b = ExactReal::sqrt(3);
        let c = ExactReal::from_integer(4);
        let lhs = (&a - &b) + (&b - &c);
        assert_eq!(lhs, &a - &c);
        assert!((lhs.to_f64() - (19f64.sqrt() - 4.0)).abs() < 1e-12);
    }

    #[test]
    fn ordering_and_half() {
        let x = ExactReal::from_integer(3).half();
        assert!(x > ExactReal::from_integer(1));
        assert!(x < ExactReal::sqrt(3));
        assert_eq!(x.to_string(), "3/2");
    }
}
