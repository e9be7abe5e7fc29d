//! Truncated power series in `q` with exact rational coefficients.
//!
//! A `QSeries` of order `N` stores the coefficients of `q^0 ..= q^N`. Binary
//! operations require both operands to carry the same order; use
//! [`QSeries::truncate`] to bring them together explicitly.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{self, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QSeries {
    coeffs: Vec<Rational>,
}

impl QSeries {
    pub fn zero(order: usize) -> Self {
        QSeries { coeffs: vec![Rational::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(0, Rational::one(), order)
    }

    /// `c * q^d`, or zero when `d > order`.
    pub fn monomial(d: usize, c: Rational, order: usize) -> Self {
        let mut s = Self::zero(order);
        if d <= order {
            s.coeffs[d] = c;
        }
        s
    }

    /// Builds a series of order `coeffs.len() - 1`. Panics on an empty vector.
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least the q^0 coefficient");
        QSeries { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| rational::int(c)).collect())
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, d: usize) -> &Rational {
        &self.coeffs[d]
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, d: usize, c: Rational) {
        self.coeffs[d] = c;
    }

    pub fn add_to_coeff(&mut self, d: usize, c: &Rational) {
        if d <= self.order() {
            self.coeffs[d] += c;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Re-truncates to a lower (or equal) order.
    pub fn truncate(&self, order: usize) -> Result<Self> {
        if order > self.order() {
            return Err(Error::OrderMismatch { left: self.order() as i64, right: order as i64 });
        }
        Ok(QSeries { coeffs: self.coeffs[..=order].to_vec() })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        QSeries { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(QSeries { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let n = self.order();
        let mut out = vec![Rational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        QSeries { coeffs: out }
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch { left: self.order() as i64, right: other.order() as i64 });
        }
        Ok(())
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn invert(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::NotAUnit);
        }
        let inv0 = c0.recip();
        let n = self.order();
        let mut out = vec![Rational::zero(); n + 1];
        out[0] = inv0.clone();
        for d in 1..=n {
            let mut acc = Rational::zero();
            for i in 1..=d {
                if !self.coeffs[i].is_zero() {
                    acc += &self.coeffs[i] * &out[d - i];
                }
            }
            out[d] = -acc * &inv0;
        }
        Ok(QSeries { coeffs: out })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.order());
        for _ in 0..e {
            acc = acc.mul_unchecked(self);
        }
        acc
    }

    /// `q d/dq`.
    pub fn q_derivative(&self) -> Self {
        QSeries {
            coeffs: self.coeffs.iter().enumerate().map(|(d, c)| c * rational::int(d as i64)).collect(),
        }
    }
}

/// `f^{-1}`; fails with [`Error::NotAUnit`] when `f(0) = 0`.
pub fn series_invert(f: &QSeries) -> Result<QSeries> {
    f.invert()
}

macro_rules! checked_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&QSeries> for &QSeries {
            type Output = QSeries;

            /// Panics if the truncation orders differ.
            fn $method(self, rhs: &QSeries) -> QSeries {
                match self.$checked(rhs) {
                    Ok(s) => s,
                    Err(e) => panic!("{e}"),
                }
            }
        }

        impl $trait<QSeries> for QSeries {
            type Output = QSeries;

            fn $method(self, rhs: QSeries) -> QSeries {
                (&self).$method(&rhs)
            }
        }
    };
}

checked_binop!(Add, add, checked_add);
checked_binop!(Mul, mul, checked_mul);

impl QSeries {
    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other)
    }
}

checked_binop!(Sub, sub, checked_sub);

impl Neg for &QSeries {
    type Output = QSeries;

    fn neg(self) -> QSeries {
        QSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for QSeries {
    type Output = QSeries;

    fn neg(self) -> QSeries {
        -&self
    }
}

impl AddAssign<&QSeries> for QSeries {
    fn add_assign(&mut self, rhs: &QSeries) {
        if let Err(e) = self.check_order(rhs) {
            panic!("{e}");
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl SubAssign<&QSeries> for QSeries {
    fn sub_assign(&mut self, rhs: &QSeries) {
        if let Err(e) = self.check_order(rhs) {
            panic!("{e}");
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match d {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})q")?,
                _ => write!(f, "({c})q^{d}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.order() + 1)
    }
}

#[derive(Serialize, Deserialize)]
struct QSeriesJson {
    order: usize,
    #[serde(with = "rational::serde_vec")]
    coeffs: Vec<Rational>,
}

impl Serialize for QSeries {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        QSeriesJson { order: self.order(), coeffs: self.coeffs.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = QSeriesJson::deserialize(d)?;
        if j.coeffs.len() != j.order + 1 {
            return Err(serde::de::Error::custom(format!(
                "order {} requires {} coefficients, got {}",
                j.order,
                j.order + 1,
                j.coeffs.len()
            )));
        }
        Ok(QSeries { coeffs: j.coeffs })
    }
}
