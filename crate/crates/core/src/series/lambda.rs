//! Truncated Laurent series in `λ` with exact rational coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::rational::{self, Rational};
use crate::error::{Error, Result};

/// `∑_{k = min_degree}^{order} c_k λ^k + O(λ^{order+1})`.
///
/// The leading stored coefficient is nonzero unless the series is zero, in
/// which case nothing is stored and `min_degree = order + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaSeries {
    min_degree: i64,
    order: i64,
    coeffs: Vec<Rational>,
}

impl LambdaSeries {
    pub fn zero(order: i64) -> Self {
        LambdaSeries { min_degree: order + 1, order, coeffs: Vec::new() }
    }

    pub fn one(order: i64) -> Self {
        Self::new(0, order, vec![Rational::one()])
    }

    /// Coefficients for degrees `min_degree, min_degree + 1, ...`; entries beyond
    /// `order` are dropped and missing ones are zero.
    pub fn new(min_degree: i64, order: i64, coeffs: Vec<Rational>) -> Self {
        let mut s = LambdaSeries { min_degree, order, coeffs };
        let keep = (order - min_degree + 1).max(0) as usize;
        s.coeffs.truncate(keep);
        s.normalize();
        s
    }

    pub fn from_fn(min_degree: i64, order: i64, f: impl Fn(i64) -> Rational) -> Self {
        Self::new(min_degree, order, (min_degree..=order).map(f).collect())
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            Some(i) => {
                self.coeffs.drain(..i);
                self.min_degree += i as i64;
            }
            None => {
                self.coeffs.clear();
                self.min_degree = self.order + 1;
            }
        }
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    /// Degree of the leading nonzero term; `order + 1` for the zero series.
    pub fn min_degree(&self) -> i64 {
        self.min_degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `λ^k`. Panics if `k` lies beyond the truncation order.
    pub fn coeff(&self, k: i64) -> Rational {
        assert!(k <= self.order, "coefficient of λ^{k} is unknown at order {}", self.order);
        if k < self.min_degree {
            return Rational::zero();
        }
        self.coeffs.get((k - self.min_degree) as usize).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn truncate(&self, order: i64) -> Result<Self> {
        if order > self.order {
            return Err(Error::OrderMismatch { left: self.order, right: order });
        }
        Ok(Self::new(self.min_degree, order, self.coeffs.clone()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.min_degree, self.order, self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Multiplication by `λ^k`.
    pub fn shift(&self, k: i64) -> Self {
        LambdaSeries { min_degree: self.min_degree + k, order: self.order + k, coeffs: self.coeffs.clone() }
    }

    fn combine(&self, other: &Self, sign: &Rational) -> Self {
        let order = self.order.min(other.order);
        let lo = self.min_degree.min(other.min_degree);
        Self::from_fn(lo.min(order + 1), order, |k| self.coeff(k) + other.coeff(k) * sign)
    }

    fn product(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            let order = (self.order + other.min_degree).min(other.order + self.min_degree);
            return Self::zero(order);
        }
        let order = (self.order + other.min_degree).min(other.order + self.min_degree);
        let lo = self.min_degree + other.min_degree;
        let len = (order - lo + 1).max(0) as usize;
        let mut out = vec![Rational::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j < len {
                    out[i + j] += a * b;
                }
            }
        }
        Self::new(lo, order, out)
    }

    /// Multiplicative inverse of a nonzero series.
    pub fn invert(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::NotAUnit);
        }
        let v = self.min_degree;
        let rel = (self.order - v) as usize;
        let inv0 = self.coeffs[0].recip();
        let mut out = vec![Rational::zero(); rel + 1];
        out[0] = inv0.clone();
        for d in 1..=rel {
            let mut acc = Rational::zero();
            for i in 1..=d.min(self.coeffs.len() - 1) {
                acc += &self.coeffs[i] * &out[d - i];
            }
            out[d] = -acc * &inv0;
        }
        Ok(Self::new(-v, self.order - 2 * v, out))
    }

    /// Formal derivative in `λ`.
    pub fn derivative(&self) -> Self {
        Self::from_fn(self.min_degree - 1, self.order - 1, |k| self.coeff(k + 1) * rational::int(k + 1))
    }

    /// Natural logarithm of a series of the form `1 + O(λ)`.
    pub fn ln(&self) -> Result<Self> {
        if self.min_degree != 0 || !self.coeffs[0].is_one() {
            return Err(Error::Domain("logarithm needs constant term 1".into()));
        }
        let ratio = self.derivative().product(&self.invert()?);
        // integrate: the constant of integration is 0
        Ok(Self::from_fn(1, ratio.order + 1, |k| ratio.coeff(k - 1) / rational::int(k)))
    }

    /// Exponential of a series with no terms of degree `<= 0`.
    pub fn exp(&self) -> Result<Self> {
        if self.min_degree <= 0 && !self.is_zero() {
            return Err(Error::Domain("exponential needs a series vanishing at λ = 0".into()));
        }
        let order = self.order.max(0);
        let mut acc = Self::one(order);
        let mut term = Self::one(order);
        for n in 1..=order {
            term = term.product(self).scale(&rational::frac(1, n)).truncate(order)?;
            acc = acc.combine(&term, &Rational::one());
        }
        Ok(acc)
    }
}

impl Add for &LambdaSeries {
    type Output = LambdaSeries;

    fn add(self, rhs: &LambdaSeries) -> LambdaSeries {
        self.combine(rhs, &Rational::one())
    }
}

impl Sub for &LambdaSeries {
    type Output = LambdaSeries;

    fn sub(self, rhs: &LambdaSeries) -> LambdaSeries {
        self.combine(rhs, &-Rational::one())
    }
}

impl Mul for &LambdaSeries {
    type Output = LambdaSeries;

    fn mul(self, rhs: &LambdaSeries) -> LambdaSeries {
        self.product(rhs)
    }
}

impl Neg for &LambdaSeries {
    type Output = LambdaSeries;

    fn neg(self) -> LambdaSeries {
        self.scale(&-Rational::one())
    }
}

impl fmt::Display for LambdaSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})λ^{}", self.min_degree + i as i64)?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(λ^{})", self.order + 1)
    }
}
