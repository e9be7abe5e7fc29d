//! Series in `λ` whose coefficients are `q`-series: the shape of the one-point
//! generating function `F(λ; q)`.

use super::lambda::LambdaSeries;
use super::qseries::QSeries;
use super::rational::Rational;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiSeries {
    min_degree: i64,
    lambda_order: i64,
    q_order: usize,
    coeffs: Vec<QSeries>,
}

impl BiSeries {
    pub fn zero(min_degree: i64, lambda_order: i64, q_order: usize) -> Self {
        let len = (lambda_order - min_degree + 1).max(0) as usize;
        BiSeries { min_degree, lambda_order, q_order, coeffs: vec![QSeries::zero(q_order); len] }
    }

    pub fn min_degree(&self) -> i64 {
        self.min_degree
    }

    pub fn lambda_order(&self) -> i64 {
        self.lambda_order
    }

    pub fn q_order(&self) -> usize {
        self.q_order
    }

    /// Adds `q^d · f(λ)`. The λ-series must be known through `lambda_order` and
    /// have no terms below `min_degree`.
    pub fn add_term(&mut self, d: usize, f: &LambdaSeries) -> Result<()> {
        if f.order() < self.lambda_order {
            return Err(Error::OrderMismatch { left: f.order(), right: self.lambda_order });
        }
        if !f.is_zero() && f.min_degree() < self.min_degree {
            return Err(Error::Invariant(format!(
                "term of degree {} below the series floor {}",
                f.min_degree(),
                self.min_degree
            )));
        }
        if d > self.q_order {
            return Ok(());
        }
        for (i, slot) in self.coeffs.iter_mut().enumerate() {
            let c: Rational = f.coeff(self.min_degree + i as i64);
            slot.add_to_coeff(d, &c);
        }
        Ok(())
    }

    /// The `q`-series multiplying `λ^k`.
    pub fn lambda_coeff(&self, k: i64) -> QSeries {
        assert!(k <= self.lambda_order, "λ^{k} beyond order {}", self.lambda_order);
        if k < self.min_degree {
            return QSeries::zero(self.q_order);
        }
        self.coeffs[(k - self.min_degree) as usize].clone()
    }

    /// Multiplies every λ-coefficient by the same `q`-series.
    pub fn mul_q(&self, f: &QSeries) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(|c| c.checked_mul(f)).collect::<Result<_>>()?;
        Ok(BiSeries { coeffs, ..self.clone() })
    }
}
