//! Number-theoretic generators: divisor sums, Bernoulli numbers, Eisenstein
//! series, the `sinh` kernel and the partition generating function.

use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};

use super::lambda::LambdaSeries;
use super::qseries::QSeries;
use super::rational::{self, binomial, factorial, Rational};
use crate::error::{domain, Result};

/// `σ_k(n) = ∑_{d | n} d^k`.
pub fn divisor_sigma(k: u32, n: u64) -> Result<Rational> {
    if n == 0 {
        return Err(domain("divisor_sigma needs n >= 1"));
    }
    let mut total = BigInt::zero();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            total += BigInt::from(d).pow(k);
            let e = n / d;
            if e != d {
                total += BigInt::from(e).pow(k);
            }
        }
        d += 1;
    }
    Ok(Rational::from_integer(total))
}

fn bernoulli_table() -> &'static Mutex<Vec<Rational>> {
    static TABLE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(vec![Rational::one()]))
}

/// Bernoulli number `B_n` for even `n` (so `B_2 = 1/6`), memoized.
pub fn bernoulli(n: u32) -> Result<Rational> {
    if n % 2 == 1 {
        return Err(domain(format!("bernoulli takes an even index, got {n}")));
    }
    let mut table = bernoulli_table().lock().unwrap_or_else(|e| e.into_inner());
    // B_m from ∑_{j<=m} C(m+1, j) B_j = 0, for every m (odd ones included).
    while table.len() <= n as usize {
        let m = table.len() as u32;
        let mut acc = Rational::zero();
        for (j, b) in table.iter().enumerate() {
            acc += b * Rational::from_integer(binomial(m + 1, j as u32));
        }
        table.push(-acc / rational::int(m as i64 + 1));
    }
    Ok(table[n as usize].clone())
}

/// `E_2`, `E_4`, `E_6` through `q^order`.
pub fn eisenstein(weight: u32, order: usize) -> Result<QSeries> {
    let (scale, power) = match weight {
        2 => (-24, 1),
        4 => (240, 3),
        6 => (-504, 5),
        _ => return Err(domain(format!("eisenstein weight must be 2, 4 or 6, got {weight}"))),
    };
    let mut s = QSeries::one(order);
    for n in 1..=order {
        s.set_coeff(n, divisor_sigma(power, n as u64)? * rational::int(scale));
    }
    Ok(s)
}

/// Taylor series of `sinh(λ/2)/(λ/2)` through `λ^order`.
pub fn sinh_kernel(order: u32) -> LambdaSeries {
    LambdaSeries::from_fn(0, order as i64, |k| {
        if k % 2 == 1 {
            return Rational::zero();
        }
        let k = k as u32;
        Rational::new(BigInt::one(), BigInt::from(2).pow(k) * factorial(k + 1))
    })
}

/// `∏_{i=1}^{order} (1 - q^i)`.
pub fn euler_product(order: usize) -> QSeries {
    let one = QSeries::one(order);
    (1..=order).fold(one.clone(), |acc, i| &acc * &(&one - &QSeries::monomial(i, Rational::one(), order)))
}

/// `1/∏(1 - q^i)`: the partition generating function, built by admitting one
/// part size at a time.
pub fn vacuum_partition_function(order: usize) -> QSeries {
    let mut counts = vec![BigInt::zero(); order + 1];
    counts[0] = BigInt::one();
    for part in 1..=order {
        for n in part..=order {
            let add = counts[n - part].clone();
            counts[n] += add;
        }
    }
    QSeries::from_coeffs(counts.into_iter().map(Rational::from_integer).collect())
}
