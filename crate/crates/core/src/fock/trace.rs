//! Partition sums of zero-mode eigenvalues.

use num_traits::{One, Zero};
use rayon::prelude::*;

use super::{enumerate_partitions, Partition};
use crate::correlator::{cumulant, expected_genus, CorrelatorRequest, InvariantRecord, Pipeline};
use crate::error::{Error, Result};
use crate::series::numbers::{euler_product, sinh_kernel};
use crate::series::rational::{factorial, Rational};
use crate::series::{BiSeries, LambdaSeries, QSeries};

/// Coefficients `v_{-1}, v_0, …, v_order` of `1/(e^{λ/2} - e^{-λ/2})`.
fn vacuum_coeffs(order: i64) -> Vec<Rational> {
    let inv = sinh_kernel((order + 1).max(0) as u32).invert().expect("sinh kernel is a unit");
    (0..=order + 1).map(|k| inv.coeff(k)).collect()
}

fn power_term(x2: i64, j: u32) -> Rational {
    // (x2/2)^j / j!
    let num = num_bigint::BigInt::from(x2).pow(j);
    let den = num_bigint::BigInt::from(2).pow(j) * factorial(j);
    Rational::new(num, den)
}

fn eigen_sum(mu: &Partition, j: u32) -> Rational {
    let mut total = Rational::zero();
    for (i, &p) in mu.parts().iter().enumerate() {
        let i = i as i64 + 1;
        total += power_term(2 * (p as i64 - i) + 1, j) - power_term(1 - 2 * i, j);
    }
    total
}

/// `[λ^j] ε(μ, λ)`, where
/// `ε(μ, λ) = ∑_i (e^{λ(μ_i - i + ½)} - e^{λ(-i + ½)}) + 1/(e^{λ/2} - e^{-λ/2})`.
pub fn e0_coefficient(mu: &Partition, j: i64) -> Rational {
    if j < -1 {
        return Rational::zero();
    }
    let vac = vacuum_coeffs(j)[(j + 1) as usize].clone();
    if j == -1 {
        return vac;
    }
    eigen_sum(mu, j as u32) + vac
}

/// The eigenvalue `ε(μ, λ)` of `ℰ₀(λ)` on `v_μ`, through `λ^order`.
pub fn e0_eigenvalue(mu: &Partition, order: i64) -> LambdaSeries {
    let vac = vacuum_coeffs(order);
    LambdaSeries::from_fn(-1, order, |j| {
        let v = vac[(j + 1) as usize].clone();
        if j < 0 {
            v
        } else {
            eigen_sum(mu, j as u32) + v
        }
    })
}

/// λ-order used when none is given: `max k_i + 2(n - 1) + 2`.
pub fn default_lambda_order(insertions: &[u32]) -> i64 {
    let max = insertions.iter().copied().max().unwrap_or(0) as i64;
    let n = insertions.len().max(1) as i64;
    max + 2 * (n - 1) + 2
}

/// Unnormalized `∑_{|μ| <= N} q^{|μ|} ∏_i [λ^{k_i+1}] ε(μ, λ)`. With no
/// insertions this is the partition generating function.
pub fn disconnected_npoint(req: &CorrelatorRequest) -> Result<QSeries> {
    disconnected_npoint_with(req, None)
}

pub fn disconnected_npoint_with(req: &CorrelatorRequest, lambda_order: Option<i64>) -> Result<QSeries> {
    let all = subset_moments(&req.insertions, req.q_order, lambda_order)?;
    Ok(all.into_iter().last().expect("at least the empty subset"))
}

/// Unnormalized disconnected sums for every subset of the insertions, indexed
/// by bit mask (mask 0 is the vacuum sum).
fn subset_moments(ks: &[u32], order: usize, lambda_order: Option<i64>) -> Result<Vec<QSeries>> {
    let n = ks.len();
    if n > 16 {
        return Err(Error::Precondition(format!("{n} insertions is too many")));
    }
    let m = lambda_order.unwrap_or_else(|| default_lambda_order(ks));
    if let Some(&k) = ks.iter().find(|&&k| k as i64 + 1 > m) {
        return Err(Error::Precondition(format!("λ-order {m} does not reach λ^{} for τ_{k}", k + 1)));
    }
    let partitions = enumerate_partitions(order);
    let subsets = 1usize << n;
    let zero = || vec![vec![Rational::zero(); order + 1]; subsets];
    let sums = partitions
        .par_iter()
        .fold(zero, |mut acc, mu| {
            let eig = e0_eigenvalue(mu, m);
            let values: Vec<Rational> = ks.iter().map(|&k| eig.coeff(k as i64 + 1)).collect();
            let mut prods = vec![Rational::one(); subsets];
            for mask in 1..subsets {
                let low = mask.trailing_zeros() as usize;
                prods[mask] = &prods[mask & (mask - 1)] * &values[low];
            }
            let d = mu.size();
            for (slot, p) in acc.iter_mut().zip(prods) {
                slot[d] += p;
            }
            acc
        })
        .reduce(zero, |mut a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                for (u, v) in x.iter_mut().zip(y) {
                    *u += v;
                }
            }
            a
        });
    Ok(sums.into_iter().map(QSeries::from_coeffs).collect())
}

/// Connected invariant `⟨τ_{k_1} ⋯ τ_{k_n}⟩^•` through `q^N` from the trace.
/// The genus is `None` when `∑ k_i` is odd; the series is still computed.
pub fn connected_correlator(req: &CorrelatorRequest) -> Result<InvariantRecord> {
    connected_correlator_with(req, None)
}

pub fn connected_correlator_with(req: &CorrelatorRequest, lambda_order: Option<i64>) -> Result<InvariantRecord> {
    req.validate()?;
    let n = req.insertions.len();
    let moments = subset_moments(&req.insertions, req.q_order, lambda_order)?;
    let inv_z = euler_product(req.q_order);
    let normalized = moments.iter().map(|d| d.checked_mul(&inv_z)).collect::<Result<Vec<_>>>()?;
    let series = cumulant(n, &normalized)?;
    Ok(InvariantRecord::new(&req.insertions, expected_genus(&req.insertions), Pipeline::Fock, series))
}

/// `F(λ; q) = ∑_μ q^{|μ|} ε(μ, λ)/λ`, through `λ^lambda_order` and `q^q_order`.
/// Its `λ^k` coefficient is the unnormalized one-point sum of `τ_k`.
pub fn one_point_generating_function(q_order: usize, lambda_order: i64) -> Result<BiSeries> {
    let mut out = BiSeries::zero(-2, lambda_order, q_order);
    for mu in enumerate_partitions(q_order) {
        let eig = e0_eigenvalue(&mu, lambda_order + 1).shift(-1);
        out.add_term(mu.size(), &eig)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rational::{frac, int};
    use crate::series::vacuum_partition_function;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn vacuum_eigenvalue() {
        let e = e0_eigenvalue(&Partition::empty(), 5);
        assert_eq!(e.coeff(-1), int(1));
        assert_eq!(e.coeff(0), int(0));
        assert_eq!(e.coeff(1), frac(-1, 24));
        assert_eq!(e.coeff(3), frac(7, 5760));
        assert_eq!(e.coeff(2), int(0));
    }

    #[test]
    fn eigenvalue_examples() {
        let e = e0_eigenvalue(&p(&[1]), 2);
        assert_eq!(e.coeff(-1), int(1));
        assert_eq!(e.coeff(0), int(0));
        assert_eq!(e.coeff(1), frac(23, 24));
        assert_eq!(e.coeff(2), int(0));
        for mu in enumerate_partitions(6) {
            assert_eq!(e0_eigenvalue(&mu, 3).coeff(-1), int(1));
        }
    }

    #[test]
    fn first_moments_are_size_and_content() {
        for mu in enumerate_partitions(7) {
            // [λ^1]: |μ| - 1/24; [λ^2]: sum of contents
            assert_eq!(e0_coefficient(&mu, 1), int(mu.size() as i64) - frac(1, 24));
            let content: i64 = mu
                .parts()
                .iter()
                .enumerate()
                .flat_map(|(i, &r)| (0..r as i64).map(move |j| j - i as i64))
                .sum();
            assert_eq!(e0_coefficient(&mu, 2), int(content));
            assert_eq!(e0_coefficient(&mu, 0), int(0));
        }
        assert_eq!(e0_coefficient(&p(&[2, 1]), 3), e0_eigenvalue(&p(&[2, 1]), 4).coeff(3));
    }

    #[test]
    fn empty_request_is_the_partition_function() {
        let z = disconnected_npoint(&CorrelatorRequest::new(vec![], 12)).unwrap();
        assert_eq!(z, vacuum_partition_function(12));
    }

    #[test]
    fn one_point_values() {
        let rec = connected_correlator(&CorrelatorRequest::new(vec![0], 5)).unwrap();
        let expect = QSeries::from_coeffs(vec![frac(-1, 24), int(1), int(3), int(4), int(7), int(6)]);
        assert_eq!(rec.series, expect);
        assert_eq!(rec.genus, Some(1));
        let two = connected_correlator(&CorrelatorRequest::new(vec![2], 5)).unwrap();
        let expect2 =
            QSeries::from_coeffs(vec![frac(7, 5760), frac(1, 24), frac(9, 8), frac(31, 6), frac(343, 24), frac(117, 4)]);
        assert_eq!(two.series, expect2);
    }

    #[test]
    fn odd_total_vanishes() {
        for ks in [vec![1], vec![3], vec![1, 0], vec![2, 1, 0]] {
            let rec = connected_correlator(&CorrelatorRequest::new(ks, 6)).unwrap();
            assert!(rec.series.is_zero());
            assert_eq!(rec.genus, None);
        }
    }

    #[test]
    fn odd_one_point_sums_vanish() {
        for k in [1, 3, 5] {
            assert!(disconnected_npoint(&CorrelatorRequest::new(vec![k], 6)).unwrap().is_zero(), "k = {k}");
        }
    }

    #[test]
    fn two_point_cumulant_consistency() {
        let n = 8;
        let z = vacuum_partition_function(n);
        for (a, b) in [(0, 0), (2, 0), (1, 1), (3, 1)] {
            let d12 = disconnected_npoint(&CorrelatorRequest::new(vec![a, b], n)).unwrap();
            let c12 = connected_correlator(&CorrelatorRequest::new(vec![a, b], n)).unwrap().series;
            let c1 = connected_correlator(&CorrelatorRequest::new(vec![a], n)).unwrap().series;
            let c2 = connected_correlator(&CorrelatorRequest::new(vec![b], n)).unwrap().series;
            assert_eq!(d12, &(&c12 + &(&c1 * &c2)) * &z, "({a},{b})");
        }
    }

    #[test]
    fn lambda_order_override() {
        let req = CorrelatorRequest::new(vec![3, 1], 5);
        let a = connected_correlator(&req).unwrap();
        let b = connected_correlator_with(&req, Some(12)).unwrap();
        assert_eq!(a.series, b.series);
        assert!(connected_correlator_with(&req, Some(3)).is_err());
    }

    #[test]
    fn generating_function_coefficients() {
        let f = one_point_generating_function(6, 5).unwrap();
        for k in 0..=5u32 {
            let d = disconnected_npoint(&CorrelatorRequest::new(vec![k], 6)).unwrap();
            assert_eq!(f.lambda_coeff(k as i64), d, "k = {k}");
        }
        assert_eq!(f.lambda_coeff(-2), vacuum_partition_function(6));
    }
}
