//! The `q`-expanded propagator between two vertices, the self-loop kernel,
//! and the identities that pin both down.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{domain, Error, Result};
use crate::series::numbers::{bernoulli, divisor_sigma, sinh_kernel};
use crate::series::rational::{self, Rational};
use crate::series::{LambdaSeries, QSeries};

/// `[x^s]` of `(z_i∂_{z_i})^a (z_j∂_{z_j})^b P`, `x = z_j/z_i`, `i < j`:
/// `(-1)^a s^{a+b} · s/(1 - q^s)` for `s > 0` and
/// `(-1)^a s^{a+b} · |s| q^{|s|}/(1 - q^{|s|})` for `s < 0`.
pub fn kernel_coeff(a: u32, b: u32, s: i64, order: usize) -> Result<QSeries> {
    if s == 0 {
        return Err(domain("the propagator has no x^0 term"));
    }
    let r = s.unsigned_abs() as usize;
    let weight = rational::sign(a) * Rational::from_integer(BigInt::from(s).pow(a + b) * BigInt::from(r));
    let mut out = QSeries::zero(order);
    let start = if s > 0 { 0 } else { r };
    for d in (start..=order).step_by(r) {
        out.set_coeff(d, weight.clone());
    }
    Ok(out)
}

/// The kernel on a loop at one vertex:
/// `(-1)^{b+1} B_{a+b+2}/(a+b+2) + ∑_r r^{a+b+1}((-1)^a + (-1)^b) q^r/(1 - q^r)`.
pub fn self_kernel(a: u32, b: u32, order: usize) -> Result<QSeries> {
    let s = a + b;
    if s % 2 == 1 {
        return Ok(QSeries::zero(order));
    }
    let mut out = QSeries::zero(order);
    out.set_coeff(0, self_constant(a, b)?);
    let twice = rational::sign(a) * rational::int(2);
    for n in 1..=order {
        out.set_coeff(n, divisor_sigma(s + 1, n as u64)? * &twice);
    }
    Ok(out)
}

/// Constant term of [`self_kernel`]; zero for odd `a + b`.
pub fn self_constant(a: u32, b: u32) -> Result<Rational> {
    let s = a + b;
    if s % 2 == 1 {
        return Ok(Rational::zero());
    }
    Ok(-rational::sign(b) * bernoulli(s + 2)? / rational::int(s as i64 + 2))
}

/// Kernel values for decorations `<= max_decoration` and flows
/// `1 <= |s| <= flow_bound`, through `q^order`.
#[derive(Clone, Debug)]
pub struct KernelTable {
    order: usize,
    max_decoration: u32,
    flow_bound: usize,
    pair: HashMap<(u32, u32, i64), QSeries>,
    selfs: HashMap<(u32, u32), QSeries>,
}

impl KernelTable {
    pub fn new(order: usize, max_decoration: u32, flow_bound: usize) -> Result<Self> {
        let mut pair = HashMap::new();
        let mut selfs = HashMap::new();
        let b = flow_bound as i64;
        for a in 0..=max_decoration {
            for c in 0..=max_decoration {
                for s in (-b..=b).filter(|&s| s != 0) {
                    pair.insert((a, c, s), kernel_coeff(a, c, s, order)?);
                }
                selfs.insert((a, c), self_kernel(a, c, order)?);
            }
        }
        Ok(KernelTable { order, max_decoration, flow_bound, pair, selfs })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn max_decoration(&self) -> u32 {
        self.max_decoration
    }

    pub fn flow_bound(&self) -> usize {
        self.flow_bound
    }

    pub fn pair(&self, a: u32, b: u32, s: i64) -> Option<&QSeries> {
        self.pair.get(&(a, b, s))
    }

    pub fn self_value(&self, a: u32, b: u32) -> Option<&QSeries> {
        self.selfs.get(&(a, b))
    }
}

/// `log(1/𝒮(λ)) - (λ²/2) ∑_{a,b} s_a s_b λ^{a+b} C(a, b)` through `λ^order`,
/// with `s_a` the Taylor coefficients of `𝒮(λ) = sinh(λ/2)/(λ/2)` and
/// `C(a, b)` the self-loop constants. Identically zero when the constants are
/// right.
pub fn self_loop_identity_check(order: u32) -> Result<LambdaSeries> {
    if order < 2 || order % 2 == 1 {
        return Err(domain(format!("λ-order must be even and >= 2, got {order}")));
    }
    let s = sinh_kernel(order);
    let lhs = -&s.ln()?;
    let m = order as i64;
    let mut rhs = vec![Rational::zero(); order as usize + 1];
    for a in 0..=order - 2 {
        for b in 0..=order - 2 - a {
            let c = s.coeff(a as i64) * s.coeff(b as i64) * self_constant(a, b)? / rational::int(2);
            rhs[(a + b + 2) as usize] += c;
        }
    }
    let rhs = LambdaSeries::new(0, m, rhs);
    Ok(&lhs - &rhs)
}

/// Flow values `r` with `|r| <= max_flow` at which the bilateral lattice sum
/// `∑_n x qⁿ/(1 - x qⁿ)²` and the three-term form
/// `x/(1-x)² + ∑_m m xᵐ qᵐ/(1-qᵐ) + ∑_m m x⁻ᵐ qᵐ/(1-qᵐ)` disagree through
/// `q^order`. Each side is expanded termwise in `|q| < |x| < 1`.
pub fn propagator_mismatches(order: usize, max_flow: usize) -> Result<Vec<i64>> {
    if max_flow > order {
        return Err(Error::Precondition(format!("max flow {max_flow} exceeds q-order {order}")));
    }
    let r_max = max_flow as i64;
    let n_max = order as i64;
    let mut bilateral: BTreeMap<i64, QSeries> = (-r_max..=r_max).map(|r| (r, QSeries::zero(order))).collect();
    // n >= 0: y/(1-y)² = ∑ m yᵐ with y = x qⁿ
    for n in 0..=n_max {
        for m in 1..=r_max {
            if n * m <= n_max {
                bilateral.get_mut(&m).unwrap().add_to_coeff((n * m) as usize, &rational::int(m));
            }
        }
    }
    // n < 0: |y| > 1, so y/(1-y)² = ∑ m y⁻ᵐ = ∑ m x⁻ᵐ q^{|n|m}
    for n in 1..=n_max {
        for m in 1..=r_max {
            if n * m <= n_max {
                bilateral.get_mut(&-m).unwrap().add_to_coeff((n * m) as usize, &rational::int(m));
            }
        }
    }
    let mut three: BTreeMap<i64, QSeries> = (-r_max..=r_max).map(|r| (r, QSeries::zero(order))).collect();
    for m in 1..=r_max {
        // x/(1-x)² = ∑ m xᵐ
        three.get_mut(&m).unwrap().add_to_coeff(0, &rational::int(m));
        // m qᵐ/(1-qᵐ) on both x^{±m}
        for t in (m..=n_max).step_by(m as usize) {
            three.get_mut(&m).unwrap().add_to_coeff(t as usize, &rational::int(m));
            three.get_mut(&-m).unwrap().add_to_coeff(t as usize, &rational::int(m));
        }
    }
    Ok(bilateral.keys().copied().filter(|r| bilateral[r] != three[r]).collect())
}

pub fn propagator_identity_check(order: usize, max_flow: usize) -> Result<bool> {
    Ok(propagator_mismatches(order, max_flow)?.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::eisenstein;
    use crate::series::rational::{frac, int};

    /// `[x^s]` of the bilateral lattice sum alone, for the symmetry test.
    fn lattice_q_part(s: i64, order: usize) -> QSeries {
        let r = s.unsigned_abs() as usize;
        let mut out = QSeries::zero(order);
        if r == 0 {
            return out;
        }
        for d in (r..=order).step_by(r) {
            out.set_coeff(d, Rational::from_integer(BigInt::from(r)));
        }
        out
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_coeff(0, 0, 2, 4).unwrap(), QSeries::from_ints(&[2, 0, 2, 0, 2]));
        assert_eq!(kernel_coeff(0, 0, -1, 3).unwrap(), QSeries::from_ints(&[0, 1, 1, 1]));
        assert_eq!(kernel_coeff(1, 0, 1, 0).unwrap(), QSeries::from_ints(&[-1]));
        assert!(kernel_coeff(0, 0, 0, 3).is_err());
        // (z_i∂)(z_j∂) on x^{-2}: (+2)(-2) = -4
        assert_eq!(kernel_coeff(1, 1, -2, 4).unwrap(), QSeries::from_ints(&[0, 0, -8, 0, -8]));
    }

    #[test]
    fn self_kernel_is_eisenstein() {
        let n = 12;
        assert_eq!(self_kernel(0, 0, n).unwrap(), eisenstein(2, n).unwrap().scale(&frac(-1, 12)));
        assert_eq!(self_kernel(1, 1, n).unwrap(), eisenstein(4, n).unwrap().scale(&frac(-1, 120)));
        assert!(self_kernel(1, 0, n).unwrap().is_zero());
        assert_eq!(self_constant(0, 2).unwrap(), frac(1, 120));
    }

    #[test]
    fn self_constants_are_zeta_values() {
        // ζ(-1), ζ(-3), ζ(-5), ζ(-7): the regularized ∑ n^{2k-1}
        let zeta = [frac(-1, 12), frac(1, 120), frac(-1, 252), frac(1, 240)];
        for (i, z) in zeta.iter().enumerate() {
            let s = 2 * i as u32;
            for a in 0..=s {
                let b = s - a;
                assert_eq!(self_constant(a, b).unwrap(), z * rational::sign(b), "({a},{b})");
            }
        }
    }

    #[test]
    fn self_kernel_antisymmetric_shift() {
        // moving a derivative across the loop flips sign
        for a in 0..6 {
            for b in 0..6 {
                let lhs = self_kernel(a + 1, b, 8).unwrap();
                let rhs = self_kernel(a, b + 1, 8).unwrap();
                assert!((&lhs + &rhs).is_zero(), "({a},{b})");
            }
        }
    }

    #[test]
    fn self_loop_identity() {
        for m in [2, 4, 10, 20] {
            assert!(self_loop_identity_check(m).unwrap().is_zero(), "M = {m}");
        }
        assert!(self_loop_identity_check(3).is_err());
        let s = sinh_kernel(12);
        assert_eq!(&s * &s.invert().unwrap(), LambdaSeries::one(12));
    }

    #[test]
    fn propagator_identity() {
        assert!(propagator_identity_check(10, 10).unwrap());
        assert!(propagator_identity_check(4, 5).is_err());
        // q⁰ part is x/(1-x)²
        for r in 1..=6 {
            assert_eq!(kernel_coeff(0, 0, r, 6).unwrap().coeff(0), &int(r));
        }
    }

    #[test]
    fn lattice_part_is_symmetric() {
        for r in 1..=8 {
            assert_eq!(lattice_q_part(r, 10), lattice_q_part(-r, 10));
            let pos = &kernel_coeff(0, 0, r, 10).unwrap() - &QSeries::monomial(0, int(r), 10);
            assert_eq!(pos, kernel_coeff(0, 0, -r, 10).unwrap());
        }
    }

    #[test]
    fn table_lookup() {
        let t = KernelTable::new(5, 2, 5).unwrap();
        assert_eq!(t.pair(1, 2, -3), Some(&kernel_coeff(1, 2, -3, 5).unwrap()));
        assert!(t.pair(0, 0, 6).is_none());
        assert_eq!(t.self_value(2, 2), Some(&self_kernel(2, 2, 5).unwrap()));
    }
}
