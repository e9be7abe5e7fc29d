//! The trace computed from explicit operator matrices on Maya diagrams, with
//! no use of the eigenvalue formula.

use std::collections::HashMap;

use num_traits::Zero;

use super::FockState;
use crate::correlator::CorrelatorRequest;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::series::numbers::sinh_kernel;
use crate::series::rational::{factorial, Rational};
use crate::series::QSeries;

/// All charge-zero states of energy `<= max_energy`, built by choosing equal
/// numbers of particles above zero and holes below zero. Sorted by energy.
pub fn charge_zero_basis(max_energy: usize) -> Vec<FockState> {
    let window = max_energy.max(1) as u32;
    let budget = 2 * max_energy as i64;
    // distinct positive odd numbers with sum <= budget, grouped by count
    let mut sets: Vec<Vec<i64>> = Vec::new();
    odd_sets(1, budget, &mut Vec::new(), &mut sets);
    let mut out = Vec::new();
    for a in &sets {
        for b in &sets {
            let sa: i64 = a.iter().sum();
            let sb: i64 = b.iter().sum();
            if a.len() != b.len() || sa + sb > budget {
                continue;
            }
            let occupied: Vec<i64> = a
                .iter()
                .copied()
                .chain((1..=window as i64).map(|i| 1 - 2 * i).filter(|x| !b.contains(&-x)))
                .collect();
            out.push(FockState::from_occupied(window, occupied));
        }
    }
    out.sort_by_key(|s| (s.energy(), s.clone()));
    out
}

fn odd_sets(next: i64, budget: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    out.push(cur.clone());
    let mut x = next;
    while x <= budget {
        cur.push(x);
        odd_sets(x + 2, budget - x, cur, out);
        cur.pop();
        x += 2;
    }
}

fn power_term(x2: i64, j: u32) -> Rational {
    let num = num_bigint::BigInt::from(x2).pow(j);
    let den = num_bigint::BigInt::from(2).pow(j) * factorial(j);
    Rational::new(num, den)
}

/// Matrix of `[λ^j] ℰ₀(λ) = ∑_x x^j/j! :ψ_x ψ*_x: + [λ^j] 1/(e^{λ/2} - e^{-λ/2})`
/// on the span of `states` (columns are inputs). Fails if the operator leaves
/// the span.
pub fn e0_matrix(states: &[FockState], j: u32) -> Result<Matrix> {
    let index: HashMap<&FockState, usize> = states.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let vac = sinh_kernel(j + 1).invert()?.coeff(j as i64 + 1);
    let mut m = vec![vec![Rational::zero(); states.len()]; states.len()];
    for (col, s) in states.iter().enumerate() {
        let w = s.window() as i64;
        for x2 in (-w..w).map(|i| 2 * i + 1) {
            let c = power_term(x2, j);
            if let Some((s1, t)) = s.annihilate(x2) {
                if let Some((s2, u)) = t.create(x2) {
                    let row = *index.get(&u).ok_or_else(|| Error::Invariant("state left the basis".into()))?;
                    m[row][col] += &c * Rational::from_integer((s1 * s2).into());
                }
            }
            if x2 < 0 {
                m[col][col] -= c;
            }
        }
        m[col][col] += &vac;
    }
    Ok(m)
}

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let mut out = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    out
}

/// `Tr q^{L₀} ∏_i [λ^{k_i+1}] ℰ₀(λ)` through `q^N` by explicit block matrices.
/// Unnormalized, so it must match the disconnected partition sum.
pub fn fock_matrix_oracle(energy_cutoff: usize, req: &CorrelatorRequest) -> Result<QSeries> {
    if energy_cutoff < req.q_order {
        return Err(Error::Precondition(format!(
            "energy cutoff {energy_cutoff} is below the requested order {}",
            req.q_order
        )));
    }
    let basis = charge_zero_basis(energy_cutoff);
    let mut out = QSeries::zero(req.q_order);
    for e in 0..=req.q_order {
        let block: Vec<FockState> = basis.iter().filter(|s| s.energy() == e as i64).cloned().collect();
        let n = block.len();
        let mut prod: Matrix =
            (0..n).map(|i| (0..n).map(|j| if i == j { Rational::from_integer(1.into()) } else { Rational::zero() }).collect()).collect();
        for &k in &req.insertions {
            prod = mat_mul(&prod, &e0_matrix(&block, k + 1)?);
        }
        let trace = (0..n).fold(Rational::zero(), |acc, i| acc + &prod[i][i]);
        out.set_coeff(e, trace);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalityReport {
    pub entries_checked: usize,
    pub off_diagonal_nonzero: usize,
    pub eigenvalue_mismatches: usize,
}

/// Checks that each `[λ^j] ℰ₀` (`0 <= j <= max_j`) is diagonal on the states of
/// energy `<= max_energy`, with diagonal entries the eigenvalue formula.
pub fn e0_diagonality(max_energy: usize, max_j: u32) -> Result<DiagonalityReport> {
    let basis = charge_zero_basis(max_energy);
    let mut report = DiagonalityReport { entries_checked: 0, off_diagonal_nonzero: 0, eigenvalue_mismatches: 0 };
    for j in 0..=max_j {
        let m = e0_matrix(&basis, j)?;
        for (r, row) in m.iter().enumerate() {
            for (c, x) in row.iter().enumerate() {
                report.entries_checked += 1;
                if r != c {
                    report.off_diagonal_nonzero += usize::from(!x.is_zero());
                } else if *x != super::e0_coefficient(&basis[r].to_partition()?, j as i64) {
                    report.eigenvalue_mismatches += 1;
                }
            }
        }
    }
    Ok(report)
}
