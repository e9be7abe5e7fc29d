//! The fermionic side: stationary invariants as partition sums of the
//! eigenvalues of the zero mode `ℰ₀(λ)` on the charge-zero Fock space.

mod oracle;
mod trace;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

pub use oracle::{charge_zero_basis, e0_matrix, e0_diagonality, fock_matrix_oracle, DiagonalityReport};
pub use trace::{
    connected_correlator, connected_correlator_with, default_lambda_order, disconnected_npoint,
    disconnected_npoint_with, e0_coefficient, e0_eigenvalue, one_point_generating_function,
};

/// Weakly decreasing sequence of positive integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return Err(domain("partition parts must be positive"));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(domain("partition parts must be weakly decreasing"));
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().map(|&p| p as usize).sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Every partition of size `<= max_size`, each exactly once: by size, then
/// lexicographically decreasing.
pub fn enumerate_partitions(max_size: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut parts = Vec::new();
    for n in 0..=max_size {
        fill(n as u32, n as u32, &mut parts, &mut out);
    }
    out
}

fn fill(rem: u32, max: u32, parts: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if rem == 0 {
        out.push(Partition(parts.clone()));
        return;
    }
    for p in (1..=max.min(rem)).rev() {
        parts.push(p);
        fill(rem - p, p, parts, out);
        parts.pop();
    }
}

/// A charge-zero basis state, stored as the set of occupied half-integers
/// inside the window `(-W, W)`; every half-integer below `-W` is occupied and
/// every one above `W` is empty. Half-integers are stored doubled (odd `i64`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FockState {
    window: u32,
    // strictly decreasing
    occupied: Vec<i64>,
}

impl FockState {
    /// The state `{μ_i - i + ½}`. Needs `ℓ(μ) <= W` and `μ_1 <= W`.
    pub fn from_partition(mu: &Partition, window: u32) -> Result<Self> {
        if mu.len() > window as usize || mu.parts().first().is_some_and(|&p| p > window) {
            return Err(domain(format!("partition {mu} does not fit in window {window}")));
        }
        let occupied = (1..=window as i64)
            .map(|i| {
                let part = mu.parts().get(i as usize - 1).copied().unwrap_or(0) as i64;
                2 * (part - i) + 1
            })
            .collect();
        Ok(FockState { window, occupied })
    }

    /// Builds a state from doubled half-integers in the window. Charge is not
    /// checked here.
    pub(crate) fn from_occupied(window: u32, mut occupied: Vec<i64>) -> Self {
        occupied.sort_unstable_by(|a, b| b.cmp(a));
        FockState { window, occupied }
    }

    pub fn window(&self) -> u32 {
        self.window
    }

    /// Occupied half-integers (doubled) in decreasing order.
    pub fn occupied(&self) -> &[i64] {
        &self.occupied
    }

    pub fn is_occupied(&self, x2: i64) -> bool {
        if x2 < -(2 * self.window as i64) {
            return true;
        }
        self.occupied.contains(&x2)
    }

    /// Particles above zero minus holes below zero.
    pub fn charge(&self) -> i64 {
        let w = self.window as i64;
        let particles = self.occupied.iter().filter(|&&x| x > 0).count() as i64;
        let filled_below = self.occupied.iter().filter(|&&x| x < 0).count() as i64;
        particles - (w - filled_below)
    }

    /// `L₀` eigenvalue: `∑_{x>0 occupied} x + ∑_{x<0 empty} |x|`.
    pub fn energy(&self) -> i64 {
        let w = self.window as i64;
        let particles: i64 = self.occupied.iter().filter(|&&x| x > 0).sum();
        let holes: i64 = (1..=w).map(|i| 1 - 2 * i).filter(|x| !self.occupied.contains(x)).map(|x| -x).sum();
        (particles + holes) / 2
    }

    /// Recovers `μ` from a charge-zero state: `μ_i = x_i + i - ½`.
    pub fn to_partition(&self) -> Result<Partition> {
        if self.charge() != 0 {
            return Err(domain("only charge-zero states correspond to partitions"));
        }
        let parts: Vec<u32> = self
            .occupied
            .iter()
            .enumerate()
            .map(|(i, &x2)| (x2 - 1) / 2 + i as i64 + 1)
            .take_while(|&p| p > 0)
            .map(|p| p as u32)
            .collect();
        Partition::new(parts)
    }

    /// `ψ_x` (creation of the mode `x`), with the wedge-reordering sign.
    pub fn create(&self, x2: i64) -> Option<(i64, FockState)> {
        self.check_in_window(x2);
        if self.occupied.contains(&x2) {
            return None;
        }
        let above = self.occupied.iter().filter(|&&y| y > x2).count();
        let mut occ = self.occupied.clone();
        occ.insert(above, x2);
        Some((sign_of(above), FockState { window: self.window, occupied: occ }))
    }

    /// `ψ*_x` (annihilation of the mode `x`).
    pub fn annihilate(&self, x2: i64) -> Option<(i64, FockState)> {
        self.check_in_window(x2);
        let pos = self.occupied.iter().position(|&y| y == x2)?;
        let mut occ = self.occupied.clone();
        occ.remove(pos);
        Some((sign_of(pos), FockState { window: self.window, occupied: occ }))
    }

    fn check_in_window(&self, x2: i64) {
        assert!(x2 % 2 != 0, "modes are half-integers");
        assert!(x2.abs() < 2 * self.window as i64, "mode {x2}/2 outside window {}", self.window);
    }
}

fn sign_of(n: usize) -> i64 {
    if n % 2 == 0 {
        1
    } else {
        -1
    }
}
