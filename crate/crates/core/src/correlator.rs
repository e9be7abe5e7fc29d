//! Correlator requests, the invariant record both pipelines emit, and the
//! disconnected/connected dictionary.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modular::QuasiModularRep;
use crate::series::{rational, QSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pipeline {
    Fock,
    Graph,
}

impl fmt::Display for Pipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pipeline::Fock => "fock",
            Pipeline::Graph => "graph",
        })
    }
}

/// Insertions `τ_{k_1} ⋯ τ_{k_n}` of the point class, requested through `q^N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrelatorRequest {
    pub insertions: Vec<u32>,
    pub q_order: usize,
}

impl CorrelatorRequest {
    pub fn new(insertions: impl Into<Vec<u32>>, q_order: usize) -> Self {
        CorrelatorRequest { insertions: insertions.into(), q_order }
    }

    pub fn validate(&self) -> Result<()> {
        if self.insertions.is_empty() {
            return Err(Error::Precondition("at least one insertion is required".into()));
        }
        Ok(())
    }

    /// Genus selected by the dimension constraint `∑ k_i = 2g - 2`.
    pub fn genus(&self) -> Option<u32> {
        expected_genus(&self.insertions)
    }
}

pub fn expected_genus(insertions: &[u32]) -> Option<u32> {
    let total: u32 = insertions.iter().sum();
    (total % 2 == 0).then_some(total / 2 + 1)
}

/// Weight `∑ (k_i + 2) = 2g - 2 + 2n` of the quasi-modular form a connected
/// correlator is expected to be.
pub fn expected_weight(insertions: &[u32]) -> u32 {
    insertions.iter().map(|k| k + 2).sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantRecord {
    pub insertions: Vec<u32>,
    pub genus: Option<u32>,
    pub pipeline: Pipeline,
    pub q_order: usize,
    pub series: QSeries,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quasi_modular: Option<QuasiModularRep>,
}

impl InvariantRecord {
    pub fn new(insertions: &[u32], genus: Option<u32>, pipeline: Pipeline, series: QSeries) -> Self {
        InvariantRecord {
            insertions: insertions.to_vec(),
            genus,
            pipeline,
            q_order: series.order(),
            series,
            quasi_modular: None,
        }
    }

    /// Indices `d` where the two records' `q^d` coefficients differ.
    pub fn mismatches(&self, other: &InvariantRecord) -> Vec<usize> {
        let n = self.q_order.min(other.q_order);
        (0..=n).filter(|&d| self.series.coeff(d) != other.series.coeff(d)).collect()
    }
}

/// All set partitions of `0..n`, each block sorted, blocks ordered by their
/// smallest element.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut current: Vec<Vec<usize>> = Vec::new();
    fn rec(i: usize, n: usize, current: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            out.push(current.clone());
            return;
        }
        for b in 0..current.len() {
            current[b].push(i);
            rec(i + 1, n, current, out);
            current[b].pop();
        }
        current.push(vec![i]);
        rec(i + 1, n, current, out);
        current.pop();
    }
    rec(0, n, &mut current, &mut out);
    out
}

fn mask(block: &[usize]) -> usize {
    block.iter().fold(0, |m, &i| m | (1 << i))
}

/// Connected correlator from normalized disconnected ones:
/// `C([n]) = ∑_π (-1)^{|π|-1} (|π|-1)! ∏_{B ∈ π} D(B)`.
///
/// `disconnected[mask]` holds `D` of the insertion subset encoded by `mask`;
/// index 0 is unused.
pub fn cumulant(n: usize, disconnected: &[QSeries]) -> Result<QSeries> {
    if n == 0 || disconnected.len() < 1 << n {
        return Err(Error::Precondition(format!("need 2^{n} subset values")));
    }
    let order = disconnected[(1 << n) - 1].order();
    let mut total = QSeries::zero(order);
    for partition in set_partitions(n) {
        let blocks = partition.len();
        let mut term = QSeries::one(order);
        for b in &partition {
            term = term.checked_mul(&disconnected[mask(b)])?;
        }
        let coeff = rational::sign(blocks as u32 - 1) * rational::Rational::from_integer(rational::factorial(blocks as u32 - 1));
        total += &term.scale(&coeff);
    }
    Ok(total)
}

/// Inverse of [`cumulant`]: `D(S) = ∑_π ∏_{B ∈ π} C(B)` for every subset.
pub fn moments_from_cumulants(n: usize, connected: &[QSeries]) -> Result<Vec<QSeries>> {
    let order = connected[(1 << n) - 1].order();
    let mut out = vec![QSeries::zero(order); 1 << n];
    for (m, slot) in out.iter_mut().enumerate().skip(1) {
        let members: Vec<usize> = (0..n).filter(|i| m & (1 << i) != 0).collect();
        let mut total = QSeries::zero(order);
        for partition in set_partitions(members.len()) {
            let mut term = QSeries::one(order);
            for b in &partition {
                let real: Vec<usize> = b.iter().map(|&i| members[i]).collect();
                term = term.checked_mul(&connected[mask(&real)])?;
            }
            total += &term;
        }
        *slot = total;
    }
    Ok(out)
}
