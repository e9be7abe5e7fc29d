//! Quasi-modular forms of level one: `ℚ[E₂, E₄, E₆]`, recognition of
//! truncated `q`-series, and the almost-holomorphic lift `E₂ → E₂ - Y`.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::linalg::{self, Matrix};
use crate::series::rational::{self, binomial, Rational};
use crate::series::{eisenstein, QSeries};

/// Exponents `(a, b, c)` of `E₂^a E₄^b E₆^c`.
pub type Exponents = (u32, u32, u32);

/// Overdetermination margin required by [`recognize`].
pub const SURPLUS_MARGIN: usize = 5;

/// Every `(a, b, c)` with `2a + 4b + 6c = weight`, by descending `a`, then
/// descending `b`.
pub fn quasimodular_basis(weight: u32) -> Result<Vec<Exponents>> {
    if weight == 0 || weight % 2 == 1 {
        return Err(domain(format!("weight must be even and positive, got {weight}")));
    }
    let half = weight / 2;
    let mut out = Vec::new();
    for a in (0..=half).rev() {
        let rest = half - a;
        for b in (0..=rest / 2).rev() {
            let r = rest - 2 * b;
            if r % 3 == 0 {
                out.push((a, b, r / 3));
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModularTerm {
    pub e2: u32,
    pub e4: u32,
    pub e6: u32,
    #[serde(with = "rational::serde_str")]
    pub coeff: Rational,
}

/// `∑ c_{abc} E₂^a E₄^b E₆^c`, homogeneous of the given weight. Terms are kept
/// in basis order with nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawRep")]
pub struct QuasiModularRep {
    weight: u32,
    terms: Vec<ModularTerm>,
}

#[derive(Deserialize)]
struct RawRep {
    weight: u32,
    terms: Vec<ModularTerm>,
}

impl TryFrom<RawRep> for QuasiModularRep {
    type Error = Error;

    fn try_from(raw: RawRep) -> Result<Self> {
        QuasiModularRep::new(raw.weight, raw.terms.into_iter().map(|t| ((t.e2, t.e4, t.e6), t.coeff)))
    }
}

impl QuasiModularRep {
    pub fn new(weight: u32, terms: impl IntoIterator<Item = (Exponents, Rational)>) -> Result<Self> {
        let basis = quasimodular_basis(weight)?;
        let mut acc: BTreeMap<Exponents, Rational> = BTreeMap::new();
        for (e, c) in terms {
            if 2 * e.0 + 4 * e.1 + 6 * e.2 != weight {
                return Err(domain(format!("E2^{} E4^{} E6^{} does not have weight {weight}", e.0, e.1, e.2)));
            }
            *acc.entry(e).or_insert_with(Rational::zero) += c;
        }
        let terms = basis
            .into_iter()
            .filter_map(|e| {
                let c = acc.remove(&e)?;
                (!c.is_zero()).then_some(ModularTerm { e2: e.0, e4: e.1, e6: e.2, coeff: c })
            })
            .collect();
        Ok(QuasiModularRep { weight, terms })
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn terms(&self) -> &[ModularTerm] {
        &self.terms
    }

    pub fn coeff(&self, e: Exponents) -> Rational {
        self.terms
            .iter()
            .find(|t| (t.e2, t.e4, t.e6) == e)
            .map_or_else(Rational::zero, |t| t.coeff.clone())
    }

    /// The `q`-expansion through `q^order`.
    pub fn evaluate(&self, order: usize) -> Result<QSeries> {
        let (e2, e4, e6) = (eisenstein(2, order)?, eisenstein(4, order)?, eisenstein(6, order)?);
        let mut out = QSeries::zero(order);
        for t in &self.terms {
            let m = &(&e2.pow(t.e2) * &e4.pow(t.e4)) * &e6.pow(t.e6);
            out += &m.scale(&t.coeff);
        }
        Ok(out)
    }
}

/// First coefficient at which no form of the requested weight fits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub index: usize,
    #[serde(with = "rational::serde_str")]
    pub actual: Rational,
    /// Value predicted by the fit from lower coefficients, when one exists.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predicted: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Recognition {
    /// `surplus` coefficients beyond those used for the solve were checked.
    Recognized { rep: QuasiModularRep, surplus: usize },
    Failed(Certificate),
}

impl Recognition {
    pub fn rep(&self) -> Option<&QuasiModularRep> {
        match self {
            Recognition::Recognized { rep, .. } => Some(rep),
            Recognition::Failed(_) => None,
        }
    }
}

/// Writes `series` in the basis of weight `weight`. The coefficients are
/// solved from the shortest prefix that determines them; every later
/// coefficient must then match.
pub fn recognize(series: &QSeries, weight: u32) -> Result<Recognition> {
    let basis = quasimodular_basis(weight)?;
    let order = series.order();
    if order < basis.len() + SURPLUS_MARGIN {
        return Err(Error::Precondition(format!(
            "weight {weight} needs truncation order >= {}, got {order}",
            basis.len() + SURPLUS_MARGIN
        )));
    }
    let columns: Vec<QSeries> = basis
        .iter()
        .map(|&e| QuasiModularRep::new(weight, [(e, rational::one())])?.evaluate(order))
        .collect::<Result<_>>()?;
    let row = |d: usize| -> Vec<Rational> { columns.iter().map(|c| c.coeff(d).clone()).collect() };
    let mut a: Matrix = Vec::new();
    let mut used = None;
    for d in 0..=order {
        a.push(row(d));
        let mut aug: Matrix = a.iter().enumerate().map(|(i, r)| [r.clone(), vec![series.coeff(i).clone()]].concat()).collect();
        let aug_rank = linalg::rref(&mut aug).len();
        let rank = linalg::rank(&a);
        if aug_rank > rank {
            return Ok(Recognition::Failed(Certificate { index: d, actual: series.coeff(d).clone(), predicted: None }));
        }
        if rank == basis.len() {
            used = Some(d + 1);
            break;
        }
    }
    let Some(used) = used else {
        return Err(Error::Invariant(format!("weight {weight} basis is degenerate through q^{order}")));
    };
    let b: Vec<Rational> = (0..used).map(|d| series.coeff(d).clone()).collect();
    let x = linalg::solve_unique(&a, &b).ok_or_else(|| Error::Invariant("consistent full-rank system has no solution".into()))?;
    let rep = QuasiModularRep::new(weight, basis.iter().copied().zip(x))?;
    let fitted = rep.evaluate(order)?;
    for d in used..=order {
        if fitted.coeff(d) != series.coeff(d) {
            return Ok(Recognition::Failed(Certificate {
                index: d,
                actual: series.coeff(d).clone(),
                predicted: Some(rational::to_string(fitted.coeff(d))),
            }));
        }
    }
    Ok(Recognition::Recognized { rep, surplus: order + 1 - used })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlmostHolomorphicTerm {
    pub e2: u32,
    pub e4: u32,
    pub e6: u32,
    pub y: u32,
    #[serde(with = "rational::serde_str")]
    pub coeff: Rational,
}

/// A quasi-modular form with `E₂` replaced by `E₂* = E₂ - Y`, expanded in
/// `E₂, E₄, E₆, Y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlmostHolomorphicRep {
    pub weight: u32,
    pub terms: Vec<AlmostHolomorphicTerm>,
}

pub fn almost_holomorphic_lift(rep: &QuasiModularRep) -> AlmostHolomorphicRep {
    let mut acc: BTreeMap<(u32, u32, u32, u32), Rational> = BTreeMap::new();
    for t in rep.terms() {
        for i in 0..=t.e2 {
            let c = &t.coeff * Rational::from_integer(binomial(t.e2, i)) * rational::sign(i);
            *acc.entry((t.e2 - i, t.e4, t.e6, i)).or_insert_with(Rational::zero) += c;
        }
    }
    let terms = acc
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|((e2, e4, e6, y), coeff)| AlmostHolomorphicTerm { e2, e4, e6, y, coeff })
        .collect();
    AlmostHolomorphicRep { weight: rep.weight(), terms }
}

impl AlmostHolomorphicRep {
    /// `Y = 0`: the holomorphic limit.
    pub fn specialize(&self) -> Result<QuasiModularRep> {
        QuasiModularRep::new(
            self.weight,
            self.terms.iter().filter(|t| t.y == 0).map(|t| ((t.e2, t.e4, t.e6), t.coeff.clone())),
        )
    }
}
