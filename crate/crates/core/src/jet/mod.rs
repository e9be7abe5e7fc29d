//! The graded differential polynomial algebra `A = ℚ[α⁽⁰⁾, α⁽¹⁾, …] / im D`.
//!
//! A jet monomial `α⁽ⁿ¹⁾⋯α⁽ⁿʳ⁾` is stored as its sorted index list. The grading
//! is `deg α⁽ⁿ⁾ = n + 1`. Powers of `ℏ` are not stored: a monomial with `2g`
//! derivatives carries `ℏ^g`, and consumers reconstruct that from
//! [`JetMonomial::derivative_count`].

mod algebra;
mod vertex;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::series::rational::{self, Rational};

pub use algebra::{apply_d, apply_e, basis_monomials, normal_form};
pub use vertex::{genus_split, kernel_dimension, vertex, KernelInfo};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct JetMonomial(Vec<u32>);

impl JetMonomial {
    pub fn new(mut indices: Vec<u32>) -> Self {
        indices.sort_unstable();
        JetMonomial(indices)
    }

    pub fn one() -> Self {
        JetMonomial(Vec::new())
    }

    /// `(α⁽⁰⁾)^n`.
    pub fn alpha_power(n: usize) -> Self {
        JetMonomial(vec![0; n])
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }

    /// Number of jet factors.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|n| n + 1).sum()
    }

    pub fn derivative_count(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn max_index(&self) -> Option<u32> {
        self.0.last().copied()
    }

    pub fn multiplicity(&self, n: u32) -> usize {
        self.0.iter().filter(|&&i| i == n).count()
    }

    /// Basis monomials of `A`: the constant, pure powers of `α⁽⁰⁾`, and
    /// monomials whose largest index occurs at least twice.
    pub fn is_basis(&self) -> bool {
        match self.max_index() {
            None | Some(0) => true,
            Some(j) => self.multiplicity(j) >= 2,
        }
    }

    pub fn times(&self, other: &JetMonomial) -> JetMonomial {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        JetMonomial::new(v)
    }

    /// Removes one factor `α⁽ⁿ⁾`. Panics if absent.
    pub(crate) fn without(&self, n: u32) -> JetMonomial {
        let mut v = self.0.clone();
        let pos = v.iter().position(|&i| i == n).expect("factor present");
        v.remove(pos);
        JetMonomial(v)
    }

    pub(crate) fn with(&self, n: u32) -> JetMonomial {
        let mut v = self.0.clone();
        let pos = v.partition_point(|&i| i <= n);
        v.insert(pos, n);
        JetMonomial(v)
    }

    /// Distinct indices with their multiplicities.
    pub(crate) fn counts(&self) -> Vec<(u32, usize)> {
        let mut out: Vec<(u32, usize)> = Vec::new();
        for &i in &self.0 {
            match out.last_mut() {
                Some((j, c)) if *j == i => *c += 1,
                _ => out.push((i, 1)),
            }
        }
        out
    }
}

impl fmt::Display for JetMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .counts()
            .into_iter()
            .map(|(n, c)| if c == 1 { format!("a{n}") } else { format!("a{n}^{c}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Finite ℚ-linear combination of jet monomials. Zero coefficients are never
/// stored, and iteration order is the monomial order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DiffPoly {
    terms: BTreeMap<JetMonomial, Rational>,
}

impl DiffPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(JetMonomial::one(), c)
    }

    pub fn monomial(m: JetMonomial, c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    /// `α⁽ⁿ⁾`.
    pub fn jet(n: u32) -> Self {
        Self::monomial(JetMonomial(vec![n]), rational::one())
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (JetMonomial, Rational)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: JetMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&JetMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &JetMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, x)| (m.clone(), x * c)))
    }

    /// The degree-`d` component.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        Self::from_terms(self.terms.iter().filter(|(m, _)| m.degree() == d).map(|(m, c)| (m.clone(), c.clone())))
    }

    /// `Some(d)` if every term has degree `d`; `None` for mixed or zero input.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(JetMonomial::degree);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    fn accumulate(&mut self, other: &DiffPoly, c: &Rational) {
        for (m, x) in &other.terms {
            self.add_term(m.clone(), x * c);
        }
    }
}

impl Add for &DiffPoly {
    type Output = DiffPoly;

    fn add(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        out.accumulate(rhs, &rational::one());
        out
    }
}

impl Sub for &DiffPoly {
    type Output = DiffPoly;

    fn sub(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        out.accumulate(rhs, &-rational::one());
        out
    }
}

impl Neg for &DiffPoly {
    type Output = DiffPoly;

    fn neg(self) -> DiffPoly {
        self.scale(&-rational::one())
    }
}

impl Mul for &DiffPoly {
    type Output = DiffPoly;

    fn mul(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(a.times(b), x * y);
            }
        }
        out
    }
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("({c})*{m}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    indices: Vec<u32>,
    #[serde(with = "rational::serde_str")]
    coeff: Rational,
}

impl Serialize for DiffPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<TermJson> = self
            .terms
            .iter()
            .map(|(m, c)| TermJson { indices: m.0.clone(), coeff: c.clone() })
            .collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DiffPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let terms = Vec::<TermJson>::deserialize(d)?;
        Ok(DiffPoly::from_terms(terms.into_iter().map(|t| (JetMonomial::new(t.indices), t.coeff))))
    }
}

/// A [`DiffPoly`] supported only on basis monomials; the canonical
/// representative of its class in `A`. Only [`normal_form`] builds one.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize)]
#[serde(transparent)]
pub struct NormalForm(DiffPoly);

impl NormalForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn as_poly(&self) -> &DiffPoly {
        &self.0
    }

    pub fn into_poly(self) -> DiffPoly {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        NormalForm(self.0.scale(c))
    }

    pub(crate) fn from_basis_poly(p: DiffPoly) -> Self {
        debug_assert!(p.terms().all(|(m, _)| m.is_basis()));
        NormalForm(p)
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rational::{frac, int};

    #[test]
    fn monomial_gradings() {
        let m = JetMonomial::new(vec![2, 0, 1, 1]);
        assert_eq!(m.indices(), &[0, 1, 1, 2]);
        assert_eq!(m.degree(), 1 + 2 + 2 + 3);
        assert_eq!(m.derivative_count(), 4);
        assert!(!m.is_basis());
        assert!(JetMonomial::new(vec![0, 2, 2]).is_basis());
        assert!(JetMonomial::alpha_power(1).is_basis());
        assert!(!JetMonomial::new(vec![1]).is_basis());
        assert_eq!(m.to_string(), "a0*a1^2*a2");
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let mut p = DiffPoly::jet(0);
        p.add_term(JetMonomial::new(vec![0]), int(-1));
        assert!(p.is_zero());
    }

    #[test]
    fn json_round_trip() {
        let p = DiffPoly::from_terms([
            (JetMonomial::alpha_power(4), frac(1, 24)),
            (JetMonomial::new(vec![1, 1]), frac(-1, 24)),
        ]);
        let j = serde_json::to_string(&p).unwrap();
        assert_eq!(j, r#"[{"indices":[0,0,0,0],"coeff":"1/24"},{"indices":[1,1],"coeff":"-1/24"}]"#);
        assert_eq!(serde_json::from_str::<DiffPoly>(&j).unwrap(), p);
    }

    #[test]
    fn homogeneity_queries() {
        let p = &DiffPoly::jet(0) + &DiffPoly::monomial(JetMonomial::new(vec![0, 0]), int(3));
        assert_eq!(p.homogeneous_degree(), None);
        assert_eq!(p.homogeneous_part(2).homogeneous_degree(), Some(2));
        assert_eq!(p.homogeneous_part(1), DiffPoly::jet(0));
    }
}
