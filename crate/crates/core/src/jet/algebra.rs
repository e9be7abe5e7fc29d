//! The total derivative `D`, reduction modulo `im D`, and the degree-2
//! operator `E`.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::{DiffPoly, JetMonomial, NormalForm};
use crate::series::rational::{self, binomial, factorial, Rational};

/// Total derivative `D = ∑ α⁽ⁱ⁺¹⁾ ∂/∂α⁽ⁱ⁾`.
pub fn apply_d(f: &DiffPoly) -> DiffPoly {
    let mut out = DiffPoly::zero();
    for (m, c) in f.terms() {
        for (n, mult) in m.counts() {
            out.add_term(m.without(n).with(n + 1), c * rational::int(mult as i64));
        }
    }
    out
}

/// Canonical representative of `f` modulo `im D`.
///
/// A monomial `m` whose largest index `j ≥ 1` occurs once is rewritten through
/// `D(m')`, where `m'` is `m` with that `α⁽ʲ⁾` lowered to `α⁽ʲ⁻¹⁾`: every other
/// term of `D(m')` has largest index below `j`, so reduction terminates.
pub fn normal_form(f: &DiffPoly) -> NormalForm {
    // keyed by (largest index, monomial) so the highest index is reduced first
    let mut work: BTreeMap<(u32, JetMonomial), Rational> = BTreeMap::new();
    for (m, c) in f.terms() {
        push(&mut work, m.clone(), c.clone());
    }
    let mut out = DiffPoly::zero();
    while let Some(((_, m), c)) = work.pop_last() {
        if c.is_zero() {
            continue;
        }
        if m.is_basis() {
            out.add_term(m, c);
            continue;
        }
        let j = m.max_index().expect("non-basis monomials are nonconstant");
        let lowered = m.without(j).with(j - 1);
        // D(lowered) = mult · m + rest, with mult the number of α⁽ʲ⁻¹⁾ in `lowered`
        let mult = rational::int(lowered.multiplicity(j - 1) as i64);
        let factor = -c / mult;
        for (n, k) in lowered.counts() {
            if n == j - 1 {
                continue;
            }
            let term = lowered.without(n).with(n + 1);
            push(&mut work, term, &factor * rational::int(k as i64));
        }
    }
    NormalForm::from_basis_poly(out)
}

fn push(work: &mut BTreeMap<(u32, JetMonomial), Rational>, m: JetMonomial, c: Rational) {
    let key = (m.max_index().unwrap_or(0), m);
    let slot = work.entry(key).or_insert_with(Rational::zero);
    *slot += c;
}

/// `(k+1)!(l+1)!/(k+l+3)!`
fn contraction_weight(k: u32, l: u32) -> Rational {
    Rational::new(factorial(k + 1) * factorial(l + 1), factorial(k + l + 3))
}

/// `E` on a representative, before reduction.
pub(crate) fn apply_e_raw(f: &DiffPoly) -> DiffPoly {
    let mut out = DiffPoly::zero();
    for (m, c) in f.terms() {
        let counts = m.counts();
        // ½ ∑_{k+l=j+1} C(j+1,k) α⁽ᵏ⁾α⁽ˡ⁾ ∂/∂α⁽ʲ⁾; the ∂/∂α⁽⁻¹⁾ term vanishes
        for &(j, mult) in &counts {
            let rest = m.without(j);
            let base = c * rational::int(mult as i64) * rational::frac(1, 2);
            for k in 0..=j + 1 {
                let w = Rational::from_integer(binomial(j + 1, k));
                out.add_term(rest.with(k).with(j + 1 - k), &base * w);
            }
        }
        // ½ ∑_{k,l} (k+1)!(l+1)!/(k+l+3)! α⁽ᵏ⁺ˡ⁺³⁾ ∂²/∂α⁽ᵏ⁾∂α⁽ˡ⁾ over ordered pairs
        for (a, &(k, mk)) in counts.iter().enumerate() {
            for &(l, ml) in &counts[a..] {
                let pairs = if k == l { mk * (mk - 1) / 2 } else { mk * ml };
                if pairs == 0 {
                    continue;
                }
                let rest = m.without(k).without(l).with(k + l + 3);
                out.add_term(rest, c * rational::int(pairs as i64) * contraction_weight(k, l));
            }
        }
    }
    out
}

/// `E` followed by reduction to normal form. Well defined on `A` because `E`
/// commutes with `D`.
pub fn apply_e(f: &DiffPoly) -> NormalForm {
    normal_form(&apply_e_raw(f))
}

/// Basis monomials of `A` in degree `d`, in monomial order.
pub fn basis_monomials(d: u32) -> Vec<JetMonomial> {
    let mut out = Vec::new();
    let mut parts = Vec::new();
    partitions_into(d, d, &mut parts, &mut out);
    out.sort();
    out
}

// Partitions of `rem` into parts <= `max`; part p is the jet α⁽ᵖ⁻¹⁾.
fn partitions_into(rem: u32, max: u32, parts: &mut Vec<u32>, out: &mut Vec<JetMonomial>) {
    if rem == 0 {
        let m = JetMonomial::new(parts.iter().map(|p| p - 1).collect());
        if m.is_basis() {
            out.push(m);
        }
        return;
    }
    for p in (1..=max.min(rem)).rev() {
        parts.push(p);
        partitions_into(rem - p, p, parts, out);
        parts.pop();
    }
}
