//! The bracket of two vertex densities: contract them with the `q⁰`
//! propagator, take the residue of the second point around the first, and
//! reduce modulo total derivatives.
//!
//! With `u = log(z₂/z₁)` the `q⁰` propagator is
//! `K(u) = e^u/(1 - e^u)² = 1/u² - ∑_{k≥1} B_{2k}(2k-1) u^{2k-2}/(2k)!`, and an
//! edge from `α⁽ᵃ⁾(z₁)` to `α⁽ᵇ⁾(z₂)` gives `(-1)^a ∂_u^{a+b} K`. Uncontracted
//! fields at `z₂` are Taylor expanded at `z₁`.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::Result;
use crate::jet::{normal_form, vertex, DiffPoly, JetMonomial, NormalForm};
use crate::series::numbers::bernoulli;
use crate::series::rational::{self, factorial, Rational};
use crate::series::LambdaSeries;

/// `K(u)` through `u^order`.
fn propagator_u(order: i64) -> Result<LambdaSeries> {
    let mut coeffs = Vec::new();
    for d in -2..=order {
        let c = if d == -2 {
            rational::one()
        } else if d >= 0 && d % 2 == 0 {
            let k = (d as u32 + 2) / 2;
            -bernoulli(2 * k)? * rational::int(2 * k as i64 - 1) / Rational::from_integer(factorial(2 * k))
        } else {
            Rational::zero()
        };
        coeffs.push(c);
    }
    Ok(LambdaSeries::new(-2, order, coeffs))
}

fn edge_series(a: u32, b: u32, order: i64) -> Result<LambdaSeries> {
    let mut k = propagator_u(order + (a + b) as i64)?;
    for _ in 0..a + b {
        k = k.derivative();
    }
    Ok(k.scale(&rational::sign(a)).truncate(order)?)
}

/// Bracket of two densities, reduced modulo `D`, by `ℏ`-order
/// `h = #edges + g₁ + g₂` for `1 <= h <= hbar_order`.
pub fn bracket(v1: &DiffPoly, v2: &DiffPoly, hbar_order: u32) -> Result<BTreeMap<u32, NormalForm>> {
    let mut raw: BTreeMap<u32, DiffPoly> = (1..=hbar_order).map(|h| (h, DiffPoly::zero())).collect();
    for (m1, c1) in v1.terms() {
        for (m2, c2) in v2.terms() {
            let g = m1.genus() + m2.genus();
            let coeff = c1 * c2;
            let s1 = m1.indices();
            let s2 = m2.indices();
            let mut used1 = vec![false; s1.len()];
            let mut used2 = vec![false; s2.len()];
            let mut edges = Vec::new();
            partial_matchings(s1, s2, 0, &mut used1, &mut used2, &mut edges, &mut |edges, used1, used2| {
                let h = edges.len() as u32 + g;
                if edges.is_empty() || h > hbar_order {
                    return Ok(());
                }
                let rest1 = JetMonomial::new(s1.iter().zip(used1).filter(|(_, &u)| !u).map(|(&a, _)| a).collect());
                let rest2: Vec<u32> = s2.iter().zip(used2).filter(|(_, &u)| !u).map(|(&b, _)| b).collect();
                let term = residue(edges, &rest2)?;
                let term = &term * &DiffPoly::monomial(rest1, coeff.clone());
                let slot = raw.get_mut(&h).expect("h within range");
                *slot = &*slot + &term;
                Ok(())
            })?;
        }
    }
    Ok(raw.into_iter().map(|(h, p)| (h, normal_form(&p))).collect())
}

/// `[u⁻¹]` of `∏_edges (-1)^a ∂^{a+b}K(u) · ∏_{c ∈ rest} ∑_j u^j/j! α⁽ᶜ⁺ʲ⁾`.
fn residue(edges: &[(u32, u32)], rest: &[u32]) -> Result<DiffPoly> {
    let depth: i64 = edges.iter().map(|&(a, b)| 2 + (a + b) as i64).sum();
    // u-degrees 0..depth-1 of the Taylor part are all that can reach u⁻¹
    let top = (depth - 1) as usize;
    let mut prop = LambdaSeries::one(depth);
    for &(a, b) in edges {
        prop = &prop * &edge_series(a, b, depth)?;
    }
    let mut taylor: Vec<DiffPoly> = vec![DiffPoly::zero(); top + 1];
    taylor[0] = DiffPoly::constant(rational::one());
    for &c in rest {
        let mut next = vec![DiffPoly::zero(); top + 1];
        for (i, p) in taylor.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            for j in 0..=top - i {
                let f = DiffPoly::monomial(JetMonomial::new(vec![c + j as u32]), Rational::new(1.into(), factorial(j as u32)));
                next[i + j] = &next[i + j] + &(p * &f);
            }
        }
        taylor = next;
    }
    let mut out = DiffPoly::zero();
    for (t, p) in taylor.iter().enumerate() {
        let c = prop.coeff(-1 - t as i64);
        if !c.is_zero() {
            out = &out + &p.scale(&c);
        }
    }
    Ok(out)
}

type Visit<'a> = dyn FnMut(&[(u32, u32)], &[bool], &[bool]) -> Result<()> + 'a;

// Injective partial matchings between the slots of two monomials. Slot i of
// the first monomial is either left alone or matched to an unused slot of the
// second.
fn partial_matchings(
    s1: &[u32],
    s2: &[u32],
    i: usize,
    used1: &mut Vec<bool>,
    used2: &mut Vec<bool>,
    edges: &mut Vec<(u32, u32)>,
    visit: &mut Visit<'_>,
) -> Result<()> {
    if i == s1.len() {
        return visit(edges, used1, used2);
    }
    partial_matchings(s1, s2, i + 1, used1, used2, edges, visit)?;
    for j in 0..s2.len() {
        if used2[j] {
            continue;
        }
        used1[i] = true;
        used2[j] = true;
        edges.push((s1[i], s2[j]));
        partial_matchings(s1, s2, i + 1, used1, used2, edges, visit)?;
        edges.pop();
        used1[i] = false;
        used2[j] = false;
    }
    Ok(())
}

/// [`bracket`] of `vertex(k1)` with `vertex(k2)`.
pub fn commutator_bracket(k1: i32, k2: i32, hbar_order: u32) -> Result<BTreeMap<u32, NormalForm>> {
    let v1 = vertex(k1)?;
    let v2 = vertex(k2)?;
    bracket(v1.as_poly(), v2.as_poly(), hbar_order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rational::{frac, int};

    #[test]
    fn propagator_expansion() {
        let k = propagator_u(4).unwrap();
        assert_eq!(k.coeff(-2), int(1));
        assert_eq!(k.coeff(-1), int(0));
        assert_eq!(k.coeff(0), frac(-1, 12));
        assert_eq!(k.coeff(2), frac(1, 240));
    }

    #[test]
    fn vertices_commute() {
        for k1 in -1..=3 {
            for k2 in -1..=3 {
                let b = commutator_bracket(k1, k2, 3).unwrap();
                assert_eq!(b.len(), 3);
                for (h, v) in &b {
                    assert!(v.is_zero(), "[{k1},{k2}] at h={h}: {v}");
                }
            }
        }
    }

    #[test]
    fn non_vertex_density_does_not_commute() {
        let a4 = DiffPoly::monomial(JetMonomial::alpha_power(4), int(1));
        let b = bracket(&a4, vertex(1).unwrap().as_poly(), 3).unwrap();
        assert!(b.values().any(|v| !v.is_zero()));
    }
}
