//! The vertex Lagrangians and the kernel of `E`.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::algebra::{apply_e, basis_monomials, normal_form};
use super::{apply_d, DiffPoly, JetMonomial, NormalForm};
use crate::error::{domain, Error, Result};
use crate::linalg;
use crate::series::rational::{factorial, Rational};

/// The vertex attached to `τ_k`: the class of `(D + α⁽⁰⁾)^{k+2} · 1 / (k+2)!`,
/// homogeneous of degree `k + 2` with leading term `(α⁽⁰⁾)^{k+2}/(k+2)!`.
pub fn vertex(k: i32) -> Result<NormalForm> {
    if k < -1 {
        return Err(domain(format!("vertex index must be >= -1, got {k}")));
    }
    let steps = (k + 2) as u32;
    let alpha = DiffPoly::jet(0);
    let mut f = DiffPoly::constant(crate::series::rational::one());
    for _ in 0..steps {
        f = &apply_d(&f) + &(&alpha * &f);
    }
    Ok(normal_form(&f.scale(&Rational::new(1.into(), factorial(steps)))))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelInfo {
    pub dimension: usize,
    pub basis: Vec<NormalForm>,
}

/// Kernel of `E : A_d → A_{d+2}` computed on normal-form bases.
pub fn kernel_dimension(d: u32) -> Result<KernelInfo> {
    if d == 0 {
        return Err(domain("kernel_dimension needs degree >= 1"));
    }
    let source = basis_monomials(d);
    let target = basis_monomials(d + 2);
    let columns: Vec<NormalForm> = source
        .par_iter()
        .map(|m| apply_e(&DiffPoly::monomial(m.clone(), crate::series::rational::one())))
        .collect();
    let matrix: linalg::Matrix = target
        .iter()
        .map(|row| columns.iter().map(|col| col.as_poly().coeff(row)).collect())
        .collect();
    let kernel = linalg::nullspace(&matrix, source.len());
    let basis = kernel
        .into_iter()
        .map(|v| {
            let p = DiffPoly::from_terms(source.iter().cloned().zip(v));
            NormalForm::from_basis_poly(p)
        })
        .collect::<Vec<_>>();
    Ok(KernelInfo { dimension: basis.len(), basis })
}

/// Splits a normal form by genus: the genus-`g` part holds the monomials with
/// exactly `2g` derivatives.
pub fn genus_split(v: &NormalForm) -> Result<BTreeMap<u32, NormalForm>> {
    let mut parts: BTreeMap<u32, DiffPoly> = BTreeMap::new();
    for (m, c) in v.as_poly().terms() {
        let n = m.derivative_count();
        if n % 2 == 1 {
            return Err(Error::Invariant(format!("monomial {m} has an odd number ({n}) of derivatives")));
        }
        parts.entry(n / 2).or_default().add_term(m.clone(), c.clone());
    }
    Ok(parts.into_iter().map(|(g, p)| (g, NormalForm::from_basis_poly(p))).collect())
}

impl JetMonomial {
    /// Genus carried by this monomial: half its derivative count.
    pub fn genus(&self) -> u32 {
        self.derivative_count() / 2
    }
}
