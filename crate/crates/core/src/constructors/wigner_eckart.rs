use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::group_rep::{clebsch_gordan, conjugate_rep, decompose_rep, tensor_product_rep, Catalog, Irrep, Rep};
use crate::linalg::{self, CMat, C64, ONE};
use crate::mpv_core::MpsTensor;

fn conjugate_irrep(j: &Irrep) -> Irrep {
    Irrep { label: format!("conj({})", j.label), rep: conjugate_rep(&j.rep) }
}

/// `A^M = Σ_c α_c Σ_{m,n} ⟨conj(j),m; l,n | J0,c,M⟩ |m⟩⟨n|`, which satisfies
/// `Θ(g)·A = D^j(g)⁻¹ A D^l(g)` with `Θ = D^{J0}`. `alphas` has one entry
/// per copy of `J0` in `conj(j) ⊗ l`; an empty slice means all ones.
pub fn wigner_eckart_a_block(j0: &Irrep, j: &Irrep, l: &Irrep, catalog: &[Irrep], alphas: &[C64]) -> Result<MpsTensor> {
    let cg = clebsch_gordan(&conjugate_irrep(j), l, catalog)?;
    let copies = cg.multiplicity(&j0.label);
    if copies == 0 {
        return Err(Error::ZeroByWignerEckart(format!("{} in conj({}) ⊗ {}", j0.label, j.label, l.label)));
    }
    let alphas: Vec<C64> = if alphas.is_empty() { alloc::vec![ONE; copies] } else { alphas.to_vec() };
    if alphas.len() != copies {
        return Err(Error::DimMismatch(format!("{} coefficients for {copies} copies of {}", alphas.len(), j0.label)));
    }
    let (dj, dl) = (j.dim(), l.dim());
    let mut mats = alloc::vec![linalg::zeros(dj, dl); j0.dim()];
    for (copy, alpha) in alphas.iter().enumerate() {
        let block = cg.block(&j0.label, copy).expect("multiplicity counted");
        for (big_m, mat) in mats.iter_mut().enumerate() {
            for m in 0..dj {
                for n in 0..dl {
                    mat[(m, n)] += alpha * block[(big_m, m * dl + n)];
                }
            }
        }
    }
    MpsTensor::new(mats)
}

/// Matter tensor built from every irrep copy in `conj(x) ⊗ y`.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerEckartTensor {
    pub a: MpsTensor,
    /// `⊕ D^J` over the copies, in the order of `components`.
    pub theta: Rep,
    /// `(label, copy)` of each physical block.
    pub components: Vec<(String, usize)>,
}

/// `A^{(J,c,M)} = α_{J,c} Σ ⟨conj(x),m; y,n | J,c,M⟩ |m⟩⟨n|` over all `(J, c)`
/// in the decomposition of `conj(x) ⊗ y`. With all `α` nonzero and `x = y`
/// the tensor spans every matrix and is injective.
pub fn wigner_eckart_full(x: &Rep, y: &Rep, catalog: &Catalog, alphas: Option<&[C64]>) -> Result<WignerEckartTensor> {
    let product = tensor_product_rep(&conjugate_rep(x), y)?;
    let dec = decompose_rep(&product, &catalog.irreps)?;
    let coeffs = dec.basis_change.adjoint();
    if let Some(al) = alphas {
        if al.len() != dec.components.len() {
            return Err(Error::DimMismatch(format!(
                "{} coefficients for {} components",
                al.len(),
                dec.components.len()
            )));
        }
    }
    let (dx, dy) = (x.dim(), y.dim());
    let mut mats = Vec::with_capacity(product.dim());
    let mut components = Vec::new();
    let mut blocks: Vec<&Irrep> = Vec::new();
    for (idx, comp) in dec.components.iter().enumerate() {
        let alpha = alphas.map(|al| al[idx]).unwrap_or(ONE);
        for big_m in 0..comp.dim {
            let row = comp.offset + big_m;
            mats.push(CMat::from_fn(dx, dy, |m, n| alpha * coeffs[(row, m * dy + n)]));
        }
        components.push((comp.label.clone(), comp.copy));
        blocks.push(catalog.get(&comp.label)?);
    }
    let theta_mats = (0..catalog.group.order())
        .map(|g| {
            let parts: Vec<&CMat> = blocks.iter().map(|irr| irr.matrix(g)).collect();
            linalg::direct_sum(&parts)
        })
        .collect();
    let theta = Rep::new(theta_mats, &catalog.group)?;
    Ok(WignerEckartTensor { a: MpsTensor::new(mats)?, theta, components })
}
