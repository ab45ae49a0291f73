use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::wigner_eckart::wigner_eckart_a_block;
use crate::error::{Error, Result};
use crate::group_rep::{clebsch_gordan, conjugate_rep, decompose_rep, Catalog, FiniteGroup, Irrep, Multiplier, Rep};
use crate::invariant;
use crate::linalg::{self, CMat, C64};
use crate::mpv_core::{cf_blocks, MpsTensor};
use crate::symmetry::{projective_multiplier, verify_relation_a, verify_relation_b};

/// Gauge field obtained by gauging a global symmetry.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugedPair {
    pub b: MpsTensor,
    pub r: Rep,
    pub l: Rep,
    /// Virtual representation after lifting all blocks to one multiplier.
    pub x: Vec<CMat>,
    /// Dimension of each irreducible block of `X`, one sector per block.
    pub sector_dims: Vec<usize>,
}

fn make_rep(mats: Vec<CMat>, group: Option<&FiniteGroup>) -> Result<Rep> {
    match group {
        Some(g) => Rep::new(mats, g),
        None => Ok(Rep::from_samples(mats)),
    }
}

/// A one-dimensional projective representation `μ` with multiplier `β`,
/// found as a one-dimensional subrepresentation of the twisted regular
/// representation `L(g)|h⟩ = β(g,h)|gh⟩`.
fn coboundary_root(beta: &Multiplier, group: &FiniteGroup, rng: &mut ChaCha8Rng) -> Result<Option<Vec<C64>>> {
    let n = group.order();
    let regular: Vec<CMat> = (0..n)
        .map(|g| {
            let mut m = linalg::zeros(n, n);
            for h in 0..n {
                m[(group.mul(g, h), h)] = beta.get(g, h);
            }
            m
        })
        .collect();
    let parts = invariant::irreducible_components(&regular, n, rng)?;
    Ok(parts.iter().find(|p| p.ncols() == 1).map(|p| {
        let v = p.column(0);
        regular.iter().map(|m| v.dotc(&(m * v))).collect()
    }))
}

/// Lifts the virtual representation of each canonical-form block of `A` to
/// the multiplier of the first block. Scalars per block leave
/// `Θ(g)·A = X⁻¹ A X` intact because `A` is block diagonal.
fn align_multipliers(a: &MpsTensor, x: &[CMat], group: &FiniteGroup, seed: u64) -> Result<Vec<CMat>> {
    if let Ok((_, residual)) = projective_multiplier(x, group) {
        if residual <= 1e-9 {
            return Ok(x.to_vec());
        }
    }
    let blocks = cf_blocks(a, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<CMat> = alloc::vec![linalg::zeros(a.left_dim(), a.left_dim()); x.len()];
    let mut reference: Option<Multiplier> = None;
    for p in &blocks {
        let xj: Vec<CMat> = x.iter().map(|m| p.adjoint() * m * p).collect();
        for (m, xm) in x.iter().zip(&xj) {
            if (m * p - p * xm).norm() > 1e-9 * m.norm().max(1.0) {
                return Err(Error::RelationFailed("X mixes canonical-form blocks".into()));
            }
        }
        let (gamma, _) = projective_multiplier(&xj, group)?;
        let mu = match &reference {
            None => {
                reference = Some(gamma);
                alloc::vec![linalg::ONE; x.len()]
            }
            Some(g0) => {
                let beta = g0.product(&gamma.inverse());
                coboundary_root(&beta, group, &mut rng)?.ok_or(Error::MixedCohomology)?
            }
        };
        for (g, (acc, m)) in out.iter_mut().zip(&xj).enumerate() {
            *acc += p * (m * mu[g]) * p.adjoint();
        }
    }
    Ok(out)
}

/// Gauges the global symmetry `Θ(g)·A = X(g)⁻¹ A X(g)` of a canonical-form
/// tensor: one sector `H_{conj(a)} ⊗ H_a` per irreducible block `a` of `X`,
/// `B^{a;m,n} = |a,m⟩⟨a,n|`, `R = ⊕ 𝟙 ⊗ X^a` and `L = ⊕ conj(X^a) ⊗ 𝟙`.
/// `X` must be unitary; `group` enables the multiplier lift.
pub fn gauge_global_symmetry(
    a: &MpsTensor,
    theta: &Rep,
    x: &[CMat],
    group: Option<&FiniteGroup>,
    seed: u64,
) -> Result<GaugedPair> {
    let rel = verify_relation_a(a, theta, x, x)?;
    if !(rel.max_residual <= 1e-9) {
        return Err(Error::RelationFailed(format!("A relation residual {:.3e}", rel.max_residual)));
    }
    for (g, m) in x.iter().enumerate() {
        let residual = linalg::unitarity_residual(m);
        if residual > 1e-9 {
            return Err(Error::NonUnitary { element: g, residual });
        }
    }
    let x = match group {
        Some(grp) => align_multipliers(a, x, grp, seed)?,
        None => x.to_vec(),
    };
    let d = a.left_dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(7));
    let parts = invariant::irreducible_components(&x, d, &mut rng)?;
    let sector_dims: Vec<usize> = parts.iter().map(|p| p.ncols()).collect();
    let mut mats = Vec::new();
    for p in &parts {
        for m in 0..p.ncols() {
            for n in 0..p.ncols() {
                mats.push(p.column(m) * p.column(n).adjoint());
            }
        }
    }
    let b = MpsTensor::new(mats)?;
    let mut r_mats = Vec::with_capacity(x.len());
    let mut l_mats = Vec::with_capacity(x.len());
    for m in &x {
        let blocks: Vec<CMat> = parts.iter().map(|p| p.adjoint() * m * p).collect();
        let rs: Vec<CMat> = blocks.iter().map(|xa| linalg::kron(&linalg::identity(xa.nrows()), xa)).collect();
        let ls: Vec<CMat> =
            blocks.iter().map(|xa| linalg::kron(&xa.map(|z| z.conj()), &linalg::identity(xa.nrows()))).collect();
        r_mats.push(linalg::direct_sum(&rs.iter().collect::<Vec<_>>()));
        l_mats.push(linalg::direct_sum(&ls.iter().collect::<Vec<_>>()));
    }
    let r = make_rep(r_mats, group)?;
    let l = make_rep(l_mats, group)?;
    Ok(GaugedPair { b, r, l, x, sector_dims })
}

/// Matter coupled to a gauge field.
#[derive(Debug, Clone, PartialEq)]
pub struct CoupledMatter {
    pub a: MpsTensor,
    pub theta: Rep,
    /// Irrep label of each block of `X`.
    pub virtual_labels: Vec<String>,
    /// Chosen physical irrep `J(k)` for each block.
    pub physical_labels: Vec<String>,
}

/// Places a Wigner-Eckart block `conj(j_k) ⊗ j_k → J(k)` on the diagonal
/// for every irreducible block `j_k` of `X`, so that `(A, B)` has the
/// `R ⊗ Θ ⊗ L` symmetry and `A` the global symmetry `Θ`. `J(k)` defaults to
/// the lowest-dimensional irrep in the product (first in catalog order).
pub fn couple_matter_to_gauge(
    b: &MpsTensor,
    r: &Rep,
    l: &Rep,
    x: &Rep,
    catalog: &Catalog,
    choice: Option<&[String]>,
) -> Result<CoupledMatter> {
    let rel = verify_relation_b(b, r, l, x.matrices(), x.matrices())?;
    if !(rel.max_residual <= 1e-9) {
        return Err(Error::RelationFailed(format!("B relation residual {:.3e}", rel.max_residual)));
    }
    let dec = decompose_rep(x, &catalog.irreps)?;
    if let Some(ch) = choice {
        if ch.len() != dec.components.len() {
            return Err(Error::DimMismatch(format!("{} choices for {} blocks", ch.len(), dec.components.len())));
        }
    }
    let u = &dec.basis_change;
    let mut mats: Vec<CMat> = Vec::new();
    let mut theta_blocks: Vec<&Irrep> = Vec::new();
    let mut virtual_labels = Vec::new();
    let mut physical_labels = Vec::new();
    for (k, comp) in dec.components.iter().enumerate() {
        let jk = catalog.get(&comp.label)?;
        let big_j = match choice {
            Some(ch) => catalog.get(&ch[k])?,
            None => {
                let conj = Irrep { label: format!("conj({})", jk.label), rep: conjugate_rep(&jk.rep) };
                let cg = clebsch_gordan(&conj, jk, &catalog.irreps)?;
                catalog
                    .irreps
                    .iter()
                    .filter(|irr| cg.multiplicity(&irr.label) > 0)
                    .min_by_key(|irr| irr.dim())
                    .ok_or_else(|| Error::IncompleteCatalog(format!("conj({0}) ⊗ {0}", jk.label)))?
            }
        };
        let block = wigner_eckart_a_block(big_j, jk, jk, &catalog.irreps, &[])?;
        let emb = u.columns(comp.offset, comp.dim).into_owned();
        for m in block.matrices() {
            mats.push(&emb * m * emb.adjoint());
        }
        theta_blocks.push(big_j);
        virtual_labels.push(comp.label.clone());
        physical_labels.push(big_j.label.clone());
    }
    let theta_mats = (0..catalog.group.order())
        .map(|g| {
            let parts: Vec<&CMat> = theta_blocks.iter().map(|irr| irr.matrix(g)).collect();
            linalg::direct_sum(&parts)
        })
        .collect();
    let theta = Rep::new(theta_mats, &catalog.group)?;
    Ok(CoupledMatter { a: MpsTensor::new(mats)?, theta, virtual_labels, physical_labels })
}
