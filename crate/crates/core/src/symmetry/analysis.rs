use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::relations::verify_relation_b;
use crate::error::{Error, Result};
use crate::group_rep::{decompose_rep, intertwiner_basis, Catalog, Irrep, Rep};
use crate::invariant;
use crate::linalg::{self, c, CMat, CVec, RANK_TOL};
use crate::mpv_core::{cf_blocks, MpsTensor};

/// Norm of the physical components of `A` inside one irrep copy of `Θ`.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorNorm {
    pub label: String,
    pub copy: usize,
    pub trivial: bool,
    pub norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatterLocalReport {
    /// `max_g ‖Θ(g)·A − A‖ / ‖A‖`.
    pub tensor_residual: f64,
    /// The same residual for each diagonal block of the canonical form.
    pub block_residuals: Vec<f64>,
    pub sectors: Vec<SectorNorm>,
    /// Nontrivial sectors carrying weight above `1e-12 ‖A‖`.
    pub flagged: Vec<SectorNorm>,
}

impl MatterLocalReport {
    pub fn supported_on_trivial(&self) -> bool {
        self.flagged.is_empty()
    }
}

fn invariance_residual(t: &MpsTensor, theta: &Rep) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for m in theta.matrices() {
        worst = worst.max(t.act(m)?.rel_diff(t));
    }
    Ok(worst)
}

/// Tensor-level test of a local matter symmetry: `Θ(g)·A = A` and the
/// weight of `A` in each irrep sector of `Θ`.
pub fn analyze_matter_local_symmetry(
    a: &MpsTensor,
    theta: &Rep,
    catalog: &[Irrep],
    seed: u64,
) -> Result<MatterLocalReport> {
    if theta.dim() != a.phys_dim() {
        return Err(Error::DimMismatch("Θ does not act on the physical space of A".into()));
    }
    let blocks = cf_blocks(a, seed)?;
    let mut block_residuals = Vec::with_capacity(blocks.len());
    for p in &blocks {
        block_residuals.push(invariance_residual(&a.sandwich(&p.adjoint(), p), theta)?);
    }
    let dec = decompose_rep(theta, catalog)?;
    let rotated = a.act(&dec.basis_change.adjoint())?;
    let cutoff = 1e-12 * a.norm();
    let mut sectors = Vec::new();
    for comp in &dec.components {
        let norm_sq: f64 = (0..comp.dim).map(|m| rotated.matrix(comp.offset + m).norm_squared()).sum();
        let trivial = catalog.iter().any(|irr| irr.label == comp.label && irr.is_trivial());
        sectors.push(SectorNorm { label: comp.label.clone(), copy: comp.copy, trivial, norm: linalg::sqrt(norm_sq) });
    }
    let flagged = sectors.iter().filter(|s| !s.trivial && s.norm > cutoff).cloned().collect();
    Ok(MatterLocalReport { tensor_residual: invariance_residual(a, theta)?, block_residuals, sectors, flagged })
}

/// One irreducible sector `H_l ⊗ H_r` of the gauge-field physical space.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeSector {
    /// Orthonormal columns spanning the sector inside the physical space.
    pub basis: CMat,
    /// Irrep carried by `R` (acting as `𝟙 ⊗ r`).
    pub r_irrep: Vec<CMat>,
    /// Irrep carried by `L` (acting as `l ⊗ 𝟙`).
    pub l_irrep: Vec<CMat>,
    pub r_label: Option<String>,
    pub l_label: Option<String>,
    /// `l ≅ conj(r)`.
    pub kogut_susskind: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaugeHilbert {
    /// Orthonormal basis of the span of the vectors `(B^k_{pq})_k`.
    pub support: CMat,
    pub sectors: Vec<GaugeSector>,
    pub commutation_residual: f64,
}

impl GaugeHilbert {
    pub fn kogut_susskind(&self) -> bool {
        !self.sectors.is_empty() && self.sectors.iter().all(|s| s.kogut_susskind)
    }
}

fn conj_all(mats: &[CMat]) -> Vec<CMat> {
    mats.iter().map(|m| m.map(|z| z.conj())).collect()
}

/// Irreducible sets of equal size with a one-dimensional intertwiner space.
fn equivalent(a: &[CMat], b: &[CMat]) -> bool {
    a[0].nrows() == b[0].nrows() && intertwiner_basis(a, b).len() == 1
}

fn first_irreducible(mats: &[CMat], rng: &mut ChaCha8Rng) -> Result<Vec<CMat>> {
    let parts = invariant::irreducible_components(mats, mats[0].nrows(), rng)?;
    let p = &parts[0];
    Ok(mats.iter().map(|m| p.adjoint() * m * p).collect())
}

fn label(catalog: Option<&Catalog>, mats: &[CMat]) -> Option<String> {
    let cat = catalog?;
    if mats.len() != cat.group.order() {
        return None;
    }
    cat.identify(&Rep::from_samples(mats.to_vec())).map(|irr| irr.label.clone())
}

/// Decomposes the physical space reached by `B` into sectors on which
/// `R ≅ 𝟙 ⊗ D^{r_k}` and `L ≅ D^{l_k} ⊗ 𝟙`.
pub fn analyze_gauge_hilbert(
    b: &MpsTensor,
    r: &Rep,
    l: &Rep,
    x: &[CMat],
    y: &[CMat],
    catalog: Option<&Catalog>,
    seed: u64,
) -> Result<GaugeHilbert> {
    let rel = verify_relation_b(b, r, l, x, y)?;
    if !(rel.max_residual <= 1e-9) {
        return Err(Error::RelationFailed(format!("B relation residual {:.3e}", rel.max_residual)));
    }
    let db = b.phys_dim();
    let (d2, d1) = (b.left_dim(), b.right_dim());
    let mut vecs = Vec::with_capacity(d1 * d2);
    for p in 0..d2 {
        for q in 0..d1 {
            vecs.push(CVec::from_fn(db, |k, _| b.matrix(k)[(p, q)]));
        }
    }
    let w = linalg::column_space(&linalg::columns(db, &vecs), RANK_TOL);
    if w.ncols() == 0 {
        return Err(Error::NotDecomposable("B vanishes".into()));
    }
    let restrict = |m: &CMat| -> Result<CMat> {
        let mw = m * &w;
        let res = w.adjoint() * &mw;
        let leak = (&mw - &w * &res).norm();
        if leak > 1e-8 * m.norm().max(1.0) {
            return Err(Error::NotDecomposable(format!("support of B is not invariant (leak {leak:.3e})")));
        }
        Ok(res)
    };
    let r_res = r.matrices().iter().map(restrict).collect::<Result<Vec<_>>>()?;
    let l_res = l.matrices().iter().map(restrict).collect::<Result<Vec<_>>>()?;
    let mut commutation_residual: f64 = 0.0;
    for rg in &r_res {
        for lh in &l_res {
            commutation_residual = commutation_residual.max(linalg::commutator(rg, lh).norm());
        }
    }
    if commutation_residual > 1e-8 {
        return Err(Error::NotDecomposable(format!("[R(g), L(h)] = {commutation_residual:.3e} on the support")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let joint: Vec<CMat> = r_res.iter().chain(&l_res).cloned().collect();
    let parts = invariant::irreducible_components(&joint, w.ncols(), &mut rng)?;
    let mut sectors = Vec::with_capacity(parts.len());
    for s in parts {
        let rk: Vec<CMat> = r_res.iter().map(|m| s.adjoint() * m * &s).collect();
        let lk: Vec<CMat> = l_res.iter().map(|m| s.adjoint() * m * &s).collect();
        let r_irrep = first_irreducible(&rk, &mut rng)?;
        let l_irrep = first_irreducible(&lk, &mut rng)?;
        if r_irrep[0].nrows() * l_irrep[0].nrows() != s.ncols() {
            return Err(Error::NotDecomposable(format!(
                "sector of dimension {} is not a product of {} and {}",
                s.ncols(),
                l_irrep[0].nrows(),
                r_irrep[0].nrows()
            )));
        }
        let kogut_susskind = equivalent(&l_irrep, &conj_all(&r_irrep));
        sectors.push(GaugeSector {
            basis: &w * &s,
            r_label: label(catalog, &r_irrep),
            l_label: label(catalog, &l_irrep),
            r_irrep,
            l_irrep,
            kogut_susskind,
        });
    }
    Ok(GaugeHilbert { support: w, sectors, commutation_residual })
}

#[derive(Debug, Clone, PartialEq)]
pub enum BBlockKind {
    /// Norm below `1e-12 ‖B‖`.
    Zero,
    /// Irreps match; `constant` is `|c|` in `c |m⟩⟨n|` and
    /// `proportionality_residual` measures the deviation from that form.
    Matched { constant: f64, proportionality_residual: f64 },
    /// Nonzero although the irreps do not match.
    Mismatched,
}

/// The `(a, b)` virtual block of `B` projected to physical sector `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct BBlock {
    pub sector: usize,
    /// Irreducible block of `Y` (left virtual space of `B`).
    pub y_block: usize,
    /// Irreducible block of `X` (right virtual space of `B`).
    pub x_block: usize,
    pub norm: f64,
    pub kind: BBlockKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BStructure {
    pub hilbert: GaugeHilbert,
    pub blocks: Vec<BBlock>,
    /// Every sector is either matched by a pair of virtual blocks or
    /// carries no weight, and no mismatched block is nonzero.
    pub condition1: bool,
    /// Every `Y` block has a sector with `l_k ≅ conj(Y^a)`.
    pub condition2: bool,
    /// Every `X` block has a sector with `r_k ≅ X^b`.
    pub condition3: bool,
    /// Conditions 2 or 3 fail, which is impossible when `AB` and `BA` are
    /// normal.
    pub normality_contradiction: bool,
    pub violations: Vec<String>,
}

fn blocks_of(mats: &[CMat], rng: &mut ChaCha8Rng) -> Result<(Vec<CMat>, Vec<Vec<CMat>>)> {
    let parts = invariant::irreducible_components(mats, mats[0].nrows(), rng)?;
    let irreps = parts.iter().map(|p| mats.iter().map(|m| p.adjoint() * m * p).collect()).collect();
    Ok((parts, irreps))
}

/// Matches the irreducible blocks of unitary `X`, `Y` against the physical
/// sectors of `B` and classifies every projected block.
pub fn analyze_b_structure(b: &MpsTensor, r: &Rep, l: &Rep, x: &[CMat], y: &[CMat], seed: u64) -> Result<BStructure> {
    let hilbert = analyze_gauge_hilbert(b, r, l, x, y, None, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let (q_parts, x_irreps) = blocks_of(x, &mut rng)?;
    let (p_parts, y_irreps) = blocks_of(y, &mut rng)?;
    let y_conj: Vec<Vec<CMat>> = y_irreps.iter().map(|m| conj_all(m)).collect();
    let zero_tol = 1e-12 * b.norm();
    let mut blocks = Vec::new();
    let mut violations = Vec::new();
    let mut condition1 = true;
    for (k, sector) in hilbert.sectors.iter().enumerate() {
        let nk = sector.basis.ncols();
        let projected: Vec<CMat> = (0..nk)
            .map(|s| {
                let mut acc = linalg::zeros(b.left_dim(), b.right_dim());
                for (i, m) in b.matrices().iter().enumerate() {
                    acc += m * sector.basis[(i, s)].conj();
                }
                acc
            })
            .collect();
        let mut sector_weight = false;
        let mut sector_matched = false;
        for (a, p) in p_parts.iter().enumerate() {
            for (bi, q) in q_parts.iter().enumerate() {
                let sub: Vec<CMat> = projected.iter().map(|m| p.adjoint() * m * q).collect();
                let norm = linalg::sqrt(sub.iter().map(|m| m.norm_squared()).sum());
                let matched = equivalent(&sector.r_irrep, &x_irreps[bi]) && equivalent(&sector.l_irrep, &y_conj[a]);
                let kind = if norm <= zero_tol {
                    BBlockKind::Zero
                } else if matched {
                    sector_matched = true;
                    let (da, db) = (p.ncols(), q.ncols());
                    let constant = linalg::sqrt(norm * norm / nk as f64);
                    let proportionality_residual = if da * db != nk {
                        f64::INFINITY
                    } else {
                        let gram = CMat::from_fn(nk, nk, |s, t| sub[s].dotc(&sub[t]));
                        let target = linalg::identity(nk) * c(constant * constant, 0.0);
                        (gram - target).norm() / (constant * constant)
                    };
                    BBlockKind::Matched { constant, proportionality_residual }
                } else {
                    violations
                        .push(format!("sector {k}, blocks ({a}, {bi}): nonzero block between inequivalent irreps"));
                    condition1 = false;
                    BBlockKind::Mismatched
                };
                sector_weight |= norm > zero_tol;
                blocks.push(BBlock { sector: k, y_block: a, x_block: bi, norm, kind });
            }
        }
        if sector_weight && !sector_matched {
            condition1 = false;
            violations.push(format!("sector {k} carries weight without a matching pair of virtual blocks"));
        }
    }
    let mut condition2 = true;
    for (a, yc) in y_conj.iter().enumerate() {
        if !hilbert.sectors.iter().any(|s| equivalent(&s.l_irrep, yc)) {
            condition2 = false;
            violations.push(format!("Y block {a}: no sector with l_k equivalent to its conjugate"));
        }
    }
    let mut condition3 = true;
    for (bi, xi) in x_irreps.iter().enumerate() {
        if !hilbert.sectors.iter().any(|s| equivalent(&s.r_irrep, xi)) {
            condition3 = false;
            violations.push(format!("X block {bi}: no sector with r_k equivalent to it"));
        }
    }
    Ok(BStructure {
        hilbert,
        blocks,
        condition1,
        condition2,
        condition3,
        normality_contradiction: !(condition2 && condition3),
        violations,
    })
}
