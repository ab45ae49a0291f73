use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::gauge::similarity_between;
use super::tensor::{block_with_limit, contract_mpv, vector_rel_diff, MpsTensor, DEFAULT_SIZE_LIMIT};
use super::transfer::{is_normal, left_fixed_point, peripheral_count, right_fixed_point, transfer_spectrum, Normality};
use crate::error::{Error, Result};
use crate::invariant;
use crate::linalg::{self, c, CMat, C64, ONE, ZERO};

/// Blocks whose transfer radius is below this fraction of the largest one
/// are treated as zero.
const DROP_TOL: f64 = 1e-12;

/// A normal tensor brought to trace-preserving form with diagonal fixed
/// point: `input = scale · G⁻¹ · tensor · G`.
#[derive(Debug, Clone, PartialEq)]
pub struct CfiiGauge {
    pub scale: f64,
    pub similarity: CMat,
    pub tensor: MpsTensor,
    /// Diagonal of the unit-trace right fixed point, descending.
    pub fixed_point: Vec<f64>,
}

/// Rescales a normal tensor to transfer radius 1, makes its CP map trace
/// preserving and diagonalises the right fixed point.
pub fn cfii_gauge(t: &MpsTensor) -> Result<CfiiGauge> {
    let spectrum = transfer_spectrum(t)?;
    let r = spectrum.first().map(|z| z.norm()).unwrap_or(0.0);
    if r == 0.0 {
        return Err(Error::NotNormal("transfer map is nilpotent".into()));
    }
    let nu = linalg::sqrt(r);
    let a1 = t.scaled(c(1.0 / nu, 0.0));
    let sigma = left_fixed_point(&a1, ONE);
    let (svals, _) = linalg::eigh(&sigma);
    if svals[0] <= linalg::RANK_TOL * svals[svals.len() - 1] {
        return Err(Error::NotNormal("left fixed point is not full rank".into()));
    }
    let s = linalg::sqrt_psd(&sigma);
    let s_inv = linalg::inv_sqrt_pd(&sigma);
    let a2 = a1.sandwich(&s, &s_inv);
    let rho = right_fixed_point(&a2, ONE);
    let (vals, vecs) = linalg::eigh(&rho);
    let d = vals.len();
    let order: Vec<usize> = (0..d).rev().collect();
    let vals: Vec<f64> = order.iter().map(|&k| vals[k]).collect();
    let mut u = linalg::zeros(d, d);
    for (j, &k) in order.iter().enumerate() {
        u.set_column(j, &vecs.column(k));
    }
    let top = vals[0].abs().max(f64::MIN_POSITIVE);
    let mut start = 0;
    while start < d {
        let mut end = start + 1;
        while end < d && (vals[start] - vals[end]).abs() <= 1e-9 * top {
            end += 1;
        }
        let group = u.columns(start, end - start).into_owned();
        let canon = linalg::canonical_basis(&group);
        u.columns_mut(start, end - start).copy_from(&canon);
        start = end;
    }
    if vals[d - 1] <= linalg::RANK_TOL * top {
        return Err(Error::NotNormal("right fixed point is not full rank".into()));
    }
    let total: f64 = vals.iter().sum();
    let a3 = a2.sandwich(&u.adjoint(), &u);
    Ok(CfiiGauge {
        scale: nu,
        similarity: u.adjoint() * s,
        tensor: a3,
        fixed_point: vals.iter().map(|v| v / total).collect(),
    })
}

/// One occurrence `weight · V⁻¹ A_j V` of a basis tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockCopy {
    pub weight: C64,
    pub similarity: CMat,
}

/// A basis tensor together with all of its occurrences.
#[derive(Debug, Clone, PartialEq)]
pub struct BntBlock {
    pub tensor: MpsTensor,
    pub fixed_point: Vec<f64>,
    pub copies: Vec<BlockCopy>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalFormResult {
    pub blocks: Vec<BntBlock>,
    pub blocking_factor: usize,
    /// Physical dimension after blocking.
    pub phys_dim: usize,
}

impl CanonicalFormResult {
    /// Block-diagonal tensor `⊕_j ⊕_q μ_{j,q} V_{j,q}⁻¹ A_j V_{j,q}`, or
    /// `None` when every block vanished.
    pub fn reassemble(&self) -> Option<MpsTensor> {
        let mut parts: Vec<MpsTensor> = Vec::new();
        for blk in &self.blocks {
            for copy in &blk.copies {
                let v_inv = linalg::inverse(&copy.similarity)?;
                parts.push(blk.tensor.sandwich(&v_inv, &copy.similarity).scaled(copy.weight));
            }
        }
        let mut iter = parts.into_iter();
        let first = iter.next()?;
        Some(iter.fold(first, |acc, p| acc.direct_sum(&p).expect("equal physical dimensions")))
    }

    /// Number of normal blocks counted with multiplicity.
    pub fn block_count(&self) -> usize {
        self.blocks.iter().map(|b| b.copies.len()).sum()
    }

    /// `Σ_j Σ_q μ_{j,q}^N ψ_{A_j}^N`.
    pub fn coefficients(&self, n: usize) -> Result<Vec<C64>> {
        let mut out: Option<Vec<C64>> = None;
        for blk in &self.blocks {
            let psi = contract_mpv(&blk.tensor, n)?;
            let weight: C64 = blk.copies.iter().map(|q| q.weight.powu(n as u32)).sum();
            let acc = out.get_or_insert_with(|| alloc::vec![ZERO; psi.len()]);
            for (o, p) in acc.iter_mut().zip(&psi) {
                *o += weight * p;
            }
        }
        match out {
            Some(v) => Ok(v),
            None => {
                let probe = MpsTensor::zeros(self.phys_dim, 1, 1);
                contract_mpv(&probe, n)
            }
        }
    }

    /// Largest relative deviation from the blocked input over `1 ≤ N ≤ n_max`.
    pub fn verify(&self, original: &MpsTensor, n_max: usize) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for n in 1..=n_max {
            let expected = contract_mpv(original, self.blocking_factor * n)?;
            let got = self.coefficients(n)?;
            worst = worst.max(vector_rel_diff(&got, &expected));
        }
        Ok(worst)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// Period of an irreducible block: the number of peripheral eigenvalues,
/// which must be the rotated `p`-th roots of the spectral radius.
pub(crate) fn period(t: &MpsTensor) -> Result<usize> {
    let spectrum = transfer_spectrum(t)?;
    let r = spectrum[0].norm();
    let p = peripheral_count(&spectrum);
    if p == 0 {
        return Ok(1);
    }
    let rp = linalg::powi(r, p as i32);
    for z in &spectrum[..p] {
        let dev = (z.powu(p as u32) - c(rp, 0.0)).norm() / rp;
        if dev > 1e-6 {
            return Err(Error::NumericalDegeneracy { gap: dev });
        }
    }
    Ok(p)
}

fn diagonal_blocks(t: &MpsTensor, rng: &mut ChaCha8Rng) -> Result<Vec<MpsTensor>> {
    let parts = invariant::triangularize(t.matrices(), t.left_dim(), rng)?;
    Ok(parts.iter().map(|p| t.sandwich(&p.adjoint(), p)).collect())
}

fn radius(t: &MpsTensor) -> Result<f64> {
    Ok(transfer_spectrum(t)?.first().map(|z| z.norm()).unwrap_or(0.0))
}

/// Brings `t` (after blocking when its transfer map has periodic blocks)
/// to a direct sum of weighted, similarity-conjugated normal tensors in
/// trace-preserving form, grouped into inequivalent basis tensors.
pub fn canonical_form(t: &MpsTensor, seed: u64) -> Result<CanonicalFormResult> {
    canonical_form_with_limit(t, seed, DEFAULT_SIZE_LIMIT)
}

pub fn canonical_form_with_limit(t: &MpsTensor, seed: u64, limit: u128) -> Result<CanonicalFormResult> {
    if !t.is_square() {
        return Err(Error::DimMismatch("canonical form needs a square tensor".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let diag = diagonal_blocks(t, &mut rng)?;
    let radii = diag.iter().map(radius).collect::<Result<Vec<f64>>>()?;
    let max_r = radii.iter().copied().fold(0.0, f64::max);
    let kept: Vec<MpsTensor> =
        diag.into_iter().zip(&radii).filter(|(_, &r)| max_r > 0.0 && r > DROP_TOL * max_r).map(|(b, _)| b).collect();
    let mut b = 1;
    for blk in &kept {
        b = lcm(b, period(blk)?);
    }
    let mut normal = Vec::new();
    for blk in &kept {
        if b == 1 {
            normal.push(blk.clone());
            continue;
        }
        let pieces = diagonal_blocks(&block_with_limit(blk, b, limit)?, &mut rng)?;
        for piece in pieces {
            if radius(&piece)? > DROP_TOL * linalg::powi(max_r, b as i32) {
                normal.push(piece);
            }
        }
    }
    let mut blocks: Vec<BntBlock> = Vec::new();
    for blk in &normal {
        let g = cfii_gauge(blk)?;
        let check = is_normal(&g.tensor, false);
        if check.status == Normality::NotNormal {
            return Err(Error::NumericalDegeneracy { gap: check.fixed_point_min });
        }
        let matched =
            blocks.iter_mut().find_map(|rep| similarity_between(&g.tensor, &rep.tensor).map(|(s, x)| (rep, s, x)));
        match matched {
            Some((rep, s, x)) => {
                rep.copies.push(BlockCopy { weight: c(g.scale, 0.0) * s, similarity: x * &g.similarity })
            }
            None => blocks.push(BntBlock {
                tensor: g.tensor.clone(),
                fixed_point: g.fixed_point.clone(),
                copies: alloc::vec![BlockCopy { weight: c(g.scale, 0.0), similarity: g.similarity.clone() }],
            }),
        }
    }
    Ok(CanonicalFormResult { blocks, blocking_factor: b, phys_dim: t.phys_dim().pow(b as u32) })
}
