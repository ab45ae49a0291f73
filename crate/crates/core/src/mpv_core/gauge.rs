use alloc::format;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::tensor::{contract_mpv_with_limit, vector_rel_diff, MpsTensor, DEFAULT_SIZE_LIMIT};
use super::transfer::{mixed_transfer_matrix, right_fixed_point, spectral_radius, transfer_spectrum};
use crate::error::{Error, Result};
use crate::invariant;
use crate::linalg::{self, c, CMat, C64};

/// `⟨ψ_{t1}^N | ψ_{t2}^N⟩ = Tr((Σ_i conj(t1^i) ⊗ t2^i)^N)`.
pub fn mpv_overlap(t1: &MpsTensor, t2: &MpsTensor, n: usize) -> C64 {
    let e = mixed_transfer_matrix(t1, t2);
    let mut p = e.clone();
    for _ in 1..n {
        p = &p * &e;
    }
    p.trace()
}

/// `‖ψ_{t1}^N − ψ_{t2}^N‖ / ‖ψ_{t1}^N‖` from transfer-matrix overlaps.
/// Resolution is limited to about `1e-8` by cancellation.
pub fn mpv_distance(t1: &MpsTensor, t2: &MpsTensor, n: usize) -> f64 {
    let n11 = mpv_overlap(t1, t1, n).re;
    let n22 = mpv_overlap(t2, t2, n).re;
    let n12 = mpv_overlap(t1, t2, n).re;
    let d2 = (n11 + n22 - 2.0 * n12).max(0.0);
    if n11 > 0.0 {
        linalg::sqrt(d2 / n11)
    } else {
        linalg::sqrt(d2)
    }
}

/// Fixes the free scalar of a similarity: `|det X| = 1` with the argument of
/// `det X` in `[0, 2π/D)`.
pub fn normalize_similarity(x: &CMat) -> CMat {
    let d = x.nrows() as f64;
    let det = x.determinant();
    if det.norm() == 0.0 {
        return x.clone();
    }
    let tau = 2.0 * core::f64::consts::PI;
    let mut arg = det.arg();
    if arg < 0.0 {
        arg += tau;
    }
    let scale = c(linalg::powf(det.norm(), 1.0 / d), 0.0) * c(0.0, arg / d).exp();
    x / scale
}

/// Similarity relating two normal tensors: `(c, X)` with
/// `b1 = c X⁻¹ b2 X`, or `None` when they are inequivalent.
pub fn similarity_between(b1: &MpsTensor, b2: &MpsTensor) -> Option<(C64, CMat)> {
    if b1.left_dim() != b2.left_dim() || b1.phys_dim() != b2.phys_dim() {
        return None;
    }
    let d = b1.left_dim();
    let spec1 = transfer_spectrum(b1).ok()?;
    let r1 = spec1.first()?.norm();
    let r2 = spectral_radius(b2);
    if r1 == 0.0 || r2 == 0.0 {
        return None;
    }
    let f = mixed_transfer_matrix(b1, b2);
    let eig = linalg::eigenvalues_by_modulus(&f).ok()?;
    let lambda = *eig.first()?;
    if lambda.norm() < linalg::sqrt(r1 * r2) * (1.0 - 1e-8) {
        return None;
    }
    let (_, z) = linalg::smallest_singular(&(f - linalg::identity(d * d) * lambda));
    let z = linalg::unvec_c(&z, d, d);
    let rho1 = right_fixed_point(b1, spec1[0]);
    let x = &z * linalg::inverse(&rho1)?;
    let x = normalize_similarity(&x);
    let x_inv = linalg::inverse(&x)?;
    let transformed = b2.sandwich(&x_inv, &x);
    let scale = transformed.matrices().iter().zip(b1.matrices()).map(|(t, b)| t.dotc(b)).sum::<C64>()
        / c(transformed.norm() * transformed.norm(), 0.0);
    if b1.rel_diff(&transformed.scaled(scale)) > 1e-8 {
        return None;
    }
    Some((scale, x))
}

/// How one canonical-form tensor maps onto another.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeRelation {
    /// `t1 = X⁻¹ t2 X` whenever all phases are 1.
    pub x: CMat,
    /// Block `j` of `t1` corresponds to block `permutation[j]` of `t2`.
    pub permutation: Vec<usize>,
    /// `block_j(t1) = phase_j X_j⁻¹ block_{π(j)}(t2) X_j`.
    pub phases: Vec<C64>,
    pub block_gauges: Vec<CMat>,
    /// Bond dimensions of the blocks of `t1`.
    pub block_dims: Vec<usize>,
}

impl GaugeRelation {
    pub fn permutation_is_identity(&self) -> bool {
        self.permutation.iter().enumerate().all(|(j, &k)| j == k)
    }
}

/// Index sets of the finest block-diagonal structure shared by all matrices.
fn sparsity_components(t: &MpsTensor) -> Vec<Vec<usize>> {
    let d = t.left_dim();
    let scale = t.matrices().iter().map(linalg::max_abs).fold(0.0, f64::max);
    let mut parent: Vec<usize> = (0..d).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for m in t.matrices() {
        for a in 0..d {
            for b in 0..d {
                if m[(a, b)].norm() > 1e-12 * scale {
                    let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
                    parent[ra] = rb;
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut roots: Vec<usize> = Vec::new();
    for i in 0..d {
        let r = root(&mut parent, i);
        match roots.iter().position(|&x| x == r) {
            Some(k) => groups[k].push(i),
            None => {
                roots.push(r);
                groups.push(alloc::vec![i]);
            }
        }
    }
    groups
}

/// Orthonormal isometries splitting a canonical-form tensor into its
/// irreducible diagonal blocks. Blocks visible in the sparsity pattern are
/// taken as they are; anything coarser is split numerically and must then be
/// block diagonal.
pub(crate) fn cf_blocks(t: &MpsTensor, seed: u64) -> Result<Vec<CMat>> {
    let d = t.left_dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for group in sparsity_components(t) {
        let sel = CMat::from_fn(d, group.len(), |r, k| if group[k] == r { linalg::ONE } else { linalg::ZERO });
        let sub = t.sandwich(&sel.adjoint(), &sel);
        let parts = invariant::triangularize(sub.matrices(), sub.left_dim(), &mut rng)?;
        if parts.len() > 1 {
            let mut rebuilt: Vec<CMat> = alloc::vec![linalg::zeros(sub.left_dim(), sub.left_dim()); sub.phys_dim()];
            for p in &parts {
                for (acc, m) in rebuilt.iter_mut().zip(sub.matrices()) {
                    *acc += p * (p.adjoint() * m * p) * p.adjoint();
                }
            }
            if MpsTensor::new(rebuilt)?.rel_diff(&sub) > 1e-9 {
                return Err(Error::NotInCF("tensor is not a direct sum of irreducible blocks".into()));
            }
        }
        out.extend(parts.into_iter().map(|p| &sel * p));
    }
    Ok(out)
}

/// Number of sites checked for MPV equality.
pub fn n_check(t: &MpsTensor) -> usize {
    let d = t.left_dim();
    6usize.max(2 * d * d).min(64)
}

/// Finds `X`, the block permutation and phases relating two canonical-form
/// tensors that generate the same vectors.
pub fn find_gauge_between(t1: &MpsTensor, t2: &MpsTensor, seed: u64) -> Result<GaugeRelation> {
    if !t1.is_square() || !t2.is_square() || t1.phys_dim() != t2.phys_dim() {
        return Err(Error::DimMismatch("tensors must be square with equal physical dimension".into()));
    }
    for n in 1..=n_check(t1) {
        let distance = if (t1.phys_dim() as u128).pow(n.min(20) as u32) <= 4096 {
            let a = contract_mpv_with_limit(t1, n, DEFAULT_SIZE_LIMIT)?;
            let b = contract_mpv_with_limit(t2, n, DEFAULT_SIZE_LIMIT)?;
            vector_rel_diff(&b, &a)
        } else {
            mpv_distance(t1, t2, n)
        };
        if distance > 1e-6 {
            return Err(Error::NotEquivalent { n, distance });
        }
    }
    if t1.left_dim() != t2.left_dim() {
        return Err(Error::GaugeNotFound("bond dimensions differ".into()));
    }
    let p1 = cf_blocks(t1, seed)?;
    let p2 = cf_blocks(t2, seed.wrapping_add(1))?;
    let b1: Vec<MpsTensor> = p1.iter().map(|p| t1.sandwich(&p.adjoint(), p)).collect();
    let b2: Vec<MpsTensor> = p2.iter().map(|p| t2.sandwich(&p.adjoint(), p)).collect();
    let mut used = alloc::vec![false; b2.len()];
    let mut permutation = Vec::new();
    let mut phases = Vec::new();
    let mut gauges = Vec::new();
    for (j, blk) in b1.iter().enumerate() {
        let zero1 = blk.norm() == 0.0 || spectral_radius(blk) <= 1e-14;
        let found = (0..b2.len()).filter(|&k| !used[k]).find_map(|k| {
            if b2[k].left_dim() != blk.left_dim() {
                return None;
            }
            let zero2 = b2[k].norm() == 0.0 || spectral_radius(&b2[k]) <= 1e-14;
            if zero1 || zero2 {
                return (zero1 && zero2).then(|| (k, linalg::ONE, linalg::identity(blk.left_dim())));
            }
            similarity_between(blk, &b2[k]).map(|(s, x)| (k, s, x))
        });
        let (k, s, x) = found.ok_or_else(|| Error::GaugeNotFound(format!("no partner for block {j}")))?;
        used[k] = true;
        permutation.push(k);
        phases.push(s);
        gauges.push(x);
    }
    let d = t1.left_dim();
    let mut x_full = linalg::zeros(d, d);
    for (j, x) in gauges.iter().enumerate() {
        x_full += &p2[permutation[j]] * x * p1[j].adjoint();
    }
    Ok(GaugeRelation {
        x: x_full,
        permutation,
        phases,
        block_gauges: gauges,
        block_dims: p1.iter().map(|p| p.ncols()).collect(),
    })
}
