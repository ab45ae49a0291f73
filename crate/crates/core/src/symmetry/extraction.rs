use alloc::format;
use alloc::vec::Vec;

use super::relations::{verify_relation_a, verify_relation_b};
use crate::error::{Error, Result};
use crate::group_rep::{FiniteGroup, Multiplier, Rep};
use crate::linalg::{self, CMat, C64};
use crate::mpv_core::{
    find_gauge_between, is_normal, normalize_similarity, similarity_between, MpsTensor, Normality, TensorPair,
};

/// Virtual representations of a pair `(A, B)` with a local symmetry.
#[derive(Debug, Clone, PartialEq)]
pub struct VirtualRep {
    /// On the left virtual space of `A`.
    pub x: Vec<CMat>,
    /// On the right virtual space of `A`.
    pub y: Vec<CMat>,
    pub x_multiplier: Option<Multiplier>,
    pub y_multiplier: Option<Multiplier>,
    /// Largest residual of the `A` and `B` transformation laws.
    pub relation_residual: f64,
}

/// Multiplier of possibly non-unitary matrices `M(g)M(h) ≈ γ(g,h) M(gh)`,
/// with the largest relative residual.
pub fn projective_multiplier(mats: &[CMat], group: &FiniteGroup) -> Result<(Multiplier, f64)> {
    let n = group.order();
    if mats.len() != n {
        return Err(Error::GroupMismatch);
    }
    let mut values = Vec::with_capacity(n * n);
    let mut worst: f64 = 0.0;
    for g in 0..n {
        for h in 0..n {
            let lhs = &mats[g] * &mats[h];
            let rhs = &mats[group.mul(g, h)];
            let gamma = linalg::best_scalar(&lhs, rhs);
            worst = worst.max(linalg::rel_diff(&lhs, &(rhs * gamma)));
            values.push(gamma);
        }
    }
    let m = Multiplier::new(group, values, 1e-6).map_err(|e| Error::ExtractionDegenerate(format!("{e}")))?;
    Ok((m, worst))
}

fn require_normal(t: &MpsTensor, what: &str) -> Result<()> {
    match is_normal(t, true).status {
        Normality::Normal => Ok(()),
        Normality::NotNormal => Err(Error::NotNormal(format!("{what} is not normal"))),
        Normality::Unknown => Err(Error::NotNormal(format!("{what} could not be certified normal"))),
    }
}

/// Reads off `X(g)` and `Y(g)` from a pair with `AB`, `BA` normal and a
/// local `R ⊗ Θ ⊗ L` symmetry.
///
/// `(Θ ⊗ LR)·AB = X⁻¹ (AB) X` and `(LR ⊗ Θ)·BA = Y⁻¹ (BA) Y` fix both up to
/// a scalar, which `R·B = B X` and `L·B = Y⁻¹ B` then pin down.
pub fn extract_virtual_rep(
    pair: &TensorPair,
    r: &Rep,
    theta: &Rep,
    l: &Rep,
    group: Option<&FiniteGroup>,
    tolerance: f64,
) -> Result<VirtualRep> {
    super::checks::check_pair_reps(pair, r, theta, l)?;
    let ab = pair.ab();
    let ba = pair.ba();
    require_normal(&ab, "AB")?;
    require_normal(&ba, "BA")?;
    let mut xs = Vec::with_capacity(theta.len());
    let mut ys = Vec::with_capacity(theta.len());
    for g in 0..theta.len() {
        let lr = l.matrix(g) * r.matrix(g);
        let degenerate = |what: &str| Error::ExtractionDegenerate(format!("{what} at element {g}"));
        let t_ab = ab.act(&linalg::kron(theta.matrix(g), &lr))?;
        let (_, xp) =
            similarity_between(&t_ab, &ab).ok_or_else(|| degenerate("transformed AB is not similar to AB"))?;
        let rb = pair.b.act(r.matrix(g))?;
        let bx = pair.b.map(|m| m * &xp);
        let s = tensor_scalar(&rb, &bx);
        if s.norm() == 0.0 {
            return Err(degenerate("B X vanishes"));
        }
        xs.push(xp * s);

        let t_ba = ba.act(&linalg::kron(&lr, theta.matrix(g)))?;
        let (_, yp) =
            similarity_between(&t_ba, &ba).ok_or_else(|| degenerate("transformed BA is not similar to BA"))?;
        let yp_inv = linalg::inverse(&yp).ok_or_else(|| degenerate("singular Y"))?;
        let lb = pair.b.act(l.matrix(g))?;
        let yb = pair.b.map(|m| &yp_inv * m);
        let u = tensor_scalar(&lb, &yb);
        if u.norm() == 0.0 {
            return Err(degenerate("Y⁻¹ B vanishes"));
        }
        ys.push(yp / u);
    }
    let res_a = verify_relation_a(&pair.a, theta, &xs, &ys)?;
    let res_b = verify_relation_b(&pair.b, r, l, &xs, &ys)?;
    let relation_residual = res_a.max_residual.max(res_b.max_residual);
    if !(relation_residual <= tolerance) {
        return Err(Error::ExtractionDegenerate(format!(
            "extracted representations violate the transformation laws (residual {relation_residual:.3e})"
        )));
    }
    let (x_multiplier, y_multiplier) = match group {
        Some(grp) => (Some(projective_multiplier(&xs, grp)?.0), Some(projective_multiplier(&ys, grp)?.0)),
        None => (None, None),
    };
    Ok(VirtualRep { x: xs, y: ys, x_multiplier, y_multiplier, relation_residual })
}

/// Best `s` with `a ≈ s b` over all matrices of two tensors.
fn tensor_scalar(a: &MpsTensor, b: &MpsTensor) -> C64 {
    let num: C64 = a.matrices().iter().zip(b.matrices()).map(|(p, q)| q.dotc(p)).sum();
    let den: f64 = b.matrices().iter().map(|q| q.norm_squared()).sum();
    if den == 0.0 {
        linalg::ZERO
    } else {
        num / den
    }
}

/// Virtual action of a global symmetry on a canonical-form tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalVirtualRep {
    /// `X(g)` with `|det X| = 1` and `arg det X ∈ [0, 2π/D)`.
    pub x: Vec<CMat>,
    pub block_dims: Vec<usize>,
    /// Per element: block `j` is carried to block `permutations[g][j]`.
    pub permutations: Vec<Vec<usize>>,
    /// Per element and block: the phase in front of the block relation.
    pub phases: Vec<Vec<C64>>,
    /// Residual of `Θ(g)·A = X(g)⁻¹ A X(g)` per element.
    pub residuals: Vec<f64>,
    pub x_multiplier: Option<Multiplier>,
}

impl GlobalVirtualRep {
    pub fn permutation_trivial(&self) -> bool {
        self.permutations.iter().all(|p| p.iter().enumerate().all(|(j, &k)| j == k))
    }
}

/// `Θ(g)·A = X(g)⁻¹ A X(g)` (up to block phases and a block permutation)
/// for a canonical-form tensor with a global symmetry.
pub fn extract_global_virtual_rep(
    a: &MpsTensor,
    theta: &Rep,
    group: Option<&FiniteGroup>,
    seed: u64,
) -> Result<GlobalVirtualRep> {
    if theta.dim() != a.phys_dim() {
        return Err(Error::DimMismatch("Θ does not act on the physical space of A".into()));
    }
    let mut x = Vec::new();
    let mut permutations = Vec::new();
    let mut phases = Vec::new();
    let mut residuals = Vec::new();
    let mut block_dims = Vec::new();
    for g in 0..theta.len() {
        let moved = a.act(theta.matrix(g))?;
        let rel = find_gauge_between(a, &moved, seed)?;
        // the determinant convention leaves a D-th root of unity free; the
        // identity is pinned to 𝟙 so that the multiplier is normalised
        let xg = if linalg::rel_diff(theta.matrix(g), &linalg::identity(theta.dim())) <= 1e-14 {
            linalg::identity(a.left_dim())
        } else {
            let inv = linalg::inverse(&rel.x)
                .ok_or_else(|| Error::ExtractionDegenerate(format!("singular gauge at element {g}")))?;
            normalize_similarity(&inv)
        };
        let x_inv = linalg::inverse(&xg).expect("normalised gauge is invertible");
        residuals.push(moved.rel_diff(&a.sandwich(&x_inv, &xg)));
        x.push(xg);
        permutations.push(rel.permutation);
        phases.push(rel.phases);
        block_dims = rel.block_dims;
    }
    let x_multiplier = match group {
        Some(grp) => Some(projective_multiplier(&x, grp)?.0),
        None => None,
    };
    Ok(GlobalVirtualRep { x, block_dims, permutations, phases, residuals, x_multiplier })
}
