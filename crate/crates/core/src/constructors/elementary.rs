use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::group_rep::{conjugate_rep, Rep};
use crate::linalg::{self, c, CMat, RANK_TOL};
use crate::mpv_core::MpsTensor;

/// `B^{m,n} = |m⟩⟨n|` with `R = 𝟙 ⊗ D^r`, `L = D^l ⊗ 𝟙`, `X = D^r` and
/// `Y = conj(D^l)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementaryBlock {
    pub b: MpsTensor,
    pub r: Rep,
    pub l: Rep,
    pub x: Vec<CMat>,
    pub y: Vec<CMat>,
}

/// Elementary gauge-field block of shape `dim(l) × dim(r)`, physical index
/// `m·dim(r) + n`. The multipliers of `l` and `r` must be inverse.
pub fn elementary_b_block(l: &Rep, r: &Rep) -> Result<ElementaryBlock> {
    if l.len() != r.len() {
        return Err(Error::GroupMismatch);
    }
    if let (Some(a), Some(b)) = (l.multiplier(), r.multiplier()) {
        if !a.product(b).is_trivial(1e-9) {
            return Err(Error::MultiplierMismatch);
        }
    }
    let (dl, dr) = (l.dim(), r.dim());
    let b = MpsTensor::from_fn(dl * dr, dl, dr, |k, p, q| if k == p * dr + q { linalg::ONE } else { linalg::ZERO });
    let rm: Vec<CMat> = r.matrices().iter().map(|m| linalg::kron(&linalg::identity(dl), m)).collect();
    let lm: Vec<CMat> = l.matrices().iter().map(|m| linalg::kron(m, &linalg::identity(dr))).collect();
    Ok(ElementaryBlock {
        b,
        r: Rep::from_parts(rm, r.multiplier().cloned()),
        l: Rep::from_parts(lm, l.multiplier().cloned()),
        x: r.matrices().to_vec(),
        y: conjugate_rep(l).matrices().to_vec(),
    })
}

/// Solution of `R(g)·B = B X(g)`, `L(g)·B = Y(g)⁻¹ B` for given
/// representations.
#[derive(Debug, Clone, PartialEq)]
pub struct BBlockSolution {
    /// Normalised to `‖B‖ = √(physical dimension)` with the first nonzero
    /// entry real and positive; the zero tensor when no solution exists.
    pub b: MpsTensor,
    /// Dimension of the solution space.
    pub solution_dim: usize,
}

impl BBlockSolution {
    pub fn vanishes(&self) -> bool {
        self.solution_dim == 0
    }
}

/// Solves the gauge-field transformation laws for `B` directly. For
/// irreducible `X`, `Y` and product-form `R`, `L` the solution space is one
/// dimensional exactly when the irreps match, and zero otherwise.
pub fn solve_b_block(r: &Rep, l: &Rep, x: &[CMat], y: &[CMat]) -> Result<BBlockSolution> {
    let n_el = r.len();
    if l.len() != n_el || x.len() != n_el || y.len() != n_el {
        return Err(Error::GroupMismatch);
    }
    if r.dim() != l.dim() {
        return Err(Error::DimMismatch("R and L act on different spaces".into()));
    }
    let d = r.dim();
    let (dy, dx) = (y[0].nrows(), x[0].nrows());
    let n = d * dy * dx;
    let (iy, ix) = (linalg::identity(dy), linalg::identity(dx));
    let mut stacked = linalg::zeros(2 * n_el * n, n);
    for g in 0..n_el {
        // vec index (k·dy + p)·dx + q
        let right = linalg::kron(&linalg::kron(r.matrix(g), &iy), &ix)
            - linalg::kron(&linalg::identity(d * dy), &x[g].transpose());
        let left = linalg::kron(&linalg::kron(l.matrix(g), &y[g]), &ix) - linalg::identity(n);
        stacked.view_mut((2 * g * n, 0), (n, n)).copy_from(&right);
        stacked.view_mut(((2 * g + 1) * n, 0), (n, n)).copy_from(&left);
    }
    let ns = linalg::canonical_basis(&linalg::null_space(&stacked, RANK_TOL));
    if ns.ncols() == 0 {
        return Ok(BBlockSolution { b: MpsTensor::zeros(d, dy, dx), solution_dim: 0 });
    }
    let mut v = ns.column(0).into_owned();
    linalg::fix_phase(&mut v);
    let scale = linalg::sqrt(d as f64) / v.norm();
    let b = MpsTensor::from_fn(d, dy, dx, |k, p, q| v[(k * dy + p) * dx + q] * c(scale, 0.0));
    Ok(BBlockSolution { b, solution_dim: ns.ncols() })
}
