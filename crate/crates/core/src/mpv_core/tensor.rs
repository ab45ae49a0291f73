use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, C64, ZERO};

/// Default cap on the number of coefficients a contraction may produce.
pub const DEFAULT_SIZE_LIMIT: u128 = 1 << 24;

/// Rank-3 tensor stored as `d` matrices of shape `D1 × D2`.
#[derive(Debug, Clone, PartialEq)]
pub struct MpsTensor {
    matrices: Vec<CMat>,
    left: usize,
    right: usize,
}

impl MpsTensor {
    pub fn new(matrices: Vec<CMat>) -> Result<MpsTensor> {
        let first =
            matrices.first().ok_or_else(|| Error::DimMismatch("tensor needs at least one physical index".into()))?;
        let (left, right) = (first.nrows(), first.ncols());
        if left == 0 || right == 0 {
            return Err(Error::DimMismatch("bond dimensions must be positive".into()));
        }
        for (i, m) in matrices.iter().enumerate() {
            if m.nrows() != left || m.ncols() != right {
                return Err(Error::DimMismatch(format!(
                    "matrix {i} is {}x{}, expected {left}x{right}",
                    m.nrows(),
                    m.ncols()
                )));
            }
            if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::DimMismatch(format!("matrix {i} has non-finite entries")));
            }
        }
        Ok(MpsTensor { matrices, left, right })
    }

    pub fn zeros(phys: usize, left: usize, right: usize) -> MpsTensor {
        MpsTensor { matrices: alloc::vec![linalg::zeros(left, right); phys], left, right }
    }

    /// Builds `A^i_{ab} = f(i, a, b)`.
    pub fn from_fn(phys: usize, left: usize, right: usize, f: impl Fn(usize, usize, usize) -> C64) -> MpsTensor {
        let matrices = (0..phys).map(|i| CMat::from_fn(left, right, |a, b| f(i, a, b))).collect();
        MpsTensor { matrices, left, right }
    }

    pub fn phys_dim(&self) -> usize {
        self.matrices.len()
    }

    pub fn left_dim(&self) -> usize {
        self.left
    }

    pub fn right_dim(&self) -> usize {
        self.right
    }

    pub fn is_square(&self) -> bool {
        self.left == self.right
    }

    pub fn matrices(&self) -> &[CMat] {
        &self.matrices
    }

    pub fn matrix(&self, i: usize) -> &CMat {
        &self.matrices[i]
    }

    pub fn into_matrices(self) -> Vec<CMat> {
        self.matrices
    }

    pub fn norm(&self) -> f64 {
        linalg::sqrt(self.matrices.iter().map(|m| m.norm_squared()).sum())
    }

    pub fn scaled(&self, s: C64) -> MpsTensor {
        self.map(|m| m * s)
    }

    pub fn map(&self, f: impl Fn(&CMat) -> CMat) -> MpsTensor {
        let matrices: Vec<CMat> = self.matrices.iter().map(f).collect();
        let (left, right) = (matrices[0].nrows(), matrices[0].ncols());
        MpsTensor { matrices, left, right }
    }

    /// `left · A^i · right` for every `i`.
    pub fn sandwich(&self, left: &CMat, right: &CMat) -> MpsTensor {
        self.map(|m| left * m * right)
    }

    /// Physical action `Σ_{i'} op_{i i'} A^{i'}`.
    pub fn act(&self, op: &CMat) -> Result<MpsTensor> {
        if op.ncols() != self.phys_dim() {
            return Err(Error::DimMismatch(format!(
                "operator has {} columns, tensor has physical dimension {}",
                op.ncols(),
                self.phys_dim()
            )));
        }
        let matrices = (0..op.nrows())
            .map(|i| {
                let mut acc = linalg::zeros(self.left, self.right);
                for (k, m) in self.matrices.iter().enumerate() {
                    let w = op[(i, k)];
                    if w != ZERO {
                        acc += m * w;
                    }
                }
                acc
            })
            .collect();
        Ok(MpsTensor { matrices, left: self.left, right: self.right })
    }

    /// Tensor with matrices `A^i B^j`, physical index `i·d_B + j`.
    pub fn product(&self, other: &MpsTensor) -> Result<MpsTensor> {
        if self.right != other.left {
            return Err(Error::DimMismatch(format!(
                "cannot chain right dimension {} with left dimension {}",
                self.right, other.left
            )));
        }
        let mut matrices = Vec::with_capacity(self.phys_dim() * other.phys_dim());
        for a in &self.matrices {
            for b in &other.matrices {
                matrices.push(a * b);
            }
        }
        Ok(MpsTensor { matrices, left: self.left, right: other.right })
    }

    /// Block-diagonal sum over a shared physical space.
    pub fn direct_sum(&self, other: &MpsTensor) -> Result<MpsTensor> {
        if self.phys_dim() != other.phys_dim() {
            return Err(Error::DimMismatch("direct sum needs equal physical dimensions".into()));
        }
        let matrices = self.matrices.iter().zip(&other.matrices).map(|(a, b)| linalg::direct_sum(&[a, b])).collect();
        Ok(MpsTensor { matrices, left: self.left + other.left, right: self.right + other.right })
    }

    /// Sum over a direct sum of physical spaces: physical index of `other`
    /// is shifted by `self.phys_dim()`.
    pub fn stacked(&self, other: &MpsTensor) -> Result<MpsTensor> {
        if self.left != other.left || self.right != other.right {
            return Err(Error::DimMismatch("stacking needs equal bond dimensions".into()));
        }
        let mut matrices = self.matrices.clone();
        matrices.extend(other.matrices.iter().cloned());
        Ok(MpsTensor { matrices, left: self.left, right: self.right })
    }

    /// Relative distance `‖self − other‖ / ‖other‖` over all matrices.
    pub fn rel_diff(&self, other: &MpsTensor) -> f64 {
        let num: f64 = self.matrices.iter().zip(&other.matrices).map(|(a, b)| (a - b).norm_squared()).sum();
        let den = other.norm();
        let num = linalg::sqrt(num);
        if den > 0.0 {
            num / den
        } else {
            num
        }
    }
}

/// Two tensors alternating along the chain: `A: D1 → D2`, `B: D2 → D1`.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorPair {
    pub a: MpsTensor,
    pub b: MpsTensor,
}

impl TensorPair {
    pub fn new(a: MpsTensor, b: MpsTensor) -> Result<TensorPair> {
        if a.right_dim() != b.left_dim() || b.right_dim() != a.left_dim() {
            return Err(Error::DimMismatch(format!(
                "A is {}x{}, B is {}x{}",
                a.left_dim(),
                a.right_dim(),
                b.left_dim(),
                b.right_dim()
            )));
        }
        Ok(TensorPair { a, b })
    }

    /// The pair blocked into one tensor with matrices `A^i B^j`.
    pub fn ab(&self) -> MpsTensor {
        self.a.product(&self.b).expect("pair dimensions chain")
    }

    /// The tensor with matrices `B^j A^i`, physical index `j·d_A + i`.
    pub fn ba(&self) -> MpsTensor {
        self.b.product(&self.a).expect("pair dimensions chain")
    }

    /// Site dimensions of a chain of `n` pairs.
    pub fn site_dims(&self, n: usize) -> Vec<usize> {
        (0..2 * n).map(|s| if s % 2 == 0 { self.a.phys_dim() } else { self.b.phys_dim() }).collect()
    }
}

fn check_size(d: usize, n: usize, limit: u128) -> Result<usize> {
    let mut total: u128 = 1;
    for _ in 0..n {
        total = total.saturating_mul(d as u128);
        if total > limit {
            return Err(Error::SizeLimit { requested: total, limit });
        }
    }
    Ok(total as usize)
}

/// Coefficients `Tr(A^{i1} ⋯ A^{iN})` in row-major order (`i1` most
/// significant), with the default size limit.
pub fn contract_mpv(t: &MpsTensor, n: usize) -> Result<Vec<C64>> {
    contract_mpv_with_limit(t, n, DEFAULT_SIZE_LIMIT)
}

pub fn contract_mpv_with_limit(t: &MpsTensor, n: usize, limit: u128) -> Result<Vec<C64>> {
    if !t.is_square() {
        return Err(Error::DimMismatch("contraction needs a square tensor".into()));
    }
    if n == 0 {
        return Err(Error::DimMismatch("chain length must be at least 1".into()));
    }
    let d = t.phys_dim();
    let total = check_size(d, n, limit)?;
    let mut out = alloc::vec![ZERO; total];
    let id = linalg::identity(t.left_dim());
    fill(t, &id, n, 0, &mut out);
    Ok(out)
}

fn fill(t: &MpsTensor, prefix: &CMat, remaining: usize, base: usize, out: &mut [C64]) {
    let d = t.phys_dim();
    if remaining == 1 {
        for (i, m) in t.matrices().iter().enumerate() {
            // Tr(P M) without forming the product
            let mut acc = ZERO;
            for a in 0..prefix.nrows() {
                for b in 0..prefix.ncols() {
                    acc += prefix[(a, b)] * m[(b, a)];
                }
            }
            out[base * d + i] = acc;
        }
        return;
    }
    for (i, m) in t.matrices().iter().enumerate() {
        let next = prefix * m;
        fill(t, &next, remaining - 1, base * d + i, out);
    }
}

/// Coefficients of `Tr(A^{i1} B^{j1} ⋯ A^{iN} B^{jN})` over `N` pairs.
pub fn contract_pair(pair: &TensorPair, n: usize) -> Result<Vec<C64>> {
    contract_mpv(&pair.ab(), n)
}

pub fn contract_pair_with_limit(pair: &TensorPair, n: usize, limit: u128) -> Result<Vec<C64>> {
    contract_mpv_with_limit(&pair.ab(), n, limit)
}

/// Blocks `b` copies: matrices `A^{i1} ⋯ A^{ib}` indexed row-major.
pub fn block(t: &MpsTensor, b: usize) -> Result<MpsTensor> {
    block_with_limit(t, b, DEFAULT_SIZE_LIMIT)
}

pub fn block_with_limit(t: &MpsTensor, b: usize, limit: u128) -> Result<MpsTensor> {
    if b == 0 {
        return Err(Error::DimMismatch("blocking factor must be at least 1".into()));
    }
    if b > 1 && !t.is_square() {
        return Err(Error::DimMismatch("blocking needs a square tensor".into()));
    }
    check_size(t.phys_dim(), b, limit)?;
    let mut out = t.clone();
    for _ in 1..b {
        out = out.product(t)?;
    }
    Ok(out)
}

/// Norm of a coefficient vector.
pub fn vector_norm(v: &[C64]) -> f64 {
    linalg::sqrt(v.iter().map(|z| z.norm_sqr()).sum())
}

/// `‖a − b‖ / ‖b‖` for coefficient vectors.
pub fn vector_rel_diff(a: &[C64], b: &[C64]) -> f64 {
    let diff: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    let den = vector_norm(b);
    let diff = linalg::sqrt(diff);
    if den > 0.0 {
        diff / den
    } else {
        diff
    }
}
