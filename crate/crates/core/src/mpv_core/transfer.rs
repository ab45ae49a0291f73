use alloc::format;
use alloc::vec::Vec;

use super::tensor::MpsTensor;
use crate::error::{Error, Result};
use crate::linalg::{self, c, CMat, C64, RANK_TOL};

/// Relative width of the peripheral band of a transfer spectrum.
pub const PERIPHERAL_TOL: f64 = 1e-7;

/// `E_A(X) = Σ_i A^i X A^i†`.
pub fn apply_transfer(t: &MpsTensor, x: &CMat) -> Result<CMat> {
    if x.nrows() != t.right_dim() || x.ncols() != t.right_dim() {
        return Err(Error::DimMismatch(format!(
            "X is {}x{}, tensor right dimension is {}",
            x.nrows(),
            x.ncols(),
            t.right_dim()
        )));
    }
    let mut out = linalg::zeros(t.left_dim(), t.left_dim());
    for a in t.matrices() {
        out += a * x * a.adjoint();
    }
    Ok(out)
}

/// Dual map `E*_A(X) = Σ_i A^i† X A^i`.
pub fn apply_dual_transfer(t: &MpsTensor, x: &CMat) -> CMat {
    let mut out = linalg::zeros(t.right_dim(), t.right_dim());
    for a in t.matrices() {
        out += a.adjoint() * x * a;
    }
    out
}

/// Matrix of `X ↦ Σ_i t2^i X t1^i†` on column-major vectorisations:
/// `Σ_i conj(t1^i) ⊗ t2^i`. With `t1 = t2` this is the transfer matrix.
pub fn mixed_transfer_matrix(t1: &MpsTensor, t2: &MpsTensor) -> CMat {
    let mut out = linalg::zeros(t1.left_dim() * t2.left_dim(), t1.right_dim() * t2.right_dim());
    for (a, b) in t1.matrices().iter().zip(t2.matrices()) {
        out += linalg::kron(&a.map(|z| z.conj()), b);
    }
    out
}

pub fn transfer_matrix(t: &MpsTensor) -> CMat {
    mixed_transfer_matrix(t, t)
}

/// Transfer eigenvalues sorted by decreasing modulus.
pub fn transfer_spectrum(t: &MpsTensor) -> Result<Vec<C64>> {
    linalg::eigenvalues_by_modulus(&transfer_matrix(t))
}

/// Largest modulus of a transfer eigenvalue.
pub fn spectral_radius(t: &MpsTensor) -> f64 {
    transfer_spectrum(t).map(|e| e.first().map(|z| z.norm()).unwrap_or(0.0)).unwrap_or(f64::NAN)
}

/// Number of eigenvalues within the peripheral band of the spectrum.
pub fn peripheral_count(spectrum: &[C64]) -> usize {
    let r = spectrum.first().map(|z| z.norm()).unwrap_or(0.0);
    if r == 0.0 {
        return 0;
    }
    spectrum.iter().filter(|z| z.norm() >= r * (1.0 - PERIPHERAL_TOL)).count()
}

fn hermitian_from_eigvec(v: &linalg::CVec, d: usize) -> CMat {
    let z = linalg::unvec_c(v, d, d);
    let tr = z.trace();
    let ph = if tr.norm() > 0.0 { tr.conj() / c(tr.norm(), 0.0) } else { linalg::ONE };
    let z = z * ph;
    let h = (&z + z.adjoint()) * c(0.5, 0.0);
    let tr = h.trace().re;
    if tr != 0.0 {
        h / c(tr, 0.0)
    } else {
        h
    }
}

/// Hermitian, unit-trace eigenvector of `E_A` for eigenvalue `lambda`.
pub fn right_fixed_point(t: &MpsTensor, lambda: C64) -> CMat {
    let d = t.left_dim();
    let shifted = transfer_matrix(t) - linalg::identity(d * d) * lambda;
    let (_, v) = linalg::smallest_singular(&shifted);
    hermitian_from_eigvec(&v, d)
}

/// Hermitian, unit-trace eigenvector of `E*_A` for eigenvalue `lambda`.
pub fn left_fixed_point(t: &MpsTensor, lambda: C64) -> CMat {
    let d = t.left_dim();
    let shifted = transfer_matrix(t).adjoint() - linalg::identity(d * d) * lambda.conj();
    let (_, v) = linalg::smallest_singular(&shifted);
    hermitian_from_eigvec(&v, d)
}

/// Whether `span{A^i}` is the full matrix algebra.
pub fn is_injective(t: &MpsTensor) -> bool {
    if !t.is_square() {
        return false;
    }
    let d = t.left_dim();
    let cols: Vec<linalg::CVec> = t.matrices().iter().map(linalg::vec_c).collect();
    linalg::rank(&linalg::columns(d * d, &cols), RANK_TOL) == d * d
}

/// Outcome of a normality test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normality {
    Normal,
    NotNormal,
    /// Primitive spectrum but no injective blocking found within the cap.
    Unknown,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalCheck {
    pub status: Normality,
    /// Smallest `L` with the `L`-fold blocking injective.
    pub injectivity_length: Option<usize>,
    pub spectral_radius: f64,
    pub peripheral_count: usize,
    /// Smallest eigenvalue of the unit-trace right fixed point.
    pub fixed_point_min: f64,
}

impl NormalCheck {
    pub fn is_normal(&self) -> bool {
        self.status == Normality::Normal
    }
}

/// Smallest `L ≤ cap` with `span{A^{i1}⋯A^{iL}} = M_D`, by span growth.
pub fn injectivity_length(t: &MpsTensor, cap: usize) -> Option<usize> {
    let d = t.left_dim();
    let full = d * d;
    let mut current: Vec<CMat> = t.matrices().to_vec();
    for len in 1..=cap {
        let mut span = linalg::SpanBuilder::new(full, RANK_TOL);
        let mut basis = Vec::new();
        for m in &current {
            if span.push(&linalg::vec_c(m)) {
                basis.push(m.clone());
            }
        }
        if span.is_full() {
            return Some(len);
        }
        if span.is_empty() {
            return None;
        }
        let mut next = Vec::with_capacity(basis.len() * t.phys_dim());
        for m in &basis {
            for a in t.matrices() {
                let p = m * a;
                let n = p.norm();
                if n > 0.0 {
                    next.push(p / c(n, 0.0));
                }
            }
        }
        current = next;
    }
    None
}

/// Normality via primitivity of the transfer map (unique peripheral
/// eigenvalue, positive definite fixed point), cross-checked by span growth
/// up to `L ≤ D⁴`. Without `normalize` the spectral radius must also be 1.
pub fn is_normal(t: &MpsTensor, normalize: bool) -> NormalCheck {
    let not_normal = |r: f64, p: usize, m: f64| NormalCheck {
        status: Normality::NotNormal,
        injectivity_length: None,
        spectral_radius: r,
        peripheral_count: p,
        fixed_point_min: m,
    };
    if !t.is_square() {
        return not_normal(f64::NAN, 0, f64::NAN);
    }
    let spectrum = match transfer_spectrum(t) {
        Ok(s) => s,
        Err(_) => return not_normal(f64::NAN, 0, f64::NAN),
    };
    let top = spectrum[0];
    let r = top.norm();
    let p = peripheral_count(&spectrum);
    if r == 0.0 || p != 1 || (!normalize && (r - 1.0).abs() > 1e-8) {
        return not_normal(r, p, f64::NAN);
    }
    let rho = right_fixed_point(t, top);
    let (vals, _) = linalg::eigh(&rho);
    let min = vals[0] / vals[vals.len() - 1].max(f64::MIN_POSITIVE);
    if min <= RANK_TOL {
        return not_normal(r, p, vals[0]);
    }
    let d = t.left_dim();
    match injectivity_length(t, d * d * d * d) {
        Some(len) => NormalCheck {
            status: Normality::Normal,
            injectivity_length: Some(len),
            spectral_radius: r,
            peripheral_count: p,
            fixed_point_min: vals[0],
        },
        None => NormalCheck {
            status: Normality::Unknown,
            injectivity_length: None,
            spectral_radius: r,
            peripheral_count: p,
            fixed_point_min: vals[0],
        },
    }
}
