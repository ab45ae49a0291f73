//! Dense complex linear algebra used throughout the crate.
//!
//! Matrices are `nalgebra` dynamic matrices over `Complex64`. Vectorisation of
//! a matrix is column-major unless a function says otherwise.

use alloc::vec::Vec;

use nalgebra::{ComplexField, DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

/// Rank cutoff relative to the largest singular value.
pub const RANK_TOL: f64 = 1e-9;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn zeros(r: usize, c: usize) -> CMat {
    CMat::zeros(r, c)
}

/// Builds a matrix from row slices.
pub fn from_rows(rows: &[&[C64]]) -> CMat {
    let r = rows.len();
    let c = if r == 0 { 0 } else { rows[0].len() };
    CMat::from_fn(r, c, |i, j| rows[i][j])
}

pub fn frob(m: &CMat) -> f64 {
    m.norm()
}

/// `‖a − b‖ / ‖b‖`, falling back to `‖a‖` when `b` vanishes.
pub fn rel_diff(a: &CMat, b: &CMat) -> f64 {
    let nb = b.norm();
    let d = (a - b).norm();
    if nb > 0.0 {
        d / nb
    } else {
        d
    }
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Block-diagonal direct sum.
pub fn direct_sum(blocks: &[&CMat]) -> CMat {
    let r: usize = blocks.iter().map(|b| b.nrows()).sum();
    let c: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = zeros(r, c);
    let (mut i0, mut j0) = (0, 0);
    for b in blocks {
        out.view_mut((i0, j0), (b.nrows(), b.ncols())).copy_from(*b);
        i0 += b.nrows();
        j0 += b.ncols();
    }
    out
}

pub fn unitarity_residual(m: &CMat) -> f64 {
    (m.adjoint() * m - identity(m.ncols())).norm()
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

/// Column-major vectorisation.
pub fn vec_c(m: &CMat) -> CVec {
    CVec::from_column_slice(m.as_slice())
}

pub fn unvec_c(v: &CVec, rows: usize, cols: usize) -> CMat {
    CMat::from_column_slice(rows, cols, v.as_slice())
}

/// Singular values in descending order.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

pub fn rank(m: &CMat, rel_tol: f64) -> usize {
    let s = singular_values(m);
    match s.first() {
        Some(&top) if top > 0.0 => s.iter().filter(|&&x| x > rel_tol * top).count(),
        _ => 0,
    }
}

/// Right singular vectors paired with their singular values, ascending.
///
/// Short matrices are padded with zero rows so that a full set of right
/// singular vectors is always returned.
fn right_singular_pairs(m: &CMat) -> Vec<(f64, CVec)> {
    let n = m.ncols();
    let padded = if m.nrows() < n {
        let mut p = zeros(n, n);
        p.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let vt = svd.v_t.expect("requested right singular vectors");
    let mut pairs: Vec<(f64, CVec)> =
        svd.singular_values.iter().enumerate().map(|(k, &s)| (s, vt.row(k).adjoint())).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs
}

/// Orthonormal basis (as columns) of the numerical null space of `m`.
///
/// A singular value counts as zero when it is below
/// `rel_tol · max(σ_max, 1)`.
pub fn null_space(m: &CMat, rel_tol: f64) -> CMat {
    let n = m.ncols();
    if n == 0 {
        return zeros(0, 0);
    }
    let pairs = right_singular_pairs(m);
    let top = pairs.last().map(|p| p.0).unwrap_or(0.0).max(1.0);
    let cols: Vec<CVec> = pairs.into_iter().filter(|(s, _)| *s <= rel_tol * top).map(|(_, v)| v).collect();
    columns(n, &cols)
}

/// Orthonormal basis (as columns) of the numerical column space of `m`:
/// left singular vectors with `σ > rel_tol · σ_max`.
pub fn column_space(m: &CMat, rel_tol: f64) -> CMat {
    if m.nrows() == 0 || m.ncols() == 0 {
        return zeros(m.nrows(), 0);
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("requested left singular vectors");
    let top = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cols: Vec<CVec> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| top > 0.0 && s > rel_tol * top)
        .map(|(k, _)| u.column(k).into_owned())
        .collect();
    columns(m.nrows(), &cols)
}

/// Smallest singular value and its right singular vector.
pub fn smallest_singular(m: &CMat) -> (f64, CVec) {
    right_singular_pairs(m).into_iter().next().expect("non-empty matrix")
}

/// Second smallest singular value, or `None` for a single column.
pub fn second_smallest_singular(m: &CMat) -> Option<f64> {
    right_singular_pairs(m).get(1).map(|p| p.0)
}

pub fn columns(rows: usize, cols: &[CVec]) -> CMat {
    let mut out = zeros(rows, cols.len());
    for (j, v) in cols.iter().enumerate() {
        out.set_column(j, v);
    }
    out
}

/// Eigenvalues of a square matrix from its complex Schur form.
pub fn eigenvalues(m: &CMat) -> Result<Vec<C64>> {
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    let schur = m.clone().try_schur(f64::EPSILON, 100_000).ok_or(Error::NumericalDegeneracy { gap: 0.0 })?;
    let (_, t) = schur.unpack();
    Ok(t.diagonal().iter().copied().collect())
}

/// Eigenvalues sorted by decreasing modulus.
pub fn eigenvalues_by_modulus(m: &CMat) -> Result<Vec<C64>> {
    let mut e = eigenvalues(m)?;
    e.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
    Ok(e)
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
pub fn eigh(h: &CMat) -> (Vec<f64>, CMat) {
    let n = h.nrows();
    let herm = (h + h.adjoint()) * c(0.5, 0.0);
    let eig = herm.symmetric_eigen();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = idx.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vecs = zeros(n, n);
    for (j, &k) in idx.iter().enumerate() {
        vecs.set_column(j, &eig.eigenvectors.column(k));
    }
    (vals, vecs)
}

/// Applies `f` to the spectrum of a Hermitian matrix.
pub fn hermitian_function(h: &CMat, f: impl Fn(f64) -> C64) -> CMat {
    let (vals, vecs) = eigh(h);
    let d = CMat::from_diagonal(&CVec::from_iterator(vals.len(), vals.iter().map(|&x| f(x))));
    &vecs * d * vecs.adjoint()
}

/// `exp(iH)` for Hermitian `H`.
pub fn exp_i_hermitian(h: &CMat) -> CMat {
    hermitian_function(h, |x| c(0.0, x).exp())
}

pub fn sqrt_psd(h: &CMat) -> CMat {
    hermitian_function(h, |x| c(x.max(0.0).sqrt(), 0.0))
}

pub fn inv_sqrt_pd(h: &CMat) -> CMat {
    hermitian_function(h, |x| c(1.0 / x.sqrt(), 0.0))
}

pub fn inverse(m: &CMat) -> Option<CMat> {
    m.clone().try_inverse()
}

/// Incrementally grown orthonormal set with a relative rank cutoff.
#[derive(Debug, Clone)]
pub struct SpanBuilder {
    dim: usize,
    basis: Vec<CVec>,
    tol: f64,
}

impl SpanBuilder {
    pub fn new(dim: usize, tol: f64) -> Self {
        SpanBuilder { dim, basis: Vec::new(), tol }
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.dim
    }

    pub fn vectors(&self) -> &[CVec] {
        &self.basis
    }

    /// Residual of `v` after projecting out the current span (two passes).
    pub fn residual(&self, v: &CVec) -> CVec {
        let mut r = v.clone();
        for _ in 0..2 {
            for b in &self.basis {
                let p = b.dotc(&r);
                r -= b * p;
            }
        }
        r
    }

    /// Adds the component of `v` outside the span if it is larger than
    /// `tol · ‖v‖`. Returns whether the span grew.
    pub fn push(&mut self, v: &CVec) -> bool {
        if self.is_full() {
            return false;
        }
        let nv = v.norm();
        if nv == 0.0 {
            return false;
        }
        let r = self.residual(v);
        let nr = r.norm();
        if nr > self.tol * nv {
            self.basis.push(r / c(nr, 0.0));
            true
        } else {
            false
        }
    }

    pub fn matrix(&self) -> CMat {
        columns(self.dim, &self.basis)
    }
}

/// Orthonormal basis of the orthogonal complement of the column span of `q`.
pub fn complement(q: &CMat) -> CMat {
    let n = q.nrows();
    let mut span = SpanBuilder::new(n, 1e-8);
    for j in 0..q.ncols() {
        span.push(&q.column(j).into_owned());
    }
    let k = span.len();
    let mut comp = SpanBuilder::new(n, 1e-8);
    for e in 0..n {
        let mut unit = CVec::zeros(n);
        unit[e] = ONE;
        let r = span.residual(&unit);
        let r = comp.residual(&r);
        if r.norm() > 1e-8 {
            comp.push(&r);
            span.push(&r);
        }
        if k + comp.len() == n {
            break;
        }
    }
    comp.matrix()
}

/// Multiplies `v` by a phase so that its first entry above
/// `RANK_TOL · max|v|` is real and positive.
pub fn fix_phase(v: &mut CVec) {
    let top = v.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    if top == 0.0 {
        return;
    }
    if let Some(z) = v.iter().find(|z| z.norm() > 1e-6 * top).copied() {
        let ph = z.conj() / c(z.norm(), 0.0);
        *v *= ph;
    }
}

/// Deterministic orthonormal basis of the column span of `q` (orthonormal
/// columns): Gram-Schmidt of the projector applied to unit vectors in order,
/// each vector phase-fixed. Vectors are thereby ordered by first support row.
pub fn canonical_basis(q: &CMat) -> CMat {
    let n = q.nrows();
    let k = q.ncols();
    let mut span = SpanBuilder::new(n, 1e-6);
    for e in 0..n {
        if span.len() == k {
            break;
        }
        let proj = q * q.row(e).adjoint();
        let before = span.len();
        span.push(&proj);
        if span.len() > before {
            let last = span.basis.last_mut().expect("just pushed");
            fix_phase(last);
        }
    }
    span.matrix()
}

/// Entry-wise complex Gaussian matrix with unit variance per component.
pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(re, im)
    })
}

/// Haar-distributed unitary via QR with the phases of `R` removed.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMat {
    let g = random_matrix(rng, n, n);
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let mut out = q;
    for j in 0..n {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 { d / c(d.norm(), 0.0) } else { ONE };
        let mut col = out.column_mut(j);
        col *= ph;
    }
    out
}

/// `min_φ ‖a − e^{iφ} b‖ / ‖a‖`.
pub fn projective_distance(a: &CMat, b: &CMat) -> f64 {
    let na = a.norm();
    if na == 0.0 {
        return b.norm();
    }
    let overlap = b.dotc(a);
    let ph = if overlap.norm() > 0.0 { overlap / c(overlap.norm(), 0.0) } else { ONE };
    (a - b * ph).norm() / na
}

/// Best complex scalar `s` minimising `‖a − s b‖`.
pub fn best_scalar(a: &CMat, b: &CMat) -> C64 {
    let nb = b.norm_squared();
    if nb == 0.0 {
        ZERO
    } else {
        b.dotc(a) / c(nb, 0.0)
    }
}

pub fn real_part_max(m: &CMat) -> f64 {
    m.iter().fold(0.0f64, |acc, z| acc.max(z.re.abs()))
}

/// Largest absolute entry.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}

/// Principal square root helper usable without `std`.
pub fn sqrt(x: f64) -> f64 {
    ComplexField::sqrt(x)
}

pub fn powi(x: f64, n: i32) -> f64 {
    ComplexField::powi(x, n)
}

pub fn powf(x: f64, y: f64) -> f64 {
    ComplexField::powf(x, y)
}
