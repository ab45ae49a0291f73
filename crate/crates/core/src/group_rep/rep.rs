use alloc::collections::VecDeque;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::group::{FiniteGroup, Multiplier};
use crate::error::{Error, Result};
use crate::linalg::{self, c, CMat, CVec, RANK_TOL, ZERO};

/// Tolerance for the projective-representation law.
pub const REP_TOL: f64 = 1e-9;

/// A (projective) unitary representation given element by element.
///
/// For finite groups `matrices[g]` is the image of element `g` and the
/// multiplier is known. For SU(2) the matrices are images of sampled group
/// elements and no multiplier is attached.
#[derive(Debug, Clone, PartialEq)]
pub struct Rep {
    matrices: Vec<CMat>,
    multiplier: Option<Multiplier>,
}

impl Rep {
    /// Validated representation of a finite group.
    pub fn new(matrices: Vec<CMat>, group: &FiniteGroup) -> Result<Rep> {
        let multiplier = check_projective_rep(&matrices, group)?;
        Ok(Rep { matrices, multiplier: Some(multiplier) })
    }

    /// Images of sampled elements of a Lie group.
    pub fn from_samples(matrices: Vec<CMat>) -> Rep {
        Rep { matrices, multiplier: None }
    }

    /// Trivial representation of dimension `dim`.
    pub fn trivial(group: &FiniteGroup, dim: usize) -> Rep {
        Rep {
            matrices: alloc::vec![linalg::identity(dim); group.order()],
            multiplier: Some(Multiplier::trivial(group.order())),
        }
    }

    /// Extends images of generators to the whole group by walking the Cayley
    /// graph, then validates the result.
    pub fn from_generators(group: &FiniteGroup, gens: &[(usize, CMat)]) -> Result<Rep> {
        let dim = gens.first().map(|g| g.1.nrows()).unwrap_or(1);
        let mut images: Vec<Option<CMat>> = alloc::vec![None; group.order()];
        images[group.identity()] = Some(linalg::identity(dim));
        let mut queue = VecDeque::from([group.identity()]);
        while let Some(x) = queue.pop_front() {
            let ux = images[x].clone().expect("queued elements have images");
            for (s, us) in gens {
                let y = group.mul(x, *s);
                if images[y].is_none() {
                    images[y] = Some(&ux * us);
                    queue.push_back(y);
                }
            }
        }
        let matrices = images
            .into_iter()
            .enumerate()
            .map(|(g, m)| m.ok_or(Error::DimMismatch(format!("element {g} not generated"))))
            .collect::<Result<Vec<_>>>()?;
        Rep::new(matrices, group)
    }

    pub fn dim(&self) -> usize {
        self.matrices.first().map(|m| m.nrows()).unwrap_or(0)
    }

    /// Number of group elements (or samples).
    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn matrix(&self, g: usize) -> &CMat {
        &self.matrices[g]
    }

    pub fn matrices(&self) -> &[CMat] {
        &self.matrices
    }

    pub fn multiplier(&self) -> Option<&Multiplier> {
        self.multiplier.as_ref()
    }

    /// Element-wise direct sum.
    pub fn direct_sum(&self, other: &Rep) -> Result<Rep> {
        if self.len() != other.len() {
            return Err(Error::GroupMismatch);
        }
        let multiplier = match (&self.multiplier, &other.multiplier) {
            (Some(a), Some(b)) => {
                if !a.approx_eq(b, REP_TOL) {
                    return Err(Error::MultiplierMismatch);
                }
                Some(a.clone())
            }
            _ => None,
        };
        let matrices = self.matrices.iter().zip(&other.matrices).map(|(a, b)| linalg::direct_sum(&[a, b])).collect();
        Ok(Rep { matrices, multiplier })
    }

    /// Conjugates every image by the unitary `u`: `U(g) ↦ u U(g) u†`.
    pub fn rotated(&self, u: &CMat) -> Rep {
        Rep {
            matrices: self.matrices.iter().map(|m| u * m * u.adjoint()).collect(),
            multiplier: self.multiplier.clone(),
        }
    }

    /// Restriction to an invariant subspace spanned by the isometry `p`.
    pub fn restricted(&self, p: &CMat) -> Rep {
        Rep {
            matrices: self.matrices.iter().map(|m| p.adjoint() * m * p).collect(),
            multiplier: self.multiplier.clone(),
        }
    }

    /// Same matrices, multiplier recomputed against `group` (after rescaling
    /// images by phases, say).
    pub fn rescaled(&self, group: &FiniteGroup, phases: &[linalg::C64]) -> Result<Rep> {
        let matrices = self.matrices.iter().zip(phases).map(|(m, p)| m * *p).collect();
        Rep::new(matrices, group)
    }

    pub(crate) fn from_parts(matrices: Vec<CMat>, multiplier: Option<Multiplier>) -> Rep {
        Rep { matrices, multiplier }
    }
}

/// Extracts the multiplier of `matrices` viewed as a projective unitary
/// representation of `group`.
pub fn check_projective_rep(matrices: &[CMat], group: &FiniteGroup) -> Result<Multiplier> {
    let n = group.order();
    if matrices.len() != n {
        return Err(Error::DimMismatch(format!("{} matrices for a group of order {n}", matrices.len())));
    }
    let d = matrices[0].nrows();
    for (g, m) in matrices.iter().enumerate() {
        if m.nrows() != d || m.ncols() != d {
            return Err(Error::DimMismatch(format!("matrix {g} is {}x{}", m.nrows(), m.ncols())));
        }
        let residual = linalg::unitarity_residual(m);
        if residual > REP_TOL {
            return Err(Error::NonUnitary { element: g, residual });
        }
    }
    let mut values = Vec::with_capacity(n * n);
    for g in 0..n {
        for h in 0..n {
            let lhs = &matrices[g] * &matrices[h];
            let rhs = &matrices[group.mul(g, h)];
            let gamma = linalg::best_scalar(&lhs, rhs);
            let residual = (&lhs - rhs * gamma).norm() / linalg::sqrt(d as f64);
            if residual > REP_TOL || (gamma.norm() - 1.0).abs() > REP_TOL {
                return Err(Error::NotARep { g, h, residual });
            }
            values.push(gamma / c(gamma.norm(), 0.0));
        }
    }
    let m = Multiplier::from_raw(n, values);
    m.validate(group, 1e-8)?;
    Ok(m)
}

/// Entry-wise complex conjugate representation; its multiplier is `γ⁻¹`.
pub fn conjugate_rep(rep: &Rep) -> Rep {
    Rep {
        matrices: rep.matrices.iter().map(|m| m.map(|z| z.conj())).collect(),
        multiplier: rep.multiplier.as_ref().map(Multiplier::inverse),
    }
}

/// Kronecker product representation; its multiplier is `γγ'`.
pub fn tensor_product_rep(a: &Rep, b: &Rep) -> Result<Rep> {
    if a.len() != b.len() {
        return Err(Error::GroupMismatch);
    }
    let multiplier = match (&a.multiplier, &b.multiplier) {
        (Some(x), Some(y)) => Some(x.product(y)),
        (None, None) => None,
        _ => return Err(Error::GroupMismatch),
    };
    let matrices = a.matrices.iter().zip(&b.matrices).map(|(x, y)| linalg::kron(x, y)).collect();
    Ok(Rep { matrices, multiplier })
}

/// Frobenius-orthonormal basis of `{T : target_k T = T source_k ∀k}` with
/// `T` of shape `dim(target) × dim(source)`, in canonical phase convention.
pub(crate) fn intertwiner_basis(source: &[CMat], target: &[CMat]) -> Vec<CMat> {
    let ds = source.first().map(|m| m.nrows()).unwrap_or(0);
    let dt = target.first().map(|m| m.nrows()).unwrap_or(0);
    let n = ds * dt;
    if n == 0 {
        return Vec::new();
    }
    // row-major vectorisation: vec(T)[a·ds + b] = T[a, b]
    let mut stacked = linalg::zeros(source.len() * n, n);
    for (k, (u, d)) in source.iter().zip(target).enumerate() {
        let block = linalg::kron(d, &linalg::identity(ds)) - linalg::kron(&linalg::identity(dt), &u.transpose());
        stacked.view_mut((k * n, 0), (n, n)).copy_from(&block);
    }
    let ns = linalg::null_space(&stacked, RANK_TOL);
    let canon = linalg::canonical_basis(&ns);
    (0..canon.ncols()).map(|j| CMat::from_fn(dt, ds, |a, b| canon[(a * ds + b, j)])).collect()
}

/// Orthonormal basis of intertwiners `T` with `rep2(g) T = T rep1(g)`.
pub fn intertwiner_space(rep1: &Rep, rep2: &Rep) -> Result<Vec<CMat>> {
    if rep1.len() != rep2.len() {
        return Err(Error::GroupMismatch);
    }
    if let (Some(a), Some(b)) = (&rep1.multiplier, &rep2.multiplier) {
        if !a.approx_eq(b, REP_TOL) {
            return Err(Error::MultiplierMismatch);
        }
    }
    Ok(intertwiner_basis(&rep1.matrices, &rep2.matrices))
}

/// One irreducible block inside a decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    pub label: String,
    pub copy: usize,
    pub offset: usize,
    pub dim: usize,
}

/// Irrep content of a representation and the unitary realising it.
#[derive(Debug, Clone, PartialEq)]
pub struct RepDecomposition {
    /// `(label, multiplicity)` in catalog order, zero multiplicities omitted.
    pub blocks: Vec<(String, usize)>,
    /// Columns are the irrep basis vectors; `P† U(g) P = ⊕ D^J(g)`.
    pub basis_change: CMat,
    pub components: Vec<Component>,
}

impl RepDecomposition {
    pub fn multiplicity(&self, label: &str) -> usize {
        self.blocks.iter().find(|b| b.0 == label).map(|b| b.1).unwrap_or(0)
    }
}

pub(crate) fn decompose_action(action: &[CMat], irreps: &[(String, &[CMat])]) -> Result<RepDecomposition> {
    let n = action.first().map(|m| m.nrows()).unwrap_or(0);
    let mut blocks = Vec::new();
    let mut components = Vec::new();
    let mut cols: Vec<CVec> = Vec::new();
    for (label, mats) in irreps {
        let d = mats[0].nrows();
        let basis = intertwiner_basis(action, mats);
        if basis.is_empty() {
            continue;
        }
        blocks.push((label.clone(), basis.len()));
        for (copy, w) in basis.iter().enumerate() {
            let w = w * c(linalg::sqrt(d as f64), 0.0);
            components.push(Component { label: label.clone(), copy, offset: cols.len(), dim: d });
            for row in 0..d {
                cols.push(w.row(row).adjoint());
            }
        }
    }
    if cols.len() != n {
        return Err(Error::IncompleteCatalog(format!("found {} of {n} dimensions", cols.len())));
    }
    Ok(RepDecomposition { blocks, basis_change: linalg::columns(n, &cols), components })
}

/// Decomposes `rep` into irreps taken from `catalog`. Catalog irreps whose
/// multiplier differs from the representation's are skipped.
pub fn decompose_rep(rep: &Rep, catalog: &[super::Irrep]) -> Result<RepDecomposition> {
    let usable: Vec<(String, &[CMat])> = catalog
        .iter()
        .filter(|irr| irr.rep.len() == rep.len())
        .filter(|irr| match (&rep.multiplier, &irr.rep.multiplier) {
            (Some(a), Some(b)) => a.approx_eq(b, REP_TOL),
            _ => true,
        })
        .map(|irr| (irr.label.clone(), irr.rep.matrices()))
        .collect();
    decompose_action(&rep.matrices, &usable)
}

/// Clebsch-Gordan coefficients of a product `j ⊗ l`.
///
/// `matrix` has rows `(J, copy, M)` (listed in `rows`) and columns
/// `(m, n) ↦ m·dim(l) + n`; it is unitary and `C (D^j ⊗ D^l) C† = ⊕ D^J`.
#[derive(Debug, Clone, PartialEq)]
pub struct CGTable {
    pub left: String,
    pub right: String,
    pub left_dim: usize,
    pub right_dim: usize,
    pub rows: Vec<(String, usize, usize)>,
    pub matrix: CMat,
}

impl CGTable {
    pub(crate) fn from_decomposition(
        left: String,
        right: String,
        ld: usize,
        rd: usize,
        dec: &RepDecomposition,
    ) -> Self {
        let mut rows = Vec::new();
        for comp in &dec.components {
            for m in 0..comp.dim {
                rows.push((comp.label.clone(), comp.copy, m));
            }
        }
        CGTable { left, right, left_dim: ld, right_dim: rd, rows, matrix: dec.basis_change.adjoint() }
    }

    /// `⟨j,m; l,n | J,copy,M⟩`, zero when `(J, copy)` does not occur.
    pub fn coefficient(&self, label: &str, copy: usize, big_m: usize, m: usize, n: usize) -> linalg::C64 {
        self.rows
            .iter()
            .position(|r| r.0 == label && r.1 == copy && r.2 == big_m)
            .map(|row| self.matrix[(row, m * self.right_dim + n)])
            .unwrap_or(ZERO)
    }

    /// Number of copies of `label` in the product.
    pub fn multiplicity(&self, label: &str) -> usize {
        self.rows.iter().filter(|r| r.0 == label && r.2 == 0).count()
    }

    /// The `dim(J) × (dim j · dim l)` block of rows for `(label, copy)`.
    pub fn block(&self, label: &str, copy: usize) -> Option<CMat> {
        let idx: Vec<usize> =
            self.rows.iter().enumerate().filter(|(_, r)| r.0 == label && r.1 == copy).map(|(k, _)| k).collect();
        if idx.is_empty() {
            return None;
        }
        Some(self.matrix.select_rows(idx.iter()))
    }

    pub fn unitarity_residual(&self) -> f64 {
        linalg::unitarity_residual(&self.matrix)
    }
}

/// Clebsch-Gordan table of `j ⊗ l` against `catalog`.
pub fn clebsch_gordan(j: &super::Irrep, l: &super::Irrep, catalog: &[super::Irrep]) -> Result<CGTable> {
    let product = tensor_product_rep(&j.rep, &l.rep)?;
    let dec = decompose_rep(&product, catalog)?;
    Ok(CGTable::from_decomposition(j.label.clone(), l.label.clone(), j.rep.dim(), l.rep.dim(), &dec))
}
