use alloc::vec::Vec;

use super::checks::{apply_site_op, bab_sites, norm_bound, VANISHING};
use super::{CheckOptions, ResidualEntry, SettingKind, SymmetryReport};
use crate::error::{Error, Result};
use crate::group_rep::su2::su2_algebra_residual;
use crate::linalg::{self, CMat};
use crate::mpv_core::{contract_pair_with_limit, vector_norm, MpsTensor, TensorPair};

/// Structure constants the generators must obey.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LieAlgebra {
    /// `[T_a, T_b] = i ε_abc T_c` with three generators.
    Su2,
    /// All generators commute.
    Abelian,
}

/// Generators of the gauge-field actions `R_a`, `L_a` and the matter charge
/// `Q_a`, one Hermitian matrix per Lie-algebra direction.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussOperators {
    pub algebra: LieAlgebra,
    pub r: Vec<CMat>,
    pub q: Vec<CMat>,
    pub l: Vec<CMat>,
}

fn abelian_residual(gens: &[CMat]) -> f64 {
    let mut worst: f64 = 0.0;
    for a in gens {
        worst = worst.max((a - a.adjoint()).norm());
        for b in gens {
            worst = worst.max(linalg::commutator(a, b).norm());
        }
    }
    worst
}

impl GaussOperators {
    pub fn new(algebra: LieAlgebra, r: Vec<CMat>, q: Vec<CMat>, l: Vec<CMat>) -> Result<Self> {
        let ops = GaussOperators { algebra, r, q, l };
        let residual = ops.algebra_residual();
        if !(residual <= 1e-10) {
            return Err(Error::BadAlgebra { residual });
        }
        Ok(ops)
    }

    /// Largest violation of the commutation relations of `R` and `L`, of
    /// `[R_a, L_b] = 0` and of hermiticity.
    pub fn algebra_residual(&self) -> f64 {
        let dirs = self.r.len();
        if self.q.len() != dirs || self.l.len() != dirs || (self.algebra == LieAlgebra::Su2 && dirs != 3) {
            return f64::INFINITY;
        }
        let shape = |v: &[CMat]| v.iter().all(|m| m.is_square() && m.nrows() == v[0].nrows());
        if dirs > 0 && (!shape(&self.r) || !shape(&self.q) || !shape(&self.l) || self.r[0].nrows() != self.l[0].nrows())
        {
            return f64::INFINITY;
        }
        let mut worst: f64 = match self.algebra {
            LieAlgebra::Su2 => su2_algebra_residual(&self.r).max(su2_algebra_residual(&self.l)),
            LieAlgebra::Abelian => abelian_residual(&self.r).max(abelian_residual(&self.l)),
        };
        for a in &self.r {
            for b in &self.l {
                worst = worst.max(linalg::commutator(a, b).norm());
            }
        }
        for qa in &self.q {
            worst = worst.max((qa - qa.adjoint()).norm());
        }
        worst
    }
}

/// `‖(R_a + Q_a + L_a)|ψ⟩‖ / ‖ψ‖` around every matter site, per direction
/// `a` (reported as the element index) and window.
pub fn check_gauss_law(pair: &TensorPair, ops: &GaussOperators, opts: &CheckOptions) -> Result<SymmetryReport> {
    let residual = ops.algebra_residual();
    if !(residual <= 1e-10) {
        return Err(Error::BadAlgebra { residual });
    }
    for (gens, dim, what) in
        [(&ops.r, pair.b.phys_dim(), "R"), (&ops.q, pair.a.phys_dim(), "Q"), (&ops.l, pair.b.phys_dim(), "L")]
    {
        if gens.iter().any(|m| m.nrows() != dim) {
            return Err(Error::DimMismatch(alloc::format!("{what} generators do not match the physical dimension")));
        }
    }
    let mut entries = Vec::new();
    for n in 1..=opts.n_max {
        let psi = contract_pair_with_limit(pair, n, opts.size_limit)?;
        let dims = pair.site_dims(n);
        let norm = vector_norm(&psi).max(VANISHING * norm_bound(&pair.ab(), n));
        for a in 0..ops.r.len() {
            for k in 0..n {
                let (sr, sq, sl) = bab_sites(k, n);
                let mut total = apply_site_op(&psi, &dims, sr, &ops.r[a]);
                for (site, op) in [(sq, &ops.q[a]), (sl, &ops.l[a])] {
                    for (t, v) in total.iter_mut().zip(apply_site_op(&psi, &dims, site, op)) {
                        *t += v;
                    }
                }
                let num = vector_norm(&total);
                let residual = if norm > 0.0 { num / norm } else { num };
                entries.push(ResidualEntry { n, element: a, site: Some(k), residual });
            }
        }
    }
    Ok(SymmetryReport::from_entries(SettingKind::MatterGaugeLocal, opts.tolerance, entries))
}

/// Largest relative residual of `Σ_{i'} (Q_a)_{ii'} A^{i'} = −T^x_a A^i + A^i T^y_a`,
/// the infinitesimal form of `Θ(g)·A = X(g)⁻¹ A Y(g)`.
pub fn virtual_gauss_residual(a: &MpsTensor, q: &[CMat], x_gens: &[CMat], y_gens: &[CMat]) -> Result<f64> {
    let norm = a.norm().max(f64::MIN_POSITIVE);
    let mut worst: f64 = 0.0;
    for ((qa, xa), ya) in q.iter().zip(x_gens).zip(y_gens) {
        let lhs = a.act(qa)?;
        let rhs = a.map(|m| m * ya - xa * m);
        let diff: f64 = lhs.matrices().iter().zip(rhs.matrices()).map(|(p, r)| (p - r).norm_squared()).sum();
        worst = worst.max(linalg::sqrt(diff) / norm);
    }
    Ok(worst)
}
