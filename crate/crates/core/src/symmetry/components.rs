use alloc::vec::Vec;

use super::checks::{
    bab_entries, check_global_symmetry, check_local_symmetry_gauge, check_local_symmetry_matter_gauge, check_pair_reps,
    norm_bound,
};
use super::{CheckOptions, SettingKind, SymmetryReport};
use crate::error::Result;
use crate::group_rep::Rep;
use crate::linalg::{self, RANK_TOL};
use crate::mpv_core::{contract_pair_with_limit, pair_decompose, MpsTensor, TensorPair};

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentReport {
    pub full: SymmetryReport,
    /// One report per normal component, over chains of blocked pairs.
    pub components: Vec<SymmetryReport>,
    pub blocking_factor: usize,
}

impl ComponentReport {
    /// False when the full vector is symmetric but some component is not.
    pub fn consistent(&self) -> bool {
        !self.full.passed() || self.components.iter().all(SymmetryReport::passed)
    }
}

/// Runs the `B A B` window check on the full pair and on each normal
/// component of its decomposition. A blocked component chain of `n` pairs is
/// a chain of `b·n` original pairs, so the same windows apply; `n` runs up
/// to `max(1, n_max / b)`.
pub fn check_every_component_invariant(
    pair: &TensorPair,
    r: &Rep,
    theta: &Rep,
    l: &Rep,
    opts: &CheckOptions,
    seed: u64,
) -> Result<ComponentReport> {
    check_pair_reps(pair, r, theta, l)?;
    let full = check_local_symmetry_matter_gauge(pair, r, theta, l, opts)?;
    let dec = pair_decompose(pair, seed)?;
    let b = dec.blocking_factor;
    let n_top = (opts.n_max / b).max(1);
    let mut components = Vec::with_capacity(dec.components.len());
    for comp in &dec.components {
        let mut entries = Vec::new();
        for n in 1..=n_top {
            let psi = contract_pair_with_limit(&comp.pair, n, opts.size_limit)?;
            entries.extend(bab_entries(
                &psi,
                &pair.site_dims(b * n),
                b * n,
                b * n,
                norm_bound(&comp.pair.ab(), n),
                (r, theta, l),
            ));
        }
        components.push(SymmetryReport::from_entries(SettingKind::MatterGaugeLocal, opts.tolerance, entries));
    }
    Ok(ComponentReport { full, components, blocking_factor: b })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CouplingVerdict {
    /// `min_c ‖Σ_k c_k B^k − 𝟙‖ / ‖𝟙‖`, or 1 for non-square `B`.
    pub identity_residual: f64,
    pub gauge_local: SymmetryReport,
    pub bab: SymmetryReport,
    /// Present only when every precondition holds.
    pub global: Option<SymmetryReport>,
}

impl CouplingVerdict {
    pub fn identity_in_span(&self) -> bool {
        self.identity_residual <= 1e-9
    }

    pub fn applies(&self) -> bool {
        self.global.is_some()
    }

    /// `Some(verdict)` of the global check when the preconditions hold.
    pub fn confirmed(&self) -> Option<bool> {
        self.global.as_ref().map(SymmetryReport::passed)
    }
}

/// Distance of the identity from `span{B^k}` relative to `‖𝟙‖`.
pub fn identity_span_residual(b: &MpsTensor) -> f64 {
    if !b.is_square() {
        return 1.0;
    }
    let d = b.left_dim();
    let cols: Vec<linalg::CVec> = b.matrices().iter().map(linalg::vec_c).collect();
    let q = linalg::column_space(&linalg::columns(d * d, &cols), RANK_TOL);
    let target = linalg::vec_c(&linalg::identity(d));
    let proj = &q * (q.adjoint() * &target);
    (target - proj).norm() / linalg::sqrt(d as f64)
}

/// When `B` alone has the gauge-field local symmetry, the identity lies in
/// `span{B^k}` and the pair has the `B A B` symmetry, `A` must have the
/// global symmetry `Θ`. Returns the preconditions and, when they hold, the
/// global check.
pub fn check_coupling_implies_global(
    a: &MpsTensor,
    b: &MpsTensor,
    theta: &Rep,
    r: &Rep,
    l: &Rep,
    opts: &CheckOptions,
) -> Result<CouplingVerdict> {
    let pair = TensorPair::new(a.clone(), b.clone())?;
    let identity_residual = identity_span_residual(b);
    let gauge_local = check_local_symmetry_gauge(b, r, l, opts)?;
    let bab = check_local_symmetry_matter_gauge(&pair, r, theta, l, opts)?;
    let global = if identity_residual <= 1e-9 && gauge_local.passed() && bab.passed() {
        Some(check_global_symmetry(a, theta, opts)?)
    } else {
        None
    };
    Ok(CouplingVerdict { identity_residual, gauge_local, bab, global })
}
