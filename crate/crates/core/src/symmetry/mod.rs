//! Certification of matter, gauge and combined local symmetries.
//!
//! Every symmetry statement is checked twice: by brute-force contraction of
//! short chains, and at the level of the tensors through the transformation
//! relations of `A` and `B`. Reports keep one residual per chain length,
//! group element (or sample) and site so that failures stay quantitative.

mod analysis;
mod checks;
mod components;
mod extraction;
mod gauss;
mod relations;

use alloc::vec::Vec;

use crate::mpv_core::DEFAULT_SIZE_LIMIT;

pub use analysis::{
    analyze_b_structure, analyze_gauge_hilbert, analyze_matter_local_symmetry, BBlock, BBlockKind, BStructure,
    GaugeHilbert, GaugeSector, MatterLocalReport, SectorNorm,
};
pub use checks::{
    apply_site_op, check_global_symmetry, check_local_symmetry_gauge, check_local_symmetry_matter,
    check_local_symmetry_matter_all_sites, check_local_symmetry_matter_gauge,
};
pub use components::{
    check_coupling_implies_global, check_every_component_invariant, identity_span_residual, ComponentReport,
    CouplingVerdict,
};
pub use extraction::{
    extract_global_virtual_rep, extract_virtual_rep, projective_multiplier, GlobalVirtualRep, VirtualRep,
};
pub use gauss::{check_gauss_law, virtual_gauss_residual, GaussOperators, LieAlgebra};
pub use relations::{verify_relation_a, verify_relation_b, RelationReport};

/// Default pass threshold on relative residuals.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// The four kinds of symmetry of a matrix product vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SettingKind {
    MatterLocal,
    MatterGlobal,
    GaugeLocal,
    MatterGaugeLocal,
}

impl SettingKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SettingKind::MatterLocal => "matter-local",
            SettingKind::MatterGlobal => "matter-global",
            SettingKind::GaugeLocal => "gauge-local",
            SettingKind::MatterGaugeLocal => "bab",
        }
    }
}

/// Chain lengths, pass threshold and contraction cap for brute-force checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckOptions {
    /// Largest chain length (sites for one tensor, pairs for `A`/`B` chains).
    pub n_max: usize,
    pub tolerance: f64,
    pub size_limit: u128,
}

impl CheckOptions {
    pub fn new(n_max: usize) -> Self {
        CheckOptions { n_max, ..Default::default() }
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { n_max: 3, tolerance: DEFAULT_TOLERANCE, size_limit: DEFAULT_SIZE_LIMIT }
    }
}

/// Residual `‖O|ψ⟩ − |ψ⟩‖ / ‖ψ‖` for one chain length, element and site.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualEntry {
    pub n: usize,
    pub element: usize,
    /// Window or site index; `None` for global operators.
    pub site: Option<usize>,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryReport {
    pub setting: SettingKind,
    pub n_values: Vec<usize>,
    pub tolerance: f64,
    pub max_residual: f64,
    /// Sorted by `n`, then element, then site.
    pub entries: Vec<ResidualEntry>,
}

impl SymmetryReport {
    pub(crate) fn from_entries(setting: SettingKind, tolerance: f64, mut entries: Vec<ResidualEntry>) -> Self {
        entries.sort_by_key(|e| (e.n, e.element, e.site));
        let mut n_values: Vec<usize> = entries.iter().map(|e| e.n).collect();
        n_values.dedup();
        let max_residual = entries.iter().map(|e| e.residual).fold(0.0, |acc: f64, r| {
            if acc.is_nan() || r.is_nan() {
                f64::NAN
            } else {
                acc.max(r)
            }
        });
        SymmetryReport { setting, n_values, tolerance, max_residual, entries }
    }

    pub fn passed(&self) -> bool {
        self.max_residual <= self.tolerance
    }

    pub fn failures(&self) -> impl Iterator<Item = &ResidualEntry> {
        let tol = self.tolerance;
        self.entries.iter().filter(move |e| !(e.residual <= tol))
    }

    /// Largest residual at chain length `n`.
    pub fn max_at(&self, n: usize) -> f64 {
        self.entries.iter().filter(|e| e.n == n).map(|e| e.residual).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests;
