//! Tensors with certified symmetry: elementary gauge-field blocks,
//! Wigner-Eckart matter blocks, gauging of a global symmetry, coupling of
//! matter to a given gauge field, and worked examples.

mod elementary;
mod examples;
mod gauging;
mod wigner_eckart;

use alloc::vec::Vec;

use crate::error::Result;
use crate::group_rep::{FiniteGroup, Rep};
use crate::linalg::{CMat, C64};
use crate::mpv_core::{MpsTensor, TensorPair};
use crate::symmetry::{verify_relation_a, verify_relation_b};

pub use elementary::{elementary_b_block, solve_b_block, BBlockSolution, ElementaryBlock};
pub use examples::{build_d10_example, build_su2_example, build_u1_example, Su2Example, Su2Params, U1Example};
pub use gauging::{couple_matter_to_gauge, gauge_global_symmetry, CoupledMatter, GaugedPair};
pub use wigner_eckart::{wigner_eckart_a_block, wigner_eckart_full, WignerEckartTensor};

/// A matter tensor `A` and gauge-field tensor `B` with their physical and
/// virtual representations and free parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeConstruction {
    pub a: MpsTensor,
    pub b: MpsTensor,
    pub theta: Rep,
    pub r: Rep,
    pub l: Rep,
    pub x: Vec<CMat>,
    pub y: Vec<CMat>,
    pub alphas: Vec<C64>,
    pub betas: Vec<C64>,
    /// `None` for sampled Lie-group elements.
    pub group: Option<FiniteGroup>,
}

impl GaugeConstruction {
    pub fn pair(&self) -> TensorPair {
        TensorPair::new(self.a.clone(), self.b.clone()).expect("construction chains")
    }

    /// Largest residuals of the `A` and the `B` transformation laws.
    pub fn relation_residuals(&self) -> Result<(f64, f64)> {
        let ra = verify_relation_a(&self.a, &self.theta, &self.x, &self.y)?;
        let rb = verify_relation_b(&self.b, &self.r, &self.l, &self.x, &self.y)?;
        Ok((ra.max_residual, rb.max_residual))
    }
}
