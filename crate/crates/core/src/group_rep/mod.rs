//! Finite-group and SU(2) representation machinery.
//!
//! Finite groups are given by multiplication tables; representations list
//! one unitary per element and carry their multiplier. SU(2) is handled by
//! spin generators, with group-level statements checked on seeded samples.

mod catalog;
mod group;
mod rep;
pub mod su2;

pub use catalog::{Catalog, Irrep};
pub use group::{validate_group, FiniteGroup, Multiplier};
pub use rep::{
    check_projective_rep, clebsch_gordan, conjugate_rep, decompose_rep, intertwiner_space, tensor_product_rep, CGTable,
    Component, Rep, RepDecomposition, REP_TOL,
};
pub use su2::{LieGroupSample, Spin};

pub(crate) use rep::intertwiner_basis;

#[cfg(test)]
mod tests;
