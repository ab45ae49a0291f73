//! Translation-invariant matrix product vectors with local gauge symmetry.
//!
//! The crate builds, canonicalises and certifies matrix product vectors
//! whose tensors carry finite-group or SU(2) symmetries. It is `no_std` and
//! only needs an allocator.

#![no_std]
// residual guards are written `!(r <= tol)` so that NaN fails
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod constructors;
mod error;
pub mod group_rep;
pub mod invariant;
pub mod linalg;
pub mod mpv_core;
pub mod symmetry;

pub use error::{Error, Result};
