use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::group_rep::Rep;
use crate::linalg::{self, CMat};
use crate::mpv_core::MpsTensor;

/// Per-element relative residuals of a tensor transformation law.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationReport {
    pub residuals: Vec<f64>,
    pub max_residual: f64,
}

impl RelationReport {
    fn new(residuals: Vec<f64>) -> Self {
        let max_residual =
            residuals.iter().fold(0.0, |acc: f64, &r| if acc.is_nan() || r.is_nan() { f64::NAN } else { acc.max(r) });
        RelationReport { residuals, max_residual }
    }

    pub fn passed(&self, tol: f64) -> bool {
        self.max_residual <= tol
    }
}

fn invert(m: &CMat, what: &str, g: usize) -> Result<CMat> {
    linalg::inverse(m).ok_or_else(|| Error::RelationFailed(format!("{what}({g}) is singular")))
}

fn check_lengths(n: usize, lens: &[usize]) -> Result<()> {
    if lens.iter().any(|&k| k != n) {
        return Err(Error::GroupMismatch);
    }
    Ok(())
}

fn rel(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        num
    }
}

/// `Σ_{i'} Θ(g)_{ii'} A^{i'} = X(g)⁻¹ A^i Y(g)` for every element.
pub fn verify_relation_a(a: &MpsTensor, theta: &Rep, x: &[CMat], y: &[CMat]) -> Result<RelationReport> {
    check_lengths(theta.len(), &[x.len(), y.len()])?;
    let norm = a.norm();
    let mut residuals = Vec::with_capacity(theta.len());
    for g in 0..theta.len() {
        let lhs = a.act(theta.matrix(g))?;
        let x_inv = invert(&x[g], "X", g)?;
        if x_inv.ncols() != a.left_dim() || y[g].nrows() != a.right_dim() {
            return Err(Error::DimMismatch("virtual representation does not match A".into()));
        }
        let rhs = a.sandwich(&x_inv, &y[g]);
        let diff: f64 = lhs.matrices().iter().zip(rhs.matrices()).map(|(p, q)| (p - q).norm_squared()).sum();
        residuals.push(rel(linalg::sqrt(diff), norm));
    }
    Ok(RelationReport::new(residuals))
}

/// `R(g)·B = B X(g)` and `L(g)·B = Y(g)⁻¹ B`; the residual per element is
/// the larger of the two.
pub fn verify_relation_b(b: &MpsTensor, r: &Rep, l: &Rep, x: &[CMat], y: &[CMat]) -> Result<RelationReport> {
    check_lengths(r.len(), &[l.len(), x.len(), y.len()])?;
    let norm = b.norm();
    let mut residuals = Vec::with_capacity(r.len());
    for g in 0..r.len() {
        if x[g].nrows() != b.right_dim() || y[g].nrows() != b.left_dim() {
            return Err(Error::DimMismatch("virtual representation does not match B".into()));
        }
        let right = b.act(r.matrix(g))?;
        let bx = b.map(|m| m * &x[g]);
        let left = b.act(l.matrix(g))?;
        let y_inv = invert(&y[g], "Y", g)?;
        let yb = b.map(|m| &y_inv * m);
        let d1: f64 = right.matrices().iter().zip(bx.matrices()).map(|(p, q)| (p - q).norm_squared()).sum();
        let d2: f64 = left.matrices().iter().zip(yb.matrices()).map(|(p, q)| (p - q).norm_squared()).sum();
        residuals.push(rel(linalg::sqrt(d1.max(d2)), norm));
    }
    Ok(RelationReport::new(residuals))
}
