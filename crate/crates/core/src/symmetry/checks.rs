use alloc::format;
use alloc::vec::Vec;

use super::{CheckOptions, ResidualEntry, SettingKind, SymmetryReport};
use crate::error::{Error, Result};
use crate::group_rep::Rep;
use crate::linalg::{self, CMat, C64, ZERO};
use crate::mpv_core::{contract_mpv_with_limit, contract_pair_with_limit, vector_norm, MpsTensor, TensorPair};

/// Applies `op` to one site of a row-major coefficient vector whose first
/// site is the most significant index.
pub fn apply_site_op(psi: &[C64], dims: &[usize], site: usize, op: &CMat) -> Vec<C64> {
    let d = dims[site];
    let inner: usize = dims[site + 1..].iter().product();
    let outer: usize = dims[..site].iter().product();
    let mut out = alloc::vec![ZERO; psi.len()];
    for o in 0..outer {
        let base = o * d * inner;
        for i in 0..d {
            for k in 0..d {
                let w = op[(i, k)];
                if w == ZERO {
                    continue;
                }
                let src = &psi[base + k * inner..base + (k + 1) * inner];
                let dst = &mut out[base + i * inner..base + (i + 1) * inner];
                for (x, y) in dst.iter_mut().zip(src) {
                    *x += w * y;
                }
            }
        }
    }
    out
}

/// Fraction of [`norm_bound`] below which a state counts as vanishing.
/// Entry errors of relative size `ε` move the state by up to about
/// `N ε · norm_bound`, so below this floor a relative residual carries no
/// information at the default tolerance.
pub(crate) const VANISHING: f64 = 1e-6;

/// `√D ‖t‖^n`, an upper bound on the norm of the `n`-site state of `t`.
pub(crate) fn norm_bound(t: &MpsTensor, n: usize) -> f64 {
    linalg::sqrt(t.left_dim() as f64) * linalg::powi(t.norm(), n as i32)
}

/// `‖after − before‖ / ‖before‖`, measured against `VANISHING · scale`
/// instead when `before` is numerically zero.
pub(crate) fn relative_change(before: &[C64], after: &[C64], scale: f64) -> f64 {
    let num = vector_norm(&before.iter().zip(after).map(|(a, b)| b - a).collect::<Vec<_>>());
    let den = vector_norm(before).max(VANISHING * scale);
    if den > 0.0 {
        num / den
    } else {
        num
    }
}

/// Applies the operators in order and returns the relative change.
pub(crate) fn window_residual(psi: &[C64], dims: &[usize], ops: &[(usize, &CMat)], scale: f64) -> f64 {
    let mut phi = psi.to_vec();
    for (site, op) in ops {
        phi = apply_site_op(&phi, dims, *site, op);
    }
    relative_change(psi, &phi, scale)
}

fn check_dim(rep: &Rep, expected: usize, what: &str) -> Result<()> {
    if rep.dim() != expected {
        return Err(Error::DimMismatch(format!("{what} has dimension {}, expected {expected}", rep.dim())));
    }
    Ok(())
}

pub(crate) fn check_gauge_reps(r: &Rep, l: &Rep) -> Result<()> {
    if r.len() != l.len() {
        return Err(Error::GroupMismatch);
    }
    if let (Some(a), Some(b)) = (r.multiplier(), l.multiplier()) {
        if !a.product(b).is_trivial(1e-9) {
            return Err(Error::MultiplierMismatch);
        }
    }
    Ok(())
}

/// `Θ(g)` on the first site of chains of `1 ≤ N ≤ n_max` sites.
pub fn check_local_symmetry_matter(a: &MpsTensor, theta: &Rep, opts: &CheckOptions) -> Result<SymmetryReport> {
    matter_local(a, theta, opts, false)
}

/// `Θ(g)` on every site separately.
pub fn check_local_symmetry_matter_all_sites(
    a: &MpsTensor,
    theta: &Rep,
    opts: &CheckOptions,
) -> Result<SymmetryReport> {
    matter_local(a, theta, opts, true)
}

fn matter_local(a: &MpsTensor, theta: &Rep, opts: &CheckOptions, all_sites: bool) -> Result<SymmetryReport> {
    check_dim(theta, a.phys_dim(), "Θ")?;
    let mut entries = Vec::new();
    for n in 1..=opts.n_max {
        let psi = contract_mpv_with_limit(a, n, opts.size_limit)?;
        let scale = norm_bound(a, n);
        let dims = alloc::vec![a.phys_dim(); n];
        let sites = if all_sites { n } else { 1 };
        for (g, op) in theta.matrices().iter().enumerate() {
            for site in 0..sites {
                let residual = window_residual(&psi, &dims, &[(site, op)], scale);
                entries.push(ResidualEntry { n, element: g, site: Some(site), residual });
            }
        }
    }
    Ok(SymmetryReport::from_entries(SettingKind::MatterLocal, opts.tolerance, entries))
}

/// `Θ(g)^{⊗N}` on chains of `1 ≤ N ≤ n_max` sites.
pub fn check_global_symmetry(a: &MpsTensor, theta: &Rep, opts: &CheckOptions) -> Result<SymmetryReport> {
    check_dim(theta, a.phys_dim(), "Θ")?;
    let mut entries = Vec::new();
    for n in 1..=opts.n_max {
        let psi = contract_mpv_with_limit(a, n, opts.size_limit)?;
        let scale = norm_bound(a, n);
        let dims = alloc::vec![a.phys_dim(); n];
        for (g, op) in theta.matrices().iter().enumerate() {
            let ops: Vec<(usize, &CMat)> = (0..n).map(|s| (s, op)).collect();
            let residual = window_residual(&psi, &dims, &ops, scale);
            entries.push(ResidualEntry { n, element: g, site: None, residual });
        }
    }
    Ok(SymmetryReport::from_entries(SettingKind::MatterGlobal, opts.tolerance, entries))
}

/// `R(g)` on site `K` and `L(g)` on site `K+1` of a chain of `B` tensors,
/// for every `K` (periodically).
pub fn check_local_symmetry_gauge(b: &MpsTensor, r: &Rep, l: &Rep, opts: &CheckOptions) -> Result<SymmetryReport> {
    check_dim(r, b.phys_dim(), "R")?;
    check_dim(l, b.phys_dim(), "L")?;
    check_gauge_reps(r, l)?;
    let mut entries = Vec::new();
    for n in 1..=opts.n_max {
        let psi = contract_mpv_with_limit(b, n, opts.size_limit)?;
        let scale = norm_bound(b, n);
        let dims = alloc::vec![b.phys_dim(); n];
        for g in 0..r.len() {
            for k in 0..n {
                let ops = [(k, r.matrix(g)), ((k + 1) % n, l.matrix(g))];
                let residual = window_residual(&psi, &dims, &ops, scale);
                entries.push(ResidualEntry { n, element: g, site: Some(k), residual });
            }
        }
    }
    Ok(SymmetryReport::from_entries(SettingKind::GaugeLocal, opts.tolerance, entries))
}

/// Sites `(R, Θ, L)` of window `k` in an alternating chain of `n` pairs:
/// `A` occupies even sites.
pub(crate) fn bab_sites(k: usize, n: usize) -> (usize, usize, usize) {
    let len = 2 * n;
    ((2 * k + len - 1) % len, 2 * k, 2 * k + 1)
}

pub(crate) fn bab_entries(
    psi: &[C64],
    dims: &[usize],
    n_report: usize,
    windows: usize,
    scale: f64,
    reps: (&Rep, &Rep, &Rep),
) -> Vec<ResidualEntry> {
    let (r, theta, l) = reps;
    let mut entries = Vec::new();
    for g in 0..theta.len() {
        for k in 0..windows {
            let (sr, st, sl) = bab_sites(k, windows);
            let ops = [(sr, r.matrix(g)), (st, theta.matrix(g)), (sl, l.matrix(g))];
            let residual = window_residual(psi, dims, &ops, scale);
            entries.push(ResidualEntry { n: n_report, element: g, site: Some(k), residual });
        }
    }
    entries
}

pub(crate) fn check_pair_reps(pair: &TensorPair, r: &Rep, theta: &Rep, l: &Rep) -> Result<()> {
    check_dim(theta, pair.a.phys_dim(), "Θ")?;
    check_dim(r, pair.b.phys_dim(), "R")?;
    check_dim(l, pair.b.phys_dim(), "L")?;
    if theta.len() != r.len() {
        return Err(Error::GroupMismatch);
    }
    check_gauge_reps(r, l)
}

/// `R(g) ⊗ Θ(g) ⊗ L(g)` on every `B A B` window of chains of
/// `1 ≤ N ≤ n_max` pairs.
pub fn check_local_symmetry_matter_gauge(
    pair: &TensorPair,
    r: &Rep,
    theta: &Rep,
    l: &Rep,
    opts: &CheckOptions,
) -> Result<SymmetryReport> {
    check_pair_reps(pair, r, theta, l)?;
    let mut entries = Vec::new();
    for n in 1..=opts.n_max {
        let psi = contract_pair_with_limit(pair, n, opts.size_limit)?;
        entries.extend(bab_entries(&psi, &pair.site_dims(n), n, n, norm_bound(&pair.ab(), n), (r, theta, l)));
    }
    Ok(SymmetryReport::from_entries(SettingKind::MatterGaugeLocal, opts.tolerance, entries))
}
