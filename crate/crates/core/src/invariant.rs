//! Invariant subspaces of a finite set of matrices.
//!
//! Reducibility is decided with Burnside's theorem: the unital algebra
//! generated by the set is all of `M_n` iff there is no proper invariant
//! subspace. When it is smaller, a proper subspace is produced as the cyclic
//! submodule of an eigenvector of a random algebra element (or, dually, the
//! complement of a cyclic submodule of the adjoint algebra).

use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMat, CVec, SpanBuilder, RANK_TOL};

/// Frobenius-orthonormal basis of the unital algebra generated by `gens`.
pub fn algebra_basis(gens: &[CMat], n: usize) -> Vec<CMat> {
    let mut span = SpanBuilder::new(n * n, RANK_TOL);
    span.push(&linalg::vec_c(&linalg::identity(n)));
    let normed: Vec<CMat> = gens.iter().filter(|g| g.norm() > 0.0).map(|g| g / c(g.norm(), 0.0)).collect();
    let mut frontier = 0;
    while frontier < span.len() && !span.is_full() {
        let current = linalg::unvec_c(&span.vectors()[frontier], n, n);
        for g in &normed {
            span.push(&linalg::vec_c(&(g * &current)));
            if span.is_full() {
                break;
            }
        }
        frontier += 1;
    }
    span.vectors().iter().map(|v| linalg::unvec_c(v, n, n)).collect()
}

fn orbit(algebra: &[CMat], v: &CVec, n: usize) -> CMat {
    let mut span = SpanBuilder::new(n, RANK_TOL);
    span.push(v);
    for a in algebra {
        span.push(&(a * v));
        if span.is_full() {
            break;
        }
    }
    span.matrix()
}

fn invariance_residual(gens: &[CMat], q: &CMat) -> f64 {
    let proj = q * q.adjoint();
    gens.iter()
        .map(|g| {
            let gq = g * q;
            let leak = &gq - &proj * &gq;
            leak.norm() / g.norm().max(1e-300)
        })
        .fold(0.0, f64::max)
}

/// Returns an orthonormal basis of a proper invariant subspace, or `None`
/// when the set acts irreducibly.
pub fn find_invariant_subspace<R: Rng + ?Sized>(gens: &[CMat], n: usize, rng: &mut R) -> Result<Option<CMat>> {
    if n <= 1 {
        return Ok(None);
    }
    let algebra = algebra_basis(gens, n);
    if algebra.len() == n * n {
        return Ok(None);
    }
    let adjoint: Vec<CMat> = algebra.iter().map(|a| a.adjoint()).collect();
    let mut gap = f64::INFINITY;
    for _ in 0..8 {
        let mut z = linalg::zeros(n, n);
        for a in &algebra {
            let re: f64 = rng.random::<f64>() - 0.5;
            let im: f64 = rng.random::<f64>() - 0.5;
            z += a * c(re, im);
        }
        let eig = linalg::eigenvalues(&z)?;
        for lambda in eig {
            let shifted = &z - linalg::identity(n) * lambda;
            let (s, v) = linalg::smallest_singular(&shifted);
            if let Some(s2) = linalg::second_smallest_singular(&shifted) {
                gap = gap.min(s2 - s);
            }
            let w = orbit(&algebra, &v, n);
            if w.ncols() < n && invariance_residual(gens, &w) < 1e-8 {
                return Ok(Some(w));
            }
            let (_, u) = linalg::smallest_singular(&shifted.adjoint());
            let wd = orbit(&adjoint, &u, n);
            if wd.ncols() < n {
                let comp = linalg::complement(&wd);
                if comp.ncols() > 0 && invariance_residual(gens, &comp) < 1e-8 {
                    return Ok(Some(comp));
                }
            }
        }
    }
    Err(Error::NumericalDegeneracy { gap })
}

/// Isometries `P_k` (columns of a unitary `Q = [P_1 P_2 …]`) such that
/// `Q† g Q` is block upper triangular with irreducible diagonal blocks
/// `P_k† g P_k` for every generator `g`.
pub fn triangularize<R: Rng + ?Sized>(gens: &[CMat], n: usize, rng: &mut R) -> Result<Vec<CMat>> {
    match find_invariant_subspace(gens, n, rng)? {
        None => Ok(alloc::vec![linalg::identity(n)]),
        Some(w) => {
            let comp = linalg::complement(&w);
            let inner: Vec<CMat> = gens.iter().map(|g| w.adjoint() * g * &w).collect();
            let outer: Vec<CMat> = gens.iter().map(|g| comp.adjoint() * g * &comp).collect();
            let mut out: Vec<CMat> = triangularize(&inner, w.ncols(), rng)?.into_iter().map(|p| &w * p).collect();
            out.extend(triangularize(&outer, comp.ncols(), rng)?.into_iter().map(|p| &comp * p));
            Ok(out)
        }
    }
}

/// Irreducible components of a set closed under adjoints (e.g. a unitary
/// representation); the returned isometries block-diagonalise every
/// generator.
pub fn irreducible_components<R: Rng + ?Sized>(gens: &[CMat], n: usize, rng: &mut R) -> Result<Vec<CMat>> {
    triangularize(gens, n, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_set(rng: &mut ChaCha8Rng, count: usize, n: usize) -> Vec<CMat> {
        (0..count).map(|_| linalg::random_matrix(rng, n, n)).collect()
    }

    #[test]
    fn generic_pair_is_irreducible() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let gens = random_set(&mut rng, 2, 4);
        assert_eq!(algebra_basis(&gens, 4).len(), 16);
        assert!(find_invariant_subspace(&gens, 4, &mut rng).unwrap().is_none());
    }

    #[test]
    fn hidden_direct_sum_splits() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random_set(&mut rng, 2, 2);
        let b = random_set(&mut rng, 2, 3);
        let u = linalg::random_unitary(&mut rng, 5);
        let gens: Vec<CMat> = a.iter().zip(&b).map(|(x, y)| &u * linalg::direct_sum(&[x, y]) * u.adjoint()).collect();
        let parts = triangularize(&gens, 5, &mut rng).unwrap();
        let mut dims: Vec<usize> = parts.iter().map(|p| p.ncols()).collect();
        dims.sort();
        assert_eq!(dims, [2, 3]);
    }

    #[test]
    fn upper_triangular_blocks_are_found() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let gens: Vec<CMat> = (0..3)
            .map(|_| {
                let mut m = linalg::random_matrix(&mut rng, 4, 4);
                for i in 2..4 {
                    for j in 0..2 {
                        m[(i, j)] = linalg::ZERO;
                    }
                }
                m
            })
            .collect();
        let parts = triangularize(&gens, 4, &mut rng).unwrap();
        assert_eq!(parts.len(), 2);
        let q = parts[0].clone();
        for g in &gens {
            let lower = parts[1].adjoint() * g * &q;
            assert!(lower.norm() < 1e-10);
        }
    }

    #[test]
    fn repeated_block_splits_into_copies() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = random_set(&mut rng, 2, 2);
        let gens: Vec<CMat> = a.iter().map(|x| linalg::direct_sum(&[x, x])).collect();
        let parts = triangularize(&gens, 4, &mut rng).unwrap();
        assert_eq!(parts.iter().map(|p| p.ncols()).collect::<Vec<_>>(), [2, 2]);
    }
}
