use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::canonical::{lcm, period};
use super::tensor::{contract_pair, vector_rel_diff, TensorPair};
use super::transfer::{is_normal, spectral_radius, Normality};
use crate::error::{Error, Result};
use crate::invariant;
use crate::linalg::{self, c, C64, ZERO};

/// One pair `(A_χ, B_χ)` with `A_χ B_χ` and `B_χ A_χ` normal.
#[derive(Debug, Clone, PartialEq)]
pub struct PairComponent {
    pub pair: TensorPair,
    pub weight: C64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairDecomposition {
    pub components: Vec<PairComponent>,
    /// Number of original pairs grouped into one blocked pair.
    pub blocking_factor: usize,
}

impl PairDecomposition {
    /// `Σ_χ μ_χ^N ψ_{A_χ B_χ}^N` over `N` blocked pairs.
    pub fn coefficients(&self, n: usize) -> Result<Vec<C64>> {
        let mut out: Option<Vec<C64>> = None;
        for comp in &self.components {
            let psi = contract_pair(&comp.pair, n)?;
            let w = comp.weight.powu(n as u32);
            let acc = out.get_or_insert_with(|| alloc::vec![ZERO; psi.len()]);
            for (o, p) in acc.iter_mut().zip(&psi) {
                *o += w * p;
            }
        }
        out.ok_or_else(|| Error::NotDecomposable("every component vanished".into()))
    }

    /// Largest relative deviation from the (blocked) input over `N ≤ n_max`.
    pub fn verify(&self, original: &TensorPair, n_max: usize) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for n in 1..=n_max {
            let expected = contract_pair(original, self.blocking_factor * n)?;
            worst = worst.max(vector_rel_diff(&self.coefficients(n)?, &expected));
        }
        Ok(worst)
    }
}

fn split_once(pair: &TensorPair, rng: &mut ChaCha8Rng) -> Result<Option<(TensorPair, TensorPair)>> {
    let ab = pair.ab();
    if let Some(p) = invariant::find_invariant_subspace(ab.matrices(), ab.left_dim(), rng)? {
        let q = linalg::complement(&p);
        let inner = TensorPair::new(pair.a.map(|a| p.adjoint() * a), pair.b.map(|b| b * &p))?;
        let outer = TensorPair::new(pair.a.map(|a| q.adjoint() * a), pair.b.map(|b| b * &q))?;
        return Ok(Some((inner, outer)));
    }
    let ba = pair.ba();
    if let Some(p) = invariant::find_invariant_subspace(ba.matrices(), ba.left_dim(), rng)? {
        let q = linalg::complement(&p);
        let inner = TensorPair::new(pair.a.map(|a| a * &p), pair.b.map(|b| p.adjoint() * b))?;
        let outer = TensorPair::new(pair.a.map(|a| a * &q), pair.b.map(|b| q.adjoint() * b))?;
        return Ok(Some((inner, outer)));
    }
    Ok(None)
}

/// Alternately splits `AB` and `BA` until both act irreducibly on every
/// component; components with nilpotent `AB` are dropped.
fn split_all(pairs: Vec<TensorPair>, rng: &mut ChaCha8Rng) -> Result<Vec<TensorPair>> {
    let mut todo = pairs;
    let mut done = Vec::new();
    while let Some(p) = todo.pop() {
        match split_once(&p, rng)? {
            Some((x, y)) => {
                todo.push(y);
                todo.push(x);
            }
            None => done.push(p),
        }
    }
    let radii: Vec<f64> = done.iter().map(|p| spectral_radius(&p.ab())).collect();
    let max_r = radii.iter().copied().fold(0.0, f64::max);
    Ok(done.into_iter().zip(radii).filter(|(_, r)| max_r > 0.0 && *r > 1e-12 * max_r).map(|(p, _)| p).collect())
}

/// Groups `b` pairs: `Ã = A(BA)^s`, `B̃ = B(AB)^t` with `s + t = b − 1`.
pub fn block_pair(pair: &TensorPair, b: usize) -> Result<TensorPair> {
    let s = (b - 1) / 2;
    let t = b - 1 - s;
    let ba = pair.ba();
    let ab = pair.ab();
    let mut a = pair.a.clone();
    for _ in 0..s {
        a = a.product(&ba)?;
    }
    let mut bt = pair.b.clone();
    for _ in 0..t {
        bt = bt.product(&ab)?;
    }
    TensorPair::new(a, bt)
}

/// Decomposes a pair into components whose `AB` and `BA` are normal, with
/// weights `μ_χ` so that `Σ_χ μ_χ^N ψ_{A_χ B_χ}^N` reproduces the input.
pub fn pair_decompose(pair: &TensorPair, seed: u64) -> Result<PairDecomposition> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut parts = split_all(alloc::vec![pair.clone()], &mut rng)?;
    let mut b = 1;
    for p in &parts {
        b = lcm(b, period(&p.ab())?);
    }
    if b > 1 {
        let blocked = parts.iter().map(|p| block_pair(p, b)).collect::<Result<Vec<_>>>()?;
        parts = split_all(blocked, &mut rng)?;
    }
    let mut components = Vec::new();
    for p in parts {
        let r = spectral_radius(&p.ab());
        let mu = linalg::sqrt(r);
        let scaled = TensorPair::new(p.a.scaled(c(1.0 / mu, 0.0)), p.b)?;
        for t in [scaled.ab(), scaled.ba()] {
            let check = is_normal(&t, false);
            if check.status == Normality::NotNormal {
                return Err(Error::NotNormal("component is not normal after reduction".into()));
            }
        }
        components.push(PairComponent { pair: scaled, weight: c(mu, 0.0) });
    }
    Ok(PairDecomposition { components, blocking_factor: b })
}
