//! SU(2) irreps generated from spin generators, Haar sampling and
//! generator-level Clebsch-Gordan tables.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::StandardNormal;

use super::rep::{decompose_action, CGTable, Rep};
use crate::error::Result;
use crate::linalg::{self, c, CMat, ZERO};

/// Spin `two_j / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Spin {
    pub two_j: u32,
}

/// A sampled group element `exp(i Σ_a φ_a τ_a)` given by its parameters.
pub type LieGroupSample = [f64; 3];

impl Spin {
    pub const fn new(two_j: u32) -> Spin {
        Spin { two_j }
    }

    pub fn dim(&self) -> usize {
        self.two_j as usize + 1
    }

    pub fn label(&self) -> String {
        if self.two_j.is_multiple_of(2) {
            format!("{}", self.two_j / 2)
        } else {
            format!("{}/2", self.two_j)
        }
    }

    /// Hermitian generators `τ_1, τ_2, τ_3` in the basis `m = j, j−1, …, −j`.
    pub fn generators(&self) -> [CMat; 3] {
        let d = self.dim();
        let j = self.two_j as f64 / 2.0;
        let mut raise = linalg::zeros(d, d);
        let mut t3 = linalg::zeros(d, d);
        for k in 0..d {
            let m = j - k as f64;
            t3[(k, k)] = c(m, 0.0);
            if k > 0 {
                // ⟨m+1| J+ |m⟩
                raise[(k - 1, k)] = c(linalg::sqrt(j * (j + 1.0) - m * (m + 1.0)), 0.0);
            }
        }
        let lower = raise.adjoint();
        let t1 = (&raise + &lower) * c(0.5, 0.0);
        let t2 = (&raise - &lower) * c(0.0, -0.5);
        [t1, t2, t3]
    }

    /// `D^j(φ) = exp(i Σ_a φ_a τ_a)`.
    pub fn matrix(&self, phi: &LieGroupSample) -> CMat {
        exp_generators(&self.generators(), phi)
    }

    /// Images of the given samples.
    pub fn rep(&self, samples: &[LieGroupSample]) -> Rep {
        let gens = self.generators();
        Rep::from_samples(samples.iter().map(|p| exp_generators(&gens, p)).collect())
    }
}

/// `exp(i Σ_a φ_a T_a)` for Hermitian `T_a`.
pub fn exp_generators(gens: &[CMat], phi: &LieGroupSample) -> CMat {
    let d = gens[0].nrows();
    let mut h = linalg::zeros(d, d);
    for (g, p) in gens.iter().zip(phi) {
        h += g * c(*p, 0.0);
    }
    linalg::exp_i_hermitian(&h)
}

/// Generators of the complex-conjugate representation: `−conj(τ_a)`.
pub fn conjugate_generators(gens: &[CMat]) -> Vec<CMat> {
    gens.iter().map(|g| -g.map(|z| z.conj())).collect()
}

/// Largest residual of `[T_a, T_b] = i ε_abc T_c` and of hermiticity.
pub fn su2_algebra_residual(gens: &[CMat]) -> f64 {
    let mut worst: f64 = 0.0;
    for g in gens {
        worst = worst.max((g - g.adjoint()).norm());
    }
    for (a, b, cc) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        let lhs = linalg::commutator(&gens[a], &gens[b]);
        worst = worst.max((lhs - &gens[cc] * c(0.0, 1.0)).norm());
    }
    worst
}

/// Spins occurring in `r ⊗ l`: `|r − l|, …, r + l`.
pub fn spin_decomposition(r: Spin, l: Spin) -> Vec<Spin> {
    let lo = r.two_j.abs_diff(l.two_j);
    (0..).map(|k| lo + 2 * k).take_while(|&t| t <= r.two_j + l.two_j).map(Spin::new).collect()
}

/// Haar-distributed samples `φ = angle · axis` from normalised Gaussian
/// quaternions.
pub fn haar_samples<R: Rng + ?Sized>(count: usize, rng: &mut R) -> Vec<LieGroupSample> {
    (0..count)
        .map(|_| {
            let mut q = [0.0f64; 4];
            for x in &mut q {
                *x = rng.sample(StandardNormal);
            }
            let norm = linalg::sqrt(q.iter().map(|x| x * x).sum());
            let (w, v) = (q[0] / norm, [q[1] / norm, q[2] / norm, q[3] / norm]);
            let s = linalg::sqrt(v.iter().map(|x| x * x).sum());
            if s < 1e-15 {
                return [0.0; 3];
            }
            // U = w + i v·σ = exp(i (θ/2) n·σ) and σ = 2τ for spin ½
            let angle = 2.0 * libm_atan2(s, w);
            [angle * v[0] / s, angle * v[1] / s, angle * v[2] / s]
        })
        .collect()
}

fn libm_atan2(y: f64, x: f64) -> f64 {
    c(x, y).arg()
}

/// Clebsch-Gordan table of `j ⊗ l` (or `conj(j) ⊗ l` when `conj_left`),
/// computed at the Lie-algebra level. Rows are ordered by ascending total
/// spin `J` and `M = J, …, −J`.
pub fn su2_clebsch_gordan(j: Spin, l: Spin, conj_left: bool) -> Result<CGTable> {
    let gj = j.generators();
    let gj: Vec<CMat> = if conj_left { conjugate_generators(&gj) } else { gj.to_vec() };
    let gl = l.generators();
    let (dj, dl) = (j.dim(), l.dim());
    let action: Vec<CMat> = (0..3)
        .map(|a| linalg::kron(&gj[a], &linalg::identity(dl)) + linalg::kron(&linalg::identity(dj), &gl[a]))
        .collect();
    let spins = spin_decomposition(j, l);
    let gens: Vec<(String, Vec<CMat>)> = spins.iter().map(|s| (s.label(), s.generators().to_vec())).collect();
    let irreps: Vec<(String, &[CMat])> = gens.iter().map(|(lab, g)| (lab.clone(), g.as_slice())).collect();
    let dec = decompose_action(&action, &irreps)?;
    let left = if conj_left { format!("conj({})", j.label()) } else { j.label() };
    Ok(CGTable::from_decomposition(left, l.label(), dj, dl, &dec))
}

/// `⊕_J τ^J_a` for a list of spins.
pub fn direct_sum_generators(spins: &[Spin]) -> [CMat; 3] {
    let gens: Vec<[CMat; 3]> = spins.iter().map(|s| s.generators()).collect();
    let pick = |a: usize| {
        let blocks: Vec<&CMat> = gens.iter().map(|g| &g[a]).collect();
        if blocks.is_empty() {
            CMat::from_element(0, 0, ZERO)
        } else {
            linalg::direct_sum(&blocks)
        }
    };
    [pick(0), pick(1), pick(2)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_satisfy_su2_algebra() {
        for two_j in 0..6 {
            assert!(su2_algebra_residual(&Spin::new(two_j).generators()) < 1e-12);
        }
    }

    #[test]
    fn conjugate_generators_satisfy_su2_algebra() {
        let g = Spin::new(3).generators();
        assert!(su2_algebra_residual(&conjugate_generators(&g)) < 1e-12);
    }

    #[test]
    fn singlet_coefficient() {
        let half = Spin::new(1);
        let cg = su2_clebsch_gordan(half, half, false).unwrap();
        let v = cg.coefficient("0", 0, 0, 0, 1);
        assert!((v - c(core::f64::consts::FRAC_1_SQRT_2, 0.0)).norm() < 1e-12);
        assert!(cg.unitarity_residual() < 1e-12);
    }

    #[test]
    fn spin_decomposition_ranges() {
        let got: Vec<u32> = spin_decomposition(Spin::new(2), Spin::new(1)).iter().map(|s| s.two_j).collect();
        assert_eq!(got, [1, 3]);
    }

    #[test]
    fn haar_samples_are_unitary_and_seeded() {
        let a = haar_samples(5, &mut ChaCha8Rng::seed_from_u64(7));
        let b = haar_samples(5, &mut ChaCha8Rng::seed_from_u64(7));
        assert_eq!(a, b);
        for p in &a {
            let u = Spin::new(1).matrix(p);
            assert!(linalg::unitarity_residual(&u) < 1e-12);
            assert!((u.determinant() - c(1.0, 0.0)).norm() < 1e-12);
        }
    }
}
