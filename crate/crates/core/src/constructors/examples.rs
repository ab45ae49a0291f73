use alloc::vec::Vec;

use super::elementary::elementary_b_block;
use super::GaugeConstruction;
use crate::error::{Error, Result};
use crate::group_rep::su2::{direct_sum_generators, spin_decomposition, su2_clebsch_gordan};
use crate::group_rep::{conjugate_rep, Catalog, LieGroupSample, Rep, Spin};
use crate::linalg::{self, c, CMat, C64, ONE, ZERO};
use crate::mpv_core::MpsTensor;
use crate::symmetry::{GaussOperators, LieAlgebra};

fn diag2(a: C64, b: C64) -> CMat {
    linalg::from_rows(&[&[a, ZERO], &[ZERO, b]])
}

/// Dihedral group of order 10 with `X = ρ1`, `Y = ρ2`, `Θ = ρ1`,
/// `R = 𝟙 ⊗ ρ1` and `L = conj(ρ2) ⊗ 𝟙`. The pair has the local `R ⊗ Θ ⊗ L`
/// symmetry although neither `A` nor `B` is symmetric on its own.
pub fn build_d10_example() -> GaugeConstruction {
    let cat = Catalog::dihedral(5);
    let rho1 = cat.get("rho1").expect("built-in irrep").rep.clone();
    let rho2 = cat.get("rho2").expect("built-in irrep").rep.clone();
    let a = MpsTensor::new(alloc::vec![diag2(ONE, ZERO), diag2(ZERO, ONE)]).expect("2x2 matrices");
    let unit = |p: usize, q: usize| CMat::from_fn(2, 2, |i, j| if i == p && j == q { ONE } else { ZERO });
    let b = MpsTensor::new(alloc::vec![unit(0, 0), unit(0, 1), unit(1, 0), unit(1, 1)]).expect("2x2 matrices");
    let id2 = linalg::identity(2);
    let r_mats = rho1.matrices().iter().map(|m| linalg::kron(&id2, m)).collect();
    let l_mats = conjugate_rep(&rho2).matrices().iter().map(|m| linalg::kron(m, &id2)).collect();
    GaugeConstruction {
        a,
        b,
        theta: rho1.clone(),
        r: Rep::new(r_mats, &cat.group).expect("unitary"),
        l: Rep::new(l_mats, &cat.group).expect("unitary"),
        x: rho1.matrices().to_vec(),
        y: rho2.matrices().to_vec(),
        alphas: alloc::vec![ONE],
        betas: alloc::vec![ONE],
        group: Some(cat.group.clone()),
    }
}

/// Parameters of the SU(2) construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Su2Params {
    pub r: Spin,
    pub l: Spin,
    /// Physical spins, each occurring in `conj(r) ⊗ l`.
    pub j_set: Vec<Spin>,
    /// One coefficient per spin in `j_set`.
    pub alphas: Vec<C64>,
    pub beta: C64,
    /// Coefficients of a second copy `A_2`; doubles the bond dimension.
    pub duplicate: Option<Vec<C64>>,
}

impl Default for Su2Params {
    fn default() -> Self {
        Su2Params {
            r: Spin::new(1),
            l: Spin::new(1),
            j_set: alloc::vec![Spin::new(0), Spin::new(2)],
            alphas: alloc::vec![ONE, ONE],
            beta: ONE,
            duplicate: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Su2Example {
    pub construction: GaugeConstruction,
    pub gauss: GaussOperators,
    /// Generators of `X` and `Y`.
    pub x_generators: Vec<CMat>,
    pub y_generators: Vec<CMat>,
}

fn repeat_blocks(m: &CMat, copies: usize) -> CMat {
    let parts: Vec<&CMat> = (0..copies).map(|_| m).collect();
    linalg::direct_sum(&parts)
}

/// `A^{J,M} = α_J Σ ⟨J,M | conj(r),m; l,n⟩ |m⟩⟨n|`, `B^{m,n} = β |m⟩⟨n|`,
/// `Θ = ⊕_J D^J`, `R = 𝟙 ⊗ D^r` and `L = conj(D^l) ⊗ 𝟙`, evaluated at the
/// given samples, together with the generators entering Gauss' law.
pub fn build_su2_example(params: &Su2Params, samples: &[LieGroupSample]) -> Result<Su2Example> {
    let allowed = spin_decomposition(params.r, params.l);
    for s in &params.j_set {
        if !allowed.contains(s) {
            return Err(Error::BadSpinSet { two_j: s.two_j });
        }
    }
    if params.j_set.is_empty() {
        return Err(Error::DimMismatch("empty set of physical spins".into()));
    }
    if params.alphas.len() != params.j_set.len()
        || params.duplicate.as_ref().is_some_and(|d| d.len() != params.j_set.len())
    {
        return Err(Error::DimMismatch("one coefficient per physical spin is required".into()));
    }
    let cg = su2_clebsch_gordan(params.r, params.l, true)?;
    let (dr, dl) = (params.r.dim(), params.l.dim());
    let build_a = |alphas: &[C64]| -> Vec<CMat> {
        let mut mats = Vec::new();
        for (s, alpha) in params.j_set.iter().zip(alphas) {
            let block = cg.block(&s.label(), 0).expect("spin occurs in the product");
            for big_m in 0..s.dim() {
                mats.push(CMat::from_fn(dr, dl, |m, n| alpha * block[(big_m, m * dl + n)]));
            }
        }
        mats
    };
    let mut a_mats = build_a(&params.alphas);
    let copies = if params.duplicate.is_some() { 2 } else { 1 };
    if let Some(second) = &params.duplicate {
        a_mats = a_mats.iter().zip(build_a(second)).map(|(p, q)| linalg::direct_sum(&[p, &q])).collect();
    }
    let a = MpsTensor::new(a_mats)?;

    let dr_rep = params.r.rep(samples);
    let dl_rep = params.l.rep(samples);
    let elem = elementary_b_block(&conjugate_rep(&dl_rep), &dr_rep)?;
    let b_mats: Vec<CMat> = elem.b.matrices().iter().map(|m| repeat_blocks(&(m * params.beta), copies)).collect();
    let b = MpsTensor::new(b_mats)?;

    let theta_mats: Vec<CMat> = samples
        .iter()
        .map(|p| {
            let parts: Vec<CMat> = params.j_set.iter().map(|s| s.matrix(p)).collect();
            linalg::direct_sum(&parts.iter().collect::<Vec<_>>())
        })
        .collect();
    let x: Vec<CMat> = dr_rep.matrices().iter().map(|m| repeat_blocks(m, copies)).collect();
    let y: Vec<CMat> = dl_rep.matrices().iter().map(|m| repeat_blocks(m, copies)).collect();

    let tau_r = params.r.generators();
    let tau_l = params.l.generators();
    let gauss = GaussOperators::new(
        LieAlgebra::Su2,
        tau_r.iter().map(|t| linalg::kron(&linalg::identity(dl), t)).collect(),
        direct_sum_generators(&params.j_set).to_vec(),
        tau_l.iter().map(|t| -linalg::kron(&t.map(|z| z.conj()), &linalg::identity(dr))).collect(),
    )?;
    let mut alphas = params.alphas.clone();
    if let Some(second) = &params.duplicate {
        alphas.extend(second.iter().copied());
    }
    Ok(Su2Example {
        construction: GaugeConstruction {
            a,
            b,
            theta: Rep::from_samples(theta_mats),
            r: elem.r,
            l: elem.l,
            x,
            y,
            alphas,
            betas: alloc::vec![params.beta],
            group: None,
        },
        gauss,
        x_generators: tau_r.iter().map(|t| repeat_blocks(t, copies)).collect(),
        y_generators: tau_l.iter().map(|t| repeat_blocks(t, copies)).collect(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct U1Example {
    pub construction: GaugeConstruction,
    pub gauss: GaussOperators,
}

/// Abelian construction with `X(φ) = diag(e^{i q_a φ})`: one gauge sector
/// `B^a = |a⟩⟨a|` per charge, `R = X`, `L = conj(X)` (so `L = −R` at the
/// generator level) and matter `A^{(a,b)} = |a⟩⟨b|` carrying charge
/// `q_b − q_a`.
pub fn build_u1_example(charges: &[i64], angles: &[f64]) -> Result<U1Example> {
    let d = charges.len();
    if d == 0 {
        return Err(Error::DimMismatch("at least one charge is required".into()));
    }
    let q: Vec<f64> = charges.iter().map(|&x| x as f64).collect();
    let phase_diag = |vals: Vec<f64>, phi: f64| {
        CMat::from_diagonal(&linalg::CVec::from_vec(vals.iter().map(|v| c(0.0, v * phi).exp()).collect()))
    };
    let unit = |p: usize, r: usize| CMat::from_fn(d, d, |i, j| if i == p && j == r { ONE } else { ZERO });
    let b = MpsTensor::new((0..d).map(|k| unit(k, k)).collect())?;
    let a = MpsTensor::new((0..d * d).map(|k| unit(k / d, k % d)).collect())?;
    let matter: Vec<f64> = (0..d * d).map(|k| q[k % d] - q[k / d]).collect();
    let x: Vec<CMat> = angles.iter().map(|&phi| phase_diag(q.clone(), phi)).collect();
    let theta: Vec<CMat> = angles.iter().map(|&phi| phase_diag(matter.clone(), phi)).collect();
    let l: Vec<CMat> = x.iter().map(|m| m.map(|z| z.conj())).collect();
    let diag_real =
        |vals: &[f64]| CMat::from_diagonal(&linalg::CVec::from_vec(vals.iter().map(|&v| c(v, 0.0)).collect()));
    let gauss = GaussOperators::new(
        LieAlgebra::Abelian,
        alloc::vec![diag_real(&q)],
        alloc::vec![diag_real(&matter)],
        alloc::vec![-diag_real(&q)],
    )?;
    Ok(U1Example {
        construction: GaugeConstruction {
            a,
            b,
            theta: Rep::from_samples(theta),
            r: Rep::from_samples(x.clone()),
            l: Rep::from_samples(l),
            x: x.clone(),
            y: x,
            alphas: alloc::vec![ONE; d * d],
            betas: alloc::vec![ONE; d],
            group: None,
        },
        gauss,
    })
}
