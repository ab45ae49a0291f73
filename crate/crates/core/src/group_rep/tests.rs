use alloc::vec;
use alloc::vec::Vec;

use core::f64::consts::PI;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::error::Error;
use crate::linalg::{self, c, CMat, ONE, ZERO};

fn theta() -> f64 {
    2.0 * PI / 5.0
}

fn e(k: f64) -> linalg::C64 {
    c(0.0, k * theta()).exp()
}

/// `⊕_J D^J(g)` following the row order of a CG table.
fn block_sum(cg: &CGTable, cat: &Catalog, g: usize) -> CMat {
    let mut mats = Vec::new();
    for (label, _, m) in &cg.rows {
        if *m == 0 {
            mats.push(cat.get(label).unwrap().matrix(g).clone());
        }
    }
    let refs: Vec<&CMat> = mats.iter().collect();
    linalg::direct_sum(&refs)
}

#[test]
fn d10_rho1_has_trivial_multiplier() {
    let cat = Catalog::dihedral(5);
    let rho1 = cat.get("rho1").unwrap();
    let m = check_projective_rep(rho1.rep.matrices(), &cat.group).unwrap();
    assert!(m.is_trivial(1e-12));
    let r = rho1.matrix(1);
    assert!((r[(0, 0)] - e(1.0)).norm() < 1e-14 && (r[(1, 1)] - e(-1.0)).norm() < 1e-14);
    let s = rho1.matrix(5);
    assert_eq!(*s, linalg::from_rows(&[&[ZERO, ONE], &[ONE, ZERO]]));
}

#[test]
fn trivial_rep_has_trivial_multiplier() {
    let g = FiniteGroup::dihedral(5);
    let m = check_projective_rep(Rep::trivial(&g, 1).matrices(), &g).unwrap();
    assert!(m.is_trivial(0.0));
}

#[test]
fn non_reps_are_rejected() {
    let g = FiniteGroup::cyclic(3);
    let twist = CMat::from_diagonal(&linalg::CVec::from_vec(vec![ONE, c(0.0, 1.0)]));
    let bad = vec![linalg::identity(2), twist.clone(), &twist * &twist];
    assert!(matches!(check_projective_rep(&bad, &g), Err(Error::NotARep { .. })));
    let mut scaled = Rep::trivial(&g, 1).matrices().to_vec();
    scaled[1] *= c(2.0, 0.0);
    assert!(matches!(check_projective_rep(&scaled, &g), Err(Error::NonUnitary { element: 1, .. })));
}

#[test]
fn phase_rescaling_twists_the_multiplier() {
    let cat = Catalog::dihedral(5);
    let rho1 = cat.get("rho1").unwrap();
    let mu: Vec<linalg::C64> = (0..10).map(|g| c(0.0, 0.3 * g as f64).exp()).collect();
    let twisted = rho1.rep.rescaled(&cat.group, &mu).unwrap();
    let expected = Multiplier::trivial(10).twisted(&cat.group, &mu);
    assert!(twisted.multiplier().unwrap().approx_eq(&expected, 1e-12));
}

#[test]
fn conjugation() {
    let cat = Catalog::dihedral(5);
    let rho2 = cat.get("rho2").unwrap();
    let conj = conjugate_rep(&rho2.rep);
    let r = conj.matrix(1);
    assert!((r[(0, 0)] - e(-2.0)).norm() < 1e-14 && (r[(1, 1)] - e(2.0)).norm() < 1e-14);
    assert_eq!(conj.matrix(5), rho2.matrix(5));
    assert_eq!(conjugate_rep(&conj), rho2.rep);
    let pauli = Catalog::klein_pauli();
    let p = &pauli.irreps[0].rep;
    let pc = conjugate_rep(p);
    assert!(pc.multiplier().unwrap().approx_eq(&p.multiplier().unwrap().inverse(), 1e-12));
}

#[test]
fn d10_product_and_decomposition() {
    let cat = Catalog::dihedral(5);
    let prod =
        tensor_product_rep(&conjugate_rep(&cat.get("rho1").unwrap().rep), &cat.get("rho2").unwrap().rep).unwrap();
    let r = prod.matrix(1);
    let expected = [e(1.0), e(-3.0), e(3.0), e(-1.0)];
    for k in 0..4 {
        assert!((r[(k, k)] - expected[k]).norm() < 1e-14);
    }
    let dec = decompose_rep(&prod, &cat.irreps).unwrap();
    assert_eq!(dec.blocks, vec![("rho1".into(), 1), ("rho2".into(), 1)]);
    // a permutation matrix
    for z in dec.basis_change.iter() {
        assert!(z.norm() < 1e-12 || (z - ONE).norm() < 1e-12);
    }
}

#[test]
fn d10_clebsch_gordan_entries() {
    let cat = Catalog::dihedral(5);
    let conj1 = Irrep { label: "conj(rho1)".into(), rep: conjugate_rep(&cat.get("rho1").unwrap().rep) };
    let cg = clebsch_gordan(&conj1, cat.get("rho2").unwrap(), &cat.irreps).unwrap();
    let ones = [("rho1", 0, 0, 0), ("rho1", 1, 1, 1), ("rho2", 0, 0, 1), ("rho2", 1, 1, 0)];
    let mut nonzero = 0;
    for (lab, big_m, m, n) in ones {
        assert!((cg.coefficient(lab, 0, big_m, m, n) - ONE).norm() < 1e-12);
    }
    for z in cg.matrix.iter() {
        if z.norm() > 1e-12 {
            nonzero += 1;
        }
    }
    assert_eq!(nonzero, 4);
}

#[test]
fn regular_rep_of_z3() {
    let cat = Catalog::cyclic(3);
    let mats: Vec<CMat> =
        (0..3).map(|g| CMat::from_fn(3, 3, |i, j| if i == cat.group.mul(g, j) { ONE } else { ZERO })).collect();
    let reg = Rep::new(mats, &cat.group).unwrap();
    let dec = decompose_rep(&reg, &cat.irreps).unwrap();
    assert_eq!(dec.blocks, vec![("chi0".into(), 1), ("chi1".into(), 1), ("chi2".into(), 1)]);
}

#[test]
fn irrep_against_catalog_is_itself() {
    let cat = Catalog::symmetric3();
    let std_irrep = cat.get("standard").unwrap();
    let dec = decompose_rep(&std_irrep.rep, &cat.irreps).unwrap();
    assert_eq!(dec.blocks, vec![("standard".into(), 1)]);
    assert!(linalg::projective_distance(&dec.basis_change, &linalg::identity(2)) < 1e-12);
}

#[test]
fn incomplete_catalog_is_reported() {
    let cat = Catalog::dihedral(5);
    let partial: Vec<Irrep> = cat.irreps.iter().filter(|i| i.label != "rho1").cloned().collect();
    let err = decompose_rep(&cat.get("rho1").unwrap().rep, &partial).unwrap_err();
    assert!(matches!(err, Error::IncompleteCatalog(_)));
}

#[test]
fn schur_counts() {
    let cat = Catalog::dihedral(5);
    let (r1, r2) = (&cat.get("rho1").unwrap().rep, &cat.get("rho2").unwrap().rep);
    assert!(intertwiner_space(r1, r2).unwrap().is_empty());
    let same = intertwiner_space(r1, r1).unwrap();
    assert_eq!(same.len(), 1);
    assert!((&same[0] - linalg::identity(2) * c(core::f64::consts::FRAC_1_SQRT_2, 0.0)).norm() < 1e-12);
    let double = r1.direct_sum(r1).unwrap();
    assert_eq!(intertwiner_space(&double, &double).unwrap().len(), 4);
}

#[test]
fn multiplier_mismatch_is_reported() {
    let pauli = Catalog::klein_pauli();
    let triv = Rep::trivial(&pauli.group, 2);
    assert_eq!(intertwiner_space(&pauli.irreps[0].rep, &triv), Err(Error::MultiplierMismatch));
}

#[test]
fn trivial_times_irrep_is_identity_table() {
    let cat = Catalog::dihedral(5);
    let cg = clebsch_gordan(cat.get("A1").unwrap(), cat.get("rho2").unwrap(), &cat.irreps).unwrap();
    assert!((&cg.matrix - linalg::identity(2)).norm() < 1e-12);
}

#[test]
fn repeated_irrep_copies_are_orthogonal() {
    // standard^{⊗3} = trivial ⊕ sign ⊕ 3·standard
    let cat = Catalog::symmetric3();
    let s = &cat.get("standard").unwrap().rep;
    let triple = tensor_product_rep(&tensor_product_rep(s, s).unwrap(), s).unwrap();
    let dec = decompose_rep(&triple, &cat.irreps).unwrap();
    assert_eq!(dec.multiplicity("standard"), 3);
    assert!(linalg::unitarity_residual(&dec.basis_change) < 1e-12);
}

#[test]
fn clebsch_gordan_tables_over_catalogs() {
    for cat in [Catalog::dihedral(5), Catalog::symmetric3(), Catalog::quaternion(), Catalog::cyclic(5)] {
        for j in &cat.irreps {
            for l in &cat.irreps {
                let cg = clebsch_gordan(j, l, &cat.irreps).unwrap();
                assert!(cg.unitarity_residual() < 1e-12);
                for g in 0..cat.group.order() {
                    let lhs = &cg.matrix * linalg::kron(j.matrix(g), l.matrix(g)) * cg.matrix.adjoint();
                    assert!((lhs - block_sum(&cg, &cat, g)).norm() < 1e-10);
                }
            }
        }
    }
}

#[test]
fn multiplicities_match_characters() {
    let cat = Catalog::dihedral(6);
    let rho1 = &cat.get("rho1").unwrap().rep;
    let rho2 = &cat.get("rho2").unwrap().rep;
    let prod = tensor_product_rep(rho1, rho2).unwrap();
    let dec = decompose_rep(&prod, &cat.irreps).unwrap();
    let order = cat.group.order() as f64;
    for irr in &cat.irreps {
        let inner: linalg::C64 =
            (0..cat.group.order()).map(|g| prod.matrix(g).trace() * irr.matrix(g).trace().conj()).sum();
        let expected = (inner.re / order).round() as usize;
        assert_eq!(dec.multiplicity(&irr.label), expected, "{}", irr.label);
    }
}

fn all_irreps() -> Vec<(Catalog, usize)> {
    let mut out = Vec::new();
    for cat in [Catalog::dihedral(5), Catalog::symmetric3(), Catalog::quaternion(), Catalog::dihedral(4)] {
        for k in 0..cat.irreps.len() {
            out.push((cat.clone(), k));
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn decomposition_survives_basis_change(seed in any::<u64>(), pick in 0usize..4) {
        let cat = [Catalog::dihedral(5), Catalog::symmetric3(), Catalog::quaternion(), Catalog::dihedral(6)][pick].clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = &cat.irreps[seed as usize % cat.irreps.len()].rep;
        let b = &cat.irreps[(seed / 7) as usize % cat.irreps.len()].rep;
        let sum = a.direct_sum(b).unwrap();
        let u = linalg::random_unitary(&mut rng, sum.dim());
        let rotated = sum.rotated(&u);
        let dec = decompose_rep(&rotated, &cat.irreps).unwrap();
        let direct = decompose_rep(&sum, &cat.irreps).unwrap();
        prop_assert_eq!(&dec.blocks, &direct.blocks);
        let p = &dec.basis_change;
        for g in 0..cat.group.order() {
            let bd = p.adjoint() * rotated.matrix(g) * p;
            let mut blocks = Vec::new();
            for comp in &dec.components {
                blocks.push(cat.get(&comp.label).unwrap().matrix(g).clone());
            }
            let refs: Vec<&CMat> = blocks.iter().collect();
            prop_assert!((bd - linalg::direct_sum(&refs)).norm() < 1e-10);
        }
    }

    #[test]
    fn projective_law_holds_for_catalog_irreps(k in 0usize..18) {
        let irreps = all_irreps();
        let (cat, idx) = &irreps[k % irreps.len()];
        let irr = &cat.irreps[*idx];
        let gamma = irr.multiplier().unwrap();
        for g in 0..cat.group.order() {
            for h in 0..cat.group.order() {
                let lhs = irr.matrix(g) * irr.matrix(h);
                let rhs = irr.matrix(cat.group.mul(g, h)) * gamma.get(g, h);
                prop_assert!((lhs - rhs).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn intertwiner_dimension_is_symmetric(a in 0usize..18, b in 0usize..18, seed in any::<u64>()) {
        let cat = Catalog::dihedral(5);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pick = |k: usize| cat.irreps[k % cat.irreps.len()].rep.clone();
        let x = pick(a).direct_sum(&pick(b)).unwrap();
        let y = pick(b).rotated(&linalg::random_unitary(&mut rng, pick(b).dim()));
        let xy = intertwiner_space(&x, &y).unwrap();
        let yx = intertwiner_space(&y, &x).unwrap();
        prop_assert_eq!(xy.len(), yx.len());
        for t in &xy {
            for g in 0..cat.group.order() {
                let adj = t.adjoint();
                prop_assert!((x.matrix(g) * &adj - &adj * y.matrix(g)).norm() < 1e-10);
            }
        }
    }
}
