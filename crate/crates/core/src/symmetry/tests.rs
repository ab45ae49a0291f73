use alloc::vec;
use alloc::vec::Vec;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::constructors::{
    build_d10_example, build_su2_example, build_u1_example, elementary_b_block, gauge_global_symmetry,
    wigner_eckart_full, GaugeConstruction, Su2Params,
};
use crate::error::Error;
use crate::group_rep::su2::{conjugate_generators, haar_samples};
use crate::group_rep::{conjugate_rep, Catalog, Rep};
use crate::linalg::{self, c, CMat, C64, ONE, ZERO};
use crate::mpv_core::{contract_mpv, contract_pair, vector_norm, MpsTensor, TensorPair};

fn opts(n: usize) -> CheckOptions {
    CheckOptions::new(n)
}

/// `‖(⊗_s U_s) ψ − ψ‖ / ‖ψ‖` with the full operator built explicitly.
fn dense_residual(psi: &[C64], ops: &[CMat]) -> f64 {
    let mut full = CMat::from_element(1, 1, ONE);
    for op in ops {
        full = linalg::kron(&full, op);
    }
    let v = linalg::CVec::from_column_slice(psi);
    (&full * &v - &v).norm() / v.norm()
}

fn bab_ops(c: &GaugeConstruction, n: usize, k: usize, g: usize) -> Vec<CMat> {
    let (da, db) = (c.a.phys_dim(), c.b.phys_dim());
    let mut ops: Vec<CMat> = (0..2 * n).map(|s| linalg::identity(if s % 2 == 0 { da } else { db })).collect();
    let sites = 2 * n;
    // R acts first; for a single pair it shares its site with L
    for (site, m) in
        [((2 * k + sites - 1) % sites, c.r.matrix(g)), (2 * k, c.theta.matrix(g)), (2 * k + 1, c.l.matrix(g))]
    {
        ops[site] = m * &ops[site];
    }
    ops
}

fn random_tensor(rng: &mut ChaCha8Rng, d: usize, dl: usize, dr: usize) -> MpsTensor {
    MpsTensor::new((0..d).map(|_| linalg::random_matrix(rng, dl, dr)).collect()).unwrap()
}

/// Symmetric pair obtained by gauging a random Wigner-Eckart tensor.
fn gauged_pair(x: &Rep, cat: &Catalog, seed: u64) -> GaugeConstruction {
    let count = wigner_eckart_full(x, x, cat, None).unwrap().components.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alphas: Vec<C64> =
        (0..count).map(|_| c(0.0, rand::Rng::random_range(&mut rng, 0.0..core::f64::consts::TAU)).exp()).collect();
    let we = wigner_eckart_full(x, x, cat, Some(&alphas)).unwrap();
    let a = we.a.scaled(c(1.0 / linalg::sqrt(x.dim() as f64), 0.0));
    let gp = gauge_global_symmetry(&a, &we.theta, x.matrices(), Some(&cat.group), seed).unwrap();
    GaugeConstruction {
        a,
        b: gp.b,
        theta: we.theta,
        r: gp.r,
        l: gp.l,
        x: gp.x.clone(),
        y: gp.x,
        alphas,
        betas: vec![],
        group: Some(cat.group.clone()),
    }
}

fn rho12() -> (Catalog, Rep) {
    let cat = Catalog::dihedral(5);
    let x = cat.get("rho1").unwrap().rep.direct_sum(&cat.get("rho2").unwrap().rep).unwrap();
    (cat, x)
}

#[test]
fn d10_pair_has_the_local_symmetry() {
    let ex = build_d10_example();
    let rep = check_local_symmetry_matter_gauge(&ex.pair(), &ex.r, &ex.theta, &ex.l, &opts(3)).unwrap();
    assert!(rep.passed(), "{:e}", rep.max_residual);
    assert_eq!(rep.n_values, vec![1, 2, 3]);
    assert_eq!(rep.entries.len(), 10 * (1 + 2 + 3));
    assert_eq!(rep.setting.as_str(), "bab");
}

#[test]
fn d10_matter_alone_has_no_global_symmetry() {
    let ex = build_d10_example();
    let rep = check_global_symmetry(&ex.a, &ex.theta, &opts(1)).unwrap();
    assert!(!rep.passed());
    assert!(rep.max_at(1) >= 0.1);
}

#[test]
fn d10_gauge_field_alone_fails_on_two_sites() {
    let ex = build_d10_example();
    let rep = check_local_symmetry_gauge(&ex.b, &ex.r, &ex.l, &opts(2)).unwrap();
    assert!(rep.max_at(2) >= 0.1);
}

#[test]
fn d10_residuals_match_dense_operators() {
    let ex = build_d10_example();
    let rep = check_local_symmetry_matter_gauge(&ex.pair(), &ex.r, &ex.theta, &ex.l, &opts(2)).unwrap();
    for n in 1..=2 {
        let psi = contract_pair(&ex.pair(), n).unwrap();
        for g in 0..10 {
            for k in 0..n {
                let want = dense_residual(&psi, &bab_ops(&ex, n, k, g));
                let got = rep.entries.iter().find(|e| e.n == n && e.element == g && e.site == Some(k)).unwrap();
                assert!((got.residual - want).abs() <= 1e-12);
            }
        }
    }
    let glob = check_global_symmetry(&ex.a, &ex.theta, &opts(3)).unwrap();
    for n in 1..=3 {
        let psi = contract_mpv(&ex.a, n).unwrap();
        for g in 0..10 {
            let want = dense_residual(&psi, &vec![ex.theta.matrix(g).clone(); n]);
            let got = glob.entries.iter().find(|e| e.n == n && e.element == g).unwrap();
            assert!((got.residual - want).abs() <= 1e-12);
        }
    }
}

#[test]
fn gauge_residuals_match_dense_operators() {
    let ex = build_d10_example();
    let rep = check_local_symmetry_gauge(&ex.b, &ex.r, &ex.l, &opts(3)).unwrap();
    for n in 2..=3 {
        let psi = contract_mpv(&ex.b, n).unwrap();
        for g in 0..10 {
            for k in 0..n {
                let mut ops = vec![linalg::identity(4); n];
                ops[k] = ex.r.matrix(g).clone();
                ops[(k + 1) % n] = &ops[(k + 1) % n] * ex.l.matrix(g);
                let want = dense_residual(&psi, &ops);
                let got = rep.entries.iter().find(|e| e.n == n && e.element == g && e.site == Some(k)).unwrap();
                assert!((got.residual - want).abs() <= 1e-12, "n={n} g={g} k={k}");
            }
        }
    }
}

#[test]
fn identity_representations_always_pass() {
    let cat = Catalog::dihedral(5);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let a = random_tensor(&mut rng, 2, 3, 3);
    let b = random_tensor(&mut rng, 3, 3, 3);
    let (ta, tb) = (Rep::trivial(&cat.group, 2), Rep::trivial(&cat.group, 3));
    assert!(check_local_symmetry_matter(&a, &ta, &opts(3)).unwrap().passed());
    assert!(check_global_symmetry(&a, &ta, &opts(3)).unwrap().passed());
    assert!(check_local_symmetry_gauge(&b, &tb, &tb, &opts(3)).unwrap().passed());
    let pair = TensorPair::new(a, b).unwrap();
    assert!(check_local_symmetry_matter_gauge(&pair, &tb, &ta, &tb, &opts(3)).unwrap().passed());
}

#[test]
fn local_matter_symmetry_on_trivial_sector() {
    let cat = Catalog::dihedral(5);
    let a1 = &cat.get("A1").unwrap().rep;
    let theta = a1.direct_sum(a1).unwrap().direct_sum(&cat.get("rho1").unwrap().rep).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (m0, m1) = (linalg::random_matrix(&mut rng, 2, 2), linalg::random_matrix(&mut rng, 2, 2));
    let a = MpsTensor::new(vec![m0, m1, linalg::zeros(2, 2), linalg::zeros(2, 2)]).unwrap();
    let rep = check_local_symmetry_matter(&a, &theta, &opts(4)).unwrap();
    assert!(rep.passed());
    let analysis = analyze_matter_local_symmetry(&a, &theta, &cat.irreps, 0).unwrap();
    assert!(analysis.supported_on_trivial());
    assert!(analysis.tensor_residual <= 1e-12);

    let b = random_tensor(&mut rng, 4, 2, 2);
    let rep = check_local_symmetry_matter(&b, &theta, &opts(4)).unwrap();
    assert!(!rep.passed());
    let analysis = analyze_matter_local_symmetry(&b, &theta, &cat.irreps, 0).unwrap();
    assert!(!analysis.supported_on_trivial());
    assert_eq!(analysis.flagged.len(), 1);
    assert_eq!(analysis.flagged[0].label, "rho1");
}

#[test]
fn matter_local_check_on_one_site_agrees_with_every_site() {
    let cat = Catalog::dihedral(5);
    let theta = cat.get("A1").unwrap().rep.direct_sum(&cat.get("A2").unwrap().rep).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for symmetric in [true, false] {
        let mut mats: Vec<CMat> = (0..2).map(|_| linalg::random_matrix(&mut rng, 2, 2)).collect();
        if symmetric {
            mats[1] = linalg::zeros(2, 2);
        }
        let a = MpsTensor::new(mats).unwrap();
        let one = check_local_symmetry_matter(&a, &theta, &opts(4)).unwrap();
        let all = check_local_symmetry_matter_all_sites(&a, &theta, &opts(4)).unwrap();
        assert_eq!(one.passed(), symmetric);
        assert_eq!(all.passed(), symmetric);
        assert!((one.max_residual - all.max_residual).abs() <= 1e-12);
    }
}

#[test]
fn relations_of_examples() {
    let ex = build_d10_example();
    let ra = verify_relation_a(&ex.a, &ex.theta, &ex.x, &ex.y).unwrap();
    assert!(ra.passed(1e-12));
    assert_eq!(ra.residuals.len(), 10);
    let rb = verify_relation_b(&ex.b, &ex.r, &ex.l, &ex.x, &ex.y).unwrap();
    assert!(rb.passed(1e-12));
    // swapping X and Y breaks both
    assert!(!verify_relation_a(&ex.a, &ex.theta, &ex.y, &ex.x).unwrap().passed(1e-3));
    assert!(!verify_relation_b(&ex.b, &ex.r, &ex.l, &ex.y, &ex.x).unwrap().passed(1e-3));
}

#[test]
fn relation_rejects_singular_and_short_inputs() {
    let ex = build_d10_example();
    let mut x = ex.x.clone();
    x[3] = linalg::zeros(2, 2);
    assert!(matches!(verify_relation_a(&ex.a, &ex.theta, &x, &ex.y), Err(Error::RelationFailed(_))));
    assert!(matches!(verify_relation_a(&ex.a, &ex.theta, &ex.x[..4], &ex.y), Err(Error::GroupMismatch)));
}

#[test]
fn extraction_recovers_the_d10_virtual_representations() {
    let ex = build_d10_example();
    let vr = extract_virtual_rep(&ex.pair(), &ex.r, &ex.theta, &ex.l, ex.group.as_ref(), 1e-9).unwrap();
    for g in 0..10 {
        assert!(linalg::projective_distance(&vr.x[g], &ex.x[g]) <= 1e-8);
        assert!(linalg::projective_distance(&vr.y[g], &ex.y[g]) <= 1e-8);
    }
    assert!(vr.x_multiplier.as_ref().unwrap().is_trivial(1e-9));
    assert!(vr.relation_residual <= 1e-9);
}

#[test]
fn extraction_on_a_projective_example_reproduces_the_multiplier() {
    let cat = Catalog::klein_pauli();
    let p = cat.get("pauli").unwrap().rep.clone();
    // Pauli matrices; Θ records the sign each picks up under conjugation
    let a = MpsTensor::new(p.matrices().iter().map(|m| m * c(linalg::sqrt(0.5), 0.0)).collect()).unwrap();
    let theta_mats: Vec<CMat> = (0..4)
        .map(|g| {
            let signs: Vec<C64> = p
                .matrices()
                .iter()
                .map(|s| linalg::best_scalar(&(p.matrix(g).adjoint() * s * p.matrix(g)), s))
                .collect();
            CMat::from_diagonal(&linalg::CVec::from_vec(signs))
        })
        .collect();
    let theta = Rep::new(theta_mats, &cat.group).unwrap();
    let gp = gauge_global_symmetry(&a, &theta, p.matrices(), Some(&cat.group), 0).unwrap();
    let ex = GaugeConstruction {
        a,
        b: gp.b,
        theta,
        r: gp.r,
        l: gp.l,
        x: gp.x.clone(),
        y: gp.x,
        alphas: vec![],
        betas: vec![],
        group: Some(cat.group.clone()),
    };
    let vr = extract_virtual_rep(&ex.pair(), &ex.r, &ex.theta, &ex.l, ex.group.as_ref(), 1e-9).unwrap();
    for g in 0..4 {
        assert!(linalg::projective_distance(&vr.x[g], &ex.x[g]) <= 1e-8);
    }
    let (gamma_r, _) = projective_multiplier(ex.r.matrices(), &cat.group).unwrap();
    assert!(vr.x_multiplier.unwrap().approx_eq(&gamma_r, 1e-8));
}

#[test]
fn extraction_requires_normal_products() {
    let cat = Catalog::dihedral(5);
    let triv = Rep::trivial(&cat.group, 1);
    let a = MpsTensor::new(vec![linalg::direct_sum(&[
        &CMat::from_element(1, 1, ONE),
        &CMat::from_element(1, 1, c(0.5, 0.0)),
    ])])
    .unwrap();
    let b = MpsTensor::new(vec![linalg::identity(2)]).unwrap();
    let pair = TensorPair::new(a, b).unwrap();
    let err = extract_virtual_rep(&pair, &triv, &triv, &triv, Some(&cat.group), 1e-9).unwrap_err();
    assert!(matches!(err, Error::NotNormal(_)));
}

#[test]
fn global_extraction_of_a_wigner_eckart_tensor() {
    let (cat, x) = rho12();
    let we = wigner_eckart_full(&x, &x, &cat, None).unwrap();
    let gv = extract_global_virtual_rep(&we.a, &we.theta, Some(&cat.group), 0).unwrap();
    assert!(gv.permutation_trivial());
    assert!(gv.residuals.iter().all(|r| *r <= 1e-8));
    for g in 0..10 {
        assert!(linalg::projective_distance(&gv.x[g], x.matrix(g)) <= 1e-8);
    }
}

#[test]
fn hilbert_space_of_an_elementary_block() {
    let cat = Catalog::dihedral(5);
    let rho1 = cat.get("rho1").unwrap();
    let blk = elementary_b_block(&conjugate_rep(&rho1.rep), &rho1.rep).unwrap();
    let gh = analyze_gauge_hilbert(&blk.b, &blk.r, &blk.l, &blk.x, &blk.y, Some(&cat), 0).unwrap();
    assert_eq!(gh.sectors.len(), 1);
    assert!(gh.kogut_susskind());
    assert_eq!(gh.sectors[0].r_label.as_deref(), Some("rho1"));
    assert!(gh.commutation_residual <= 1e-12);
    let bs = analyze_b_structure(&blk.b, &blk.r, &blk.l, &blk.x, &blk.y, 0).unwrap();
    assert!(bs.condition1 && bs.condition2 && bs.condition3 && !bs.normality_contradiction);
    match bs.blocks[0].kind {
        BBlockKind::Matched { constant, proportionality_residual } => {
            assert!((constant - 1.0).abs() <= 1e-12);
            assert!(proportionality_residual <= 1e-12);
        }
        ref k => panic!("{k:?}"),
    }
}

#[test]
fn hilbert_space_of_the_d10_gauge_field() {
    let cat = Catalog::dihedral(5);
    let ex = build_d10_example();
    let gh = analyze_gauge_hilbert(&ex.b, &ex.r, &ex.l, &ex.x, &ex.y, Some(&cat), 0).unwrap();
    assert_eq!(gh.sectors.len(), 1);
    assert_eq!(gh.sectors[0].r_label.as_deref(), Some("rho1"));
    assert_eq!(gh.sectors[0].l_label.as_deref(), Some("rho2"));
    assert!(!gh.kogut_susskind());
}

#[test]
fn gauged_tensor_has_one_sector_per_virtual_block() {
    let (cat, x) = rho12();
    let ex = gauged_pair(&x, &cat, 1);
    let gh = analyze_gauge_hilbert(&ex.b, &ex.r, &ex.l, &ex.x, &ex.y, Some(&cat), 0).unwrap();
    assert_eq!(gh.sectors.len(), 2);
    assert!(gh.kogut_susskind());
    let bs = analyze_b_structure(&ex.b, &ex.r, &ex.l, &ex.x, &ex.y, 0).unwrap();
    assert!(bs.condition1 && bs.condition2 && bs.condition3);
    let zero = bs.blocks.iter().filter(|b| b.kind == BBlockKind::Zero).count();
    let matched = bs.blocks.iter().filter(|b| matches!(b.kind, BBlockKind::Matched { .. })).count();
    assert_eq!((zero, matched), (6, 2));
    for blk in &bs.blocks {
        if blk.kind == BBlockKind::Zero {
            assert!(blk.norm <= 1e-12 * ex.b.norm());
        }
    }
}

#[test]
fn unmatched_virtual_block_contradicts_normality() {
    let cat = Catalog::dihedral(5);
    let rho1 = cat.get("rho1").unwrap();
    let rho2 = cat.get("rho2").unwrap();
    let a2 = cat.get("A2").unwrap();
    let blk = elementary_b_block(&conjugate_rep(&rho2.rep), &rho1.rep).unwrap();
    // extra row of Y carrying A2, on which B vanishes
    let b = blk.b.map(|m| {
        let mut out = linalg::zeros(3, 2);
        out.view_mut((0, 0), (2, 2)).copy_from(m);
        out
    });
    let y = rho2.rep.direct_sum(&a2.rep).unwrap();
    let rb = verify_relation_b(&b, &blk.r, &blk.l, &blk.x, y.matrices()).unwrap();
    assert!(rb.passed(1e-12));
    let bs = analyze_b_structure(&b, &blk.r, &blk.l, &blk.x, y.matrices(), 0).unwrap();
    assert!(!bs.condition2);
    assert!(bs.condition3);
    assert!(bs.normality_contradiction);
    assert!(!bs.violations.is_empty());
}

#[test]
fn su2_gauss_law_holds() {
    let samples = haar_samples(10, &mut ChaCha8Rng::seed_from_u64(0));
    let ex = build_su2_example(&Su2Params::default(), &samples).unwrap();
    let cns = &ex.construction;
    let rep = check_gauss_law(&cns.pair(), &ex.gauss, &opts(3)).unwrap();
    assert!(rep.passed(), "{:e}", rep.max_residual);
    let vg = virtual_gauss_residual(&cns.a, &ex.gauss.q, &ex.x_generators, &ex.y_generators).unwrap();
    assert!(vg <= 1e-12);
    let bab = check_local_symmetry_matter_gauge(&cns.pair(), &cns.r, &cns.theta, &cns.l, &opts(3)).unwrap();
    assert!(bab.passed());
}

#[test]
fn gauss_law_detects_a_perturbed_matter_tensor() {
    let samples = haar_samples(10, &mut ChaCha8Rng::seed_from_u64(0));
    let ex = build_su2_example(&Su2Params::default(), &samples).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let noise = random_tensor(&mut rng, 4, 2, 2);
    let a = MpsTensor::new(
        ex.construction.a.matrices().iter().zip(noise.matrices()).map(|(m, n)| m + n * c(1e-3, 0.0)).collect(),
    )
    .unwrap();
    let pair = TensorPair::new(a, ex.construction.b.clone()).unwrap();
    let rep = check_gauss_law(&pair, &ex.gauss, &opts(2)).unwrap();
    assert!(!rep.passed());
    assert!(rep.max_residual >= 1e-5);
}

#[test]
fn gauss_residual_is_independent_of_the_direction() {
    let samples = haar_samples(4, &mut ChaCha8Rng::seed_from_u64(0));
    let ex = build_su2_example(&Su2Params::default(), &samples).unwrap();
    let cns = &ex.construction;
    let base = check_gauss_law(&cns.pair(), &ex.gauss, &opts(2)).unwrap();
    for g in 0..samples.len() {
        let rot = |gens: &[CMat], u: &CMat| -> Vec<CMat> { gens.iter().map(|t| u * t * u.adjoint()).collect() };
        let ops = GaussOperators::new(
            LieAlgebra::Su2,
            rot(&ex.gauss.r, cns.r.matrix(g)),
            rot(&ex.gauss.q, cns.theta.matrix(g)),
            rot(&ex.gauss.l, cns.l.matrix(g)),
        )
        .unwrap();
        let rotated = check_gauss_law(&cns.pair(), &ops, &opts(2)).unwrap();
        assert!((rotated.max_residual - base.max_residual).abs() <= 1e-12);
    }
}

#[test]
fn u1_gauss_law_and_zero_generators() {
    let angles = [0.3, 1.1, 2.0];
    let ex = build_u1_example(&[0, 1, 3], &angles).unwrap();
    let cns = &ex.construction;
    assert!(check_gauss_law(&cns.pair(), &ex.gauss, &opts(3)).unwrap().passed());
    assert!(check_local_symmetry_matter_gauge(&cns.pair(), &cns.r, &cns.theta, &cns.l, &opts(3)).unwrap().passed());
    let zero = GaussOperators::new(
        LieAlgebra::Abelian,
        vec![linalg::zeros(3, 3)],
        vec![linalg::zeros(9, 9)],
        vec![linalg::zeros(3, 3)],
    )
    .unwrap();
    let rep = check_gauss_law(&cns.pair(), &zero, &opts(3)).unwrap();
    assert_eq!(rep.max_residual, 0.0);
}

#[test]
fn generators_must_close() {
    let t = linalg::from_rows(&[&[ZERO, ONE], &[ONE, ZERO]]);
    let err = GaussOperators::new(LieAlgebra::Su2, vec![t.clone(); 3], vec![t.clone(); 3], vec![t.clone(); 3]);
    assert!(matches!(err, Err(Error::BadAlgebra { .. })));
    let half = crate::group_rep::Spin::new(1).generators().to_vec();
    let neg: Vec<CMat> = conjugate_generators(&half);
    let id = linalg::identity(2);
    let r: Vec<CMat> = half.iter().map(|g| linalg::kron(&id, g)).collect();
    let l: Vec<CMat> = neg.iter().map(|g| linalg::kron(g, &id)).collect();
    assert!(GaussOperators::new(LieAlgebra::Su2, r, half.clone(), l).is_ok());
}

#[test]
fn every_component_of_a_symmetric_pair_is_symmetric() {
    let (cat, x) = rho12();
    let ex = gauged_pair(&x, &cat, 2);
    let rep = check_every_component_invariant(&ex.pair(), &ex.r, &ex.theta, &ex.l, &opts(2), 0).unwrap();
    assert!(rep.full.passed());
    assert!(rep.consistent());
    assert!(rep.components.iter().all(|c| c.passed()));
    let d10 = build_d10_example();
    let rep = check_every_component_invariant(&d10.pair(), &d10.r, &d10.theta, &d10.l, &opts(2), 0).unwrap();
    assert_eq!(rep.components.len(), 1);
    assert!(rep.consistent());
}

#[test]
fn stacked_symmetric_pairs_stay_symmetric_per_component() {
    let ex = build_d10_example();
    let pair = ex.pair();
    let a = pair.a.direct_sum(&pair.a.scaled(c(0.0, 0.7))).unwrap();
    let b = pair.b.direct_sum(&pair.b).unwrap();
    let stacked = TensorPair::new(a, b).unwrap();
    let rep = check_every_component_invariant(&stacked, &ex.r, &ex.theta, &ex.l, &opts(2), 4).unwrap();
    assert!(rep.full.passed());
    assert!(rep.components.len() >= 2);
    assert!(rep.consistent());
}

#[test]
fn coupling_forces_global_symmetry_for_gauged_tensors() {
    let (cat, x) = rho12();
    let ex = gauged_pair(&x, &cat, 3);
    let v = check_coupling_implies_global(&ex.a, &ex.b, &ex.theta, &ex.r, &ex.l, &opts(3)).unwrap();
    assert!(v.identity_in_span());
    assert!(v.applies());
    assert_eq!(v.confirmed(), Some(true));
}

#[test]
fn coupling_precondition_fails_for_d10() {
    let ex = build_d10_example();
    let v = check_coupling_implies_global(&ex.a, &ex.b, &ex.theta, &ex.r, &ex.l, &opts(2)).unwrap();
    assert!(v.identity_in_span());
    assert!(v.bab.passed());
    assert!(!v.gauge_local.passed());
    assert!(!v.applies());
    assert_eq!(v.confirmed(), None);
}

#[test]
fn identity_gauge_field_reduces_to_the_matter_check() {
    let cat = Catalog::dihedral(5);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let a = random_tensor(&mut rng, 2, 2, 2);
    let b = MpsTensor::new(vec![linalg::identity(2)]).unwrap();
    let triv1 = Rep::trivial(&cat.group, 1);
    let theta = Rep::trivial(&cat.group, 2);
    assert!(identity_span_residual(&b) <= 1e-15);
    let v = check_coupling_implies_global(&a, &b, &theta, &triv1, &triv1, &opts(3)).unwrap();
    assert_eq!(v.confirmed(), Some(true));
}

#[test]
fn reports_sort_and_propagate_nan() {
    let entries = vec![
        ResidualEntry { n: 2, element: 0, site: Some(0), residual: 0.5 },
        ResidualEntry { n: 1, element: 1, site: Some(0), residual: f64::NAN },
        ResidualEntry { n: 1, element: 0, site: Some(0), residual: 0.0 },
    ];
    let rep = SymmetryReport::from_entries(SettingKind::MatterGlobal, 1e-9, entries);
    assert_eq!(rep.n_values, vec![1, 2]);
    assert_eq!((rep.entries[0].n, rep.entries[0].element), (1, 0));
    assert!(rep.max_residual.is_nan());
    assert!(!rep.passed());
    assert_eq!(rep.failures().count(), 2);
}

#[test]
fn size_limit_is_enforced() {
    let ex = build_d10_example();
    let mut o = opts(3);
    o.size_limit = 100;
    assert!(matches!(
        check_local_symmetry_matter_gauge(&ex.pair(), &ex.r, &ex.theta, &ex.l, &o),
        Err(Error::SizeLimit { .. })
    ));
}

#[test]
fn apply_site_op_matches_dense_kron() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let dims = [2, 3, 2];
    let psi: Vec<C64> = (0..12).map(|_| c(rand::Rng::random::<f64>(&mut rng), 0.0)).collect();
    let op = linalg::random_matrix(&mut rng, 3, 3);
    let got = apply_site_op(&psi, &dims, 1, &op);
    let full = linalg::kron(&linalg::kron(&linalg::identity(2), &op), &linalg::identity(2));
    let want = &full * linalg::CVec::from_column_slice(&psi);
    let diff: f64 = got.iter().zip(want.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    assert!(diff <= 1e-12);
    assert!((vector_norm(&got) - want.norm()).abs() <= 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// Tensor-level relations certify the chain check, and a violated
    /// relation shows up in some short chain.
    #[test]
    fn relations_and_chain_checks_agree(seed in 0u64..1000, eps in 1e-3f64..1e-1) {
        let cat = Catalog::dihedral(5);
        let x = cat.get("rho1").unwrap().rep.clone();
        let ex = gauged_pair(&x, &cat, seed);
        let (ra, rb) = ex.relation_residuals().unwrap();
        prop_assert!(ra <= 1e-12 && rb <= 1e-12);
        let rep = check_local_symmetry_matter_gauge(&ex.pair(), &ex.r, &ex.theta, &ex.l, &opts(4)).unwrap();
        prop_assert!(rep.max_residual <= 1e-10);

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let noise = random_tensor(&mut rng, ex.a.phys_dim(), 2, 2);
        let bad = MpsTensor::new(ex.a.matrices().iter().zip(noise.matrices()).map(|(m, n)| m + n * c(eps, 0.0)).collect()).unwrap();
        let rel = verify_relation_a(&bad, &ex.theta, &ex.x, &ex.y).unwrap();
        prop_assert!(rel.max_residual >= 1e-4);
        let pair = TensorPair::new(bad, ex.b.clone()).unwrap();
        let rep = check_local_symmetry_matter_gauge(&pair, &ex.r, &ex.theta, &ex.l, &opts(4)).unwrap();
        prop_assert!(!rep.passed());
    }

    #[test]
    fn perturbed_gauge_field_fails(seed in 0u64..1000, eps in 1e-3f64..1e-1) {
        let ex = build_d10_example();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let noise = random_tensor(&mut rng, 4, 2, 2);
        let bad = MpsTensor::new(ex.b.matrices().iter().zip(noise.matrices()).map(|(m, n)| m + n * c(eps, 0.0)).collect()).unwrap();
        prop_assert!(!verify_relation_b(&bad, &ex.r, &ex.l, &ex.x, &ex.y).unwrap().passed(1e-9));
        let pair = TensorPair::new(ex.a.clone(), bad).unwrap();
        let rep = check_local_symmetry_matter_gauge(&pair, &ex.r, &ex.theta, &ex.l, &opts(2)).unwrap();
        prop_assert!(!rep.passed());
    }

    #[test]
    fn residual_of_global_check_matches_dense_operator(seed in 0u64..1000, g in 0usize..10) {
        let cat = Catalog::dihedral(5);
        let theta = cat.get("rho1").unwrap().rep.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_tensor(&mut rng, 2, 2, 2);
        let rep = check_global_symmetry(&a, &theta, &opts(3)).unwrap();
        for n in 1..=3 {
            let psi = contract_mpv(&a, n).unwrap();
            let want = dense_residual(&psi, &vec![theta.matrix(g).clone(); n]);
            let got = rep.entries.iter().find(|e| e.n == n && e.element == g).unwrap();
            prop_assert!((got.residual - want).abs() <= 1e-10 * want.max(1.0));
        }
    }
}

#[test]
fn vanishing_states_count_as_symmetric() {
    // conj(ρ1) ⊗ ρ1 → ρ2 is traceless, so the one-site state is rounding noise
    let cat = Catalog::dihedral(5);
    let (r1, r2) = (cat.get("rho1").unwrap(), cat.get("rho2").unwrap());
    let a = crate::constructors::wigner_eckart_a_block(r2, r1, r1, &cat.irreps, &[]).unwrap();
    assert!(vector_norm(&contract_mpv(&a, 1).unwrap()) < 1e-14);
    let rep = check_global_symmetry(&a, &r2.rep, &opts(3)).unwrap();
    assert!(rep.passed(), "{:e}", rep.max_residual);
    assert!(rep.max_at(2) <= 1e-12);

    let zero = MpsTensor::zeros(2, 2, 2);
    let theta = Rep::new(vec![linalg::identity(2); 10], &cat.group).unwrap();
    let rep = check_local_symmetry_matter(&zero, &theta, &opts(2)).unwrap();
    assert_eq!(rep.max_residual, 0.0);
}

#[test]
fn small_but_genuine_states_are_still_judged_relatively() {
    // a tiny overall scale does not hide a broken symmetry
    let ex = build_d10_example();
    let a = ex.a.scaled(c(1e-9, 0.0));
    let rep = check_global_symmetry(&a, &ex.theta, &opts(1)).unwrap();
    assert!(rep.max_at(1) >= 0.1);
}
