use gauge_mps_core::constructors::{couple_matter_to_gauge, gauge_global_symmetry, wigner_eckart_full};
use gauge_mps_core::group_rep::{Catalog, Rep};
use gauge_mps_core::linalg::{self, c, C64};
use gauge_mps_core::mpv_core::{canonical_form, TensorPair};
use gauge_mps_core::symmetry::{
    check_global_symmetry, check_local_symmetry_gauge, check_local_symmetry_matter_gauge, extract_virtual_rep,
    verify_relation_a, verify_relation_b, CheckOptions,
};
use proptest::prelude::*;

fn virtual_rep(cat: &Catalog, labels: &[&str]) -> Rep {
    let mut it = labels.iter().map(|l| cat.get(l).unwrap().rep.clone());
    let first = it.next().unwrap();
    it.fold(first, |acc, r| acc.direct_sum(&r).unwrap())
}

fn phases(angles: &[f64]) -> Vec<C64> {
    angles.iter().map(|t| c(0.0, *t).exp()).collect()
}

/// Global symmetry → gauge field → coupled matter, all through the public API.
fn round_trip(cat: &Catalog, labels: &[&str], angles: &[f64], seed: u64) {
    let x = virtual_rep(cat, labels);
    let count = wigner_eckart_full(&x, &x, cat, None).unwrap().components.len();
    let alphas: Vec<C64> = phases(&angles.iter().cycle().take(count).copied().collect::<Vec<_>>());
    let we = wigner_eckart_full(&x, &x, cat, Some(&alphas)).unwrap();
    let a = we.a.scaled(c(1.0 / (x.dim() as f64).sqrt(), 0.0));
    assert!(verify_relation_a(&a, &we.theta, x.matrices(), x.matrices()).unwrap().max_residual <= 1e-12);

    let gp = gauge_global_symmetry(&a, &we.theta, x.matrices(), Some(&cat.group), seed).unwrap();
    assert!(verify_relation_b(&gp.b, &gp.r, &gp.l, &gp.x, &gp.x).unwrap().max_residual <= 1e-12);
    let opts = CheckOptions::new(3);
    let pair = TensorPair::new(a, gp.b.clone()).unwrap();
    assert!(check_local_symmetry_matter_gauge(&pair, &gp.r, &we.theta, &gp.l, &opts).unwrap().passed());
    assert!(check_local_symmetry_gauge(&gp.b, &gp.r, &gp.l, &opts).unwrap().passed());

    let vr = extract_virtual_rep(&pair, &gp.r, &we.theta, &gp.l, Some(&cat.group), 1e-9).unwrap();
    for g in 0..cat.group.order() {
        assert!(linalg::projective_distance(&vr.x[g], &gp.x[g]) <= 1e-8);
    }

    let xr = Rep::new(gp.x.clone(), &cat.group).unwrap();
    let cm = couple_matter_to_gauge(&gp.b, &gp.r, &gp.l, &xr, cat, None).unwrap();
    assert_eq!(cm.virtual_labels.len(), labels.len());
    let global = check_global_symmetry(&cm.a, &cm.theta, &CheckOptions::new(4)).unwrap();
    assert!(global.passed(), "{:e}", global.max_residual);
    let coupled = TensorPair::new(cm.a, gp.b).unwrap();
    assert!(check_local_symmetry_matter_gauge(&coupled, &gp.r, &cm.theta, &gp.l, &opts).unwrap().passed());
}

#[test]
fn dihedral_round_trip() {
    round_trip(&Catalog::dihedral(5), &["rho1", "rho2"], &[0.3, 1.1, 2.0], 0);
}

#[test]
fn symmetric_group_round_trip() {
    round_trip(&Catalog::symmetric3(), &["standard", "sign"], &[0.7, 2.9], 1);
}

#[test]
fn quaternion_round_trip() {
    round_trip(&Catalog::quaternion(), &["spinor"], &[0.1, 4.0], 2);
}

#[test]
fn gauged_matter_is_in_canonical_form_with_one_block() {
    let cat = Catalog::dihedral(5);
    let x = virtual_rep(&cat, &["rho1"]);
    let we = wigner_eckart_full(&x, &x, &cat, Some(&phases(&[0.4, 1.3, 2.2]))).unwrap();
    let cf = canonical_form(&we.a, 0).unwrap();
    assert_eq!(cf.block_count(), 1);
    assert!(cf.verify(&we.a, 4).unwrap() <= 1e-10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn round_trip_holds_for_random_coefficients(
        angles in proptest::collection::vec(0.0f64..std::f64::consts::TAU, 3),
        seed in 0u64..1000,
        which in 0usize..3,
    ) {
        let (cat, labels): (Catalog, &[&str]) = match which {
            0 => (Catalog::dihedral(5), &["rho1"]),
            1 => (Catalog::dihedral(5), &["rho2", "A2"]),
            _ => (Catalog::symmetric3(), &["standard"]),
        };
        round_trip(&cat, labels, &angles, seed);
    }
}
