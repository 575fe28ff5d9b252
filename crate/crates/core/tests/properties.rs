mod common;

use common::*;
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, rng_seed: RngSeed::Fixed(11), ..ProptestConfig::default() })]

    #[test]
    fn hypo_quadruplets_are_balanced(which in 0..QUADRUPLET_ALGEBRAS.len(), steps in arb_givens(5)) {
        let s = rotated_quadruplet(QUADRUPLET_ALGEBRAS[which], &steps);
        prop_assert_eq!(hypo_implies_balanced(&s), Ok(()));
    }

    #[test]
    fn restriction_undoes_suspension(which in 0..QUADRUPLET_ALGEBRAS.len(), steps in arb_givens(5)) {
        let s = rotated_quadruplet(QUADRUPLET_ALGEBRAS[which], &steps);
        prop_assert_eq!(restrict_after_suspend(&s), Ok(()));
    }

    #[test]
    fn exterior_derivative_laws((l, a, b) in (0..catalog_algebras().len(), 0usize..4, 0usize..4).prop_flat_map(|(i, p, r)| {
        let l = catalog_algebras().swap_remove(i);
        let n = l.dim();
        (Just(l), arb_form(n, p), arb_form(n, r))
    })) {
        prop_assert_eq!(exterior_laws(&l, &a, &b), Ok(()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 8, rng_seed: RngSeed::Fixed(5), ..ProptestConfig::default() })]

    #[test]
    fn holonomy_ignores_frame_order(perm in Just((0..6).collect::<Vec<usize>>()).prop_shuffle()) {
        for (name, m, _) in catalog_frames().iter().filter(|(_, m, _)| m.dim() == 6) {
            prop_assert_eq!(permutation_invariance(m, &perm), Ok(()), "{}", name);
        }
    }
}

#[test]
fn abelian_quadruplets_are_hypo() {
    let s = rotated_quadruplet("(0,0,0,0,0)", &[(0, 3, 1, false), (2, 4, 2, true)]);
    assert!(balanced::structures::is_hypo(&s).unwrap().pass());
    assert_eq!(hypo_implies_balanced(&s), Ok(()));
}

#[test]
fn restrictions_of_balanced_su3_structures_are_balanced() {
    let all = catalog_balanced_su3();
    assert!(all.len() >= 4, "{:?}", all.iter().map(|a| &a.0).collect::<Vec<_>>());
    let mut checked = 0;
    for (name, s) in &all {
        checked += restriction_property(name, s).unwrap();
    }
    assert!(checked >= 8);
}

#[test]
fn levi_civita_plus_half_torsion_is_bismut() {
    let frames = catalog_frames();
    assert!(frames.len() >= 8);
    for (name, m, f) in &frames {
        assert_eq!(dual_path(name, m, f), Ok(()));
    }
}

#[test]
fn volume_identity_on_the_standard_model() {
    assert_eq!(psi_identity(), Ok(()));
}
