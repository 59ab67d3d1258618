mod common;

use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn kappa3_strictly_between_one_and_six(a in prefix_alpha(), n in 1usize..30) {
        kappa3_bounds(&a, n)?;
    }

    #[test]
    fn kappa1_kappa2_within_digit_bounds(a in prefix_alpha(), n in 1usize..30) {
        kappa12_digit_bounds(&a, n)?;
    }

    #[test]
    fn product_and_tail_routes_agree(a in prefix_alpha(), n in 1usize..30, j in 1u8..=4) {
        dual_route(&a, n, j)?;
    }

    #[test]
    fn determinant_alternates(a in prefix_alpha(), n in 0usize..40) {
        determinant(&a, n)?;
    }

    #[test]
    fn unit_identity_holds(a in prefix_alpha(), n in 0usize..30) {
        unit_identity(&a, n)?;
    }

    #[test]
    fn digit_one_and_two_identities(a in prefix_alpha(), n in 2usize..40) {
        digit_identities(&a, n)?;
    }

    #[test]
    fn kappa1_kappa2_swap_symmetry(xn in 1u32..1000, xd in 1u32..1000, yn in 1u32..1000, yd in 1u32..1000) {
        swap_symmetry(xn, xd, yn, yd)?;
    }

    #[test]
    fn spectrum_estimates_are_ordered(a in periodic_alpha()) {
        spectrum_order(&a)?;
    }

    #[test]
    fn digit_pattern_implications(a in periodic_alpha()) {
        digit_implications(&a)?;
    }
}

#[test]
fn printed_run_of_one_identity_fails() {
    // the identity with q_{n-1}, q_n, q_{n+1} needs a_{n+1} = 1, not a_n = 1
    let a = second_best::cf::AlphaSpec::periodic(0, &[], &[1, 3]).unwrap();
    let mut exp = second_best::cf::Expansion::new(&a);
    let n = 3isize; // a_3 = 1, a_4 = 3
    assert_eq!(exp.digit(3).unwrap(), 1);
    let (qm1, q, qp1) = (exp.q(n - 1).unwrap(), exp.q(n).unwrap(), exp.q(n + 1).unwrap());
    assert_ne!(&qm1 * 2 + &q, &qm1 + &qp1);
}
