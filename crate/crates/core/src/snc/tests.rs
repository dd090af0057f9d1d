use super::*;
use crate::exactalg::rat;
use alloc::vec;

fn div(a: &[u32]) -> SncDivisor {
    SncDivisor::new(a.to_vec()).unwrap()
}

fn ideal(dim: usize, gens: &[&[u32]]) -> MonomialIdeal {
    MonomialIdeal::new(dim, gens.iter().map(|g| Monomial(g.to_vec())))
}

#[test]
fn top_weights() {
    assert_eq!(snc_weight_top(&div(&[1, 1]), &rat(1, 1)).unwrap(), 2);
    assert_eq!(snc_weight_top(&div(&[2, 3]), &rat(1, 2)).unwrap(), 1);
    assert_eq!(snc_weight_top(&div(&[2, 3]), &rat(1, 5)).unwrap(), 0);
    assert!(snc_weight_top(&div(&[1]), &rat(0, 1)).is_err());
}

#[test]
fn f0_ideals() {
    let d = div(&[1, 1]);
    let one = rat(1, 1);
    assert_eq!(snc_f0_ideal(&d, &one, 0).unwrap(), ideal(2, &[&[1, 1]]));
    assert_eq!(snc_f0_ideal(&d, &one, 1).unwrap(), ideal(2, &[&[1, 0], &[0, 1]]));
    assert_eq!(snc_f0_ideal(&d, &one, 2).unwrap(), MonomialIdeal::unit(2));
    assert!(matches!(snc_f0_ideal(&d, &one, 3), Err(SncError::LevelOutOfRange { .. })));

    let d = div(&[2, 3]);
    assert_eq!(snc_f0_ideal(&d, &rat(1, 2), 0).unwrap(), ideal(2, &[&[1, 1]]));
    assert_eq!(snc_f0_ideal(&d, &rat(1, 2), 1).unwrap(), ideal(2, &[&[0, 1]]));
    assert_eq!(snc_f0_ideal(&d, &rat(1, 5), 0).unwrap(), MonomialIdeal::unit(2));
}

#[test]
fn hodge_pieces() {
    let p = snc_hodge_weight(&div(&[1, 1]), &rat(1, 1), 2, 1).unwrap();
    assert_eq!(p.summands.len(), 2);
    assert!(p.summands.iter().all(|s| s.budget == Some(2) && s.pole_step == 0));
}

#[test]
fn multiplier_and_adjoint() {
    assert_eq!(snc_multiplier_ideal(&div(&[2, 3]), &rat(1, 2)).unwrap(), ideal(2, &[&[1, 1]]));
    assert_eq!(snc_multiplier_ideal(&div(&[1]), &rat(1, 3)).unwrap(), MonomialIdeal::unit(1));
    assert_eq!(
        snc_adjoint_specialization(&div(&[1, 1, 1]), &rat(1, 1)).unwrap(),
        ideal(3, &[&[1, 1, 0], &[1, 0, 1], &[0, 1, 1]])
    );
    assert_eq!(snc_adjoint_specialization(&div(&[2, 3]), &rat(1, 5)), Err(SncError::NoIntegralComponent));
}

#[test]
fn v_filtration_monomials() {
    let d = div(&[2, 3]);
    assert_eq!(d.f_lambda(&rat(1, 2)), Monomial(vec![0, 1]));
    assert_eq!(d.f_lambda(&rat(3, 2)), Monomial(vec![2, 4]));
    assert_eq!(d.f_lambda_plus(&rat(1, 2)), Monomial(vec![1, 1]));
    assert_eq!(d.kernel_generators(&rat(1, 2), 0), vec![Monomial(vec![1, 1])]);
    assert_eq!(d.kernel_generators(&rat(1, 2), 1), vec![Monomial(vec![0, 1])]);
}

#[test]
fn strata_restriction() {
    let d = div(&[2, 3]).restrict(&[0]).unwrap();
    assert_eq!(d.exponents(), &[2, 0]);
    assert_eq!(snc_f0_ideal(&d, &rat(1, 2), 1).unwrap(), MonomialIdeal::unit(2));
    assert_eq!(div(&[2, 3]).restrict(&[5]), Err(SncError::BadStratum(5)));
}

#[test]
fn full_pole_piece_detection() {
    let d = div(&[1, 1]);
    let f = d.f();
    // F_0 W_{n+2} = O f^{-1}, F_1 W_{n+2} is not O f^{-2}.
    assert!(snc_hodge_weight(&d, &rat(1, 1), 0, 2).unwrap().is_full_pole_piece(&f, 0));
    assert!(!snc_hodge_weight(&d, &rat(1, 1), 1, 2).unwrap().is_full_pole_piece(&f, 1));
    assert!(!snc_hodge_weight(&d, &rat(1, 1), 0, 1).unwrap().is_full_pole_piece(&f, 0));
    assert!(snc_hodge_weight(&d, &rat(1, 2), 0, 0).unwrap().is_full_pole_piece(&f, 0));
}

mod props {
    use super::*;
    use proptest::prelude::*;

    fn arb_case() -> impl Strategy<Value = (SncDivisor, Rational)> {
        (prop::collection::vec(0u32..5, 1..4), 1i64..13).prop_filter_map("constant", |(a, k)| {
            SncDivisor::new(a).ok().map(|d| (d, rat(k, 6)))
        })
    }

    proptest! {
        #[test]
        fn f0_ideals_increase_with_level((d, alpha) in arb_case()) {
            let top = snc_weight_top(&d, &alpha).unwrap();
            for l in 0..top {
                let a = snc_f0_ideal(&d, &alpha, l).unwrap();
                let b = snc_f0_ideal(&d, &alpha, l + 1).unwrap();
                prop_assert!(a.is_subset(&b));
            }
        }

        #[test]
        fn top_level_is_f_lambda((d, alpha) in arb_case()) {
            let top = snc_weight_top(&d, &alpha).unwrap();
            prop_assert_eq!(
                snc_f0_ideal(&d, &alpha, top).unwrap(),
                MonomialIdeal::new(d.dim(), [d.f_lambda(&alpha)])
            );
        }

        #[test]
        fn bottom_level_is_multiplier_ideal((d, alpha) in arb_case()) {
            prop_assert_eq!(snc_f0_ideal(&d, &alpha, 0).unwrap(), snc_multiplier_ideal(&d, &alpha).unwrap());
        }

        #[test]
        fn kernel_generators_match_f0((d, alpha) in arb_case()) {
            let top = snc_weight_top(&d, &alpha).unwrap();
            for l in 0..=top {
                let from_kernel = MonomialIdeal::new(d.dim(), d.kernel_generators(&alpha, l));
                prop_assert_eq!(from_kernel, snc_f0_ideal(&d, &alpha, l).unwrap());
            }
        }
    }
}
