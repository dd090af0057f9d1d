use super::*;
use alloc::vec;
use alloc::vec::Vec;

fn w(ws: &[(i64, i64)]) -> WeightVector {
    WeightVector::new(ws.iter().map(|&(n, d)| rat(n, d)).collect()).unwrap()
}

fn mono(e: &[u32]) -> Monomial {
    Monomial(e.to_vec())
}

fn ideal(dim: usize, gens: &[&[u32]]) -> MonomialIdeal {
    MonomialIdeal::new(dim, gens.iter().map(|g| mono(g)))
}

#[test]
fn parse_collects_like_terms() {
    let p = poly_parse("3/2*x1 - x1", 1).unwrap();
    assert_eq!(p, Polynomial::term(rat(1, 2), mono(&[1])));
    assert_eq!(poly_print(&p), "1/2*x1");
}

#[test]
fn parse_ignores_whitespace_and_prints_canonically() {
    let p = poly_parse(" x2^3 +x1 ^2", 2).unwrap();
    assert_eq!(poly_print(&p), "x2^3 + x1^2");
    assert_eq!(poly_parse(&poly_print(&p), 2).unwrap(), p);
    let q = poly_parse("-2*x1*x2 + 1 - 7/3*x2", 2).unwrap();
    assert_eq!(poly_print(&q), "-2*x1*x2 - 7/3*x2 + 1");
}

#[test]
fn parse_errors() {
    assert!(matches!(poly_parse("x3", 2), Err(ExactAlgError::VariableOutOfRange { .. })));
    assert!(matches!(poly_parse("x1 +", 1), Err(ExactAlgError::Syntax { .. })));
    assert!(matches!(poly_parse("x0", 1), Err(ExactAlgError::Syntax { .. })));
    assert_eq!(poly_parse("1/0", 1), Err(ExactAlgError::ZeroDenominator));
    assert!(poly_parse("d1", 1).is_err());
}

#[test]
fn weighted_degree_example() {
    let d = weighted_degree(&mono(&[1, 1]), &w(&[(1, 2), (1, 3)])).unwrap();
    assert_eq!(d, rat(5, 6));
    assert!(weighted_degree(&mono(&[1]), &w(&[(1, 2), (1, 3)])).is_err());
    assert!(WeightVector::new(vec![rat(0, 1)]).is_err());
}

#[test]
fn graded_ideal_examples() {
    let wt = w(&[(1, 2), (1, 3)]);
    assert_eq!(graded_ideal(&wt, &rat(0, 1), true), ideal(2, &[&[1, 0], &[0, 1]]));
    assert_eq!(graded_ideal(&wt, &rat(-1, 3), true), MonomialIdeal::unit(2));
    assert_eq!(graded_ideal(&wt, &rat(0, 1), false), MonomialIdeal::unit(2));
    assert_eq!(
        graded_ideal(&wt, &rat(2, 3), true),
        ideal(2, &[&[2, 0], &[1, 1], &[0, 3]])
    );
}

#[test]
fn ideal_operations() {
    let x = ideal(2, &[&[1, 0]]);
    let y = ideal(2, &[&[0, 1]]);
    let xy = ideal(2, &[&[1, 1]]);
    let sum = x.sum(&y);
    assert_eq!(sum, ideal(2, &[&[1, 0], &[0, 1]]));
    assert!(xy.is_subset(&sum));
    assert!(!sum.is_subset(&xy));
    assert_eq!(sum.scale(&mono(&[1, 1])), ideal(2, &[&[2, 1], &[1, 2]]));
}

#[test]
fn exact_division() {
    let f = poly_parse("x1^2 + x2^3", 2).unwrap();
    let g = poly_parse("x1 - 2*x2", 2).unwrap();
    assert_eq!(f.mul(&g).exact_div(&f), Some(g.clone()));
    assert_eq!(g.exact_div(&f), None);
    assert_eq!(f.pow(3).mul(&g).strip_factor(&f), (3, g));
}

#[test]
fn echelon_span_membership_and_kernel() {
    use linalg::{combine, EchelonSpan, Insertion, SparseVec};
    let v = |e: &[(u32, i64)]| -> SparseVec<u32> { e.iter().map(|&(k, c)| (k, int(c))).collect() };
    let family = vec![v(&[(0, 1), (1, 1)]), v(&[(1, 1), (2, 1)]), v(&[(0, 1), (2, -1)])];
    let mut span = EchelonSpan::new(true);
    let mut kernel = Vec::new();
    for f in &family {
        if let Insertion::Dependent(c) = span.insert(f.clone()) {
            kernel.push(c);
        }
    }
    assert_eq!(span.rank(), 2);
    assert_eq!(kernel.len(), 1);
    assert!(combine(&family, &kernel[0]).is_empty());
    let target = v(&[(0, 2), (2, 5), (1, 7)]);
    let (rem, combo) = span.reduce(&target);
    assert!(rem.is_empty());
    assert_eq!(combine(&family, &combo), target);
    assert!(!span.contains(&v(&[(0, 1)])));
}

mod props {
    use super::*;
    use proptest::prelude::*;

    fn arb_poly(dim: usize) -> impl Strategy<Value = Polynomial> {
        prop::collection::vec(
            (prop::collection::vec(0u32..4, dim), -9i64..10, 1i64..5),
            0..6,
        )
        .prop_map(move |ts| {
            Polynomial::from_terms(dim, ts.into_iter().map(|(e, n, d)| (Monomial(e), rat(n, d))))
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(p in arb_poly(3)) {
            prop_assert_eq!(poly_parse(&poly_print(&p), 3).unwrap(), p);
        }

        #[test]
        fn product_is_commutative_and_divisible(p in arb_poly(2), q in arb_poly(2)) {
            let pq = p.mul(&q);
            prop_assert_eq!(&pq, &q.mul(&p));
            if !q.is_zero() {
                prop_assert_eq!(pq.exact_div(&q), Some(p.clone()));
            }
        }

        #[test]
        fn graded_ideal_is_decreasing(a in -6i64..12, b in -6i64..12, strict in any::<bool>()) {
            let wt = w(&[(1, 2), (1, 3), (2, 5)]);
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let big = graded_ideal(&wt, &rat(lo, 6), strict);
            let small = graded_ideal(&wt, &rat(hi, 6), strict);
            prop_assert!(small.is_subset(&big));
            prop_assert!(graded_ideal(&wt, &rat(lo, 6), true).is_subset(&graded_ideal(&wt, &rat(lo, 6), false)));
        }

        #[test]
        fn graded_ideal_generators_have_right_degree(g in -3i64..15, strict in any::<bool>()) {
            let wt = w(&[(1, 2), (1, 3)]);
            let gamma = rat(g, 6);
            let id = graded_ideal(&wt, &gamma, strict);
            for m in Monomial::all_up_to(2, 8) {
                let d = wt.degree(&m).unwrap();
                let expected = if strict { d > gamma } else { d >= gamma };
                prop_assert_eq!(id.contains_monomial(&m), expected);
            }
        }

        #[test]
        fn ideal_sum_and_product_laws(
            a in prop::collection::vec(prop::collection::vec(0u32..4, 2), 1..4),
            b in prop::collection::vec(prop::collection::vec(0u32..4, 2), 1..4),
        ) {
            let i = MonomialIdeal::new(2, a.into_iter().map(Monomial));
            let j = MonomialIdeal::new(2, b.into_iter().map(Monomial));
            prop_assert_eq!(i.sum(&j), j.sum(&i));
            prop_assert!(i.is_subset(&i.sum(&j)));
            prop_assert!(i.product(&j).is_subset(&i));
            prop_assert_eq!(i.product(&j), j.product(&i));
        }
    }
}
