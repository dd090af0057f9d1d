use super::*;
use crate::exactalg::{poly_parse, rat};

fn op(text: &str, dim: usize) -> WeylOperator {
    WeylOperator::parse(text, dim).unwrap()
}

fn spoly(text: &str, dim: usize) -> Polynomial {
    // Numerators live in x1..xn plus s, written here as x{n+1}.
    poly_parse(text, dim + 1).unwrap()
}

#[test]
fn leibniz_normal_ordering() {
    assert_eq!(op("d1*x1", 1), op("x1*d1 + 1", 1));
    assert_eq!(op("d1^2*x1", 1), op("x1*d1^2 + 2*d1", 1));
    assert_eq!(op("d1*x1^2", 1).to_string(), "x1^2*d1 + 2*x1");
    assert_eq!(op("s*d1*x2", 2), op("x2*d1*s", 2));
}

#[test]
fn printing_round_trips() {
    let e = op("1/2*x1*d1 + 1/2*x2*d2", 2);
    assert_eq!(e.to_string(), "1/2*x1*d1 + 1/2*x2*d2");
    let t = op("x1*d1 - s + 1", 1);
    assert_eq!(WeylOperator::parse(&t.to_string(), 1).unwrap(), t);
}

#[test]
fn total_order_examples() {
    assert_eq!(op("s*d1", 1).total_order(), Some(2));
    assert_eq!(op("x1*d1 - s", 1).total_order(), Some(1));
    assert_eq!(WeylOperator::zero(1).total_order(), None);
}

#[test]
fn twisted_action_examples() {
    let f = poly_parse("x1", 1).unwrap();
    let r = apply_to_twisted(&op("d1", 1), &f, &TwistedSection::power(1, 1));
    assert_eq!(r.canonical(&f), (spoly("x2 + 1", 1), 0));

    let f = poly_parse("x1^2", 1).unwrap();
    let r = apply_to_twisted(&op("1/4*d1^2", 1), &f, &TwistedSection::power(1, 1));
    assert_eq!(r.canonical(&f), (spoly("x2^2 + 3/2*x2 + 1/2", 1), 0));

    let f = poly_parse("x1*x2", 2).unwrap();
    let r = apply_to_twisted(&op("x1*d1 - s + 1", 2), &f, &TwistedSection::power(2, -1));
    assert!(r.is_zero());
}

#[test]
fn basis_example() {
    let b = bounded_operator_basis(1, 1, 1, None);
    let texts: Vec<_> = b.iter().map(|m| m.to_string()).collect();
    assert_eq!(texts, ["1", "x1", "d1", "x1*d1"]);
    assert_eq!(bounded_operator_basis(2, 2, 0, Some(2)).len(), 10);
}

#[test]
fn syzygy_examples() {
    let x = op("x1", 1);
    let k = syzygy_kernel(&[x.clone(), x.clone()], 0, 0);
    assert!(k.tuples.iter().any(|t| t[0] == op("1", 1) && t[1] == op("-1", 1)));

    let targets = [op("d1", 1), op("1", 1)];
    let k = syzygy_kernel(&targets, 1, 0);
    assert!(k.tuples.iter().any(|t| t[0] == op("1", 1) && t[1] == op("-d1", 1)));
    for t in &k.tuples {
        assert!(recombine(t, &targets).is_zero());
    }

    let targets = [op("x1*d1 - x2*d2", 2), op("x1*x2", 2)];
    let k = syzygy_kernel(&targets, 1, 2);
    assert!(!k.tuples.is_empty());
    for t in &k.tuples {
        assert!(recombine(t, &targets).is_zero());
    }
}

#[test]
fn pochhammer_values() {
    assert_eq!(pochhammer(&rat(1, 2), 0), rat(1, 1));
    assert_eq!(pochhammer(&rat(1, 1), 3), rat(6, 1));
    assert_eq!(pochhammer(&rat(-1, 2), 2), rat(-1, 4));
}

mod props {
    use super::*;
    use crate::exactalg::Monomial;
    use proptest::prelude::*;

    fn arb_op(dim: usize) -> impl Strategy<Value = WeylOperator> {
        prop::collection::vec(
            (
                prop::collection::vec(0u32..3, dim),
                prop::collection::vec(0u32..3, dim),
                0u32..2,
                -5i64..6,
                1i64..4,
            ),
            0..4,
        )
        .prop_map(move |ts| {
            let mut o = WeylOperator::zero(dim);
            for (x, d, s, n, den) in ts {
                o.add_term(WeylMonomial { x: Monomial(x), d: Monomial(d), s }, rat(n, den));
            }
            o
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn canonical_commutators(i in 0usize..2, j in 0usize..2) {
            let d = WeylOperator::d(2, i);
            let x = WeylOperator::x(2, j);
            let expected = if i == j { WeylOperator::one(2) } else { WeylOperator::zero(2) };
            prop_assert_eq!(d.commutator(&x), expected);
            prop_assert!(WeylOperator::s(2).commutator(&d).is_zero());
        }

        #[test]
        fn multiplication_is_associative(a in arb_op(2), b in arb_op(2), c in arb_op(2)) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }

        #[test]
        fn order_is_subadditive(a in arb_op(2), b in arb_op(2)) {
            if let (Some(p), Some(q)) = (a.total_order(), b.total_order()) {
                let prod = a.mul(&b);
                if let Some(r) = prod.total_order() {
                    prop_assert!(r <= p + q);
                }
                prop_assert!(a.commutator(&b).total_order().map_or(true, |r| r + 1 <= p + q || p + q == 0));
            }
        }

        #[test]
        fn action_is_a_module_action(a in arb_op(2), b in arb_op(2)) {
            let f = poly_parse("x1^2 + x2^3", 2).unwrap();
            let sec = TwistedSection::power(2, 1);
            let lhs = apply_to_twisted(&a.mul(&b), &f, &sec);
            let rhs = apply_to_twisted(&a, &f, &apply_to_twisted(&b, &f, &sec));
            prop_assert_eq!(lhs.canonical(&f), rhs.canonical(&f));
        }

        #[test]
        fn print_parse_round_trip(a in arb_op(3)) {
            prop_assert_eq!(WeylOperator::parse(&a.to_string(), 3).unwrap(), a);
        }
    }
}
