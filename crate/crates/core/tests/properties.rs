use std::sync::Arc;

use proptest::prelude::*;

use ruijsenaars::macdonald::{apply_dn, DifferenceOperatorSpec};
use ruijsenaars::partitions::Partition;
use ruijsenaars::series::{Monomial, Ring, Series, VariableSet};
use ruijsenaars::{rat, Rational};

fn ring() -> Arc<Ring> {
    Ring::new(VariableSet::new(["y1", "y2"]).unwrap(), 3)
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=7).prop_map(|(a, b)| rat(a, b))
}

fn series() -> impl Strategy<Value = Series> {
    proptest::collection::vec(((0u32..=3, 0u32..=3), small_rational()), 0..6).prop_map(|terms| {
        let r = ring();
        Series::from_terms(&r, terms.into_iter().map(|((a, b), c)| (Monomial(vec![a, b]), c)))
    })
}

proptest! {
    #[test]
    fn multiplication_is_commutative_and_associative(a in series(), b in series(), c in series()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn multiplication_distributes(a in series(), b in series(), c in series()) {
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn unit_inverse(a in series(), c in small_rational()) {
        prop_assume!(c != rat(0, 1));
        let r = ring();
        let u = &Series::constant(&r, c) + &a.filter(|m| m.degree() > 0);
        let inv = u.invert_unit().unwrap();
        prop_assert_eq!(&u * &inv, Series::one(&r));
    }

    #[test]
    fn canonical_text_is_injective(a in series(), b in series()) {
        prop_assert_eq!(a == b, a.to_canonical_text() == b.to_canonical_text());
    }

    #[test]
    fn difference_operator_is_linear(a in series(), b in series(), c in small_rational()) {
        let spec = DifferenceOperatorSpec { n: 3, s: vec![rat(3, 2), rat(7, 5), rat(13, 11)], q: rat(2, 5), t: rat(3, 7) };
        let lhs = apply_dn(&(&a + &b.scale(&c)), &spec).unwrap();
        let rhs = &apply_dn(&a, &spec).unwrap() + &apply_dn(&b, &spec).unwrap().scale(&c);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn conjugation_is_an_involution(parts in proptest::collection::vec(1u32..=6, 0..6)) {
        let mut parts = parts;
        parts.sort_unstable_by(|a, b| b.cmp(a));
        let p = Partition::new(parts).unwrap();
        prop_assert_eq!(p.conjugate().conjugate(), p.clone());
        prop_assert_eq!(p.conjugate().size(), p.size());
    }
}
