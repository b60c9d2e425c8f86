mod common;

use common::*;
use proptest::prelude::*;

use origami_ring::backend::angles;
use origami_ring::ring::{lattice_coordinates, quadratic_integer_test, same_lattice};
use origami_ring::scalar::ExactScalar;

fn rational() -> impl Strategy<Value = num_rational::BigRational> {
    (-8i64..=8, 1i64..=4).prop_map(|(n, d)| q(n, d))
}

/// `a + b zeta12^k` with `b != 0` and `k` not a multiple of 6, so non-real.
fn non_real() -> impl Strategy<Value = ExactScalar> {
    (rational(), rational(), 1i64..6)
        .prop_filter("b != 0", |(_, b, _)| *b != q(0, 1))
        .prop_map(|(a, b, k)| &zeta12(0).scale(&a) + &zeta12(k).scale(&b))
}

/// Whether `y = m + n x` for small integers, by search.
fn in_span(y: &ExactScalar, x: &ExactScalar) -> bool {
    (-12i64..=12).any(|n| {
        (-40i64..=40).any(|m| (&ExactScalar::from(m) + &x.scale(&q(n, 1))).value_eq(y))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn same_lattice_matches_search(x in non_real(), sign in prop::bool::ANY, k in -5i64..=5, twist in 0usize..4) {
        let base = if sign { x.clone() } else { -&x };
        let y = match twist {
            0 => &base + &ExactScalar::from(k),
            1 => &base + &ExactScalar::from(k).scale(&q(1, 2)),
            2 => &base.scale(&q(2, 1)) + &ExactScalar::from(k),
            _ => &(&base + &x.scale(&q(3, 1))) + &ExactScalar::from(k),
        };
        prop_assume!(!y.is_real());
        let expected = in_span(&y, &x) && in_span(&x, &y);
        prop_assert_eq!(same_lattice(&x, &y).unwrap(), expected);
        prop_assert_eq!(same_lattice(&y, &x).unwrap(), expected);
    }

    #[test]
    fn quadratic_test_matches_expansion(x in non_real()) {
        let t = quadratic_integer_test(&x).unwrap();
        let poly = conjugate_pair_polynomial(&x);
        let integral = poly.iter().all(|c| c.is_integer());
        prop_assert_eq!(t.is_quadratic_integer(), integral);
        if let Some((l, m)) = &t.relation {
            let lhs = &x * &x;
            let rhs = &x.scale(&l.clone().into()) + &x.one_like().scale(&m.clone().into());
            prop_assert!(lhs.value_eq(&rhs));
        }
    }

    #[test]
    fn lattice_coordinates_round_trip(x in non_real(), m in -20i64..=20, n in -20i64..=20) {
        let p = &ExactScalar::from(m) + &x.scale(&q(n, 1));
        let (gm, gn) = lattice_coordinates(&p, &x).unwrap().unwrap();
        prop_assert_eq!((gm, gn), (m.into(), n.into()));
        let off = &p + &ExactScalar::from(1).scale(&q(1, 3));
        prop_assert!(lattice_coordinates(&off, &x).unwrap().is_none());
    }
}

#[test]
fn real_values_are_rejected() {
    assert!(same_lattice(&ExactScalar::from(2), &zeta12(1)).is_err());
    assert!(quadratic_integer_test(&sqrt3()).is_err());
}

#[test]
fn three_angle_generations_stay_in_the_lattice() {
    for spec in [EISENSTEIN, "0,pi*1/4,pi*1/2", TILTED] {
        let set = angles(spec).unwrap();
        let x = origami_ring::ring::RingContext::new(&set).unwrap().generators[1].clone();
        let gens = generations(&set, 2, 50_000);
        for p in gens.last().unwrap().values() {
            assert!(lattice_coordinates(p, &x).unwrap().is_some(), "{spec}: {p}");
        }
    }
}
