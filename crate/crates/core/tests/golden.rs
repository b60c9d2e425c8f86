mod common;

use common::*;

use origami_ring::backend::angles;
use origami_ring::construction::{
    elementary_monomials, projection_set, representatives, step, GenerationSet, DEFAULT_MAX_POINTS,
};
use origami_ring::geometry::{intersect, project_to_real_axis, UnitAngle};
use origami_ring::ring::{
    check_ring, same_lattice, tangent_point, verify_certificate, HermiteSolver, RingContext, RingVerdict,
};
use origami_ring::scalar::ExactScalar;

fn unit(k: i64) -> UnitAngle {
    UnitAngle::new(zeta12(k)).unwrap()
}

#[test]
fn twelfths_suite() {
    twelfths().unwrap();
}

#[test]
fn parametric_suite() {
    parametric_family().unwrap();
}

#[test]
fn three_angle_suite() {
    three_angle_criterion().unwrap();
}

#[test]
fn intersections_through_zero_and_one() {
    let zero = ExactScalar::from(0);
    let one = ExactScalar::from(1);
    let z3 = intersect(&unit(2), &unit(3), &zero, &one).unwrap();
    assert!(z3.value_eq(&zeta12(2).scale(&q(2, 1))));
    let z1 = intersect(&unit(1), &unit(3), &zero, &one).unwrap();
    assert!(z1.value_eq(&(&ExactScalar::from(1) + &(&zeta12(3) * &sqrt3()).scale(&q(1, 3)))));

    assert_eq!(project_to_real_axis(&z3, &unit(1)).unwrap().as_rational(), Some(q(-2, 1)));
    assert_eq!(project_to_real_axis(&z1, &unit(2)).unwrap().as_rational(), Some(q(2, 3)));
}

#[test]
fn first_generation_of_twelfths() {
    let set = angles(TWELFTHS).unwrap();
    let s1 = step(&GenerationSet::initial(&set), &set, DEFAULT_MAX_POINTS).unwrap();
    assert_eq!(s1.len(), 8);
    let ctx = RingContext::new(&set).unwrap();
    for z in &ctx.generators {
        assert!(s1.contains(z));
        assert!(s1.contains(&(&z.one_like() - z)));
    }
    assert!(s1.contains(&ExactScalar::from(0)));
}

#[test]
fn elementary_monomials_of_twelfths() {
    let set = angles(TWELFTHS).unwrap();
    let values: Vec<ExactScalar> = elementary_monomials(&set).unwrap().into_iter().map(|m| m.value).collect();
    assert_eq!(values.len(), 8);
    assert!(values.iter().any(|v| v.value_eq(&zeta12(2).scale(&q(2, 1)))));
    let reps = representatives(&set).unwrap();
    assert_eq!(reps.len(), 3);
}

#[test]
fn projection_values_of_twelfths() {
    let set = angles(TWELFTHS).unwrap();
    let ps = projection_set(&set).unwrap();
    let mut got: Vec<_> = ps.values.iter().map(|v| v.as_rational().unwrap()).collect();
    got.sort();
    let mut want = vec![q(-2, 1), q(-1, 2), q(0, 1), q(1, 3), q(2, 3), q(1, 1), q(3, 2), q(3, 1)];
    want.sort();
    assert_eq!(got, want);
}

#[test]
fn tangent_form_matches_intersection() {
    // ray from 0 at pi/6 meets the line through 1 at pi/3
    let x = tangent_point(&unit(2), &unit(1)).unwrap();
    let want = &ExactScalar::from(0) + &(&ExactScalar::from(3).scale(&q(1, 2)) + &(&zeta12(3) * &sqrt3()).scale(&q(1, 2)));
    assert!(x.value_eq(&want));
    assert!(x.value_eq(&(&sqrt3() * &zeta12(1))));
    // vertical directions fall back to the intersection formula
    let v = tangent_point(&unit(3), &unit(1)).unwrap();
    assert!(v.value_eq(&intersect(&unit(1), &unit(3), &ExactScalar::from(0), &ExactScalar::from(1)).unwrap()));
}

#[test]
fn lattice_equality_examples() {
    let x = zeta12(2);
    assert!(same_lattice(&x, &x).unwrap());
    assert!(same_lattice(&x, &(&x + &ExactScalar::from(1))).unwrap());
    assert!(same_lattice(&x, &(&ExactScalar::from(1) - &x.conj())).unwrap());
    let i = zeta12(3);
    assert!(!same_lattice(&i, &i.scale(&q(2, 1))).unwrap());
    assert!(same_lattice(&i, &(-&i)).unwrap());
}

#[test]
fn mixed_denominators_are_certified() {
    let set = angles(MIXED).unwrap();
    let ctx = RingContext::new(&set).unwrap();
    let verdict = check_ring(&ctx, 3, &HermiteSolver).unwrap();
    let RingVerdict::RingModule(certs) = verdict else {
        panic!("expected a ring, got {}", verdict.label());
    };
    assert_eq!(certs.len(), ctx.products().len());
    for c in &certs {
        assert!(verify_certificate(c, &ctx).unwrap());
    }
}

#[test]
fn parametric_three_angles_stay_undecided() {
    let set = angles("0,param:1,param:2").unwrap();
    let ctx = RingContext::new(&set).unwrap();
    let v = check_ring(&ctx, 3, &HermiteSolver).unwrap();
    assert_eq!(v.label(), "unknown");
}
