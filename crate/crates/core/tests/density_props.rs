mod common;

use common::*;

use origami_ring::backend::angles;
use origami_ring::density::approximate;
use origami_ring::ring::{membership, HermiteSolver, MembershipProblem, RingContext};

#[test]
fn random_targets_twelfths() {
    density_suite(TWELFTHS, 100, 7).unwrap();
}

#[test]
fn random_targets_other_sets() {
    density_suite(MIXED, 20, 11).unwrap();
    density_suite("0,pi*1/4,pi*1/2,pi*3/4", 20, 13).unwrap();
}

#[test]
fn witnesses_have_the_stated_form() {
    let set = angles(TWELFTHS).unwrap();
    let ctx = RingContext::new(&set).unwrap();
    for target in [(q(1, 3), q(1, 2)), (q(-3, 2), q(7, 5)), (q(0, 1), q(1, 1))] {
        let w = approximate(&set, target, q(1, 100)).unwrap();
        let p = &w.p.value;
        let rebuilt = &p.pow(w.n1).scale(&w.a.clone().into()) + &(&p.pow(w.n2) * &w.z).scale(&w.b.clone().into());
        assert!(rebuilt.value_eq(&w.value));
        assert!(ctx.generators.contains(&w.z));
        // p^k z is a module element of degree k
        let problem = MembershipProblem {
            target: &p.pow(2) * &w.z,
            generators: ctx.generators.clone(),
            projections: ctx.projection_basis(),
            degree_bound: 2,
        };
        assert!(membership(&problem, &HermiteSolver).unwrap().is_some());
    }
}

#[test]
fn tighter_tolerance_needs_no_fewer_steps() {
    let set = angles(TWELFTHS).unwrap();
    let target = (q(5, 7), q(-4, 3));
    let coarse = approximate(&set, target.clone(), q(1, 10)).unwrap();
    let fine = approximate(&set, target, q(1, 100_000)).unwrap();
    assert!(fine.n2 >= coarse.n2);
    assert!(fine.check_exact().unwrap());
}
