mod common;

use common::*;
use num_bigint::BigInt;
use proptest::prelude::*;

use origami_ring::backend::angles;
use origami_ring::ring::{
    evaluate, membership, CertificateTerm, EnumerateSolver, HermiteSolver, IntegerSolver, MembershipProblem,
    RingContext,
};
use origami_ring::ring::membership::exponent_vectors;
use origami_ring::scalar::ExactScalar;

fn twelfths_context() -> RingContext {
    RingContext::new(&angles(TWELFTHS).unwrap()).unwrap()
}

fn problem(ctx: &RingContext, target: ExactScalar, d: usize) -> MembershipProblem {
    MembershipProblem {
        target,
        generators: ctx.generators.clone(),
        projections: ctx.projection_basis(),
        degree_bound: d,
    }
}

fn planted_terms(coeffs: &[i64], d: usize, gens: usize, vars: usize) -> Vec<CertificateTerm> {
    let exps = exponent_vectors(vars, d);
    let mut out = Vec::new();
    let mut c = coeffs.iter().cycle();
    for g in 0..gens {
        for e in &exps {
            let k = *c.next().unwrap();
            if k == 0 {
                continue;
            }
            out.push(CertificateTerm {
                generator: g,
                monomial: e.iter().enumerate().filter(|(_, &x)| x > 0).map(|(i, &x)| (i, x)).collect(),
                coefficient: BigInt::from(k),
            });
        }
    }
    out
}

fn mat_vec(a: &[Vec<BigInt>], x: &[BigInt]) -> Vec<BigInt> {
    a.iter().map(|row| row.iter().zip(x).map(|(p, q)| p * q).sum()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn planted_decompositions_are_recovered(coeffs in prop::collection::vec(-3i64..=3, 1..12), d in 0usize..=2) {
        let ctx = twelfths_context();
        let basis = ctx.projection_basis();
        let terms = planted_terms(&coeffs, d, ctx.generators.len(), basis.len());
        let target = evaluate(&terms, &ctx.generators, &basis).unwrap();
        let found = membership(&problem(&ctx, target.clone(), d), &HermiteSolver).unwrap();
        let found = found.expect("planted instance must be found");
        prop_assert!(evaluate(&found, &ctx.generators, &basis).unwrap().value_eq(&target));
        let deg = found.iter().map(|t| t.monomial.values().sum::<u32>()).max().unwrap_or(0);
        prop_assert!(deg as usize <= d);
    }

    #[test]
    fn solvers_agree_on_small_systems(
        a in prop::collection::vec(prop::collection::vec(-3i64..=3, 4), 3),
        x in prop::collection::vec(-2i64..=2, 4),
        shift in prop::collection::vec(0i64..=1, 3),
    ) {
        let a: Vec<Vec<BigInt>> = a.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect();
        let x: Vec<BigInt> = x.into_iter().map(BigInt::from).collect();
        let mut b = mat_vec(&a, &x);
        for (bi, s) in b.iter_mut().zip(&shift) {
            *bi += *s;
        }
        let h = HermiteSolver.solve(&a, &b);
        let e = EnumerateSolver::default().solve(&a, &b);
        if let Some(sol) = &h {
            prop_assert_eq!(mat_vec(&a, sol), b.clone());
        }
        if let Some(sol) = &e {
            prop_assert_eq!(mat_vec(&a, sol), b.clone());
            prop_assert!(h.is_some(), "complete solver missed a solution");
        }
        if shift.iter().all(|&s| s == 0) {
            prop_assert!(h.is_some());
        }
    }
}

#[test]
fn non_members_are_reported() {
    let ctx = twelfths_context();
    // 1/7 is not in Z[1/6]
    let target = ctx.generators[0].scale(&q(1, 7));
    for d in 0..=3 {
        assert!(membership(&problem(&ctx, target.clone(), d), &HermiteSolver).unwrap().is_none());
    }
    // sqrt(3)/5 has a denominator outside Z[1/6]
    let target = sqrt3().scale(&q(1, 5));
    assert!(membership(&problem(&ctx, target, 3), &HermiteSolver).unwrap().is_none());
}

#[test]
fn certificates_use_the_fewest_degrees_needed() {
    let ctx = twelfths_context();
    let c = ctx.certify([1, 2], 3, &HermiteSolver).unwrap().unwrap();
    assert_eq!(c.degree(), 0);
    let basis = ctx.projection_basis();
    // z3 / 3 is outside the integer span of 1, z1, z2 = 3/2 z1, z3
    let target = ctx.generators[3].scale(&q(1, 3));
    assert!(membership(&problem(&ctx, target.clone(), 0), &HermiteSolver).unwrap().is_none());
    let terms = (1..=3)
        .find_map(|d| membership(&problem(&ctx, target.clone(), d), &HermiteSolver).unwrap())
        .expect("decomposition with projections");
    assert!(evaluate(&terms, &ctx.generators, &basis).unwrap().value_eq(&target));
}

#[test]
fn enumerate_solver_certifies_twelfths() {
    let ctx = twelfths_context();
    let solver = EnumerateSolver::default();
    for ids in ctx.products() {
        let c = ctx.certify(ids, 2, &solver).unwrap().expect("certificate");
        assert!(origami_ring::ring::verify_certificate(&c, &ctx).unwrap());
    }
}
