mod common;

use std::collections::HashSet;

use common::*;
use proptest::prelude::*;

use origami_ring::backend::angles;
use origami_ring::construction::{
    closure_to_depth, monomials_to_length, projection_set, representatives, step, ConstructionConfig,
    ConstructionError, GenerationSet, DEFAULT_MAX_POINTS,
};
use origami_ring::geometry::{intersect, AngleSet};
use origami_ring::ring::{membership, HermiteSolver, MembershipProblem, RingContext};
use origami_ring::scalar::ExactScalar;

fn decomposes(ctx: &RingContext, target: &ExactScalar, max_degree: usize) -> bool {
    (0..=max_degree).any(|d| {
        let problem = MembershipProblem {
            target: target.clone(),
            generators: ctx.generators.clone(),
            projections: ctx.projection_basis(),
            degree_bound: d,
        };
        membership(&problem, &HermiteSolver).unwrap().is_some()
    })
}

/// One generation step by brute force over all point and direction pairs.
fn naive_step(g: &GenerationSet, set: &AngleSet) -> GenerationSet {
    let pts: Vec<ExactScalar> = g.values().cloned().collect();
    let mut out: Vec<ExactScalar> = pts.clone();
    for (a, b) in set.ordered_pairs() {
        for p in &pts {
            for q in &pts {
                out.push(intersect(set.get(a), set.get(b), p, q).unwrap());
            }
        }
    }
    GenerationSet::from_points(g.depth() + 1, out)
}

#[test]
fn step_matches_brute_force() {
    for spec in [TWELFTHS, EISENSTEIN, PARAM] {
        let set = angles(spec).unwrap();
        let s0 = GenerationSet::initial(&set);
        let s1 = step(&s0, &set, DEFAULT_MAX_POINTS).unwrap();
        assert_eq!(s1, naive_step(&s0, &set), "{spec}");
        let s2 = step(&s1, &set, DEFAULT_MAX_POINTS).unwrap();
        assert_eq!(s2, naive_step(&s1, &set), "{spec}");
    }
}

#[test]
fn generations_grow_monotonically() {
    for (spec, depth) in [(TWELFTHS, 2), (EISENSTEIN, 3), (PARAM, 2), (MIXED, 2)] {
        let gens = generations(&angles(spec).unwrap(), depth, 200_000);
        for w in gens.windows(2) {
            assert!(w[0].is_subset_of(&w[1]), "{spec}");
            assert!(w[0].len() <= w[1].len());
        }
    }
}

#[test]
fn generations_are_symmetric_under_one_minus() {
    for (spec, depth) in [(TWELFTHS, 2), (EISENSTEIN, 3), (PARAM, 2)] {
        let gens = generations(&angles(spec).unwrap(), depth, 200_000);
        for g in &gens {
            for p in g.values() {
                assert!(g.contains(&(&p.one_like() - p)), "{spec}: 1 - {p}");
            }
        }
    }
}

#[test]
fn cap_reports_partial_generation() {
    let set = angles(TWELFTHS).unwrap();
    let cfg = ConstructionConfig::new(set).with_depth(3).with_max_points(500);
    match closure_to_depth(&cfg) {
        Err(ConstructionError::CapExceeded { depth, completed, partial, .. }) => {
            assert_eq!(completed.len(), depth);
            assert_eq!(partial.len(), 500);
            assert_eq!(partial.depth(), depth);
        }
        other => panic!("expected the cap to trigger, got {other:?}"),
    }
}

#[test]
fn projections_scale_monomials() {
    let set = angles(TWELFTHS).unwrap();
    let gens = generations(&set, 2, DEFAULT_MAX_POINTS);
    let zero = set.constant(0);
    for p in projection_set(&set).unwrap().basis {
        assert!(gens[2].contains(&p.value), "projection {} not in S_2", p.value);
        for m in representatives(&set).unwrap() {
            let scaled = intersect(set.get(m.alpha), set.get(m.beta), &zero, &p.value).unwrap();
            assert_eq!(scaled, &p.value * &m.value);
        }
    }
}

#[test]
fn length_two_monomials_decompose() {
    let set = angles(TWELFTHS).unwrap();
    let ctx = RingContext::new(&set).unwrap();
    let monos = monomials_to_length(&set, 2, 10_000).unwrap();
    assert!(monos.len() > 8);
    for m in monos {
        assert!(decomposes(&ctx, &m.value, 2), "{:?}", m.factors);
    }
}

#[test]
fn sums_of_points_decompose() {
    let set = angles(TWELFTHS).unwrap();
    let ctx = RingContext::new(&set).unwrap();
    let gens = generations(&set, 2, DEFAULT_MAX_POINTS);
    let pts = sample(&gens[2], 30);
    for (a, b) in pts.iter().zip(pts.iter().rev()) {
        assert!(decomposes(&ctx, &(a + b), 3));
        assert!(decomposes(&ctx, &(a - b), 3));
    }
}

fn keys(g: &GenerationSet) -> HashSet<String> {
    g.iter().map(|(k, _)| k.to_string()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn angle_order_does_not_matter(order in Just(vec![0usize, 1, 2, 3]).prop_shuffle()) {
        let set = angles(TWELFTHS).unwrap();
        let shuffled = set.permuted(&order);
        let a = generations(&set, 2, DEFAULT_MAX_POINTS);
        let b = generations(&shuffled, 2, DEFAULT_MAX_POINTS);
        for (x, y) in a.iter().zip(&b) {
            prop_assert_eq!(keys(x), keys(y));
        }
    }
}
