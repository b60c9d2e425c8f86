//! Fixtures and checks shared by the integration tests and the acceptance
//! runner. Checks return `Err` with a description instead of panicking.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;

use origami_ring::backend::angles;
use origami_ring::construction::{closure_to_depth, ConstructionConfig, ConstructionError, GenerationSet};
use origami_ring::geometry::AngleSet;
use origami_ring::ring::{
    check_ring, evaluate, membership, HermiteSolver, MembershipProblem, RingContext, RingVerdict,
};
use origami_ring::scalar::{CyclotomicElement, CyclotomicField, ExactScalar, ParamRational, Poly};

pub const TWELFTHS: &str = "0,pi*1/6,pi*1/3,pi*1/2";
pub const MIXED: &str = "0,pi*1/6,pi*1/4,pi*1/3";
pub const FIFTH: &str = "0,pi*1/5,pi*1/4,pi*1/3";
pub const EISENSTEIN: &str = "0,pi*1/3,pi*2/3";
pub const TILTED: &str = "0,pi*1/6,pi*1/2";
pub const PARAM: &str = "0,param:1,param:2,param:3";

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn zeta12(k: i64) -> ExactScalar {
    CyclotomicElement::root_of_unity(&CyclotomicField::get(12), k).into()
}

/// `2 cos(pi/6)`
pub fn sqrt3() -> ExactScalar {
    &zeta12(1) + &zeta12(-1)
}

pub fn t_poly(coeffs: &[i64]) -> ExactScalar {
    ParamRational::from_poly(Poly::new(coeffs.iter().map(|&c| q(c, 1)).collect())).into()
}

pub fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn eq(label: &str, got: &ExactScalar, want: &ExactScalar) -> Result<(), String> {
    ensure(got.value_eq(want), || format!("{label}: got {got}, expected {want}"))
}

/// Generators, projections and all six product identities for the
/// pi/6, pi/3, pi/2 configuration, with certificates at degree <= 2.
pub fn twelfths() -> Result<(), String> {
    let set = angles(TWELFTHS).map_err(|e| e.to_string())?;
    let ctx = RingContext::new(&set).map_err(|e| e.to_string())?;
    let g = &ctx.generators;
    ensure(g.len() == 4, || format!("expected 4 generators, got {}", g.len()))?;
    let (z1, z2, z3) = (&g[1], &g[2], &g[3]);
    eq("z1", z1, &(&sqrt3() * &zeta12(1)).scale(&q(2, 3)))?;
    eq("z2", z2, &(&sqrt3() * &zeta12(1)))?;
    eq("z3", z3, &zeta12(2).scale(&q(2, 1)))?;

    let basis = ctx.projection_basis();
    let want = [q(2, 3), q(3, 2), q(-2, 1)];
    ensure(
        basis.len() == 3 && basis.iter().zip(&want).all(|(b, w)| b.as_rational().as_ref() == Some(w)),
        || format!("projection basis {:?}", basis.iter().map(|b| b.to_string()).collect::<Vec<_>>()),
    )?;

    let one = z1.one_like();
    let closed = [
        ([1, 1], z3.scale(&q(2, 3))),
        ([1, 2], z3.clone()),
        ([1, 3], (z1 - &one).scale(&q(4, 1))),
        ([2, 2], z3.scale(&q(3, 2))),
        ([2, 3], (z1 - &one).scale(&q(6, 1))),
        ([3, 3], &z3.scale(&q(4, 1)) - &z1.scale(&q(6, 1))),
    ];
    let verdict = check_ring(&ctx, 2, &HermiteSolver).map_err(|e| e.to_string())?;
    let RingVerdict::RingModule(certs) = verdict else {
        return Err(format!("expected a ring with certificates, got {}", verdict.label()));
    };
    ensure(certs.len() == 6, || format!("expected 6 certificates, got {}", certs.len()))?;
    for (ids, form) in &closed {
        let product = ctx.product_value(*ids).map_err(|e| e.to_string())?;
        eq(&format!("z{}z{} closed form", ids[0], ids[1]), &product, form)?;
        let cert = certs
            .iter()
            .find(|c| c.product == *ids)
            .ok_or_else(|| format!("no certificate for {ids:?}"))?;
        let value = evaluate(&cert.terms, g, &basis).map_err(|e| e.to_string())?;
        eq(&format!("certificate {ids:?}"), &value, form)?;
    }

    // the two degree-one decompositions quoted for this configuration
    for (target, want) in [(z1 * z1, z3.scale(&q(2, 3))), (z3 * z3, &z3.scale(&q(4, 1)) - &z1.scale(&q(6, 1)))] {
        let problem = MembershipProblem {
            target: target.clone(),
            generators: g.clone(),
            projections: basis.clone(),
            degree_bound: 1,
        };
        let terms = membership(&problem, &HermiteSolver)
            .map_err(|e| e.to_string())?
            .ok_or("no degree-one decomposition")?;
        eq("degree-one decomposition", &evaluate(&terms, g, &basis).map_err(|e| e.to_string())?, &want)?;
    }
    Ok(())
}

/// The identities of the `{1, t, t^2, t^3}` family as rational functions of `t`.
pub fn parametric_family() -> Result<(), String> {
    let set = angles(PARAM).map_err(|e| e.to_string())?;
    let ctx = RingContext::new(&set).map_err(|e| e.to_string())?;
    let g = &ctx.generators;
    let p = ctx.projection_basis();
    ensure(g.len() == 4 && p.len() >= 3, || "unexpected generator count".into())?;
    let (z1, z2, z3) = (&g[1], &g[2], &g[3]);
    let (p1, p2, p3) = (&p[0], &p[1], &p[2]);
    let one = z1.one_like();
    eq("z1 z2 = z3", &(z1 * z2), z3)?;
    eq("z1^2 = p1 z3", &(z1 * z1), &(p1 * z3))?;
    eq("z2^2 = p2 z3", &(z2 * z2), &(p2 * z3))?;
    eq("z2 z3 = p3 (1 - z3)", &(z2 * z3), &(p3 * &(&one - z3)))?;
    eq("z3^2 = p3^2 (z3 - z2)", &(z3 * z3), &(&(p3 * p3) * &(z3 - z2)))?;
    eq("z1 z3 = p1 z2 z3", &(z1 * z3), &(p1 * &(z2 * z3)))?;
    eq("z3^2 expanded", &(z3 * z3), &t_poly(&[1, 0, 2, 0, 3, 0, 2, 0, 1]))?;
    eq("z2 z3 expanded", &(z2 * z3), &t_poly(&[1, 0, 2, 0, 2, 0, 1]))?;

    let verdict = check_ring(&ctx, 2, &HermiteSolver).map_err(|e| e.to_string())?;
    ensure(matches!(verdict, RingVerdict::RingModule(ref c) if c.len() == 6), || {
        format!("parametric family verdict {}", verdict.label())
    })
}

/// Generations up to `depth`, keeping the partial generation if the cap hits.
pub fn generations(set: &AngleSet, depth: usize, cap: usize) -> Vec<GenerationSet> {
    let cfg = ConstructionConfig::new(set.clone()).with_depth(depth).with_max_points(cap);
    match closure_to_depth(&cfg) {
        Ok(g) => g,
        Err(ConstructionError::CapExceeded { mut completed, partial, .. }) => {
            completed.push(*partial);
            completed
        }
        Err(e) => panic!("{e}"),
    }
}

/// Deterministic sample of `n` points spread over a generation.
pub fn sample(g: &GenerationSet, n: usize) -> Vec<ExactScalar> {
    let all: Vec<&ExactScalar> = g.values().collect();
    let step = (all.len() / n.max(1)).max(1);
    all.into_iter().step_by(step).take(n).cloned().collect()
}

/// Coefficients of `(X - x)(X - conj x)`, low degree first, by expanding the
/// product of the two linear factors.
pub fn conjugate_pair_polynomial(x: &ExactScalar) -> Vec<ExactScalar> {
    let one = x.one_like();
    let a = [-x, one.clone()];
    let b = [-&x.conj(), one];
    let mut out = vec![x.zero_like(); 3];
    for (i, u) in a.iter().enumerate() {
        for (j, v) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(u * v);
        }
    }
    out
}

/// Ring for the Eisenstein configuration, not a ring for pi/6, pi/2.
pub fn three_angle_criterion() -> Result<(), String> {
    let set = angles(EISENSTEIN).map_err(|e| e.to_string())?;
    let ctx = RingContext::new(&set).map_err(|e| e.to_string())?;
    let x = &ctx.generators[1];
    let poly = conjugate_pair_polynomial(x);
    let ints: Vec<Option<BigInt>> = poly.iter().map(|c| c.as_integer()).collect();
    ensure(
        ints == [Some(1.into()), Some((-1).into()), Some(1.into())],
        || format!("minimal polynomial of {x}: {:?}", poly.iter().map(|c| c.to_string()).collect::<Vec<_>>()),
    )?;
    ensure((&(x * x) - x + x.one_like()).is_zero(), || "x^2 - x + 1 != 0".into())?;
    match check_ring(&ctx, 3, &HermiteSolver).map_err(|e| e.to_string())? {
        RingVerdict::RingLattice(t) => ensure(
            t.relation == Some((1.into(), (-1).into())),
            || format!("relation {:?}", t.relation),
        )?,
        v => return Err(format!("Eisenstein configuration: {}", v.label())),
    }

    let set = angles(TILTED).map_err(|e| e.to_string())?;
    let ctx = RingContext::new(&set).map_err(|e| e.to_string())?;
    let x = &ctx.generators[1];
    let poly = conjugate_pair_polynomial(x);
    ensure(poly[0].as_rational() == Some(q(4, 3)), || format!("norm {}", poly[0]))?;
    ensure(poly[1].as_rational() == Some(q(-2, 1)), || format!("trace {}", poly[1]))?;
    match check_ring(&ctx, 3, &HermiteSolver).map_err(|e| e.to_string())? {
        RingVerdict::NotRing(_) => Ok(()),
        v => Err(format!("pi/6, pi/2 configuration: {}", v.label())),
    }
}

/// Runs the density procedure on `count` seeded targets in `[-2, 2]^2`
/// with tolerance `1/1000`, checking each witness by interval and exactly.
pub fn density_suite(spec: &str, count: usize, seed: u64) -> Result<(), String> {
    use origami_ring::density::approximate;
    use origami_ring::scalar::{ComplexInterval, Interval};
    use rand::{Rng, SeedableRng};

    let set = angles(spec).map_err(|e| e.to_string())?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let eps = q(1, 1000);
    for _ in 0..count {
        let target = (q(rng.gen_range(-2000..=2000), 1000), q(rng.gen_range(-2000..=2000), 1000));
        let w = approximate(&set, target.clone(), eps.clone()).map_err(|e| e.to_string())?;
        let iv = &w.value_interval;
        let t = ComplexInterval::new(Interval::point(target.0.clone()), Interval::point(target.1.clone()), iv.precision());
        let bound = iv.sub(&t).abs_upper_sqr();
        ensure(bound < &eps * &eps, || format!("enclosure not within tolerance for {target:?}"))?;
        ensure(w.check_exact().map_err(|e| e.to_string())?, || format!("exact check failed for {target:?}"))?;
        ensure(w.target == target, || "witness target differs".into())?;
    }
    Ok(())
}

/// Symmetry, reduction, linearity, rotation and the parallelogram law on
/// `cases` seeded instances each, and the bracket formula against a 2x2
/// real solve on `oracle_cases` instances, all over `Q(zeta_24)`.
pub fn identity_suite(cases: usize, oracle_cases: usize, seed: u64) -> Result<(), String> {
    use origami_ring::geometry::{intersect, UnitAngle};
    use rand::{Rng, SeedableRng};

    const N: i64 = 24;
    let field = CyclotomicField::get(N as u32);
    let zeta = |k: i64| -> ExactScalar { CyclotomicElement::root_of_unity(&field, k).into() };
    let unit = |k: i64| UnitAngle::new(zeta(k)).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let rational = |rng: &mut rand_chacha::ChaCha8Rng| q(rng.gen_range(-12..=12), rng.gen_range(1..=6));
    let point = |rng: &mut rand_chacha::ChaCha8Rng| -> ExactScalar {
        let c: Vec<BigRational> = (0..field.degree()).map(|_| rational(rng)).collect();
        CyclotomicElement::from_coefficients(&field, &c).into()
    };
    let i_of = |a: i64, b: i64, p: &ExactScalar, q: &ExactScalar| intersect(&unit(a), &unit(b), p, q).unwrap();
    let zero = ExactScalar::from(0);

    for n in 0..cases {
        let a = rng.gen_range(0..N);
        let b = a + rng.gen_range(1..N / 2);
        let (p, qv) = (point(&mut rng), point(&mut rng));
        let r = q(rng.gen_range(-12..=12), rng.gen_range(1..=6));
        let w = rng.gen_range(0..N);
        let x = i_of(a, b, &p, &qv);
        ensure(x == i_of(b, a, &qv, &p), || format!("symmetry, instance {n}"))?;
        ensure(x == &i_of(a, b, &p, &zero) + &i_of(a, b, &zero, &qv), || format!("reduction, instance {n}"))?;
        ensure(
            i_of(a, b, &(&p.scale(&r) + &qv), &zero) == &i_of(a, b, &p, &zero).scale(&r) + &i_of(a, b, &qv, &zero),
            || format!("linearity, instance {n}"),
        )?;
        let zw = zeta(w);
        ensure(
            &zw * &x == i_of(a + w, b + w, &(&zw * &p), &(&zw * &qv)),
            || format!("rotation, instance {n}"),
        )?;
        ensure(&x + &i_of(b, a, &p, &qv) == &p + &qv, || format!("parallelogram, instance {n}"))?;
    }

    let i_inv = zeta(-N / 4);
    let half = q(1, 2);
    let re = |z: &ExactScalar| (z + &z.conj()).scale(&half);
    let im = |z: &ExactScalar| (&(z - &z.conj()) * &i_inv).scale(&half);
    for n in 0..oracle_cases {
        let a = rng.gen_range(0..N);
        let b = a + rng.gen_range(1..N / 2);
        let (p, qv) = (point(&mut rng), point(&mut rng));
        let (za, zb) = (zeta(a), zeta(b));
        let d = &qv - &p;
        // s Re a - t Re b = Re d, s Im a - t Im b = Im d
        let det = &(&re(&zb) * &im(&za)) - &(&re(&za) * &im(&zb));
        let s = (&(&re(&zb) * &im(&d)) - &(&re(&d) * &im(&zb))).checked_div(&det).unwrap();
        ensure(i_of(a, b, &p, &qv) == &p + &(&s * &za), || format!("linear-solve oracle, instance {n}"))?;
    }
    Ok(())
}
