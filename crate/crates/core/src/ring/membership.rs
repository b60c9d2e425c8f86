//! Integer decompositions `target = sum_k (sum_m n_{k,m} p^m) g_k`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::solver::IntegerSolver;
use super::RingError;
use crate::scalar::{coordinates, ExactScalar};

#[derive(Clone, Debug)]
pub struct MembershipProblem {
    pub target: ExactScalar,
    pub generators: Vec<ExactScalar>,
    pub projections: Vec<ExactScalar>,
    pub degree_bound: usize,
}

/// One term `coefficient * prod_i p_i^{e_i} * g`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateTerm {
    pub generator: usize,
    /// Projection index to exponent; zero exponents are omitted.
    pub monomial: BTreeMap<usize, u32>,
    #[serde(with = "integer_string")]
    pub coefficient: BigInt,
}

/// A decomposition of the product of two generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub product: [usize; 2],
    pub terms: Vec<CertificateTerm>,
}

impl Certificate {
    /// Largest total degree among the coefficient monomials.
    pub fn degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|t| t.monomial.values().sum())
            .max()
            .unwrap_or(0)
    }
}

mod integer_string {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}

/// Exponent vectors in `vars` variables of total degree at most `bound`,
/// by degree and then lexicographically descending.
pub fn exponent_vectors(vars: usize, bound: usize) -> Vec<Vec<u32>> {
    fn fill(rest: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for e in (0..=left).rev() {
            cur.push(e);
            fill(rest - 1, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for d in 0..=bound as u32 {
        if vars == 0 {
            if d == 0 {
                out.push(Vec::new());
            }
            continue;
        }
        fill(vars, d, &mut Vec::new(), &mut out);
    }
    out
}

/// Evaluates a list of terms exactly.
pub fn evaluate(
    terms: &[CertificateTerm],
    generators: &[ExactScalar],
    projections: &[ExactScalar],
) -> Result<ExactScalar, RingError> {
    let mut acc = generators
        .first()
        .map_or_else(|| ExactScalar::from(0), ExactScalar::zero_like);
    for t in terms {
        let mut v = generators
            .get(t.generator)
            .ok_or(RingError::UnknownGenerator(t.generator))?
            .clone();
        for (&i, &e) in &t.monomial {
            let p = projections.get(i).ok_or(RingError::UnknownProjection(i))?;
            v = v.checked_mul(&p.pow(e))?;
        }
        acc = acc.checked_add(&v.scale(&t.coefficient.clone().into()))?;
    }
    Ok(acc)
}

/// Searches for a decomposition with coefficient monomials of total degree
/// at most the problem's bound. With a complete solver, `None` means no
/// such decomposition exists at that bound.
pub fn membership(
    problem: &MembershipProblem,
    solver: &dyn IntegerSolver,
) -> Result<Option<Vec<CertificateTerm>>, RingError> {
    if problem.target.is_zero() {
        return Ok(Some(Vec::new()));
    }
    let exps = exponent_vectors(problem.projections.len(), problem.degree_bound);
    let mono_values: Vec<ExactScalar> = exps
        .iter()
        .map(|e| {
            let one = problem.target.one_like();
            e.iter()
                .zip(&problem.projections)
                .filter(|(&k, _)| k > 0)
                .try_fold(one, |acc, (&k, p)| acc.checked_mul(&p.pow(k)))
        })
        .collect::<Result<_, _>>()?;

    let mut layout: Vec<(usize, usize)> = Vec::new();
    let mut values = vec![problem.target.clone()];
    for (g, gen) in problem.generators.iter().enumerate() {
        for (m, mv) in mono_values.iter().enumerate() {
            layout.push((g, m));
            values.push(gen.checked_mul(mv)?);
        }
    }

    let coords = coordinates(&values)?;
    let dim = coords[0].len();
    let mut a = vec![Vec::with_capacity(layout.len()); dim];
    let mut b = Vec::with_capacity(dim);
    for r in 0..dim {
        let l = coords
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c[r].denom()));
        let scaled = |c: &Vec<_>| -> BigInt {
            let v: &num_rational::BigRational = &c[r];
            v.numer() * (&l / v.denom())
        };
        b.push(scaled(&coords[0]));
        a[r] = coords[1..].iter().map(scaled).collect();
    }

    let Some(x) = solver.solve(&a, &b) else {
        return Ok(None);
    };
    let terms = layout
        .iter()
        .zip(x)
        .filter(|(_, c)| !c.is_zero())
        .map(|(&(g, m), coefficient)| CertificateTerm {
            generator: g,
            monomial: exps[m]
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| (i, e))
                .collect(),
            coefficient,
        })
        .collect();
    Ok(Some(terms))
}
