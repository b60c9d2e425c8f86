//! Deciding whether the constructible set is closed under multiplication.
//!
//! Three angles: the set is the lattice `Z + xZ`, a ring exactly when `x`
//! is a quadratic integer. Four or more: the set is spanned over `Z[P]` by
//! the elementary monomials, and it is a ring exactly when every product of
//! two of them decomposes again. Decompositions are searched up to a degree
//! bound, so failure there is reported as unknown, not as a disproof.

pub mod lattice;
pub mod membership;
pub mod solver;

use rayon::prelude::*;
use thiserror::Error;

use crate::construction::{projection_set, representatives, ConstructionError, ProjectionSet};
use crate::geometry::{AngleSet, GeometryError};
use crate::scalar::{BackendKind, ExactScalar, ScalarError};

pub use lattice::{lattice_coordinates, quadratic_integer_test, same_lattice, tangent_point, QuadraticTest};
pub use membership::{evaluate, membership, Certificate, CertificateTerm, MembershipProblem};
pub use solver::{EnumerateSolver, HermiteSolver, IntegerSolver, SolverRegistry};

pub const DEFAULT_DEGREE_BOUND: usize = 3;

#[derive(Debug, Error)]
pub enum RingError {
    #[error("{0} is real; a non-real value is required")]
    DegenerateReal(String),
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("certificate refers to unknown generator {0}")]
    UnknownGenerator(usize),
    #[error("certificate refers to unknown projection {0}")]
    UnknownProjection(usize),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Generators `[1, z_1, ..., z_k]` and the projection basis of an angle set.
#[derive(Clone, Debug)]
pub struct RingContext {
    pub angles: AngleSet,
    pub generators: Vec<ExactScalar>,
    /// Angle index pairs of `z_1, ..., z_k`.
    pub generator_pairs: Vec<(usize, usize)>,
    pub projections: ProjectionSet,
}

impl RingContext {
    pub fn new(angles: &AngleSet) -> Result<Self, RingError> {
        if !angles.contains_one() {
            return Err(RingError::Unsupported(
                "the real direction 0 must be one of the angles".into(),
            ));
        }
        if angles.len() < 3 {
            return Err(RingError::Unsupported(format!(
                "at least three angles are needed, got {}",
                angles.len()
            )));
        }
        let reps = representatives(angles)?;
        let mut generators = vec![angles.constant(1)];
        generators.extend(reps.iter().map(|r| r.value.clone()));
        Ok(RingContext {
            angles: angles.clone(),
            generators,
            generator_pairs: reps.iter().map(|r| (r.alpha, r.beta)).collect(),
            projections: projection_set(angles)?,
        })
    }

    pub fn projection_basis(&self) -> Vec<ExactScalar> {
        self.projections.basis_values()
    }

    /// Unordered products `z_i z_j`, `1 <= i <= j <= k`, as generator ids.
    pub fn products(&self) -> Vec<[usize; 2]> {
        let k = self.generators.len();
        (1..k).flat_map(|i| (i..k).map(move |j| [i, j])).collect()
    }

    pub fn product_value(&self, ids: [usize; 2]) -> Result<ExactScalar, RingError> {
        let g = |i: usize| self.generators.get(i).ok_or(RingError::UnknownGenerator(i));
        Ok(g(ids[0])?.checked_mul(g(ids[1])?)?)
    }

    /// Lowest-degree certificate for a product, searching degrees
    /// `0..=degree_bound` in turn.
    pub fn certify(
        &self,
        ids: [usize; 2],
        degree_bound: usize,
        solver: &dyn IntegerSolver,
    ) -> Result<Option<Certificate>, RingError> {
        let mut problem = MembershipProblem {
            target: self.product_value(ids)?,
            generators: self.generators.clone(),
            projections: self.projection_basis(),
            degree_bound: 0,
        };
        for d in 0..=degree_bound {
            problem.degree_bound = d;
            if let Some(terms) = membership(&problem, solver)? {
                return Ok(Some(Certificate {
                    product: ids,
                    terms,
                }));
            }
        }
        Ok(None)
    }
}

#[derive(Clone, Debug)]
pub enum RingVerdict {
    /// Three angles, `x` a quadratic integer.
    RingLattice(QuadraticTest),
    /// Every product of elementary monomials certified.
    RingModule(Vec<Certificate>),
    /// Three angles, `x` not a quadratic integer.
    NotRing(QuadraticTest),
    Unknown {
        degree_bound: usize,
        unresolved: Vec<[usize; 2]>,
        reason: String,
    },
}

impl RingVerdict {
    pub fn is_ring(&self) -> bool {
        matches!(self, RingVerdict::RingLattice(_) | RingVerdict::RingModule(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            RingVerdict::RingLattice(_) | RingVerdict::RingModule(_) => "ring",
            RingVerdict::NotRing(_) => "not-ring",
            RingVerdict::Unknown { .. } => "unknown",
        }
    }
}

/// Decides or certifies the ring property. Requires the real direction
/// and at least three angles.
pub fn check_ring(
    ctx: &RingContext,
    degree_bound: usize,
    solver: &dyn IntegerSolver,
) -> Result<RingVerdict, RingError> {
    if ctx.angles.len() == 3 {
        let x = &ctx.generators[1];
        let q = quadratic_integer_test(x)?;
        if q.is_quadratic_integer() {
            return Ok(RingVerdict::RingLattice(q));
        }
        // a symbolic trace or norm may still be integral at some values of t
        let symbolic = x.backend() == BackendKind::Param
            && !(q.trace.is_rational() && q.norm.is_rational());
        if symbolic {
            return Ok(RingVerdict::Unknown {
                degree_bound,
                unresolved: vec![[1, 1]],
                reason: "trace or norm depends on the parameter".into(),
            });
        }
        return Ok(RingVerdict::NotRing(q));
    }

    let results: Vec<([usize; 2], Option<Certificate>)> = ctx
        .products()
        .into_par_iter()
        .map(|ids| ctx.certify(ids, degree_bound, solver).map(|c| (ids, c)))
        .collect::<Result<_, _>>()?;
    let unresolved: Vec<[usize; 2]> = results
        .iter()
        .filter(|(_, c)| c.is_none())
        .map(|(ids, _)| *ids)
        .collect();
    if unresolved.is_empty() {
        Ok(RingVerdict::RingModule(
            results.into_iter().filter_map(|(_, c)| c).collect(),
        ))
    } else {
        let reason = if solver.is_complete() {
            format!("no decomposition with coefficient degree <= {degree_bound}")
        } else {
            format!("solver {} found no decomposition", solver.name())
        };
        Ok(RingVerdict::Unknown {
            degree_bound,
            unresolved,
            reason,
        })
    }
}

/// Re-evaluates a certificate exactly against the product it claims.
pub fn verify_certificate(cert: &Certificate, ctx: &RingContext) -> Result<bool, RingError> {
    let target = ctx.product_value(cert.product)?;
    let value = evaluate(&cert.terms, &ctx.generators, &ctx.projection_basis())?;
    Ok(value.value_eq(&target))
}
