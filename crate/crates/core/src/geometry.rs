//! Lines, unit angles and the exact intersection operator.
//!
//! A line direction is a unit complex number taken modulo sign. For two
//! directions `a != ±b` the lines `p + R a` and `q + R b` meet at
//!
//! ```text
//! I_{a,b}(p, q) = [a,p]/[a,b] * b + [b,q]/[b,a] * a,   [x,y] = x*conj(y) - y*conj(x)
//! ```
//!
//! Everything here is pure field arithmetic plus conjugation, so it stays
//! exact in every scalar backend.

use std::fmt;

use thiserror::Error;

use crate::scalar::{ExactScalar, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("lines are parallel (directions agree up to sign)")]
    ParallelLines,
    #[error("direction {0} does not have modulus one")]
    NotUnit(String),
    #[error("angle {0} repeats another angle up to sign")]
    DuplicateAngle(String),
    #[error("an angle set needs at least {0} angles")]
    TooFewAngles(usize),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// A line direction, an element of `T / {±1}`.
///
/// The stored representative has a positive first coefficient in its
/// canonical form, so two angles are equivalent exactly when their
/// representatives are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnitAngle {
    value: ExactScalar,
    label: String,
}

impl UnitAngle {
    pub fn new(value: ExactScalar) -> Result<Self, GeometryError> {
        let label = value.to_string();
        Self::with_label(value, label)
    }

    pub fn with_label(value: ExactScalar, label: impl Into<String>) -> Result<Self, GeometryError> {
        let label = label.into();
        let norm = value.checked_mul(&value.conj())?;
        if !norm.is_one() {
            return Err(GeometryError::NotUnit(label));
        }
        let value = if value.leading_sign() < 0 {
            value.neg()
        } else {
            value
        };
        Ok(UnitAngle { value, label })
    }

    pub fn value(&self) -> &ExactScalar {
        &self.value
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_one(&self) -> bool {
        self.value.is_one()
    }

    pub fn equivalent(&self, o: &UnitAngle) -> bool {
        self.value.value_eq(&o.value) || self.value.value_eq(&o.value.neg())
    }

    /// Product of two directions (rotation).
    pub fn rotate(&self, w: &UnitAngle) -> Result<UnitAngle, GeometryError> {
        let v = self.value.checked_mul(&w.value)?;
        UnitAngle::new(v)
    }
}

impl fmt::Display for UnitAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

/// The line `base_point + R * direction`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    pub base_point: ExactScalar,
    pub direction: UnitAngle,
}

impl Line {
    pub fn new(base_point: ExactScalar, direction: UnitAngle) -> Self {
        Line {
            base_point,
            direction,
        }
    }

    pub fn contains(&self, q: &ExactScalar) -> Result<bool, GeometryError> {
        let d = q.checked_sub(&self.base_point)?;
        Ok(bracket(self.direction.value(), &d)?.is_zero())
    }

    pub fn intersect(&self, o: &Line) -> Result<ExactScalar, GeometryError> {
        intersect(&self.direction, &o.direction, &self.base_point, &o.base_point)
    }
}

/// A set of pairwise inequivalent directions, in the caller's order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AngleSet {
    angles: Vec<UnitAngle>,
    contains_one: bool,
}

impl AngleSet {
    pub fn new(angles: Vec<UnitAngle>) -> Result<Self, GeometryError> {
        for (i, a) in angles.iter().enumerate() {
            for b in &angles[..i] {
                // mixed backends cannot share a plane
                b.value().checked_sub(a.value())?;
                if a.equivalent(b) {
                    return Err(GeometryError::DuplicateAngle(a.label().to_string()));
                }
            }
        }
        let contains_one = angles.iter().any(UnitAngle::is_one);
        Ok(AngleSet {
            angles,
            contains_one,
        })
    }

    pub fn angles(&self) -> &[UnitAngle] {
        &self.angles
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    pub fn contains_one(&self) -> bool {
        self.contains_one
    }

    pub fn get(&self, i: usize) -> &UnitAngle {
        &self.angles[i]
    }

    /// Position of the real direction, if present.
    pub fn index_of_one(&self) -> Option<usize> {
        self.angles.iter().position(UnitAngle::is_one)
    }

    /// The constant `r` in the field the angles live in.
    pub fn constant(&self, r: i64) -> ExactScalar {
        match self.angles.first() {
            Some(a) => a.value().constant_like(&crate::scalar::rational(r, 1)),
            None => ExactScalar::from(r),
        }
    }

    /// Ordered index pairs `(i, j)` with `i != j`; all are non-parallel.
    pub fn ordered_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.angles.len();
        (0..n).flat_map(move |i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
    }

    /// The same set in a different order.
    pub fn permuted(&self, order: &[usize]) -> AngleSet {
        AngleSet {
            angles: order.iter().map(|&i| self.angles[i].clone()).collect(),
            contains_one: self.contains_one,
        }
    }
}

/// `[x, y] = x * conj(y) - y * conj(x)`.
pub fn bracket(x: &ExactScalar, y: &ExactScalar) -> Result<ExactScalar, ScalarError> {
    x.checked_mul(&y.conj())?
        .checked_sub(&y.checked_mul(&x.conj())?)
}

/// The intersection of `p + R alpha` and `q + R beta`.
pub fn intersect(
    alpha: &UnitAngle,
    beta: &UnitAngle,
    p: &ExactScalar,
    q: &ExactScalar,
) -> Result<ExactScalar, GeometryError> {
    let (a, b) = (alpha.value(), beta.value());
    let ab = bracket(a, b)?;
    if ab.is_zero() {
        return Err(GeometryError::ParallelLines);
    }
    let first = bracket(a, p)?.checked_div(&ab)?.checked_mul(b)?;
    let second = bracket(b, q)?.checked_div(&ab.neg())?.checked_mul(a)?;
    Ok(first.checked_add(&second)?)
}

/// Where the line through `z` with direction `along` meets the real axis,
/// i.e. `I_{1, along}(0, z)`.
pub fn project_to_real_axis(z: &ExactScalar, along: &UnitAngle) -> Result<ExactScalar, GeometryError> {
    let one = UnitAngle::new(along.value().one_like())?;
    intersect(&one, along, &along.value().zero_like(), z)
}

/// Precomputed intersection with fixed directions: `I_{a,b}(p, q)` is
/// `[a,p] * left + [b,q] * right`, with both divisions done once.
#[derive(Clone, Debug)]
pub struct Intersector {
    alpha: ExactScalar,
    beta: ExactScalar,
    left: ExactScalar,
    right: ExactScalar,
}

impl Intersector {
    pub fn new(alpha: &UnitAngle, beta: &UnitAngle) -> Result<Self, GeometryError> {
        let (a, b) = (alpha.value(), beta.value());
        let ab = bracket(a, b)?;
        if ab.is_zero() {
            return Err(GeometryError::ParallelLines);
        }
        let inv = ab.inv()?;
        Ok(Intersector {
            alpha: a.clone(),
            beta: b.clone(),
            left: inv.checked_mul(b)?,
            right: inv.neg().checked_mul(a)?,
        })
    }

    /// `I_{a,b}(p, 0)`
    pub fn from_first(&self, p: &ExactScalar) -> Result<ExactScalar, ScalarError> {
        bracket(&self.alpha, p)?.checked_mul(&self.left)
    }

    /// `I_{a,b}(0, q)`
    pub fn from_second(&self, q: &ExactScalar) -> Result<ExactScalar, ScalarError> {
        bracket(&self.beta, q)?.checked_mul(&self.right)
    }

    pub fn apply(&self, p: &ExactScalar, q: &ExactScalar) -> Result<ExactScalar, ScalarError> {
        self.from_first(p)?.checked_add(&self.from_second(q)?)
    }
}
