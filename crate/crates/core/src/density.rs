//! Explicit approximation of arbitrary targets by constructible points.
//!
//! With `p` in `Z[P]` strictly between 0 and 1 and a non-real elementary
//! monomial `z`, the points `a p^{N1} + b p^{N2} z` reach any target: first
//! `N2` shrinks the imaginary step `Im(z) p^{N2}` below `eps/2` and `b`
//! matches the imaginary part, then `N1` and `a` match the real residual.
//! Every comparison is an exact sign test; intervals only certify the final
//! distance.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::construction::{projection_set, representatives, ProjectionSet};
use crate::geometry::AngleSet;
use crate::ring::RingError;
use crate::scalar::{BackendKind, ComplexInterval, CyclotomicElement, CyclotomicField, ExactScalar, ScalarError};

#[derive(Debug, Error)]
pub enum DensityError {
    #[error("no product of at most two projections lies strictly between 0 and 1")]
    NoScalingProjection,
    #[error("density needs {0}")]
    Unsupported(String),
    #[error("epsilon must be positive")]
    NonPositiveEpsilon,
    #[error("could not certify the distance bound at {0} bits")]
    Uncertified(u32),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

impl From<crate::construction::ConstructionError> for DensityError {
    fn from(e: crate::construction::ConstructionError) -> Self {
        DensityError::Ring(e.into())
    }
}

/// An element of `Z[P]` in `(0, 1)` with how it was formed from the
/// projection basis, e.g. `p0`, `1-p2` or `p0*p1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalingProjection {
    pub value: ExactScalar,
    pub expr: String,
}

fn in_unit_interval(v: &ExactScalar) -> Result<bool, ScalarError> {
    Ok(v.real_sign(None)? == Ordering::Greater
        && v.one_like().checked_sub(v)?.real_sign(None)? == Ordering::Greater)
}

/// First candidate in `(0, 1)` among: basis elements, their complements,
/// then pairwise products of those, each in list order.
pub fn find_scaling_projection(ps: &ProjectionSet) -> Result<ScalingProjection, DensityError> {
    let basis = ps.basis_values();
    let mut singles: Vec<ScalingProjection> = basis
        .iter()
        .enumerate()
        .map(|(i, v)| ScalingProjection {
            value: v.clone(),
            expr: format!("p{i}"),
        })
        .collect();
    singles.extend(basis.iter().enumerate().map(|(i, v)| ScalingProjection {
        value: v.one_like().checked_sub(v).expect("same field"),
        expr: format!("1-p{i}"),
    }));
    for c in &singles {
        if in_unit_interval(&c.value)? {
            return Ok(c.clone());
        }
    }
    let wrap = |e: &str| if e.contains('-') { format!("({e})") } else { e.to_string() };
    for (i, x) in singles.iter().enumerate() {
        for y in &singles[i..] {
            let value = x.value.checked_mul(&y.value)?;
            if in_unit_interval(&value)? {
                return Ok(ScalingProjection {
                    value,
                    expr: format!("{}*{}", wrap(&x.expr), wrap(&y.expr)),
                });
            }
        }
    }
    Err(DensityError::NoScalingProjection)
}

#[derive(Clone, Debug)]
pub struct DensityWitness {
    pub p: ScalingProjection,
    pub z: ExactScalar,
    /// Angle indices of `z = I_{a,b}(0,1)`.
    pub z_pair: (usize, usize),
    pub a: BigInt,
    pub b: BigInt,
    pub n1: u32,
    pub n2: u32,
    pub value: ExactScalar,
    pub value_interval: ComplexInterval,
    pub target: (BigRational, BigRational),
    pub epsilon: BigRational,
}

/// Largest integer not above a real value, decided exactly.
pub fn real_floor(v: &ExactScalar) -> Result<BigInt, ScalarError> {
    if let Some(r) = v.as_rational() {
        return Ok(r.floor().to_integer());
    }
    let iv = v.to_interval(64, None)?;
    let mut k = iv.re.lo().floor().to_integer();
    let below = |k: &BigInt| -> Result<bool, ScalarError> {
        let d = v.checked_sub(&v.constant_like(&BigRational::from_integer(k.clone())))?;
        Ok(d.real_sign(None)? == Ordering::Less)
    };
    while below(&k)? {
        k -= 1;
    }
    while !below(&(&k + 1))? {
        k += 1;
    }
    Ok(k)
}

fn real_abs(v: &ExactScalar) -> Result<ExactScalar, ScalarError> {
    Ok(if v.real_sign(None)? == Ordering::Less {
        v.neg()
    } else {
        v.clone()
    })
}

fn less(a: &ExactScalar, b: &ExactScalar) -> Result<bool, ScalarError> {
    Ok(a.real_cmp(b, None)? == Ordering::Less)
}

pub fn approximate(
    angles: &AngleSet,
    target: (BigRational, BigRational),
    epsilon: BigRational,
) -> Result<DensityWitness, DensityError> {
    if !epsilon.is_positive() {
        return Err(DensityError::NonPositiveEpsilon);
    }
    if !angles.contains_one() || angles.len() < 4 {
        return Err(DensityError::Unsupported(
            "at least four angles including the real direction".into(),
        ));
    }
    let order = match angles.get(0).value().backend() {
        BackendKind::Param => {
            return Err(DensityError::Unsupported("numeric angles, not a symbolic family".into()))
        }
        _ => angles.get(0).value().cyclotomic_order().unwrap_or(1),
    };
    let ps = projection_set(angles)?;
    let p = find_scaling_projection(&ps)?;
    let rep = representatives(angles)?
        .into_iter()
        .next()
        .ok_or(DensityError::NoScalingProjection)?;
    let z = rep.value.clone();

    // Im needs i, so work in an order divisible by 4
    let m = order.lcm(&4);
    let field = CyclotomicField::get(m);
    let i = ExactScalar::from(CyclotomicElement::root_of_unity(&field, (m / 4) as i64));
    let zm = z.embed_order(m);
    let half = BigRational::new(1.into(), 2.into());
    let re_z = zm.checked_add(&zm.conj())?.scale(&half);
    let im_z = zm.checked_sub(&zm.conj())?.checked_mul(&i.neg())?.scale(&half);

    let (tr, ti) = target.clone();
    let half_eps = zm.constant_like(&(&epsilon * &half));
    let konst = |r: &BigRational| zm.constant_like(r);

    // smallest N2 with |Im z| p^N2 < eps/2
    let abs_im = real_abs(&im_z)?;
    let mut n2 = 0u32;
    let mut p_n2 = p.value.one_like();
    while !less(&abs_im.checked_mul(&p_n2)?, &half_eps)? {
        p_n2 = p_n2.checked_mul(&p.value)?;
        n2 += 1;
    }
    let theta = im_z.checked_mul(&p_n2)?;
    // b = ceil(Im(target) / theta), so |b theta - Im(target)| < |theta|
    let b = -real_floor(&konst(&-&ti).checked_div(&theta)?)?;

    let residual = konst(&tr).checked_sub(&re_z.checked_mul(&p_n2)?.scale(&BigRational::from_integer(b.clone())))?;
    let mut n1 = 0u32;
    let mut p_n1 = p.value.one_like();
    let a = loop {
        let q = residual.checked_div(&p_n1)?;
        let a = real_floor(&q.checked_add(&q.constant_like(&half))?)?;
        let err = p_n1
            .scale(&BigRational::from_integer(a.clone()))
            .checked_sub(&residual)?;
        if less(&real_abs(&err)?, &half_eps)? {
            break a;
        }
        p_n1 = p_n1.checked_mul(&p.value)?;
        n1 += 1;
    };

    let value = p_n1
        .scale(&BigRational::from_integer(a.clone()))
        .checked_add(&p_n2.checked_mul(&z)?.scale(&BigRational::from_integer(b.clone())))?;

    let eps_sq = &epsilon * &epsilon;
    let mut prec = 64;
    let value_interval = loop {
        let iv = value.to_interval(prec, None)?;
        let diff = iv.sub(&ComplexInterval::new(
            crate::scalar::Interval::point(tr.clone()),
            crate::scalar::Interval::point(ti.clone()),
            prec,
        ));
        if diff.abs_upper_sqr() < eps_sq {
            break iv;
        }
        if prec >= 1 << 14 {
            return Err(DensityError::Uncertified(prec));
        }
        prec *= 2;
    };

    Ok(DensityWitness {
        p,
        z,
        z_pair: (rep.alpha, rep.beta),
        a,
        b,
        n1,
        n2,
        value,
        value_interval,
        target,
        epsilon,
    })
}

impl DensityWitness {
    /// Exact re-check of `|value - target| < epsilon` via the squared
    /// distance, using the conjugate.
    pub fn check_exact(&self) -> Result<bool, ScalarError> {
        let order = self.value.cyclotomic_order().unwrap_or(1).lcm(&4);
        let field = CyclotomicField::get(order);
        let i = ExactScalar::from(CyclotomicElement::root_of_unity(&field, (order / 4) as i64));
        let t = i
            .scale(&self.target.1)
            .checked_add(&i.constant_like(&self.target.0))?;
        let d = self.value.embed_order(order).checked_sub(&t)?;
        let dist_sq = d.checked_mul(&d.conj())?;
        let eps_sq = dist_sq.constant_like(&(&self.epsilon * &self.epsilon));
        less(&dist_sq, &eps_sq)
    }

    pub fn is_trivial(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}
