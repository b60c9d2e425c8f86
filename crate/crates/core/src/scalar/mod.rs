//! Exact complex scalars over three interchangeable representations.
//!
//! * [`BigRational`] for plain rationals,
//! * [`CyclotomicElement`] for values in `Q(zeta_n)` (angles that are
//!   rational multiples of pi),
//! * [`ParamRational`] for rational functions of a formal unit-circle
//!   symbol `t`.
//!
//! Rationals embed into both other representations, and cyclotomic
//! values of different orders meet in the field of the lcm order. Mixing
//! cyclotomic and parametric values is an error.

pub mod cyclotomic;
pub mod interval;
pub mod param;
pub mod poly;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use cyclotomic::{CyclotomicElement, CyclotomicField};
pub use interval::{ComplexInterval, Interval, MIN_PRECISION};
pub use param::ParamRational;
pub use poly::Poly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("cannot combine a {0} value with a {1} value")]
    BackendMismatch(BackendKind, BackendKind),
    #[error("division by zero")]
    DivisionByZero,
    #[error("interval precision of {0} bits is below the minimum of {MIN_PRECISION}")]
    PrecisionTooLow(u32),
    #[error("parametric values need a specialization t = e^(i*theta) to be evaluated")]
    MissingSpecialization,
    #[error("the specialization makes a denominator vanish")]
    SingularSpecialization,
    #[error("value is not real")]
    NotReal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendKind {
    Rational,
    Cyclotomic,
    Param,
}

impl fmt::Display for BackendKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BackendKind::Rational => "rational",
            BackendKind::Cyclotomic => "cyclotomic",
            BackendKind::Param => "param",
        })
    }
}

/// Byte string that identifies a value exactly; equal keys mean equal
/// values within one field, and the key order is the canonical order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey(Vec<u8>);

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn as_str(&self) -> &str {
        // keys are built from ASCII renderings only
        std::str::from_utf8(&self.0).expect("canonical keys are ASCII")
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExactScalar {
    Rational(BigRational),
    Cyclotomic(CyclotomicElement),
    Param(ParamRational),
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

impl From<BigRational> for ExactScalar {
    fn from(r: BigRational) -> Self {
        ExactScalar::Rational(r)
    }
}

impl From<CyclotomicElement> for ExactScalar {
    fn from(c: CyclotomicElement) -> Self {
        ExactScalar::Cyclotomic(c)
    }
}

impl From<ParamRational> for ExactScalar {
    fn from(p: ParamRational) -> Self {
        ExactScalar::Param(p)
    }
}

impl From<i64> for ExactScalar {
    fn from(n: i64) -> Self {
        ExactScalar::Rational(BigRational::from_integer(n.into()))
    }
}

enum Pair<'a> {
    Rational(&'a BigRational, &'a BigRational),
    Cyclotomic(CyclotomicElement, CyclotomicElement),
    Param(ParamRational, ParamRational),
}

impl ExactScalar {
    pub fn backend(&self) -> BackendKind {
        match self {
            ExactScalar::Rational(_) => BackendKind::Rational,
            ExactScalar::Cyclotomic(_) => BackendKind::Cyclotomic,
            ExactScalar::Param(_) => BackendKind::Param,
        }
    }

    /// The rational `r` represented in the same field as `self`.
    pub fn constant_like(&self, r: &BigRational) -> ExactScalar {
        match self {
            ExactScalar::Rational(_) => ExactScalar::Rational(r.clone()),
            ExactScalar::Cyclotomic(c) => {
                ExactScalar::Cyclotomic(CyclotomicElement::from_rational(c.field(), r))
            }
            ExactScalar::Param(_) => ExactScalar::Param(ParamRational::from_rational(r.clone())),
        }
    }

    pub fn zero_like(&self) -> ExactScalar {
        self.constant_like(&BigRational::zero())
    }

    pub fn one_like(&self) -> ExactScalar {
        self.constant_like(&BigRational::one())
    }

    fn pair<'a>(&'a self, o: &'a ExactScalar) -> Result<Pair<'a>, ScalarError> {
        use ExactScalar::*;
        Ok(match (self, o) {
            (Rational(a), Rational(b)) => Pair::Rational(a, b),
            (Rational(a), Cyclotomic(b)) => {
                Pair::Cyclotomic(CyclotomicElement::from_rational(b.field(), a), b.clone())
            }
            (Cyclotomic(a), Rational(b)) => {
                Pair::Cyclotomic(a.clone(), CyclotomicElement::from_rational(a.field(), b))
            }
            (Cyclotomic(a), Cyclotomic(b)) => {
                if a.order() == b.order() {
                    Pair::Cyclotomic(a.clone(), b.clone())
                } else {
                    let m = a.order().lcm(&b.order());
                    Pair::Cyclotomic(a.embed(m), b.embed(m))
                }
            }
            (Rational(a), Param(b)) => {
                Pair::Param(ParamRational::from_rational(a.clone()), b.clone())
            }
            (Param(a), Rational(b)) => {
                Pair::Param(a.clone(), ParamRational::from_rational(b.clone()))
            }
            (Param(a), Param(b)) => Pair::Param(a.clone(), b.clone()),
            (a, b) => return Err(ScalarError::BackendMismatch(a.backend(), b.backend())),
        })
    }

    fn combine(
        &self,
        o: &ExactScalar,
        fr: impl Fn(&BigRational, &BigRational) -> BigRational,
        fc: impl Fn(&CyclotomicElement, &CyclotomicElement) -> CyclotomicElement,
        fp: impl Fn(&ParamRational, &ParamRational) -> ParamRational,
    ) -> Result<ExactScalar, ScalarError> {
        // same-representation fast paths avoid cloning
        match (self, o) {
            (ExactScalar::Cyclotomic(a), ExactScalar::Cyclotomic(b)) if a.order() == b.order() => {
                return Ok(ExactScalar::Cyclotomic(fc(a, b)))
            }
            (ExactScalar::Param(a), ExactScalar::Param(b)) => {
                return Ok(ExactScalar::Param(fp(a, b)))
            }
            _ => {}
        }
        Ok(match self.pair(o)? {
            Pair::Rational(a, b) => ExactScalar::Rational(fr(a, b)),
            Pair::Cyclotomic(a, b) => ExactScalar::Cyclotomic(fc(&a, &b)),
            Pair::Param(a, b) => ExactScalar::Param(fp(&a, &b)),
        })
    }

    pub fn checked_add(&self, o: &ExactScalar) -> Result<ExactScalar, ScalarError> {
        self.combine(o, |a, b| a + b, |a, b| a.add(b), |a, b| a.add(b))
    }

    pub fn checked_sub(&self, o: &ExactScalar) -> Result<ExactScalar, ScalarError> {
        self.combine(o, |a, b| a - b, |a, b| a.sub(b), |a, b| a.sub(b))
    }

    pub fn checked_mul(&self, o: &ExactScalar) -> Result<ExactScalar, ScalarError> {
        match (self, o) {
            (ExactScalar::Rational(r), ExactScalar::Cyclotomic(c))
            | (ExactScalar::Cyclotomic(c), ExactScalar::Rational(r)) => {
                return Ok(ExactScalar::Cyclotomic(c.scale(r)))
            }
            _ => {}
        }
        self.combine(o, |a, b| a * b, |a, b| a.mul(b), |a, b| a.mul(b))
    }

    pub fn checked_div(&self, o: &ExactScalar) -> Result<ExactScalar, ScalarError> {
        self.checked_mul(&o.inv()?)
    }

    pub fn inv(&self) -> Result<ExactScalar, ScalarError> {
        match self {
            ExactScalar::Rational(r) if r.is_zero() => Err(ScalarError::DivisionByZero),
            ExactScalar::Rational(r) => Ok(ExactScalar::Rational(r.recip())),
            ExactScalar::Cyclotomic(c) => c.inv().map(ExactScalar::Cyclotomic),
            ExactScalar::Param(p) => p.inv().map(ExactScalar::Param),
        }
    }

    pub fn neg(&self) -> ExactScalar {
        match self {
            ExactScalar::Rational(r) => ExactScalar::Rational(-r),
            ExactScalar::Cyclotomic(c) => ExactScalar::Cyclotomic(c.neg()),
            ExactScalar::Param(p) => ExactScalar::Param(p.neg()),
        }
    }

    pub fn conj(&self) -> ExactScalar {
        match self {
            ExactScalar::Rational(r) => ExactScalar::Rational(r.clone()),
            ExactScalar::Cyclotomic(c) => ExactScalar::Cyclotomic(c.conj()),
            ExactScalar::Param(p) => ExactScalar::Param(p.conj()),
        }
    }

    pub fn scale(&self, r: &BigRational) -> ExactScalar {
        match self {
            ExactScalar::Rational(a) => ExactScalar::Rational(a * r),
            ExactScalar::Cyclotomic(c) => ExactScalar::Cyclotomic(c.scale(r)),
            ExactScalar::Param(p) => {
                ExactScalar::Param(p.mul(&ParamRational::from_rational(r.clone())))
            }
        }
    }

    pub fn pow(&self, e: u32) -> ExactScalar {
        let mut result = self.one_like();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ExactScalar::Rational(r) => r.is_zero(),
            ExactScalar::Cyclotomic(c) => c.is_zero(),
            ExactScalar::Param(p) => p.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|r| r.is_one())
    }

    /// Invariance under conjugation. For parametric values this means
    /// real at every unit-circle specialization of `t`.
    pub fn is_real(&self) -> bool {
        match self {
            ExactScalar::Rational(_) => true,
            _ => self.conj() == *self,
        }
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            ExactScalar::Rational(r) => Some(r.clone()),
            ExactScalar::Cyclotomic(c) => c.as_rational(),
            ExactScalar::Param(p) => p.as_rational(),
        }
    }

    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational()
            .filter(|r| r.is_integer())
            .map(|r| r.to_integer())
    }

    pub fn is_integer(&self) -> bool {
        self.as_integer().is_some()
    }

    /// Sign of the first nonzero coefficient of the canonical form.
    pub fn leading_sign(&self) -> i32 {
        match self {
            ExactScalar::Rational(r) => {
                if r.is_zero() {
                    0
                } else if r.is_negative() {
                    -1
                } else {
                    1
                }
            }
            ExactScalar::Cyclotomic(c) => c.leading_sign(),
            ExactScalar::Param(p) => p.leading_sign(),
        }
    }

    /// Cyclotomic values are moved into `Q(zeta_m)`; others are unchanged.
    pub fn embed_order(&self, m: u32) -> ExactScalar {
        match self {
            ExactScalar::Cyclotomic(c) => ExactScalar::Cyclotomic(c.embed(m)),
            other => other.clone(),
        }
    }

    /// Cyclotomic order of the value, if any.
    pub fn cyclotomic_order(&self) -> Option<u32> {
        match self {
            ExactScalar::Cyclotomic(c) => Some(c.order()),
            _ => None,
        }
    }

    /// Equality of values, embedding cyclotomic values of different
    /// orders into a common field first. `==` compares representations.
    pub fn value_eq(&self, o: &ExactScalar) -> bool {
        self.checked_sub(o).is_ok_and(|d| d.is_zero())
    }

    pub fn canonical_key(&self) -> CanonicalKey {
        let s = match self {
            ExactScalar::Rational(r) => format!("Q|{r}"),
            ExactScalar::Cyclotomic(c) => c.canonical_key(),
            ExactScalar::Param(p) => p.canonical_key(),
        };
        CanonicalKey(s.into_bytes())
    }

    /// Interval enclosure. Parametric values need `theta`, the argument of
    /// the unit-modulus specialization `t = e^{i theta}`.
    pub fn to_interval(
        &self,
        prec: u32,
        theta: Option<&BigRational>,
    ) -> Result<ComplexInterval, ScalarError> {
        interval::check_precision(prec)?;
        match self {
            ExactScalar::Rational(r) => Ok(ComplexInterval::from_rational(r, prec)),
            ExactScalar::Cyclotomic(c) => Ok(c.to_interval(prec)),
            ExactScalar::Param(p) => {
                let theta = theta.ok_or(ScalarError::MissingSpecialization)?;
                p.to_interval(theta, prec)
            }
        }
    }

    /// Exact sign of a real value. Zero is decided exactly; a nonzero
    /// value is then separated from zero by refining its enclosure.
    pub fn real_sign(&self, theta: Option<&BigRational>) -> Result<Ordering, ScalarError> {
        if !self.is_real() {
            return Err(ScalarError::NotReal);
        }
        if self.is_zero() {
            return Ok(Ordering::Equal);
        }
        if let Some(r) = self.as_rational() {
            return Ok(r.cmp(&BigRational::zero()));
        }
        let mut prec = 64;
        loop {
            let iv = self.to_interval(prec, theta)?;
            if iv.re.lo().is_positive() {
                return Ok(Ordering::Greater);
            }
            if iv.re.hi().is_negative() {
                return Ok(Ordering::Less);
            }
            prec *= 2;
        }
    }

    /// Exact comparison of two real values.
    pub fn real_cmp(
        &self,
        o: &ExactScalar,
        theta: Option<&BigRational>,
    ) -> Result<Ordering, ScalarError> {
        self.checked_sub(o)?.real_sign(theta)
    }
}

/// Coordinates of a family of values in one common Q-basis: the power
/// basis of the shared cyclotomic field, the coefficients of numerators
/// over the common denominator for parametric values, or `[r]` for
/// rationals. Q-linear relations among the values are exactly the
/// relations among the returned vectors.
pub fn coordinates(values: &[ExactScalar]) -> Result<Vec<Vec<BigRational>>, ScalarError> {
    let mut kind = BackendKind::Rational;
    let mut order = 1u32;
    for v in values {
        match (kind, v.backend()) {
            (_, BackendKind::Rational) => {}
            (BackendKind::Param, BackendKind::Cyclotomic)
            | (BackendKind::Cyclotomic, BackendKind::Param) => {
                return Err(ScalarError::BackendMismatch(kind, v.backend()))
            }
            (_, k) => kind = k,
        }
        if let Some(n) = v.cyclotomic_order() {
            order = order.lcm(&n);
        }
    }
    Ok(match kind {
        BackendKind::Rational => values
            .iter()
            .map(|v| vec![v.as_rational().expect("rational backend")])
            .collect(),
        BackendKind::Cyclotomic => {
            let field = CyclotomicField::get(order);
            values
                .iter()
                .map(|v| match v {
                    ExactScalar::Rational(r) => {
                        CyclotomicElement::from_rational(&field, r).coefficients()
                    }
                    ExactScalar::Cyclotomic(c) => c.embed(order).coefficients(),
                    ExactScalar::Param(_) => unreachable!(),
                })
                .collect()
        }
        BackendKind::Param => {
            let lifted: Vec<ParamRational> = values
                .iter()
                .map(|v| match v {
                    ExactScalar::Rational(r) => ParamRational::from_rational(r.clone()),
                    ExactScalar::Param(p) => p.clone(),
                    ExactScalar::Cyclotomic(_) => unreachable!(),
                })
                .collect();
            let refs: Vec<&ParamRational> = lifted.iter().collect();
            ParamRational::common_coordinates(&refs)
        }
    })
}

macro_rules! panicking_op {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr<&ExactScalar> for &ExactScalar {
            type Output = ExactScalar;
            fn $m(self, rhs: &ExactScalar) -> ExactScalar {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $m(self, rhs: ExactScalar) -> ExactScalar {
                (&self).$m(&rhs)
            }
        }
    };
}

panicking_op!(Add, add, checked_add);
panicking_op!(Sub, sub, checked_sub);
panicking_op!(Mul, mul, checked_mul);

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar::neg(self)
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar::neg(&self)
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactScalar::Rational(r) => write!(f, "{r}"),
            ExactScalar::Cyclotomic(c) => write!(f, "{c}"),
            ExactScalar::Param(p) => write!(f, "{p}"),
        }
    }
}
