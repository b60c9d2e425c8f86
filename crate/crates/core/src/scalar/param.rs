//! Rational functions in a formal unit-circle symbol `t`.
//!
//! Values live in `Q(t)` and complex conjugation acts as `t -> 1/t`. Any
//! identity proved here holds for every specialization `t = e^{i theta}`
//! at which the denominators do not vanish.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::interval::{self, ComplexInterval, Interval};
use super::poly::Poly;
use super::ScalarError;

/// A reduced fraction `num / den` with monic `den` coprime to `num`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParamRational {
    num: Poly,
    den: Poly,
}

impl ParamRational {
    pub fn new(num: Poly, den: Poly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return ParamRational {
                num,
                den: Poly::one(),
            };
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = (num.div_rem(&g).0, den.div_rem(&g).0);
        let lead = den.leading().unwrap().clone();
        if !lead.is_one() {
            let inv = lead.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        ParamRational { num, den }
    }

    pub fn from_rational(r: BigRational) -> Self {
        ParamRational {
            num: Poly::constant(r),
            den: Poly::one(),
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        ParamRational {
            num: p,
            den: Poly::one(),
        }
    }

    /// `t^k`
    pub fn power_of_t(k: usize) -> Self {
        Self::from_poly(Poly::monomial(BigRational::one(), k))
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::normalized(self.num.add(&o.num), self.den.clone());
        }
        Self::normalized(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        ParamRational {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::normalized(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    /// The involution `t -> 1/t`, with denominators cleared.
    pub fn conj(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        // p(1/t) = t^-deg(p) * rev(p)(t)
        let dn = self.num.degree().unwrap();
        let dd = self.den.degree().unwrap();
        let rn = self.num.reversed();
        let rd = self.den.reversed();
        if dd >= dn {
            Self::normalized(rn.shift(dd - dn), rd)
        } else {
            Self::normalized(rn, rd.shift(dn - dd))
        }
    }

    /// Constant value, if the function does not depend on `t`.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num.is_constant() && self.den.is_constant() {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    /// Sign of the lowest-degree nonzero numerator coefficient.
    pub fn leading_sign(&self) -> i32 {
        match self.num.coeffs().iter().find(|c| !c.is_zero()) {
            Some(c) if c.is_negative() => -1,
            Some(_) => 1,
            None => 0,
        }
    }

    pub fn canonical_key(&self) -> String {
        let join = |p: &Poly| {
            p.coeffs()
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(";")
        };
        format!("T|{}|{}", join(&self.num), join(&self.den))
    }

    /// Evaluates at `t = e^{i theta}`.
    pub fn to_interval(&self, theta: &BigRational, prec: u32) -> Result<ComplexInterval, ScalarError> {
        let (c, s) = interval::cos_sin(&Interval::point(theta.clone()), prec + 8);
        let t = ComplexInterval::new(c, s, prec + 8);
        let horner = |p: &Poly| {
            let mut acc = ComplexInterval::zero(prec + 8);
            for coef in p.coeffs().iter().rev() {
                acc = acc.mul(&t).add(&ComplexInterval::from_rational(coef, prec + 8));
            }
            acc
        };
        let n = horner(&self.num);
        let d = horner(&self.den);
        let v = n.div(&d).ok_or(ScalarError::SingularSpecialization)?;
        Ok(ComplexInterval::new(
            Interval::new(
                interval::round_down(v.re.lo(), prec),
                interval::round_up(v.re.hi(), prec),
            ),
            Interval::new(
                interval::round_down(v.im.lo(), prec),
                interval::round_up(v.im.hi(), prec),
            ),
            prec,
        ))
    }

    /// Clears denominators of a family of values over their common
    /// denominator and returns the numerator coefficient vectors.
    pub(crate) fn common_coordinates(values: &[&ParamRational]) -> Vec<Vec<BigRational>> {
        let l = values
            .iter()
            .fold(Poly::one(), |acc, v| acc.lcm(&v.den));
        let nums: Vec<Poly> = values
            .iter()
            .map(|v| v.num.mul(&l.div_rem(&v.den).0))
            .collect();
        let width = nums
            .iter()
            .filter_map(|p| p.degree())
            .max()
            .map_or(1, |d| d + 1);
        nums.iter()
            .map(|p| (0..width).map(|i| p.coeff(i)).collect())
            .collect()
    }

    pub fn integer_value(&self) -> Option<BigInt> {
        self.as_rational()
            .filter(|r| r.is_integer())
            .map(|r| r.to_integer())
    }
}

impl fmt::Display for ParamRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}
