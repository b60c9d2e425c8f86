//! Outward-rounded interval arithmetic over dyadic rationals.
//!
//! Endpoints are kept as exact rationals but rounded outward to a fixed
//! number of significant bits after every operation, so the enclosure
//! stays valid while the endpoint sizes stay bounded. Intervals are only
//! ever used to *display* or *certify* values; no equality decision in
//! this crate is taken from an interval.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ScalarError;

/// Smallest precision accepted by [`ComplexInterval`] producing operations.
pub const MIN_PRECISION: u32 = 16;

/// Extra bits carried internally when evaluating transcendental constants.
const GUARD_BITS: u32 = 24;

pub(crate) fn check_precision(prec: u32) -> Result<(), ScalarError> {
    if prec < MIN_PRECISION {
        Err(ScalarError::PrecisionTooLow(prec))
    } else {
        Ok(())
    }
}

/// floor(log2 |v|) for nonzero v.
fn floor_log2(v: &BigRational) -> i64 {
    let a = v.numer().abs();
    let b = v.denom().clone();
    let k = a.bits() as i64 - b.bits() as i64;
    let ge = if k >= 0 {
        a >= (b << (k as usize))
    } else {
        (a << ((-k) as usize)) >= b
    };
    if ge {
        k
    } else {
        k - 1
    }
}

fn pow2(e: i64) -> BigRational {
    if e >= 0 {
        BigRational::from_integer(BigInt::one() << (e as usize))
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << ((-e) as usize))
    }
}

fn round_dir(v: &BigRational, prec: u32, up: bool) -> BigRational {
    if v.is_zero() {
        return v.clone();
    }
    let e = floor_log2(v);
    let shift = prec as i64 - 1 - e;
    let scaled = v * pow2(shift);
    let n = if up {
        scaled.ceil().to_integer()
    } else {
        scaled.floor().to_integer()
    };
    BigRational::from_integer(n) * pow2(-shift)
}

/// Round toward negative infinity to `prec` significant bits.
pub fn round_down(v: &BigRational, prec: u32) -> BigRational {
    round_dir(v, prec, false)
}

/// Round toward positive infinity to `prec` significant bits.
pub fn round_up(v: &BigRational, prec: u32) -> BigRational {
    round_dir(v, prec, true)
}

/// A closed real interval `[lo, hi]` with dyadic endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: BigRational,
    hi: BigRational,
}

impl Interval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn point(v: BigRational) -> Self {
        Interval {
            lo: v.clone(),
            hi: v,
        }
    }

    /// Smallest `prec`-bit interval containing `v`.
    pub fn enclose(v: &BigRational, prec: u32) -> Self {
        Interval {
            lo: round_down(v, prec),
            hi: round_up(v, prec),
        }
    }

    pub fn zero() -> Self {
        Interval::point(BigRational::zero())
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, v: &BigRational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// Largest absolute value of any point in the interval.
    pub fn mag(&self) -> BigRational {
        std::cmp::max(self.lo.abs(), self.hi.abs())
    }

    pub fn midpoint_f64(&self) -> f64 {
        ((&self.lo + &self.hi) / BigRational::from_integer(2.into()))
            .to_f64()
            .unwrap_or(f64::NAN)
    }

    fn rounded(lo: BigRational, hi: BigRational, prec: u32) -> Self {
        Interval {
            lo: round_down(&lo, prec),
            hi: round_up(&hi, prec),
        }
    }

    pub fn neg(&self) -> Self {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    pub fn add(&self, o: &Interval, prec: u32) -> Self {
        Self::rounded(&self.lo + &o.lo, &self.hi + &o.hi, prec)
    }

    pub fn sub(&self, o: &Interval, prec: u32) -> Self {
        Self::rounded(&self.lo - &o.hi, &self.hi - &o.lo, prec)
    }

    pub fn mul(&self, o: &Interval, prec: u32) -> Self {
        let c = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Self::rounded(lo, hi, prec)
    }

    pub fn scale(&self, r: &BigRational, prec: u32) -> Self {
        let (a, b) = (&self.lo * r, &self.hi * r);
        if r.is_negative() {
            Self::rounded(b, a, prec)
        } else {
            Self::rounded(a, b, prec)
        }
    }

    pub fn square(&self, prec: u32) -> Self {
        if self.contains_zero() {
            let m = self.mag();
            Self::rounded(BigRational::zero(), &m * &m, prec)
        } else {
            self.mul(self, prec)
        }
    }

    /// `None` when the divisor contains zero.
    pub fn div(&self, o: &Interval, prec: u32) -> Option<Self> {
        if o.contains_zero() {
            return None;
        }
        let inv = Self::rounded(o.hi.recip(), o.lo.recip(), prec);
        Some(self.mul(&inv, prec))
    }

    pub fn widen(&self, r: &BigRational, prec: u32) -> Self {
        Self::rounded(&self.lo - r, &self.hi + r, prec)
    }

    pub fn hull(&self, o: &Interval) -> Self {
        Interval {
            lo: std::cmp::min(&self.lo, &o.lo).clone(),
            hi: std::cmp::max(&self.hi, &o.hi).clone(),
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            format_directed(&self.lo, 17, false),
            format_directed(&self.hi, 17, true)
        )
    }
}

/// Decimal rendering of `v` with `digits` significant digits, rounded
/// toward -inf (`up = false`) or +inf (`up = true`), so a printed interval
/// still encloses the exact one.
pub fn format_directed(v: &BigRational, digits: usize, up: bool) -> String {
    if v.is_zero() {
        return "0".to_string();
    }
    let ten = BigRational::from_integer(10.into());
    let mut exp10: i64 = 0;
    let mut m = v.abs();
    // normalise m into [1, 10)
    let est = (floor_log2(&m) as f64 * std::f64::consts::LOG10_2).floor() as i64;
    if est > 0 {
        m /= ten.pow(est as i32);
    } else if est < 0 {
        m *= ten.pow((-est) as i32);
    }
    exp10 += est;
    while m >= ten {
        m /= &ten;
        exp10 += 1;
    }
    while m < BigRational::one() {
        m *= &ten;
        exp10 -= 1;
    }
    let scale = ten.pow(digits as i32 - 1);
    let scaled = &m * &scale;
    let neg = v.is_negative();
    // rounding the magnitude away from zero is "up" for positives
    let away = up != neg;
    let mut mant = if away {
        scaled.ceil().to_integer()
    } else {
        scaled.floor().to_integer()
    };
    let limit = BigInt::from(10).pow(digits as u32);
    if mant >= limit {
        mant /= 10;
        exp10 += 1;
    }
    let s = mant.to_string();
    let (head, tail) = s.split_at(1);
    let tail = tail.trim_end_matches('0');
    let sign = if neg { "-" } else { "" };
    let body = if tail.is_empty() {
        head.to_string()
    } else {
        format!("{head}.{tail}")
    };
    if exp10 == 0 {
        format!("{sign}{body}")
    } else {
        format!("{sign}{body}e{exp10}")
    }
}

/// Number of significant decimal digits that resolves `prec` bits.
pub fn decimal_digits(prec: u32) -> usize {
    (prec as f64 * std::f64::consts::LOG10_2).ceil() as usize + 1
}

/// A rectangular enclosure of a complex number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexInterval {
    pub re: Interval,
    pub im: Interval,
    prec: u32,
}

impl ComplexInterval {
    pub fn new(re: Interval, im: Interval, prec: u32) -> Self {
        ComplexInterval { re, im, prec }
    }

    pub fn zero(prec: u32) -> Self {
        Self::new(Interval::zero(), Interval::zero(), prec)
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        Self::new(Interval::enclose(r, prec), Interval::zero(), prec)
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn contains(&self, re: &BigRational, im: &BigRational) -> bool {
        self.re.contains(re) && self.im.contains(im)
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(
            self.re.add(&o.re, self.prec),
            self.im.add(&o.im, self.prec),
            self.prec,
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(
            self.re.sub(&o.re, self.prec),
            self.im.sub(&o.im, self.prec),
            self.prec,
        )
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = self.prec;
        let re = self.re.mul(&o.re, p).sub(&self.im.mul(&o.im, p), p);
        let im = self.re.mul(&o.im, p).add(&self.im.mul(&o.re, p), p);
        Self::new(re, im, p)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Self::new(
            self.re.scale(r, self.prec),
            self.im.scale(r, self.prec),
            self.prec,
        )
    }

    /// Enclosure of |z|^2.
    pub fn norm_sqr(&self) -> Interval {
        self.re
            .square(self.prec)
            .add(&self.im.square(self.prec), self.prec)
    }

    /// `None` when the divisor's enclosure touches zero.
    pub fn div(&self, o: &Self) -> Option<Self> {
        let p = self.prec;
        let den = o.norm_sqr();
        let conj = Self::new(o.re.clone(), o.im.neg(), p);
        let num = self.mul(&conj);
        Some(Self::new(num.re.div(&den, p)?, num.im.div(&den, p)?, p))
    }

    /// Upper bound on |z| as a rational, from the enclosure of |z|^2.
    pub fn abs_upper_sqr(&self) -> BigRational {
        self.norm_sqr().hi().clone()
    }
}

impl fmt::Display for ComplexInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i", self.re, self.im)
    }
}

// ---------------------------------------------------------------------------
// transcendental constants

fn atan_inv(k: u32, prec: u32) -> Interval {
    // atan(1/k) = sum (-1)^j / ((2j+1) k^(2j+1)); alternating, decreasing
    let kk = BigInt::from(k);
    let k2 = &kk * &kk;
    let mut pow = kk.clone();
    let mut acc = Interval::zero();
    let eps = pow2(-(prec as i64) - 4);
    let mut j: u64 = 0;
    loop {
        let term = BigRational::new(BigInt::one(), BigInt::from(2 * j + 1) * &pow);
        let t = Interval::enclose(&term, prec);
        acc = if j.is_multiple_of(2) {
            acc.add(&t, prec)
        } else {
            acc.sub(&t, prec)
        };
        if term < eps {
            // remainder is bounded by the next term, which is smaller still
            return acc.widen(&term, prec);
        }
        pow *= &k2;
        j += 1;
    }
}

/// Enclosure of pi with at least `prec` bits.
pub fn pi(prec: u32) -> Interval {
    static CACHE: OnceLock<Mutex<HashMap<u32, Interval>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().unwrap().get(&prec) {
        return v.clone();
    }
    let wp = prec + GUARD_BITS;
    let a = atan_inv(5, wp).scale(&BigRational::from_integer(16.into()), wp);
    let b = atan_inv(239, wp).scale(&BigRational::from_integer(4.into()), wp);
    let v = a.sub(&b, wp);
    cache.lock().unwrap().insert(prec, v.clone());
    v
}

/// Enclosures of (cos x, sin x) for every x in the interval.
pub fn cos_sin(x: &Interval, prec: u32) -> (Interval, Interval) {
    let wp = prec + GUARD_BITS;
    let m = x.lo().clone();
    let rad = x.width();
    let m2 = Interval::point(&m * &m);
    let eps = pow2(-(wp as i64) - 2);
    // cos: sum (-1)^j m^(2j)/(2j)!, sin: sum (-1)^j m^(2j+1)/(2j+1)!
    let series = |first: Interval, offset: u64| -> Interval {
        let mut term = first;
        let mut acc = term.clone();
        let mut j: u64 = 0;
        loop {
            let d = BigInt::from((2 * j + 1 + offset) * (2 * j + 2 + offset));
            let next = term
                .mul(&m2, wp)
                .scale(&BigRational::new(BigInt::from(-1), d), wp);
            let small = next.mag() < eps;
            // once terms decrease, the tail is bounded by the first omitted term
            let decreasing = m2.hi() < &BigRational::from_integer(BigInt::from(
                (2 * j + 3 + offset) * (2 * j + 4 + offset),
            ));
            if small && decreasing {
                return acc.widen(&next.mag(), wp);
            }
            acc = acc.add(&next, wp);
            term = next;
            j += 1;
        }
    };
    let c = series(Interval::point(BigRational::one()), 0);
    let s = series(Interval::point(m.clone()), 1);
    // |d/dx cos|, |d/dx sin| <= 1
    let one = BigRational::one();
    let clamp = |i: Interval| -> Interval {
        let lo = std::cmp::max(i.lo().clone(), -one.clone());
        let hi = std::cmp::min(i.hi().clone(), one.clone());
        Interval::rounded(lo, hi, prec)
    };
    (clamp(c.widen(&rad, wp)), clamp(s.widen(&rad, wp)))
}

type RootCache = HashMap<(i64, u32, u32), (Interval, Interval)>;

/// Enclosure of exp(2 pi i k / n).
pub fn root_of_unity(k: i64, n: u32, prec: u32) -> ComplexInterval {
    static CACHE: OnceLock<Mutex<RootCache>> = OnceLock::new();
    let n_i = n as i64;
    let k = k.rem_euclid(n_i);
    let cache = CACHE.get_or_init(Default::default);
    if let Some((c, s)) = cache.lock().unwrap().get(&(k, n, prec)) {
        return ComplexInterval::new(c.clone(), s.clone(), prec);
    }
    // exact values on the axes keep the common cases tight
    let (c, s) = if k == 0 {
        (Interval::point(BigRational::one()), Interval::zero())
    } else if 2 * k == n_i {
        (Interval::point(-BigRational::one()), Interval::zero())
    } else if 4 * k == n_i {
        (Interval::zero(), Interval::point(BigRational::one()))
    } else if 4 * k == 3 * n_i {
        (Interval::zero(), Interval::point(-BigRational::one()))
    } else {
        // angle 2 pi k / n reduced into (-pi, pi]
        let kk = if 2 * k > n_i { k - n_i } else { k };
        let wp = prec + GUARD_BITS;
        let x = pi(wp).scale(&BigRational::new(BigInt::from(2 * kk), BigInt::from(n)), wp);
        cos_sin(&x, prec)
    };
    cache
        .lock()
        .unwrap()
        .insert((k, n, prec), (c.clone(), s.clone()));
    ComplexInterval::new(c, s, prec)
}

/// Parses `p/q`, integers and decimals (with optional exponent) exactly.
pub fn parse_decimal(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let neg = mant.starts_with('-');
    let mant = mant.trim_start_matches(['-', '+']);
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int}{frac}0").parse::<BigInt>().ok()? / 10;
    let ten = BigRational::from_integer(10.into());
    let mut v = BigRational::from_integer(digits) / ten.pow(frac.len() as i32);
    v *= ten.pow(exp);
    if neg {
        v = -v;
    }
    Some(v)
}
