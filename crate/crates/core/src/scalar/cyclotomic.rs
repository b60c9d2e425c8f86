//! Exact arithmetic in cyclotomic fields `Q(zeta_n)`.
//!
//! An element is a polynomial in `zeta_n` of degree below `phi(n)`, i.e.
//! the unique reduced residue modulo the n-th cyclotomic polynomial. The
//! rational coefficients are stored as an integer vector over one common
//! positive denominator, which keeps the hot loops in integer arithmetic.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::interval::{self, ComplexInterval, Interval};
use super::ScalarError;

/// Precomputed tables for one field `Q(zeta_n)`.
pub struct CyclotomicField {
    order: u32,
    degree: usize,
    modulus: Vec<BigInt>,
    /// `x^k mod Phi_n` for `k in 0..order`.
    powers: Vec<Vec<BigInt>>,
}

impl fmt::Debug for CyclotomicField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{})", self.order)
    }
}

fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

pub fn euler_phi(n: u32) -> usize {
    (1..=n).filter(|k| k.gcd(&n) == 1).count()
}

/// Coefficients of the n-th cyclotomic polynomial, low degree first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Vec<BigInt>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 = prod_{d | n} Phi_d
    let mut p = vec![BigInt::zero(); n as usize + 1];
    p[0] = BigInt::from(-1);
    p[n as usize] = BigInt::one();
    for d in divisors(n) {
        if d < n {
            p = exact_monic_div(&p, &cyclotomic_polynomial(d));
        }
    }
    cache.lock().unwrap().insert(n, p.clone());
    p
}

fn exact_monic_div(a: &[BigInt], m: &[BigInt]) -> Vec<BigInt> {
    let dm = m.len() - 1;
    let mut rem = a.to_vec();
    let mut quot = vec![BigInt::zero(); a.len() - dm];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dm].clone();
        if !c.is_zero() {
            for (j, mc) in m.iter().enumerate() {
                rem[k + j] -= &c * mc;
            }
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

impl CyclotomicField {
    fn build(order: u32) -> Self {
        assert!(order >= 1, "cyclotomic order must be positive");
        let modulus = cyclotomic_polynomial(order);
        let degree = modulus.len() - 1;
        let mut powers = Vec::with_capacity(order as usize);
        let mut cur = vec![BigInt::zero(); degree];
        cur[0] = BigInt::one();
        for _ in 0..order {
            powers.push(cur.clone());
            // multiply by x and reduce by the monic modulus
            let top = cur[degree - 1].clone();
            let mut next = vec![BigInt::zero(); degree];
            for i in (1..degree).rev() {
                next[i] = cur[i - 1].clone();
            }
            if !top.is_zero() {
                for (i, n) in next.iter_mut().enumerate() {
                    *n -= &top * &modulus[i];
                }
            }
            cur = next;
        }
        CyclotomicField {
            order,
            degree,
            modulus,
            powers,
        }
    }

    /// Shared field handle; tables are built once per order.
    pub fn get(order: u32) -> Arc<CyclotomicField> {
        static FIELDS: OnceLock<Mutex<HashMap<u32, Arc<CyclotomicField>>>> = OnceLock::new();
        let fields = FIELDS.get_or_init(Default::default);
        let mut guard = fields.lock().unwrap();
        guard
            .entry(order)
            .or_insert_with(|| Arc::new(CyclotomicField::build(order)))
            .clone()
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// `phi(n)`, the dimension over Q.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &[BigInt] {
        &self.modulus
    }
}

/// An element of `Q(zeta_n)` in canonical reduced form.
#[derive(Clone)]
pub struct CyclotomicElement {
    field: Arc<CyclotomicField>,
    numer: Vec<BigInt>,
    denom: BigInt,
}

impl PartialEq for CyclotomicElement {
    fn eq(&self, o: &Self) -> bool {
        self.field.order == o.field.order && self.denom == o.denom && self.numer == o.numer
    }
}

impl Eq for CyclotomicElement {}

impl Hash for CyclotomicElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.order.hash(state);
        self.numer.hash(state);
        self.denom.hash(state);
    }
}

impl fmt::Debug for CyclotomicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl CyclotomicElement {
    fn normalized(field: Arc<CyclotomicField>, mut numer: Vec<BigInt>, mut denom: BigInt) -> Self {
        if denom.is_negative() {
            denom = -denom;
            numer.iter_mut().for_each(|c| *c = -&*c);
        }
        let mut g = denom.clone();
        for c in &numer {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if numer.iter().all(Zero::is_zero) {
            denom = BigInt::one();
        } else if !g.is_one() {
            numer.iter_mut().for_each(|c| *c = &*c / &g);
            denom /= &g;
        }
        CyclotomicElement {
            field,
            numer,
            denom,
        }
    }

    pub fn from_rational(field: &Arc<CyclotomicField>, r: &BigRational) -> Self {
        let mut numer = vec![BigInt::zero(); field.degree];
        numer[0] = r.numer().clone();
        Self::normalized(field.clone(), numer, r.denom().clone())
    }

    pub fn zero(field: &Arc<CyclotomicField>) -> Self {
        Self::from_rational(field, &BigRational::zero())
    }

    pub fn one(field: &Arc<CyclotomicField>) -> Self {
        Self::from_rational(field, &BigRational::one())
    }

    /// `zeta_n^k`, for any integer `k`.
    pub fn root_of_unity(field: &Arc<CyclotomicField>, k: i64) -> Self {
        let idx = k.rem_euclid(field.order as i64) as usize;
        CyclotomicElement {
            field: field.clone(),
            numer: field.powers[idx].clone(),
            denom: BigInt::one(),
        }
    }

    /// Builds an element from rational coefficients of `1, zeta, zeta^2, ...`;
    /// the vector may be longer than `phi(n)`, it is reduced.
    pub fn from_coefficients(field: &Arc<CyclotomicField>, coeffs: &[BigRational]) -> Self {
        let denom = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut numer = vec![BigInt::zero(); field.degree];
        for (k, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let scaled = c.numer() * (&denom / c.denom());
            let row = &field.powers[k % field.order as usize];
            for (n, p) in numer.iter_mut().zip(row) {
                if !p.is_zero() {
                    *n += &scaled * p;
                }
            }
        }
        Self::normalized(field.clone(), numer, denom)
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn order(&self) -> u32 {
        self.field.order
    }

    /// Rational coefficients in the power basis, length `phi(n)`.
    pub fn coefficients(&self) -> Vec<BigRational> {
        self.numer
            .iter()
            .map(|c| BigRational::new(c.clone(), self.denom.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.numer.iter().all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.numer[1..].iter().all(Zero::is_zero) {
            Some(BigRational::new(self.numer[0].clone(), self.denom.clone()))
        } else {
            None
        }
    }

    pub fn leading_sign(&self) -> i32 {
        match self.numer.iter().find(|c| !c.is_zero()) {
            Some(c) if c.is_negative() => -1,
            Some(_) => 1,
            None => 0,
        }
    }

    fn same_field(&self, o: &Self) {
        assert_eq!(
            self.field.order, o.field.order,
            "cyclotomic elements must be embedded into a common field first"
        );
    }

    pub fn add(&self, o: &Self) -> Self {
        self.same_field(o);
        if self.denom == o.denom {
            let numer = self.numer.iter().zip(&o.numer).map(|(a, b)| a + b).collect();
            return Self::normalized(self.field.clone(), numer, self.denom.clone());
        }
        let numer = self
            .numer
            .iter()
            .zip(&o.numer)
            .map(|(a, b)| a * &o.denom + b * &self.denom)
            .collect();
        Self::normalized(self.field.clone(), numer, &self.denom * &o.denom)
    }

    pub fn neg(&self) -> Self {
        CyclotomicElement {
            field: self.field.clone(),
            numer: self.numer.iter().map(|c| -c).collect(),
            denom: self.denom.clone(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    fn reduce_product(&self, raw: Vec<BigInt>) -> Vec<BigInt> {
        let deg = self.field.degree;
        let n = self.field.order as usize;
        let mut out: Vec<BigInt> = raw.iter().take(deg).cloned().collect();
        out.resize(deg, BigInt::zero());
        for (j, c) in raw.iter().enumerate().skip(deg) {
            if c.is_zero() {
                continue;
            }
            for (o, p) in out.iter_mut().zip(&self.field.powers[j % n]) {
                if !p.is_zero() {
                    *o += c * p;
                }
            }
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.same_field(o);
        let deg = self.field.degree;
        let mut raw = vec![BigInt::zero(); 2 * deg - 1];
        for (i, a) in self.numer.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.numer.iter().enumerate() {
                if !b.is_zero() {
                    raw[i + j] += a * b;
                }
            }
        }
        let numer = self.reduce_product(raw);
        Self::normalized(self.field.clone(), numer, &self.denom * &o.denom)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        let numer = self.numer.iter().map(|c| c * r.numer()).collect();
        Self::normalized(self.field.clone(), numer, &self.denom * r.denom())
    }

    /// Complex conjugation, `zeta -> zeta^(n-1)`.
    pub fn conj(&self) -> Self {
        let n = self.field.order as usize;
        let mut out = vec![BigInt::zero(); self.field.degree];
        for (k, c) in self.numer.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, p) in out.iter_mut().zip(&self.field.powers[(n - k) % n]) {
                if !p.is_zero() {
                    *o += c * p;
                }
            }
        }
        Self::normalized(self.field.clone(), out, self.denom.clone())
    }

    /// Multiplicative inverse by solving `self * y = 1` over Q.
    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(Self::from_rational(&self.field, &r.recip()));
        }
        let deg = self.field.degree;
        // column j holds numer * x^j reduced
        let mut cols: Vec<Vec<BigInt>> = Vec::with_capacity(deg);
        let mut cur = self.numer.clone();
        for _ in 0..deg {
            cols.push(cur.clone());
            let mut shifted = vec![BigInt::zero(); deg + 1];
            shifted[1..].clone_from_slice(&cur);
            cur = self.reduce_product(shifted);
        }
        let matrix: Vec<Vec<BigRational>> = (0..deg)
            .map(|i| {
                (0..deg)
                    .map(|j| BigRational::from_integer(cols[j][i].clone()))
                    .collect()
            })
            .collect();
        let mut rhs = vec![BigRational::zero(); deg];
        rhs[0] = BigRational::from_integer(self.denom.clone());
        let sol = solve_square(matrix, rhs).ok_or(ScalarError::DivisionByZero)?;
        Ok(Self::from_coefficients(&self.field, &sol))
    }

    /// Image under `Q(zeta_n) -> Q(zeta_m)`, `zeta_n -> zeta_m^(m/n)`.
    pub fn embed(&self, m: u32) -> Self {
        assert!(m.is_multiple_of(self.field.order), "embedding needs n | m");
        if m == self.field.order {
            return self.clone();
        }
        let target = CyclotomicField::get(m);
        let step = (m / self.field.order) as usize;
        let mut out = vec![BigInt::zero(); target.degree];
        for (k, c) in self.numer.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, p) in out.iter_mut().zip(&target.powers[(k * step) % m as usize]) {
                if !p.is_zero() {
                    *o += c * p;
                }
            }
        }
        Self::normalized(target, out, self.denom.clone())
    }

    pub fn canonical_key(&self) -> String {
        let body = self
            .coefficients()
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(";");
        format!("Z{}|{}", self.field.order, body)
    }

    pub fn to_interval(&self, prec: u32) -> ComplexInterval {
        let wp = prec + 8;
        let mut acc = ComplexInterval::zero(wp);
        for (k, c) in self.coefficients().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let z = interval::root_of_unity(k as i64, self.field.order, wp);
            acc = acc.add(&z.scale(c));
        }
        ComplexInterval::new(
            Interval::new(
                interval::round_down(acc.re.lo(), prec),
                interval::round_up(acc.re.hi(), prec),
            ),
            Interval::new(
                interval::round_down(acc.im.lo(), prec),
                interval::round_up(acc.im.hi(), prec),
            ),
            prec,
        )
    }
}

impl fmt::Display for CyclotomicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (k, c) in self.coefficients().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            terms.push(match k {
                0 => format!("{c}"),
                1 => format!("{c}*z{}", self.field.order),
                _ => format!("{c}*z{}^{k}", self.field.order),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// Gaussian elimination over Q; `None` for a singular matrix.
pub(crate) fn solve_square(
    mut a: Vec<Vec<BigRational>>,
    mut b: Vec<BigRational>,
) -> Option<Vec<BigRational>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].recip();
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] * &inv;
            let pivot_row = a[col].clone();
            for (x, y) in a[r].iter_mut().zip(&pivot_row).skip(col) {
                *x -= &f * y;
            }
            let t = &f * &b[col];
            b[r] -= t;
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn cyclotomic_polynomials() {
        let as_i64 = |n| {
            cyclotomic_polynomial(n)
                .iter()
                .map(|c| i64::try_from(c).unwrap())
                .collect::<Vec<_>>()
        };
        assert_eq!(as_i64(1), vec![-1, 1]);
        assert_eq!(as_i64(3), vec![1, 1, 1]);
        assert_eq!(as_i64(4), vec![1, 0, 1]);
        assert_eq!(as_i64(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(120).len() - 1, euler_phi(120));
    }

    #[test]
    fn zeta3_plus_its_square_is_minus_one() {
        let f = CyclotomicField::get(3);
        let z = CyclotomicElement::root_of_unity(&f, 1);
        let z2 = CyclotomicElement::root_of_unity(&f, 2);
        let s = z.add(&z2);
        assert_eq!(s.as_rational(), Some(q(-1, 1)));
        assert!(s.add(&CyclotomicElement::one(&f)).is_zero());
    }

    #[test]
    fn conj_and_inverse_of_roots() {
        let f4 = CyclotomicField::get(4);
        let i = CyclotomicElement::root_of_unity(&f4, 1);
        assert_eq!(i.conj(), CyclotomicElement::root_of_unity(&f4, 3));
        assert_eq!(i.conj(), i.neg());
        let f5 = CyclotomicField::get(5);
        let z = CyclotomicElement::root_of_unity(&f5, 1);
        assert_eq!(z.inv().unwrap(), CyclotomicElement::root_of_unity(&f5, 4));
    }

    #[test]
    fn inverse_of_general_element() {
        let f = CyclotomicField::get(12);
        let a = CyclotomicElement::from_coefficients(&f, &[q(3, 2), q(-1, 1), q(0, 1), q(2, 5)]);
        let inv = a.inv().unwrap();
        assert_eq!(a.mul(&inv), CyclotomicElement::one(&f));
    }

    #[test]
    fn embedding_is_a_homomorphism() {
        let f = CyclotomicField::get(6);
        let a = CyclotomicElement::from_coefficients(&f, &[q(1, 3), q(2, 1)]);
        let b = CyclotomicElement::from_coefficients(&f, &[q(-1, 1), q(5, 7)]);
        assert_eq!(a.add(&b).embed(12), a.embed(12).add(&b.embed(12)));
        assert_eq!(a.mul(&b).embed(12), a.embed(12).mul(&b.embed(12)));
        assert_eq!(a.conj().embed(12), a.embed(12).conj());
    }

    #[test]
    fn interval_of_two_e_i_pi_over_3() {
        let f = CyclotomicField::get(6);
        let z = CyclotomicElement::root_of_unity(&f, 1).scale(&q(2, 1));
        let iv = z.to_interval(64);
        let sqrt3 = interval::parse_decimal("1.7320508075688772935274463").unwrap();
        assert!(iv.contains(&q(1, 1), &sqrt3));
        assert!(iv.re.width() < q(1, 1 << 40));
    }
}
