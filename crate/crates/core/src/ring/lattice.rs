//! Lattices `Z + xZ` and the three-angle ring criterion.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::RingError;
use crate::geometry::{intersect, UnitAngle};
use crate::scalar::ExactScalar;

/// Trace and norm of a non-real `x`, i.e. the coefficients of
/// `(X - x)(X - conj x) = X^2 - trace X + norm`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticTest {
    pub x: ExactScalar,
    pub trace: ExactScalar,
    pub norm: ExactScalar,
    /// `(lambda, mu)` with `x^2 = lambda x + mu`, when trace and norm are
    /// rational integers.
    pub relation: Option<(BigInt, BigInt)>,
}

impl QuadraticTest {
    pub fn is_quadratic_integer(&self) -> bool {
        self.relation.is_some()
    }
}

fn require_non_real(x: &ExactScalar) -> Result<(), RingError> {
    if x.is_real() {
        Err(RingError::DegenerateReal(x.to_string()))
    } else {
        Ok(())
    }
}

pub fn quadratic_integer_test(x: &ExactScalar) -> Result<QuadraticTest, RingError> {
    require_non_real(x)?;
    let xc = x.conj();
    let trace = x.checked_add(&xc)?;
    let norm = x.checked_mul(&xc)?;
    let relation = match (trace.as_integer(), norm.as_integer()) {
        (Some(t), Some(n)) => Some((t, -n)),
        _ => None,
    };
    Ok(QuadraticTest {
        x: x.clone(),
        trace,
        norm,
        relation,
    })
}

/// Whether `Z + xZ = Z + yZ`: writing `x = a + bi`, `y = c + di`, this holds
/// iff `b = d` and `a - c` is an integer, or `b = -d` and `a + c` is.
pub fn same_lattice(x: &ExactScalar, y: &ExactScalar) -> Result<bool, RingError> {
    require_non_real(x)?;
    require_non_real(y)?;
    // 2ib = x - conj x, 2a = x + conj x
    let bx = x.checked_sub(&x.conj())?;
    let by = y.checked_sub(&y.conj())?;
    let ax = x.checked_add(&x.conj())?;
    let ay = y.checked_add(&y.conj())?;
    let half = BigRational::new(1.into(), 2.into());
    let integral = |v: ExactScalar| v.scale(&half).is_integer();
    if bx.value_eq(&by) && integral(ax.checked_sub(&ay)?) {
        return Ok(true);
    }
    Ok(bx.value_eq(&by.neg()) && integral(ax.checked_add(&ay)?))
}

/// The point `tan(theta)/(tan(theta) - tan(phi)) (1 + i tan(phi))`, where the
/// ray from 0 at angle `phi` meets the line through 1 at angle `theta`.
///
/// With `T(w) = (w - 1/w)/(w + 1/w) = i tan(arg w)` this is
/// `T_theta (1 + T_phi) / (T_theta - T_phi)`, which needs no `i`. A
/// vertical direction has no tangent and falls back to the intersection.
pub fn tangent_point(theta: &UnitAngle, phi: &UnitAngle) -> Result<ExactScalar, RingError> {
    let direct = intersect(phi, theta, &phi.value().zero_like(), &phi.value().one_like())?;
    let t = |w: &ExactScalar| -> Result<Option<ExactScalar>, RingError> {
        let s = w.checked_add(&w.conj())?;
        if s.is_zero() {
            return Ok(None);
        }
        Ok(Some(w.checked_sub(&w.conj())?.checked_div(&s)?))
    };
    let (Some(tt), Some(tp)) = (t(theta.value())?, t(phi.value())?) else {
        return Ok(direct);
    };
    let one = tt.one_like();
    let x = tt
        .checked_mul(&one.checked_add(&tp)?)?
        .checked_div(&tt.checked_sub(&tp)?)?;
    assert!(x.value_eq(&direct), "tangent formula disagrees with intersection");
    Ok(x)
}

/// Integers `(m, n)` with `p = m + n x`, if any.
pub fn lattice_coordinates(p: &ExactScalar, x: &ExactScalar) -> Result<Option<(BigInt, BigInt)>, RingError> {
    require_non_real(x)?;
    let n = p.checked_sub(&p.conj())?.checked_div(&x.checked_sub(&x.conj())?)?;
    let Some(n_int) = n.as_integer() else {
        return Ok(None);
    };
    let m = p.checked_sub(&x.checked_mul(&n)?)?;
    Ok(m.as_integer().map(|m| (m, n_int)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::angles;
    use crate::scalar::{rational, CyclotomicElement, CyclotomicField};

    fn zeta(n: u32, k: i64) -> ExactScalar {
        CyclotomicElement::root_of_unity(&CyclotomicField::get(n), k).into()
    }

    #[test]
    fn eisenstein_generator() {
        let q = quadratic_integer_test(&zeta(6, 1)).unwrap();
        assert_eq!(q.relation, Some((1.into(), (-1).into())));
        let i = quadratic_integer_test(&zeta(4, 1)).unwrap();
        assert_eq!(i.relation, Some((0.into(), (-1).into())));
    }

    #[test]
    fn one_plus_i_over_root_three_fails() {
        let set = angles("0,pi*1/6,pi*1/2").unwrap();
        let x = intersect(set.get(1), set.get(2), &set.constant(0), &set.constant(1)).unwrap();
        let q = quadratic_integer_test(&x).unwrap();
        assert!(!q.is_quadratic_integer());
        assert_eq!(q.norm.as_rational(), Some(rational(4, 3)));
        assert_eq!(q.trace.as_rational(), Some(rational(2, 1)));
    }

    #[test]
    fn real_values_rejected() {
        assert!(matches!(
            quadratic_integer_test(&ExactScalar::from(2)),
            Err(RingError::DegenerateReal(_))
        ));
    }

    #[test]
    fn lattice_equality_cases() {
        let i = zeta(4, 1);
        let one = i.one_like();
        assert!(same_lattice(&i, &i).unwrap());
        assert!(same_lattice(&i, &(&i + &one)).unwrap());
        assert!(same_lattice(&i, &i.neg()).unwrap());
        assert!(!same_lattice(&i, &(&i + &i)).unwrap());
        let x = &zeta(6, 1) + &one.scale(&rational(1, 3));
        assert!(same_lattice(&x, &(&x.neg() + &one.scale(&rational(5, 1)))).unwrap());
        assert!(!same_lattice(&x, &(&x.neg() + &one.scale(&rational(1, 3)))).unwrap());
    }

    #[test]
    fn tangent_examples() {
        let set = angles("0,pi*1/6,pi*1/3,pi*1/2").unwrap();
        // 3/2 + i sqrt3/2 = sqrt3 e^{i pi/6}
        let x = tangent_point(set.get(2), set.get(1)).unwrap();
        let sqrt3 = &zeta(12, 1) + &zeta(12, -1);
        assert!(x.value_eq(&(&zeta(12, 1) * &sqrt3)));
        // vertical fallback gives 1 + i sqrt3
        let y = tangent_point(set.get(3), set.get(2)).unwrap();
        assert!(y.value_eq(&zeta(12, 2).scale(&rational(2, 1))));
        assert!(tangent_point(set.get(1), set.get(1)).is_err());
    }

    #[test]
    fn coordinates_in_lattice() {
        let x = zeta(6, 1);
        let one = x.one_like();
        let p = &(&x.scale(&rational(3, 1)) - &one) + &one.scale(&rational(-4, 1));
        assert_eq!(lattice_coordinates(&p, &x).unwrap(), Some(((-5).into(), 3.into())));
        let half = x.scale(&rational(1, 2));
        assert_eq!(lattice_coordinates(&half, &x).unwrap(), None);
    }
}
