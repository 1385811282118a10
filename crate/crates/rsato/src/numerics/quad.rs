//! Exact arithmetic in real or imaginary quadratic fields Q(sqrt(d)).
//!
//! An element is `a + b sqrt(d)` with rational `a`, `b` and squarefree
//! `d`. The sentinel `d = 0` marks a plain rational (so rationals embed
//! into any field without declaring one up front); operations joining
//! two distinct nonzero `d` values are rejected.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::ball::{BallComplex, BallReal};
use crate::error::{Error, Result};

pub fn is_squarefree(d: i64) -> bool {
    let mut m = d.unsigned_abs();
    if m < 2 {
        return false;
    }
    let mut p = 2u64;
    while p * p <= m {
        if m % (p * p) == 0 {
            return false;
        }
        while m % p == 0 {
            m /= p;
        }
        p += 1;
    }
    true
}

/// Largest square factor split off: `n = s^2 * f` with `f` squarefree
/// (up to sign). Returns `(s, f)`; `n` must be nonzero.
pub fn squarefree_part(n: &BigInt) -> (BigInt, BigInt) {
    assert!(!n.is_zero());
    let mut f = n.clone();
    let mut s = BigInt::one();
    let mut p = BigInt::from(2);
    // Trial division is fine here: inputs are discriminant-sized.
    while &p * &p <= f.abs() {
        let p2 = &p * &p;
        while (&f % &p2).is_zero() {
            f /= &p2;
            s *= &p;
        }
        p += 1;
    }
    (s, f)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadExt {
    pub a: BigRational,
    pub b: BigRational,
    pub d: i64,
}

impl QuadExt {
    pub fn new(a: BigRational, b: BigRational, d: i64) -> Result<Self> {
        if d != 0 && !is_squarefree(d) {
            return Err(Error::NotSquarefree(d));
        }
        let mut v = QuadExt { a, b, d };
        v.reduce();
        Ok(v)
    }

    fn reduce(&mut self) {
        if self.b.is_zero() {
            self.d = 0;
        }
        if self.d == 0 {
            self.b = BigRational::zero();
        }
    }

    pub fn rational(a: BigRational) -> Self {
        QuadExt {
            a,
            b: BigRational::zero(),
            d: 0,
        }
    }

    pub fn from_i64(v: i64) -> Self {
        QuadExt::rational(BigRational::from_integer(BigInt::from(v)))
    }

    /// sqrt(d) itself.
    pub fn surd(d: i64) -> Result<Self> {
        QuadExt::new(BigRational::zero(), BigRational::one(), d)
    }

    pub fn zero() -> Self {
        QuadExt::from_i64(0)
    }

    pub fn one() -> Self {
        QuadExt::from_i64(1)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.d == 0
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.d == 0 {
            Some(&self.a)
        } else {
            None
        }
    }

    fn join_field(&self, other: &Self) -> Result<i64> {
        match (self.d, other.d) {
            (0, d) | (d, 0) => Ok(d),
            (d1, d2) if d1 == d2 => Ok(d1),
            (d1, d2) => Err(Error::MixedFields(d1, d2)),
        }
    }

    pub fn neg(&self) -> Self {
        QuadExt {
            a: -self.a.clone(),
            b: -self.b.clone(),
            d: self.d,
        }
    }

    pub fn conjugate(&self) -> Self {
        let mut v = QuadExt {
            a: self.a.clone(),
            b: -self.b.clone(),
            d: self.d,
        };
        v.reduce();
        v
    }

    /// Field norm a^2 - d b^2 (rational).
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - BigRational::from_integer(BigInt::from(self.d)) * &self.b * &self.b
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let d = self.join_field(other)?;
        let mut v = QuadExt {
            a: &self.a + &other.a,
            b: &self.b + &other.b,
            d,
        };
        v.reduce();
        Ok(v)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let d = self.join_field(other)?;
        let dd = BigRational::from_integer(BigInt::from(d));
        let mut v = QuadExt {
            a: &self.a * &other.a + &dd * &self.b * &other.b,
            b: &self.a * &other.b + &self.b * &other.a,
            d,
        };
        v.reduce();
        Ok(v)
    }

    pub fn mul_rat(&self, r: &BigRational) -> Self {
        let mut v = QuadExt {
            a: &self.a * r,
            b: &self.b * r,
            d: self.d,
        };
        v.reduce();
        v
    }

    pub fn inv(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero("quadratic field inverse"));
        }
        Ok(self.conjugate().mul_rat(&n.recip()))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.inv()?)
    }

    pub fn pow_u32(&self, mut k: u32) -> Result<Self> {
        let mut base = self.clone();
        let mut acc = QuadExt::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            base = base.mul(&base)?;
            k >>= 1;
        }
        Ok(acc)
    }

    /// Real enclosure; requires d >= 0.
    pub fn to_ball(&self, prec: u32) -> Result<BallReal> {
        if self.d < 0 {
            return Err(Error::Other(format!(
                "real evaluation of element of Q(sqrt({}))",
                self.d
            )));
        }
        let av = BallReal::from_rational(&self.a, prec);
        if self.d == 0 {
            return Ok(av);
        }
        let sq = BallReal::from_i64(self.d, prec).sqrt("sqrt(d)")?;
        Ok(av.add(&BallReal::from_rational(&self.b, prec).mul(&sq)))
    }

    /// Complex enclosure, valid for any sign of d.
    pub fn to_ball_complex(&self, prec: u32) -> Result<BallComplex> {
        if self.d >= 0 {
            return Ok(BallComplex::from_real(self.to_ball(prec)?));
        }
        let re = BallReal::from_rational(&self.a, prec);
        let sq = BallReal::from_i64(-self.d, prec).sqrt("sqrt(-d)")?;
        let im = BallReal::from_rational(&self.b, prec).mul(&sq);
        Ok(BallComplex::new(re, im))
    }
}

impl std::fmt::Display for QuadExt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.d == 0 {
            return write!(f, "{}", self.a);
        }
        if self.a.is_zero() {
            return write!(f, "{}*sqrt({})", self.b, self.d);
        }
        if self.b.is_negative() {
            write!(f, "{} - {}*sqrt({})", self.a, -self.b.clone(), self.d)
        } else {
            write!(f, "{} + {}*sqrt({})", self.a, self.b, self.d)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn squarefree_detection() {
        assert!(is_squarefree(2));
        assert!(is_squarefree(-42));
        assert!(!is_squarefree(12));
        assert!(!is_squarefree(1));
        assert!(!is_squarefree(0));
    }

    #[test]
    fn squarefree_part_splits() {
        let (s, f) = squarefree_part(&BigInt::from(1008));
        assert_eq!(s, BigInt::from(12));
        assert_eq!(f, BigInt::from(7));
    }

    #[test]
    fn field_arithmetic() {
        // (3 - 2 sqrt(2)) * (3 + 2 sqrt(2)) = 1
        let x = QuadExt::new(rat(3, 1), rat(-2, 1), 2).unwrap();
        let y = x.conjugate();
        assert_eq!(x.mul(&y).unwrap(), QuadExt::one());
        assert_eq!(x.inv().unwrap(), y);
        assert_eq!(x.norm(), rat(1, 1));
    }

    #[test]
    fn rational_sentinel_mixes_freely() {
        let r = QuadExt::from_i64(5);
        let x = QuadExt::surd(7).unwrap();
        let s = r.add(&x).unwrap();
        assert_eq!(s.d, 7);
        // subtracting the surd collapses back to a rational
        let back = s.sub(&x).unwrap();
        assert!(back.is_rational());
        assert_eq!(back.as_rational().unwrap(), &rat(5, 1));
    }

    #[test]
    fn mixed_fields_rejected() {
        let x = QuadExt::surd(2).unwrap();
        let y = QuadExt::surd(3).unwrap();
        assert!(matches!(x.add(&y), Err(Error::MixedFields(2, 3))));
        assert!(matches!(x.mul(&y), Err(Error::MixedFields(2, 3))));
    }

    #[test]
    fn non_squarefree_rejected() {
        assert!(matches!(QuadExt::surd(8), Err(Error::NotSquarefree(8))));
    }

    #[test]
    fn ball_evaluation() {
        // 3 - 2 sqrt(2) = 0.17157287525380990...
        let x = QuadExt::new(rat(3, 1), rat(-2, 1), 2).unwrap();
        let b = x.to_ball(128).unwrap();
        let approx = rat(17157287525380990, 100_000_000_000_000_000);
        assert!(b
            .sub(&BallReal::from_rational(&approx, 128))
            .abs_upper()
            .le(&crate::numerics::dyadic::Dyadic::power_of_two(-50)));
    }

    #[test]
    fn complex_ball_evaluation() {
        let x = QuadExt::new(rat(1, 2), rat(1, 2), -3).unwrap();
        let z = x.to_ball_complex(96).unwrap();
        // |(1 + sqrt(-3))/2| = 1
        let n = z.re.mul(&z.re).add(&z.im.mul(&z.im));
        assert!(n.contains_rational(&rat(1, 1)));
    }
}
