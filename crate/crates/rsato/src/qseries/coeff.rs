//! Coefficient ring abstraction for q-series.
//!
//! Operations are fallible because quadratic-field elements can refuse
//! to mix (distinct surds) and inverses can fail; exact rationals simply
//! never return an error.

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::numerics::ball::{BallComplex, BallReal};
use crate::numerics::quad::QuadExt;

/// Working precision for ball-valued series constants; actual data
/// entering a ball series carries its own precision and the minimum wins.
const BALL_COEFF_PREC: u32 = 192;

pub trait Coeff: Clone + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    /// Structural zero test (for balls: exactly the zero ball).
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Result<Self>;
    fn sub(&self, other: &Self) -> Result<Self>;
    fn mul(&self, other: &Self) -> Result<Self>;
    fn neg(&self) -> Self;
    fn inv(&self) -> Result<Self>;
    fn mul_rat(&self, r: &BigRational) -> Self;
    fn from_rational(r: &BigRational) -> Self;
}

impl Coeff for BigRational {
    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn one() -> Self {
        num_traits::One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Result<Self> {
        Ok(self + other)
    }
    fn sub(&self, other: &Self) -> Result<Self> {
        Ok(self - other)
    }
    fn mul(&self, other: &Self) -> Result<Self> {
        Ok(self * other)
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn inv(&self) -> Result<Self> {
        if Zero::is_zero(self) {
            return Err(Error::DivisionByZero("rational coefficient inverse"));
        }
        Ok(self.recip())
    }
    fn mul_rat(&self, r: &BigRational) -> Self {
        self * r
    }
    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }
}

impl Coeff for QuadExt {
    fn zero() -> Self {
        QuadExt::zero()
    }
    fn one() -> Self {
        QuadExt::one()
    }
    fn is_zero(&self) -> bool {
        QuadExt::is_zero(self)
    }
    fn add(&self, other: &Self) -> Result<Self> {
        QuadExt::add(self, other)
    }
    fn sub(&self, other: &Self) -> Result<Self> {
        QuadExt::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Result<Self> {
        QuadExt::mul(self, other)
    }
    fn neg(&self) -> Self {
        QuadExt::neg(self)
    }
    fn inv(&self) -> Result<Self> {
        QuadExt::inv(self)
    }
    fn mul_rat(&self, r: &BigRational) -> Self {
        QuadExt::mul_rat(self, r)
    }
    fn from_rational(r: &BigRational) -> Self {
        QuadExt::rational(r.clone())
    }
}

impl Coeff for BallComplex {
    fn zero() -> Self {
        BallComplex::zero(BALL_COEFF_PREC)
    }
    fn one() -> Self {
        BallComplex::one(BALL_COEFF_PREC)
    }
    fn is_zero(&self) -> bool {
        self.re.mid().is_zero()
            && self.re.rad().is_zero()
            && self.im.mid().is_zero()
            && self.im.rad().is_zero()
    }
    fn add(&self, other: &Self) -> Result<Self> {
        Ok(BallComplex::add(self, other))
    }
    fn sub(&self, other: &Self) -> Result<Self> {
        Ok(BallComplex::sub(self, other))
    }
    fn mul(&self, other: &Self) -> Result<Self> {
        Ok(BallComplex::mul(self, other))
    }
    fn neg(&self) -> Self {
        BallComplex::neg(self)
    }
    fn inv(&self) -> Result<Self> {
        BallComplex::inv(self)
    }
    fn mul_rat(&self, r: &BigRational) -> Self {
        self.mul_real(&BallReal::from_rational(r, BALL_COEFF_PREC))
    }
    fn from_rational(r: &BigRational) -> Self {
        BallComplex::from_real(BallReal::from_rational(r, BALL_COEFF_PREC))
    }
}
