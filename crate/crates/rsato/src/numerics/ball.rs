//! Midpoint-radius arbitrary-precision enclosures over dyadic floats.
//!
//! Every operation returns a ball that contains the exact result of the
//! operation applied to any points of the input balls. Midpoints are
//! rounded to the working precision; radii are kept short (16 bits) and
//! always rounded outward.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::dyadic::Dyadic;
use crate::error::{Error, Result};

/// Bits kept in the radius mantissa.
const RAD_BITS: u32 = 16;

#[derive(Debug, Clone)]
pub struct BallReal {
    mid: Dyadic,
    rad: Dyadic,
    prec: u32,
}

impl BallReal {
    pub fn exact_dyadic(mid: Dyadic, prec: u32) -> Self {
        BallReal {
            mid,
            rad: Dyadic::zero(),
            prec,
        }
    }

    pub fn zero(prec: u32) -> Self {
        BallReal::exact_dyadic(Dyadic::zero(), prec)
    }

    pub fn one(prec: u32) -> Self {
        BallReal::exact_dyadic(Dyadic::one(), prec)
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        BallReal::exact_dyadic(Dyadic::from_i64(v), prec)
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        let (mid, err) = Dyadic::from_rational(r, prec);
        BallReal::with_radius(mid, err, prec)
    }

    pub fn with_radius(mid: Dyadic, rad: Dyadic, prec: u32) -> Self {
        let (mid, err) = mid.round_nearest(prec);
        let rad = rad.add(&err).round_up(RAD_BITS);
        BallReal { mid, rad, prec }
    }

    pub fn mid(&self) -> &Dyadic {
        &self.mid
    }

    pub fn rad(&self) -> &Dyadic {
        &self.rad
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn lower(&self) -> Dyadic {
        self.mid.sub(&self.rad)
    }

    pub fn upper(&self) -> Dyadic {
        self.mid.add(&self.rad)
    }

    /// Upper bound on |x| over the ball.
    pub fn abs_upper(&self) -> Dyadic {
        self.mid.abs().add(&self.rad)
    }

    /// Lower bound on |x| over the ball (0 if the ball straddles 0).
    pub fn abs_lower(&self) -> Dyadic {
        let l = self.mid.abs().sub(&self.rad);
        if l.is_negative() {
            Dyadic::zero()
        } else {
            l
        }
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.lower().is_positive()
    }

    pub fn is_strictly_negative(&self) -> bool {
        self.upper().is_negative()
    }

    pub fn contains_zero(&self) -> bool {
        !self.is_strictly_positive() && !self.is_strictly_negative()
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        let diff = (r - self.mid.to_rational()).abs();
        diff <= self.rad.to_rational()
    }

    pub fn contains_dyadic(&self, x: &Dyadic) -> bool {
        x.sub(&self.mid).abs().le(&self.rad)
    }

    /// Interval containment: every point of `other` lies in `self`.
    pub fn contains_ball(&self, other: &BallReal) -> bool {
        self.lower().le(&other.lower()) && other.upper().le(&self.upper())
    }

    pub fn overlaps(&self, other: &BallReal) -> bool {
        self.lower().le(&other.upper()) && other.lower().le(&self.upper())
    }

    pub fn neg(&self) -> Self {
        BallReal {
            mid: self.mid.neg(),
            rad: self.rad.clone(),
            prec: self.prec,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = self.prec.min(other.prec);
        BallReal::with_radius(self.mid.add(&other.mid), self.rad.add(&other.rad), prec)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let prec = self.prec.min(other.prec);
        let mid = self.mid.mul(&other.mid);
        let rad = self
            .mid
            .abs()
            .mul(&other.rad)
            .add(&other.mid.abs().mul(&self.rad))
            .add(&self.rad.mul(&other.rad));
        BallReal::with_radius(mid, rad, prec)
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        BallReal::with_radius(self.mid.mul_i64(k), self.rad.mul_i64(k.abs()), self.prec)
    }

    pub fn shift(&self, k: i64) -> Self {
        BallReal {
            mid: self.mid.shift(k),
            rad: self.rad.shift(k),
            prec: self.prec,
        }
    }

    /// Reciprocal; the ball must exclude zero.
    pub fn inv(&self) -> Result<Self> {
        let m = self.mid.abs();
        if !m.sub(&self.rad).is_positive() {
            return Err(Error::DivisionByZero("ball reciprocal"));
        }
        let (q, qerr) = Dyadic::div(&Dyadic::one(), &self.mid, self.prec + 2);
        // |1/x - 1/m| <= r / (|m| (|m| - r)) for |x - m| <= r < |m|.
        let denom = m.mul(&m.sub(&self.rad));
        let (prop, perr) = Dyadic::div(&self.rad, &denom, RAD_BITS + 4);
        let rad = prop.add(&perr).add(&qerr);
        Ok(BallReal::with_radius(q, rad, self.prec))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    /// Enclosure of the positive square root; the ball must be strictly positive.
    pub fn sqrt(&self, quantity: &str) -> Result<Self> {
        let lo = self.lower();
        if !lo.is_positive() {
            return Err(Error::NonPositiveBall {
                quantity: quantity.to_string(),
                low: lo.to_decimal(6),
                high: self.upper().to_decimal(6),
            });
        }
        let (slo, _) = lo.sqrt_bounds(self.prec + 2);
        let (_, shi) = self.upper().sqrt_bounds(self.prec + 2);
        let mid = slo.add(&shi).shift(-1);
        let rad = shi.sub(&slo).shift(-1);
        Ok(BallReal::with_radius(mid, rad, self.prec))
    }

    /// Widen the relative error by `eps` (used for truncated-product tails):
    /// result contains x*(1+t) for all |t| <= eps and x in self.
    pub fn inflate_relative(&self, eps: &Dyadic) -> Self {
        let extra = self.abs_upper().mul(eps);
        BallReal::with_radius(self.mid.clone(), self.rad.add(&extra), self.prec)
    }

    /// floor(-log10(upper bound of |x|)); saturates at 0. Rough but only
    /// used for digit reporting, never for enclosure logic.
    pub fn neg_log10_upper(&self) -> i64 {
        let ub = self.abs_upper();
        match ub.log2_floor() {
            None => i64::MAX / 2,
            Some(l2) => {
                let l10 = (l2 as f64 + 1.0) * std::f64::consts::LOG10_2;
                (-l10).floor() as i64
            }
        }
    }

    pub fn to_decimal(&self, digits: usize) -> String {
        self.mid.to_decimal(digits)
    }

    pub fn to_json(&self) -> BallJson {
        BallJson {
            mid: self.mid.to_decimal(2 + (self.prec as f64 * 0.302) as usize),
            rad: self.rad.to_decimal(4),
            prec: self.prec,
        }
    }
}

/// JSON shape: {"mid": decimal string, "rad": decimal string, "prec": int}.
#[derive(Debug, Clone, Serialize)]
pub struct BallJson {
    pub mid: String,
    pub rad: String,
    pub prec: u32,
}

/// Rectangular complex enclosure.
#[derive(Debug, Clone)]
pub struct BallComplex {
    pub re: BallReal,
    pub im: BallReal,
}

impl BallComplex {
    pub fn new(re: BallReal, im: BallReal) -> Self {
        BallComplex { re, im }
    }

    pub fn from_real(re: BallReal) -> Self {
        let prec = re.prec();
        BallComplex {
            re,
            im: BallReal::zero(prec),
        }
    }

    pub fn zero(prec: u32) -> Self {
        BallComplex::new(BallReal::zero(prec), BallReal::zero(prec))
    }

    pub fn one(prec: u32) -> Self {
        BallComplex::new(BallReal::one(prec), BallReal::zero(prec))
    }

    pub fn neg(&self) -> Self {
        BallComplex::new(self.re.neg(), self.im.neg())
    }

    pub fn add(&self, other: &Self) -> Self {
        BallComplex::new(self.re.add(&other.re), self.im.add(&other.im))
    }

    pub fn sub(&self, other: &Self) -> Self {
        BallComplex::new(self.re.sub(&other.re), self.im.sub(&other.im))
    }

    pub fn mul(&self, other: &Self) -> Self {
        BallComplex::new(
            self.re.mul(&other.re).sub(&self.im.mul(&other.im)),
            self.re.mul(&other.im).add(&self.im.mul(&other.re)),
        )
    }

    pub fn mul_real(&self, other: &BallReal) -> Self {
        BallComplex::new(self.re.mul(other), self.im.mul(other))
    }

    pub fn inv(&self) -> Result<Self> {
        let norm = self.re.mul(&self.re).add(&self.im.mul(&self.im));
        let n = norm.inv()?;
        Ok(BallComplex::new(self.re.mul(&n), self.im.neg().mul(&n)))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow_u32(&self, mut k: u32) -> Self {
        let prec = self.re.prec();
        let mut base = self.clone();
        let mut acc = BallComplex::one(prec);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    /// Upper bound on |z|.
    pub fn abs_upper(&self) -> Dyadic {
        let n = self
            .re
            .abs_upper()
            .mul(&self.re.abs_upper())
            .add(&self.im.abs_upper().mul(&self.im.abs_upper()));
        let (_, hi) = n.sqrt_bounds(RAD_BITS + 8);
        hi
    }
}

/// pi as a ball via a Machin-type arctangent formula:
/// pi = 16 atan(1/5) - 4 atan(1/239).
pub fn ref_pi(prec: u32) -> BallReal {
    assert!(prec >= 16, "ref_pi requires prec >= 16");
    let work = prec + 16;
    let a5 = atan_recip_fixed(5, work);
    let a239 = atan_recip_fixed(239, work);
    let pi = a5.mul_i64(16).sub(&a239.mul_i64(4));
    // Round down to the requested precision.
    BallReal::with_radius(pi.mid().clone(), pi.rad().clone(), prec)
}

/// Second Machin-type formula, used as an independent cross-check:
/// pi = 4 atan(1/2) + 4 atan(1/3).
pub fn ref_pi_alt(prec: u32) -> BallReal {
    let work = prec + 16;
    let a2 = atan_recip_fixed(2, work);
    let a3 = atan_recip_fixed(3, work);
    let pi = a2.add(&a3).mul_i64(4);
    BallReal::with_radius(pi.mid().clone(), pi.rad().clone(), prec)
}

/// atan(1/x) for integer x >= 2, by fixed-point Taylor summation.
fn atan_recip_fixed(x: i64, prec: u32) -> BallReal {
    // Work at scale 2^w. Each floor division loses < 1 unit; the
    // truncation tail is below the first omitted term.
    let w = prec + 8;
    let scale = BigInt::from(1) << (w as u64);
    let x2 = BigInt::from(x) * x;
    let mut term = &scale / x; // x^{-(2k+1)} * 2^w, floored
    let mut sum = BigInt::from(0);
    let mut k: i64 = 0;
    let mut steps: i64 = 0;
    while !term.is_zero() {
        let contrib = &term / (2 * k + 1);
        if k % 2 == 0 {
            sum += &contrib;
        } else {
            sum -= &contrib;
        }
        term = &term / &x2;
        k += 1;
        steps += 1;
    }
    // Error: <= 1 unit per floor division (2 per iteration) plus 1 for the tail.
    let err_units = 2 * steps + 2;
    BallReal::with_radius(
        Dyadic::new(sum, -(w as i64)),
        Dyadic::new(BigInt::from(err_units), -(w as i64)),
        prec,
    )
}

/// exp(x) by Taylor summation in ball arithmetic; requires |x| <= 1.
pub fn ball_exp(x: &BallReal, quantity: &str) -> Result<BallReal> {
    let prec = x.prec();
    if Dyadic::one().lt(&x.abs_upper()) {
        return Err(Error::Other(format!(
            "ball_exp({quantity}): |x| <= 1 required, got {}",
            x.abs_upper().to_decimal(4)
        )));
    }
    let mut sum = BallReal::one(prec);
    let mut term = BallReal::one(prec);
    let mut k: i64 = 1;
    let limit = Dyadic::power_of_two(-(prec as i64) - 4);
    loop {
        term = term.mul(x).mul(&BallReal::from_rational(
            &BigRational::new(BigInt::from(1), BigInt::from(k)),
            prec,
        ));
        sum = sum.add(&term);
        if term.abs_upper().lt(&limit) {
            break;
        }
        k += 1;
        if k > 4 * prec as i64 {
            break;
        }
    }
    // Tail bound: for |x| <= 1, sum_{j>k} |x|^j/j! <= 2 |term|.
    let tail = term.abs_upper().shift(1);
    Ok(BallReal::with_radius(
        sum.mid().clone(),
        sum.rad().add(&tail),
        prec,
    ))
}

/// cos(x) and sin(x) by Taylor summation; requires |x| <= 1.
pub fn ball_cos_sin(x: &BallReal) -> Result<(BallReal, BallReal)> {
    let prec = x.prec();
    if Dyadic::one().lt(&x.abs_upper()) {
        return Err(Error::Other(format!(
            "ball_cos_sin: |x| <= 1 required, got {}",
            x.abs_upper().to_decimal(4)
        )));
    }
    let x2 = x.mul(x);
    let mut cos = BallReal::one(prec);
    let mut sin_over_x = BallReal::one(prec);
    let mut term_c = BallReal::one(prec);
    let mut term_s = BallReal::one(prec);
    let limit = Dyadic::power_of_two(-(prec as i64) - 4);
    let mut k: i64 = 1;
    loop {
        let dc = BigRational::new(BigInt::from(1), BigInt::from((2 * k - 1) * (2 * k)));
        let ds = BigRational::new(BigInt::from(1), BigInt::from((2 * k) * (2 * k + 1)));
        term_c = term_c.mul(&x2).mul(&BallReal::from_rational(&dc, prec)).neg();
        term_s = term_s.mul(&x2).mul(&BallReal::from_rational(&ds, prec)).neg();
        cos = cos.add(&term_c);
        sin_over_x = sin_over_x.add(&term_s);
        if term_c.abs_upper().lt(&limit) && term_s.abs_upper().lt(&limit) {
            break;
        }
        k += 1;
        if k > 4 * prec as i64 {
            break;
        }
    }
    // Alternating series with decreasing terms for |x| <= 1: tail below last term.
    let tail_c = term_c.abs_upper();
    let tail_s = term_s.abs_upper();
    let cos = BallReal::with_radius(cos.mid().clone(), cos.rad().add(&tail_c), prec);
    let sin_over_x = BallReal::with_radius(
        sin_over_x.mid().clone(),
        sin_over_x.rad().add(&tail_s),
        prec,
    );
    Ok((cos, sin_over_x.mul(x)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn pi_contains_reference_digits() {
        let pi = ref_pi(128);
        // 40 digits of pi, exact numerator over 10^39
        let p = "3141592653589793238462643383279502884197"
            .parse::<BigInt>()
            .unwrap();
        let approx = BigRational::new(p, BigInt::from(10u32).pow(39u32));
        // |pi - approx| < 10^-39, ball radius ~2^-124, so approx must be
        // within radius + 10^-39 of the midpoint.
        let diff = (pi.mid().to_rational() - approx).abs();
        assert!(diff < rat(1, 10).pow(38));
    }

    #[test]
    fn pi_radius_bound() {
        for prec in [16u32, 64, 192] {
            let pi = ref_pi(prec);
            assert!(pi.rad().le(&Dyadic::power_of_two(4 - prec as i64)));
        }
    }

    #[test]
    fn pi_two_formulas_agree() {
        let a = ref_pi(192);
        let b = ref_pi_alt(192);
        assert!(a.overlaps(&b));
    }

    #[test]
    fn pi_enclosure_monotone() {
        let lowp = ref_pi(32);
        let highp = ref_pi(256);
        assert!(lowp.contains_ball(&highp));
        assert!(lowp.contains_dyadic(highp.mid()));
    }

    #[test]
    fn sqrt_two() {
        let two = BallReal::from_i64(2, 128);
        let r = two.sqrt("two").unwrap();
        let r2 = r.mul(&r);
        assert!(r2.contains_rational(&rat(2, 1)));
        assert!(r.rad().le(&Dyadic::power_of_two(-120)));
    }

    #[test]
    fn sqrt_rejects_straddling_zero() {
        let b = BallReal::with_radius(Dyadic::from_i64(0), Dyadic::one(), 64);
        assert!(b.sqrt("w").is_err());
    }

    #[test]
    fn exp_value() {
        let x = BallReal::from_rational(&rat(1, 2), 128);
        let e = ball_exp(&x, "x").unwrap();
        // e^0.5 = 1.6487212707001281468...
        let expect = BigRational::new(
            "16487212707001281468".parse::<BigInt>().unwrap(),
            "10000000000000000000".parse::<BigInt>().unwrap(),
        );
        assert!(e.sub(&BallReal::from_rational(&expect, 128)).abs_upper().le(&Dyadic::power_of_two(-60)));
    }

    #[test]
    fn cos_sin_pythagoras() {
        let x = BallReal::from_rational(&rat(3, 10), 128);
        let (c, s) = ball_cos_sin(&x).unwrap();
        let one = c.mul(&c).add(&s.mul(&s));
        assert!(one.contains_rational(&rat(1, 1)));
    }

    #[test]
    fn division_enclosure() {
        let a = BallReal::from_rational(&rat(1, 3), 96);
        let b = BallReal::from_rational(&rat(7, 5), 96);
        let q = a.div(&b).unwrap();
        assert!(q.contains_rational(&rat(5, 21)));
    }
}
