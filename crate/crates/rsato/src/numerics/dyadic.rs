//! Exact dyadic floats: arbitrary-size mantissa times a power of two.
//!
//! All arithmetic here is exact; rounding happens only through the
//! explicit `round_*` entry points, which report their error. Ball
//! arithmetic is built on top of this.

use num_bigint::{BigInt, Sign};

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `man * 2^exp`, normalized so `man` is odd (or zero).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dyadic {
    man: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(man: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { man, exp };
        d.normalize();
        d
    }

    pub fn zero() -> Self {
        Dyadic {
            man: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            man: BigInt::one(),
            exp: 0,
        }
    }

    pub fn from_i64(v: i64) -> Self {
        Dyadic::new(BigInt::from(v), 0)
    }

    /// 2^exp
    pub fn power_of_two(exp: i64) -> Self {
        Dyadic {
            man: BigInt::one(),
            exp,
        }
    }

    fn normalize(&mut self) {
        if self.man.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.man.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.man >>= tz;
            self.exp += tz as i64;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.man.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.man.is_negative()
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.man
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    /// Number of significant bits of the mantissa.
    pub fn bits(&self) -> u64 {
        self.man.magnitude().bits()
    }

    /// floor(log2 |x|); `None` for zero.
    pub fn log2_floor(&self) -> Option<i64> {
        if self.man.is_zero() {
            None
        } else {
            Some(self.bits() as i64 - 1 + self.exp)
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            man: self.man.abs(),
            exp: self.exp,
        }
    }

    pub fn neg(&self) -> Self {
        Dyadic {
            man: -self.man.clone(),
            exp: self.exp,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (lo, hi) = if self.exp <= other.exp {
            (self, other)
        } else {
            (other, self)
        };
        let shift = (hi.exp - lo.exp) as u64;
        Dyadic::new(&lo.man + (&hi.man << shift), lo.exp)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Dyadic::new(&self.man * &other.man, self.exp + other.exp)
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        Dyadic::new(&self.man * k, self.exp)
    }

    /// Exact doubling/halving.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic {
            man: self.man.clone(),
            exp: self.exp + k,
        }
    }

    pub fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        let sa = self.man.sign();
        let sb = other.man.sign();
        match (sa, sb) {
            (Sign::Minus, Sign::NoSign) | (Sign::Minus, Sign::Plus) | (Sign::NoSign, Sign::Plus) => {
                return Ordering::Less
            }
            (Sign::Plus, Sign::NoSign) | (Sign::Plus, Sign::Minus) | (Sign::NoSign, Sign::Minus) => {
                return Ordering::Greater
            }
            (Sign::NoSign, Sign::NoSign) => return Ordering::Equal,
            _ => {}
        }
        // Same nonzero sign: compare magnitudes via log2 first to avoid huge shifts.
        let la = self.log2_floor().unwrap();
        let lb = other.log2_floor().unwrap();
        let positive = sa == Sign::Plus;
        if la != lb {
            let mag = la.cmp(&lb);
            return if positive { mag } else { mag.reverse() };
        }
        match self.sub(other).man.sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }

    pub fn lt(&self, other: &Self) -> bool {
        self.cmp(other) == std::cmp::Ordering::Less
    }

    pub fn le(&self, other: &Self) -> bool {
        self.cmp(other) != std::cmp::Ordering::Greater
    }

    /// Round to at most `prec` mantissa bits, to nearest. Returns the
    /// rounded value and an upper bound on the absolute error.
    pub fn round_nearest(&self, prec: u32) -> (Self, Self) {
        let bits = self.bits();
        if bits <= prec as u64 {
            return (self.clone(), Dyadic::zero());
        }
        let shift = bits - prec as u64;
        let half = BigInt::one() << (shift - 1);
        let m = if self.man.is_negative() {
            -BigInt::from((self.man.magnitude() + half.magnitude()) >> shift)
        } else {
            (&self.man + &half) >> shift
        };
        let err = Dyadic::power_of_two(self.exp + shift as i64 - 1);
        (Dyadic::new(BigInt::from(m), self.exp + shift as i64), err)
    }

    /// Round a non-negative value up (toward +inf) to at most `prec` bits.
    pub fn round_up(&self, prec: u32) -> Self {
        debug_assert!(!self.is_negative());
        let bits = self.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let shift = bits - prec as u64;
        let mask = (BigInt::one() << shift) - 1u32;
        let mut m = &self.man >> shift;
        if !(&self.man & &mask).is_zero() {
            m += 1;
        }
        Dyadic::new(m, self.exp + shift as i64)
    }

    /// num / den rounded to `prec` bits; returns (quotient, error bound).
    /// `den` must be nonzero.
    pub fn div(num: &Self, den: &Self, prec: u32) -> (Self, Self) {
        assert!(!den.is_zero(), "dyadic division by zero");
        if num.is_zero() {
            return (Dyadic::zero(), Dyadic::zero());
        }
        // Shift numerator so the integer quotient has ~prec+2 bits.
        let want = prec as i64 + 2;
        let s = want + den.bits() as i64 - num.bits() as i64;
        let s_pos = s.max(0) as u64;
        let q = (&num.man << s_pos) / &den.man;
        let exp = num.exp - den.exp - s_pos as i64;
        // Floor division of magnitudes differs from floor of the signed
        // quotient, but either way the error is below one ulp.
        (Dyadic::new(q, exp), Dyadic::power_of_two(exp))
    }

    /// Lower and upper bounds of sqrt(x) to roughly `prec` bits. `x >= 0`.
    pub fn sqrt_bounds(&self, prec: u32) -> (Self, Self) {
        assert!(!self.is_negative(), "sqrt of negative dyadic");
        if self.is_zero() {
            return (Dyadic::zero(), Dyadic::zero());
        }
        // Scale so the shifted mantissa has >= 2*prec+2 bits and even exponent.
        let bits = self.bits() as i64;
        let mut s = (2 * prec as i64 + 2 - bits).max(0);
        if (self.exp - s) % 2 != 0 {
            s += 1;
        }
        let shifted = &self.man << (s as u64);
        let root = shifted.sqrt();
        let exp = (self.exp - s) / 2;
        let lo = Dyadic::new(root.clone(), exp);
        let hi = Dyadic::new(root + 1, exp);
        (lo, hi)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.man << (self.exp as u64))
        } else {
            BigRational::new(self.man.clone(), BigInt::one() << ((-self.exp) as u64))
        }
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> (Self, Self) {
        let num = Dyadic::new(r.numer().clone(), 0);
        let den = Dyadic::new(r.denom().clone(), 0);
        Dyadic::div(&num, &den, prec)
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        // Keep only the top 64 bits to avoid overflow.
        let bits = self.bits();
        let (man, exp) = if bits > 64 {
            let shift = bits - 64;
            ((&self.man >> shift).to_i128().unwrap_or(0) as f64, self.exp + shift as i64)
        } else {
            (self.man.to_i128().unwrap_or(0) as f64, self.exp)
        };
        man * 2f64.powi(exp.clamp(-1400, 1400) as i32)
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        // |x| = man * 2^exp; decimal exponent e10 ~ log10 |x|.
        let log10 = self.log2_floor().unwrap() as f64 * std::f64::consts::LOG10_2;
        let e10 = log10.floor() as i64;
        // digits significant digits: represent round(|x| * 10^(digits-1-e10)).
        let k = digits as i64 - 1 - e10;
        let mag = self.abs();
        let scaled = if k >= 0 {
            mag.mul(&Dyadic::new(BigInt::from(10u32).pow(k as u32), 0))
        } else {
            let (q, _) = Dyadic::div(
                &mag,
                &Dyadic::new(BigInt::from(10u32).pow((-k) as u32), 0),
                (digits as u32) * 4 + 32,
            );
            q
        };
        // Round scaled to nearest integer.
        let int = if scaled.exp >= 0 {
            scaled.man.clone() << (scaled.exp as u64)
        } else {
            let shift = (-scaled.exp) as u64;
            let half = BigInt::one() << (shift - 1);
            (&scaled.man + half) >> shift
        };
        let mut digs = int.to_string();
        let mut e10 = e10;
        if digs.len() > digits {
            // rounding bumped us to an extra digit (e.g. 999.9 -> 1000)
            e10 += (digs.len() - digits) as i64;
            digs.truncate(digits);
        }
        let sign = if self.is_negative() { "-" } else { "" };
        let mantissa = if digs.len() > 1 {
            format!("{}.{}", &digs[..1], &digs[1..])
        } else {
            digs.clone()
        };
        format!("{}{}e{}", sign, mantissa, e10)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(v: i64, e: i64) -> Dyadic {
        Dyadic::new(BigInt::from(v), e)
    }

    #[test]
    fn arithmetic_is_exact() {
        let a = d(3, -2); // 0.75
        let b = d(5, -3); // 0.625
        assert_eq!(a.add(&b), d(11, -3));
        assert_eq!(a.sub(&b), d(1, -3));
        assert_eq!(a.mul(&b), d(15, -5));
    }

    #[test]
    fn rounding_reports_error() {
        let x = d((1 << 20) + 1, 0);
        let (r, e) = x.round_nearest(8);
        assert!(r.sub(&x).abs().le(&e));
        assert!(r.bits() <= 8);
    }

    #[test]
    fn division_error_bound() {
        let (q, e) = Dyadic::div(&d(1, 0), &d(3, 0), 64);
        let exact = BigRational::new(BigInt::one(), BigInt::from(3));
        let diff = (q.to_rational() - exact).abs();
        assert!(diff <= e.to_rational());
    }

    #[test]
    fn sqrt_bounds_bracket() {
        let x = d(2, 0);
        let (lo, hi) = x.sqrt_bounds(64);
        assert!(lo.mul(&lo).le(&x));
        assert!(x.le(&hi.mul(&hi)));
        assert!(hi.sub(&lo).le(&Dyadic::power_of_two(-60)));
    }

    #[test]
    fn decimal_rendering() {
        let x = d(1, -1);
        assert_eq!(x.to_decimal(3), "5.00e-1");
    }
}
