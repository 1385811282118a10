//! Truncated q-series with fractional exponents.
//!
//! A series is `sum_k coeffs[k] q^{(lead+k)/ram} + O(q^{order/ram})`
//! with `order = lead + coeffs.len()`. The ramification `ram` is the
//! common denominator of all exponents; integral series use `ram = 1`.
//! A zero series has empty `coeffs` and `lead` equal to the order bound.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;

use super::coeff::Coeff;
use crate::error::{Error, Result};
use crate::numerics::quad::QuadExt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionalQSeries<C: Coeff> {
    ram: u32,
    lead: i64,
    coeffs: Vec<C>,
}

impl<C: Coeff> FractionalQSeries<C> {
    pub fn new(ram: u32, lead: i64, coeffs: Vec<C>) -> Self {
        assert!(ram >= 1);
        let mut s = FractionalQSeries { ram, lead, coeffs };
        s.normalize();
        s
    }

    /// The zero series known to order q^{order_num/ram}.
    pub fn zero_to(ram: u32, order_num: i64) -> Self {
        FractionalQSeries {
            ram,
            lead: order_num,
            coeffs: Vec::new(),
        }
    }

    /// `c * q^{num/den}` known to order q^{order_num/den}.
    pub fn monomial(c: C, num: i64, den: u32, order_num: i64) -> Self {
        assert!(num < order_num);
        let mut coeffs = vec![C::zero(); (order_num - num) as usize];
        coeffs[0] = c;
        FractionalQSeries::new(den, num, coeffs)
    }

    pub fn one_to(order_num: i64) -> Self {
        FractionalQSeries::monomial(C::one(), 0, 1, order_num)
    }

    fn normalize(&mut self) {
        let strip = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if strip > 0 {
            self.coeffs.drain(..strip);
            self.lead += strip as i64;
        }
    }

    pub fn ram(&self) -> u32 {
        self.ram
    }

    /// Numerator of the leading exponent (over `ram`).
    pub fn lead_num(&self) -> i64 {
        self.lead
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Numerator of the truncation order (over `ram`).
    pub fn order_num(&self) -> i64 {
        self.lead + self.coeffs.len() as i64
    }

    pub fn lead_exponent(&self) -> BigRational {
        BigRational::new(BigInt::from(self.lead), BigInt::from(self.ram))
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// Coefficient of q^{num/den}; zero for any exponent off the grid or
    /// below the leading term. Panics past the truncation order.
    pub fn coeff(&self, num: i64, den: u32) -> C {
        let l = (self.ram as i64).lcm(&(den as i64));
        let target = num * (l / den as i64);
        let f = l / self.ram as i64;
        assert!(
            target < self.order_num() * f,
            "coefficient request beyond truncation order"
        );
        if target % f != 0 {
            return C::zero();
        }
        let k = target / f - self.lead;
        if k < 0 || k as usize >= self.coeffs.len() {
            C::zero()
        } else {
            self.coeffs[k as usize].clone()
        }
    }

    /// Re-express with a larger ramification (`new_ram` a multiple of `ram`).
    pub fn with_ram(&self, new_ram: u32) -> Self {
        assert!(new_ram % self.ram == 0);
        let f = (new_ram / self.ram) as i64;
        if f == 1 {
            return self.clone();
        }
        let mut coeffs = vec![C::zero(); (self.coeffs.len() as i64 * f) as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[k * f as usize] = c.clone();
        }
        FractionalQSeries {
            ram: new_ram,
            lead: self.lead * f,
            coeffs,
        }
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        let l = (self.ram as i64).lcm(&(other.ram as i64)) as u32;
        (self.with_ram(l), other.with_ram(l))
    }

    /// Drop terms at or above exponent `order_num / ram`.
    pub fn truncate_to(&self, order_num: i64) -> Self {
        if order_num <= self.lead {
            return FractionalQSeries {
                ram: self.ram,
                lead: order_num,
                coeffs: Vec::new(),
            };
        }
        let mut s = self.clone();
        let keep = ((order_num - s.lead) as usize).min(s.coeffs.len());
        s.coeffs.truncate(keep);
        s
    }

    pub fn neg(&self) -> Self {
        FractionalQSeries {
            ram: self.ram,
            lead: self.lead,
            coeffs: self.coeffs.iter().map(C::neg).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.aligned(other);
        let order = a.order_num().min(b.order_num());
        let lead = a.lead.min(b.lead).min(order);
        let mut coeffs = vec![C::zero(); (order - lead) as usize];
        for (k, slot) in coeffs.iter_mut().enumerate() {
            let e = lead + k as i64;
            let mut v = C::zero();
            let ka = e - a.lead;
            if ka >= 0 && (ka as usize) < a.coeffs.len() {
                v = v.add(&a.coeffs[ka as usize])?;
            }
            let kb = e - b.lead;
            if kb >= 0 && (kb as usize) < b.coeffs.len() {
                v = v.add(&b.coeffs[kb as usize])?;
            }
            *slot = v;
        }
        Ok(FractionalQSeries::new(a.ram, lead, coeffs))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.aligned(other);
        let lead = a.lead + b.lead;
        let order = (a.lead + b.order_num()).min(b.lead + a.order_num());
        let len = (order - lead).max(0) as usize;
        let mut coeffs = vec![C::zero(); len];
        for (i, ca) in a.coeffs.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (j, cb) in b.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                if cb.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].add(&ca.mul(cb)?)?;
            }
        }
        Ok(FractionalQSeries::new(a.ram, lead, coeffs))
    }

    pub fn mul_coeff(&self, c: &C) -> Result<Self> {
        let mut out = self.clone();
        for v in &mut out.coeffs {
            *v = v.mul(c)?;
        }
        out.normalize();
        Ok(out)
    }

    pub fn mul_rat(&self, r: &BigRational) -> Self {
        let mut out = self.clone();
        for v in &mut out.coeffs {
            *v = v.mul_rat(r);
        }
        out.normalize();
        out
    }

    /// Multiply by q^{num/den} (exact exponent shift).
    pub fn shift_exp(&self, num: i64, den: u32) -> Self {
        let l = (self.ram as i64).lcm(&(den as i64)) as u32;
        let mut s = self.with_ram(l);
        s.lead += num * (l as i64 / den as i64);
        s
    }

    /// Reciprocal, to the same relative order.
    pub fn inv(&self) -> Result<Self> {
        if self.coeffs.is_empty() || self.coeffs[0].is_zero() {
            return Err(Error::ZeroSeriesInverse);
        }
        let f0inv = self.coeffs[0].inv()?;
        let n = self.coeffs.len();
        let mut g: Vec<C> = Vec::with_capacity(n);
        g.push(f0inv.clone());
        for k in 1..n {
            let mut acc = C::zero();
            for j in 1..=k {
                if self.coeffs[j].is_zero() {
                    continue;
                }
                acc = acc.add(&self.coeffs[j].mul(&g[k - j])?)?;
            }
            g.push(acc.mul(&f0inv)?.neg());
        }
        Ok(FractionalQSeries {
            ram: self.ram,
            lead: -self.lead,
            coeffs: g,
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.inv()?)
    }

    pub fn pow_i64(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        if k == 0 {
            return Ok(FractionalQSeries::one_to(
                self.order_num() - self.lead,
            )
            .with_ram(self.ram));
        }
        let mut acc: Option<Self> = None;
        let mut sq = base;
        loop {
            if k & 1 == 1 {
                acc = Some(match acc {
                    None => sq.clone(),
                    Some(a) => a.mul(&sq)?,
                });
            }
            k >>= 1;
            if k == 0 {
                break;
            }
            sq = sq.mul(&sq)?;
        }
        Ok(acc.unwrap())
    }

    /// The theta operator q d/dq applied termwise.
    pub fn dq(&self) -> Self {
        let mut out = self.clone();
        for (k, v) in out.coeffs.iter_mut().enumerate() {
            let e = BigRational::new(
                BigInt::from(self.lead + k as i64),
                BigInt::from(self.ram),
            );
            *v = v.mul_rat(&e);
        }
        out.normalize();
        out
    }

    /// Dq(f) / f.
    pub fn q_log_derivative(&self) -> Result<Self> {
        self.dq().mul(&self.inv()?)
    }

    /// Square root of a series with constant term 1 (lead exponent 0).
    pub fn sqrt(&self) -> Result<Self> {
        let ok = self.lead == 0
            && !self.coeffs.is_empty()
            && self.coeffs[0].sub(&C::one()).map(|d| d.is_zero()).unwrap_or(false);
        if !ok {
            let desc = if self.coeffs.is_empty() {
                "O(1) zero series".to_string()
            } else {
                format!("q^({}/{}) * (...)", self.lead, self.ram)
            };
            return Err(Error::SqrtConstantTerm(desc));
        }
        let n = self.coeffs.len();
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let mut s: Vec<C> = Vec::with_capacity(n);
        s.push(C::one());
        for k in 1..n {
            let mut acc = self.coeffs[k].clone();
            for j in 1..k {
                acc = acc.sub(&s[j].mul(&s[k - j])?)?;
            }
            s.push(acc.mul_rat(&half));
        }
        Ok(FractionalQSeries {
            ram: self.ram,
            lead: 0,
            coeffs: s,
        })
    }

    /// Substitute q -> q^n (exponents scale by n; order bound scales too).
    pub fn substitute_qn(&self, n: u32) -> Self {
        assert!(n >= 1);
        let f = n as i64;
        let mut coeffs = vec![C::zero(); self.coeffs.len() * n as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[k * n as usize] = c.clone();
        }
        FractionalQSeries {
            ram: self.ram,
            lead: self.lead * f,
            coeffs,
        }
    }

    /// Change the coefficient ring.
    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> FractionalQSeries<D> {
        FractionalQSeries {
            ram: self.ram,
            lead: self.lead,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }
}

impl FractionalQSeries<BigRational> {
    /// Substitute q -> zeta_n^beta q^{1/n}, the conjugate expansion at
    /// (tau + beta)/n. Supported for n = 2 (zeta real) and n = 3
    /// (zeta_3 in Q(sqrt(-3))); the input must have integral exponents.
    pub fn substitute_root(&self, n: u32, beta: i64) -> Result<FractionalQSeries<QuadExt>> {
        if self.ram != 1 {
            return Err(Error::Other(format!(
                "substitute_root requires integral exponents, got ramification {}",
                self.ram
            )));
        }
        if n != 2 && n != 3 {
            return Err(Error::UnsupportedRoot(n));
        }
        // zeta powers 0..n
        let zpow: Vec<QuadExt> = if n == 2 {
            vec![QuadExt::from_i64(1), QuadExt::from_i64(-1)]
        } else {
            let z = QuadExt::new(
                BigRational::new(BigInt::from(-1), BigInt::from(2)),
                BigRational::new(BigInt::from(1), BigInt::from(2)),
                -3,
            )?;
            vec![QuadExt::one(), z.clone(), z.mul(&z)?]
        };
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let e = self.lead + k as i64;
                let idx = (beta * e).rem_euclid(n as i64) as usize;
                Ok(zpow[idx].mul_rat(c))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FractionalQSeries {
            ram: n,
            lead: self.lead,
            coeffs,
        })
    }
}
