//! Eta quotients: q-expansions of products of scaled Dedekind eta
//! functions, eta_a = q^{a/24} prod_{n>=1} (1 - q^{an}).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::series::FractionalQSeries;

/// `(prod_i eta_{a_i}^{e_i})^{outer_power}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaQuotientSpec {
    pub factors: Vec<(u32, i32)>,
    pub outer_power: i32,
}

impl EtaQuotientSpec {
    pub fn new(factors: Vec<(u32, i32)>, outer_power: i32) -> Self {
        EtaQuotientSpec {
            factors,
            outer_power,
        }
    }

    /// Numerator over 24 of the leading exponent: outer * sum a_i e_i.
    pub fn lead_24ths(&self) -> i64 {
        let s: i64 = self
            .factors
            .iter()
            .map(|&(a, e)| a as i64 * e as i64)
            .sum();
        s * self.outer_power as i64
    }
}

/// Expand the quotient through `order` coefficients past the leading
/// term. The infinite products are handled by sparse binomial passes
/// (multiplying or dividing by each (1 - q^{an}) in place), so the grid
/// stays integral; the q^{s/24} prefactor is attached at the end.
pub fn eta_quotient(spec: &EtaQuotientSpec, order: usize) -> FractionalQSeries<BigRational> {
    assert!(order >= 1);
    let len = order;
    let mut grid: Vec<BigInt> = vec![BigInt::zero(); len];
    grid[0] = BigInt::one();
    for &(a, e) in &spec.factors {
        let total = e as i64 * spec.outer_power as i64;
        if total == 0 {
            continue;
        }
        let a = a as usize;
        let mut n = 1;
        while a * n < len {
            let m = a * n;
            for _ in 0..total.unsigned_abs() {
                if total > 0 {
                    // multiply by (1 - q^m)
                    for k in (m..len).rev() {
                        let t = grid[k - m].clone();
                        grid[k] -= t;
                    }
                } else {
                    // divide by (1 - q^m)
                    for k in m..len {
                        let t = grid[k - m].clone();
                        grid[k] += t;
                    }
                }
            }
            n += 1;
        }
    }
    let coeffs: Vec<BigRational> = grid.into_iter().map(BigRational::from_integer).collect();
    let s = spec.lead_24ths();
    if s % 24 == 0 {
        FractionalQSeries::new(1, s / 24, coeffs)
    } else {
        FractionalQSeries::new(1, 0, coeffs).shift_exp(s, 24)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(p: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(p))
    }

    #[test]
    fn empty_spec_is_one() {
        let s = eta_quotient(&EtaQuotientSpec::new(vec![], 1), 5);
        assert_eq!(s.lead_num(), 0);
        assert_eq!(s.coeff(0, 1), rat(1));
        assert_eq!(s.coeff(3, 1), rat(0));
    }

    #[test]
    fn eta1_expansion() {
        // eta_1 = q^{1/24}(1 - q - q^2 + q^5 + q^7 - ...)
        let s = eta_quotient(&EtaQuotientSpec::new(vec![(1, 1)], 1), 9);
        assert_eq!(s.ram(), 24);
        assert_eq!(s.lead_exponent(), BigRational::new(BigInt::one(), BigInt::from(24)));
        let expect = [1, -1, -1, 0, 0, 1, 0, 1, 0];
        for (k, &v) in expect.iter().enumerate() {
            assert_eq!(s.coeff(1 + 24 * k as i64, 24), rat(v));
        }
    }

    #[test]
    fn euler_inverse_is_partitions() {
        // 1/eta-product part = partition generating function
        let s = eta_quotient(&EtaQuotientSpec::new(vec![(1, -1)], 1), 10);
        let expect = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30];
        for (k, &v) in expect.iter().enumerate() {
            assert_eq!(s.coeff(-1 + 24 * k as i64, 24), rat(v));
        }
    }

    #[test]
    fn hauptmodul_39_expansion() {
        // t for 39+39 = eta_3 eta_13 / (eta_1 eta_39); x = 1/t
        let spec = EtaQuotientSpec::new(vec![(3, 1), (13, 1), (1, -1), (39, -1)], 1);
        assert_eq!(spec.lead_24ths(), -24);
        let t = eta_quotient(&spec, 16);
        assert_eq!(t.ram(), 1);
        assert_eq!(t.lead_num(), -1);
        let x = t.inv().unwrap();
        let expect = [1, -1, -1, 1, -1, 0, 2];
        for (k, &v) in expect.iter().enumerate() {
            assert_eq!(x.coeff(1 + k as i64, 1), rat(v), "x coeff q^{}", 1 + k);
        }
    }

    #[test]
    fn stability_under_higher_order() {
        let spec = EtaQuotientSpec::new(vec![(2, 1), (7, 1), (1, -1), (14, -1)], 4);
        let lo = eta_quotient(&spec, 20);
        let hi = eta_quotient(&spec, 36);
        assert!(hi.truncate_to(lo.order_num()).sub(&lo).unwrap().is_empty());
    }
}
