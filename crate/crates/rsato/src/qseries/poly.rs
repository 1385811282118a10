//! Dense univariate polynomials over Q, and extraction of polynomial or
//! power-series representations of a q-series in the Hauptmodul x.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::coeff::Coeff;
use super::series::FractionalQSeries;
use crate::error::{Error, Result};
use crate::numerics::ball::BallReal;
use crate::numerics::format_rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().map(Zero::is_zero).unwrap_or(false) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn from_i64(vals: &[i64]) -> Self {
        Poly::new(
            vals.iter()
                .map(|&v| BigRational::from_integer(BigInt::from(v)))
                .collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(<BigRational as Zero>::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&BigRational::from_integer(BigInt::from(-1))))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![<BigRational as Zero>::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Poly::new(self.coeffs.iter().map(|c| c * r).collect())
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = <BigRational as Zero>::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Horner evaluation in any coefficient ring.
    pub fn eval<C: Coeff>(&self, x: &C) -> Result<C> {
        let mut acc = C::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x)?.add(&C::from_rational(c))?;
        }
        Ok(acc)
    }

    pub fn eval_ball(&self, x: &BallReal) -> BallReal {
        let prec = x.prec();
        let mut acc = BallReal::zero(prec);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(&BallReal::from_rational(c, prec));
        }
        acc
    }

    /// Horner evaluation at a q-series argument.
    pub fn eval_series<C: Coeff>(
        &self,
        x: &FractionalQSeries<C>,
    ) -> Result<FractionalQSeries<C>> {
        let ord = x.order_num();
        let ram = x.ram();
        let mut acc = FractionalQSeries::zero_to(ram, ord);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x)?;
            if !Zero::is_zero(c) {
                let m = FractionalQSeries::monomial(C::from_rational(c), 0, ram, ord);
                acc = acc.add(&m)?;
            } else {
                acc = acc.truncate_to(ord.min(acc.order_num()));
            }
        }
        Ok(acc)
    }

    /// Render with `var` as the indeterminate, highest degree first.
    pub fn display(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts: Vec<String> = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if Zero::is_zero(c) {
                continue;
            }
            let mag = c.abs();
            let body = match i {
                0 => format_rational(&mag),
                _ => {
                    let pow = if i == 1 {
                        var.to_string()
                    } else {
                        format!("{var}^{i}")
                    };
                    if mag.is_one() {
                        pow
                    } else {
                        format!("{}*{}", format_rational(&mag), pow)
                    }
                }
            };
            if parts.is_empty() {
                parts.push(if c.is_negative() {
                    format!("-{body}")
                } else {
                    body
                });
            } else {
                parts.push(format!("{} {body}", if c.is_negative() { "-" } else { "+" }));
            }
        }
        parts.join(" ")
    }
}

/// Write `f` as a polynomial of degree <= `maxdeg` in `x`, where
/// `x = q + O(q^2)`. The residual must vanish through a guard window of
/// at least 8 extra orders, otherwise the series is not polynomial in x.
pub fn express_in_x(
    f: &FractionalQSeries<BigRational>,
    x: &FractionalQSeries<BigRational>,
    maxdeg: usize,
    guard: usize,
) -> Result<Poly> {
    let guard = guard.max(8);
    let window = maxdeg as i64 + guard as i64 + 1;
    let (coeffs, residual) = project_on_x(f, x, maxdeg, window)?;
    if !residual.is_empty() && residual.lead_num() <= maxdeg as i64 + guard as i64 {
        return Err(Error::NotPolynomial {
            maxdeg,
            exponent: residual.lead_num().to_string(),
        });
    }
    Ok(Poly::new(coeffs))
}

/// First `count` coefficients of `f` as a power series in `x` (no
/// residual check; `f` need not be polynomial).
pub fn coefficients_in_x(
    f: &FractionalQSeries<BigRational>,
    x: &FractionalQSeries<BigRational>,
    count: usize,
) -> Result<Vec<BigRational>> {
    let (coeffs, _) = project_on_x(f, x, count.saturating_sub(1), count as i64)?;
    Ok(coeffs)
}

fn project_on_x(
    f: &FractionalQSeries<BigRational>,
    x: &FractionalQSeries<BigRational>,
    maxdeg: usize,
    window: i64,
) -> Result<(Vec<BigRational>, FractionalQSeries<BigRational>)> {
    assert!(x.ram() == 1 && f.ram() == 1, "integral exponents required");
    assert!(
        x.lead_num() == 1 && x.coeff(1, 1).is_one(),
        "x must be q + O(q^2)"
    );
    if f.order_num() < window || x.order_num() < window {
        return Err(Error::Other(format!(
            "series order too low for extraction window {window}"
        )));
    }
    if !f.is_empty() && f.lead_num() < 0 {
        return Err(Error::NotPolynomial {
            maxdeg,
            exponent: f.lead_num().to_string(),
        });
    }
    let mut r = f.truncate_to(window);
    let x = x.truncate_to(window);
    let mut xk = FractionalQSeries::one_to(window);
    let mut coeffs = Vec::with_capacity(maxdeg + 1);
    for k in 0..=maxdeg {
        let a = if r.is_empty() || r.lead_num() > k as i64 {
            <BigRational as Zero>::zero()
        } else {
            r.coeff(k as i64, 1)
        };
        if !Zero::is_zero(&a) {
            r = r.sub(&xk.mul_rat(&a))?;
        }
        coeffs.push(a);
        if k < maxdeg {
            xk = xk.mul(&x)?.truncate_to(window);
        }
    }
    Ok((coeffs, r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    fn series(lead: i64, vals: &[i64]) -> FractionalQSeries<BigRational> {
        FractionalQSeries::new(1, lead, vals.iter().map(|&v| rat(v, 1)).collect())
    }

    #[test]
    fn eval_and_derivative() {
        let p = Poly::from_i64(&[1, -3, 2]); // 2x^2 - 3x + 1
        assert_eq!(p.eval_rational(&rat(2, 1)), rat(3, 1));
        assert_eq!(p.derivative(), Poly::from_i64(&[-3, 4]));
        assert_eq!(p.degree(), 2);
    }

    #[test]
    fn eval_series_matches_direct() {
        let p = Poly::from_i64(&[0, 1, 1]); // x + x^2
        let x = series(1, &[1, -1, 0, 0, 0, 0, 0]); // q - q^2
        let v = p.eval_series(&x).unwrap();
        let direct = x.add(&x.mul(&x).unwrap()).unwrap();
        assert!(v.sub(&direct).unwrap().is_empty());
    }

    #[test]
    fn express_polynomial() {
        // f = x^2 + 5x for x = q + 3q^2 (+ enough known order)
        let x = series(1, &[1, 3, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]);
        let f = Poly::from_i64(&[0, 5, 1]).eval_series(&x).unwrap();
        let p = express_in_x(&f, &x, 4, 8).unwrap();
        assert_eq!(p, Poly::from_i64(&[0, 5, 1]));
    }

    #[test]
    fn express_rejects_nonpolynomial() {
        let x = series(1, &[1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]);
        // geometric series in x: 1/(1-x) is not a degree-2 polynomial
        let f = FractionalQSeries::one_to(12).sub(&x).unwrap().inv().unwrap();
        assert!(matches!(
            express_in_x(&f, &x, 2, 8),
            Err(Error::NotPolynomial { .. })
        ));
        let g = series(-1, &[1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]);
        assert!(express_in_x(&g, &x, 2, 8).is_err());
    }

    #[test]
    fn coefficients_without_residual_check() {
        let x = series(1, &[1, 1, 0, 0, 0, 0, 0, 0]);
        let f = FractionalQSeries::one_to(8).sub(&x).unwrap().inv().unwrap();
        let a = coefficients_in_x(&f, &x, 5).unwrap();
        assert_eq!(a, vec![rat(1, 1); 5]);
    }

    #[test]
    fn display_layout() {
        let p = Poly::new(vec![rat(-1, 2), rat(0, 1), rat(1, 1), rat(-3, 1)]);
        assert_eq!(p.display("X"), "-3*X^3 + X^2 - 1/2");
    }
}
