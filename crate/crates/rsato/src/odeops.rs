//! The differential-equation side of the pipeline: build
//! z = (log x)_q / sqrt(w(x)), verify that R = (2 z z_qq - 3 z_q^2)/z^4
//! is the tabulated polynomial in x, check the third-order ODE
//! 2 w z_xxx + 3 w_x z_xx + (w_xx - 2R) z_x - R_x z = 0, and derive the
//! four-term recurrence for the coefficients A_n of z = sum A_n x^n.
//!
//! All derivative subscripts are theta operators: f_q = q df/dq and
//! f_x = x df/dx, related on q-series by f_x = f_q * x / x_q.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::Result;
use crate::qseries::{coefficients_in_x, express_in_x, FractionalQSeries, Poly};
use crate::registry::GroupRecord;

type QS = FractionalQSeries<BigRational>;

/// z as a q-series, known past q^order.
pub fn build_z(g: &GroupRecord, order: usize) -> Result<QS> {
    let x = g.x_series(order)?;
    let logx_q = x.q_log_derivative()?;
    let wx = g.w.eval_series(&x)?;
    logx_q.div(&wx.sqrt()?)
}

/// Recognize (2 z z_qq - 3 z_q^2)/z^4 as a polynomial in x; equals the
/// tabulated R when the group data is consistent.
pub fn extract_r(g: &GroupRecord, order: usize) -> Result<Poly> {
    let x = g.x_series(order)?;
    let z = build_z(g, order)?;
    let zq = z.dq();
    let zqq = zq.dq();
    let two = BigRational::from_integer(BigInt::from(2));
    let three = BigRational::from_integer(BigInt::from(3));
    let num = z
        .mul(&zqq)?
        .mul_rat(&two)
        .sub(&zq.mul(&zq)?.mul_rat(&three))?;
    let r_series = num.div(&z.pow_i64(4)?)?;
    express_in_x(&r_series, &x, g.r.degree(), 8)
}

/// Theta in x of a polynomial: x p'(x).
fn theta_poly(p: &Poly) -> Poly {
    Poly::new(
        p.coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
            .collect(),
    )
}

/// The left side of the ODE as a q-series; empty through the computed
/// order when everything is consistent.
pub fn ode_residual(g: &GroupRecord, order: usize) -> Result<QS> {
    let x = g.x_series(order)?;
    let xq = x.dq();
    let theta = |f: &QS| -> Result<QS> { f.dq().mul(&x)?.div(&xq) };
    let z = build_z(g, order)?;
    let z1 = theta(&z)?;
    let z2 = theta(&z1)?;
    let z3 = theta(&z2)?;
    let w = &g.w;
    let r = &g.r;
    let two = BigRational::from_integer(BigInt::from(2));
    let three = BigRational::from_integer(BigInt::from(3));
    let eval = |p: &Poly| p.eval_series(&x);
    let mut acc = eval(w)?.mul(&z3)?.mul_rat(&two);
    acc = acc.add(&eval(&theta_poly(w))?.mul(&z2)?.mul_rat(&three))?;
    let mid = theta_poly(&theta_poly(w)).sub(&r.scale(&two));
    acc = acc.add(&eval(&mid)?.mul(&z1)?)?;
    acc.sub(&eval(&theta_poly(r))?.mul(&z)?)
}

/// Sum_j P_j(n) A_{n-j} = 0 with P_0(n) = 2n^3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recurrence {
    pub terms: Vec<Poly>,
    pub span: usize,
    pub initials: Vec<BigRational>,
}

/// Closed-form recurrence polynomials obtained by substituting
/// z = sum A_n x^n into the ODE and reading off the coefficient of x^n:
/// P_j(n) = w_j (2(n-j)^3 + 3j(n-j)^2 + j^2(n-j)) - r_j (2(n-j) + j).
pub fn derive_recurrence(g: &GroupRecord, order: usize) -> Result<Recurrence> {
    let span = g.w.degree().max(g.r.degree());
    let mut terms = Vec::with_capacity(span + 1);
    for j in 0..=span {
        let wj = g.w.coeff(j);
        let rj = g.r.coeff(j);
        let ji = BigInt::from(j);
        // m = n - j; expand in n afterwards
        // w_j (2m^3 + 3j m^2 + j^2 m) - r_j (2m + j)
        let m = Poly::new(vec![
            BigRational::from_integer(-ji.clone()),
            BigRational::from_integer(BigInt::from(1)),
        ]);
        let m2 = m.mul(&m);
        let m3 = m2.mul(&m);
        let jr = BigRational::from_integer(ji);
        let wpart = m3
            .scale(&BigRational::from_integer(BigInt::from(2)))
            .add(&m2.scale(&(&jr * BigRational::from_integer(BigInt::from(3)))))
            .add(&m.scale(&(&jr * &jr)));
        let rpart = m
            .scale(&BigRational::from_integer(BigInt::from(2)))
            .add(&Poly::new(vec![jr.clone()]));
        terms.push(wpart.scale(&wj).sub(&rpart.scale(&rj)));
    }
    let initials = initial_coefficients(g, span, order)?;
    Ok(Recurrence {
        terms,
        span,
        initials,
    })
}

/// A_0 .. A_{count-1} read directly from the q-expansion of z.
pub fn initial_coefficients(g: &GroupRecord, count: usize, order: usize) -> Result<Vec<BigRational>> {
    let x = g.x_series(order)?;
    let z = build_z(g, order)?;
    coefficients_in_x(&z, &x, count)
}

/// Independent re-derivation of the recurrence: substitute a truncated
/// z = sum A_k x^k with indeterminate A_k into the ODE and collect the
/// coefficient of x^n as a linear form in the A_k. Entry [n][k] is the
/// coefficient of A_k, so P_j(n) = forms[n][n - j].
pub fn substitution_forms(w: &Poly, r: &Poly, nmax: usize) -> Vec<Vec<BigRational>> {
    let kmax = nmax; // A_0 .. A_nmax
    // linear-form polynomial in x: lf[i][k] = coeff of A_k in x^i term
    let width = kmax + 1;
    let depth = nmax + 1;
    let zero_row = vec![BigRational::zero(); width];
    let theta_pow = |e: u32| -> Vec<Vec<BigRational>> {
        // theta^e z = sum_k k^e A_k x^k
        let mut lf = vec![zero_row.clone(); depth];
        for (k, row) in lf.iter_mut().enumerate() {
            row[k] = BigRational::from_integer(BigInt::from(k).pow(e));
        }
        lf
    };
    let mul_poly = |p: &Poly, lf: &[Vec<BigRational>]| -> Vec<Vec<BigRational>> {
        let mut out = vec![zero_row.clone(); depth];
        for (i, c) in p.coeffs().iter().enumerate() {
            if Zero::is_zero(c) {
                continue;
            }
            for (s, row) in lf.iter().enumerate() {
                if i + s >= depth {
                    break;
                }
                for (k, v) in row.iter().enumerate() {
                    if !Zero::is_zero(v) {
                        let slot = &mut out[i + s][k];
                        *slot = &*slot + c * v;
                    }
                }
            }
        }
        out
    };
    let add = |a: Vec<Vec<BigRational>>, b: Vec<Vec<BigRational>>| -> Vec<Vec<BigRational>> {
        a.into_iter()
            .zip(b)
            .map(|(ra, rb)| ra.into_iter().zip(rb).map(|(x, y)| x + y).collect())
            .collect()
    };
    let two = BigRational::from_integer(BigInt::from(2));
    let three = BigRational::from_integer(BigInt::from(3));
    let mut acc = mul_poly(&w.scale(&two), &theta_pow(3));
    acc = add(acc, mul_poly(&theta_poly(w).scale(&three), &theta_pow(2)));
    let mid = theta_poly(&theta_poly(w)).sub(&r.scale(&two));
    acc = add(acc, mul_poly(&mid, &theta_pow(1)));
    acc = add(acc, mul_poly(&theta_poly(r).scale(&-BigRational::from_integer(BigInt::from(1))), &theta_pow(0)));
    acc
}

impl Recurrence {
    /// Stream A_0, A_1, ... exactly; panics if initials are shorter
    /// than the span.
    pub fn stream(&self) -> CoefficientStream<'_> {
        assert!(self.initials.len() >= self.span);
        CoefficientStream {
            rec: self,
            history: Vec::new(),
            n: 0,
        }
    }
}

pub struct CoefficientStream<'a> {
    rec: &'a Recurrence,
    history: Vec<BigRational>,
    n: usize,
}

impl Iterator for CoefficientStream<'_> {
    type Item = BigRational;

    fn next(&mut self) -> Option<BigRational> {
        let n = self.n;
        let v = if n < self.rec.span {
            self.rec.initials[n].clone()
        } else {
            let nr = BigRational::from_integer(BigInt::from(n));
            let mut s = BigRational::zero();
            for j in 1..=self.rec.span {
                if j > n {
                    break;
                }
                s += self.rec.terms[j].eval_rational(&nr) * &self.history[n - j];
            }
            -s / self.rec.terms[0].eval_rational(&nr)
        };
        self.history.push(v.clone());
        self.n += 1;
        Some(v)
    }
}
