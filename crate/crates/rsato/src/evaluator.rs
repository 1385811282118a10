//! Verified summation: sum A_n (B n + C) x0^n in ball arithmetic with
//! exact A_n, compare the enclosure against an independent 1/pi
//! reference, and report the certified number of agreed digits.

use num_rational::BigRational;
use serde::Serialize;

use crate::constants::{compute_constants, SeriesConstants};
use crate::error::{Error, Result};
use crate::modeq::find_modular_equation;
use crate::numerics::ball::{ref_pi, BallJson, BallReal};
use crate::numerics::dyadic::Dyadic;
use crate::odeops::derive_recurrence;
use crate::registry::GroupRecord;

pub const DEFAULT_TERM_CAP: usize = 5000;
pub const TAIL_RATIO_LIMIT: f64 = 0.95;

#[derive(Debug, Clone, Serialize)]
pub struct SummationReport {
    pub label: String,
    pub terms_used: usize,
    pub partial_sum: BallJson,
    pub pi_inverse_ref: BallJson,
    pub digits_agreed: i64,
    pub per_term_rate: f64,
}

/// Working precision for a digit target: about 3.4 bits per digit plus
/// guard bits.
pub fn working_precision(target_digits: usize) -> u32 {
    (target_digits as u32 * 17).div_ceil(5) + 64
}

/// Sum the series for one group to at least `target_digits` certified
/// digits, escalating precision up to four doublings if needed.
pub fn sum_series(g: &GroupRecord, target_digits: usize) -> Result<SummationReport> {
    assert!(target_digits >= 5);
    let psi = match &g.expect.psi {
        Some(p) => p.clone(),
        None => find_modular_equation(g, 96)?,
    };
    let mut prec = working_precision(target_digits);
    let mut last: Option<SummationReport> = None;
    for _ in 0..5 {
        let consts = compute_constants(g, &psi, prec)?;
        let report = sum_at_precision(g, &consts, target_digits, DEFAULT_TERM_CAP)?;
        if report.digits_agreed >= target_digits as i64 {
            return Ok(report);
        }
        last = Some(report);
        prec *= 2;
    }
    Ok(last.unwrap())
}

fn sum_at_precision(
    g: &GroupRecord,
    consts: &SeriesConstants,
    target_digits: usize,
    cap: usize,
) -> Result<SummationReport> {
    let prec = consts.prec;
    let rec = derive_recurrence(g, 64)?;
    let x0b = consts.x0.to_ball(prec)?;
    let threshold = pow10_upper(-(target_digits as i64) - 3);
    // crude but safe tail factor: ratio < 0.95 gives rho/(1-rho) < 19
    let tail_factor = Dyadic::from_i64(19);

    let mut sum = BallReal::zero(prec);
    let mut xpow = BallReal::one(prec);
    let mut ratios: Vec<f64> = Vec::new();
    let mut prev_ub: Option<Dyadic> = None;
    let mut high_streak = 0usize;
    let mut terms_used = 0usize;
    let mut tail: Option<Dyadic> = None;
    for (n, a) in rec.stream().take(cap).enumerate() {
        let bn_c = consts.b.mul_i64(n as i64).add(&consts.c);
        let term = BallReal::from_rational(&a, prec).mul(&xpow).mul(&bn_c);
        sum = sum.add(&term);
        xpow = xpow.mul(&x0b);
        terms_used = n + 1;
        let ub = term.abs_upper();
        if let Some(prev) = &prev_ub {
            let r = if prev.is_zero() {
                0.0
            } else {
                ub.to_f64() / prev.to_f64()
            };
            ratios.push(r);
            if ratios.len() > 5 {
                ratios.remove(0);
            }
            if r >= TAIL_RATIO_LIMIT {
                high_streak += 1;
                if high_streak > 100 {
                    return Err(Error::NonConvergent {
                        label: g.label.clone(),
                        ratio: r,
                    });
                }
            } else {
                high_streak = 0;
            }
        }
        prev_ub = Some(ub.clone());
        if n >= 5 {
            let rho = ratios.iter().cloned().fold(0.0f64, f64::max);
            let tail_bound = ub.mul(&tail_factor);
            if rho < TAIL_RATIO_LIMIT && tail_bound.le(&threshold) && ub.le(&threshold) {
                tail = Some(tail_bound);
                break;
            }
        }
    }
    let Some(tail) = tail else {
        return Err(Error::TermCapExceeded(cap));
    };
    let total = BallReal::with_radius(sum.mid().clone(), sum.rad().add(&tail), prec);
    let inv_pi = ref_pi(prec).inv()?;
    let digits_agreed = total.sub(&inv_pi).neg_log10_upper();
    Ok(SummationReport {
        label: g.label.clone(),
        terms_used,
        partial_sum: total.to_json(),
        pi_inverse_ref: inv_pi.to_json(),
        digits_agreed,
        per_term_rate: digits_agreed as f64 / terms_used as f64,
    })
}

/// Upper Dyadic bound for 10^e (e may be negative).
fn pow10_upper(e: i64) -> Dyadic {
    let ten = num_bigint::BigInt::from(10u32).pow(e.unsigned_abs() as u32);
    let r = if e >= 0 {
        BigRational::from_integer(ten)
    } else {
        BigRational::new(1.into(), ten)
    };
    let (q, err) = Dyadic::from_rational(&r, 64);
    q.add(&err)
}

/// All builtin groups in registry order; failures collected per group.
pub fn verify_all(target_digits: usize) -> Result<Vec<Result<SummationReport>>> {
    Ok(crate::registry::load_builtin()?
        .iter()
        .map(|g| sum_series(g, target_digits))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry::find_builtin;

    #[test]
    fn pi_39_to_30_digits() {
        let g = find_builtin("39+39").unwrap();
        let r = sum_series(&g, 30).unwrap();
        assert!(r.digits_agreed >= 30, "{}", r.digits_agreed);
        assert!(r.terms_used <= 600, "{}", r.terms_used);
    }

    #[test]
    fn pi_16_to_50_digits() {
        let g = find_builtin("16+").unwrap();
        let r = sum_series(&g, 50).unwrap();
        assert!(r.digits_agreed >= 50, "{}", r.digits_agreed);
        assert!(r.terms_used <= 300, "{}", r.terms_used);
    }

    #[test]
    fn report_is_deterministic() {
        let g = find_builtin("26+26").unwrap();
        let a = serde_json::to_string(&sum_series(&g, 20).unwrap()).unwrap();
        let b = serde_json::to_string(&sum_series(&g, 20).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
