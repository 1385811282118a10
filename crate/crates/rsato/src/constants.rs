//! Algebraic constants of the 1/pi series: the special value
//! x0 = x(tau0) selected among the exact roots of Psi(X, X) = 0 by a
//! rigorous eta-product evaluation at the CM point, the implicit
//! derivatives of the modular equation on the diagonal, and the
//! constants B and C with certified real enclosures.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::modeq::{diagonal_roots, ModularEquation};
use crate::numerics::ball::{ball_cos_sin, ball_exp, ref_pi, BallComplex, BallReal};
use crate::numerics::dyadic::Dyadic;
use crate::numerics::quad::QuadExt;
use crate::registry::GroupRecord;

/// exp with argument reduction: halve until the argument is small
/// enough for the series bound, then square back up.
fn exp_any(x: &BallReal, quantity: &str) -> Result<BallReal> {
    let mut k = 0i64;
    let ub = x.abs_upper();
    if let Some(l) = ub.log2_floor() {
        k = (l + 2).max(0);
    }
    let mut e = ball_exp(&x.shift(-k), quantity)?;
    for _ in 0..k {
        e = e.mul(&e);
    }
    Ok(e)
}

/// cos/sin with angle halving and double-angle recomposition.
fn cos_sin_any(x: &BallReal) -> Result<(BallReal, BallReal)> {
    let mut k = 0i64;
    let ub = x.abs_upper();
    if let Some(l) = ub.log2_floor() {
        k = (l + 2).max(0);
    }
    let (mut c, mut s) = ball_cos_sin(&x.shift(-k))?;
    for _ in 0..k {
        let c2 = c.mul(&c).sub(&s.mul(&s));
        let s2 = c.mul(&s).shift(1);
        c = c2;
        s = s2;
    }
    Ok((c, s))
}

fn inflate_complex(v: &BallComplex, eps: &Dyadic) -> BallComplex {
    let m = v.abs_upper().mul(eps).round_up(32);
    let grow = |b: &BallReal| {
        BallReal::with_radius(b.mid().clone(), b.rad().add(&m).round_up(32), b.prec())
    };
    BallComplex::new(grow(&v.re), grow(&v.im))
}

fn complex_pow_i64(v: &BallComplex, e: i64) -> Result<BallComplex> {
    let p = v.pow_u32(e.unsigned_abs() as u32);
    if e < 0 {
        p.inv()
    } else {
        Ok(p)
    }
}

/// Rigorous enclosure of x(tau0) = 1/t(tau0) from the defining eta
/// quotient, with the infinite products truncated under a certified
/// tail bound.
pub fn eta_point_value(g: &GroupRecord, prec: u32) -> Result<BallComplex> {
    let wp = prec + 32;
    let p = g.cm.tau0_p;
    let d = g.cm.tau0_d;
    let r = g.cm.tau0_r;
    let two_pi = ref_pi(wp).shift(1);
    let sqrt_absd = BallReal::from_i64(-d, wp).sqrt("-d")?;
    let denom = BallReal::from_i64(24 * r, wp);
    // u = exp(2 pi i tau0 / 24); q0 = u^24
    let modulus_exp = two_pi.mul(&sqrt_absd).div(&denom)?.neg();
    let phase = two_pi.mul_i64(p).div(&denom)?;
    let rho = exp_any(&modulus_exp, "eta modulus exponent")?;
    let (cs, sn) = cos_sin_any(&phase)?;
    let u = BallComplex::new(rho.mul(&cs), rho.mul(&sn));
    let q0 = u.pow_u32(24);
    let cutoff = Dyadic::power_of_two(-(wp as i64 + 16));
    let tail_eps = Dyadic::power_of_two(-(wp as i64 + 13));
    let one = BallComplex::one(wp);
    let mut t = one.clone();
    for &(a, e) in &g.eta.factors {
        let total = e as i64 * g.eta.outer_power as i64;
        if total == 0 {
            continue;
        }
        let qa = q0.pow_u32(a);
        let mut prod = complex_pow_i64(&u, a as i64)?;
        let mut pw = qa.clone();
        let mut k = 0usize;
        while pw.abs_upper().cmp(&cutoff) == std::cmp::Ordering::Greater {
            prod = prod.mul(&one.sub(&pw));
            pw = pw.mul(&qa);
            k += 1;
            if k > 8 * wp as usize {
                return Err(Error::Other(format!(
                    "eta product for scale {a} did not reach the tail cutoff"
                )));
            }
        }
        prod = inflate_complex(&prod, &tail_eps);
        t = t.mul(&complex_pow_i64(&prod, total)?);
    }
    t.inv()
}

/// Choose, among the exact diagonal roots of the modular equation, the
/// one enclosed by the eta-product value of x(tau0). Precision is
/// doubled until exactly one root remains.
pub fn select_x0(
    g: &GroupRecord,
    psi: &ModularEquation,
    prec: u32,
) -> Result<(QuadExt, BallComplex)> {
    let roots = diagonal_roots(psi)?;
    let mut wp = prec;
    for _ in 0..5 {
        let xv = eta_point_value(g, wp)?;
        let mut matched: Vec<&QuadExt> = Vec::new();
        for root in &roots {
            let rb = root.to_ball_complex(wp)?;
            if xv.re.overlaps(&rb.re) && xv.im.overlaps(&rb.im) {
                if !matched.contains(&root) {
                    matched.push(root);
                }
            }
        }
        match matched.len() {
            0 => return Err(Error::NoMatchingRoot(g.label.clone())),
            1 => return Ok((matched[0].clone(), xv)),
            _ => wp *= 2,
        }
    }
    let xv = eta_point_value(g, wp)?;
    let count = roots
        .iter()
        .filter(|root| {
            root.to_ball_complex(wp)
                .map(|rb| xv.re.overlaps(&rb.re) && xv.im.overlaps(&rb.im))
                .unwrap_or(false)
        })
        .count();
    Err(Error::AmbiguousRoot {
        label: g.label.clone(),
        count,
    })
}

/// First and second implicit derivatives y'(x0), y''(x0) of the branch
/// y(x) of Psi(x, y) = 0 through the diagonal point (x0, x0), exact in
/// the quadratic field of x0.
pub fn implicit_derivatives(psi: &ModularEquation, x0: &QuadExt) -> Result<(QuadExt, QuadExt)> {
    let px = psi.partial_at(1, 0, x0, x0)?;
    let py = psi.partial_at(0, 1, x0, x0)?;
    if py.is_zero() {
        return Err(Error::SingularDiagonal);
    }
    let y1 = px.div(&py)?.neg();
    let pxx = psi.partial_at(2, 0, x0, x0)?;
    let pxy = psi.partial_at(1, 1, x0, x0)?;
    let pyy = psi.partial_at(0, 2, x0, x0)?;
    let two = BigRational::from_integer(BigInt::from(2));
    let num = pxx
        .add(&pxy.mul(&y1)?.mul_rat(&two))?
        .add(&pyy.mul(&y1.mul(&y1)?)?)?;
    let y2 = num.div(&py)?.neg();
    Ok((y1, y2))
}

/// Everything needed to state the series sum A_n x0^n (B n + C) = 1/pi.
#[derive(Debug, Clone)]
pub struct SeriesConstants {
    pub label: String,
    pub x0: QuadExt,
    pub y1: QuadExt,
    pub y2: QuadExt,
    pub w_x0: QuadExt,
    pub big_w: BallReal,
    pub b: BallReal,
    pub c: BallReal,
    pub prec: u32,
}

/// Assemble x0, the implicit derivatives, W = sqrt(w(x0)) and the
/// constants B, C with certified enclosures at `prec` bits.
pub fn compute_constants(
    g: &GroupRecord,
    psi: &ModularEquation,
    prec: u32,
) -> Result<SeriesConstants> {
    let (x0, _) = select_x0(g, psi, prec)?;
    let (y1, y2) = implicit_derivatives(psi, &x0)?;
    let w_x0 = g.w.eval(&x0)?;
    let wball = w_x0.to_ball(prec)?;
    if !wball.is_strictly_positive() {
        return Err(Error::NonPositiveBall {
            quantity: "w(x0)".to_string(),
            low: wball.lower().to_decimal(6),
            high: wball.upper().to_decimal(6),
        });
    }
    let big_w = wball.sqrt("w(x0)")?;

    // B = W (1 - y1) (c' tau0 + d') / (i c')
    let cm = &g.cm;
    let cpr = cm.c_prime();
    let dpr = cm.d_prime();
    let tau_re = BigRational::new(BigInt::from(cm.tau0_p), BigInt::from(cm.tau0_r));
    let tau_im = BallReal::from_i64(-cm.tau0_d, prec)
        .sqrt("-d")?
        .div(&BallReal::from_i64(cm.tau0_r, prec))?;
    let lin = BallComplex::new(
        BallReal::from_rational(&(&cpr * &tau_re + &dpr), prec),
        tau_im.mul(&BallReal::from_rational(&cpr, prec)),
    );
    // division by i is multiplication by -i
    let rotated = BallComplex::new(lin.im.clone(), lin.re.neg());
    let one_minus_y1 = QuadExt::one().sub(&y1)?;
    let bc = rotated
        .mul_real(&big_w)
        .mul_real(&one_minus_y1.to_ball(prec)?)
        .mul_real(&BallReal::from_rational(&cpr, prec).inv()?);
    if !bc.im.contains_zero() {
        return Err(Error::NotReal {
            quantity: "B".to_string(),
            low: bc.im.lower().to_decimal(6),
            high: bc.im.upper().to_decimal(6),
        });
    }
    let b = bc.re.clone();

    // C = B (1 + x0 W'/W + x0 y2 / (y1 (1 - y1))), with
    // W'/W = w'(x0) / (2 w(x0)) exact in the quadratic field
    let two = BigRational::from_integer(BigInt::from(2));
    let dlog_w = g
        .w
        .derivative()
        .eval(&x0)?
        .div(&w_x0.mul_rat(&two))?;
    let denom = y1.mul(&one_minus_y1)?;
    let factor = QuadExt::one()
        .add(&x0.mul(&dlog_w)?)?
        .add(&x0.mul(&y2)?.div(&denom)?)?;
    let c = b.mul(&factor.to_ball(prec)?);

    Ok(SeriesConstants {
        label: g.label.clone(),
        x0,
        y1,
        y2,
        w_x0,
        big_w,
        b,
        c,
        prec,
    })
}
