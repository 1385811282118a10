//! Modular equations Psi_n(X, Y) relating x(tau) and x(n tau):
//! discovery by exact nullspace, two independent verifications, and
//! exact solution of the diagonal Psi_n(X, X) = 0 over quadratic fields.

pub mod nullspace;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numerics::quad::{squarefree_part, QuadExt};
use crate::qseries::{express_in_x, FractionalQSeries, Poly};
use crate::registry::GroupRecord;

/// Degree psi(n) = n prod_{p | n} (1 + 1/p) of the modular equation.
pub fn psi_degree(n: u32) -> u32 {
    assert!(n >= 2);
    let mut num = n;
    let mut den = 1;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            num *= p + 1;
            den *= p;
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        num *= m + 1;
        den *= m;
    }
    num / den
}

/// Symmetric bivariate polynomial sum c_{ij} X^i Y^j with c_{0,psi} = 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModularEquation {
    pub n: u32,
    pub coeffs: Vec<Vec<BigInt>>,
}

impl ModularEquation {
    pub fn new(n: u32, coeffs: Vec<Vec<BigInt>>) -> Self {
        let me = ModularEquation { n, coeffs };
        debug_assert!(me.coeffs.iter().all(|r| r.len() == me.coeffs.len()));
        me
    }

    /// Common degree in X and Y.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize, j: usize) -> &BigInt {
        &self.coeffs[i][j]
    }

    pub fn is_symmetric(&self) -> bool {
        let d = self.coeffs.len();
        (0..d).all(|i| (0..d).all(|j| self.coeffs[i][j] == self.coeffs[j][i]))
    }

    /// Table-form invariants: symmetric, monic in Y, primitive, passes
    /// through the origin, degree consistent with psi(n).
    pub fn validate_table_form(&self) -> Result<()> {
        let d = self.degree();
        if d != psi_degree(self.n) as usize {
            return Err(Error::Other(format!(
                "modular equation degree {d} != psi({}) = {}",
                self.n,
                psi_degree(self.n)
            )));
        }
        if !self.is_symmetric() {
            for i in 0..=d {
                for j in 0..=d {
                    if self.coeffs[i][j] != self.coeffs[j][i] {
                        return Err(Error::AsymmetricKernel(i, j));
                    }
                }
            }
        }
        if !self.coeffs[0][d].is_one() {
            return Err(Error::Other("modular equation not monic in Y".into()));
        }
        if !self.coeffs[0][0].is_zero() {
            return Err(Error::Other("modular equation misses the origin".into()));
        }
        let mut g = BigInt::zero();
        for row in &self.coeffs {
            for v in row {
                g = g.gcd(v);
            }
        }
        if !g.is_one() {
            return Err(Error::Other("modular equation not primitive".into()));
        }
        Ok(())
    }

    /// Partial derivative tensor value d^{(dx,dy)} Psi / dX^{dx} dY^{dy}
    /// evaluated at (x0, y0) exactly.
    pub fn partial_at(&self, dx: u32, dy: u32, x0: &QuadExt, y0: &QuadExt) -> Result<QuadExt> {
        let d = self.degree();
        let mut acc = QuadExt::zero();
        for i in 0..=d {
            for j in 0..=d {
                let c = &self.coeffs[i][j];
                if c.is_zero() || (i as u32) < dx || (j as u32) < dy {
                    continue;
                }
                let mut k = BigInt::one();
                for t in 0..dx {
                    k *= BigInt::from(i as u32 - t);
                }
                for t in 0..dy {
                    k *= BigInt::from(j as u32 - t);
                }
                let term = x0
                    .pow_u32(i as u32 - dx)?
                    .mul(&y0.pow_u32(j as u32 - dy)?)?
                    .mul_rat(&BigRational::from_integer(c * k));
                acc = acc.add(&term)?;
            }
        }
        Ok(acc)
    }

    /// Psi(X, X) as a univariate polynomial.
    pub fn diagonal(&self) -> Poly {
        let d = self.degree();
        let mut coeffs = vec![BigRational::zero(); 2 * d + 1];
        for i in 0..=d {
            for j in 0..=d {
                if !self.coeffs[i][j].is_zero() {
                    coeffs[i + j] += BigRational::from_integer(self.coeffs[i][j].clone());
                }
            }
        }
        Poly::new(coeffs)
    }

    /// Table 3 layout: collected by descending powers of Y, the X
    /// cofactors in ascending powers, e.g.
    /// `Y^3 + (2X - X^2)Y^2 + (-X + 2X^2)Y + X^3`.
    pub fn display_table3(&self) -> String {
        let d = self.degree();
        let term = |c: &BigInt, i: usize| -> String {
            let mag = c.abs();
            let unit = mag.is_one();
            match i {
                0 => mag.to_string(),
                1 if unit => "X".to_string(),
                1 => format!("{mag}X"),
                _ if unit => format!("X^{i}"),
                _ => format!("{mag}X^{i}"),
            }
        };
        let mut parts: Vec<String> = Vec::new();
        for j in (0..=d).rev() {
            let col: Vec<(usize, &BigInt)> = (0..=d)
                .map(|i| (i, &self.coeffs[i][j]))
                .filter(|(_, c)| !c.is_zero())
                .collect();
            if col.is_empty() {
                continue;
            }
            let mut xpart = String::new();
            for (k, (i, c)) in col.iter().enumerate() {
                if k == 0 {
                    if c.is_negative() {
                        xpart.push('-');
                    }
                } else {
                    xpart.push_str(if c.is_negative() { " - " } else { " + " });
                }
                xpart.push_str(&term(c, *i));
            }
            let ypow = match j {
                0 => String::new(),
                1 => "Y".to_string(),
                _ => format!("Y^{j}"),
            };
            let piece = if j == 0 {
                xpart
            } else if col.len() == 1 && *col[0].1 == BigInt::one() && col[0].0 == 0 {
                ypow
            } else if col.len() == 1 {
                format!("{xpart} {ypow}")
            } else {
                format!("({xpart}){ypow}")
            };
            if parts.is_empty() {
                parts.push(piece);
            } else if let Some(rest) = piece.strip_prefix('-') {
                parts.push(format!("- {rest}"));
            } else {
                parts.push(format!("+ {piece}"));
            }
        }
        parts.join(" ")
    }

    pub fn rows_i64(&self) -> Vec<Vec<String>> {
        self.coeffs
            .iter()
            .map(|r| r.iter().map(|v| v.to_string()).collect())
            .collect()
    }
}

/// Discover Psi_n from the q-expansions of x(tau) and x(n tau) by exact
/// linear algebra: the coefficient of every power of q in
/// sum c_{ij} x^i y^j must vanish.
pub fn find_modular_equation(g: &GroupRecord, order: usize) -> Result<ModularEquation> {
    let mut order = order;
    for attempt in 0..4 {
        match find_at_order(g, order) {
            Err(Error::AmbiguousKernel(k)) if attempt < 3 => {
                let _ = k;
                order += 32;
            }
            other => return other,
        }
    }
    unreachable!()
}

fn find_at_order(g: &GroupRecord, order: usize) -> Result<ModularEquation> {
    let n = g.meq_n;
    let deg = psi_degree(n) as usize;
    let x = g.x_series(order)?;
    let y = x.substitute_qn(n);
    let window = order as i64 - 1;
    let xp = power_table(&x, deg, window)?;
    let yp = power_table(&y, deg, window)?;
    let cols = (deg + 1) * (deg + 1);
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for e in 0..window {
        let mut row = Vec::with_capacity(cols);
        let mut lcm = BigInt::one();
        let mut vals: Vec<BigRational> = Vec::with_capacity(cols);
        for i in 0..=deg {
            for j in 0..=deg {
                // coefficient of q^e in x^i y^j; products stay within the
                // window because lead exponents are nonnegative
                let mut c = BigRational::zero();
                let pi = &xp[i];
                let pj = &yp[j];
                let lo = pi.lead_num().max(e - pj.order_num() + 1).max(0);
                let hi = (pi.order_num() - 1).min(e - pj.lead_num());
                let mut a = lo;
                while a <= hi {
                    let ca = pi.coeff(a, 1);
                    if !ca.is_zero() {
                        let cb = pj.coeff(e - a, 1);
                        if !cb.is_zero() {
                            c += ca * cb;
                        }
                    }
                    a += 1;
                }
                lcm = lcm.lcm(c.denom());
                vals.push(c);
            }
        }
        for v in vals {
            row.push((v * BigRational::from_integer(lcm.clone())).to_integer());
        }
        rows.push(row);
    }
    let kernel = nullspace::kernel_basis(rows, cols);
    match kernel.len() {
        0 => Err(Error::EmptyKernel),
        1 => {
            let v = &kernel[0];
            // primitive integer scaling
            let mut lcm = BigInt::one();
            for c in v {
                lcm = lcm.lcm(c.denom());
            }
            let mut ints: Vec<BigInt> = v
                .iter()
                .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
                .collect();
            let mut g0 = BigInt::zero();
            for c in &ints {
                g0 = g0.gcd(c);
            }
            if !g0.is_zero() && !g0.is_one() {
                for c in &mut ints {
                    *c /= &g0;
                }
            }
            let corner = ints[deg].clone(); // c_{0, deg}
            if corner.is_zero() {
                return Err(Error::Other(
                    "kernel vector has zero Y^psi coefficient".into(),
                ));
            }
            if corner.is_negative() {
                for c in &mut ints {
                    *c = -c.clone();
                }
            }
            let coeffs: Vec<Vec<BigInt>> = (0..=deg)
                .map(|i| ints[i * (deg + 1)..(i + 1) * (deg + 1)].to_vec())
                .collect();
            Ok(ModularEquation::new(n, coeffs))
        }
        k => Err(Error::AmbiguousKernel(k)),
    }
}

fn power_table(
    x: &FractionalQSeries<BigRational>,
    deg: usize,
    window: i64,
) -> Result<Vec<FractionalQSeries<BigRational>>> {
    let mut out = Vec::with_capacity(deg + 1);
    out.push(FractionalQSeries::one_to(window));
    for _ in 0..deg {
        let next = out.last().unwrap().mul(x)?.truncate_to(window);
        out.push(next);
    }
    Ok(out)
}

/// Psi(x(tau), x(n tau)) as a q-series; zero through the computed order
/// when the equation is correct.
pub fn verify_annihilation(
    psi: &ModularEquation,
    g: &GroupRecord,
    order: usize,
) -> Result<FractionalQSeries<BigRational>> {
    let deg = psi.degree();
    let x = g.x_series(order)?;
    let y = x.substitute_qn(psi.n);
    let window = order as i64 - 1;
    let xp = power_table(&x, deg, window)?;
    let yp = power_table(&y, deg, window)?;
    let mut acc = FractionalQSeries::zero_to(1, window);
    for i in 0..=deg {
        for j in 0..=deg {
            if psi.coeffs[i][j].is_zero() {
                continue;
            }
            let r = BigRational::from_integer(psi.coeffs[i][j].clone());
            acc = acc.add(&xp[i].mul(&yp[j])?.mul_rat(&r))?;
        }
    }
    Ok(acc.truncate_to(window))
}

/// The elementary symmetric functions of the psi(n) conjugate series
/// x(n tau), x((tau + beta)/n), recognized as polynomials in x, and the
/// modular equation they reconstruct. Supported for n in {2, 3}.
pub fn symmetric_function_check(
    g: &GroupRecord,
    order: usize,
) -> Result<(Vec<Poly>, ModularEquation)> {
    let n = g.meq_n;
    if n != 2 && n != 3 {
        return Err(Error::UnsupportedRoot(n));
    }
    let deg = psi_degree(n) as usize;
    let x = g.x_series(order)?;
    let mut conj: Vec<FractionalQSeries<QuadExt>> = Vec::with_capacity(deg);
    conj.push(x.substitute_qn(n).map(|c| QuadExt::rational(c.clone())));
    for beta in 0..n as i64 {
        conj.push(x.substitute_root(n, beta)?);
    }
    // e_k by incremental expansion of prod (Y - s_i); order tracking in
    // mul/add keeps each e_k honest about its truncation
    let mut e: Vec<FractionalQSeries<QuadExt>> =
        vec![FractionalQSeries::zero_to(1, order as i64); deg + 1];
    e[0] = FractionalQSeries::one_to(order as i64);
    for s in &conj {
        for k in (1..=deg).rev() {
            let prev = e[k - 1].mul(s)?;
            e[k] = e[k].add(&prev)?;
        }
    }
    let mut polys = Vec::with_capacity(deg);
    let mut coeffs = vec![vec![BigInt::zero(); deg + 1]; deg + 1];
    coeffs[0][deg] = BigInt::one();
    for (k, ek) in e.iter().enumerate().skip(1) {
        let rat = rationalize(ek, n)?;
        let p = express_in_x(&rat, &x, deg, 8)?;
        let sign = if k % 2 == 1 { -1i64 } else { 1i64 };
        for (i, c) in p.coeffs().iter().enumerate() {
            if !c.denom().is_one() {
                return Err(Error::Other(format!(
                    "non-integral symmetric function coefficient {c} in e_{k}"
                )));
            }
            coeffs[i][deg - k] = c.numer() * BigInt::from(sign);
        }
        polys.push(p);
    }
    Ok((polys, ModularEquation::new(n, coeffs)))
}

/// Collapse a conjugate-sum series to rational coefficients on the
/// integral exponent grid; any surviving irrational or fractional-
/// exponent part indicates broken Galois stability.
fn rationalize(
    s: &FractionalQSeries<QuadExt>,
    n: u32,
) -> Result<FractionalQSeries<BigRational>> {
    assert_eq!(s.ram(), n);
    let mut out: Vec<BigRational> = Vec::new();
    let mut lead: Option<i64> = None;
    for (k, c) in s.coeffs().iter().enumerate() {
        let e = s.lead_num() + k as i64;
        if !c.is_rational() && !c.is_zero() {
            return Err(Error::Other(format!(
                "irrational coefficient {c} at exponent {e}/{n} in conjugate sum"
            )));
        }
        if e.rem_euclid(n as i64) != 0 {
            if !c.is_zero() {
                return Err(Error::Other(format!(
                    "fractional exponent {e}/{n} survives in conjugate sum"
                )));
            }
            continue;
        }
        if lead.is_none() {
            lead = Some(e / n as i64);
        }
        out.push(c.as_rational().cloned().unwrap_or_else(BigRational::zero));
    }
    let lead = lead.unwrap_or(s.order_num().div_euclid(n as i64));
    Ok(FractionalQSeries::new(1, lead, out))
}

/// Roots of Psi(X, X) = 0 over quadratic fields, with multiplicity for
/// the root at the origin.
pub fn diagonal_roots(psi: &ModularEquation) -> Result<Vec<QuadExt>> {
    let diag = psi.diagonal();
    if diag.is_zero() {
        return Err(Error::Other("zero diagonal polynomial".into()));
    }
    // strip the X^m factor
    let mut shift = 0;
    while diag.coeff(shift).is_zero() {
        shift += 1;
    }
    let mut roots: Vec<QuadExt> = vec![QuadExt::zero(); shift];
    let mut rest = Poly::new(diag.coeffs()[shift..].to_vec());
    // rational roots first
    loop {
        if rest.degree() == 0 {
            break;
        }
        match rational_root(&rest) {
            Some(r) => {
                roots.push(QuadExt::rational(r.clone()));
                rest = deflate(&rest, &r);
            }
            None => break,
        }
    }
    match rest.degree() {
        0 => {}
        2 => roots.extend(quadratic_roots(&rest)?),
        4 => {
            let (f1, f2) = split_quartic(&rest)?;
            roots.extend(quadratic_roots(&f1)?);
            roots.extend(quadratic_roots(&f2)?);
        }
        d => {
            return Err(Error::UnsupportedFactor {
                degree: d,
                poly: rest.display("X"),
            })
        }
    }
    Ok(roots)
}

fn rational_root(p: &Poly) -> Option<BigRational> {
    // primitive integer form
    let mut lcm = BigInt::one();
    for c in p.coeffs() {
        lcm = lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let a0 = ints.first()?.clone();
    let an = ints.last()?.clone();
    if a0.is_zero() {
        return Some(BigRational::zero());
    }
    for pnum in divisors(&a0) {
        for pden in divisors(&an) {
            for sign in [1i64, -1] {
                let cand = BigRational::new(&pnum * BigInt::from(sign), pden.clone());
                if p.eval_rational(&cand).is_zero() {
                    return Some(cand);
                }
            }
        }
    }
    None
}

fn deflate(p: &Poly, root: &BigRational) -> Poly {
    // synthetic division by (x - root)
    let n = p.coeffs().len();
    let mut out = vec![BigRational::zero(); n - 1];
    let mut carry = BigRational::zero();
    for i in (1..n).rev() {
        carry = p.coeff(i) + carry * root;
        out[i - 1] = carry.clone();
    }
    debug_assert!((p.coeff(0) + &carry * root).is_zero());
    Poly::new(out)
}

fn quadratic_roots(p: &Poly) -> Result<Vec<QuadExt>> {
    assert_eq!(p.degree(), 2);
    let a = p.coeff(2);
    let b = p.coeff(1);
    let c = p.coeff(0);
    let disc = &b * &b - BigRational::from_integer(BigInt::from(4)) * &a * &c;
    if disc.is_zero() {
        let r = QuadExt::rational(-&b / (BigRational::from_integer(BigInt::from(2)) * &a));
        return Ok(vec![r.clone(), r]);
    }
    // disc = (s/q)^2 f with f squarefree
    let m = disc.numer() * disc.denom();
    let (s, f) = squarefree_part(&m);
    let scale = BigRational::new(s, disc.denom().clone());
    let two_a = BigRational::from_integer(BigInt::from(2)) * &a;
    if f.is_one() {
        let r1 = QuadExt::rational((-&b + &scale) / &two_a);
        let r2 = QuadExt::rational((-&b - &scale) / &two_a);
        return Ok(vec![r1, r2]);
    }
    let d = f
        .to_i64()
        .ok_or_else(|| Error::Other("discriminant too large".into()))?;
    let surd = QuadExt::surd(d)?.mul_rat(&(&scale / &two_a));
    let base = QuadExt::rational(-&b / &two_a);
    Ok(vec![base.add(&surd)?, base.sub(&surd)?])
}

/// Split a rational-rootless quartic into two quadratic factors over Q
/// by enumerating divisor pairs of the (primitive integer) leading and
/// constant coefficients.
fn split_quartic(p: &Poly) -> Result<(Poly, Poly)> {
    let mut lcm = BigInt::one();
    for c in p.coeffs() {
        lcm = lcm.lcm(c.denom());
    }
    let mut v: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let mut scale = BigRational::from_integer(lcm).recip();
    if v[4].is_negative() {
        for c in &mut v {
            *c = -c.clone();
        }
        scale = -scale;
    }
    let vpoly = Poly::new(v.iter().cloned().map(BigRational::from_integer).collect());
    let (p0, p1, p2, p3, p4) = (
        BigRational::from_integer(v[0].clone()),
        BigRational::from_integer(v[1].clone()),
        BigRational::from_integer(v[2].clone()),
        BigRational::from_integer(v[3].clone()),
        BigRational::from_integer(v[4].clone()),
    );
    for a in divisors(&v[4]) {
        let a = BigRational::from_integer(a);
        let d = &p4 / &a;
        for c0 in divisors(&v[0]) {
            for csign in [1i64, -1] {
                let c = BigRational::from_integer(&c0 * BigInt::from(csign));
                let f = &p0 / &c;
                // p3 = a e + b d ; p1 = b f + c e
                let det = &a * &f - &c * &d;
                let candidates: Vec<(BigRational, BigRational)> = if det.is_zero() {
                    // rows proportional; use p2 = a f + b e + c d instead,
                    // which makes b a root of d b^2 - p3 b + a s = 0
                    if &c * &p3 != &a * &p1 {
                        continue;
                    }
                    let s = &p2 - &a * &f - &c * &d;
                    let disc = &p3 * &p3
                        - BigRational::from_integer(BigInt::from(4)) * &d * &a * &s;
                    let m = disc.numer() * disc.denom();
                    let (sq, rem) = squarefree_part(&m);
                    if !rem.is_one() || disc.is_negative() {
                        continue;
                    }
                    let root = BigRational::new(sq, disc.denom().clone());
                    [root.clone(), -root]
                        .into_iter()
                        .map(|r| {
                            let b = (&p3 + r) / (BigRational::from_integer(BigInt::from(2)) * &d);
                            let e = (&p3 - &d * &b) / &a;
                            (b, e)
                        })
                        .collect()
                } else {
                    vec![(
                        (&a * &p1 - &c * &p3) / &det,
                        (&f * &p3 - &d * &p1) / &det,
                    )]
                };
                for (b, e) in candidates {
                    if &a * &f + &b * &e + &c * &d != p2 {
                        continue;
                    }
                    let f1 = Poly::new(vec![c.clone(), b, a.clone()]);
                    let f2 = Poly::new(vec![f.clone(), e, d.clone()]);
                    if f1.mul(&f2) == vpoly {
                        return Ok((f1.scale(&scale), f2));
                    }
                }
            }
        }
    }
    Err(Error::UnsupportedFactor {
        degree: 4,
        poly: p.display("X"),
    })
}

fn divisors(v: &BigInt) -> Vec<BigInt> {
    let m = v.magnitude();
    let mut out = Vec::new();
    if let Some(small) = m.to_u64() {
        let mut d = 1u64;
        while d * d <= small {
            if small % d == 0 {
                out.push(BigInt::from(d));
                if d != small / d {
                    out.push(BigInt::from(small / d));
                }
            }
            d += 1;
        }
        out.sort();
    } else {
        // enormous coefficients never occur for the supported diagonals
        out.push(BigInt::one());
        out.push(v.abs());
    }
    out
}
