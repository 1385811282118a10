//! Nested-radical closed forms: a small expression language for the
//! tabulated constants B and C, with exact quadratic evaluation where
//! possible and rigorous ball evaluation in general.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numerics::ball::BallReal;
use crate::numerics::quad::{squarefree_part, QuadExt};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RadicalExpr {
    Int(BigInt),
    Neg(Box<RadicalExpr>),
    Add(Box<RadicalExpr>, Box<RadicalExpr>),
    Sub(Box<RadicalExpr>, Box<RadicalExpr>),
    Mul(Box<RadicalExpr>, Box<RadicalExpr>),
    Div(Box<RadicalExpr>, Box<RadicalExpr>),
    Sqrt(Box<RadicalExpr>),
}

impl RadicalExpr {
    pub fn parse(src: &str) -> Result<Self> {
        let mut p = Parser {
            tokens: tokenize(src)?,
            pos: 0,
            src,
        };
        let e = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(Error::Other(format!(
                "trailing input in radical expression: {src:?}"
            )));
        }
        Ok(e)
    }

    /// Rigorous enclosure of the value.
    pub fn eval_ball(&self, prec: u32) -> Result<BallReal> {
        match self {
            RadicalExpr::Int(v) => Ok(BallReal::from_rational(
                &BigRational::from_integer(v.clone()),
                prec,
            )),
            RadicalExpr::Neg(a) => Ok(a.eval_ball(prec)?.neg()),
            RadicalExpr::Add(a, b) => Ok(a.eval_ball(prec)?.add(&b.eval_ball(prec)?)),
            RadicalExpr::Sub(a, b) => Ok(a.eval_ball(prec)?.sub(&b.eval_ball(prec)?)),
            RadicalExpr::Mul(a, b) => Ok(a.eval_ball(prec)?.mul(&b.eval_ball(prec)?)),
            RadicalExpr::Div(a, b) => a.eval_ball(prec)?.div(&b.eval_ball(prec)?),
            RadicalExpr::Sqrt(a) => {
                let v = a.eval_ball(prec)?;
                v.sqrt("radicand")
                    .map_err(|_| Error::NegativeRadicand(a.to_string()))
            }
        }
    }

    /// Exact evaluation when the tree stays inside one quadratic field;
    /// square roots of non-rational subtrees are rejected.
    pub fn eval_quad(&self) -> Result<QuadExt> {
        match self {
            RadicalExpr::Int(v) => Ok(QuadExt::rational(BigRational::from_integer(v.clone()))),
            RadicalExpr::Neg(a) => Ok(a.eval_quad()?.neg()),
            RadicalExpr::Add(a, b) => a.eval_quad()?.add(&b.eval_quad()?),
            RadicalExpr::Sub(a, b) => a.eval_quad()?.sub(&b.eval_quad()?),
            RadicalExpr::Mul(a, b) => a.eval_quad()?.mul(&b.eval_quad()?),
            RadicalExpr::Div(a, b) => a.eval_quad()?.div(&b.eval_quad()?),
            RadicalExpr::Sqrt(a) => {
                let v = a.eval_quad()?;
                let r = v.as_rational().ok_or_else(|| {
                    Error::Other(format!("sqrt of non-rational subtree: {a}"))
                })?;
                if Zero::is_zero(r) {
                    return Ok(QuadExt::zero());
                }
                // sqrt(p/q) = sqrt(p q)/q = (s/q) sqrt(f), p q = s^2 f
                let m = r.numer() * r.denom();
                let (s, f) = squarefree_part(&m);
                let scale = BigRational::new(s, r.denom().clone());
                if f.is_one() {
                    return Ok(QuadExt::rational(scale));
                }
                let d = f
                    .to_i64()
                    .ok_or_else(|| Error::Other(format!("radicand too large: {a}")))?;
                Ok(QuadExt::surd(d)?.mul_rat(&scale))
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            RadicalExpr::Add(..) | RadicalExpr::Sub(..) => 1,
            RadicalExpr::Mul(..) | RadicalExpr::Div(..) | RadicalExpr::Neg(..) => 2,
            RadicalExpr::Int(v) if v.is_negative() => 2,
            _ => 3,
        }
    }
}

impl std::fmt::Display for RadicalExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        fn child(e: &RadicalExpr, min_prec: u8) -> String {
            if e.precedence() < min_prec {
                format!("({e})")
            } else {
                e.to_string()
            }
        }
        match self {
            RadicalExpr::Int(v) => write!(f, "{v}"),
            RadicalExpr::Neg(a) => write!(f, "-{}", child(a, 3)),
            RadicalExpr::Add(a, b) => write!(f, "{} + {}", child(a, 1), child(b, 2)),
            RadicalExpr::Sub(a, b) => write!(f, "{} - {}", child(a, 1), child(b, 2)),
            RadicalExpr::Mul(a, b) => write!(f, "{}*{}", child(a, 2), child(b, 3)),
            RadicalExpr::Div(a, b) => write!(f, "{}/{}", child(a, 2), child(b, 3)),
            RadicalExpr::Sqrt(a) => write!(f, "sqrt({a})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    Sqrt,
}

fn tokenize(src: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let bytes = src.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                out.push(Tok::Star);
                i += 1;
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1;
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push(Tok::Int(src[start..i].parse().unwrap()));
            }
            's' if src[i..].starts_with("sqrt") => {
                out.push(Tok::Sqrt);
                i += 4;
            }
            _ => {
                return Err(Error::Other(format!(
                    "unexpected character {c:?} in radical expression {src:?}"
                )))
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Tok>,
    pos: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        if self.bump().as_ref() == Some(&t) {
            Ok(())
        } else {
            Err(Error::Other(format!(
                "malformed radical expression: {:?}",
                self.src
            )))
        }
    }

    fn expr(&mut self) -> Result<RadicalExpr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    lhs = RadicalExpr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    lhs = RadicalExpr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<RadicalExpr> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    lhs = RadicalExpr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    lhs = RadicalExpr::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<RadicalExpr> {
        match self.bump() {
            Some(Tok::Minus) => Ok(RadicalExpr::Neg(Box::new(self.factor()?))),
            Some(Tok::Int(v)) => Ok(RadicalExpr::Int(v)),
            Some(Tok::Sqrt) => {
                self.expect(Tok::LParen)?;
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(RadicalExpr::Sqrt(Box::new(inner)))
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            _ => Err(Error::Other(format!(
                "malformed radical expression: {:?}",
                self.src
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::dyadic::Dyadic;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn sqrt_four_is_two() {
        let e = RadicalExpr::parse("sqrt(4)").unwrap();
        let b = e.eval_ball(96).unwrap();
        assert!(b.contains_rational(&rat(2, 1)));
        assert_eq!(e.eval_quad().unwrap(), QuadExt::from_i64(2));
    }

    #[test]
    fn nested_value() {
        // -4*(-2 + sqrt(2))*sqrt(6*(577 - 408*sqrt(2))) = 0.1689554431...
        let e = RadicalExpr::parse("-4*(-2 + sqrt(2))*sqrt(6*(577 - 408*sqrt(2)))").unwrap();
        let b = e.eval_ball(192).unwrap();
        let expect = rat(16895544310556650, 100_000_000_000_000_000);
        assert!(b
            .sub(&BallReal::from_rational(&expect, 192))
            .abs_upper()
            .le(&Dyadic::power_of_two(-50)));
    }

    #[test]
    fn negative_radicand_reported() {
        let e = RadicalExpr::parse("sqrt(2 - sqrt(9))").unwrap();
        assert!(matches!(
            e.eval_ball(96),
            Err(Error::NegativeRadicand(_))
        ));
    }

    #[test]
    fn quad_evaluation() {
        let e = RadicalExpr::parse("(11 - 3*sqrt(13))/2").unwrap();
        let v = e.eval_quad().unwrap();
        assert_eq!(v, QuadExt::new(rat(11, 2), rat(-3, 2), 13).unwrap());
        // square factor extraction
        let f = RadicalExpr::parse("sqrt(12)").unwrap().eval_quad().unwrap();
        assert_eq!(f, QuadExt::surd(3).unwrap().mul_rat(&rat(2, 1)));
        // negative radicand goes imaginary
        let g = RadicalExpr::parse("sqrt(-78)").unwrap().eval_quad().unwrap();
        assert_eq!(g.d, -78);
    }

    #[test]
    fn display_reparses() {
        for src in [
            "3/2*sqrt(4 - 3*sqrt(7)/2)",
            "2/3*(-26*sqrt(147 - 60*sqrt(6)) + 39*sqrt(98 - 40*sqrt(6)))",
            "-4*(-2 + sqrt(2))*sqrt(6*(577 - 408*sqrt(2)))",
        ] {
            let e = RadicalExpr::parse(src).unwrap();
            let round = RadicalExpr::parse(&e.to_string()).unwrap();
            assert_eq!(e, round, "{src}");
        }
    }

    #[test]
    fn division_precedence() {
        // 3/2*s parses as (3/2)*s
        let e = RadicalExpr::parse("3/2*sqrt(4)").unwrap();
        let b = e.eval_ball(64).unwrap();
        assert!(b.contains_rational(&rat(3, 1)));
    }
}
