//! Number types: exact dyadics, ball enclosures, quadratic fields.

pub mod ball;
pub mod dyadic;
pub mod quad;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};

/// Parse "p" or "p/q" into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::Other(format!("bad rational: {s:?}")))?;
    let d: BigInt = match den {
        Some(d) => d
            .parse()
            .map_err(|_| Error::Other(format!("bad rational: {s:?}")))?,
        None => BigInt::one(),
    };
    if d == BigInt::from(0) {
        return Err(Error::Other(format!("bad rational (zero denominator): {s:?}")));
    }
    Ok(BigRational::new(n, d))
}

/// Render a rational as "p" or "p/q" in lowest terms.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
