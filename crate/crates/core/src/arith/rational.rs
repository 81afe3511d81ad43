use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Parses "p", "p/q" or "-p/q". The result is always in lowest terms.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational numerator in {s:?}")))?;
    let d: BigInt = d
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational denominator in {s:?}")))?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(n, d))
}

/// n/d as a rational; `d` must be nonzero.
pub fn rq(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn format_rational(x: &Rational) -> String {
    x.to_string()
}

pub fn rational_sign(x: &Rational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

fn integer_square_root(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Returns the nonnegative rational square root when one exists.
pub fn is_rational_square(x: &Rational) -> Option<Rational> {
    let n = integer_square_root(x.numer())?;
    let d = integer_square_root(x.denom())?;
    Some(Rational::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip() {
        for s in ["0", "3", "-7/2", "5/10", "123456789012345678901234567890/7"] {
            let x = parse_rational(s).unwrap();
            assert_eq!(parse_rational(&format_rational(&x)).unwrap(), x);
        }
        assert_eq!(format_rational(&parse_rational("6/4").unwrap()), "3/2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn squares() {
        assert!(is_rational_square(&parse_rational("9/4").unwrap()).is_some());
        assert!(is_rational_square(&parse_rational("2").unwrap()).is_none());
        assert!(is_rational_square(&parse_rational("-1").unwrap()).is_none());
    }
}
