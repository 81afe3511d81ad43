//! Local symbols over ℚ: Legendre and Hilbert symbols, square classes.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::arith::Rational;
use crate::error::{Error, Result};

/// A place of ℚ.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Finite(BigUint),
    Infinite,
}

impl Place {
    pub fn prime(p: u64) -> Place {
        Place::Finite(BigUint::from(p))
    }

    /// Validates that a finite place carries a prime.
    pub fn checked(self) -> Result<Place> {
        if let Place::Finite(p) = &self {
            if !is_prime(p) {
                return Err(Error::InvalidPlace(format!("{p} is not prime")));
            }
        }
        Ok(self)
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub fn is_prime(p: &BigUint) -> bool {
    match p.to_u64() {
        Some(small) => num_prime::nt_funcs::is_prime64(small),
        None => num_prime::nt_funcs::is_prime(p, None).probably(),
    }
}

/// Prime factorization of |n| (empty for |n| ≤ 1).
pub fn factorize(n: &BigInt) -> BTreeMap<BigUint, usize> {
    let n = n.magnitude();
    if n <= &BigUint::one() {
        return BTreeMap::new();
    }
    if let Some(small) = n.to_u128() {
        return num_prime::nt_funcs::factorize128(small)
            .into_iter()
            .map(|(p, e)| (BigUint::from(p), e))
            .collect();
    }
    num_prime::nt_funcs::factorize(n.clone())
}

/// Splits n = p^v · u with p ∤ u.
pub fn split_valuation(n: &BigInt, p: &BigUint) -> (u32, BigInt) {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p.clone());
    let mut v = 0;
    let mut u = n.clone();
    loop {
        let (q, r) = u.div_rem(&p);
        if !r.is_zero() {
            return (v, u);
        }
        u = q;
        v += 1;
    }
}

/// Legendre symbol (a/p) for an odd prime p.
pub fn legendre_symbol(a: &BigInt, p: &BigUint) -> Result<i8> {
    if p == &BigUint::from(2u8) || !is_prime(p) {
        return Err(Error::InvalidPlace(format!("{p} is not an odd prime")));
    }
    Ok(legendre_unchecked(a, p))
}

fn legendre_unchecked(a: &BigInt, p: &BigUint) -> i8 {
    let pi = BigInt::from(p.clone());
    let r = a.mod_floor(&pi);
    if r.is_zero() {
        return 0;
    }
    let r = r.to_biguint().expect("mod_floor is nonnegative");
    let e = (p - 1u8) >> 1;
    if r.modpow(&e, p).is_one() {
        1
    } else {
        -1
    }
}

/// Integer in the same square class as a nonzero rational (num · den).
fn integral_representative(x: &Rational) -> Result<BigInt> {
    if x.is_zero() {
        return Err(Error::InvalidScalar("zero has no square class".into()));
    }
    Ok(x.numer() * x.denom())
}

/// Hilbert symbol (a, b)_v for nonzero rationals.
pub fn hilbert_symbol(a: &Rational, b: &Rational, v: &Place) -> Result<i8> {
    let a = integral_representative(a)?;
    let b = integral_representative(b)?;
    match v {
        Place::Infinite => Ok(if a.is_negative() && b.is_negative() { -1 } else { 1 }),
        Place::Finite(p) => {
            if !is_prime(p) {
                return Err(Error::InvalidPlace(format!("{p} is not prime")));
            }
            Ok(hilbert_at_prime(&a, &b, p))
        }
    }
}

/// Hilbert symbol for nonzero integers at a prime known to be prime.
pub(crate) fn hilbert_at_prime(a: &BigInt, b: &BigInt, p: &BigUint) -> i8 {
    let (alpha, u) = split_valuation(a, p);
    let (beta, v) = split_valuation(b, p);
    if p == &BigUint::from(2u8) {
        let u8m = mod8(&u);
        let v8m = mod8(&v);
        let eps = |x: u8| u32::from(x % 4 == 3);
        let omega = |x: u8| u32::from(x == 3 || x == 5);
        let e = eps(u8m) * eps(v8m) + alpha * omega(v8m) + beta * omega(u8m);
        if e % 2 == 0 {
            1
        } else {
            -1
        }
    } else {
        let mut s: i8 = 1;
        let p_mod4 = (p % 4u8).to_u8().unwrap_or(0);
        if (alpha * beta) % 2 == 1 && p_mod4 == 3 {
            s = -s;
        }
        if beta % 2 == 1 {
            s *= legendre_unchecked(&u, p);
        }
        if alpha % 2 == 1 {
            s *= legendre_unchecked(&v, p);
        }
        s
    }
}

fn mod8(x: &BigInt) -> u8 {
    x.mod_floor(&BigInt::from(8)).to_u8().expect("residue below 8")
}

/// The squarefree integer d with x = d · (rational square).
pub fn square_class(x: &Rational) -> Result<BigInt> {
    let n = integral_representative(x)?;
    let mut d = BigInt::one();
    for (p, e) in factorize(&n) {
        if e % 2 == 1 {
            d *= BigInt::from(p);
        }
    }
    if n.sign() == Sign::Minus {
        d = -d;
    }
    Ok(d)
}

/// Primes dividing a nonzero integer.
pub fn prime_divisors(n: &BigInt) -> Vec<BigUint> {
    factorize(n).into_keys().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn legendre_examples() {
        let seven = BigUint::from(7u8);
        assert_eq!(legendre_symbol(&2.into(), &seven), Ok(1));
        assert_eq!(legendre_symbol(&3.into(), &seven), Ok(-1));
        assert_eq!(legendre_symbol(&7.into(), &seven), Ok(0));
        assert_eq!(legendre_symbol(&(-1).into(), &seven), Ok(-1));
    }

    #[test]
    fn legendre_rejects_even_and_composite() {
        assert!(matches!(
            legendre_symbol(&1.into(), &BigUint::from(2u8)),
            Err(Error::InvalidPlace(_))
        ));
        assert!(matches!(
            legendre_symbol(&1.into(), &BigUint::from(9u8)),
            Err(Error::InvalidPlace(_))
        ));
    }

    #[test]
    fn hilbert_examples() {
        let m1 = q(-1, 1);
        assert_eq!(hilbert_symbol(&m1, &m1, &Place::Infinite), Ok(-1));
        assert_eq!(hilbert_symbol(&m1, &m1, &Place::prime(2)), Ok(-1));
        assert_eq!(hilbert_symbol(&m1, &m1, &Place::prime(3)), Ok(1));
        for b in [q(5, 3), q(-7, 2), q(6, 1)] {
            for v in [Place::Infinite, Place::prime(2), Place::prime(3), Place::prime(7)] {
                assert_eq!(hilbert_symbol(&q(1, 1), &b, &v), Ok(1));
            }
        }
        assert_eq!(hilbert_symbol(&q(-1, 1), &q(3, 1), &Place::prime(3)), Ok(-1));
        assert_eq!(hilbert_symbol(&q(2, 1), &q(3, 1), &Place::prime(3)), Ok(-1));
    }

    #[test]
    fn hilbert_rejects_zero() {
        assert!(matches!(
            hilbert_symbol(&q(0, 1), &q(1, 1), &Place::Infinite),
            Err(Error::InvalidScalar(_))
        ));
    }

    #[test]
    fn square_class_examples() {
        assert_eq!(square_class(&q(8, 1)).unwrap(), BigInt::from(2));
        assert_eq!(square_class(&q(-4, 9)).unwrap(), BigInt::from(-1));
        assert_eq!(square_class(&q(1, 1)).unwrap(), BigInt::from(1));
        assert_eq!(square_class(&q(3, 12)).unwrap(), BigInt::from(1));
        assert_eq!(square_class(&q(-5, 18)).unwrap(), BigInt::from(-10));
        assert!(square_class(&q(0, 1)).is_err());
    }

    #[test]
    fn square_class_of_large_input() {
        // 2^64 + 13 times a square of a 20-digit number
        let big: BigInt = "18446744073709551629".parse().unwrap();
        let sq: BigInt = "98765432109876543211".parse().unwrap();
        let x = Rational::from_integer(&big * &sq * &sq);
        let expect = square_class(&Rational::from_integer(big)).unwrap();
        assert_eq!(square_class(&x).unwrap(), expect);
    }
}
