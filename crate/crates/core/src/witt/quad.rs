//! Hasse–Minkowski invariants of quadratic forms over ℚ.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};

use crate::arith::symbols::prime_divisors;
use crate::arith::{hilbert_symbol, rational_sign, square_class, Place, Rational};
use crate::error::{Error, Result};
use crate::forms::QuadForm;
use crate::signature::quad_signature;
use crate::algebra::Ordering;

/// dim, signed discriminant, the places where the Hasse invariant is −1, and
/// the signature at the real place. Complete for isometry over ℚ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadInvariants {
    pub dim: usize,
    pub disc: BigInt,
    pub hasse: BTreeSet<Place>,
    pub signature: i64,
}

/// Squarefree part of a·b for squarefree a, b.
pub(crate) fn sqfree_mul(a: &BigInt, b: &BigInt) -> BigInt {
    let g = a.gcd(b);
    (a / &g) * (b / &g)
}

/// Square classes of the entries, factoring each distinct value once.
pub(crate) fn square_classes(entries: &[Rational]) -> Result<Vec<BigInt>> {
    let mut seen: BTreeMap<&Rational, BigInt> = BTreeMap::new();
    entries
        .iter()
        .map(|x| {
            if let Some(c) = seen.get(x) {
                return Ok(c.clone());
            }
            let c = square_class(x)?;
            seen.insert(x, c.clone());
            Ok(c)
        })
        .collect()
}

fn relevant_places(classes: &[BigInt]) -> BTreeSet<Place> {
    let mut out = BTreeSet::from([Place::Infinite, Place::Finite(BigUint::from(2u8))]);
    for c in classes {
        out.extend(prime_divisors(c).into_iter().map(Place::Finite));
    }
    out
}

fn hilbert_int(a: &BigInt, b: &BigInt, v: &Place) -> i8 {
    hilbert_symbol(&Rational::from_integer(a.clone()), &Rational::from_integer(b.clone()), v)
        .expect("nonzero arguments at a valid place")
}

/// Invariants of ⟨a₁, …, a_n⟩ over ℚ, with Hasse invariant
/// Π_{i<j} (aᵢ, aⱼ)_v.
pub fn diagonal_invariants(entries: &[Rational]) -> Result<QuadInvariants> {
    let classes = square_classes(entries)?;
    let places = relevant_places(&classes);
    let mut hasse: BTreeMap<Place, i8> = places.iter().map(|p| (p.clone(), 1)).collect();
    let mut prod = BigInt::one();
    for c in &classes {
        if !prod.is_one() {
            for (v, s) in hasse.iter_mut() {
                *s *= hilbert_int(&prod, c, v);
            }
        }
        prod = sqfree_mul(&prod, c);
    }
    let n = entries.len();
    let sign = if (n * n.saturating_sub(1) / 2) % 2 == 1 { -BigInt::one() } else { BigInt::one() };
    let signature = entries.iter().map(|x| i64::from(rational_sign(x))).sum();
    Ok(QuadInvariants {
        dim: n,
        disc: sign * prod,
        hasse: hasse.into_iter().filter(|(_, s)| *s < 0).map(|(p, _)| p).collect(),
        signature,
    })
}

/// The invariants of m·⟨1, −1⟩.
pub fn hyperbolic_invariants(m: usize) -> QuadInvariants {
    let entries: Vec<Rational> = (0..2 * m)
        .map(|i| Rational::from_integer(if i % 2 == 0 { 1 } else { -1 }.into()))
        .collect();
    diagonal_invariants(&entries).expect("units")
}

pub(crate) fn rational_entries(q: &QuadForm) -> Result<Vec<Rational>> {
    let alg = q.algebra();
    if alg.tower().m().is_some() || alg.tower().has_lambda() || !alg.is_center_type() {
        return Err(Error::UnsupportedBase("quadratic invariants need a form over ℚ".into()));
    }
    if q.epsilon() != 1 {
        return Err(Error::UseSkewPath);
    }
    let fd = crate::forms::flat_diagonal(q)?;
    let entries = fd.entries.expect("symmetric forms are not alternating");
    entries
        .iter()
        .map(|x| {
            let r = x[0].to_rational().cloned().expect("rational entry");
            if r == Rational::from_integer(0.into()) {
                Err(Error::SingularForm("degenerate quadratic form".into()))
            } else {
                Ok(r)
            }
        })
        .collect()
}

/// Hasse–Minkowski invariants of a nonsingular quadratic form over ℚ.
pub fn quad_invariants(q: &QuadForm) -> Result<QuadInvariants> {
    let entries = rational_entries(q)?;
    let inv = diagonal_invariants(&entries)?;
    debug_assert_eq!(
        Some(inv.signature),
        quad_signature(q, &Ordering::new(q.algebra().index(), 1)).ok()
    );
    Ok(inv)
}

/// x is a square in ℚ_v (x a nonzero squarefree integer).
fn is_local_square(x: &BigInt, v: &Place) -> bool {
    match v {
        Place::Infinite => x.is_positive(),
        Place::Finite(p) => {
            let pb = BigInt::from(p.clone());
            if x.is_multiple_of(&pb) {
                return false;
            }
            if p == &BigUint::from(2u8) {
                x.mod_floor(&BigInt::from(8)).to_u8() == Some(1)
            } else {
                crate::arith::legendre_symbol(x, p).expect("odd prime") == 1
            }
        }
    }
}

/// Isotropy of ⟨a₁, …, a_n⟩ over ℚ from the local invariants.
pub fn is_isotropic_diagonal(entries: &[Rational]) -> Result<bool> {
    let n = entries.len();
    if n <= 1 {
        return Ok(false);
    }
    let inv = diagonal_invariants(entries)?;
    let classes = square_classes(entries)?;
    let places = relevant_places(&classes);
    let indefinite = inv.signature.unsigned_abs() < n as u64;
    if !indefinite {
        return Ok(false);
    }
    // d = Π aᵢ (undecorated determinant), c_v = Hasse invariant.
    let det = classes.iter().fold(BigInt::one(), |acc, c| sqfree_mul(&acc, c));
    let c = |v: &Place| if inv.hasse.contains(v) { -1 } else { 1 };
    let minus_one = -BigInt::one();
    Ok(match n {
        2 => inv.disc.is_one(),
        3 => places.iter().all(|v| c(v) == hilbert_int(&minus_one, &-det.clone(), v)),
        4 => places
            .iter()
            .all(|v| !is_local_square(&det, v) || c(v) == hilbert_int(&minus_one, &minus_one, v)),
        _ => true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rq;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&n| rq(n, 1)).collect()
    }

    #[test]
    fn spec_examples() {
        let h = diagonal_invariants(&ints(&[1, -1])).unwrap();
        assert_eq!((h.dim, h.disc.clone(), h.hasse.is_empty(), h.signature), (2, 1.into(), true, 0));
        let p = diagonal_invariants(&ints(&[1, -2, -3, 6])).unwrap();
        assert_eq!(p.disc, 1.into());
        assert!(p.hasse.contains(&Place::prime(3)));
        assert_eq!(p.signature, 0);
        let s = diagonal_invariants(&ints(&[1, 1])).unwrap();
        assert_eq!((s.disc.clone(), s.signature), ((-1).into(), 2));
    }

    #[test]
    fn hasse_product_formula() {
        for v in [[1, -2, -3, 6], [3, 5, -7, 2], [-1, -1, -1, -1]] {
            let inv = diagonal_invariants(&ints(&v)).unwrap();
            assert_eq!(inv.hasse.len() % 2, 0, "{v:?}");
        }
    }

    #[test]
    fn isotropy_examples() {
        assert!(is_isotropic_diagonal(&ints(&[1, -1])).unwrap());
        assert!(!is_isotropic_diagonal(&ints(&[1, -3])).unwrap());
        assert!(is_isotropic_diagonal(&ints(&[1, 1, -2])).unwrap());
        assert!(!is_isotropic_diagonal(&ints(&[1, 1, -3])).unwrap());
        assert!(!is_isotropic_diagonal(&ints(&[1, 1, 1, -7])).unwrap());
        assert!(is_isotropic_diagonal(&ints(&[1, 1, 1, -3])).unwrap());
        assert!(!is_isotropic_diagonal(&ints(&[1, -2, -3, 6])).unwrap());
        assert!(is_isotropic_diagonal(&ints(&[1, 1, 1, 1, -7])).unwrap());
    }
}
