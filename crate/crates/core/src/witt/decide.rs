//! Hyperbolicity and Witt equality over base ℚ.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed};

use super::quad::{diagonal_invariants, hyperbolic_invariants, sqfree_mul, square_classes, QuadInvariants};
use super::split::split_quaternion;
use crate::algebra::AElem;
use crate::arith::symbols::prime_divisors;
use crate::arith::{hilbert_symbol, rational_sign, square_class, Place, Rational};
use crate::error::{Error, Result};
use crate::forms::{flat_diagonal, orth_sum, HermForm, ProductForm};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Hyperbolic,
    NotHyperbolic,
    Undecided,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Hyperbolic => "hyperbolic",
            Verdict::NotHyperbolic => "not_hyperbolic",
            Verdict::Undecided => "undecided",
        }
    }
}

/// The data a verdict was read off.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// Invariants of the quadratic form the question reduced to, compared
    /// against those of the hyperbolic form of the same dimension.
    Invariants(QuadInvariants),
    /// Nonsingular alternating forms over a field are hyperbolic.
    Alternating,
    /// Hermitian form over (ℚ(λ), ι) reduced to ⟨d₁, …, d_n⟩.
    NormClass {
        rank: usize,
        lambda_sq: BigInt,
        disc: BigInt,
        obstructions: Vec<Place>,
        signature: i64,
    },
    Unsupported(String),
    Components(Vec<WittDecision>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WittDecision {
    pub verdict: Verdict,
    pub certificate: Certificate,
}

impl WittDecision {
    pub fn is_hyperbolic(&self) -> bool {
        self.verdict == Verdict::Hyperbolic
    }

    pub fn is_decided(&self) -> bool {
        self.verdict != Verdict::Undecided
    }
}

fn quadratic_decision(entries: &[Rational]) -> Result<WittDecision> {
    let inv = diagonal_invariants(entries)?;
    let hyper = entries.len() % 2 == 0 && inv == hyperbolic_invariants(entries.len() / 2);
    let verdict = if hyper { Verdict::Hyperbolic } else { Verdict::NotHyperbolic };
    Ok(WittDecision { verdict, certificate: Certificate::Invariants(inv) })
}

fn rational(x: &crate::arith::Scalar) -> Result<Rational> {
    x.to_rational()
        .cloned()
        .ok_or_else(|| Error::Internal(format!("expected a rational, got {x}")))
}

fn unitary_decision(entries: &[Rational], lambda_sq: &Rational) -> Result<WittDecision> {
    let n = entries.len();
    let d = square_class(lambda_sq)?;
    let sign = if (n / 2) % 2 == 1 { -BigInt::one() } else { BigInt::one() };
    let disc = square_classes(entries)?.iter().fold(sign, |acc, c| sqfree_mul(&acc, c));
    let signature: i64 = entries.iter().map(|e| i64::from(rational_sign(e))).sum();
    let mut places = BTreeSet::from([Place::Infinite, Place::Finite(BigUint::from(2u8))]);
    for c in [&d, &disc] {
        places.extend(prime_divisors(c).into_iter().map(Place::Finite));
    }
    let dq = Rational::from_integer(d.clone());
    let xq = Rational::from_integer(disc.clone());
    let mut obstructions = Vec::new();
    for v in places {
        if hilbert_symbol(&dq, &xq, &v)? == -1 {
            obstructions.push(v);
        }
    }
    let hyper = n % 2 == 0 && obstructions.is_empty() && (d.is_positive() || signature == 0);
    Ok(WittDecision {
        verdict: if hyper { Verdict::Hyperbolic } else { Verdict::NotHyperbolic },
        certificate: Certificate::NormClass { rank: n, lambda_sq: d, disc, obstructions, signature },
    })
}

/// Decides whether h is hyperbolic. The base of its component must be ℚ.
pub fn is_hyperbolic(h: &HermForm) -> Result<WittDecision> {
    let alg = h.algebra();
    if alg.tower().m().is_some() {
        return Err(Error::UnsupportedBase("hyperbolicity is decided over ℚ only".into()));
    }
    let singular = || Error::SingularForm("hyperbolicity needs a nonsingular form".into());
    let fd = flat_diagonal(h)?;
    let Some(entries) = fd.entries else {
        if !h.is_nonsingular() {
            return Err(singular());
        }
        return Ok(WittDecision { verdict: Verdict::Hyperbolic, certificate: Certificate::Alternating });
    };
    let d = &fd.d;
    // a congruent diagonal form is nonsingular iff its entries are units
    if !entries.iter().all(|x| d.is_unit(x)) {
        return Err(singular());
    }
    if d.is_unitary() {
        let tower = d.tower();
        let lambda = tower.lambda().expect("unitary center");
        let lambda_sq = rational(&(&lambda * &lambda))?;
        let values = entries
            .iter()
            .map(|x| if fd.epsilon == 1 { rational(&x[0]) } else { rational(&(&x[0] * &lambda)) })
            .collect::<Result<Vec<_>>>()?;
        return unitary_decision(&values, &lambda_sq);
    }
    match d.quaternion() {
        None => {
            let values = entries.iter().map(|x| rational(&x[0])).collect::<Result<Vec<_>>>()?;
            quadratic_decision(&values)
        }
        Some((a, b)) if fd.epsilon == 1 => {
            // ⟨d⟩ over (D, conj) transfers to 2d·⟨1, −a, −b, ab⟩.
            let (a, b) = (rational(a)?, rational(b)?);
            let norm = [Rational::one(), -a.clone(), -b.clone(), &a * &b];
            let mut values = Vec::with_capacity(4 * entries.len());
            for x in &entries {
                let two_d = rational(&x[0])? * Rational::from_integer(2.into());
                values.extend(norm.iter().map(|n| n * &two_d));
            }
            quadratic_decision(&values)
        }
        Some(_) => match split_quaternion(d)? {
            None => Ok(WittDecision {
                verdict: Verdict::Undecided,
                certificate: Certificate::Unsupported(
                    "skew-hermitian form over a division quaternion algebra".into(),
                ),
            }),
            Some(sp) => {
                let images: Vec<AElem> = entries.iter().map(|x| sp.apply(x)).collect();
                is_hyperbolic(&HermForm::diagonal(sp.m2.clone(), -1, images)?)
            }
        },
    }
}

/// Hyperbolicity over a product base, componentwise.
pub fn is_hyperbolic_product(h: &ProductForm) -> Result<WittDecision> {
    let parts = h.parts.iter().map(is_hyperbolic).collect::<Result<Vec<_>>>()?;
    let verdict = if parts.iter().any(|d| d.verdict == Verdict::NotHyperbolic) {
        Verdict::NotHyperbolic
    } else if parts.iter().any(|d| d.verdict == Verdict::Undecided) {
        Verdict::Undecided
    } else {
        Verdict::Hyperbolic
    };
    Ok(WittDecision { verdict, certificate: Certificate::Components(parts) })
}

/// [h1] = [h2] in the Witt group, decided as hyperbolicity of h1 ⊥ −h2. A
/// Hyperbolic verdict means equal.
pub fn witt_equal(h1: &HermForm, h2: &HermForm) -> Result<WittDecision> {
    is_hyperbolic(&orth_sum(h1, &h2.neg())?)
}

pub fn witt_equal_product(h1: &ProductForm, h2: &ProductForm) -> Result<WittDecision> {
    if h1.algebra != h2.algebra {
        return Err(Error::AlgebraMismatch("forms live over different algebras".into()));
    }
    let parts = h1
        .parts
        .iter()
        .zip(&h2.parts)
        .map(|(a, b)| orth_sum(a, &b.neg()))
        .collect::<Result<Vec<_>>>()?;
    is_hyperbolic_product(&ProductForm::new(h1.algebra.clone(), parts)?)
}
