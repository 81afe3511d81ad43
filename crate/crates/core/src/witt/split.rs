//! Explicit splitting (a, b)_ℚ ≅ M₂(ℚ) of a split quaternion algebra, sending
//! conjugation to the adjugate x ↦ J·xᵗ·J⁻¹.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigUint;

use crate::algebra::{AElem, Coefficients, ComponentAlgebra};
use crate::arith::symbols::prime_divisors;
use crate::arith::{hilbert_symbol, is_rational_square, rq, square_class, Place, Rational, Scalar};
use crate::error::{Error, Result};
use crate::linalg;

/// Largest box radius tried when looking for a pure quaternion with square 1.
const SEARCH_RADIUS: i64 = 48;

pub(crate) fn is_split(a: &Rational, b: &Rational) -> Result<bool> {
    let mut places = BTreeSet::from([Place::Infinite, Place::Finite(BigUint::from(2u8))]);
    for x in [a, b] {
        places.extend(prime_divisors(&square_class(x)?).into_iter().map(Place::Finite));
    }
    for v in &places {
        if hilbert_symbol(a, b, v)? == -1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Images in M₂(ℚ) of the quaternion basis 1, i, j, k.
pub(crate) struct Splitting {
    pub m2: Arc<ComponentAlgebra>,
    images: Vec<AElem>,
}

impl Splitting {
    pub fn apply(&self, x: &AElem) -> AElem {
        let mut out = self.m2.zero();
        for (c, img) in x.iter().zip(&self.images) {
            if !c.is_zero() {
                out = self.m2.add(&out, &self.m2.scale(img, c));
            }
        }
        out
    }
}

/// Points of the cube shell max(|x|,|y|,|z|) = r.
fn shell(r: i64) -> impl Iterator<Item = (i64, i64, i64)> {
    (-r..=r).flat_map(move |x| {
        (-r..=r).flat_map(move |y| {
            (-r..=r).filter_map(move |z| (x.abs().max(y.abs()).max(z.abs()) == r).then_some((x, y, z)))
        })
    })
}

/// The splitting of D over a field, or `None` when D is a division algebra.
pub(crate) fn split_quaternion(d: &ComponentAlgebra) -> Result<Option<Splitting>> {
    let (a, b) = d.quaternion().ok_or_else(|| Error::Internal("not a quaternion algebra".into()))?;
    let (ar, br) = match (a.to_rational(), b.to_rational()) {
        (Some(x), Some(y)) => (x.clone(), y.clone()),
        _ => return Err(Error::UnsupportedBase("splitting needs a quaternion algebra over ℚ".into())),
    };
    if !is_split(&ar, &br)? {
        return Ok(None);
    }
    let t = d.tower().clone();
    let q = |w: Rational, x: Rational, y: Rational, z: Rational| -> AElem {
        [w, x, y, z].into_iter().map(|c| t.rational(c)).collect()
    };
    let z = Rational::from_integer(0.into());
    // p = xi + yj + zk with p² = ax² + by² − abz² a nonzero square c².
    let mut p = None;
    'outer: for r in 1..=SEARCH_RADIUS {
        for (x, y, w) in shell(r) {
            let (x, y, w) = (Rational::from_integer(x.into()), Rational::from_integer(y.into()), Rational::from_integer(w.into()));
            let sq = &ar * &x * &x + &br * &y * &y - &ar * &br * &w * &w;
            if sq == z {
                continue;
            }
            if let Some(c) = is_rational_square(&sq) {
                p = Some(q(z.clone(), x / &c, y / &c, w / &c));
                break 'outer;
            }
        }
    }
    let p = p.ok_or_else(|| Error::SearchBudgetExceeded(SEARCH_RADIUS as usize))?;
    // q ⊥ p among pure quaternions with q² ≠ 0: q = e − (Trd(pe)/2)·p.
    let pure = [
        [1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 0], [1, 0, 1], [0, 1, 1], [1, 1, 1],
    ];
    let half = Rational::new(1.into(), 2.into());
    let mut qe = None;
    for v in pure {
        let e = q(z.clone(), rq(v[0], 1), rq(v[1], 1), rq(v[2], 1));
        let tr = d.trd(&d.mul(&p, &e));
        let c = tr.to_rational().cloned().unwrap_or_default() * &half;
        let cand = d.sub(&e, &d.scale(&p, &t.rational(c)));
        let sq = d.mul(&cand, &cand);
        if !sq[0].is_zero() {
            qe = Some((cand, sq[0].clone()));
            break;
        }
    }
    let (qv, q2) = qe.ok_or_else(|| Error::Internal("no anisotropic vector orthogonal to p".into()))?;
    let pq = d.mul(&p, &qv);
    let m2 = Arc::new(ComponentAlgebra::new(
        d.index(),
        t.clone(),
        Coefficients::Center,
        2,
        Some(vec![t.int(0), t.int(1), t.int(-1), t.int(0)]),
    )?);
    let mat = |v: [Scalar; 4]| -> AElem { v.into_iter().collect() };
    let (zero, one) = (t.zero(), t.one());
    let img_b = [
        mat([one.clone(), zero.clone(), zero.clone(), one.clone()]),
        mat([one.clone(), zero.clone(), zero.clone(), -&one]),
        mat([zero.clone(), q2.clone(), one.clone(), zero.clone()]),
        mat([zero.clone(), q2.clone(), -&one, zero.clone()]),
    ];
    // Columns: coordinates of 1, p, q, pq in the basis 1, i, j, k.
    let basis = [d.one(), p, qv, pq];
    let cols: linalg::Matrix = (0..4).map(|r| basis.iter().map(|x| x[r].clone()).collect()).collect();
    let inv = linalg::inverse(&cols).ok_or_else(|| Error::Internal("splitting basis is singular".into()))?;
    let images: Vec<AElem> = (0..4)
        .map(|s| {
            (0..4).fold(m2.zero(), |acc, j| {
                if inv[j][s].is_zero() {
                    acc
                } else {
                    m2.add(&acc, &m2.scale(&img_b[j], &inv[j][s]))
                }
            })
        })
        .collect();
    let sp = Splitting { m2, images };
    for x in 0..4 {
        let ex = d.basis(x);
        for y in 0..4 {
            let ey = d.basis(y);
            if sp.apply(&d.mul(&ex, &ey)) != sp.m2.mul(&sp.apply(&ex), &sp.apply(&ey)) {
                return Err(Error::Internal("splitting is not multiplicative".into()));
            }
        }
        if sp.apply(&d.sigma(&ex)) != sp.m2.sigma(&sp.apply(&ex)) {
            return Err(Error::Internal("splitting does not carry conjugation to the adjugate".into()));
        }
    }
    Ok(Some(sp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Tower;

    fn quat(a: i64, b: i64) -> ComponentAlgebra {
        let t = Tower::rationals();
        ComponentAlgebra::new(0, t.clone(), Coefficients::Quaternion { a: t.int(a), b: t.int(b) }, 1, None).unwrap()
    }

    #[test]
    fn split_detection() {
        assert!(!is_split(&rq(-1, 1), &rq(-1, 1)).unwrap());
        assert!(is_split(&rq(1, 1), &rq(-1, 1)).unwrap());
        assert!(is_split(&rq(-1, 1), &rq(2, 1)).unwrap());
        assert!(!is_split(&rq(-1, 1), &rq(3, 1)).unwrap());
    }

    #[test]
    fn splittings_are_homomorphisms() {
        for (a, b) in [(1, -1), (-1, 2), (2, 7), (-2, 3), (5, 5)] {
            let d = quat(a, b);
            assert!(split_quaternion(&d).unwrap().is_some(), "({a},{b})");
        }
        assert!(split_quaternion(&quat(-1, -1)).unwrap().is_none());
    }
}
