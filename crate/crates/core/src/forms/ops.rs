use std::collections::BTreeMap;
use std::sync::Arc;

use super::form::HermForm;
use crate::algebra::{AElem, ComponentAlgebra};
use crate::arith::Scalar;
use crate::error::{Error, Result};

/// h1 ⊥ h2 (block-diagonal Gram).
pub fn orth_sum(h1: &HermForm, h2: &HermForm) -> Result<HermForm> {
    h1.same_space(h2)?;
    let r1 = h1.rank();
    let mut gram = h1.entries().clone();
    for (&(i, j), x) in h2.entries() {
        gram.insert((i + r1, j + r1), x.clone());
    }
    Ok(HermForm::from_entries_unchecked(h1.algebra().clone(), h1.epsilon(), r1 + h2.rank(), gram))
}

pub fn orth_sum_all(forms: &[HermForm]) -> Result<HermForm> {
    let (first, rest) = forms
        .split_first()
        .ok_or_else(|| Error::Internal("empty orthogonal sum".into()))?;
    rest.iter().try_fold(first.clone(), |acc, h| orth_sum(&acc, h))
}

/// n × h.
pub fn multiple(h: &HermForm, n: usize) -> HermForm {
    let r = h.rank();
    let mut gram = BTreeMap::new();
    for c in 0..n {
        for (&(i, j), x) in h.entries() {
            gram.insert((c * r + i, c * r + j), x.clone());
        }
    }
    HermForm::from_entries_unchecked(h.algebra().clone(), h.epsilon(), n * r, gram)
}

/// a·h for a unit a with σ(a) = ±a. The result lives over (A, Int(a)∘σ) and
/// its ε is multiplied by that sign.
pub fn scale_unit(h: &HermForm, a: &AElem) -> Result<HermForm> {
    let alg = h.algebra();
    let eta = alg
        .symmetry_sign(a)
        .ok_or_else(|| Error::InvalidEntry("scaling element is neither symmetric nor skew".into()))?;
    if !alg.is_unit(a) {
        return Err(Error::SingularUnit("scaling element is not a unit".into()));
    }
    let new_u = alg.mul(a, alg.inner_unit());
    let scaled = Arc::new(alg.with_inner(Some(new_u))?);
    let gram = h.entries().iter().map(|(&k, x)| (k, alg.mul(a, x))).collect();
    Ok(HermForm::from_entries_unchecked(scaled, h.epsilon() * eta, h.rank(), gram))
}

/// Scales by u⁻¹ so that the form lives over the canonical involution ϑ^t,
/// with ε' = δ·ε.
pub fn to_canonical(h: &HermForm) -> Result<HermForm> {
    let alg = h.algebra();
    if alg.is_canonical() {
        return Ok(h.clone());
    }
    scale_unit(h, alg.inner_unit_inverse())
}

/// Whether `q` is a form over the center (S, ι) or the base (K, id) of the
/// algebra of `h`.
fn acts_on(q: &ComponentAlgebra, alg: &ComponentAlgebra) -> bool {
    q.is_center_type()
        && q.index() == alg.index()
        && (**q.tower() == **alg.tower() || *q.tower().base() == *alg.tower().base() && !q.tower().has_lambda())
}

/// q ⊗ h for a form q over K or over the center S, as a Kronecker product
/// with index (a, i) ↦ a·rank(h) + i.
pub fn tensor_quadratic(q: &HermForm, h: &HermForm) -> Result<HermForm> {
    let alg = h.algebra();
    if !acts_on(q.algebra(), alg) {
        return Err(Error::AlgebraMismatch("q is not a form over the center or base".into()));
    }
    let tower = alg.tower();
    let r = h.rank();
    let mut gram = BTreeMap::new();
    for (&(a, b), qv) in q.entries() {
        let s: Scalar = qv[0].lift_to(tower)?;
        for (&(i, j), x) in h.entries() {
            gram.insert((a * r + i, b * r + j), alg.scale(x, &s));
        }
    }
    Ok(HermForm::from_entries_unchecked(alg.clone(), q.epsilon() * h.epsilon(), q.rank() * r, gram))
}

/// h ⊗_K K(√m) for a form over an algebra with base ℚ.
pub fn extend_scalars(h: &HermForm, m: &num_bigint::BigInt) -> Result<HermForm> {
    let ext = Arc::new(h.algebra().extend_base(m)?);
    let gram = h
        .entries()
        .iter()
        .map(|(&k, x)| Ok((k, ext.lift_elem(x)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    Ok(HermForm::from_entries_unchecked(ext, h.epsilon(), h.rank(), gram))
}

/// Erases the block structure of a form over (M_k(D), ϑ^t): the rk × rk Gram
/// over (D, ϑ).
pub fn morita_flatten(h: &HermForm) -> Result<HermForm> {
    let alg = h.algebra();
    if !alg.is_canonical() {
        return Err(Error::ScaleFirst);
    }
    let k = alg.matrix_size();
    let d = Arc::new(alg.coefficient_algebra());
    let mut gram = BTreeMap::new();
    for (&(i, j), x) in h.entries() {
        for a in 0..k {
            for b in 0..k {
                let e = alg.entry(x, a, b);
                if e.iter().any(|s| !s.is_zero()) {
                    gram.insert((i * k + a, j * k + b), e);
                }
            }
        }
    }
    Ok(HermForm::from_entries_unchecked(d, h.epsilon(), h.rank() * k, gram))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Coefficients;
    use crate::arith::Tower;

    fn qalg() -> Arc<ComponentAlgebra> {
        Arc::new(ComponentAlgebra::new(0, Tower::rationals(), Coefficients::Center, 1, None).unwrap())
    }

    #[test]
    fn sum_and_tensor() {
        let a = qalg();
        let t = a.tower().clone();
        let one = HermForm::diagonal_scalars(a.clone(), 1, &[t.int(1)]).unwrap();
        let m1 = HermForm::diagonal_scalars(a.clone(), 1, &[t.int(-1)]).unwrap();
        let s = orth_sum(&one, &m1).unwrap();
        assert_eq!(s, HermForm::diagonal_scalars(a.clone(), 1, &[t.int(1), t.int(-1)]).unwrap());
        let m2 = Arc::new(ComponentAlgebra::new(0, t.clone(), Coefficients::Center, 2, None).unwrap());
        let g: AElem = [1, 2, 2, 5].iter().map(|&n| t.int(n)).collect();
        let h = HermForm::diagonal(m2.clone(), 1, vec![g.clone()]).unwrap();
        let two = HermForm::diagonal_scalars(a, 1, &[t.int(2)]).unwrap();
        let th = tensor_quadratic(&two, &h).unwrap();
        assert_eq!(th, HermForm::diagonal(m2.clone(), 1, vec![m2.scale(&g, &t.int(2))]).unwrap());
    }

    #[test]
    fn scaling_to_canonical() {
        let t = Tower::rationals();
        let j: AElem = [0, 1, -1, 0].iter().map(|&n| t.int(n)).collect();
        let sp = Arc::new(ComponentAlgebra::new(0, t.clone(), Coefficients::Center, 2, Some(j.clone())).unwrap());
        let h = HermForm::diagonal(sp.clone(), 1, vec![sp.one()]).unwrap();
        let c = to_canonical(&h).unwrap();
        assert!(c.algebra().is_canonical());
        assert_eq!(c.epsilon(), -1);
        assert_eq!(c.entry(0, 0), sp.neg(&j));
        assert!(matches!(morita_flatten(&h), Err(Error::ScaleFirst)));
    }

    #[test]
    fn flatten_block_erase() {
        let t = Tower::rationals();
        let m2 = Arc::new(ComponentAlgebra::new(0, t.clone(), Coefficients::Center, 2, None).unwrap());
        let x: AElem = [1, 0, 0, -1].iter().map(|&n| t.int(n)).collect();
        let h = HermForm::diagonal(m2, 1, vec![x]).unwrap();
        let f = morita_flatten(&h).unwrap();
        assert_eq!(f.rank(), 2);
        assert_eq!(f.diagonal_entries().unwrap(), vec![vec![t.int(1)], vec![t.int(-1)]]);
    }

    #[test]
    fn symmetry_violation() {
        let a = qalg();
        let t = a.tower().clone();
        let g = vec![vec![vec![t.int(0)], vec![t.int(1)]], vec![vec![t.int(-1)], vec![t.int(0)]]];
        assert!(matches!(HermForm::new(a, 1, g), Err(Error::NotHermitian(_))));
    }
}
