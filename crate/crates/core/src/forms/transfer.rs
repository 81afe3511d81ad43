use std::collections::BTreeMap;
use std::sync::Arc;

use super::form::{HermForm, QuadForm};
use crate::algebra::{AElem, ComponentAlgebra};
use crate::arith::Scalar;
use crate::error::{Error, Result};

/// Nonzero values Trd(e_p·e_q) on the S-basis.
fn trd_table(alg: &ComponentAlgebra) -> Vec<(usize, usize, Scalar)> {
    let t = alg.t();
    let mut out = Vec::new();
    for p in 0..t {
        for q in 0..t {
            if let Some((c, idx)) = alg.basis_mul(p, q) {
                let tr = alg.trd(&alg.basis(idx));
                if !tr.is_zero() {
                    out.push((p, q, &c * &tr));
                }
            }
        }
    }
    out
}

/// K-basis of A: e_p·λ^s, in the order p·dim_K S + s.
fn base_basis(alg: &ComponentAlgebra) -> Vec<AElem> {
    let sb = alg.tower().s_basis_over_k();
    (0..alg.t())
        .flat_map(|p| {
            let e = alg.basis(p);
            sb.iter().map(move |s| alg.scale(&e, s)).collect::<Vec<_>>()
        })
        .collect()
}

/// Gram entries Tr_{S/K} Trd(σ(β_a)·H_ij·β_b) over the K-basis of A^r, for
/// any ε (the result is ε-symmetric).
pub(crate) fn transfer_any(h: &HermForm) -> Result<QuadForm> {
    let alg = h.algebra();
    let base = Arc::new(alg.base_algebra());
    let kt = base.tower().clone();
    let tab = trd_table(alg);
    let basis = base_basis(alg);
    let sig: Vec<AElem> = basis.iter().map(|x| alg.sigma(x)).collect();
    let n = basis.len();
    let mut gram = BTreeMap::new();
    for (&(i, j), x) in h.entries() {
        let z: Vec<AElem> = basis.iter().map(|y| alg.mul(x, y)).collect();
        for a in 0..n {
            for b in 0..n {
                let mut acc = alg.tower().zero();
                for (p, q, c) in &tab {
                    let (l, r) = (&sig[a][*p], &z[b][*q]);
                    if l.is_zero() || r.is_zero() {
                        continue;
                    }
                    acc = &acc + &(&(l * r) * c);
                }
                let v = acc.trace_to_base();
                if !v.is_zero() {
                    gram.insert((i * n + a, j * n + b), vec![v.to_base(&kt)?]);
                }
            }
        }
    }
    Ok(HermForm::from_entries_unchecked(base, h.epsilon(), h.rank() * n, gram))
}

/// The quadratic form over K of dimension rank·dim_K A obtained from the
/// involution trace form and Tr_{S/K}.
pub fn transfer_to_base(h: &HermForm) -> Result<QuadForm> {
    if h.epsilon() != 1 {
        return Err(Error::UseSkewPath);
    }
    transfer_any(h)
}

/// Tr_{S/K}(h) for a form over (S, ι) with S quadratic over K.
pub fn trace_transfer(h: &HermForm) -> Result<QuadForm> {
    let alg = h.algebra();
    if !alg.is_center_type() || !alg.is_unitary() {
        return Err(Error::AlgebraMismatch("trace transfer needs a form over (S, ι)".into()));
    }
    transfer_any(h)
}

/// ⟪u₁,…,u_ℓ⟫ = ⊗⟨1, uᵢ⟩; entry b is the product of uᵢ over the set bits i of b.
pub fn pfister(base: &Arc<ComponentAlgebra>, units: &[Scalar]) -> Result<QuadForm> {
    if units.iter().any(Scalar::is_zero) {
        return Err(Error::SingularForm("Pfister entries must be units".into()));
    }
    let n = 1usize << units.len();
    let one = base.tower().one();
    let entries: Vec<Scalar> = (0..n)
        .map(|b| {
            units
                .iter()
                .enumerate()
                .filter(|(i, _)| b >> i & 1 == 1)
                .fold(one.clone(), |acc, (_, u)| &acc * u)
        })
        .collect();
    HermForm::diagonal_scalars(base.clone(), 1, &entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Coefficients;
    use crate::arith::{rq, Tower};

    fn diag_values(q: &QuadForm) -> Vec<Scalar> {
        q.diagonal_entries().unwrap().into_iter().map(|x| x[0].clone()).collect()
    }

    #[test]
    fn quaternion_norm_form() {
        let t = Tower::rationals();
        let q = Arc::new(
            ComponentAlgebra::new(0, t.clone(), Coefficients::Quaternion { a: t.int(-1), b: t.int(-1) }, 1, None)
                .unwrap(),
        );
        let h = HermForm::diagonal(q.clone(), 1, vec![q.one()]).unwrap();
        let tr = transfer_to_base(&h).unwrap();
        assert_eq!(diag_values(&tr), vec![t.int(2); 4]);
    }

    #[test]
    fn frobenius_pairing() {
        let t = Tower::rationals();
        let m2 = Arc::new(ComponentAlgebra::new(0, t.clone(), Coefficients::Center, 2, None).unwrap());
        let h = HermForm::diagonal(m2.clone(), 1, vec![m2.one()]).unwrap();
        assert_eq!(diag_values(&transfer_to_base(&h).unwrap()), vec![t.int(1); 4]);
    }

    #[test]
    fn unitary_traces() {
        let gi = Tower::new(None, Some(vec![rq(-1, 1)])).unwrap();
        let c = Arc::new(ComponentAlgebra::new(0, gi.clone(), Coefficients::Center, 1, None).unwrap());
        let h = HermForm::diagonal_scalars(c.clone(), 1, &[gi.int(1)]).unwrap();
        let k = Tower::rationals();
        assert_eq!(diag_values(&trace_transfer(&h).unwrap()), vec![k.int(2), k.int(2)]);
        let h2 = HermForm::diagonal_scalars(c, 1, &[gi.int(1), gi.int(-1)]).unwrap();
        assert_eq!(
            diag_values(&trace_transfer(&h2).unwrap()),
            vec![k.int(2), k.int(2), k.int(-2), k.int(-2)]
        );
        let s2 = Tower::new(None, Some(vec![rq(2, 1)])).unwrap();
        let c2 = Arc::new(ComponentAlgebra::new(0, s2.clone(), Coefficients::Center, 1, None).unwrap());
        let h3 = HermForm::diagonal_scalars(c2, 1, &[s2.int(1)]).unwrap();
        assert_eq!(diag_values(&trace_transfer(&h3).unwrap()), vec![k.int(2), k.int(-4)]);
    }

    #[test]
    fn pfister_expansion() {
        let t = Tower::rationals();
        let base = Arc::new(ComponentAlgebra::new(0, t.clone(), Coefficients::Center, 1, None).unwrap());
        assert_eq!(diag_values(&pfister(&base, &[]).unwrap()), vec![t.int(1)]);
        assert_eq!(diag_values(&pfister(&base, &[t.int(2)]).unwrap()), vec![t.int(1), t.int(2)]);
        assert_eq!(
            diag_values(&pfister(&base, &[t.int(-2), t.int(-3)]).unwrap()),
            vec![t.int(1), t.int(-2), t.int(-3), t.int(6)]
        );
        assert!(matches!(pfister(&base, &[t.int(0)]), Err(Error::SingularForm(_))));
    }

    #[test]
    fn skew_input_rejected() {
        let t = Tower::rationals();
        let base = Arc::new(ComponentAlgebra::new(0, t.clone(), Coefficients::Center, 1, None).unwrap());
        let g = vec![vec![vec![t.int(0)], vec![t.int(1)]], vec![vec![t.int(-1)], vec![t.int(0)]]];
        let h = HermForm::new(base, -1, g).unwrap();
        assert!(matches!(transfer_to_base(&h), Err(Error::UseSkewPath)));
    }
}
