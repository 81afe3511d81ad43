//! Elements of A ⊗_S A and the Goldman element.

use std::collections::BTreeMap;

use super::component::{AElem, ComponentAlgebra};
use crate::arith::Scalar;
use crate::error::{Error, Result};
use crate::linalg::{self, UnionFind};

/// Σ c_pq e_p ⊗ e_q over the fixed S-basis of A.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TensorElement {
    pub terms: BTreeMap<(usize, usize), Scalar>,
}

impl TensorElement {
    fn push(&mut self, key: (usize, usize), v: Scalar) {
        if v.is_zero() {
            return;
        }
        let e = self.terms.entry(key).or_insert_with(|| v.zero_like());
        *e = &*e + &v;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn simple(a: &AElem, b: &AElem) -> TensorElement {
        let mut out = TensorElement::default();
        for (p, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (q, y) in b.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                out.push((p, q), x * y);
            }
        }
        out
    }

    pub fn one(alg: &ComponentAlgebra) -> TensorElement {
        TensorElement::simple(&alg.one(), &alg.one())
    }

    pub fn mul(&self, alg: &ComponentAlgebra, o: &TensorElement) -> TensorElement {
        let mut out = TensorElement::default();
        for (&(p, q), x) in &self.terms {
            for (&(r, s), y) in &o.terms {
                let (Some((c1, i1)), Some((c2, i2))) = (alg.basis_mul(p, r), alg.basis_mul(q, s)) else {
                    continue;
                };
                out.push((i1, i2), &(&(x * y) * &c1) * &c2);
            }
        }
        out
    }

    /// (σ ⊗ σ)(self), using ι-semilinearity on coefficients.
    pub fn sigma_sigma(&self, alg: &ComponentAlgebra) -> TensorElement {
        let images: Vec<AElem> = (0..alg.t()).map(|p| alg.sigma(&alg.basis(p))).collect();
        let mut out = TensorElement::default();
        for (&(p, q), c) in &self.terms {
            let c = c.iota();
            for (a, x) in images[p].iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                for (b, y) in images[q].iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                    out.push((a, b), &(&c * x) * y);
                }
            }
        }
        out
    }

    /// The sandwich map a ↦ Σ c_pq e_p a e_q.
    pub fn sandwich(&self, alg: &ComponentAlgebra, a: &AElem) -> AElem {
        let mut out = alg.zero();
        for (&(p, q), c) in &self.terms {
            let left = alg.scale(&alg.basis(p), c);
            let prod = alg.mul(&alg.mul(&left, a), &alg.basis(q));
            out = alg.add(&out, &prod);
        }
        out
    }

    pub fn is_one(&self, alg: &ComponentAlgebra) -> bool {
        *self == TensorElement::one(alg)
    }
}

/// Solves Σ g_pq e_p e_r e_q = Trd(e_r)·1 for all basis elements e_r, splitting
/// the sparse system into connected blocks, and checks the identities
/// g² = 1 and (σ⊗σ)(g) = g.
pub fn goldman_element(alg: &ComponentAlgebra) -> Result<TensorElement> {
    let t = alg.t();
    let tower = alg.tower().clone();
    let one = alg.one();
    // equation (r, coordinate) -> list of (unknown p*t+q, coefficient)
    let mut eqs: BTreeMap<(usize, usize), Vec<(usize, Scalar)>> = BTreeMap::new();
    for p in 0..t {
        for r in 0..t {
            let Some((c1, pr)) = alg.basis_mul(p, r) else { continue };
            for q in 0..t {
                let Some((c2, idx)) = alg.basis_mul(pr, q) else { continue };
                eqs.entry((r, idx)).or_default().push((p * t + q, &c1 * &c2));
            }
        }
    }
    let rhs = |r: usize, idx: usize| -> Scalar {
        let tr = alg.trd(&alg.basis(r));
        &tr * &one[idx]
    };
    for r in 0..t {
        for idx in 0..t {
            if !eqs.contains_key(&(r, idx)) && !rhs(r, idx).is_zero() {
                return Err(Error::Internal("sandwich system is inconsistent".into()));
            }
        }
    }
    let mut uf = UnionFind::new(t * t);
    for terms in eqs.values() {
        for w in terms.windows(2) {
            uf.union(w[0].0, w[1].0);
        }
    }
    let mut solution = vec![tower.zero(); t * t];
    let mut by_block: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for (&key, terms) in &eqs {
        let root = uf.find(terms[0].0);
        by_block.entry(root).or_default().push(key);
    }
    let groups = uf.groups();
    let mut group_of = vec![0usize; t * t];
    for (g, members) in groups.iter().enumerate() {
        for &m in members {
            group_of[m] = g;
        }
    }
    for (root, keys) in by_block {
        let members = &groups[group_of[root]];
        let pos: BTreeMap<usize, usize> = members.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let mut mat = Vec::with_capacity(keys.len());
        let mut b = Vec::with_capacity(keys.len());
        for key in keys {
            let mut row = vec![tower.zero(); members.len()];
            for (u, c) in &eqs[&key] {
                let i = pos[u];
                row[i] = &row[i] + c;
            }
            mat.push(row);
            b.push(rhs(key.0, key.1));
        }
        let x = linalg::solve(&mat, &b)
            .ok_or_else(|| Error::Internal("sandwich system is singular".into()))?;
        for (i, &m) in members.iter().enumerate() {
            solution[m] = x[i].clone();
        }
    }
    let mut g = TensorElement::default();
    for (u, v) in solution.into_iter().enumerate() {
        g.push((u / t, u % t), v);
    }
    if !g.mul(alg, &g).is_one(alg) {
        return Err(Error::Internal("Goldman element does not square to 1".into()));
    }
    if g.sigma_sigma(alg) != g {
        return Err(Error::Internal("Goldman element is not σ⊗σ-fixed".into()));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::component::Coefficients;
    use crate::arith::{Rational, Tower};

    #[test]
    fn matrix_goldman_is_the_flip() {
        let t = Tower::rationals();
        let m2 = ComponentAlgebra::new(0, t.clone(), Coefficients::Center, 2, None).unwrap();
        let g = goldman_element(&m2).unwrap();
        // Σ e_ij ⊗ e_ji
        let mut expect = TensorElement::default();
        for i in 0..2 {
            for j in 0..2 {
                expect.push((m2.idx(i, j, 0), m2.idx(j, i, 0)), t.one());
            }
        }
        assert_eq!(g, expect);
    }

    #[test]
    fn quaternion_goldman_formula() {
        let t = Tower::rationals();
        let (a, b) = (t.int(-1), t.int(2));
        let q = ComponentAlgebra::new(0, t.clone(), Coefficients::Quaternion { a: a.clone(), b: b.clone() }, 1, None)
            .unwrap();
        let g = goldman_element(&q).unwrap();
        let half = t.rational(Rational::new(1.into(), 2.into()));
        let mut expect = TensorElement::default();
        expect.push((0, 0), half.clone());
        expect.push((1, 1), &half * &a.inv().unwrap());
        expect.push((2, 2), &half * &b.inv().unwrap());
        expect.push((3, 3), -&(&half * &(&a * &b).inv().unwrap()));
        assert_eq!(g, expect);
    }

    #[test]
    fn field_goldman_is_one() {
        let t = Tower::rationals();
        let f = ComponentAlgebra::new(0, t, Coefficients::Center, 1, None).unwrap();
        assert!(goldman_element(&f).unwrap().is_one(&f));
    }
}
