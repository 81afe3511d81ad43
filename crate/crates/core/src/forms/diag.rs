//! Congruence diagonalization over the coefficient division ring.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::form::HermForm;
use super::ops::{morita_flatten, to_canonical};
use crate::algebra::{AElem, ComponentAlgebra};
use crate::error::{Error, Result};

/// ⟨b₁, …, b_r⟩_σ together with T such that T^σ·H·T = diag(b).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagForm {
    pub entries: Vec<AElem>,
    pub witness: Vec<Vec<AElem>>,
    pub epsilon: i8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Diagonalization {
    Diagonal(DiagForm),
    Alternating,
}

impl DiagForm {
    pub fn form(&self, alg: &Arc<ComponentAlgebra>) -> HermForm {
        let gram = self.entries.iter().cloned().enumerate().map(|(i, x)| ((i, i), x)).collect();
        HermForm::from_entries_unchecked(alg.clone(), self.epsilon, self.entries.len(), gram)
    }
}

/// Result of diagonalizing a dense Gram over a ring with involution: columns
/// of `basis` are the new basis vectors, trailing zero entries spanning the
/// radical.
pub(crate) struct RawDiag {
    pub entries: Vec<AElem>,
    pub basis: Vec<Vec<AElem>>,
}

struct Work<'a> {
    d: &'a ComponentAlgebra,
    eps: i8,
    c: Vec<Vec<AElem>>,
    b: Vec<Vec<AElem>>,
    active: Vec<usize>,
}

impl<'a> Work<'a> {
    fn new(d: &'a ComponentAlgebra, eps: i8, gram: &[Vec<AElem>]) -> Self {
        let n = gram.len();
        let b = (0..n)
            .map(|i| (0..n).map(|j| if i == j { d.one() } else { d.zero() }).collect())
            .collect();
        Work { d, eps, c: gram.to_vec(), b, active: (0..n).collect() }
    }

    fn conj(&self, x: &AElem) -> AElem {
        self.d.theta_t(x)
    }

    /// ε·ι(x): the (j,i) entry from the (i,j) entry.
    fn mirror(&self, x: &AElem) -> AElem {
        let c = self.conj(x);
        if self.eps == 1 {
            c
        } else {
            self.d.neg(&c)
        }
    }

    /// Replaces basis vector i by B_i + B_j·μ and updates the Gram.
    fn shear(&mut self, i: usize, j: usize, mu: &AElem) {
        let d = self.d;
        let n = self.c.len();
        for row in 0..n {
            let add = d.mul(&self.b[row][j], mu);
            self.b[row][i] = d.add(&self.b[row][i], &add);
        }
        let mu_c = self.conj(mu);
        let cii = {
            let t1 = d.mul(&self.c[i][j], mu);
            let t2 = d.mul(&mu_c, &self.c[j][i]);
            let t3 = d.mul(&d.mul(&mu_c, &self.c[j][j]), mu);
            d.add(&d.add(&self.c[i][i], &t1), &d.add(&t2, &t3))
        };
        for l in 0..n {
            if l == i {
                continue;
            }
            let v = d.add(&self.c[i][l], &d.mul(&mu_c, &self.c[j][l]));
            self.c[l][i] = self.mirror(&v);
            self.c[i][l] = v;
        }
        self.c[i][i] = cii;
    }

    fn pivot_value(&self, i: usize, j: usize, mu: &AElem) -> AElem {
        let d = self.d;
        let x = d.mul(&self.c[i][j], mu);
        let mut v = d.add(&x, &self.mirror(&x));
        v = d.add(&v, &self.c[i][i]);
        d.add(&v, &d.mul(&d.mul(&self.conj(mu), &self.c[j][j]), mu))
    }

    /// Basis of D over K, used to build pivots e_i + e_j·μ.
    fn mus(&self) -> Vec<AElem> {
        let d = self.d;
        let mut out = Vec::new();
        for p in 0..d.t() {
            for s in d.tower().s_basis_over_k() {
                out.push(d.scale(&d.basis(p), &s));
            }
        }
        out
    }

    /// Makes C_ii a unit for some active i and returns it. Over a split
    /// quaternion algebra nonzero entries can be zero divisors.
    fn find_pivot(&mut self, rng: &mut ChaCha8Rng) -> Option<usize> {
        let d = self.d;
        if let Some(&i) = self.active.iter().find(|&&i| d.is_unit(&self.c[i][i])) {
            return Some(i);
        }
        let mus = self.mus();
        let act = self.active.clone();
        for (a, &i) in act.iter().enumerate() {
            for &j in &act[a + 1..] {
                if d.is_zero(&self.c[i][j]) {
                    continue;
                }
                for mu in &mus {
                    if d.is_unit(&self.pivot_value(i, j, mu)) {
                        self.shear(i, j, mu);
                        return Some(i);
                    }
                }
            }
        }
        // Fallback: random combinations, needed only when D is split.
        if act.len() < 2 {
            return None;
        }
        for _ in 0..64 {
            for (a, &i) in act.iter().enumerate() {
                let j = act[(a + 1) % act.len()];
                let mu: AElem = (0..d.t())
                    .map(|_| d.tower().int(rng.gen_range(-3..=3)))
                    .collect();
                if d.is_unit(&self.pivot_value(i, j, &mu)) {
                    self.shear(i, j, &mu);
                    return Some(i);
                }
            }
        }
        None
    }

    /// Removes pivot v from the active set and clears its row and column.
    fn eliminate(&mut self, v: usize) -> Result<()> {
        let d = self.d;
        let n = self.c.len();
        let inv = d.inv(&self.c[v][v])?;
        self.active.retain(|&x| x != v);
        let act = self.active.clone();
        let coefs: Vec<(usize, AElem)> = act
            .iter()
            .map(|&l| (l, d.mul(&inv, &self.c[v][l])))
            .filter(|(_, c)| !d.is_zero(c))
            .collect();
        for (l, cl) in &coefs {
            for row in 0..n {
                let sub = d.mul(&self.b[row][v], cl);
                self.b[row][*l] = d.sub(&self.b[row][*l], &sub);
            }
        }
        // C'_lm = C_lm − C_lv·c_m
        for &l in &act {
            for (m, cm) in &coefs {
                let sub = d.mul(&self.c[l][v], cm);
                self.c[l][*m] = d.sub(&self.c[l][*m], &sub);
            }
        }
        for &l in &act {
            self.c[l][v] = d.zero();
            self.c[v][l] = d.zero();
        }
        Ok(())
    }
}

/// Hermitian congruence diagonalization over (D, ϑ). With `allow_singular`
/// the radical is split off as trailing zero entries.
pub(crate) fn diagonalize_dense(
    d: &ComponentAlgebra,
    eps: i8,
    gram: &[Vec<AElem>],
    allow_singular: bool,
) -> Result<Option<RawDiag>> {
    let mut w = Work::new(d, eps, gram);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut order = Vec::new();
    let mut entries = Vec::new();
    while !w.active.is_empty() {
        let all_zero = w
            .active
            .iter()
            .all(|&i| w.active.iter().all(|&j| d.is_zero(&w.c[i][j])));
        if all_zero {
            if !allow_singular {
                return Err(Error::SingularForm("degenerate gram matrix".into()));
            }
            break;
        }
        let Some(v) = w.find_pivot(&mut rng) else {
            return Ok(None);
        };
        entries.push(w.c[v][v].clone());
        order.push(v);
        w.eliminate(v)?;
    }
    let radical = w.active.len();
    order.extend(w.active.iter().copied());
    entries.extend((0..radical).map(|_| d.zero()));
    let n = gram.len();
    let basis = (0..n)
        .map(|row| order.iter().map(|&c| w.b[row][c].clone()).collect())
        .collect();
    Ok(Some(RawDiag { entries, basis }))
}

/// Symplectic basis of a nonsingular alternating form over a field (D = K):
/// columns e₁, f₁, e₂, f₂, … with h(e, f) = 1.
pub(crate) fn symplectic_basis(d: &ComponentAlgebra, gram: &[Vec<AElem>]) -> Result<Vec<Vec<AElem>>> {
    let n = gram.len();
    let mut c = gram.to_vec();
    let mut b: Vec<Vec<AElem>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { d.one() } else { d.zero() }).collect())
        .collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut order = Vec::new();
    while !active.is_empty() {
        let Some((i, j)) = active
            .iter()
            .flat_map(|&i| active.iter().map(move |&j| (i, j)))
            .find(|&(i, j)| i < j && !d.is_zero(&c[i][j]))
        else {
            return Err(Error::SingularForm("degenerate alternating form".into()));
        };
        // f = B_j / C_ij
        let s = d.inv(&c[i][j])?;
        for row in 0..n {
            b[row][j] = d.mul(&b[row][j], &s);
        }
        for l in 0..n {
            c[j][l] = d.mul(&s, &c[j][l]);
            c[l][j] = d.mul(&c[l][j], &s);
        }
        active.retain(|&x| x != i && x != j);
        // e_l' = e_l + e·α + f·β, α = h(f, e_l), β = −h(e, e_l)
        let coefs: Vec<(usize, AElem, AElem)> = active
            .iter()
            .map(|&l| (l, c[j][l].clone(), d.neg(&c[i][l])))
            .collect();
        for (l, al, be) in &coefs {
            for row in 0..n {
                let add = d.add(&d.mul(&b[row][i], al), &d.mul(&b[row][j], be));
                b[row][*l] = d.add(&b[row][*l], &add);
            }
        }
        let ce: Vec<AElem> = (0..n).map(|m| c[i][m].clone()).collect();
        let cf: Vec<AElem> = (0..n).map(|m| c[j][m].clone()).collect();
        for (l, al, be) in &coefs {
            for &m in &active {
                let add = d.add(&d.mul(al, &ce[m]), &d.mul(be, &cf[m]));
                c[*l][m] = d.add(&c[*l][m], &add);
            }
        }
        for &l in &active {
            for x in [i, j] {
                c[l][x] = d.zero();
                c[x][l] = d.zero();
            }
        }
        order.push(i);
        order.push(j);
    }
    Ok((0..n)
        .map(|row| order.iter().map(|&col| b[row][col].clone()).collect())
        .collect())
}

/// Diagonal entries over (D, ϑ) of the canonically scaled, flattened form,
/// with zeros for the radical; `entries` is `None` when that form is
/// alternating over K.
pub(crate) struct FlatDiagonal {
    pub d: Arc<ComponentAlgebra>,
    pub epsilon: i8,
    pub entries: Option<Vec<AElem>>,
}

pub(crate) fn flat_diagonal(h: &HermForm) -> Result<FlatDiagonal> {
    let canon = to_canonical(h)?;
    let eps = canon.epsilon();
    let flat = morita_flatten(&canon)?;
    let d = flat.algebra().clone();
    if d.dd() == 1 && !d.is_unitary() && eps == -1 {
        return Ok(FlatDiagonal { d, epsilon: eps, entries: None });
    }
    let mut entries = Vec::with_capacity(flat.rank());
    for block in flat.blocks() {
        if block.len() == 1 {
            entries.push(flat.entry(block[0], block[0]));
            continue;
        }
        let sub = flat.restrict(&block).dense_gram();
        let raw = diagonalize_dense(&d, eps, &sub, true)?
            .ok_or_else(|| Error::SingularForm("no unit pivot in a degenerate block".into()))?;
        entries.extend(raw.entries);
    }
    Ok(FlatDiagonal { d, epsilon: eps, entries: Some(entries) })
}

/// Diagonalizes a nonsingular form: returns ⟨b₁,…,b_r⟩_σ with b_j = u·B_j,
/// B_j ∈ M_k(D) block diagonal, or `Alternating` when the scaled form is
/// alternating over M_k(K) with k odd.
pub fn diagonalize(h: &HermForm) -> Result<Diagonalization> {
    let alg = h.algebra();
    if let Some(diag) = h.diagonal_entries() {
        if diag.iter().all(|x| alg.is_unit(x)) {
            let r = h.rank();
            let witness = identity(alg, r);
            return Ok(Diagonalization::Diagonal(DiagForm { entries: diag, witness, epsilon: h.epsilon() }));
        }
    }
    if !h.is_nonsingular() {
        return Err(Error::SingularForm("gram matrix is not invertible".into()));
    }
    let canon = to_canonical(h)?;
    let eps = canon.epsilon();
    let flat = morita_flatten(&canon)?;
    let d = flat.algebra().clone();
    let k = alg.matrix_size();
    let n = flat.rank();
    let alternating = d.dd() == 1 && !d.is_unitary() && eps == -1;
    if alternating && k % 2 == 1 {
        return Ok(Diagonalization::Alternating);
    }
    // Blockwise diagonalization; entries and basis vectors in global indices.
    let mut entries: Vec<AElem> = Vec::with_capacity(n);
    let mut columns: Vec<BTreeMap<usize, AElem>> = Vec::with_capacity(n);
    for block in flat.blocks() {
        let sub = flat.restrict(&block).dense_gram();
        let basis = if alternating {
            let b = symplectic_basis(&d, &sub)?;
            for _ in 0..block.len() / 2 {
                entries.push(d.one());
                entries.push(d.neg(&d.one()));
            }
            b
        } else {
            let raw = diagonalize_dense(&d, eps, &sub, false)?
                .ok_or_else(|| Error::Internal("no pivot for a non-alternating form".into()))?;
            entries.extend(raw.entries);
            raw.basis
        };
        for c in 0..block.len() {
            let col = block
                .iter()
                .enumerate()
                .filter(|(row, _)| !d.is_zero(&basis[*row][c]))
                .map(|(row, &g)| (g, basis[row][c].clone()))
                .collect();
            columns.push(col);
        }
    }
    // Regroup into r diagonal (or J-block) entries of M_k(D).
    let r = h.rank();
    let mut blocks_b = Vec::with_capacity(r);
    for j in 0..r {
        let mut bj = alg.zero();
        for a in 0..k {
            let e = &entries[j * k + a];
            if alternating {
                // entries hold +1 at e positions and −1 at f positions; the
                // Gram of (e, f) is [[0, 1], [−1, 0]].
                if a % 2 == 0 {
                    alg.set_entry(&mut bj, a, a + 1, &d.one());
                    alg.set_entry(&mut bj, a + 1, a, &d.neg(&d.one()));
                }
            } else {
                alg.set_entry(&mut bj, a, a, e);
            }
        }
        blocks_b.push(bj);
    }
    let mut witness = vec![vec![alg.zero(); r]; r];
    for (c, col) in columns.iter().enumerate() {
        let (j, b) = (c / k, c % k);
        for (&g, v) in col {
            let (i, a) = (g / k, g % k);
            alg.set_entry(&mut witness[i][j], a, b, v);
        }
    }
    let b: Vec<AElem> = blocks_b.iter().map(|x| alg.mul(alg.inner_unit(), x)).collect();
    let out = DiagForm { entries: b, witness, epsilon: h.epsilon() };
    verify_witness(h, &out)?;
    Ok(Diagonalization::Diagonal(out))
}

fn identity(alg: &ComponentAlgebra, r: usize) -> Vec<Vec<AElem>> {
    (0..r)
        .map(|i| (0..r).map(|j| if i == j { alg.one() } else { alg.zero() }).collect())
        .collect()
}

/// Checks T^σ·H·T = diag(entries) exactly.
pub fn verify_witness(h: &HermForm, dg: &DiagForm) -> Result<()> {
    let alg = h.algebra();
    let r = h.rank();
    let t = &dg.witness;
    // HT
    let mut ht: Vec<Vec<AElem>> = vec![vec![alg.zero(); r]; r];
    for (&(i, l), x) in h.entries() {
        for j in 0..r {
            if alg.is_zero(&t[l][j]) {
                continue;
            }
            ht[i][j] = alg.add(&ht[i][j], &alg.mul(x, &t[l][j]));
        }
    }
    let st: Vec<Vec<AElem>> = (0..r)
        .map(|i| (0..r).map(|l| alg.sigma(&t[l][i])).collect())
        .collect();
    for i in 0..r {
        for j in 0..r {
            let mut s = alg.zero();
            for l in 0..r {
                if alg.is_zero(&st[i][l]) || alg.is_zero(&ht[l][j]) {
                    continue;
                }
                s = alg.add(&s, &alg.mul(&st[i][l], &ht[l][j]));
            }
            let expect = if i == j { dg.entries[i].clone() } else { alg.zero() };
            if s != expect {
                return Err(Error::Internal(format!("diagonalization witness fails at ({i},{j})")));
            }
        }
    }
    Ok(())
}
