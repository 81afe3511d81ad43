//! Signatures of ε-hermitian forms at orderings of the base.
//!
//! Convention: a form is scaled to the canonical involution and flattened to
//! (D, ϑ); a rank-one ⟨d⟩ over D with ε = 1 contributes
//! sign_P(transfer ⟨d⟩)/n_P. Skew entries are first made hermitian: by λ in
//! the unitary case, by a pure quaternion s with Nrd(s) >_P 0 otherwise (the
//! skew case over D = K is alternating and contributes 0).

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::algebra::{AElem, ComponentAlgebra, Ordering};
use crate::arith::rq;
use crate::error::{Error, Result};
use crate::forms::{diagonalize_dense, flat_diagonal, transfer_any, HermForm, ProductForm, QuadForm};

/// Signature at every ordering, keyed "component/embedding".
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SignatureTable(pub BTreeMap<Ordering, i64>);

impl SignatureTable {
    pub fn get(&self, p: &Ordering) -> Option<i64> {
        self.0.get(p).copied()
    }

    pub fn is_zero(&self) -> bool {
        self.0.values().all(|&v| v == 0)
    }
}

impl Serialize for SignatureTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_map(self.0.iter().map(|(k, v)| (k.key(), v)))
    }
}

/// m_P(A, σ) with an element of Sym(A^×, σ) achieving it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxSigCertificate {
    pub m: usize,
    pub element: Option<AElem>,
}

/// Seed and candidate budget for randomized searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Search {
    pub seed: u64,
    pub budget: usize,
}

impl Default for Search {
    fn default() -> Self {
        Search { seed: 0, budget: 2000 }
    }
}

fn check_center_form(q: &HermForm) -> Result<()> {
    if !q.algebra().is_center_type() {
        return Err(Error::AlgebraMismatch("expected a form over the center or the base".into()));
    }
    if q.epsilon() != 1 {
        return Err(Error::AlgebraMismatch("expected a hermitian (ε = 1) form".into()));
    }
    Ok(())
}

/// Signs at P of a diagonalization of a hermitian form over (K, id) or
/// (S, ι), one per coordinate (0 on the radical).
fn diagonal_signs(q: &HermForm, p: &Ordering) -> Result<Vec<i8>> {
    check_center_form(q)?;
    q.algebra().check_ordering(p)?;
    let d = q.algebra();
    let mut out = Vec::with_capacity(q.rank());
    for block in q.blocks() {
        let entries = if block.len() == 1 {
            vec![q.entry(block[0], block[0])]
        } else {
            diagonalize_dense(d, 1, &q.restrict(&block).dense_gram(), true)?
                .ok_or_else(|| Error::Internal("no pivot over a field".into()))?
                .entries
        };
        for e in entries {
            out.push(e[0].sign_at(p.embedding_sign)?);
        }
    }
    Ok(out)
}

/// Sylvester signature of a quadratic form over (K, id) (the radical is
/// ignored).
pub fn quad_signature(q: &QuadForm, p: &Ordering) -> Result<i64> {
    if q.algebra().tower().has_lambda() {
        return Err(Error::AlgebraMismatch("expected a form over the base field".into()));
    }
    Ok(diagonal_signs(q, p)?.iter().map(|&s| i64::from(s)).sum())
}

/// Whether a hermitian form over (K, id) or (S, ι) is positive semidefinite
/// at P.
pub fn is_psd(phi: &HermForm, p: &Ordering) -> Result<bool> {
    Ok(diagonal_signs(phi, p)?.iter().all(|&s| s >= 0))
}

/// sign_P of the transfer of ⟨x⟩ over (D, τ), ε = 1, divided by n_P.
fn rank_one_signature(d: &Arc<ComponentAlgebra>, x: AElem, p: &Ordering) -> Result<i64> {
    let h = HermForm::diagonal(d.clone(), 1, vec![x])?;
    let s = quad_signature(&transfer_any(&h)?, p)?;
    let n = d.transfer_normalization() as i64;
    if s % n != 0 {
        return Err(Error::Internal(format!("transfer signature {s} not divisible by {n}")));
    }
    Ok(s / n)
}

/// The first pure quaternion basis element s with Nrd(s) >_P 0, i.e.
/// s² <_P 0. Nrd(i) = −a, Nrd(j) = −b, Nrd(k) = ab.
fn positive_pure(d: &ComponentAlgebra, p: &Ordering) -> Result<Option<usize>> {
    let (a, b) = d.quaternion().expect("quaternion coefficients");
    let e = p.embedding_sign;
    let (sa, sb) = (a.sign_at(e)?, b.sign_at(e)?);
    Ok([(1, -sa), (2, -sb), (3, sa * sb)].into_iter().find(|&(_, s)| s > 0).map(|(q, _)| q))
}

/// Signature at P of the rank-one form ⟨x⟩ with the given ε over (D, ϑ).
fn entry_signature(d: &Arc<ComponentAlgebra>, eps: i8, x: &AElem, p: &Ordering) -> Result<i64> {
    if d.is_zero(x) {
        return Ok(0);
    }
    if eps == 1 {
        return rank_one_signature(d, x.clone(), p);
    }
    if d.is_unitary() {
        let lambda = d.tower().lambda().expect("unitary center");
        return rank_one_signature(d, d.scale(x, &lambda), p);
    }
    if d.dd() == 1 {
        return Ok(0);
    }
    let Some(q) = positive_pure(d, p)? else {
        return Ok(0);
    };
    let s = d.basis(q);
    let s_inv = d.inv(&s)?;
    let twisted = Arc::new(d.with_inner(Some(s_inv.clone()))?);
    rank_one_signature(&twisted, d.mul(&s_inv, x), p)
}

/// sign_P h under the canonical convention. Singular forms are measured on
/// their nonsingular part.
pub fn signature(h: &HermForm, p: &Ordering) -> Result<i64> {
    h.algebra().check_ordering(p)?;
    let fd = flat_diagonal(h)?;
    let Some(entries) = fd.entries else {
        return Ok(0);
    };
    entries
        .iter()
        .map(|x| entry_signature(&fd.d, fd.epsilon, x, p))
        .sum()
}

pub fn signature_table(h: &HermForm) -> Result<SignatureTable> {
    let mut t = BTreeMap::new();
    for p in h.algebra().orderings() {
        t.insert(p, signature(h, &p)?);
    }
    Ok(SignatureTable(t))
}

/// Componentwise table over a product base.
pub fn product_signature_table(h: &ProductForm) -> Result<SignatureTable> {
    let mut t = BTreeMap::new();
    for part in &h.parts {
        t.extend(signature_table(part)?.0);
    }
    Ok(SignatureTable(t))
}

/// sign_P of transfer_to_base(h) itself, without scaling or diagonalizing.
/// Over a canonical involution it equals n_P·signature(h, P).
pub fn trace_form_signature(h: &HermForm, p: &Ordering) -> Result<i64> {
    if h.epsilon() != 1 {
        return Err(Error::UseSkewPath);
    }
    quad_signature(&transfer_any(h)?, p)
}

/// An element a ∈ Sym(A^×, σ) with signature(⟨a⟩_σ, P) = deg A, or m = 0 at
/// nil orderings.
pub fn max_sig_element(alg: &Arc<ComponentAlgebra>, p: &Ordering, search: &Search) -> Result<MaxSigCertificate> {
    if alg.is_nil(p)? {
        return Ok(MaxSigCertificate { m: 0, element: None });
    }
    let deg = alg.deg() as i64;
    let attempt = |a: AElem| -> Result<Option<AElem>> {
        if alg.sigma(&a) != a || !alg.is_unit(&a) {
            return Ok(None);
        }
        let s = signature(&HermForm::diagonal(alg.clone(), 1, vec![a.clone()])?, p)?;
        Ok(if s == deg {
            Some(a)
        } else if s == -deg {
            Some(alg.neg(&a))
        } else {
            None
        })
    };
    let found = |a: AElem| Ok(MaxSigCertificate { m: deg as usize, element: Some(a) });
    let u = alg.inner_unit().clone();
    if alg.delta() == 1 {
        return match attempt(u)? {
            Some(a) => found(a),
            None => Err(Error::Internal("⟨u⟩ does not have maximal signature".into())),
        };
    }
    let mut fixed = Vec::new();
    if let Some(lambda) = alg.tower().lambda() {
        fixed.push(alg.scale(&u, &lambda));
    }
    for q in 0..alg.t() {
        let e = alg.basis(q);
        fixed.push(alg.add(&e, &alg.sigma(&e)));
        fixed.push(alg.mul(&alg.sigma(&e), &e));
    }
    for a in fixed {
        if let Some(a) = attempt(a)? {
            return found(a);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(search.seed);
    let tower = alg.tower().clone();
    for round in 0..search.budget {
        let x = (0..alg.t())
            .map(|_| tower.scalar((0..tower.sdim()).map(|_| rq(rng.gen_range(-3..=3), 1)).collect()))
            .collect::<Result<AElem>>()?;
        let cand = if round % 2 == 0 { alg.add(&x, &alg.sigma(&x)) } else { alg.mul(&alg.sigma(&x), &x) };
        if let Some(a) = attempt(cand)? {
            return found(a);
        }
    }
    Err(Error::SearchBudgetExceeded(search.budget))
}
