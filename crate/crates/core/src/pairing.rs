//! The involution trace form, the pairing h₁ * h₂ into forms over the
//! center, and the Sylvester-type constructions built on it.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{AElem, ComponentAlgebra, Ordering};
use crate::arith::{rq, Scalar};
use crate::error::{Error, Result};
use crate::forms::{
    diagonalize, diagonalize_dense, orth_sum_all, pfister, tensor_quadratic, Diagonalization, HermForm, QuadForm,
};
use crate::signature::{is_psd, max_sig_element, signature, signature_table, Search};
use crate::witt::{is_hyperbolic, witt_equal, WittDecision};

/// The algebra (S, ι) that pairings land in.
fn target(alg: &ComponentAlgebra) -> Arc<ComponentAlgebra> {
    Arc::new(alg.center_algebra())
}

/// φ_{b,c}(x, y) = Trd(σ(x)·b·y·c) on the S-basis of A. For σ(b) = ε_b·b and
/// σ(c) = ε_c·c the result is ε_b·ε_c-hermitian over (S, ι).
pub fn phi_bc(alg: &Arc<ComponentAlgebra>, b: &AElem, c: &AElem) -> Result<HermForm> {
    let eb = alg
        .symmetry_sign(b)
        .ok_or_else(|| Error::InvalidEntry("b is neither symmetric nor skew".into()))?;
    let ec = alg
        .symmetry_sign(c)
        .ok_or_else(|| Error::InvalidEntry("c is neither symmetric nor skew".into()))?;
    if !alg.is_unit(b) || !alg.is_unit(c) {
        return Err(Error::InvalidEntry("b and c must be units".into()));
    }
    let t = alg.t();
    let right: Vec<AElem> = (0..t).map(|q| alg.mul(&alg.mul(b, &alg.basis(q)), c)).collect();
    let left: Vec<AElem> = (0..t).map(|p| alg.sigma(&alg.basis(p))).collect();
    let s = target(alg);
    let mut gram = std::collections::BTreeMap::new();
    for (p, l) in left.iter().enumerate() {
        for (q, r) in right.iter().enumerate() {
            let v = alg.trd(&alg.mul(l, r));
            if !v.is_zero() {
                gram.insert((p, q), vec![v]);
            }
        }
    }
    HermForm::from_entries(s, eb * ec, t, gram)
}

/// T_σ(x, y) = Trd(σ(x)·y), i.e. φ_{1,1}.
pub fn involution_trace_form(alg: &Arc<ComponentAlgebra>) -> Result<HermForm> {
    phi_bc(alg, &alg.one(), &alg.one())
}

fn diagonal_entries(h: &HermForm) -> Result<Vec<AElem>> {
    match diagonalize(h)? {
        Diagonalization::Diagonal(d) => Ok(d.entries),
        Diagonalization::Alternating => Err(Error::NotDiagonalizable),
    }
}

/// h₁ * h₂ = ⊥_{i,j} φ_{bᵢ,cⱼ} for diagonalizations ⟨b⟩ of h₁ and ⟨c⟩ of h₂,
/// with i the outer index.
pub fn star(h1: &HermForm, h2: &HermForm) -> Result<HermForm> {
    if h1.algebra() != h2.algebra() {
        return Err(Error::AlgebraMismatch("pairing needs forms over the same algebra".into()));
    }
    let alg = h1.algebra();
    let (b, c) = (diagonal_entries(h1)?, diagonal_entries(h2)?);
    if b.is_empty() || c.is_empty() {
        return Ok(HermForm::zero_form(target(alg), h1.epsilon() * h2.epsilon()));
    }
    let mut blocks = Vec::with_capacity(b.len() * c.len());
    for bi in &b {
        for cj in &c {
            blocks.push(phi_bc(alg, bi, cj)?);
        }
    }
    orth_sum_all(&blocks)
}

/// Diagonal entries over K of a hermitian form over (K, id) or (S, ι).
fn center_diagonal(phi: &HermForm) -> Result<Vec<Scalar>> {
    let d = phi.algebra();
    let base = d.tower().base();
    let mut out = Vec::with_capacity(phi.rank());
    for block in phi.blocks() {
        let entries = if block.len() == 1 {
            vec![phi.entry(block[0], block[0])]
        } else {
            diagonalize_dense(d, 1, &phi.restrict(&block).dense_gram(), false)?
                .ok_or_else(|| Error::Internal("no pivot over a field".into()))?
                .entries
        };
        for e in entries {
            out.push(e[0].to_base(&base)?);
        }
    }
    Ok(out)
}

/// +1 or −1 when every diagonal entry of φ has that sign at P.
fn definiteness(values: &[Scalar], p: &Ordering) -> Result<Option<i8>> {
    let signs = values.iter().map(|v| v.sign_at(p.embedding_sign)).collect::<Result<Vec<_>>>()?;
    Ok(if signs.iter().all(|&s| s > 0) {
        Some(1)
    } else if signs.iter().all(|&s| s < 0) {
        Some(-1)
    } else {
        None
    })
}

fn scalar_form(base: &Arc<ComponentAlgebra>, values: &[Scalar]) -> Result<QuadForm> {
    HermForm::diagonal_scalars(base.clone(), 1, values)
}

/// The output of the constructive law of inertia at P:
/// ⟨w⟩ ⊗ h ≅ ⟨u⟩ ⊗ ⟨c⟩_σ ⊥ ⟨−v⟩ ⊗ ⟨c⟩_σ with all entries positive at P.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SylvesterData {
    pub w: Vec<Scalar>,
    pub u: Vec<Scalar>,
    pub v: Vec<Scalar>,
    pub c: AElem,
    pub delta: i8,
    /// Witt equality of the two sides, when the base is ℚ.
    pub witt_check: Option<WittDecision>,
    pub signatures_agree: bool,
}

fn check_maximal(alg: &Arc<ComponentAlgebra>, c: &AElem, p: &Ordering) -> Result<()> {
    if alg.sigma(c) != *c || !alg.is_unit(c) {
        return Err(Error::InvalidEntry("c must be a symmetric unit".into()));
    }
    let s = signature(&HermForm::diagonal(alg.clone(), 1, vec![c.clone()])?, p)?;
    if s != alg.deg() as i64 {
        return Err(Error::NotMaximal(format!("signature of ⟨c⟩ is {s}, not {}", alg.deg())));
    }
    Ok(())
}

pub fn sylvester_decompose(h: &HermForm, c: &AElem, p: &Ordering) -> Result<SylvesterData> {
    let alg = h.algebra();
    if h.epsilon() != 1 {
        return Err(Error::UseSkewPath);
    }
    if alg.is_nil(p)? {
        return Err(Error::NilOrdering);
    }
    check_maximal(alg, c, p)?;
    let cc = HermForm::diagonal(alg.clone(), 1, vec![c.clone()])?;
    let wdiag = center_diagonal(&phi_bc(alg, c, c)?)?;
    let delta = definiteness(&wdiag, p)?
        .ok_or_else(|| Error::Internal("⟨c⟩ * ⟨c⟩ is not definite at P".into()))?;
    let sd = |x: &Scalar| if delta == 1 { x.clone() } else { -x };
    let w: Vec<Scalar> = wdiag.iter().map(sd).collect();
    let (mut u, mut v) = (Vec::new(), Vec::new());
    for x in center_diagonal(&star(h, &cc)?)?.iter().map(sd) {
        if x.sign_at(p.embedding_sign)? > 0 {
            u.push(x);
        } else {
            v.push(-&x);
        }
    }
    let base = Arc::new(alg.base_algebra());
    let lhs = tensor_quadratic(&scalar_form(&base, &w)?, h)?;
    let signed: Vec<Scalar> = u.iter().cloned().chain(v.iter().map(|x| -x)).collect();
    let rhs = tensor_quadratic(&scalar_form(&base, &signed)?, &cc)?;
    let signatures_agree = signature_table(&lhs)? == signature_table(&rhs)?;
    let witt_check = decide_if_rational(|| witt_equal(&lhs, &rhs), alg)?;
    Ok(SylvesterData { w, u, v, c: c.clone(), delta, witt_check, signatures_agree })
}

/// Runs a decision when the base is ℚ; `None` over ℚ(√m).
fn decide_if_rational(
    f: impl FnOnce() -> Result<WittDecision>,
    alg: &ComponentAlgebra,
) -> Result<Option<WittDecision>> {
    if alg.tower().m().is_some() {
        Ok(None)
    } else {
        f().map(Some)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NilKill {
    /// q over K, PSD at P, dim = rk_S A.
    pub q: QuadForm,
    pub skew_unit: AElem,
    pub c: AElem,
    pub is_psd: bool,
    /// Hyperbolicity of q ⊗ h, when the base is ℚ.
    pub verification: Option<WittDecision>,
}

fn is_skew_unit(alg: &ComponentAlgebra, a: &AElem) -> bool {
    !alg.is_zero(a) && alg.sigma(a) == alg.neg(a) && alg.is_unit(a)
}

/// A unit a with σ(a) = −a: x − σ(x) over basis elements, then pairs, then
/// random x.
pub fn find_skew_unit(alg: &ComponentAlgebra, search: &Search) -> Result<AElem> {
    let t = alg.t();
    let skew = |x: &AElem| alg.sub(x, &alg.sigma(x));
    for p in 0..t {
        let a = skew(&alg.basis(p));
        if is_skew_unit(alg, &a) {
            return Ok(a);
        }
    }
    for p in 0..t {
        for q in p + 1..t {
            let a = skew(&alg.add(&alg.basis(p), &alg.basis(q)));
            if is_skew_unit(alg, &a) {
                return Ok(a);
            }
        }
    }
    let tower = alg.tower();
    let mut rng = ChaCha8Rng::seed_from_u64(search.seed);
    for _ in 0..search.budget {
        let x = (0..t)
            .map(|_| tower.scalar((0..tower.sdim()).map(|_| rq(rng.gen_range(-3..=3), 1)).collect()))
            .collect::<Result<AElem>>()?;
        let a = skew(&x);
        if is_skew_unit(alg, &a) {
            return Ok(a);
        }
    }
    Err(Error::SearchBudgetExceeded(search.budget))
}

/// A form q over K, PSD at the nil ordering P, with q ⊗ h hyperbolic.
pub fn nil_kill(h: &HermForm, p: &Ordering, search: &Search) -> Result<NilKill> {
    let alg = h.algebra();
    if alg.is_unitary() {
        return Err(Error::AlgebraMismatch("nil_kill needs an involution of the first kind".into()));
    }
    if !alg.is_nil(p)? {
        return Err(Error::NotNil);
    }
    let a = find_skew_unit(alg, search)?;
    let tau = Arc::new(alg.with_inner(Some(alg.mul(&a, alg.inner_unit())))?);
    let cert = max_sig_element(&tau, p, search)?;
    let c = cert
        .element
        .ok_or_else(|| Error::Internal("the twisted involution is nil at P".into()))?;
    let diag = center_diagonal(&phi_bc(&tau, &c, &c)?)?;
    let delta = definiteness(&diag, p)?
        .ok_or_else(|| Error::Internal("⟨c⟩_τ * ⟨c⟩_τ is not definite at P".into()))?;
    let values: Vec<Scalar> = diag.iter().map(|x| if delta == 1 { x.clone() } else { -x }).collect();
    let base = Arc::new(alg.base_algebra());
    let q = scalar_form(&base, &values)?;
    let psd = is_psd(&q, p)?;
    let verification = decide_if_rational(|| is_hyperbolic(&tensor_quadratic(&q, h)?), alg)?;
    Ok(NilKill { q, skew_unit: a, c, is_psd: psd, verification })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PfisterKill {
    pub w: Vec<Scalar>,
    pub r: Vec<Scalar>,
    /// Hyperbolicity of (⟨w⟩ ⊗ ⟪r⟫) ⊗ ⟨a, −b⟩_σ, when the base is ℚ.
    pub verification: Option<WittDecision>,
}

/// (⟨w⟩ ⊗ ⟪r⟫) ⊗ ⟨a, −b⟩_σ hyperbolic for a, b of maximal signature at P.
pub fn pfister_kill(alg: &Arc<ComponentAlgebra>, a: &AElem, b: &AElem, p: &Ordering) -> Result<PfisterKill> {
    check_maximal(alg, b, p)?;
    let h = HermForm::diagonal(alg.clone(), 1, vec![a.clone(), alg.neg(b)])?;
    let sd = sylvester_decompose(&h, a, p)?;
    let r: Vec<Scalar> = sd.u.iter().chain(&sd.v).cloned().collect();
    let base = Arc::new(alg.base_algebra());
    let verification = decide_if_rational(
        || {
            let pf = pfister(&base, &r)?;
            let wq = scalar_form(&base, &sd.w)?;
            let q = tensor_quadratic(&wq, &pf)?;
            is_hyperbolic(&tensor_quadratic(&q, &h)?)
        },
        alg,
    )?;
    Ok(PfisterKill { w: sd.w, r, verification })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Coefficients;
    use crate::arith::Tower;
    use crate::witt::Verdict;

    const P0: Ordering = Ordering { component: 0, embedding_sign: 1 };

    fn alg(tower: Arc<Tower>, coeff: Coefficients, k: usize, inner: Option<AElem>) -> Arc<ComponentAlgebra> {
        Arc::new(ComponentAlgebra::new(0, tower, coeff, k, inner).unwrap())
    }

    fn rationals() -> Arc<ComponentAlgebra> {
        alg(Tower::rationals(), Coefficients::Center, 1, None)
    }

    fn quat(a: i64, b: i64, inner: Option<AElem>) -> Arc<ComponentAlgebra> {
        let t = Tower::rationals();
        alg(t.clone(), Coefficients::Quaternion { a: t.int(a), b: t.int(b) }, 1, inner)
    }

    fn ints(t: &Arc<Tower>, v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&n| t.int(n)).collect()
    }

    fn diag_values(h: &HermForm) -> Vec<Scalar> {
        h.diagonal_entries().unwrap().into_iter().map(|x| x[0].clone()).collect()
    }

    #[test]
    fn trace_forms() {
        let t = Tower::rationals();
        let h = quat(-1, -1, None);
        assert_eq!(diag_values(&involution_trace_form(&h).unwrap()), ints(&t, &[2, 2, 2, 2]));
        let m2 = alg(t.clone(), Coefficients::Center, 2, None);
        assert_eq!(diag_values(&involution_trace_form(&m2).unwrap()), ints(&t, &[1, 1, 1, 1]));
        let gi = Tower::new(None, Some(vec![rq(-1, 1)])).unwrap();
        let c = alg(gi.clone(), Coefficients::Center, 1, None);
        let tf = involution_trace_form(&c).unwrap();
        assert_eq!(tf.epsilon(), 1);
        assert_eq!(diag_values(&tf), vec![gi.int(1)]);
        let q = rationals();
        assert_eq!(diag_values(&phi_bc(&q, &q.one(), &q.from_scalar(&t.int(2))).unwrap()), ints(&t, &[2]));
    }

    #[test]
    fn phi_rejects_bad_entries() {
        let h = quat(-1, -1, None);
        let mixed = h.add(&h.one(), &h.basis(1));
        assert!(matches!(phi_bc(&h, &mixed, &h.one()), Err(Error::InvalidEntry(_))));
        assert!(matches!(phi_bc(&h, &h.zero(), &h.one()), Err(Error::InvalidEntry(_))));
    }

    #[test]
    fn star_examples() {
        let t = Tower::rationals();
        let q = rationals();
        let h11 = HermForm::diagonal_scalars(q.clone(), 1, &ints(&t, &[1, 1])).unwrap();
        let h1 = HermForm::diagonal_scalars(q.clone(), 1, &ints(&t, &[1])).unwrap();
        assert_eq!(diag_values(&star(&h11, &h1).unwrap()), ints(&t, &[1, 1]));
        let hq = quat(-1, -1, None);
        let one = HermForm::diagonal(hq.clone(), 1, vec![hq.one()]).unwrap();
        assert_eq!(star(&one, &one).unwrap(), phi_bc(&hq, &hq.one(), &hq.one()).unwrap());
        let i = hq.basis(1);
        let skew = HermForm::diagonal(hq.clone(), -1, vec![i.clone()]).unwrap();
        let p = star(&skew, &one).unwrap();
        assert_eq!(p.epsilon(), -1);
        assert_eq!(p, phi_bc(&hq, &i, &hq.one()).unwrap());
    }

    #[test]
    fn sylvester_examples() {
        let t = Tower::rationals();
        let q = rationals();
        let h = HermForm::diagonal_scalars(q.clone(), 1, &ints(&t, &[1, -1])).unwrap();
        let sd = sylvester_decompose(&h, &q.one(), &P0).unwrap();
        assert_eq!((sd.w.clone(), sd.u.clone(), sd.v.clone()), (ints(&t, &[1]), ints(&t, &[1]), ints(&t, &[1])));
        assert!(sd.signatures_agree);
        assert_eq!(sd.witt_check.unwrap().verdict, Verdict::Hyperbolic);
        let hq = quat(-1, -1, None);
        let one = HermForm::diagonal(hq.clone(), 1, vec![hq.one()]).unwrap();
        let sd = sylvester_decompose(&one, &hq.one(), &P0).unwrap();
        assert_eq!(sd.w, ints(&t, &[2, 2, 2, 2]));
        assert_eq!(sd.u, ints(&t, &[2, 2, 2, 2]));
        assert!(sd.v.is_empty());
        assert!(sd.signatures_agree);
        let minus = q.from_scalar(&t.int(-1));
        assert!(matches!(sylvester_decompose(&h, &minus, &P0), Err(Error::NotMaximal(_))));
        let skew = HermForm::diagonal(hq.clone(), -1, vec![hq.basis(1)]).unwrap();
        assert!(matches!(sylvester_decompose(&skew, &hq.one(), &P0), Err(Error::UseSkewPath)));
    }

    #[test]
    fn nil_kill_examples() {
        let t = Tower::rationals();
        let j: AElem = ints(&t, &[0, 1, -1, 0]);
        let sp = alg(t.clone(), Coefficients::Center, 2, Some(j));
        let h = HermForm::diagonal(sp.clone(), 1, vec![sp.one()]).unwrap();
        let nk = nil_kill(&h, &P0, &Search::default()).unwrap();
        assert_eq!(diag_values(&nk.q), ints(&t, &[1, 1, 1, 1]));
        assert!(nk.is_psd);
        assert_eq!(nk.verification.unwrap().verdict, Verdict::Hyperbolic);

        let hq = quat(-1, -1, None);
        let i_conj = Arc::new(hq.with_inner(Some(hq.basis(1))).unwrap());
        let h = HermForm::diagonal(i_conj.clone(), 1, vec![i_conj.one()]).unwrap();
        let nk = nil_kill(&h, &P0, &Search::default()).unwrap();
        assert_eq!(diag_values(&nk.q), ints(&t, &[2, 2, 2, 2]));
        assert_eq!(nk.verification.unwrap().verdict, Verdict::Undecided);

        let m2 = alg(t.clone(), Coefficients::Center, 2, None);
        let h = HermForm::diagonal(m2.clone(), 1, vec![m2.one()]).unwrap();
        assert!(matches!(nil_kill(&h, &P0, &Search::default()), Err(Error::NotNil)));
    }

    #[test]
    fn pfister_kill_examples() {
        let t = Tower::rationals();
        let q = rationals();
        let pk = pfister_kill(&q, &q.one(), &q.from_scalar(&t.int(2)), &P0).unwrap();
        assert_eq!((pk.w, pk.r), (ints(&t, &[1]), ints(&t, &[1, 2])));
        assert_eq!(pk.verification.unwrap().verdict, Verdict::Hyperbolic);
        let pk = pfister_kill(&q, &q.one(), &q.one(), &P0).unwrap();
        assert_eq!((pk.w, pk.r), (ints(&t, &[1]), ints(&t, &[1, 1])));
        let hq = quat(-1, -1, None);
        let pk = pfister_kill(&hq, &hq.one(), &hq.one(), &P0).unwrap();
        assert_eq!(pk.w, ints(&t, &[2, 2, 2, 2]));
        assert_eq!(pk.r.len(), 8);
        assert!(pk.r.iter().all(|x| x.sign_at(1).unwrap() > 0));
        assert_eq!(pk.verification.unwrap().verdict, Verdict::Hyperbolic);
    }
}
