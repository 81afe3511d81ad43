//! Seeded verification suites. Iteration i of a run with seed s draws its
//! instance from the generator seeded with s + i, so any failure can be
//! replayed with `--seed s+i --iters 1`.

use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{goldman_element, AElem, Algebra, BaseRing, ComponentAlgebra, Ordering, TensorElement};
use crate::arith::{rq, Scalar, Tower};
use crate::error::{Error, Result};
use crate::forms::{extend_scalars, orth_sum, scale_unit, tensor_quadratic, to_canonical, trace_transfer, HermForm, ProductForm};
use crate::json::{algebra_json, element_json, form_json, product_form_json, scalars_json};
use crate::pairing::{nil_kill, pfister_kill, phi_bc, star, sylvester_decompose};
use crate::random::{zoo, Gen};
use crate::signature::{
    is_psd, max_sig_element, quad_signature, signature, signature_table, trace_form_signature, Search,
};
use crate::witt::{
    hyperbolic_invariants, is_hyperbolic, is_isotropic_diagonal, plg_minimal_n, quad_invariants, witt_equal,
    PlgOutcome, Verdict,
};

pub const SUITES: [&str; 15] = [
    "goldman-identities",
    "signature-mult",
    "sign-bound",
    "nil-vanishing",
    "pairing-rank1",
    "pairing-assoc",
    "pairing-base-change",
    "psd-delta",
    "sylvester",
    "sylvester-counts",
    "nil-kill",
    "pfister-kill",
    "trace-transfer-equiv",
    "plg",
    "witt-oracle-brute",
];

#[derive(Debug, Clone, Serialize)]
pub struct Failure {
    pub iteration: usize,
    pub input: Value,
    pub expected: String,
    pub observed: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub iterations: usize,
    pub passed: usize,
    pub skipped: usize,
    pub undecided: usize,
    pub failures: Vec<Failure>,
    /// Wall-clock time; the only field that varies between identical runs.
    pub elapsed_ms: u128,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SuiteConfig {
    pub search: Search,
    pub n_max: u32,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { search: Search::default(), n_max: crate::witt::DEFAULT_N_MAX }
    }
}

enum Outcome {
    Pass,
    Skip,
    Undecided,
    Fail { input: Value, expected: String, observed: String },
}

fn fail(input: Value, expected: impl Into<String>, observed: impl Into<String>) -> Outcome {
    Outcome::Fail { input, expected: expected.into(), observed: observed.into() }
}

/// Pass when `ok`, otherwise a failure with the given description.
fn check(ok: bool, input: &Value, expected: &str, observed: impl FnOnce() -> String) -> Option<Outcome> {
    (!ok).then(|| fail(input.clone(), expected, observed()))
}

type Case = fn(&mut Gen, usize, &SuiteConfig, &mut Value) -> Result<Outcome>;

fn case(name: &str) -> Option<Case> {
    Some(match name {
        "goldman-identities" => goldman_case,
        "signature-mult" => mult_case,
        "sign-bound" => bound_case,
        "nil-vanishing" => nil_case,
        "pairing-rank1" => rank1_case,
        "pairing-assoc" => assoc_case,
        "pairing-base-change" => base_change_case,
        "psd-delta" => psd_case,
        "sylvester" => sylvester_case,
        "sylvester-counts" => counts_case,
        "nil-kill" => nil_kill_case,
        "pfister-kill" => pfister_case,
        "trace-transfer-equiv" => transfer_case,
        "plg" => plg_case,
        "witt-oracle-brute" => brute_case,
        _ => return None,
    })
}

pub fn run_suite(name: &str, seed: u64, iterations: usize, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let f = case(name).ok_or_else(|| Error::Parse(format!("unknown suite {name:?}")))?;
    let start = Instant::now();
    let mut report = SuiteReport {
        suite: name.to_string(),
        seed,
        iterations,
        passed: 0,
        skipped: 0,
        undecided: 0,
        failures: Vec::new(),
        elapsed_ms: 0,
    };
    for i in 0..iterations {
        let iseed = seed.wrapping_add(i as u64);
        let mut g = Gen::new(iseed);
        let mut input = json!({"suite": name, "seed": iseed});
        match f(&mut g, i, cfg, &mut input) {
            Ok(Outcome::Pass) => report.passed += 1,
            Ok(Outcome::Skip) => report.skipped += 1,
            Ok(Outcome::Undecided) => report.undecided += 1,
            Ok(Outcome::Fail { input, expected, observed }) => {
                report.failures.push(Failure { iteration: i, input, expected, observed })
            }
            Err(e) => report.failures.push(Failure {
                iteration: i,
                input,
                expected: "no error".into(),
                observed: e.to_string(),
            }),
        }
    }
    report.elapsed_ms = start.elapsed().as_millis();
    Ok(report)
}

fn record(input: &mut Value, key: &str, v: Value) {
    input[key] = v;
}

fn single(alg: &ComponentAlgebra) -> Algebra {
    Algebra::single(alg.clone())
}

fn record_alg(input: &mut Value, alg: &ComponentAlgebra) {
    record(input, "algebra", algebra_json(&single(alg)));
}

fn rank_one(alg: &Arc<ComponentAlgebra>, eps: i8, x: AElem) -> Result<HermForm> {
    HermForm::diagonal(alg.clone(), eps, vec![x])
}

fn algebra_with_t(g: &mut Gen, rational_base: bool, max_t: usize) -> Result<Arc<ComponentAlgebra>> {
    loop {
        let a = g.algebra(rational_base)?;
        if a.t() <= max_t {
            return Ok(a);
        }
    }
}

fn non_nil(alg: &ComponentAlgebra) -> Result<Vec<Ordering>> {
    let mut out = Vec::new();
    for p in alg.orderings() {
        if !alg.is_nil(&p)? {
            out.push(p);
        }
    }
    Ok(out)
}

/// σ(x)·c·x for a random unit x: symmetric, and of maximal signature at P
/// whenever c is.
fn conjugate_max(g: &mut Gen, alg: &ComponentAlgebra, c: &AElem) -> AElem {
    loop {
        let mut x = g.element(alg);
        if g.coin() {
            x = alg.add(&x, &alg.one());
        }
        if alg.is_unit(&x) {
            return alg.mul(&alg.mul(&alg.sigma(&x), c), &x);
        }
    }
}

fn random_form(g: &mut Gen, alg: &Arc<ComponentAlgebra>, eps: i8, rank: usize) -> Result<HermForm> {
    if g.coin() {
        g.form(alg, eps, rank)
    } else {
        g.diagonal_form(alg, eps, rank)
    }
}

/// A random ε for which ε-symmetric units exist.
fn some_epsilon(g: &mut Gen, alg: &ComponentAlgebra) -> i8 {
    if g.coin() && g.symmetric_unit(alg, -1).is_ok() {
        -1
    } else {
        1
    }
}

fn verdict_outcome(v: Verdict, input: &Value, expected: &str) -> Outcome {
    match v {
        Verdict::Hyperbolic => Outcome::Pass,
        Verdict::Undecided => Outcome::Undecided,
        Verdict::NotHyperbolic => fail(input.clone(), expected, "not_hyperbolic"),
    }
}

fn goldman_case(g: &mut Gen, i: usize, _: &SuiteConfig, input: &mut Value) -> Result<Outcome> {
    let z = zoo();
    let alg = if i < z.len() { z[i].1.clone() } else { algebra_with_t(g, false, 16)? };
    record_alg(input, &alg);
    let gm = goldman_element(&alg)?;
    let one = TensorElement::one(&alg);
    if gm.mul(&alg, &gm) != one {
        return Ok(fail(input.clone(), "g² = 1", "g² ≠ 1"));
    }
    if gm.sigma_sigma(&alg) != gm {
        return Ok(fail(input.clone(), "(σ⊗σ)(g) = g", "differs"));
    }
    for _ in 0..5 {
        let (a, b) = (g.element(&alg), g.element(&alg));
        record(input, "a", element_json(&alg, &a));
        record(input, "b", element_json(&alg, &b));
        let lhs = gm.mul(&alg, &TensorElement::simple(&a, &b));
        let rhs = TensorElement::simple(&b, &a).mul(&alg, &gm);
        if lhs != rhs {
            return Ok(fail(input.clone(), "g(a⊗b) = (b⊗a)g", "differs"));
        }
        if gm.sandwich(&alg, &a) != alg.from_scalar(&alg.trd(&a)) {
            return Ok(fail(input.clone(), "sandwich(g)(a) = Trd(a)", "differs"));
        }
    }
    Ok(Outcome::Pass)
}

fn mult_case(g: &mut Gen, _: usize, _: &SuiteConfig, input: &mut Value) -> Result<Outcome> {
    let alg = algebra_with_t(g, false, 16)?;
    record_alg(input, &alg);
    let eps = some_epsilon(g, &alg);
    let rank = g.index(2) + 1;
    let h = random_form(g, &alg, eps, rank)?;
    let base = Arc::new(alg.base_algebra());
    let qr = g.index(3) + 1;
    let q = g.quad_form(&base, qr)?;
    record(input, "h", form_json(&h));
    record(input, "q", form_json(&q));
    let qh = tensor_quadratic(&q, &h)?;
    for p in alg.orderings() {
        let (a, b, c) = (signature(&qh, &p)?, quad_signature(&q, &p)?, signature(&h, &p)?);
        if let Some(f) = check(a == b * c, input, "sign(q⊗h) = sign(q)·sign(h)", || format!("{a} vs {b}·{c} at {p}")) {
            return Ok(f);
        }
    }
    Ok(Outcome::Pass)
}

fn bound_case(g: &mut Gen, _: usize, _: &SuiteConfig, input: &mut Value) -> Result<Outcome> {
    let alg = algebra_with_t(g, false, 16)?;
    record_alg(input, &alg);
    let a = g.symmetric_unit(&alg, 1)?;
    record(input, "a", element_json(&alg, &a));
    let deg = alg.deg() as i64;
    let h = rank_one(&alg, 1, a.clone())?;
    let hyp = HermForm::diagonal(alg.clone(), 1, vec![a.clone(), alg.neg(&a)])?;
    let canon = to_canonical(&h)?;
    for p in alg.orderings() {
        let s = signature(&h, &p)?;
        if let Some(f) = check(s.abs() <= deg, input, "|sign⟨a⟩| ≤ deg A", || format!("{s} at {p}")) {
            return Ok(f);
        }
        let z = signature(&hyp, &p)?;
        if let Some(f) = check(z == 0, input, "sign(⟨a⟩ ⊥ ⟨−a⟩) = 0", || format!("{z} at {p}")) {
            return Ok(f);
        }
        if canon.epsilon() == 1 {
            let n = canon.algebra().transfer_normalization() as i64;
            let t = trace_form_signature(&canon, &p)?;
            if let Some(f) = check(t == n * s, input, "scaled transfer signature = n_P·sign", || {
                format!("{t} vs {n}·{s} at {p}")
            }) {
                return Ok(f);
            }
        }
    }
    Ok(Outcome::Pass)
}

/// Nil orderings govern hermitian forms. A skew form h is measured against
/// the nil orderings of Int(a)∘σ, over which a·h is hermitian, and the two
/// signatures agree up to sign.
fn nil_case(g: &mut Gen, _: usize, _: &SuiteConfig, input: &mut Value) -> Result<Outcome> {
    let alg = algebra_with_t(g, false, 16)?;
    record_alg(input, &alg);
    let eps = some_epsilon(g, &alg);
    let rank = g.index(3) + 1;
    let h = random_form(g, &alg, eps, rank)?;
    record(input, "h", form_json(&h));
    let hermitian = if eps == 1 { h.clone() } else { scale_unit(&h, &g.symmetric_unit(&alg, -1)?)? };
    let nil = hermitian.algebra().nil_orderings();
    if nil.is_empty() {
        return Ok(Outcome::Skip);
    }
    for p in alg.orderings() {
        let (s, t) = (signature(&h, &p)?, signature(&hermitian, &p)?);
        if let Some(f) = check(s.abs() == t.abs(), input, "|sign h| = |sign a·h|", || format!("{s} vs {t} at {p}")) {
            return Ok(f);
        }
    }
    for p in nil {
        let s = signature(&h, &p)?;
        if let Some(f) = check(s == 0, input, "signature 0 at nil orderings", || format!("{s} at {p}")) {
            return Ok(f);
        }
    }
    Ok(Outcome::Pass)
}

fn rank1_case(g: &mut Gen, _: usize, _: &SuiteConfig, input: &mut Value) -> Result<Outcome> {
    let alg = algebra_with_t(g, false, 16)?;
    record_alg(input, &alg);
    let (eb, ec) = (some_epsilon(g, &alg), some_epsilon(g, &alg));
    let (b, c) = (g.symmetric_unit(&alg, eb)?, g.symmetric_unit(&alg, ec)?);
    record(input, "b", element_json(&alg, &b));
    record(input, "c", element_json(&alg, &c));
    let lhs = star(&rank_one(&alg, eb, b.clone())?, &rank_one(&alg, ec, c.clone())?)?;
    let rhs = phi_bc(&alg, &b, &c)?;
    Ok(check(lhs == rhs, input, "star(⟨b⟩,⟨c⟩) = φ_{b,c}", || "Gram matrices differ".into()).unwrap_or(Outcome::Pass))
}

fn assoc_case(g: &mut Gen, _: usize, _: &SuiteConfig, input: &mut Value) -> Result<Outcome> {
    let rational = g.index(4) != 0;
    let alg = algebra_with_t(g, rational, 16)?;
    record_alg(input, &alg);
    let max_rank = if alg.t() > 4 { 1 } else { 2 };
    let mut hs = Vec::new();
    for _ in 0..3 {
        let r = g.index(max_rank) + 1;
        hs.push(g.diagonal_form(&alg, 1, r)?);
    }
    record(input, "forms", hs.iter().map(form_json).collect());
    let lhs = tensor_quadratic(&star(&hs[0], &hs[1])?, &hs[2])?;
    let rhs = tensor_quadratic(&star(&hs[2], &hs[1])?, &hs[0])?;
    let (tl, tr) = (signature_table(&lhs)?, signature_table(&rhs)?);
    if tl != tr {
        return Ok(fail(input.clone(), "equal signature tables", format!("{:?} vs {:?}", tl.0, tr.0)));
    }
    if alg.tower().m().is_some() {
        return Ok(Outcome::Pass);
    }
    Ok(verdict_outcome(witt_equal(&lhs, &rhs)?.verdict, input, "(h₁*h₂)⊗h₃ ≅ (h₃*h₂)⊗h₁"))
}

fn base_change_case(g: &mut Gen, _: usize, _: &SuiteConfig, input: &mut Value) -> Result<Outcome> {
    let alg = algebra_with_t(g, true, 16)?;
    record_alg(input, &alg);
    let m = BigInt::from(*g.pick(&[2, 3, 5, 6, 7]));
    if alg.tower().d().is_some_and(|d| crate::arith::square_class(&d[0]) == Ok(m.clone())) {
        // K(√m) splits the center
        return Ok(Outcome::Skip);
    }
    let (r1, r2) = (g.index(2) + 1, g.index(2) + 1);
    let h1 = g.diagonal_form(&alg, 1, r1)?;
    let h2 = g.diagonal_form(&alg, 1, r2)?;
    record(input, "forms", json!([form_json(&h1), form_json(&h2)]));
    record(input, "m", json!(m.to_string()));
    let lhs = extend_scalars(&star(&h1, &h2)?, &m)?;
    let rhs = star(&extend_scalars(&h1, &m)?, &extend_scalars(&h2, &m)?)?;
    if lhs.rank() != rhs.rank() {
        return Ok(fail(input.clone(), "equal ranks", format!("{} vs {}", lhs.rank(), rhs.rank())));
    }
    let (tl, tr) = (signature_table(&lhs)?, signature_table(&rhs)?);
    Ok(check(tl == tr, input, "equal signatures at both orderings of K(√m)", || {
        format!("{:?} vs {:?}", tl.0, tr.0)
    })
    .unwrap_or(Outcome::Pass))
}

/// +1 or −1 when φ is PSD or NSD at P, 0 otherwise.
fn definite_sign(phi: &HermForm, p: &Ordering) -> Result<i8> {
    if is_psd(phi, p)? {
        Ok(1)
    } else if is_psd(&phi.neg(), p)? {
        Ok(-1)
    } else {
        Ok(0)
    }
}

fn signed(phi: &HermForm, delta: i8) -> HermForm {
    if delta == 1 {
        phi.clone()
    } else {
        phi.neg()
    }
}

fn psd_case(g: &mut Gen, _: usize, cfg: &SuiteConfig, input: &mut Value) -> Result<Outcome> {
    let alg = algebra_with_t(g, false, 9)?;
    let ps = non_nil(&alg)?;
    if ps.is_empty() {
        return Ok(Outcome::Skip);
    }
    record_alg(input, &alg);
    let mut undecided = false;
    for p in ps {
        let c0 = max_sig_element(&alg, &p, &cfg.search)?.element.expect("non-nil ordering");
        let mut delta = 0;
        for _ in 0..4 {
            let b = conjugate_max(g, &alg, &c0);
            let c = conjugate_max(g, &alg, &c0);
            record(input, "ordering", json!(p.key()));
            record(input, "b", element_json(&alg, &b));
            record(input, "c", element_json(&alg, &c));
            let (hb, hc) = (rank_one(&alg, 1, b)?, rank_one(&alg, 1, c)?);
            let bc = star(&hb, &hc)?;
            if delta == 0 {
                delta = definite_sign(&bc, &p)?;
                if delta == 0 {
                    return Ok(fail(input.clone(), "⟨b⟩*⟨c⟩ definite at P", "indefinite"));
                }
            }
            if !is_psd(&signed(&bc, delta), &p)? {
                return Ok(fail(input.clone(), format!("δ = {delta} makes ⟨b⟩*⟨c⟩ PSD"), "not PSD"));
            }
            let phi1 = signed(&star(&hc, &hc)?, delta);
            if !is_psd(&phi1, &p)? {
                return Ok(fail(input.clone(), format!("δ = {delta} makes ⟨c⟩*⟨c⟩ PSD"), "not PSD"));
            }
            if alg.tower().m().is_none() {
                let l = tensor_quadratic(&phi1, &hb)?;
                let r = tensor_quadratic(&signed(&bc, delta), &hc)?;
                match witt_equal(&l, &r)?.verdict {
                    Verdict::NotHyperbolic => {
                        return Ok(fail(input.clone(), "φ₁⊗⟨b⟩ ≅ φ₂⊗⟨c⟩", "not Witt equal"))
                    }
                    Verdict::Undecided => undecided = true,
                    Verdict::Hyperbolic => {}
                }
            }
        }
    }
    Ok(if undecided { Outcome::Undecided } else { Outcome::Pass })
}

fn sylvester_case(g: &mut Gen, _: usize, cfg: &SuiteConfig, input: &mut Value) -> Result<Outcome> {
    let rational = g.index(4) != 0;
    let alg = algebra_with_t(g, rational, 9)?;
    let ps = non_nil(&alg)?;
    if ps.is_empty() {
        return Ok(Outcome::Skip);
    }
    let p = *g.pick(&ps);
    record_alg(input, &alg);
    let rank = g.index(3) + 1;
    let h = random_form(g, &alg, 1, rank)?;
    let c0 = max_sig_element(&alg, &p, &cfg.search)?.element.expect("non-nil ordering");
    let c = conjugate_max(g, &alg, &c0);
    record(input, "h", form_json(&h));
    record(input, "c", element_json(&alg, &c));
    record(input, "ordering", json!(p.key()));
    let sd = sylvester_decompose(&h, &c, &p)?;
    let positive = |v: &[Scalar]| v.iter().all(|x| x.sign_at(p.embedding_sign) == Ok(1));
    if !(positive(&sd.w) && positive(&sd.u) && positive(&sd.v)) {
        return Ok(fail(input.clone(), "all entries positive at P", format!("w={} u={} v={}", scalars_json(&sd.w), scalars_json(&sd.u), scalars_json(&sd.v))));
    }
    if !sd.signatures_agree {
        return Ok(fail(input.clone(), "both sides have equal signatures", "differ"));
    }
    Ok(match sd.witt_check {
        None => Outcome::Pass,
        Some(d) => verdict_outcome(d.verdict, input, "⟨w⟩⊗h ≅ ⟨u⟩⊗⟨c⟩ ⊥ ⟨−v⟩⊗⟨c⟩"),
    })
}

fn counts_case(g: &mut Gen, _: usize, cfg: &SuiteConfig, input: &mut Value) -> Result<Outcome> {
    let alg = algebra_with_t(g, false, 9)?;
    let ps = non_nil(&alg)?;
    if ps.is_empty() {
        return Ok(Outcome::Skip);
    }
    let p = *g.pick(&ps);
    record_alg(input, &alg);
    let rank = g.index(3) + 1;
    let h = random_form(g, &alg, 1, rank)?;
    record(input, "h", form_json(&h));
    record(input, "ordering", json!(p.key()));
    let c0 = max_sig_element(&alg, &p, &cfg.search)?.element.expect("non-nil ordering");
    let c1 = conjugate_max(g, &alg, &c0);
    let (t, deg) = (alg.t() as i64, alg.deg() as i64);
    let sig = signature(&h, &p)?;
    let mut counts = Vec::new();
    for c in [c0, c1] {
        let sd = sylvester_decompose(&h, &c, &p)?;
        let (r, s) = (sd.u.len() as i64, sd.v.len() as i64);
        if (r - s) * deg != t * sig || r + s != t * rank as i64 {
            return Ok(fail(
                input.clone(),
                "r − s = t·sign/deg and r + s = t·rank",
                format!("r={r} s={s} t={t} sign={sig} deg={deg}"),
            ));
        }
        counts.push((r, s));
    }
    Ok(check(counts[0] == counts[1], input, "counts independent of c", || format!("{counts:?}")).unwrap_or(Outcome::Pass))
}

fn nil_kill_case(g: &mut Gen, _: usize, cfg: &SuiteConfig, input: &mut Value) -> Result<Outcome> {
    let rational = g.index(4) != 0;
    let alg = algebra_with_t(g, rational, 9)?;
    if alg.is_unitary() {
        return Ok(Outcome::Skip);
    }
    let nil = alg.nil_orderings();
    if nil.is_empty() {
        return Ok(Outcome::Skip);
    }
    let p = *g.pick(&nil);
    record_alg(input, &alg);
    let rank = g.index(2) + 1;
    let h = random_form(g, &alg, 1, rank)?;
    record(input, "h", form_json(&h));
    record(input, "ordering", json!(p.key()));
    let nk = nil_kill(&h, &p, &cfg.search)?;
    if !nk.is_psd || nk.q.rank() != alg.t() {
        return Ok(fail(input.clone(), "q PSD at P with dim = rk_S A", format!("psd={} dim={}", nk.is_psd, nk.q.rank())));
    }
    Ok(match nk.verification {
        None => Outcome::Pass,
        Some(d) => verdict_outcome(d.verdict, input, "q⊗h hyperbolic"),
    })
}

fn pfister_case(g: &mut Gen, _: usize, cfg: &SuiteConfig, input: &mut Value) -> Result<Outcome> {
    let rational = g.index(4) != 0;
    let alg = algebra_with_t(g, rational, 4)?;
    let ps = non_nil(&alg)?;
    if ps.is_empty() {
        return Ok(Outcome::Skip);
    }
    let p = *g.pick(&ps);
    record_alg(input, &alg);
    let c0 = max_sig_element(&alg, &p, &cfg.search)?.element.expect("non-nil ordering");
    let a = conjugate_max(g, &alg, &c0);
    let b = conjugate_max(g, &alg, &c0);
    record(input, "a", element_json(&alg, &a));
    record(input, "b", element_json(&alg, &b));
    record(input, "ordering", json!(p.key()));
    let pk = pfister_kill(&alg, &a, &b, &p)?;
    if pk.w.len() != alg.t() || pk.r.len() != 2 * alg.t() {
        return Ok(fail(input.clone(), "|w| = t and |r| = 2t", format!("{} and {}", pk.w.len(), pk.r.len())));
    }
    Ok(match pk.verification {
        None => Outcome::Pass,
        Some(d) => verdict_outcome(d.verdict, input, "(⟨w⟩⊗⟪r⟫)⊗⟨a,−b⟩ hyperbolic"),
    })
}

fn transfer_case(g: &mut Gen, _: usize, _: &SuiteConfig, input: &mut Value) -> Result<Outcome> {
    let d = *g.pick(&[-1, -2, -3, -5, -6, -7, 2, 3, 5, 6, 7, 10]);
    let tower = Tower::new(None, Some(vec![rq(d, 1)]))?;
    let alg = Arc::new(ComponentAlgebra::new(0, tower.clone(), crate::algebra::Coefficients::Center, 1, None)?);
    record_alg(input, &alg);
    let r = g.index(2) + 1;
    let h0 = g.diagonal_form(&alg, 1, r)?;
    let h = match g.index(3) {
        0 => h0,
        1 => orth_sum(&h0, &h0.neg())?,
        _ => {
            // N(x) scaling keeps the class of −h0 in the norm group
            let x = tower.s_element(&[g.nonzero_rational()], &[g.rational()])?;
            let nx = x.norm_to_base();
            let scaled: Vec<Scalar> = (0..r).map(|i| &h0.entry(i, i)[0] * &nx).collect();
            let h1 = HermForm::diagonal_scalars(alg.clone(), 1, &scaled)?;
            orth_sum(&h0, &h1.neg())?
        }
    };
    record(input, "h", form_json(&h));
    let direct = is_hyperbolic(&h)?.verdict == Verdict::Hyperbolic;
    let tr = trace_transfer(&h)?;
    let via = quad_invariants(&tr)? == hyperbolic_invariants(tr.rank() / 2) && tr.rank() % 2 == 0;
    Ok(check(direct == via, input, "h hyperbolic ⇔ Tr(h) hyperbolic", || format!("direct={direct} transfer={via}"))
        .unwrap_or(Outcome::Pass))
}

/// The algebras of the torsion checks: ℚ, ℚ(i), (−1,−1)_ℚ, M₂(ℚ), and ℚ×ℚ.
fn plg_algebra(g: &mut Gen) -> Result<Algebra> {
    let z = zoo();
    let pick = g.index(5);
    if pick == 4 {
        let q = Tower::rationals();
        let mk = |i| ComponentAlgebra::new(i, q.clone(), crate::algebra::Coefficients::Center, 1, None).map(Arc::new);
        return Ok(Algebra {
            base: BaseRing::product(vec![BaseRing::Rationals, BaseRing::Rationals])?,
            components: vec![mk(0)?, mk(1)?],
        });
    }
    let name = ["Q", "Q(i)", "(-1,-1)_Q", "M2(Q)"][pick];
    let alg = z.into_iter().find(|(n, _)| *n == name).expect("zoo member").1;
    Ok(single(&alg))
}

/// ⟨a₁,…,a_n, −b₁,…,−b_n⟩ with sign(aᵢ) = sign(bᵢ): signature zero.
fn balanced_form(g: &mut Gen, alg: &Arc<ComponentAlgebra>, pairs: usize, extra: Option<i64>) -> Result<HermForm> {
    let q = alg.tower().clone();
    let mut e = Vec::new();
    for _ in 0..pairs {
        let a = g.nonzero_int();
        let b = g.range(1, 8) * a.signum();
        e.push(q.int(a));
        e.push(q.int(-b));
    }
    if let Some(x) = extra {
        e.push(q.int(x));
    }
    HermForm::diagonal_scalars(alg.clone(), 1, &e)
}

fn plg_case(g: &mut Gen, i: usize, cfg: &SuiteConfig, input: &mut Value) -> Result<Outcome> {
    let alg = plg_algebra(g)?;
    record(input, "algebra", algebra_json(&alg));
    let torsion = i % 2 == 0;
    let pairs = g.index(2) + 1;
    let parts = alg
        .components
        .iter()
        .map(|c| balanced_form(g, c, pairs, (!torsion).then_some(1)))
        .collect::<Result<Vec<_>>>()?;
    let h = ProductForm::new(alg, parts)?;
    record(input, "h", product_form_json(&h));
    let out = plg_minimal_n(&h, cfg.n_max)?;
    Ok(match (torsion, out) {
        (true, PlgOutcome::N(n)) if n <= 4 => Outcome::Pass,
        (false, PlgOutcome::NotTorsion) => Outcome::Pass,
        (_, PlgOutcome::Undecided) => Outcome::Undecided,
        (true, o) => fail(input.clone(), "n ≤ 4", format!("{o:?}")),
        (false, o) => fail(input.clone(), "NotTorsion", format!("{o:?}")),
    })
}

const BRUTE_ENTRIES: [i64; 10] = [1, -1, 2, -2, 3, -3, 5, -5, 6, -6];

fn is_square_i128(n: i128) -> bool {
    if n < 0 {
        return false;
    }
    let r = (n as f64).sqrt() as i128;
    (r.saturating_sub(2)..=r + 2).any(|s| s >= 0 && s * s == n)
}

/// Searches nonzero x ∈ ℤⁿ with |xᵢ| ≤ bound and Σ aᵢxᵢ² = 0; the last
/// coordinate is read off as a square root. Signs of x are irrelevant.
pub fn brute_isotropic(a: &[i64], bound: i64) -> bool {
    let n = a.len();
    if n < 2 {
        return false;
    }
    let last = a[n - 1] as i128;
    let mut x = vec![0i64; n - 1];
    loop {
        let mut i = 0;
        while i < n - 1 {
            x[i] += 1;
            if x[i] <= bound {
                break;
            }
            x[i] = 0;
            i += 1;
        }
        if i == n - 1 {
            return false;
        }
        let s: i128 = a.iter().zip(&x).map(|(&c, &v)| c as i128 * (v as i128) * (v as i128)).sum();
        if s % last == 0 && is_square_i128(-s / last) {
            return true;
        }
    }
}

fn brute_case(g: &mut Gen, _: usize, _: &SuiteConfig, input: &mut Value) -> Result<Outcome> {
    let n = g.index(4) + 1;
    let a: Vec<i64> = (0..n).map(|_| *g.pick(&BRUTE_ENTRIES)).collect();
    record(input, "entries", json!(a));
    let rat: Vec<_> = a.iter().map(|&x| rq(x, 1)).collect();
    let inv = is_isotropic_diagonal(&rat)?;
    let brute = brute_isotropic(&a, 40);
    if inv != brute {
        return Ok(fail(input.clone(), "invariant isotropy = brute-force isotropy", format!("invariants={inv} brute={brute}")));
    }
    // binary isometry ⟨a,b⟩ ≅ ⟨c,d⟩: equal discriminant and ⟨a,b⟩ represents c
    let b2: Vec<i64> = (0..4).map(|_| *g.pick(&BRUTE_ENTRIES)).collect();
    record(input, "binary_pair", json!(b2));
    let q = Tower::rationals();
    let base = Arc::new(ComponentAlgebra::new(0, q.clone(), crate::algebra::Coefficients::Center, 1, None)?);
    let f = |x: &[i64]| HermForm::diagonal_scalars(base.clone(), 1, &x.iter().map(|&v| q.int(v)).collect::<Vec<_>>());
    let decided = witt_equal(&f(&b2[..2])?, &f(&b2[2..])?)?.verdict == Verdict::Hyperbolic;
    let same_disc = crate::arith::square_class(&rq(b2[0] * b2[1] * b2[2] * b2[3], 1))? == BigInt::from(1);
    let represents = brute_isotropic(&[b2[0], b2[1], -b2[2]], 40);
    let brute_iso = same_disc && represents;
    Ok(check(decided == brute_iso, input, "invariant isometry = brute-force isometry", || {
        format!("invariants={decided} brute={brute_iso}")
    })
    .unwrap_or(Outcome::Pass))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brute_oracle() {
        assert!(brute_isotropic(&[1, -1], 3));
        assert!(!brute_isotropic(&[1, 1], 10));
        assert!(brute_isotropic(&[1, 1, -2], 3));
        assert!(!brute_isotropic(&[1, 1, 1, 1], 10));
        assert!(brute_isotropic(&[1, 2, -3], 3));
    }

    #[test]
    fn every_suite_runs() {
        let cfg = SuiteConfig::default();
        for s in SUITES {
            let r = run_suite(s, 1, 3, &cfg).unwrap();
            assert!(r.ok(), "{s}: {:?}", r.failures);
        }
        assert!(run_suite("nope", 1, 1, &cfg).is_err());
    }
}
