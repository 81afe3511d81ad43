//! JSON descriptors for algebras, scalars and forms, and the JSON shape of
//! results.
//!
//! Scalars of ℚ are strings "p/q" (integers are accepted too), scalars of
//! ℚ(√m) are {"x": .., "y": ..} for x + y·√m, and scalars of S = K(λ) are
//! {"alpha": .., "beta": ..} for α + β·λ.

use std::sync::Arc;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::algebra::{AElem, Algebra, BaseRing, Coefficients, ComponentAlgebra, TensorElement};
use crate::arith::{format_rational, parse_rational, Rational, Scalar, Tower};
use crate::error::{Error, Result};
use crate::forms::{HermForm, ProductForm};
use crate::pairing::{NilKill, PfisterKill, SylvesterData};
use crate::witt::{Certificate, PlgOutcome, QuadInvariants, WittDecision};

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn field<'a>(v: &'a Value, name: &str) -> Result<&'a Value> {
    v.get(name).ok_or_else(|| perr(format!("missing field {name:?}")))
}

fn kind(v: &Value) -> Result<&str> {
    field(v, "kind")?
        .as_str()
        .ok_or_else(|| perr("\"kind\" must be a string"))
}

fn rational(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => n
            .as_i64()
            .map(|i| Rational::from_integer(i.into()))
            .ok_or_else(|| perr(format!("number {n} is not an integer; use \"p/q\""))),
        _ => Err(perr(format!("expected a rational, got {v}"))),
    }
}

fn integer(v: &Value) -> Result<BigInt> {
    let r = rational(v)?;
    if !r.is_integer() {
        return Err(perr(format!("expected an integer, got {r}")));
    }
    Ok(r.to_integer())
}

/// K-coordinates of a base scalar.
fn k_coords(v: &Value, tower: &Tower) -> Result<Vec<Rational>> {
    match v {
        Value::Object(o) => {
            if tower.m().is_none() {
                return Err(perr("{\"x\",\"y\"} scalars need a real quadratic base"));
            }
            let x = o.get("x").map(rational).transpose()?;
            let y = o.get("y").map(rational).transpose()?;
            Ok(vec![x.unwrap_or_default(), y.unwrap_or_default()])
        }
        _ => {
            let mut c = vec![rational(v)?];
            if tower.m().is_some() {
                c.push(Rational::default());
            }
            Ok(c)
        }
    }
}

pub fn parse_scalar(v: &Value, tower: &Arc<Tower>) -> Result<Scalar> {
    if tower.has_lambda() {
        if let Some(o) = v.as_object().filter(|o| o.contains_key("alpha") || o.contains_key("beta")) {
            let part = |name: &str| match o.get(name) {
                Some(x) => k_coords(x, tower),
                None => Ok(vec![Rational::default(); tower.kdim()]),
            };
            return tower.s_element(&part("alpha")?, &part("beta")?);
        }
    }
    tower.k_element(&k_coords(v, tower)?)
}

fn k_json(c: &[Rational]) -> Value {
    match c {
        [x] => Value::String(format_rational(x)),
        [x, y] => json!({"x": format_rational(x), "y": format_rational(y)}),
        _ => Value::Null,
    }
}

pub fn scalar_json(s: &Scalar) -> Value {
    if s.tower().has_lambda() {
        json!({"alpha": k_json(s.alpha()), "beta": k_json(s.beta())})
    } else {
        k_json(s.coords())
    }
}

fn base_ring(v: &Value) -> Result<BaseRing> {
    match kind(v)? {
        "rationals" => Ok(BaseRing::Rationals),
        "real_quadratic" => {
            let m = integer(field(v, "m")?)?;
            Tower::new(Some(m.clone()), None)?;
            Ok(BaseRing::RealQuadratic(m))
        }
        "product" => {
            let fs = field(v, "factors")?
                .as_array()
                .ok_or_else(|| perr("\"factors\" must be an array"))?;
            BaseRing::product(fs.iter().map(base_ring).collect::<Result<_>>()?)
        }
        k => Err(perr(format!("unknown base kind {k:?}"))),
    }
}

fn base_ring_json(b: &BaseRing) -> Value {
    match b {
        BaseRing::Rationals => json!({"kind": "rationals"}),
        BaseRing::RealQuadratic(m) => json!({"kind": "real_quadratic", "m": m.to_string()}),
        BaseRing::Product(fs) => json!({"kind": "product", "factors": fs.iter().map(base_ring_json).collect::<Vec<_>>()}),
    }
}

/// One connected component over the field `base`, from the non-base fields
/// of a descriptor.
fn component(index: usize, base: &BaseRing, v: &Value) -> Result<ComponentAlgebra> {
    let ktower = base.tower()?;
    let center = v.get("center").cloned().unwrap_or_else(|| json!({"kind": "same"}));
    let tower = match kind(&center)? {
        "same" => ktower.clone(),
        "quadratic" => Tower::new(ktower.m().cloned(), Some(k_coords(field(&center, "d")?, &ktower)?))?,
        k => return Err(perr(format!("unknown center kind {k:?}"))),
    };
    let coeffs = v.get("coefficients").cloned().unwrap_or_else(|| json!({"kind": "center"}));
    let coeff = match kind(&coeffs)? {
        "center" => Coefficients::Center,
        "quaternion" => Coefficients::Quaternion {
            a: parse_scalar(field(&coeffs, "a")?, &ktower)?,
            b: parse_scalar(field(&coeffs, "b")?, &ktower)?,
        },
        k => return Err(perr(format!("unknown coefficients kind {k:?}"))),
    };
    let k = match v.get("matrix_size") {
        Some(x) => x.as_u64().ok_or_else(|| perr("\"matrix_size\" must be a positive integer"))? as usize,
        None => 1,
    };
    let shape = ComponentAlgebra::new(index, tower, coeff, k, None)?;
    let inv = v.get("involution").cloned().unwrap_or_else(|| json!({"kind": "canonical"}));
    match kind(&inv)? {
        "canonical" => Ok(shape),
        "inner" => {
            let u = parse_element(field(&inv, "u")?, &shape)?;
            shape.with_inner(Some(u))
        }
        k => Err(perr(format!("unknown involution kind {k:?}"))),
    }
}

/// Parses an algebra descriptor. Over a product base either the shared
/// fields apply to every factor, or "components" lists one descriptor (without
/// "base") per factor.
pub fn parse_algebra(v: &Value) -> Result<Algebra> {
    let base = base_ring(field(v, "base")?)?;
    let factors = base.factors();
    let parts: Vec<Value> = match v.get("components") {
        Some(Value::Array(cs)) => {
            if cs.len() != factors.len() {
                return Err(perr("one component descriptor per factor is required"));
            }
            cs.clone()
        }
        Some(_) => return Err(perr("\"components\" must be an array")),
        None => vec![v.clone(); factors.len()],
    };
    let components = factors
        .iter()
        .zip(&parts)
        .enumerate()
        .map(|(i, (f, d))| component(i, f, d).map(Arc::new))
        .collect::<Result<Vec<_>>>()?;
    Ok(Algebra { base, components })
}

fn component_json(c: &ComponentAlgebra) -> Value {
    let tower = c.tower();
    let mut o = Map::new();
    o.insert(
        "center".into(),
        match tower.d() {
            Some(d) => json!({"kind": "quadratic", "d": k_json(d)}),
            None => json!({"kind": "same"}),
        },
    );
    o.insert(
        "coefficients".into(),
        match c.coefficients() {
            Coefficients::Center => json!({"kind": "center"}),
            Coefficients::Quaternion { a, b } => json!({"kind": "quaternion", "a": scalar_json(a), "b": scalar_json(b)}),
        },
    );
    o.insert("matrix_size".into(), json!(c.matrix_size()));
    o.insert(
        "involution".into(),
        if c.is_canonical() {
            json!({"kind": "canonical"})
        } else {
            json!({"kind": "inner", "u": element_json(c, c.inner_unit())})
        },
    );
    Value::Object(o)
}

pub fn algebra_json(a: &Algebra) -> Value {
    let mut o = Map::new();
    o.insert("base".into(), base_ring_json(&a.base));
    match a.components.as_slice() {
        [c] => {
            if let Value::Object(m) = component_json(c) {
                o.extend(m);
            }
        }
        cs => {
            o.insert("components".into(), cs.iter().map(|c| component_json(c)).collect());
        }
    }
    Value::Object(o)
}

fn d_scalar(v: &Value, alg: &ComponentAlgebra) -> Result<Vec<Scalar>> {
    let tower = alg.tower();
    if alg.dd() == 1 {
        return Ok(vec![parse_scalar(v, tower)?]);
    }
    let q = v
        .as_array()
        .filter(|q| q.len() == 4)
        .ok_or_else(|| perr("quaternion entries are arrays [w, x, y, z]"))?;
    q.iter().map(|x| parse_scalar(x, tower)).collect()
}

fn is_bare(v: &Value, alg: &ComponentAlgebra) -> bool {
    match v {
        Value::Array(a) => alg.dd() == 4 && a.len() == 4 && a.iter().all(|x| !x.is_array()),
        _ => true,
    }
}

/// An element of M_k(D) as a k×k row-major array of D-scalars; for k = 1 the
/// bare D-scalar is accepted too.
pub fn parse_element(v: &Value, alg: &ComponentAlgebra) -> Result<AElem> {
    let k = alg.matrix_size();
    let mut x = alg.zero();
    if k == 1 && is_bare(v, alg) {
        alg.set_entry(&mut x, 0, 0, &d_scalar(v, alg)?);
        return Ok(x);
    }
    let rows = v
        .as_array()
        .filter(|r| r.len() == k)
        .ok_or_else(|| perr(format!("expected a {k}×{k} matrix")))?;
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .filter(|r| r.len() == k)
            .ok_or_else(|| perr(format!("row {i} must have {k} entries")))?;
        for (j, e) in row.iter().enumerate() {
            alg.set_entry(&mut x, i, j, &d_scalar(e, alg)?);
        }
    }
    Ok(x)
}

pub fn element_json(alg: &ComponentAlgebra, x: &AElem) -> Value {
    let k = alg.matrix_size();
    let entry = |i, j| {
        let e = alg.entry(x, i, j);
        if alg.dd() == 1 {
            scalar_json(&e[0])
        } else {
            Value::Array(e.iter().map(scalar_json).collect())
        }
    };
    if k == 1 {
        return entry(0, 0);
    }
    (0..k).map(|i| (0..k).map(|j| entry(i, j)).collect::<Value>()).collect()
}

fn parse_component_form(v: &Value, alg: &Arc<ComponentAlgebra>) -> Result<HermForm> {
    let eps = field(v, "epsilon")?
        .as_i64()
        .ok_or_else(|| perr("\"epsilon\" must be 1 or -1"))?;
    if eps != 1 && eps != -1 {
        return Err(perr("\"epsilon\" must be 1 or -1"));
    }
    let rows = field(v, "gram")?
        .as_array()
        .ok_or_else(|| perr("\"gram\" must be an array of rows"))?;
    let gram = rows
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| perr("gram rows must be arrays"))?
                .iter()
                .map(|e| parse_element(e, alg))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    HermForm::new(alg.clone(), eps as i8, gram)
}

/// {"epsilon", "gram"} for a connected algebra, {"components": [..]} over a
/// product.
pub fn parse_form(v: &Value, alg: &Algebra) -> Result<ProductForm> {
    let parts = match v.get("components") {
        Some(cs) => {
            let cs = cs.as_array().ok_or_else(|| perr("\"components\" must be an array"))?;
            if cs.len() != alg.components.len() {
                return Err(perr("one form per component is required"));
            }
            cs.iter()
                .zip(&alg.components)
                .map(|(f, c)| parse_component_form(f, c))
                .collect::<Result<Vec<_>>>()?
        }
        None => vec![parse_component_form(v, alg.connected()?)?],
    };
    let eps = parts[0].epsilon();
    if parts.iter().any(|p| p.epsilon() != eps) {
        return Err(perr("all components must share epsilon"));
    }
    ProductForm::new(alg.clone(), parts)
}

pub fn form_json(h: &HermForm) -> Value {
    let alg = h.algebra();
    let gram: Vec<Value> = h
        .dense_gram()
        .iter()
        .map(|row| row.iter().map(|x| element_json(alg, x)).collect())
        .collect();
    json!({"epsilon": h.epsilon(), "gram": gram})
}

pub fn product_form_json(h: &ProductForm) -> Value {
    match h.parts.as_slice() {
        [p] => form_json(p),
        ps => json!({"components": ps.iter().map(form_json).collect::<Vec<_>>()}),
    }
}

pub fn scalars_json(v: &[Scalar]) -> Value {
    v.iter().map(scalar_json).collect()
}

pub fn invariants_json(q: &QuadInvariants) -> Value {
    json!({
        "dim": q.dim,
        "disc": q.disc.to_string(),
        "hasse_minus_one_at": q.hasse.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "signature": q.signature,
    })
}

fn certificate_json(c: &Certificate) -> Value {
    match c {
        Certificate::Invariants(q) => json!({"kind": "invariants", "invariants": invariants_json(q)}),
        Certificate::Alternating => json!({"kind": "alternating"}),
        Certificate::NormClass { rank, lambda_sq, disc, obstructions, signature } => json!({
            "kind": "norm_class",
            "rank": rank,
            "lambda_sq": lambda_sq.to_string(),
            "disc": disc.to_string(),
            "obstructions": obstructions.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "signature": signature,
        }),
        Certificate::Unsupported(why) => json!({"kind": "unsupported", "reason": why}),
        Certificate::Components(ds) => json!({"kind": "components", "components": ds.iter().map(decision_json).collect::<Vec<_>>()}),
    }
}

pub fn decision_json(d: &WittDecision) -> Value {
    json!({"verdict": d.verdict.label(), "certificate": certificate_json(&d.certificate)})
}

fn optional_decision(d: &Option<WittDecision>) -> Value {
    d.as_ref().map(decision_json).unwrap_or(json!({"verdict": "undecided", "certificate": {"kind": "unsupported", "reason": "base is not the rationals"}}))
}

pub fn sylvester_json(alg: &ComponentAlgebra, s: &SylvesterData) -> Value {
    json!({
        "w": scalars_json(&s.w),
        "u": scalars_json(&s.u),
        "v": scalars_json(&s.v),
        "c": element_json(alg, &s.c),
        "delta": s.delta,
        "witt_check": optional_decision(&s.witt_check),
        "signatures_agree": s.signatures_agree,
    })
}

pub fn nil_kill_json(alg: &ComponentAlgebra, n: &NilKill) -> Value {
    let q: Vec<Scalar> = (0..n.q.rank()).map(|i| n.q.entry(i, i)[0].clone()).collect();
    json!({
        "q": scalars_json(&q),
        "skew_unit": element_json(alg, &n.skew_unit),
        "c": element_json(alg, &n.c),
        "psd": n.is_psd,
        "verification": optional_decision(&n.verification),
    })
}

pub fn pfister_kill_json(p: &PfisterKill) -> Value {
    json!({
        "w": scalars_json(&p.w),
        "r": scalars_json(&p.r),
        "verification": optional_decision(&p.verification),
    })
}

pub fn plg_json(o: PlgOutcome) -> Value {
    match o {
        PlgOutcome::N(n) => json!({"outcome": "n", "n": n}),
        PlgOutcome::NotTorsion => json!({"outcome": "not_torsion"}),
        PlgOutcome::Undecided => json!({"outcome": "undecided"}),
    }
}

/// Coefficients c_pq of Σ c_pq e_p ⊗ e_q keyed by basis labels.
pub fn tensor_json(alg: &ComponentAlgebra, g: &TensorElement) -> Value {
    g.terms
        .iter()
        .map(|(&(p, q), c)| json!({"left": alg.basis_label(p), "right": alg.basis_label(q), "coefficient": scalar_json(c)}))
        .collect()
}
