//! Elements of the tower ℚ ⊆ K ⊆ S, where K = ℚ or ℚ(√m) and S = K or
//! K(λ) with λ² = d ∈ K.
//!
//! A scalar always lives at the top of its tower. K-elements are the scalars
//! whose λ-part vanishes.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::rational::{is_rational_square, rational_sign, Rational};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tower {
    m: Option<BigInt>,
    d: Option<Vec<Rational>>,
}

impl Tower {
    pub fn rationals() -> Arc<Tower> {
        Arc::new(Tower { m: None, d: None })
    }

    /// Builds K = ℚ(√m) (or ℚ) and optionally S = K(λ), λ² = d. `d` is given
    /// by its K-coordinates.
    pub fn new(m: Option<BigInt>, d: Option<Vec<Rational>>) -> Result<Arc<Tower>> {
        if let Some(m) = &m {
            if m.is_zero() || m.is_one() || !is_squarefree(m) {
                return Err(Error::InvalidScalar(format!("radicand {m} is not squarefree")));
            }
        }
        let kdim = if m.is_some() { 2 } else { 1 };
        if let Some(d) = &d {
            if d.len() != kdim {
                return Err(Error::InvalidScalar("d has the wrong number of coordinates".into()));
            }
            if d.iter().all(Zero::is_zero) {
                return Err(Error::InvalidScalar("d must be a unit".into()));
            }
        }
        let t = Tower { m, d };
        if let Some(d) = &t.d {
            if t.k_sqrt(d).is_some() {
                return Err(Error::SplitCenter(format!(
                    "d = {} is a square in the base",
                    t.base_scalar_string(d)
                )));
            }
        }
        Ok(Arc::new(t))
    }

    pub fn m(&self) -> Option<&BigInt> {
        self.m.as_ref()
    }

    pub fn d(&self) -> Option<&[Rational]> {
        self.d.as_deref()
    }

    pub fn kdim(&self) -> usize {
        if self.m.is_some() {
            2
        } else {
            1
        }
    }

    pub fn sdim(&self) -> usize {
        self.kdim() * if self.d.is_some() { 2 } else { 1 }
    }

    pub fn has_lambda(&self) -> bool {
        self.d.is_some()
    }

    /// The tower truncated at K.
    pub fn base(&self) -> Arc<Tower> {
        Arc::new(Tower { m: self.m.clone(), d: None })
    }

    /// The same λ-extension over ℚ(√m) instead of ℚ. Only valid when K = ℚ.
    pub fn extend_base(&self, m: &BigInt) -> Result<Arc<Tower>> {
        if self.m.is_some() {
            return Err(Error::UnsupportedBase("base is already quadratic".into()));
        }
        let d = self
            .d
            .as_ref()
            .map(|d| vec![d[0].clone(), Rational::zero()]);
        Tower::new(Some(m.clone()), d)
    }

    fn kmul(&self, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        match &self.m {
            None => vec![&a[0] * &b[0]],
            Some(m) => {
                let m = Rational::from_integer(m.clone());
                vec![
                    &a[0] * &b[0] + &m * &a[1] * &b[1],
                    &a[0] * &b[1] + &a[1] * &b[0],
                ]
            }
        }
    }

    fn kinv(&self, a: &[Rational]) -> Option<Vec<Rational>> {
        match &self.m {
            None => (!a[0].is_zero()).then(|| vec![a[0].recip()]),
            Some(m) => {
                let m = Rational::from_integer(m.clone());
                let n = &a[0] * &a[0] - &m * &a[1] * &a[1];
                (!n.is_zero()).then(|| vec![&a[0] / &n, -&a[1] / &n])
            }
        }
    }

    /// Square root in K if it exists.
    fn k_sqrt(&self, a: &[Rational]) -> Option<Vec<Rational>> {
        match &self.m {
            None => is_rational_square(&a[0]).map(|r| vec![r]),
            Some(m) => {
                let mq = Rational::from_integer(m.clone());
                if a[1].is_zero() {
                    if let Some(r) = is_rational_square(&a[0]) {
                        return Some(vec![r, Rational::zero()]);
                    }
                    return is_rational_square(&(&a[0] / &mq)).map(|r| vec![Rational::zero(), r]);
                }
                // (x + y√m)² = a0 + a1√m needs x² + m y² = a0, 2xy = a1.
                let n = &a[0] * &a[0] - &mq * &a[1] * &a[1];
                let n = is_rational_square(&n)?;
                let two = Rational::from_integer(2.into());
                for x2 in [(&a[0] + &n) / &two, (&a[0] - &n) / &two] {
                    if x2.is_zero() {
                        continue;
                    }
                    if let Some(x) = is_rational_square(&x2) {
                        let y = &a[1] / (&two * &x);
                        return Some(vec![x, y]);
                    }
                }
                None
            }
        }
    }

    /// Sign of a K-element under the embedding √m ↦ emb·√|m|.
    fn k_sign(&self, a: &[Rational], emb: i8) -> i8 {
        match &self.m {
            None => rational_sign(&a[0]),
            Some(m) => {
                let s0 = rational_sign(&a[0]);
                let b = if emb < 0 { -&a[1] } else { a[1].clone() };
                let s1 = rational_sign(&b);
                if s1 == 0 || s0 == s1 {
                    return if s0 == 0 { s1 } else { s0 };
                }
                if s0 == 0 {
                    return s1;
                }
                let lhs = &a[0] * &a[0];
                let rhs = &b * &b * Rational::from_integer(m.clone());
                if lhs > rhs {
                    s0
                } else {
                    s1
                }
            }
        }
    }

    fn base_scalar_string(&self, a: &[Rational]) -> String {
        match &self.m {
            None => a[0].to_string(),
            Some(m) => format!("{} + {}·√{}", a[0], a[1], m),
        }
    }

    pub fn zero(self: &Arc<Self>) -> Scalar {
        Scalar { tower: self.clone(), c: vec![Rational::zero(); self.sdim()] }
    }

    pub fn one(self: &Arc<Self>) -> Scalar {
        self.rational(Rational::one())
    }

    pub fn int(self: &Arc<Self>, n: i64) -> Scalar {
        self.rational(Rational::from_integer(n.into()))
    }

    pub fn rational(self: &Arc<Self>, r: Rational) -> Scalar {
        let mut s = self.zero();
        s.c[0] = r;
        s
    }

    /// K-element a0 + a1·√m.
    pub fn k_element(self: &Arc<Self>, k: &[Rational]) -> Result<Scalar> {
        if k.len() != self.kdim() {
            return Err(Error::InvalidScalar("wrong number of base coordinates".into()));
        }
        let mut s = self.zero();
        s.c[..k.len()].clone_from_slice(k);
        Ok(s)
    }

    /// α + β·λ from K-coordinates of α and β.
    pub fn s_element(self: &Arc<Self>, alpha: &[Rational], beta: &[Rational]) -> Result<Scalar> {
        let kd = self.kdim();
        if !self.has_lambda() || alpha.len() != kd || beta.len() != kd {
            return Err(Error::InvalidScalar("not a λ-extension element".into()));
        }
        let mut c = alpha.to_vec();
        c.extend_from_slice(beta);
        Ok(Scalar { tower: self.clone(), c })
    }

    /// A scalar from its full coordinate vector.
    pub fn scalar(self: &Arc<Self>, c: Vec<Rational>) -> Result<Scalar> {
        if c.len() != self.sdim() {
            return Err(Error::InvalidScalar("wrong number of coordinates".into()));
        }
        Ok(Scalar { tower: self.clone(), c })
    }

    pub fn sqrt_m(self: &Arc<Self>) -> Option<Scalar> {
        self.m.as_ref()?;
        let mut s = self.zero();
        s.c[1] = Rational::one();
        Some(s)
    }

    pub fn lambda(self: &Arc<Self>) -> Option<Scalar> {
        self.d.as_ref()?;
        let mut s = self.zero();
        s.c[self.kdim()] = Rational::one();
        Some(s)
    }

    /// K-basis of S: (1) or (1, λ).
    pub fn s_basis_over_k(self: &Arc<Self>) -> Vec<Scalar> {
        let mut b = vec![self.one()];
        if let Some(l) = self.lambda() {
            b.push(l);
        }
        b
    }
}

fn is_squarefree(m: &BigInt) -> bool {
    super::symbols::factorize(m).values().all(|&e| e == 1)
}

#[derive(Clone)]
pub struct Scalar {
    tower: Arc<Tower>,
    c: Vec<Rational>,
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c
    }
}

impl Eq for Scalar {}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kd = self.tower.kdim();
        let k = |a: &[Rational]| self.tower.base_scalar_string(a);
        if self.tower.has_lambda() {
            write!(f, "({}) + ({})·λ", k(&self.c[..kd]), k(&self.c[kd..]))
        } else {
            write!(f, "{}", k(&self.c))
        }
    }
}

impl Scalar {
    pub fn tower(&self) -> &Arc<Tower> {
        &self.tower
    }

    pub fn coords(&self) -> &[Rational] {
        &self.c
    }

    pub fn zero_like(&self) -> Scalar {
        self.tower.zero()
    }

    pub fn one_like(&self) -> Scalar {
        self.tower.one()
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(Zero::is_zero)
    }

    /// K-coordinates of α in α + βλ.
    pub fn alpha(&self) -> &[Rational] {
        &self.c[..self.tower.kdim()]
    }

    pub fn beta(&self) -> &[Rational] {
        if self.tower.has_lambda() {
            &self.c[self.tower.kdim()..]
        } else {
            &[]
        }
    }

    pub fn in_base(&self) -> bool {
        self.beta().iter().all(Zero::is_zero)
    }

    pub fn to_rational(&self) -> Option<&Rational> {
        self.c[1..].iter().all(Zero::is_zero).then(|| &self.c[0])
    }

    /// The involution ι of S over K (identity when S = K).
    pub fn iota(&self) -> Scalar {
        let mut c = self.c.clone();
        let kd = self.tower.kdim();
        if self.tower.has_lambda() {
            for x in &mut c[kd..] {
                *x = -x.clone();
            }
        }
        Scalar { tower: self.tower.clone(), c }
    }

    /// Tr_{S/K}(x) = x + ι(x) when S ≠ K, the identity when S = K.
    pub fn trace_to_base(&self) -> Scalar {
        if self.tower.has_lambda() {
            let mut s = self.zero_like();
            for (i, a) in self.alpha().iter().enumerate() {
                s.c[i] = a * Rational::from_integer(2.into());
            }
            s
        } else {
            self.clone()
        }
    }

    /// The same element read in the tower truncated at K. Fails if β ≠ 0.
    pub fn to_base(&self, base: &Arc<Tower>) -> Result<Scalar> {
        if !self.in_base() {
            return Err(Error::InvalidScalar(format!("{self} is not in the base field")));
        }
        base.k_element(self.alpha())
    }

    /// Re-embeds a scalar from a compatible smaller tower (K-element, or the
    /// same λ-extension over ℚ inside ℚ(√m)).
    pub fn lift_to(&self, tower: &Arc<Tower>) -> Result<Scalar> {
        if Arc::ptr_eq(&self.tower, tower) || *self.tower == **tower {
            return Ok(Scalar { tower: tower.clone(), c: self.c.clone() });
        }
        let src_kd = self.tower.kdim();
        let dst_kd = tower.kdim();
        let widen = |a: &[Rational]| -> Vec<Rational> {
            let mut v = a.to_vec();
            v.resize(dst_kd, Rational::zero());
            v
        };
        if src_kd > dst_kd {
            return Err(Error::InvalidScalar("cannot narrow the base".into()));
        }
        if self.tower.has_lambda() {
            if !tower.has_lambda() {
                return Err(Error::InvalidScalar("target tower lacks λ".into()));
            }
            tower.s_element(&widen(self.alpha()), &widen(self.beta()))
        } else {
            tower.k_element(&widen(self.alpha()))
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        let t = &self.tower;
        let kd = t.kdim();
        let err = || Error::SingularUnit(format!("{self} is zero"));
        if !t.has_lambda() {
            let c = t.kinv(&self.c).ok_or_else(err)?;
            return Ok(Scalar { tower: t.clone(), c });
        }
        // (α + βλ)⁻¹ = (α − βλ)/(α² − β²d)
        let (a, b) = (&self.c[..kd], &self.c[kd..]);
        let d = t.d.as_ref().expect("λ-extension");
        let aa = t.kmul(a, a);
        let bbd = t.kmul(&t.kmul(b, b), d);
        let n: Vec<Rational> = aa.iter().zip(&bbd).map(|(x, y)| x - y).collect();
        let ni = t.kinv(&n).ok_or_else(err)?;
        let mut c = t.kmul(a, &ni);
        c.extend(t.kmul(b, &ni).into_iter().map(|x| -x));
        Ok(Scalar { tower: t.clone(), c })
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        Ok(self * &other.inv()?)
    }

    /// x·ι(x), which lies in K.
    pub fn norm_to_base(&self) -> Scalar {
        self * &self.iota()
    }

    /// Sign of a K-element at the embedding choosing the sign of √m.
    pub fn sign_at(&self, embedding_sign: i8) -> Result<i8> {
        if !self.in_base() {
            return Err(Error::InvalidScalar(format!("{self} has no sign: not in the base")));
        }
        Ok(self.tower.k_sign(self.alpha(), embedding_sign))
    }

    pub fn scale(&self, r: &Rational) -> Scalar {
        Scalar { tower: self.tower.clone(), c: self.c.iter().map(|x| x * r).collect() }
    }

    pub fn pow(&self, mut e: u32) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Whether `self` is a square in K (requires a K-element).
    pub fn is_base_square(&self) -> bool {
        self.in_base() && self.tower.k_sqrt(self.alpha()).is_some()
    }

    pub fn is_negative_rational(&self) -> bool {
        self.to_rational().is_some_and(Signed::is_negative)
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        Scalar {
            tower: self.tower.clone(),
            c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        Scalar {
            tower: self.tower.clone(),
            c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { tower: self.tower.clone(), c: self.c.iter().map(|a| -a).collect() }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        let t = &self.tower;
        if !t.has_lambda() {
            return Scalar { tower: t.clone(), c: t.kmul(&self.c, &o.c) };
        }
        let kd = t.kdim();
        let (a, b) = (&self.c[..kd], &self.c[kd..]);
        let (x, y) = (&o.c[..kd], &o.c[kd..]);
        let d = t.d.as_ref().expect("λ-extension");
        let ax = t.kmul(a, x);
        let byd = t.kmul(&t.kmul(b, y), d);
        let ay = t.kmul(a, y);
        let bx = t.kmul(b, x);
        let mut c: Vec<Rational> = ax.iter().zip(&byd).map(|(p, q)| p + q).collect();
        c.extend(ay.iter().zip(&bx).map(|(p, q)| p + q));
        Scalar { tower: t.clone(), c }
    }
}
