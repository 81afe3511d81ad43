//! A connected algebra with involution (M_k(D), Int(u)∘ϑ^t) over K with
//! center S, where D = S or a quaternion algebra (a, b)_K.
//!
//! Elements are coordinate vectors over the S-basis of matrix units (row
//! major) times the D-basis (1, or 1, i, j, k).

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;

use super::base::{field_orderings, BaseRing, Ordering};
use crate::arith::{Scalar, Tower};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};

pub type AElem = Vec<Scalar>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Coefficients {
    Center,
    Quaternion { a: Scalar, b: Scalar },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InvolutionType {
    Orthogonal,
    Symplectic,
    Unitary,
}

#[derive(Debug, Clone)]
pub struct ComponentAlgebra {
    index: usize,
    tower: Arc<Tower>,
    coeff: Coefficients,
    k: usize,
    u: AElem,
    u_inv: AElem,
    delta: i8,
    canonical: bool,
    qtab: Vec<Vec<(Scalar, usize)>>,
}

impl PartialEq for ComponentAlgebra {
    fn eq(&self, o: &Self) -> bool {
        self.index == o.index
            && self.tower == o.tower
            && self.coeff == o.coeff
            && self.k == o.k
            && self.u == o.u
    }
}

impl Eq for ComponentAlgebra {}

fn quaternion_table(tower: &Arc<Tower>, coeff: &Coefficients) -> Vec<Vec<(Scalar, usize)>> {
    let one = tower.one();
    match coeff {
        Coefficients::Center => vec![vec![(one, 0)]],
        Coefficients::Quaternion { a, b } => {
            let ab = a * b;
            let neg = |x: &Scalar| -x;
            vec![
                vec![(one.clone(), 0), (one.clone(), 1), (one.clone(), 2), (one.clone(), 3)],
                vec![(one.clone(), 1), (a.clone(), 0), (one.clone(), 3), (a.clone(), 2)],
                vec![(one.clone(), 2), (neg(&one), 3), (b.clone(), 0), (neg(b), 1)],
                vec![(one.clone(), 3), (neg(a), 2), (b.clone(), 1), (neg(&ab), 0)],
            ]
        }
    }
}

impl ComponentAlgebra {
    /// Validates and builds the algebra. `inner` is the unit u of
    /// σ = Int(u)∘ϑ^t, absent for the canonical involution.
    pub fn new(
        index: usize,
        tower: Arc<Tower>,
        coeff: Coefficients,
        k: usize,
        inner: Option<AElem>,
    ) -> Result<ComponentAlgebra> {
        if k == 0 {
            return Err(Error::Parse("matrix_size must be at least 1".into()));
        }
        if let Coefficients::Quaternion { a, b } = &coeff {
            if tower.has_lambda() {
                return Err(Error::UnsupportedCombination(
                    "quaternion coefficients need center equal to the base".into(),
                ));
            }
            if a.is_zero() || b.is_zero() {
                return Err(Error::InvalidScalar("quaternion parameters must be units".into()));
            }
        }
        let qtab = quaternion_table(&tower, &coeff);
        let mut alg = ComponentAlgebra {
            index,
            tower,
            coeff,
            k,
            u: Vec::new(),
            u_inv: Vec::new(),
            delta: 1,
            canonical: true,
            qtab,
        };
        alg.u = alg.one();
        alg.u_inv = alg.one();
        if let Some(u) = inner {
            alg.install_inner(u)?;
        }
        Ok(alg)
    }

    fn install_inner(&mut self, u: AElem) -> Result<()> {
        if u.len() != self.t() {
            return Err(Error::Parse("inner unit has the wrong size".into()));
        }
        let u_inv = self
            .inv(&u)
            .map_err(|_| Error::SingularUnit("u is not invertible".into()))?;
        let tu = self.theta_t(&u);
        let delta = if tu == u {
            1
        } else if tu == self.neg(&u) {
            -1
        } else {
            return Err(Error::NotAnInvolution("ϑ^t(u) is not ±u".into()));
        };
        if self.central_value(&u).is_some() {
            // Int(u) is trivial: the involution is canonical.
            return Ok(());
        }
        // Normalize by a K-scalar so δ is unchanged.
        let first = u.iter().find(|z| !z.is_zero()).expect("u is a unit");
        let kpart = if first.alpha().iter().any(|x| !num_traits::Zero::is_zero(x)) {
            self.tower.k_element(first.alpha())?
        } else {
            self.tower.k_element(first.beta())?
        };
        let c = kpart.inv()?;
        self.u = self.scale(&u, &c);
        self.u_inv = self.scale(&u_inv, &kpart);
        self.delta = delta;
        self.canonical = false;
        for p in 0..self.t() {
            let e = self.basis(p);
            if self.sigma(&self.sigma(&e)) != e {
                return Err(Error::NotAnInvolution("σ² ≠ id on a basis element".into()));
            }
        }
        Ok(())
    }

    /// Same shape, different involution.
    pub fn with_inner(&self, u: Option<AElem>) -> Result<ComponentAlgebra> {
        ComponentAlgebra::new(self.index, self.tower.clone(), self.coeff.clone(), self.k, u)
    }

    /// Same algebra viewed as component `index` of a product.
    pub fn reindexed(&self, index: usize) -> ComponentAlgebra {
        let mut a = self.clone();
        a.index = index;
        a
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn tower(&self) -> &Arc<Tower> {
        &self.tower
    }

    pub fn base_tower(&self) -> Arc<Tower> {
        self.tower.base()
    }

    pub fn base_ring(&self) -> BaseRing {
        match self.tower.m() {
            None => BaseRing::Rationals,
            Some(m) => BaseRing::RealQuadratic(m.clone()),
        }
    }

    pub fn coefficients(&self) -> &Coefficients {
        &self.coeff
    }

    pub fn quaternion(&self) -> Option<(&Scalar, &Scalar)> {
        match &self.coeff {
            Coefficients::Quaternion { a, b } => Some((a, b)),
            Coefficients::Center => None,
        }
    }

    pub fn matrix_size(&self) -> usize {
        self.k
    }

    /// dim_S D.
    pub fn dd(&self) -> usize {
        match self.coeff {
            Coefficients::Center => 1,
            Coefficients::Quaternion { .. } => 4,
        }
    }

    /// rk_S A.
    pub fn t(&self) -> usize {
        self.k * self.k * self.dd()
    }

    pub fn deg(&self) -> usize {
        self.k * if self.dd() == 4 { 2 } else { 1 }
    }

    pub fn is_unitary(&self) -> bool {
        self.tower.has_lambda()
    }

    pub fn dim_over_base(&self) -> usize {
        self.t() * if self.is_unitary() { 2 } else { 1 }
    }

    /// n_P = dim_K A / deg A, the normalization of transfer signatures.
    pub fn transfer_normalization(&self) -> usize {
        self.dim_over_base() / self.deg()
    }

    pub fn inner_unit(&self) -> &AElem {
        &self.u
    }

    pub fn inner_unit_inverse(&self) -> &AElem {
        &self.u_inv
    }

    pub fn delta(&self) -> i8 {
        self.delta
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    /// σ = Int(u)∘ϑ^t with ϑ^t(u) = δu; u = 1 for canonical involutions.
    pub fn decompose_involution(&self) -> (AElem, i8) {
        (self.u.clone(), self.delta)
    }

    pub fn idx(&self, i: usize, j: usize, q: usize) -> usize {
        (i * self.k + j) * self.dd() + q
    }

    pub fn zero(&self) -> AElem {
        vec![self.tower.zero(); self.t()]
    }

    pub fn one(&self) -> AElem {
        self.from_scalar(&self.tower.one())
    }

    pub fn from_scalar(&self, s: &Scalar) -> AElem {
        let mut x = self.zero();
        for i in 0..self.k {
            x[self.idx(i, i, 0)] = s.clone();
        }
        x
    }

    pub fn basis(&self, p: usize) -> AElem {
        let mut x = self.zero();
        x[p] = self.tower.one();
        x
    }

    pub fn is_zero(&self, x: &AElem) -> bool {
        x.iter().all(Scalar::is_zero)
    }

    pub fn add(&self, x: &AElem, y: &AElem) -> AElem {
        x.iter().zip(y).map(|(a, b)| a + b).collect()
    }

    pub fn sub(&self, x: &AElem, y: &AElem) -> AElem {
        x.iter().zip(y).map(|(a, b)| a - b).collect()
    }

    pub fn neg(&self, x: &AElem) -> AElem {
        x.iter().map(|a| -a).collect()
    }

    /// x·s for a central scalar s.
    pub fn scale(&self, x: &AElem, s: &Scalar) -> AElem {
        x.iter().map(|a| a * s).collect()
    }

    pub fn mul(&self, x: &AElem, y: &AElem) -> AElem {
        let (k, dd) = (self.k, self.dd());
        let mut out = self.zero();
        for i in 0..k {
            for j in 0..k {
                for q1 in 0..dd {
                    let xv = &x[self.idx(i, j, q1)];
                    if xv.is_zero() {
                        continue;
                    }
                    for l in 0..k {
                        for q2 in 0..dd {
                            let yv = &y[self.idx(j, l, q2)];
                            if yv.is_zero() {
                                continue;
                            }
                            let (c, q3) = &self.qtab[q1][q2];
                            let o = self.idx(i, l, *q3);
                            out[o] = &out[o] + &(&(xv * yv) * c);
                        }
                    }
                }
            }
        }
        out
    }

    /// e_p·e_q as (coefficient, basis index), or `None` when it vanishes.
    pub fn basis_mul(&self, p: usize, q: usize) -> Option<(Scalar, usize)> {
        let dd = self.dd();
        let (m1, q1) = (p / dd, p % dd);
        let (m2, q2) = (q / dd, q % dd);
        let (i, j) = (m1 / self.k, m1 % self.k);
        let (j2, l) = (m2 / self.k, m2 % self.k);
        if j != j2 {
            return None;
        }
        let (c, q3) = &self.qtab[q1][q2];
        Some((c.clone(), self.idx(i, l, *q3)))
    }

    fn conj_entry(&self, e: &[Scalar]) -> Vec<Scalar> {
        match self.coeff {
            Coefficients::Center => vec![e[0].iota()],
            Coefficients::Quaternion { .. } => {
                vec![e[0].clone(), -&e[1], -&e[2], -&e[3]]
            }
        }
    }

    /// The canonical involution ϑ^t: conjugate transpose.
    pub fn theta_t(&self, x: &AElem) -> AElem {
        let dd = self.dd();
        let mut out = self.zero();
        for i in 0..self.k {
            for j in 0..self.k {
                let src = self.idx(j, i, 0);
                let c = self.conj_entry(&x[src..src + dd]);
                let dst = self.idx(i, j, 0);
                out[dst..dst + dd].clone_from_slice(&c);
            }
        }
        out
    }

    pub fn sigma(&self, x: &AElem) -> AElem {
        let t = self.theta_t(x);
        if self.canonical {
            t
        } else {
            self.mul(&self.mul(&self.u, &t), &self.u_inv)
        }
    }

    /// Reduced trace Trd_A(x) ∈ S.
    pub fn trd(&self, x: &AElem) -> Scalar {
        let mut s = self.tower.zero();
        for i in 0..self.k {
            s = &s + &x[self.idx(i, i, 0)];
        }
        if self.dd() == 4 {
            &s + &s
        } else {
            s
        }
    }

    /// Matrix of y ↦ x·y on the S-basis (rows: output coordinates).
    pub fn left_mul_matrix(&self, x: &AElem) -> Matrix {
        let t = self.t();
        let mut m = vec![vec![self.tower.zero(); t]; t];
        for q in 0..t {
            let col = self.mul(x, &self.basis(q));
            for (r, v) in col.into_iter().enumerate() {
                m[r][q] = v;
            }
        }
        m
    }

    pub fn inv(&self, x: &AElem) -> Result<AElem> {
        if let Some(s) = self.central_value(x) {
            return Ok(self.from_scalar(&s.inv()?));
        }
        if self.k == 1 && self.dd() == 4 {
            // x⁻¹ = x̄ / Nrd(x)
            let n = self.nrd_quaternion(x);
            if n.is_zero() {
                return Err(Error::SingularUnit("quaternion of reduced norm 0".into()));
            }
            return Ok(self.scale(&self.theta_t(x), &n.inv()?));
        }
        let m = self.left_mul_matrix(x);
        linalg::solve(&m, &self.one()).ok_or_else(|| Error::SingularUnit("element is not a unit".into()))
    }

    /// Nrd for the k = 1 quaternion case: x·x̄.
    pub fn nrd_quaternion(&self, x: &AElem) -> Scalar {
        self.mul(x, &self.theta_t(x))[0].clone()
    }

    pub fn is_unit(&self, x: &AElem) -> bool {
        self.inv(x).is_ok()
    }

    /// s when x = s·1 for a central s.
    pub fn central_value(&self, x: &AElem) -> Option<Scalar> {
        let s = x[0].clone();
        (self.from_scalar(&s) == *x).then_some(s)
    }

    /// D-entry (i, j) of x.
    pub fn entry(&self, x: &AElem, i: usize, j: usize) -> Vec<Scalar> {
        let p = self.idx(i, j, 0);
        x[p..p + self.dd()].to_vec()
    }

    pub fn set_entry(&self, x: &mut AElem, i: usize, j: usize, e: &[Scalar]) {
        let p = self.idx(i, j, 0);
        x[p..p + self.dd()].clone_from_slice(e);
    }

    pub fn involution_type(&self) -> InvolutionType {
        if self.is_unitary() {
            return InvolutionType::Unitary;
        }
        let canonical_orthogonal = self.dd() == 1;
        if canonical_orthogonal == (self.delta == 1) {
            InvolutionType::Orthogonal
        } else {
            InvolutionType::Symplectic
        }
    }

    pub fn orderings(&self) -> Vec<Ordering> {
        field_orderings(&self.base_ring(), self.index)
    }

    pub fn check_ordering(&self, p: &Ordering) -> Result<()> {
        if self.orderings().contains(p) {
            Ok(())
        } else {
            Err(Error::OrderingMismatch(p.key()))
        }
    }

    pub fn is_nil(&self, p: &Ordering) -> Result<bool> {
        self.check_ordering(p)?;
        let e = p.embedding_sign;
        let pos = |s: &Scalar| s.sign_at(e).map(|v| v > 0);
        Ok(match (self.involution_type(), &self.coeff) {
            (InvolutionType::Unitary, _) => {
                let d = self.tower.k_element(self.tower.d().expect("unitary"))?;
                pos(&d)?
            }
            (InvolutionType::Orthogonal, Coefficients::Center) => false,
            (InvolutionType::Symplectic, Coefficients::Center) => true,
            (InvolutionType::Orthogonal, Coefficients::Quaternion { a, b }) => !pos(a)? && !pos(b)?,
            (InvolutionType::Symplectic, Coefficients::Quaternion { a, b }) => pos(a)? || pos(b)?,
        })
    }

    pub fn nil_orderings(&self) -> Vec<Ordering> {
        self.orderings()
            .into_iter()
            .filter(|p| self.is_nil(p).unwrap_or(false))
            .collect()
    }

    /// (D, ϑ) as an algebra of its own (k = 1, canonical).
    pub fn coefficient_algebra(&self) -> ComponentAlgebra {
        ComponentAlgebra::new(self.index, self.tower.clone(), self.coeff.clone(), 1, None)
            .expect("coefficient ring of a valid algebra")
    }

    /// (S, ι).
    pub fn center_algebra(&self) -> ComponentAlgebra {
        ComponentAlgebra::new(self.index, self.tower.clone(), Coefficients::Center, 1, None)
            .expect("center of a valid algebra")
    }

    /// (K, id).
    pub fn base_algebra(&self) -> ComponentAlgebra {
        ComponentAlgebra::new(self.index, self.tower.base(), Coefficients::Center, 1, None)
            .expect("base field of a valid algebra")
    }

    /// Whether the algebra is its own center with ι (k = 1, D = S, canonical).
    pub fn is_center_type(&self) -> bool {
        self.k == 1 && self.dd() == 1 && self.canonical
    }

    /// Extends scalars from ℚ to ℚ(√m).
    pub fn extend_base(&self, m: &BigInt) -> Result<ComponentAlgebra> {
        let tower = self.tower.extend_base(m)?;
        let lift = |x: &AElem| -> Result<AElem> { x.iter().map(|s| s.lift_to(&tower)).collect() };
        let coeff = match &self.coeff {
            Coefficients::Center => Coefficients::Center,
            Coefficients::Quaternion { a, b } => Coefficients::Quaternion {
                a: a.lift_to(&tower)?,
                b: b.lift_to(&tower)?,
            },
        };
        let inner = if self.canonical { None } else { Some(lift(&self.u)?) };
        ComponentAlgebra::new(self.index, tower, coeff, self.k, inner)
    }

    pub fn lift_elem(&self, x: &AElem) -> Result<AElem> {
        x.iter().map(|s| s.lift_to(&self.tower)).collect()
    }

    /// Human-readable label of basis index p, e.g. "e12", "i", "e21·k".
    pub fn basis_label(&self, p: usize) -> String {
        let dd = self.dd();
        let (m, q) = (p / dd, p % dd);
        let (i, j) = (m / self.k, m % self.k);
        let qs = ["1", "i", "j", "k"][q];
        match (self.k, dd) {
            (1, 1) => "1".into(),
            (1, _) => qs.into(),
            (_, 1) => format!("e{}{}", i + 1, j + 1),
            _ if q == 0 => format!("e{}{}", i + 1, j + 1),
            _ => format!("e{}{}·{}", i + 1, j + 1, qs),
        }
    }

    /// Whether σ(x) = ±x; returns the sign.
    pub fn symmetry_sign(&self, x: &AElem) -> Option<i8> {
        let s = self.sigma(x);
        if s == *x {
            Some(1)
        } else if s == self.neg(x) {
            Some(-1)
        } else {
            None
        }
    }

    /// Sign of the radicand, for orderings bookkeeping.
    pub fn has_real_orderings(&self) -> bool {
        self.tower.m().map_or(true, |m| m.is_positive())
    }
}
