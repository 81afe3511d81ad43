//! Seeded generators of algebras, elements and forms for the verification
//! suites. Matrix size ≤ 3, scalar heights ≤ 8, rank ≤ 4 by default.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{AElem, Coefficients, ComponentAlgebra};
use crate::arith::{rq, Rational, Scalar, Tower};
use crate::error::{Error, Result};
use crate::forms::HermForm;

const RETRIES: usize = 200;

#[derive(Debug, Clone, Copy)]
pub struct Bounds {
    pub max_k: usize,
    pub height: i64,
    pub max_rank: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { max_k: 3, height: 8, max_rank: 4 }
    }
}

pub struct Gen {
    rng: ChaCha8Rng,
    pub bounds: Bounds,
}

/// The named algebras of the calibration table, all over ℚ, plus ℚ(i).
pub fn zoo() -> Vec<(&'static str, Arc<ComponentAlgebra>)> {
    let q = Tower::rationals();
    let gi = Tower::new(None, Some(vec![rq(-1, 1)])).expect("ℚ(i)");
    let quat = |a: i64, b: i64| Coefficients::Quaternion { a: q.int(a), b: q.int(b) };
    let mk = |t: &Arc<Tower>, c: Coefficients, k: usize| {
        Arc::new(ComponentAlgebra::new(0, t.clone(), c, k, None).expect("zoo algebra"))
    };
    vec![
        ("Q", mk(&q, Coefficients::Center, 1)),
        ("M2(Q)", mk(&q, Coefficients::Center, 2)),
        ("M3(Q)", mk(&q, Coefficients::Center, 3)),
        ("(-1,-1)_Q", mk(&q, quat(-1, -1), 1)),
        ("(-1,2)_Q", mk(&q, quat(-1, 2), 1)),
        ("M2((-1,-1)_Q)", mk(&q, quat(-1, -1), 2)),
        ("M2(Q(i))", mk(&gi, Coefficients::Center, 2)),
        ("Q(i)", mk(&gi, Coefficients::Center, 1)),
    ]
}

impl Gen {
    pub fn new(seed: u64) -> Gen {
        Gen { rng: ChaCha8Rng::seed_from_u64(seed), bounds: Bounds::default() }
    }

    pub fn with_bounds(seed: u64, bounds: Bounds) -> Gen {
        Gen { rng: ChaCha8Rng::seed_from_u64(seed), bounds }
    }

    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn coin(&mut self) -> bool {
        self.rng.gen_bool(0.5)
    }

    pub fn pick<'a, T>(&mut self, xs: &'a [T]) -> &'a T {
        xs.choose(&mut self.rng).expect("nonempty choice")
    }

    pub fn nonzero_int(&mut self) -> i64 {
        let h = self.bounds.height.max(1);
        loop {
            let n = self.range(-h, h);
            if n != 0 {
                return n;
            }
        }
    }

    /// n/d with |n| ≤ height and 1 ≤ d ≤ 3.
    pub fn rational(&mut self) -> Rational {
        let h = self.bounds.height.max(1);
        let n = self.range(-h, h);
        let d = self.range(1, 3.min(h));
        rq(n, d)
    }

    pub fn nonzero_rational(&mut self) -> Rational {
        rq(self.nonzero_int(), self.range(1, 3.min(self.bounds.height.max(1))))
    }

    /// A nonzero element of K.
    pub fn unit_k(&mut self, tower: &Arc<Tower>) -> Scalar {
        loop {
            let c: Vec<Rational> = (0..tower.kdim()).map(|i| if i == 0 { self.rational() } else { self.small() }).collect();
            let s = tower.k_element(&c).expect("K coordinates");
            if !s.is_zero() {
                return s;
            }
        }
    }

    fn small(&mut self) -> Rational {
        if self.coin() {
            Rational::default()
        } else {
            rq(self.range(-2, 2), 1)
        }
    }

    /// A random element with sparse coordinates in [−2, 2].
    pub fn element(&mut self, alg: &ComponentAlgebra) -> AElem {
        let tower = alg.tower();
        (0..alg.t())
            .map(|_| {
                let c = (0..tower.sdim()).map(|_| self.small()).collect();
                tower.scalar(c).expect("coordinates")
            })
            .collect()
    }

    /// A unit a with σ(a) = sign·a, as x + sign·σ(x) for random x.
    pub fn symmetric_unit(&mut self, alg: &ComponentAlgebra, sign: i8) -> Result<AElem> {
        for _ in 0..RETRIES {
            let x = self.element(alg);
            let sx = alg.sigma(&x);
            let a = if sign == 1 { alg.add(&x, &sx) } else { alg.sub(&x, &sx) };
            if !alg.is_zero(&a) && alg.is_unit(&a) {
                return Ok(a);
            }
        }
        Err(Error::SearchBudgetExceeded(RETRIES))
    }

    /// ⟨a₁, …, a_r⟩ with ε-symmetric unit entries.
    pub fn diagonal_form(&mut self, alg: &Arc<ComponentAlgebra>, epsilon: i8, rank: usize) -> Result<HermForm> {
        let entries = (0..rank)
            .map(|_| self.symmetric_unit(alg, epsilon))
            .collect::<Result<Vec<_>>>()?;
        HermForm::diagonal(alg.clone(), epsilon, entries)
    }

    /// σ(M)ᵀ·D·M for a random diagonal D and a random unitriangular M, so the
    /// result is nonsingular but generally not diagonal.
    pub fn form(&mut self, alg: &Arc<ComponentAlgebra>, epsilon: i8, rank: usize) -> Result<HermForm> {
        let d = self.diagonal_form(alg, epsilon, rank)?;
        let mut m = vec![vec![alg.zero(); rank]; rank];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = alg.one();
            for x in row.iter_mut().skip(i + 1) {
                if self.coin() {
                    *x = self.element(alg);
                }
            }
        }
        let mut gram = BTreeMap::new();
        for i in 0..rank {
            for j in 0..rank {
                let mut acc = alg.zero();
                for (kk, row) in m.iter().enumerate() {
                    let l = alg.mul(&alg.sigma(&row[i]), &d.entry(kk, kk));
                    acc = alg.add(&acc, &alg.mul(&l, &row[j]));
                }
                gram.insert((i, j), acc);
            }
        }
        gram.retain(|_, x| !alg.is_zero(x));
        HermForm::from_entries(alg.clone(), epsilon, rank, gram)
    }

    /// A diagonal form over K with entries of the given tower's base.
    pub fn quad_form(&mut self, base: &Arc<ComponentAlgebra>, rank: usize) -> Result<HermForm> {
        let t = base.tower().clone();
        let e: Vec<Scalar> = (0..rank).map(|_| self.unit_k(&t)).collect();
        HermForm::diagonal_scalars(base.clone(), 1, &e)
    }

    pub fn rank(&mut self) -> usize {
        self.rng.gen_range(1..=self.bounds.max_rank.max(1))
    }

    fn nonsquare(&mut self, choices: &[i64]) -> i64 {
        *self.pick(choices)
    }

    /// A random connected algebra. `rational_base` restricts K to ℚ.
    pub fn algebra(&mut self, rational_base: bool) -> Result<Arc<ComponentAlgebra>> {
        for _ in 0..RETRIES {
            if let Ok(a) = self.try_algebra(rational_base) {
                return Ok(Arc::new(a));
            }
        }
        Err(Error::SearchBudgetExceeded(RETRIES))
    }

    fn try_algebra(&mut self, rational_base: bool) -> Result<ComponentAlgebra> {
        let m = if rational_base || self.index(4) != 0 {
            None
        } else {
            Some(BigInt::from(self.nonsquare(&[2, 3, 5])))
        };
        let unitary = self.index(3) == 0;
        let d = unitary.then(|| vec![Rational::from_integer(self.nonsquare(&[-1, -2, -3, 2, 3, 5, -5]).into())]);
        let d = d.map(|mut v| {
            if m.is_some() {
                v.push(Rational::default());
            }
            v
        });
        let tower = Tower::new(m, d)?;
        let quaternion = !unitary && self.coin();
        let coeff = if quaternion {
            let a = self.nonsquare(&[-1, -2, -3, 2, 3, 5, -5, -6, 6, 7]);
            let b = self.nonsquare(&[-1, -2, -3, 2, 3, 5, -5, -6, 6, 7]);
            Coefficients::Quaternion { a: tower.int(a), b: tower.int(b) }
        } else {
            Coefficients::Center
        };
        let max_k = if quaternion { self.bounds.max_k.min(2) } else { self.bounds.max_k };
        let k = self.rng.gen_range(1..=max_k.max(1));
        let shape = ComponentAlgebra::new(0, tower, coeff, k, None)?;
        if shape.t() == 1 || self.coin() {
            return Ok(shape);
        }
        let sign = if self.coin() { 1 } else { -1 };
        for _ in 0..RETRIES {
            let x = self.element(&shape);
            let tx = shape.theta_t(&x);
            let u = if sign == 1 { shape.add(&x, &tx) } else { shape.sub(&x, &tx) };
            if !shape.is_zero(&u) && shape.is_unit(&u) {
                return shape.with_inner(Some(u));
            }
        }
        // odd-size skew matrices are singular
        Ok(shape)
    }
}
