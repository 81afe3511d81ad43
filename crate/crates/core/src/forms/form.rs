use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{AElem, Algebra, ComponentAlgebra};
use crate::arith::Scalar;
use crate::error::{Error, Result};
use crate::linalg::{self, UnionFind};

/// An ε-hermitian form on A^r, stored as the nonzero entries of its Gram
/// matrix: σ(H_ji) = ε·H_ij.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermForm {
    alg: Arc<ComponentAlgebra>,
    epsilon: i8,
    rank: usize,
    gram: BTreeMap<(usize, usize), AElem>,
}

/// A form over (K, id) or (S, ι).
pub type QuadForm = HermForm;

impl HermForm {
    /// Validates the ε-hermitian symmetry of a dense Gram matrix.
    pub fn new(alg: Arc<ComponentAlgebra>, epsilon: i8, gram: Vec<Vec<AElem>>) -> Result<HermForm> {
        let r = gram.len();
        let mut map = BTreeMap::new();
        for (i, row) in gram.into_iter().enumerate() {
            if row.len() != r {
                return Err(Error::Parse("gram matrix is not square".into()));
            }
            for (j, x) in row.into_iter().enumerate() {
                if x.len() != alg.t() {
                    return Err(Error::Parse(format!("entry ({i},{j}) has the wrong size")));
                }
                if !alg.is_zero(&x) {
                    map.insert((i, j), x);
                }
            }
        }
        HermForm::from_entries(alg, epsilon, r, map)
    }

    pub fn from_entries(
        alg: Arc<ComponentAlgebra>,
        epsilon: i8,
        rank: usize,
        gram: BTreeMap<(usize, usize), AElem>,
    ) -> Result<HermForm> {
        if epsilon != 1 && epsilon != -1 {
            return Err(Error::Parse("epsilon must be 1 or -1".into()));
        }
        let h = HermForm { alg, epsilon, rank, gram };
        h.check_symmetry()?;
        Ok(h)
    }

    /// Trusted constructor for results that are symmetric by construction.
    pub(crate) fn from_entries_unchecked(
        alg: Arc<ComponentAlgebra>,
        epsilon: i8,
        rank: usize,
        mut gram: BTreeMap<(usize, usize), AElem>,
    ) -> HermForm {
        gram.retain(|_, x| !alg.is_zero(x));
        let h = HermForm { alg, epsilon, rank, gram };
        debug_assert!(h.check_symmetry().is_ok());
        h
    }

    pub fn diagonal(alg: Arc<ComponentAlgebra>, epsilon: i8, entries: Vec<AElem>) -> Result<HermForm> {
        let rank = entries.len();
        let gram = entries.into_iter().enumerate().map(|(i, x)| ((i, i), x)).collect();
        HermForm::from_entries(alg, epsilon, rank, gram)
    }

    /// Diagonal form with central scalar entries.
    pub fn diagonal_scalars(alg: Arc<ComponentAlgebra>, epsilon: i8, entries: &[Scalar]) -> Result<HermForm> {
        let e = entries.iter().map(|s| alg.from_scalar(s)).collect();
        HermForm::diagonal(alg, epsilon, e)
    }

    pub fn zero_form(alg: Arc<ComponentAlgebra>, epsilon: i8) -> HermForm {
        HermForm { alg, epsilon, rank: 0, gram: BTreeMap::new() }
    }

    fn check_symmetry(&self) -> Result<()> {
        for (&(i, j), x) in &self.gram {
            if i >= self.rank || j >= self.rank {
                return Err(Error::Parse("gram entry out of range".into()));
            }
            let s = self.alg.sigma(&self.entry(j, i));
            let expect = if self.epsilon == 1 { x.clone() } else { self.alg.neg(x) };
            if s != expect {
                return Err(Error::NotHermitian(format!("entries ({i},{j}) and ({j},{i})")));
            }
        }
        for (&(i, j), _) in &self.gram {
            if !self.gram.contains_key(&(j, i)) {
                return Err(Error::NotHermitian(format!("entry ({j},{i}) missing")));
            }
        }
        Ok(())
    }

    pub fn algebra(&self) -> &Arc<ComponentAlgebra> {
        &self.alg
    }

    pub fn epsilon(&self) -> i8 {
        self.epsilon
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn entries(&self) -> &BTreeMap<(usize, usize), AElem> {
        &self.gram
    }

    pub fn entry(&self, i: usize, j: usize) -> AElem {
        self.gram.get(&(i, j)).cloned().unwrap_or_else(|| self.alg.zero())
    }

    pub fn dense_gram(&self) -> Vec<Vec<AElem>> {
        (0..self.rank)
            .map(|i| (0..self.rank).map(|j| self.entry(i, j)).collect())
            .collect()
    }

    pub fn is_diagonal(&self) -> bool {
        self.gram.keys().all(|&(i, j)| i == j)
    }

    pub fn diagonal_entries(&self) -> Option<Vec<AElem>> {
        self.is_diagonal()
            .then(|| (0..self.rank).map(|i| self.entry(i, i)).collect())
    }

    /// Connected blocks of the Gram matrix.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.rank);
        for &(i, j) in self.gram.keys() {
            uf.union(i, j);
        }
        uf.groups()
    }

    /// The restriction to the coordinates `idx` (in that order).
    pub fn restrict(&self, idx: &[usize]) -> HermForm {
        let pos: BTreeMap<usize, usize> = idx.iter().enumerate().map(|(a, &i)| (i, a)).collect();
        let gram = self
            .gram
            .iter()
            .filter_map(|(&(i, j), x)| Some(((*pos.get(&i)?, *pos.get(&j)?), x.clone())))
            .collect();
        HermForm { alg: self.alg.clone(), epsilon: self.epsilon, rank: idx.len(), gram }
    }

    pub fn neg(&self) -> HermForm {
        let gram = self.gram.iter().map(|(&k, x)| (k, self.alg.neg(x))).collect();
        HermForm { alg: self.alg.clone(), epsilon: self.epsilon, rank: self.rank, gram }
    }

    /// Invertibility of the Gram matrix over A, decided blockwise on the
    /// S-linear map y ↦ H·y of A^r.
    pub fn is_nonsingular(&self) -> bool {
        let alg = &self.alg;
        self.blocks().iter().all(|b| {
            if b.len() == 1 {
                return alg.is_unit(&self.entry(b[0], b[0]));
            }
            let t = alg.t();
            let n = b.len() * t;
            let mut m = vec![vec![alg.tower().zero(); n]; n];
            for (bj, &j) in b.iter().enumerate() {
                for q in 0..t {
                    let e = alg.basis(q);
                    for (bi, &i) in b.iter().enumerate() {
                        let Some(x) = self.gram.get(&(i, j)) else { continue };
                        let v = alg.mul(x, &e);
                        for (r, s) in v.into_iter().enumerate() {
                            m[bi * t + r][bj * t + q] = s;
                        }
                    }
                }
            }
            linalg::rank(&m) == n
        })
    }

    pub fn same_space(&self, o: &HermForm) -> Result<()> {
        if self.alg != o.alg {
            return Err(Error::AlgebraMismatch("forms live over different algebras".into()));
        }
        if self.epsilon != o.epsilon {
            return Err(Error::AlgebraMismatch("forms have different ε".into()));
        }
        Ok(())
    }
}

/// A form over an algebra whose base may be a product: one form per component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductForm {
    pub algebra: Algebra,
    pub parts: Vec<HermForm>,
}

impl ProductForm {
    pub fn new(algebra: Algebra, parts: Vec<HermForm>) -> Result<ProductForm> {
        if parts.len() != algebra.components.len() {
            return Err(Error::AlgebraMismatch("one form per component is required".into()));
        }
        for (p, c) in parts.iter().zip(&algebra.components) {
            if p.algebra() != c {
                return Err(Error::AlgebraMismatch("component form over the wrong algebra".into()));
            }
        }
        Ok(ProductForm { algebra, parts })
    }

    pub fn single(h: HermForm) -> ProductForm {
        let algebra = Algebra::single((**h.algebra()).clone());
        ProductForm { algebra, parts: vec![h] }
    }
}
