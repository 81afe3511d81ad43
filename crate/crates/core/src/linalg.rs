//! Dense Gaussian elimination over the commutative scalar fields, plus a
//! union-find used to split sparse systems into independent blocks.

use crate::arith::Scalar;

pub type Matrix = Vec<Vec<Scalar>>;

/// Row-reduces `m` in place and returns pivot columns.
pub fn row_reduce(m: &mut Matrix, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].inv().expect("pivot is nonzero");
        for x in m[row].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = m[row].clone();
        for (r, line) in m.iter_mut().enumerate() {
            if r == row || line[col].is_zero() {
                continue;
            }
            let f = line[col].clone();
            for (x, y) in line.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x = &*x - &(&f * y);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank(m: &Matrix) -> usize {
    if m.is_empty() {
        return 0;
    }
    let n = m[0].len();
    let mut w = m.clone();
    row_reduce(&mut w, n).len()
}

/// Solves `m · x = rhs`. Returns `None` when the system is inconsistent or
/// the solution is not unique.
pub fn solve(m: &Matrix, rhs: &[Scalar]) -> Option<Vec<Scalar>> {
    let n = m.first().map_or(0, Vec::len);
    let mut aug: Matrix = m
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let pivots = row_reduce(&mut aug, n + 1);
    if pivots.len() != n || pivots.contains(&n) {
        return None;
    }
    Some((0..n).map(|i| aug[i][n].clone()).collect())
}

pub fn inverse(m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let zero = m[0][0].zero_like();
    let one = m[0][0].one_like();
    let mut aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { one.clone() } else { zero.clone() }));
            r
        })
        .collect();
    let pivots = row_reduce(&mut aug, n);
    if pivots.len() != n {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Disjoint-set forest over `0..n`.
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    /// Groups of indices, each sorted, ordered by their smallest member.
    pub fn groups(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut by_root: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for i in 0..n {
            let r = self.find(i);
            by_root.entry(r).or_default().push(i);
        }
        by_root.into_values().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Tower;

    #[test]
    fn solve_and_invert() {
        let t = Tower::rationals();
        let m = vec![vec![t.int(2), t.int(1)], vec![t.int(1), t.int(1)]];
        let x = solve(&m, &[t.int(3), t.int(2)]).unwrap();
        assert_eq!(x, vec![t.int(1), t.int(1)]);
        let inv = inverse(&m).unwrap();
        assert_eq!(inv, vec![vec![t.int(1), t.int(-1)], vec![t.int(-1), t.int(2)]]);
        let sing = vec![vec![t.int(1), t.int(2)], vec![t.int(2), t.int(4)]];
        assert!(inverse(&sing).is_none());
        assert_eq!(rank(&sing), 1);
    }

    #[test]
    fn union_find_groups() {
        let mut uf = UnionFind::new(5);
        uf.union(3, 1);
        uf.union(4, 0);
        assert_eq!(uf.groups(), vec![vec![0, 4], vec![1, 3], vec![2]]);
    }
}
