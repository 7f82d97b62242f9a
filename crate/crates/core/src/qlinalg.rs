//! Exact linear algebra over the rationals: row reduction, nullspaces, solves.

use num_rational::BigRational;
use num_traits::{One, Zero};

/// Reduce in place to reduced row echelon form; returns the pivot columns.
pub fn rref(m: &mut Vec<Vec<BigRational>>) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pv = m[r][c].clone();
        for j in c..cols {
            m[r][j] = &m[r][j] / &pv;
        }
        for i in 0..rows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in c..cols {
                m[i][j] = &m[i][j] - &(&f * &m[r][j]);
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

pub fn rank(mut m: Vec<Vec<BigRational>>) -> usize {
    rref(&mut m).len()
}

/// Basis of the right nullspace of an (rows x cols) matrix.
pub fn nullspace(mut m: Vec<Vec<BigRational>>, cols: usize) -> Vec<Vec<BigRational>> {
    if m.is_empty() {
        m.push(vec![BigRational::zero(); cols]);
    }
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::new();
    for &fc in &free {
        let mut v = vec![BigRational::zero(); cols];
        v[fc] = BigRational::one();
        for (ri, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[ri][fc].clone();
        }
        basis.push(v);
    }
    basis
}

/// One exact solution of A x = b (free variables set to zero), or None.
pub fn solve(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut aug: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&cols) {
        return None; // pivot in the augmented column: inconsistent
    }
    let mut x = vec![BigRational::zero(); cols];
    for (ri, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[ri][cols].clone();
    }
    Some(x)
}

/// Inverse of a square rational matrix, if invertible.
pub fn invert(a: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = a.len();
    let mut aug: Vec<Vec<BigRational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            assert_eq!(row.len(), n);
            let mut r = row.clone();
            for j in 0..n {
                r.push(if i == j { BigRational::one() } else { BigRational::zero() });
            }
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Incrementally maintained echelon basis of a growing row space.
#[derive(Debug, Default)]
pub struct Echelon {
    rows: Vec<(usize, Vec<BigRational>)>, // (pivot column, normalized row)
}

impl Echelon {
    pub fn new() -> Self {
        Echelon { rows: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn reduce(&self, mut v: Vec<BigRational>) -> Vec<BigRational> {
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (x, y) in v.iter_mut().zip(row) {
                *x = &*x - &(&f * y);
            }
        }
        v
    }

    /// Returns true if the vector enlarged the row space.
    pub fn insert(&mut self, v: Vec<BigRational>) -> bool {
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let pv = v[p].clone();
        for x in v.iter_mut() {
            *x = &*x / &pv;
        }
        self.rows.push((p, v));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    #[test]
    fn solve_and_null() {
        let a = vec![vec![q(1), q(2)], vec![q(3), q(4)]];
        let x = solve(&a, &[q(5), q(11)]).unwrap();
        assert_eq!(x, vec![q(1), q(2)]);
        assert!(solve(&[vec![q(0), q(0)]], &[q(1)]).is_none());
        let ns = nullspace(vec![vec![q(1), q(1)]], 2);
        assert_eq!(ns.len(), 1);
        assert_eq!(&ns[0][0] + &ns[0][1], q(0));
        let inv = invert(&a).unwrap();
        assert_eq!(inv[0][0], q(-2));
    }
}
