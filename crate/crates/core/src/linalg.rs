//! Gaussian elimination over exact rationals.

use num_traits::Zero;

use crate::rational::{Q, QVec};

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(rows: &mut [QVec]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Q::from_integer(1.into()) / &rows[r][c];
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= &f * pv;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of the span of `vectors`.
pub fn rank(vectors: &[QVec]) -> usize {
    let mut m = vectors.to_vec();
    rref(&mut m).len()
}

/// A basis (subset of the input, in order) of the span of `vectors`.
pub fn basis(vectors: &[QVec]) -> Vec<QVec> {
    let mut out: Vec<QVec> = Vec::new();
    let mut r = 0;
    for v in vectors {
        let mut trial = out.clone();
        trial.push(v.clone());
        let tr = rank(&trial);
        if tr > r {
            out.push(v.clone());
            r = tr;
        }
    }
    out
}

/// Solution set of `a · x = b` (rows of `a` are equations).
#[derive(Debug, Clone, PartialEq)]
pub enum Solution {
    Inconsistent,
    /// A particular solution and a basis of the kernel.
    Affine { particular: QVec, kernel: Vec<QVec> },
}

pub fn solve(a: &[QVec], b: &[Q]) -> Solution {
    let nvars = a.first().map_or(0, |r| r.len());
    let mut aug: Vec<QVec> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&nvars) {
        return Solution::Inconsistent;
    }
    let mut particular = vec![Q::zero(); nvars];
    for (i, &c) in pivots.iter().enumerate() {
        particular[c] = aug[i][nvars].clone();
    }
    let free: Vec<usize> = (0..nvars).filter(|c| !pivots.contains(c)).collect();
    let kernel = free
        .iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); nvars];
            v[f] = Q::from_integer(1.into());
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = -aug[i][f].clone();
            }
            v
        })
        .collect();
    Solution::Affine { particular, kernel }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, q};

    fn v(xs: &[i64]) -> QVec {
        xs.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn rank_of_dependent_rows() {
        assert_eq!(rank(&[v(&[1, 2, 3]), v(&[2, 4, 6]), v(&[0, 1, 1])]), 2);
        assert_eq!(rank(&[]), 0);
        assert_eq!(rank(&[v(&[0, 0])]), 0);
    }

    #[test]
    fn basis_picks_first_independent() {
        let b = basis(&[v(&[1, 0]), v(&[2, 0]), v(&[0, 3])]);
        assert_eq!(b, vec![v(&[1, 0]), v(&[0, 3])]);
    }

    #[test]
    fn solve_unique_and_inconsistent() {
        let a = vec![v(&[2, 1]), v(&[1, -1])];
        match solve(&a, &v(&[3, 0])) {
            Solution::Affine { particular, kernel } => {
                assert_eq!(particular, v(&[1, 1]));
                assert!(kernel.is_empty());
            }
            other => panic!("{other:?}"),
        }
        let a = vec![v(&[1, 1]), v(&[2, 2])];
        assert_eq!(solve(&a, &v(&[1, 3])), Solution::Inconsistent);
    }

    #[test]
    fn solve_with_kernel() {
        let a = vec![v(&[1, 2, 0])];
        let Solution::Affine { particular, kernel } = solve(&a, &[frac(1, 2)]) else {
            panic!()
        };
        assert_eq!(particular, vec![frac(1, 2), q(0), q(0)]);
        assert_eq!(kernel.len(), 2);
        for k in &kernel {
            assert_eq!(&k[0] + q(2) * &k[1], q(0));
        }
    }
}
