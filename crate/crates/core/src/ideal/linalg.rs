//! Exact Gaussian elimination over ℚ(i).

use num_traits::Zero;

use crate::arith::GaussianRational;

/// Dense matrix stored by rows.
#[derive(Clone, Debug, Default)]
pub struct Matrix {
    pub rows: Vec<Vec<GaussianRational>>,
    pub ncols: usize,
}

impl Matrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Matrix { rows: vec![vec![GaussianRational::zero(); ncols]; nrows], ncols }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.ncols, self.nrows());
        for (i, row) in self.rows.iter().enumerate() {
            for (j, a) in row.iter().enumerate() {
                if !a.is_zero() {
                    t.rows[j][i] = a.clone();
                }
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[GaussianRational]) -> Vec<GaussianRational> {
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(GaussianRational::zero(), |acc, (a, b)| &acc + &(a * b))
            })
            .collect()
    }
}

/// Outcome of solving `A·u = b`.
#[derive(Clone, Debug)]
pub struct Solution {
    /// A particular solution (free variables set to zero), if consistent.
    pub solution: Option<Vec<GaussianRational>>,
    pub rank: usize,
}

/// Row-reduces `[A | b]` exactly.
pub fn solve(a: &Matrix, b: &[GaussianRational]) -> Solution {
    let n = a.ncols;
    let mut m: Vec<Vec<GaussianRational>> = a
        .rows
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..m.len()).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(row, p);
        let inv = m[row][col].inv().unwrap();
        for k in col..=n {
            m[row][k] = &m[row][k] * &inv;
        }
        let prow = m[row].clone();
        for (i, r) in m.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let f = r[col].clone();
            for k in col..=n {
                if !prow[k].is_zero() {
                    r[k] = &r[k] - &(&f * &prow[k]);
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    let rank = pivots.len();
    if m[rank..].iter().any(|r| !r[n].is_zero()) {
        return Solution { solution: None, rank };
    }
    let mut x = vec![GaussianRational::zero(); n];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][n].clone();
    }
    Solution { solution: Some(x), rank }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: i64) -> GaussianRational {
        GaussianRational::from_int(n)
    }

    #[test]
    fn consistent_and_inconsistent() {
        let a = Matrix { rows: vec![vec![g(1), g(1)], vec![g(2), g(2)]], ncols: 2 };
        let s = solve(&a, &[g(3), g(6)]);
        assert_eq!(s.rank, 1);
        let x = s.solution.unwrap();
        assert_eq!(a.mul_vec(&x), vec![g(3), g(6)]);
        assert!(solve(&a, &[g(3), g(5)]).solution.is_none());
    }

    #[test]
    fn complex_pivot() {
        let i = GaussianRational::i();
        let a = Matrix { rows: vec![vec![i.clone()]], ncols: 1 };
        let x = solve(&a, &[g(1)]).solution.unwrap();
        assert_eq!(&x[0] * &i, g(1));
    }
}
