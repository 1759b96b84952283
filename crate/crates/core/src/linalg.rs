//! Dense linear algebra over a [`FieldCtx`]: reduced row echelon form, rank,
//! nullspaces and square solves. Pivoting always takes the first usable row,
//! so every result is deterministic.

use crate::ffield::{Felt, FieldCtx};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub rows: Vec<Vec<Felt>>,
    pub ncols: usize,
}

impl Matrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Matrix { rows: vec![vec![Felt::ZERO; ncols]; nrows], ncols }
    }

    pub fn from_rows(rows: Vec<Vec<Felt>>, ncols: usize) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == ncols));
        Matrix { rows, ncols }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> Felt {
        self.rows[i][j]
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.ncols, self.nrows());
        for (i, row) in self.rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                t.rows[j][i] = v;
            }
        }
        t
    }

    pub fn mul_vec(&self, f: &FieldCtx, v: &[Felt]) -> Vec<Felt> {
        self.rows.iter().map(|r| r.iter().zip(v).fold(Felt::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))).collect()
    }

    /// `v^T · self`.
    pub fn vec_mul(&self, f: &FieldCtx, v: &[Felt]) -> Vec<Felt> {
        let mut out = vec![Felt::ZERO; self.ncols];
        for (row, &c) in self.rows.iter().zip(v) {
            f.axpy(&mut out, c, row);
        }
        out
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self, f: &FieldCtx) -> Vec<usize> {
        let mut pivots = Vec::new();
        let nrows = self.nrows();
        let mut r = 0;
        for c in 0..self.ncols {
            if r == nrows {
                break;
            }
            let Some(pr) = (r..nrows).find(|&i| !self.rows[i][c].is_zero()) else {
                continue;
            };
            self.rows.swap(r, pr);
            let inv = f.inv(self.rows[r][c]).unwrap();
            for v in self.rows[r][c..].iter_mut() {
                *v = f.mul(*v, inv);
            }
            let pivot_row = std::mem::take(&mut self.rows[r]);
            for (i, row) in self.rows.iter_mut().enumerate() {
                if i == r || row[c].is_zero() {
                    continue;
                }
                let factor = f.neg(row[c]);
                f.axpy(&mut row[c..], factor, &pivot_row[c..]);
            }
            self.rows[r] = pivot_row;
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, f: &FieldCtx) -> usize {
        let mut m = self.clone();
        m.echelon(f)
    }

    /// Row echelon form without back substitution; returns the rank.
    pub fn echelon(&mut self, f: &FieldCtx) -> usize {
        let nrows = self.nrows();
        let mut r = 0;
        for c in 0..self.ncols {
            if r == nrows {
                break;
            }
            let Some(pr) = (r..nrows).find(|&i| !self.rows[i][c].is_zero()) else {
                continue;
            };
            self.rows.swap(r, pr);
            let inv = f.inv(self.rows[r][c]).unwrap();
            let (top, bottom) = self.rows.split_at_mut(r + 1);
            let pivot_row = &top[r];
            for row in bottom.iter_mut() {
                if row[c].is_zero() {
                    continue;
                }
                let factor = f.neg(f.mul(row[c], inv));
                f.axpy(&mut row[c..], factor, &pivot_row[c..]);
            }
            r += 1;
        }
        r
    }

    /// Basis of `{v : self · v = 0}`, one vector per free column, in
    /// increasing free-column order.
    pub fn nullspace(&self, f: &FieldCtx) -> Vec<Vec<Felt>> {
        let mut m = self.clone();
        let pivots = m.rref(f);
        let mut is_pivot = vec![None; self.ncols];
        for (r, &c) in pivots.iter().enumerate() {
            is_pivot[c] = Some(r);
        }
        (0..self.ncols)
            .filter(|&c| is_pivot[c].is_none())
            .map(|free| {
                let mut v = vec![Felt::ZERO; self.ncols];
                v[free] = Felt::ONE;
                for (r, &c) in pivots.iter().enumerate() {
                    v[c] = f.neg(m.rows[r][free]);
                }
                v
            })
            .collect()
    }

    /// Unique solution of a square system, or `None` when singular.
    pub fn solve(&self, f: &FieldCtx, b: &[Felt]) -> Option<Vec<Felt>> {
        let n = self.nrows();
        if n != self.ncols {
            return None;
        }
        let mut aug = Matrix::from_rows(
            self.rows
                .iter()
                .zip(b)
                .map(|(r, &bi)| {
                    let mut row = r.clone();
                    row.push(bi);
                    row
                })
                .collect(),
            n + 1,
        );
        let pivots = aug.rref(f);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(aug.rows.iter().map(|r| r[n]).collect())
    }

    pub fn is_invertible(&self, f: &FieldCtx) -> bool {
        self.nrows() == self.ncols && self.rank(f) == self.ncols
    }
}

/// Reduced echelon basis of the row space spanned by `vectors`.
pub fn row_space_basis(f: &FieldCtx, vectors: Vec<Vec<Felt>>, ncols: usize) -> Vec<Vec<Felt>> {
    let mut m = Matrix::from_rows(vectors, ncols);
    let rank = m.rref(f).len();
    m.rows.truncate(rank);
    m.rows
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f7() -> FieldCtx {
        FieldCtx::prime(7).unwrap()
    }

    fn m(f: &FieldCtx, rows: &[&[i64]]) -> Matrix {
        let n = rows[0].len();
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&c| f.from_int(c)).collect()).collect(), n)
    }

    #[test]
    fn rank_and_nullspace() {
        let f = f7();
        let a = m(&f, &[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(a.rank(&f), 2);
        let ns = a.nullspace(&f);
        assert_eq!(ns.len(), 1);
        assert!(a.mul_vec(&f, &ns[0]).iter().all(|c| c.is_zero()));
    }

    #[test]
    fn solve_square() {
        let f = f7();
        let a = m(&f, &[&[2, 1], &[1, 3]]);
        let x = a.solve(&f, &[f.from_int(3), f.from_int(4)]).unwrap();
        assert_eq!(a.mul_vec(&f, &x), vec![f.from_int(3), f.from_int(4)]);
        assert!(m(&f, &[&[1, 2], &[2, 4]]).solve(&f, &[Felt::ONE, Felt::ONE]).is_none());
    }

    #[test]
    fn echelon_rank_matches_rref() {
        let f = FieldCtx::extension(5, 2).unwrap();
        let rows: Vec<Vec<Felt>> =
            (0..6u32).map(|i| (0..8u32).map(|j| Felt((i * 7 + j * j * 3 + i * j) % 25)).collect()).collect();
        let a = Matrix::from_rows(rows, 8);
        let mut b = a.clone();
        assert_eq!(a.rank(&f), b.rref(&f).len());
    }
}
