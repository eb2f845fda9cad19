//! Row-major dense matrices with exact Gaussian elimination.
//!
//! Serves as the cubic-time baseline backend and as the oracle that the
//! structured solvers are checked against.

use std::fmt;

use crate::field::Field;

pub struct Matrix<F: Field> {
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> Clone for Matrix<F> {
    fn clone(&self) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.clone(),
        }
    }
}

impl<F: Field> PartialEq for Matrix<F> {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.data == other.data
    }
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

impl<F: Field> Matrix<F> {
    pub fn zeros(k: &F, rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![k.zero(); rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F::Elem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(k: &F, rows: usize, columns: &[Vec<F::Elem>]) -> Self {
        let mut m = Matrix::zeros(k, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (i, e) in col.iter().enumerate() {
                m.set(i, j, e.clone());
            }
        }
        m
    }

    /// Matrix whose rows are the given vectors, each of length `cols`.
    pub fn from_rows(k: &F, cols: usize, rows: &[Vec<F::Elem>]) -> Self {
        let mut m = Matrix::zeros(k, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                m.set(i, j, e.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self, k: &F) -> bool {
        self.data.iter().all(|e| k.is_zero(e))
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn sub(&self, k: &F, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| k.sub(a, b)).collect(),
        }
    }

    pub fn mul(&self, k: &F, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Matrix::zeros(k, self.rows, other.cols);
        for i in 0..self.rows {
            for t in 0..self.cols {
                let a = self.get(i, t);
                if k.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = k.mul(a, other.get(t, j));
                    let cell = &mut out.data[i * other.cols + j];
                    *cell = k.add(cell, &prod);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, k: &F, x: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(self.cols, x.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(k.zero(), |acc, (a, b)| k.add(&acc, &k.mul(a, b)))
            })
            .collect()
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref_in_place(&mut self, k: &F) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !k.is_zero(self.get(i, c))) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = k.inv(self.get(r, c)).expect("nonzero pivot");
            for j in c..self.cols {
                let v = k.mul(self.get(r, j), &inv);
                self.set(r, j, v);
            }
            let pivot_row: Vec<F::Elem> = self.row(r)[c..].to_vec();
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c).clone();
                if k.is_zero(&factor) {
                    continue;
                }
                let base = i * self.cols + c;
                for (t, pv) in pivot_row.iter().enumerate() {
                    let cell = &mut self.data[base + t];
                    *cell = k.sub(cell, &k.mul(&factor, pv));
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, k: &F) -> usize {
        self.clone().rref_in_place(k).len()
    }

    /// A basis of the right nullspace `{x : A x = 0}`.
    pub fn nullspace(&self, k: &F) -> Vec<Vec<F::Elem>> {
        let mut r = self.clone();
        let pivots = r.rref_in_place(k);
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![k.zero(); self.cols];
                v[free] = k.one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = k.neg(r.get(row, free));
                }
                v
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn nullspace_vectors_are_annihilated_and_independent() {
        let k = PrimeField::new(13).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let rows = rng.gen_range(1..8);
            let cols = rng.gen_range(1..8);
            let rank_cap = rng.gen_range(1..=rows.min(cols));
            let left = Matrix::from_fn(rows, rank_cap, |_, _| k.random(&mut rng));
            let right = Matrix::from_fn(rank_cap, cols, |_, _| k.random(&mut rng));
            let a = left.mul(&k, &right);
            let basis = a.nullspace(&k);
            assert_eq!(basis.len() + a.rank(&k), cols);
            for v in &basis {
                assert!(a.mul_vec(&k, v).iter().all(|e| *e == 0));
            }
            if !basis.is_empty() {
                let b = Matrix::from_columns(&k, cols, &basis);
                assert_eq!(b.rank(&k), basis.len());
            }
        }
    }

    #[test]
    fn rank_of_identity_and_zero() {
        let k = PrimeField::new(7).unwrap();
        let id = Matrix::from_fn(4, 4, |i, j| u64::from(i == j));
        assert_eq!(id.rank(&k), 4);
        assert!(id.nullspace(&k).is_empty());
        assert_eq!(Matrix::zeros(&k, 3, 5).nullspace(&k).len(), 5);
    }
}
