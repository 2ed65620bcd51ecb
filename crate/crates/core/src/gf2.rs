// SPDX-License-Identifier: Apache-2.0
//! Dense linear algebra over GF(2).
//!
//! Rows are packed into `u64` words. Elimination always picks the first
//! available pivot in column order, so results are reproducible.

use crate::error::{Error, Result};

const WORD: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = cols.div_ceil(WORD);
        BitMatrix {
            rows,
            cols,
            stride,
            bits: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<bool>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {r} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for (c, &b) in row.iter().enumerate() {
                m.set(r, c, b);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Panics when the index is out of bounds.
    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols, "bit ({r},{c}) out of bounds");
        self.bits[r * self.stride + c / WORD] >> (c % WORD) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        assert!(r < self.rows && c < self.cols, "bit ({r},{c}) out of bounds");
        let w = &mut self.bits[r * self.stride + c / WORD];
        if v {
            *w |= 1 << (c % WORD);
        } else {
            *w &= !(1 << (c % WORD));
        }
    }

    pub fn flip(&mut self, r: usize, c: usize) {
        assert!(r < self.rows && c < self.cols, "bit ({r},{c}) out of bounds");
        self.bits[r * self.stride + c / WORD] ^= 1 << (c % WORD);
    }

    fn row_words(&self, r: usize) -> &[u64] {
        &self.bits[r * self.stride..(r + 1) * self.stride]
    }

    fn xor_row_into(&mut self, src: usize, dst: usize) {
        for k in 0..self.stride {
            let v = self.bits[src * self.stride + k];
            self.bits[dst * self.stride + k] ^= v;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.stride {
            self.bits.swap(a * self.stride + k, b * self.stride + k);
        }
    }

    pub fn mul_vec(&self, x: &[bool]) -> Result<Vec<bool>> {
        if x.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|r| (0..self.cols).fold(false, |acc, c| acc ^ (self.get(r, c) & x[c])))
            .collect())
    }

    /// Reduced row echelon form; returns the pivot column of each nonzero row.
    fn reduce(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| self.get(r, col)) else {
                continue;
            };
            self.swap_rows(row, p);
            for r in 0..self.rows {
                if r != row && self.get(r, col) {
                    self.xor_row_into(row, r);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().reduce().len()
    }

    /// Some `x` with `self * x == b`, free variables set to zero.
    pub fn solve(&self, b: &[bool]) -> Result<Option<Vec<bool>>> {
        if b.len() != self.rows {
            return Err(Error::Dimension(format!(
                "right-hand side of length {} against {} rows",
                b.len(),
                self.rows
            )));
        }
        let mut aug = BitMatrix::zeros(self.rows, self.cols + 1);
        for (r, &rhs) in b.iter().enumerate() {
            for c in 0..self.cols {
                if self.get(r, c) {
                    aug.set(r, c, true);
                }
            }
            aug.set(r, self.cols, rhs);
        }
        let pivots = aug.reduce();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![false; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(r, self.cols);
        }
        Ok(Some(x))
    }

    pub fn kernel_basis(&self) -> Vec<Vec<bool>> {
        let mut m = self.clone();
        let pivots = m.reduce();
        let is_pivot: Vec<bool> = {
            let mut v = vec![false; self.cols];
            for &p in &pivots {
                v[p] = true;
            }
            v
        };
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut x = vec![false; self.cols];
                x[f] = true;
                for (r, &p) in pivots.iter().enumerate() {
                    x[p] = m.get(r, f);
                }
                x
            })
            .collect()
    }

    pub fn row_is_zero(&self, r: usize) -> bool {
        self.row_words(r).iter().all(|&w| w == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_solves_to_rhs() {
        let a = BitMatrix::identity(5);
        let b = vec![true, false, true, true, false];
        assert_eq!(a.solve(&b).unwrap(), Some(b));
        assert!(a.kernel_basis().is_empty());
    }

    #[test]
    fn zero_one_by_one_is_inconsistent() {
        let a = BitMatrix::zeros(1, 1);
        assert_eq!(a.solve(&[true]).unwrap(), None);
        assert_eq!(a.solve(&[false]).unwrap(), Some(vec![false]));
    }

    #[test]
    fn zero_matrix_kernel_is_everything() {
        assert_eq!(BitMatrix::zeros(4, 4).kernel_basis().len(), 4);
    }

    #[test]
    fn wide_matrix_spans_words() {
        let mut a = BitMatrix::zeros(2, 130);
        a.set(0, 129, true);
        a.set(1, 64, true);
        a.set(1, 129, true);
        let x = a.solve(&[true, false]).unwrap().unwrap();
        assert_eq!(a.mul_vec(&x).unwrap(), vec![true, false]);
        assert_eq!(a.rank(), 2);
        assert_eq!(a.kernel_basis().len(), 128);
    }

    #[test]
    fn length_mismatch_is_an_error() {
        assert!(BitMatrix::zeros(2, 2).solve(&[true]).is_err());
    }
}
