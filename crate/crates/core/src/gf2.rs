//! Dense GF(2) linear algebra on 64-bit packed rows.
//!
//! This kernel backs codeword enumeration and the constraint handling of the
//! list decoder: row-swap Gaussian elimination with the first nonzero column
//! as pivot, rank queries, and nullspace/solution-space enumeration.

use crate::error::Error;
use crate::Result;

/// A fixed-length bit vector packed into `u64` words.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = BitVec::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b & 1 == 1 {
                v.set(i, true);
            }
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Index of the first set bit, if any.
    pub fn first_one(&self) -> Option<usize> {
        for (wi, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(wi * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i) as u8).collect()
    }
}

/// A dense GF(2) matrix with packed rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: Vec<BitVec>,
    cols: usize,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            rows: vec![BitVec::zeros(cols); rows],
            cols,
        }
    }

    pub fn from_rows(rows: Vec<BitVec>, cols: usize) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == cols));
        BitMatrix { rows, cols }
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &BitVec {
        &self.rows[r]
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        self.rows[r].set(c, v);
    }

    /// In-place reduced row echelon form; returns the pivot column of each
    /// surviving row, in row order.
    pub fn row_reduce(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(pivot_row) = (rank..self.rows.len()).find(|&r| self.rows[r].get(col)) else {
                continue;
            };
            self.rows.swap(rank, pivot_row);
            let pivot = self.rows[rank].clone();
            for (r, row) in self.rows.iter_mut().enumerate() {
                if r != rank && row.get(col) {
                    row.xor_assign(&pivot);
                }
            }
            pivots.push(col);
            rank += 1;
            if rank == self.rows.len() {
                break;
            }
        }
        self.rows.truncate(rank);
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut copy = self.clone();
        copy.row_reduce().len()
    }

    /// Multiplies the matrix by a vector, returning the syndrome.
    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            let mut acc = 0u64;
            for (a, b) in row.words.iter().zip(&v.words) {
                acc ^= a & b;
            }
            out.set(r, acc.count_ones() % 2 == 1);
        }
        out
    }

    /// Enumerates all solutions of `M x = 0`.
    ///
    /// Errors with [`Error::CapExceeded`] if the solution space holds more
    /// than `cap` vectors.
    pub fn nullspace(&self, cap: u128) -> Result<Vec<BitVec>> {
        let mut reduced = self.clone();
        let pivots = reduced.row_reduce();
        let rank = pivots.len();
        let free_bits = self.cols - rank;
        if free_bits >= 128 || (1u128 << free_bits) > cap {
            return Err(Error::CapExceeded {
                needed_log2: free_bits as u32,
                cap,
            });
        }
        let is_pivot = {
            let mut v = vec![false; self.cols];
            for &c in &pivots {
                v[c] = true;
            }
            v
        };
        let free_cols: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let count = 1u128 << free_bits;
        let mut out = Vec::with_capacity(count as usize);
        for assign in 0..count {
            let mut x = BitVec::zeros(self.cols);
            for (bit, &col) in free_cols.iter().enumerate() {
                if (assign >> bit) & 1 == 1 {
                    x.set(col, true);
                }
            }
            // Back-substitute pivots: row r reads x[pivot_r] = sum of its
            // free-column entries (RREF rows have no other pivot columns).
            for (r, &pc) in pivots.iter().enumerate() {
                let mut acc = false;
                for &fc in &free_cols {
                    if reduced.rows[r].get(fc) && x.get(fc) {
                        acc = !acc;
                    }
                }
                x.set(pc, acc);
            }
            out.push(x);
        }
        Ok(out)
    }
}
