//! Bit-packed linear algebra over GF(2).

use std::fmt;

use crate::error::{Error, Result};

/// A dense vector over GF(2), 64 coordinates per word.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = BitVec::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
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
        assert!(i < self.len, "bit {i} out of range ({})", self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range ({})", self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range ({})", self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Inner product over GF(2).
    #[inline]
    pub fn dot(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Index of the lowest set bit.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * 64 + bit)
            })
        })
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// A dense GF(2) matrix stored as packed rows.
#[derive(Clone, PartialEq, Eq)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVec>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Gf2Matrix {
            rows,
            cols,
            data: vec![BitVec::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Gf2Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch(format!(
                "row of length {} in a matrix with {cols} columns",
                r.len()
            )));
        }
        Ok(Gf2Matrix {
            rows: rows.len(),
            cols,
            data: rows,
        })
    }

    pub fn from_dense(rows: &[Vec<u8>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let packed = rows
            .iter()
            .map(|r| BitVec::from_bools(&r.iter().map(|&b| b & 1 == 1).collect::<Vec<_>>()))
            .collect();
        Gf2Matrix::from_rows(cols, packed)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows, "row {r} out of range ({})", self.rows);
        self.data[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows, "row {r} out of range ({})", self.rows);
        self.data[r].set(c, value);
    }

    pub fn row(&self, r: usize) -> &BitVec {
        &self.data[r]
    }

    pub fn mul_vec(&self, x: &BitVec) -> Result<BitVec> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.cols
            )));
        }
        let mut out = BitVec::zeros(self.rows);
        for (i, row) in self.data.iter().enumerate() {
            if row.dot(x) {
                out.set(i, true);
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Gf2Matrix {
        let mut t = Gf2Matrix::zeros(self.cols, self.rows);
        for (r, row) in self.data.iter().enumerate() {
            for c in row.ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    pub fn rank(&self) -> usize {
        Gf2Elimination::new(self).rank()
    }

    /// A basis of `{x : A x = 0}`.
    pub fn kernel(&self) -> Vec<BitVec> {
        let elim = Gf2Elimination::new(self);
        let pivot_of_col: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (r, &c) in elim.pivot_cols.iter().enumerate() {
                v[c] = Some(r);
            }
            v
        };
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| pivot_of_col[c].is_none()) {
            let mut x = BitVec::zeros(self.cols);
            x.set(free, true);
            for (r, &pc) in elim.pivot_cols.iter().enumerate() {
                if elim.reduced[r].get(free) {
                    x.set(pc, true);
                }
            }
            basis.push(x);
        }
        basis
    }

    /// A basis of `{y : yᵀ A = 0}`, i.e. parity checks for the column span.
    pub fn left_kernel(&self) -> Vec<BitVec> {
        let elim = Gf2Elimination::new(self);
        elim.transform[elim.rank()..].to_vec()
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix {}x{}", self.rows, self.cols)?;
        for row in &self.data {
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}

/// Reduced row echelon form `T A = R` with the row transform `T` retained,
/// so that many right-hand sides can be tested against the same matrix.
#[derive(Clone, Debug)]
pub struct Gf2Elimination {
    cols: usize,
    /// Rows of `R`; the first `rank` are nonzero with pivots `pivot_cols`.
    reduced: Vec<BitVec>,
    /// Rows of `T`, each a combination of the original rows.
    transform: Vec<BitVec>,
    pivot_cols: Vec<usize>,
}

impl Gf2Elimination {
    pub fn new(a: &Gf2Matrix) -> Self {
        let m = a.rows;
        let mut reduced = a.data.clone();
        let mut transform: Vec<BitVec> = (0..m)
            .map(|i| {
                let mut e = BitVec::zeros(m);
                e.set(i, true);
                e
            })
            .collect();
        let mut pivot_cols = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            if r == m {
                break;
            }
            let Some(p) = (r..m).find(|&i| reduced[i].get(c)) else {
                continue;
            };
            reduced.swap(r, p);
            transform.swap(r, p);
            let (pivot_row, pivot_t) = (reduced[r].clone(), transform[r].clone());
            for i in 0..m {
                if i != r && reduced[i].get(c) {
                    reduced[i].xor_assign(&pivot_row);
                    transform[i].xor_assign(&pivot_t);
                }
            }
            pivot_cols.push(c);
            r += 1;
        }
        Gf2Elimination {
            cols: a.cols,
            reduced,
            transform,
            pivot_cols,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivot_cols.len()
    }

    pub fn pivot_cols(&self) -> &[usize] {
        &self.pivot_cols
    }

    /// The nonzero rows of the reduced echelon form: a sparse basis of the row space.
    pub fn row_basis(&self) -> &[BitVec] {
        &self.reduced[..self.rank()]
    }

    /// Solves `A x = b`, setting every free variable to zero.
    pub fn solve(&self, b: &BitVec) -> Result<Option<BitVec>> {
        if b.len() != self.transform.len() {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} for {} equations",
                b.len(),
                self.transform.len()
            )));
        }
        if self.transform[self.rank()..].iter().any(|t| t.dot(b)) {
            return Ok(None);
        }
        let mut x = BitVec::zeros(self.cols);
        for (r, &c) in self.pivot_cols.iter().enumerate() {
            if self.transform[r].dot(b) {
                x.set(c, true);
            }
        }
        Ok(Some(x))
    }

    /// Membership test only; cheaper than [`solve`](Self::solve).
    pub fn is_consistent(&self, b: &BitVec) -> bool {
        !self.transform[self.rank()..].iter().any(|t| t.dot(b))
    }
}

/// `A x = b` over GF(2); `None` when inconsistent.
pub fn gf2_solve(a: &Gf2Matrix, b: &BitVec) -> Result<Option<BitVec>> {
    if b.len() != a.rows {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side of length {} for {} rows",
            b.len(),
            a.rows
        )));
    }
    Gf2Elimination::new(a).solve(b)
}
