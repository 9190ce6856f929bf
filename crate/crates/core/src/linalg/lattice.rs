//! Integer matrices and membership in an integer column span.
//!
//! Membership is decided from a column Hermite normal form `G U = H` where `U`
//! is unimodular. `H` is lower echelon, so `H z = c` can be solved by forward
//! substitution, and `x = U z` is then an integer preimage of `c`.

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged integer matrix".into()));
        }
        let mut m = IntMatrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            for (j, &v) in r.iter().enumerate() {
                m.set(i, j, BigInt::from(v));
            }
        }
        Ok(m)
    }

    /// Builds a matrix from columns; `rows` is needed when there are no columns.
    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Result<Self> {
        let mut m = IntMatrix::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::DimensionMismatch(format!(
                    "column of length {} in a matrix with {rows} rows",
                    col.len()
                )));
            }
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
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

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        assert!(r < self.rows && c < self.cols, "({r},{c}) out of range");
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        assert!(r < self.rows && c < self.cols, "({r},{c}) out of range");
        self.data[r * self.cols + c] = v;
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .filter(|&j| !x[j].is_zero())
                    .map(|j| self.get(i, j) * &x[j])
                    .sum()
            })
            .collect())
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// `col[dst] -= q * col[src]`
    fn sub_col_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let s = &self.data[r * self.cols + src];
            if !s.is_zero() {
                let delta = s * q;
                self.data[r * self.cols + dst] -= delta;
            }
        }
    }

    fn negate_col(&mut self, c: usize) {
        for r in 0..self.rows {
            let v = &mut self.data[r * self.cols + c];
            *v = -std::mem::take(v);
        }
    }
}

/// Column Hermite normal form with its unimodular transform.
#[derive(Clone, Debug)]
pub struct HermiteForm {
    /// `G U`; the first `pivots.len()` columns are the lattice basis.
    h: IntMatrix,
    u: IntMatrix,
    /// Row index of the leading entry of each basis column, strictly increasing.
    pivots: Vec<usize>,
}

impl HermiteForm {
    pub fn new(g: &IntMatrix) -> Self {
        let mut h = g.clone();
        let mut u = IntMatrix::identity(g.cols);
        let mut pivots = Vec::new();
        let mut next = 0;
        for row in 0..g.rows {
            if next == g.cols {
                break;
            }
            // Euclid on the entries of this row among the unreduced columns:
            // repeatedly move the smallest nonzero entry into position `next`
            // and reduce the others modulo it.
            loop {
                let best = (next..g.cols)
                    .filter(|&c| !h.get(row, c).is_zero())
                    .min_by(|&a, &b| h.get(row, a).abs().cmp(&h.get(row, b).abs()));
                let Some(best) = best else { break };
                h.swap_cols(next, best);
                u.swap_cols(next, best);
                let pivot = h.get(row, next).clone();
                let mut done = true;
                for c in next + 1..g.cols {
                    let entry = h.get(row, c);
                    if entry.is_zero() {
                        continue;
                    }
                    let q = entry.div_floor(&pivot);
                    h.sub_col_multiple(c, next, &q);
                    u.sub_col_multiple(c, next, &q);
                    if !h.get(row, c).is_zero() {
                        done = false;
                    }
                }
                if done {
                    break;
                }
            }
            if h.get(row, next).is_zero() {
                continue;
            }
            if h.get(row, next).is_negative() {
                h.negate_col(next);
                u.negate_col(next);
            }
            // Reduce earlier basis columns in this row into [0, pivot).
            let pivot = h.get(row, next).clone();
            for c in 0..next {
                let q = h.get(row, c).div_floor(&pivot);
                h.sub_col_multiple(c, next, &q);
                u.sub_col_multiple(c, next, &q);
            }
            pivots.push(row);
            next += 1;
        }
        HermiteForm { h, u, pivots }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn hermite(&self) -> &IntMatrix {
        &self.h
    }

    pub fn transform(&self) -> &IntMatrix {
        &self.u
    }

    /// Some integer `x` with `G x = c`, or `None` if `c` is outside the lattice.
    pub fn solve(&self, c: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
        if c.len() != self.h.rows {
            return Err(Error::DimensionMismatch(format!(
                "target of length {} for {} rows",
                c.len(),
                self.h.rows
            )));
        }
        let mut residual = c.to_vec();
        let mut z = vec![BigInt::zero(); self.h.cols];
        let mut checked = 0;
        for (j, &p) in self.pivots.iter().enumerate() {
            // Columns j.. vanish above row p, so those rows are final.
            if residual[checked..p].iter().any(|v| !v.is_zero()) {
                return Ok(None);
            }
            let (q, r) = residual[p].div_rem(self.h.get(p, j));
            if !r.is_zero() {
                return Ok(None);
            }
            if !q.is_zero() {
                for (i, res) in residual.iter_mut().enumerate().skip(p) {
                    let hij = self.h.get(i, j);
                    if !hij.is_zero() {
                        *res -= hij * &q;
                    }
                }
            }
            z[j] = q;
            checked = p + 1;
        }
        if residual[checked..].iter().any(|v| !v.is_zero()) {
            return Ok(None);
        }
        Ok(Some(self.u.mul_vec(&z)?))
    }
}

/// Integer coefficients `x` with `G x = c`, if `c` lies in the column lattice of `G`.
pub fn int_lattice_member(g: &IntMatrix, c: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    if c.len() != g.rows {
        return Err(Error::DimensionMismatch(format!(
            "target of length {} for {} rows",
            c.len(),
            g.rows
        )));
    }
    HermiteForm::new(g).solve(c)
}
