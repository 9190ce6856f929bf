//! Exact Gaussian elimination over a field.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Num;

use crate::error::{Error, Result};

/// Arbitrary-precision rational; always kept in lowest terms with positive denominator.
pub type Rational = BigRational;

pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearSolution<T> {
    Unique(Vec<T>),
    Singular,
}

/// Solves the square system `A x = b` by Gaussian elimination.
///
/// Pivots are chosen as the first nonzero entry, so over an exact field the
/// singular verdict is exact. Floating-point types compile but get no
/// tolerance handling.
pub fn rational_linear_solve<T>(a: &[Vec<T>], b: &[T]) -> Result<LinearSolution<T>>
where
    T: Num + Clone,
{
    let n = a.len();
    if a.iter().any(|row| row.len() != n) {
        return Err(Error::DimensionMismatch(format!(
            "system matrix must be square with {n} rows"
        )));
    }
    if b.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side of length {} for {n} equations",
            b.len()
        )));
    }
    let mut m: Vec<Vec<T>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Ok(LinearSolution::Singular);
        };
        m.swap(col, p);
        let pivot = m[col][col].clone();
        for entry in m[col][col..].iter_mut() {
            *entry = entry.clone() / pivot.clone();
        }
        let pivot_row = m[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (entry, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *entry = entry.clone() - factor.clone() * p.clone();
            }
        }
    }
    Ok(LinearSolution::Unique(m.into_iter().map(|mut r| r.pop().unwrap()).collect()))
}

/// Rank of a (possibly rectangular) matrix by exact elimination.
pub fn rank<T>(a: &[Vec<T>]) -> usize
where
    T: Num + Clone,
{
    let mut m = a.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][col].clone();
        for i in r + 1..m.len() {
            if m[i][col].is_zero() {
                continue;
            }
            let factor = m[i][col].clone() / pivot.clone();
            for c in col..cols {
                let delta = factor.clone() * m[r][c].clone();
                m[i][c] = m[i][c].clone() - delta;
            }
        }
        r += 1;
    }
    r
}

/// Exact determinant by elimination.
pub fn determinant<T>(a: &[Vec<T>]) -> Result<T>
where
    T: Num + Clone,
{
    let n = a.len();
    if a.iter().any(|row| row.len() != n) {
        return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
    }
    let mut m = a.to_vec();
    let mut det = T::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Ok(T::zero());
        };
        if p != col {
            m.swap(col, p);
            det = T::zero() - det;
        }
        let pivot = m[col][col].clone();
        det = det * pivot.clone();
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone() / pivot.clone();
            for c in col..n {
                let delta = factor.clone() * m[col][c].clone();
                m[r][c] = m[r][c].clone() - delta;
            }
        }
    }
    Ok(det)
}
