//! Fraction-free (Bareiss) elimination.
//!
//! Every division performed during elimination is exact: the previous pivot
//! divides each updated entry. Over `BigInt` this keeps the working matrix
//! integral; over `GaussianRational` it behaves like ordinary elimination
//! with delayed division.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::matrix::integer_rows;
use super::{ExactMatrix, GaussianRational};
use crate::error::{Error, Result};

pub(crate) trait Domain: Clone + Zero + One {
    fn times(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    /// `self / rhs`, where the caller guarantees exactness.
    fn div_exact(&self, rhs: &Self) -> Self;
}

impl Domain for BigInt {
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn div_exact(&self, rhs: &Self) -> Self {
        debug_assert!((self % rhs).is_zero(), "inexact Bareiss division");
        self / rhs
    }
}

impl Domain for GaussianRational {
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn div_exact(&self, rhs: &Self) -> Self {
        self / rhs
    }
}

/// Reduces `a` in place to row-echelon form using the first `pivot_cols`
/// columns for pivoting. Returns the pivot column of each pivot row.
pub(crate) fn bareiss_echelon<T: Domain>(a: &mut [Vec<T>], pivot_cols: usize) -> Vec<usize> {
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut prev = T::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..nrows {
            for j in c + 1..ncols {
                let v = a[r][c].times(&a[i][j]).minus(&a[i][c].times(&a[r][j]));
                a[i][j] = v.div_exact(&prev);
            }
            a[i][c] = T::zero();
        }
        // entries left of the pivot in rows below stay zero; the skipped
        // columns between earlier pivots are already zero as well
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Solves `a x = b` exactly. `a` must be square with real rational entries.
pub fn solve_exact_linear(a: &ExactMatrix, b: &[BigRational]) -> Result<Vec<BigRational>> {
    let k = a.rows();
    if a.cols() != k {
        return Err(Error::DimensionMismatch(format!(
            "coefficient matrix is {}x{}, expected square",
            a.rows(),
            a.cols()
        )));
    }
    if b.len() != k {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side has length {}, expected {k}",
            b.len()
        )));
    }
    let mut aug = a.to_rational_rows()?;
    for (row, rhs) in aug.iter_mut().zip(b) {
        row.push(rhs.clone());
    }
    let mut work = integer_rows(&aug);
    let pivots = bareiss_echelon(&mut work, k);
    if pivots.len() < k {
        return Err(Error::SingularMatrix);
    }
    // back substitution on the integral upper-triangular system
    let mut x = vec![BigRational::zero(); k];
    for i in (0..k).rev() {
        let mut acc = BigRational::from_integer(work[i][k].clone());
        for j in i + 1..k {
            acc -= BigRational::from_integer(work[i][j].clone()) * &x[j];
        }
        x[i] = acc / BigRational::from_integer(work[i][i].clone());
    }
    Ok(x)
}

/// Rank over `Q(i)`.
pub fn matrix_rank_exact(m: &ExactMatrix) -> usize {
    let mut work: Vec<Vec<GaussianRational>> = (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
    bareiss_echelon(&mut work, m.cols()).len()
}

/// Determinant of a square integer matrix, fraction-free.
pub fn determinant_integer(rows: &[Vec<BigInt>]) -> Result<BigInt> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch(
            "determinant of non-square matrix".into(),
        ));
    }
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut work = rows.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !work[i][c].is_zero()) else {
            return Ok(BigInt::zero());
        };
        if p != c {
            work.swap(p, c);
            sign = -sign;
        }
        for i in c + 1..n {
            for j in c + 1..n {
                let v = &work[c][c] * &work[i][j] - &work[i][c] * &work[c][j];
                work[i][j] = v / &prev;
            }
            work[i][c] = BigInt::zero();
        }
        prev = work[c][c].clone();
    }
    Ok(sign * &work[n - 1][n - 1])
}
