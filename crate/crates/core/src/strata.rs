//! Points of `W_2` and the Euler characteristic of their fibers.
//!
//! `W_2` is the set of `m x 2` matrices `[b_i1 b_i2]` with nonzero entries,
//! unit column sums and rank two. The fiber over `x` consists of third
//! columns `T * b_1 + (1 - T) * b_2` with no zero coordinate, so it is the
//! line minus the finitely many values `T = -b_i2 / (b_i1 - b_i2)`. Its Euler
//! characteristic is one minus the number of distinct excluded values, and
//! `W_2^(k)` collects the matrices whose fiber has `chi = -k`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{ExactMatrix, GaussianRational};

/// A validated element of `W_2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WTwoMatrix {
    first: Vec<GaussianRational>,
    second: Vec<GaussianRational>,
}

impl WTwoMatrix {
    pub fn m(&self) -> usize {
        self.first.len()
    }

    pub fn first_column(&self) -> &[GaussianRational] {
        &self.first
    }

    pub fn second_column(&self) -> &[GaussianRational] {
        &self.second
    }

    pub fn to_matrix(&self) -> ExactMatrix {
        ExactMatrix::from_columns(&[self.first.clone(), self.second.clone()])
            .expect("columns have equal length")
    }
}

/// The fiber over one point of `W_2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberClass {
    /// Excluded parameter values, sorted and distinct.
    #[serde(serialize_with = "serialize_points")]
    pub points: Vec<GaussianRational>,
    pub chi: i64,
    /// `k` with `x` in `W_2^(k)`.
    pub stratum_k: usize,
}

fn serialize_points<S: serde::Serializer>(
    points: &[GaussianRational],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(points.len()))?;
    for p in points {
        seq.serialize_element(&p.to_string())?;
    }
    seq.end()
}

pub fn validate_w2(m: &ExactMatrix) -> Result<WTwoMatrix> {
    if m.cols() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "W_2 matrices have 2 columns, got {}",
            m.cols()
        )));
    }
    if m.rows() < 2 {
        return Err(Error::DimensionMismatch(format!(
            "W_2 matrices have at least 2 rows, got {}",
            m.rows()
        )));
    }
    for i in 0..m.rows() {
        for j in 0..2 {
            if m.get(i, j).is_zero() {
                return Err(Error::ZeroEntry { row: i, col: j });
            }
        }
    }
    let first = m.column(0);
    let second = m.column(1);
    for (j, col) in [&first, &second].into_iter().enumerate() {
        let sum = col.iter().fold(GaussianRational::zero(), |acc, v| &acc + v);
        if !sum.is_one() {
            return Err(Error::ColumnSumNotOne {
                col: j,
                actual: sum.to_string(),
            });
        }
    }
    // with equal column sums, rank two is the same as distinct columns
    if first == second {
        return Err(Error::ColumnsEqual);
    }
    Ok(WTwoMatrix { first, second })
}

/// `{-b_i2 / (b_i1 - b_i2) : b_i1 != b_i2}`.
pub fn fiber_points(x: &WTwoMatrix) -> BTreeSet<GaussianRational> {
    x.first
        .iter()
        .zip(&x.second)
        .filter(|(a, b)| a != b)
        .map(|(a, b)| &(-b) / &(a - b))
        .collect()
}

pub fn fiber_euler_char(x: &WTwoMatrix) -> FiberClass {
    let points: Vec<GaussianRational> = fiber_points(x).into_iter().collect();
    let count = points.len();
    assert!(
        (1..=x.m()).contains(&count),
        "fiber of a W_2 point excludes {count} values"
    );
    FiberClass {
        chi: 1 - count as i64,
        stratum_k: count - 1,
        points,
    }
}

/// Euler characteristic of the complement of `r` general-position
/// hyperplanes in affine `s`-space, for `r = s + 1` or `r = s + 2`.
pub fn arrangement_euler_char(s: usize, r: usize) -> Result<BigInt> {
    if s == 0 {
        return Err(Error::Unsupported("ambient dimension must be >= 1".into()));
    }
    let sign = if s.is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    };
    if r == s + 1 {
        Ok(sign)
    } else if r == s + 2 {
        Ok(sign * BigInt::from(s + 1))
    } else {
        Err(Error::Unsupported(format!(
            "{r} hyperplanes in dimension {s}; only r = s+1 and r = s+2 are covered"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w2(a: &[i64], b: &[i64]) -> Result<WTwoMatrix> {
        let to = |v: &[i64]| v.iter().map(|&x| GaussianRational::from_int(x)).collect();
        validate_w2(&ExactMatrix::from_columns(&[to(a), to(b)]).unwrap())
    }

    fn q(n: i64, d: i64) -> GaussianRational {
        GaussianRational::from_ratio(n, d)
    }

    #[test]
    fn validation_errors() {
        let half = vec![q(1, 2), q(1, 2)];
        let m = ExactMatrix::from_columns(&[half.clone(), half]).unwrap();
        assert_eq!(validate_w2(&m), Err(Error::ColumnsEqual));
        let m = ExactMatrix::from_columns(&[
            vec![q(1, 1), q(0, 1), q(0, 1)],
            vec![q(1, 2), q(1, 4), q(1, 4)],
        ])
        .unwrap();
        assert_eq!(validate_w2(&m), Err(Error::ZeroEntry { row: 1, col: 0 }));
        assert!(matches!(
            w2(&[1, 2, 3], &[1, 3, -3]),
            Err(Error::ColumnSumNotOne { col: 0, .. })
        ));
        assert!(matches!(
            validate_w2(&ExactMatrix::identity(3)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn example_strata() {
        let x0 = w2(&[1, 2, -2], &[1, 3, -3]).unwrap();
        let f0 = fiber_euler_char(&x0);
        assert_eq!(f0.points, vec![q(3, 1)]);
        assert_eq!((f0.chi, f0.stratum_k), (0, 0));

        let x1 = w2(&[2, 1, -2], &[2, -2, 1]).unwrap();
        let f1 = fiber_euler_char(&x1);
        assert_eq!((f1.chi, f1.stratum_k), (-1, 1));
        assert_eq!(f1.points, vec![q(1, 3), q(2, 3)]);

        let x2 = w2(&[4, -2, -1], &[5, 7, -11]).unwrap();
        let f2 = fiber_euler_char(&x2);
        assert_eq!((f2.chi, f2.stratum_k), (-2, 2));
        assert_eq!(f2.points, vec![q(7, 9), q(11, 10), q(5, 1)]);
    }

    #[test]
    fn two_row_fiber() {
        let x = w2(&[2, -1], &[-1, 2]).unwrap();
        assert_eq!(
            fiber_points(&x).into_iter().collect::<Vec<_>>(),
            vec![q(1, 3), q(2, 3)]
        );
    }

    #[test]
    fn complex_entries() {
        let i = GaussianRational::i();
        let one = GaussianRational::from_int(1);
        let col1 = vec![&one + &i, -&i];
        let col2 = vec![q(1, 2), q(1, 2)];
        let x = validate_w2(&ExactMatrix::from_columns(&[col1, col2]).unwrap()).unwrap();
        assert_eq!(fiber_euler_char(&x).stratum_k, 1);
    }

    #[test]
    fn arrangements() {
        assert_eq!(arrangement_euler_char(1, 2).unwrap(), BigInt::from(-1));
        assert_eq!(arrangement_euler_char(1, 3).unwrap(), BigInt::from(-2));
        assert_eq!(arrangement_euler_char(4, 5).unwrap(), BigInt::from(1));
        assert_eq!(arrangement_euler_char(2, 4).unwrap(), BigInt::from(3));
        assert!(matches!(
            arrangement_euler_char(2, 6),
            Err(Error::Unsupported(_))
        ));
        assert!(arrangement_euler_char(0, 1).is_err());
    }
}
