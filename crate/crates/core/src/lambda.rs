//! The integer sequences `Lambda_m = (lambda_1, ..., lambda_{m-1})`.
//!
//! For fixed `m` and every `n >= 2`,
//!
//! ```text
//! chi(Y_mn) = sum_i lambda_i * ((-1)^(n-1) - i^(n-1)) / (i + 1)
//! ```
//!
//! Evaluating this at `n = 2..=m` and equating with `-MLdeg(X_mn) + e_mn`
//! gives `m - 1` linear relations. The top value `lambda_{m-1} = (m-1) * m!`
//! and the ML degrees `MLdeg(X_mn) = MLdeg(X_nm)` for `n < m` (known from
//! smaller rows) are substituted, leaving `lambda_1..lambda_{m-2}` and
//! `MLdeg(X_mm)` as unknowns of a nonsingular square system.
//!
//! `lambda_0` is identically zero and is never stored.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::engine::obstruction_value;
use crate::error::{Error, Result};
use crate::exact::{pow_u64, solve_exact_linear, ExactMatrix, GaussianRational};

/// `Lambda_m` together with the diagonal ML degree produced by the same solve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaSequence {
    m: usize,
    values: Vec<BigInt>,
    diagonal_ml_degree: BigInt,
}

impl LambdaSequence {
    pub fn m(&self) -> usize {
        self.m
    }

    /// `(lambda_1, ..., lambda_{m-1})`.
    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    /// `lambda_i` for `1 <= i <= m-1`; `lambda_0` is zero.
    pub fn lambda(&self, i: usize) -> BigInt {
        if i == 0 {
            BigInt::zero()
        } else {
            self.values[i - 1].clone()
        }
    }

    /// `MLdeg(X_mm)`, obtained as a byproduct of solving for this row.
    pub fn diagonal_ml_degree(&self) -> &BigInt {
        &self.diagonal_ml_degree
    }

    /// `sum_i lambda_i / (i + 1)`.
    pub fn weighted_sum(&self) -> BigRational {
        self.values
            .iter()
            .enumerate()
            .map(|(k, l)| BigRational::new(l.clone(), BigInt::from(k + 2)))
            .sum()
    }
}

impl fmt::Display for LambdaSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.values.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Rows `Lambda_2..=Lambda_{m_max}`, each computed once from the rows before it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaTable {
    rows: Vec<LambdaSequence>,
}

impl LambdaTable {
    pub fn build(m_max: usize) -> Result<Self> {
        if m_max < 2 {
            return Err(Error::InvalidShape(format!(
                "lambda table needs m_max >= 2, got {m_max}"
            )));
        }
        let mut table = LambdaTable { rows: Vec::new() };
        table.extend_to(m_max);
        Ok(table)
    }

    /// Appends rows until `Lambda_{m_max}` is present.
    pub fn extend_to(&mut self, m_max: usize) {
        while self.max_m() < m_max {
            let next = solve_row(self.max_m() + 1, self);
            self.rows.push(next);
        }
    }

    /// Largest `m` in the table; 1 for an empty table.
    pub fn max_m(&self) -> usize {
        self.rows.len() + 1
    }

    pub fn get(&self, m: usize) -> Option<&LambdaSequence> {
        m.checked_sub(2).and_then(|k| self.rows.get(k))
    }

    pub fn rows(&self) -> &[LambdaSequence] {
        &self.rows
    }

    /// A copy with `lambda_index` of row `m` shifted by `delta`.
    ///
    /// Only meant for exercising the verification suite against a known bad
    /// table; rows after `m` are not recomputed.
    pub fn with_perturbed_entry(&self, m: usize, lambda_index: usize, delta: i64) -> Result<Self> {
        let mut out = self.clone();
        let row = m
            .checked_sub(2)
            .and_then(|k| out.rows.get_mut(k))
            .ok_or_else(|| Error::InvalidShape(format!("no row for m = {m}")))?;
        if lambda_index == 0 || lambda_index >= m {
            return Err(Error::InvalidShape(format!(
                "lambda index {lambda_index} out of range for m = {m}"
            )));
        }
        row.values[lambda_index - 1] += BigInt::from(delta);
        Ok(out)
    }
}

/// `Lambda_m`.
pub fn compute_lambda(m: usize) -> Result<LambdaSequence> {
    let table = LambdaTable::build(m)?;
    Ok(table.rows[m - 2].clone())
}

pub fn lambda_table(m_max: usize) -> Result<LambdaTable> {
    LambdaTable::build(m_max)
}

/// `((-1)^(n-1) - i^(n-1)) / (i + 1)`, the weight of `lambda_i` in `chi(Y_mn)`.
pub(crate) fn chi_weight(i: usize, n: usize) -> BigRational {
    let e = (n - 1) as u64;
    let alt = if e.is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    };
    BigRational::new(alt - pow_u64(&BigInt::from(i), e), BigInt::from(i + 1))
}

/// `sum_i lambda_i * chi_weight(i, n)`.
pub(crate) fn chi_series(lambdas: &[BigInt], n: usize) -> BigRational {
    lambdas
        .iter()
        .enumerate()
        .map(|(k, l)| chi_weight(k + 1, n) * l)
        .sum()
}

/// `(m-1) * m!`, the top entry of `Lambda_m`.
pub fn top_lambda(m: usize) -> BigInt {
    let fact: BigInt = (1..=m).map(BigInt::from).product();
    fact * BigInt::from(m - 1)
}

/// `MLdeg(X_{small,large})` from an already known row `Lambda_small`.
fn known_ml_degree(row: &LambdaSequence, large: usize) -> BigInt {
    let small = row.m();
    if small <= 2 {
        return BigInt::one();
    }
    let chi = chi_series(row.values(), large);
    assert!(chi.is_integer(), "non-integral chi(Y) from Lambda_{small}");
    obstruction_value(small, large) - chi.to_integer()
}

/// The square system for row `m`: unknowns `lambda_1..lambda_{m-2}` then
/// `MLdeg(X_mm)`, one equation per `n = 2..=m`.
pub(crate) fn induction_system(m: usize, table: &LambdaTable) -> (ExactMatrix, Vec<BigRational>) {
    assert!(m >= 2 && table.max_m() >= m - 1);
    let k = m - 1;
    let top = top_lambda(m);
    let mut a = ExactMatrix::zeros(k, k);
    let mut b = Vec::with_capacity(k);
    for n in 2..=m {
        let r = n - 2;
        for i in 1..m - 1 {
            a.set(r, i - 1, GaussianRational::real(chi_weight(i, n)));
        }
        let mut rhs =
            BigRational::from_integer(obstruction_value(m, n)) - chi_weight(m - 1, n) * &top;
        if n == m {
            a.set(r, k - 1, GaussianRational::from_int(1));
        } else {
            let known = match table.get(n) {
                Some(row) => known_ml_degree(row, m),
                None => BigInt::one(),
            };
            rhs -= BigRational::from_integer(known);
        }
        b.push(rhs);
    }
    (a, b)
}

fn solve_row(m: usize, table: &LambdaTable) -> LambdaSequence {
    let (a, b) = induction_system(m, table);
    let x = solve_exact_linear(&a, &b)
        .unwrap_or_else(|e| panic!("induction system for m = {m} failed: {e}"));
    let mut values: Vec<BigInt> = x[..m - 2]
        .iter()
        .enumerate()
        .map(|(k, v)| {
            assert!(
                v.is_integer(),
                "lambda_{} of Lambda_{m} is not an integer: {v}",
                k + 1
            );
            v.to_integer()
        })
        .collect();
    values.push(top_lambda(m));
    let diag = &x[m - 2];
    assert!(
        diag.is_integer() && diag.is_positive(),
        "MLdeg(X_{m}{m}) = {diag}"
    );
    LambdaSequence {
        m,
        values,
        diagonal_ml_degree: diag.to_integer(),
    }
}
