//! ML degrees, Euler characteristics and Euler obstructions of `X_mn`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{expand_root_product, pow_u64};
use crate::lambda::{chi_series, LambdaSequence, LambdaTable};
use crate::parallel;

/// `(m, n)`: the numbers of states of the two observed variables.
///
/// The pair is stored as given; operations normalize to `m <= n` internally.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModelShape {
    pub m: usize,
    pub n: usize,
}

impl ModelShape {
    pub fn new(m: usize, n: usize) -> Self {
        ModelShape { m, n }
    }

    pub fn small(&self) -> usize {
        self.m.min(self.n)
    }

    pub fn large(&self) -> usize {
        self.m.max(self.n)
    }

    pub fn transposed(&self) -> Self {
        ModelShape {
            m: self.n,
            n: self.m,
        }
    }

    fn require_at_least(&self, lo: usize) -> Result<()> {
        if self.m < lo || self.n < lo {
            return Err(Error::InvalidShape(format!(
                "need m, n >= {lo}, got ({}, {})",
                self.m, self.n
            )));
        }
        Ok(())
    }
}

impl fmt::Display for ModelShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.m, self.n)
    }
}

/// `chi(Y_mn)`, the Euler obstruction `e_mn` and the ML degree of one shape.
///
/// Always satisfies `chi_y == -ml_degree + obstruction`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerRecord {
    pub shape: ModelShape,
    pub chi_y: BigInt,
    pub obstruction: BigInt,
    pub ml_degree: BigInt,
}

/// `(-1)^(m+n-1) * (min(m, n) - 1)` without range checks.
pub(crate) fn obstruction_value(m: usize, n: usize) -> BigInt {
    let mag = BigInt::from(m.min(n) - 1);
    if (m + n - 1).is_multiple_of(2) {
        mag
    } else {
        -mag
    }
}

/// Euler obstruction of `X_mn` along the rank-one locus.
pub fn euler_obstruction(shape: ModelShape) -> Result<BigInt> {
    shape.require_at_least(2)?;
    Ok(obstruction_value(shape.m, shape.n))
}

/// `chi(Y_mn)` from `Lambda_{min(m,n)}`.
///
/// The sequence `Lambda_2 = (2)` is accepted as well; the identity it gives
/// (`chi(Y_2n) = (-1)^(n-1) - 1`) agrees with ML degree one.
pub fn chi_y(shape: ModelShape, lambdas: &LambdaSequence) -> Result<BigInt> {
    shape.require_at_least(2)?;
    if lambdas.m() != shape.small() {
        return Err(Error::InvalidShape(format!(
            "shape {shape} needs Lambda_{}, got Lambda_{}",
            shape.small(),
            lambdas.m()
        )));
    }
    let chi = chi_series(lambdas.values(), shape.large());
    assert!(
        chi.is_integer(),
        "chi(Y) for {shape} is not an integer ({chi}); Lambda_{} is corrupted",
        lambdas.m()
    );
    Ok(chi.to_integer())
}

/// `chi(Y_mn)` from `Lambda_m` for any `n >= 2`, without reorienting the
/// shape. For `n < m` this agrees with [`chi_y`] on `Lambda_n`.
pub fn chi_y_fixed_row(lambdas: &LambdaSequence, n: usize) -> Result<BigInt> {
    if n < 2 {
        return Err(Error::InvalidShape(format!("n must be >= 2, got {n}")));
    }
    let chi = chi_series(lambdas.values(), n);
    assert!(
        chi.is_integer(),
        "chi(Y) from Lambda_{} at n = {n} is {chi}",
        lambdas.m()
    );
    Ok(chi.to_integer())
}

/// ML degree of `X_mn` from `Lambda_m` evaluated at `n`, whichever index
/// is smaller. Transposing the shape switches to a different row, which
/// makes this an independent check of the symmetry `MLdeg(X_mn) = MLdeg(X_nm)`.
pub fn ml_degree_by_row(shape: ModelShape, table: &LambdaTable) -> Result<BigInt> {
    shape.require_at_least(2)?;
    let row = table.get(shape.m).ok_or_else(|| {
        Error::InvalidShape(format!("lambda table stops at m = {}", table.max_m()))
    })?;
    Ok(obstruction_value(shape.m, shape.n) - chi_y_fixed_row(row, shape.n)?)
}

/// ML degree of `X_mn`, using rows of a prebuilt table.
pub fn ml_degree_with(shape: ModelShape, table: &LambdaTable) -> Result<BigInt> {
    shape.require_at_least(1)?;
    if shape.small() <= 2 {
        return Ok(BigInt::one());
    }
    let row = table.get(shape.small()).ok_or_else(|| {
        Error::InvalidShape(format!("lambda table stops at m = {}", table.max_m()))
    })?;
    let chi = chi_y(shape, row)?;
    Ok(obstruction_value(shape.m, shape.n) - chi)
}

/// ML degree of `X_mn`, for any `m, n >= 1`.
///
/// Shapes with `min(m, n) <= 2` have ML degree one: for `min = 1` the model is
/// the independence model, for `min = 2` rank two is no constraint.
pub fn ml_degree(shape: ModelShape) -> Result<BigInt> {
    shape.require_at_least(1)?;
    if shape.small() <= 2 {
        return Ok(BigInt::one());
    }
    let table = LambdaTable::build(shape.small())?;
    ml_degree_with(shape, &table)
}

pub fn euler_record(shape: ModelShape, table: &LambdaTable) -> Result<EulerRecord> {
    shape.require_at_least(2)?;
    let row = table.get(shape.small()).ok_or_else(|| {
        Error::InvalidShape(format!("lambda table stops at m = {}", table.max_m()))
    })?;
    let chi = chi_y(shape, row)?;
    let obstruction = obstruction_value(shape.m, shape.n);
    let ml_degree = &obstruction - &chi;
    Ok(EulerRecord {
        shape,
        chi_y: chi,
        obstruction,
        ml_degree,
    })
}

/// `c_1..c_m` with `t^m - c_1 t^(m-1) - ... - c_m = (t+1) prod_{r=1}^{m-1} (t-r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrenceCoeffs {
    pub m: usize,
    pub c: Vec<BigInt>,
}

impl RecurrenceCoeffs {
    /// Next term from the previous `m` terms, oldest first.
    pub fn step(&self, window: &[BigInt]) -> BigInt {
        debug_assert_eq!(window.len(), self.m);
        self.c
            .iter()
            .zip(window.iter().rev())
            .map(|(c, x)| c * x)
            .sum()
    }
}

pub fn recurrence_coeffs(m: usize) -> Result<RecurrenceCoeffs> {
    if m < 2 {
        return Err(Error::InvalidShape(format!(
            "recurrence needs m >= 2, got {m}"
        )));
    }
    let roots: Vec<BigInt> = std::iter::once(BigInt::from(-1))
        .chain((1..m).map(BigInt::from))
        .collect();
    let poly = expand_root_product(&roots);
    let c = poly[1..].iter().map(|v| -v).collect();
    Ok(RecurrenceCoeffs { m, c })
}

/// `chi(Y_mn)` for `n = 2..=n_max`: seeded with `n = 2..=m+1` from the
/// Lambda formula, continued by the order-`m` recurrence.
pub fn chi_y_by_recurrence_with(lambdas: &LambdaSequence, n_max: usize) -> Result<Vec<BigInt>> {
    let m = lambdas.m();
    if n_max < 2 {
        return Err(Error::InvalidShape(format!(
            "n_max must be >= 2, got {n_max}"
        )));
    }
    let coeffs = recurrence_coeffs(m)?;
    let seed_end = (m + 1).min(n_max);
    let mut out = Vec::with_capacity(n_max - 1);
    for n in 2..=seed_end {
        out.push(chi_y_fixed_row(lambdas, n)?);
    }
    while out.len() < n_max - 1 {
        let next = coeffs.step(&out[out.len() - m..]);
        out.push(next);
    }
    Ok(out)
}

pub fn chi_y_by_recurrence(m: usize, n_max: usize) -> Result<Vec<BigInt>> {
    if m < 2 {
        return Err(Error::InvalidShape(format!(
            "recurrence needs m >= 2, got {m}"
        )));
    }
    let table = LambdaTable::build(m)?;
    chi_y_by_recurrence_with(table.get(m).expect("row just built"), n_max)
}

/// `MLdeg(X_mn) = sum_i coeffs_i * i^(n-1)` for all `n >= m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedForm {
    pub m: usize,
    /// `lambda_i / (i + 1)` for `i = 1..=m-1`.
    pub coeffs: Vec<BigRational>,
}

impl ClosedForm {
    pub fn from_lambda(lambdas: &LambdaSequence) -> Result<Self> {
        // the alternating parts of chi(Y) and e_mn cancel only when
        // sum lambda_i / (i+1) = (-1)^m (m-1)
        let m = lambdas.m();
        let expected = BigInt::from(m - 1) * if m.is_multiple_of(2) { 1 } else { -1 };
        if lambdas.weighted_sum() != BigRational::from_integer(expected) {
            return Err(Error::InvariantViolation(format!(
                "Lambda_{m} has sum lambda_i/(i+1) = {}, closed form does not apply",
                lambdas.weighted_sum()
            )));
        }
        let coeffs = lambdas
            .values()
            .iter()
            .enumerate()
            .map(|(k, l)| BigRational::new(l.clone(), BigInt::from(k + 2)))
            .collect();
        Ok(ClosedForm { m, coeffs })
    }

    /// Evaluates the expression at `n`; only meaningful for `n >= m`.
    pub fn evaluate(&self, n: usize) -> BigInt {
        let e = (n - 1) as u64;
        let total: BigRational = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * pow_u64(&BigInt::from(k + 1), e))
            .sum();
        assert!(
            total.is_integer(),
            "closed form for m = {} at n = {n} is {total}",
            self.m
        );
        total.to_integer()
    }
}

pub fn closed_form(m: usize) -> Result<ClosedForm> {
    if m < 3 {
        return Err(Error::InvalidShape(format!(
            "closed form needs m >= 3, got {m}"
        )));
    }
    let table = LambdaTable::build(m)?;
    ClosedForm::from_lambda(table.get(m).expect("row just built"))
}

/// Grid of ML degrees for `m = 2..=m_max` (rows) and `n = 2..=n_max` (columns).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MLDegreeTable {
    pub m_min: usize,
    pub m_max: usize,
    pub n_min: usize,
    pub n_max: usize,
    pub grid: Vec<Vec<BigInt>>,
}

impl MLDegreeTable {
    pub fn get(&self, m: usize, n: usize) -> Option<&BigInt> {
        if m < self.m_min || n < self.n_min {
            return None;
        }
        self.grid.get(m - self.m_min)?.get(n - self.n_min)
    }

    pub fn m_values(&self) -> std::ops::RangeInclusive<usize> {
        self.m_min..=self.m_max
    }

    pub fn n_values(&self) -> std::ops::RangeInclusive<usize> {
        self.n_min..=self.n_max
    }
}

pub fn ml_table_with(table: &LambdaTable, m_max: usize, n_max: usize) -> Result<MLDegreeTable> {
    if m_max < 2 || n_max < 2 {
        return Err(Error::InvalidShape(format!(
            "table bounds must be >= 2, got ({m_max}, {n_max})"
        )));
    }
    let cells: Vec<(usize, usize)> = (2..=m_max)
        .flat_map(|m| (2..=n_max).map(move |n| (m, n)))
        .collect();
    let values = parallel::map_ordered(&cells, |&(m, n)| {
        ml_degree_with(ModelShape::new(m, n), table)
    });
    let values: Vec<BigInt> = values.into_iter().collect::<Result<_>>()?;
    let width = n_max - 1;
    let grid = values.chunks(width).map(<[BigInt]>::to_vec).collect();
    Ok(MLDegreeTable {
        m_min: 2,
        m_max,
        n_min: 2,
        n_max,
        grid,
    })
}

pub fn ml_table(m_max: usize, n_max: usize) -> Result<MLDegreeTable> {
    if m_max < 2 || n_max < 2 {
        return Err(Error::InvalidShape(format!(
            "table bounds must be >= 2, got ({m_max}, {n_max})"
        )));
    }
    let table = LambdaTable::build(m_max.min(n_max).max(2))?;
    ml_table_with(&table, m_max, n_max)
}

/// Checks the annihilation of `n -> chi(Y_mn)` by the characteristic
/// polynomial over `window` consecutive values starting at `n = 2`.
pub fn annihilated_by_characteristic(lambdas: &LambdaSequence, window: usize) -> Result<bool> {
    let m = lambdas.m();
    let coeffs = recurrence_coeffs(m)?;
    let values: Vec<BigInt> = (2..2 + window + m)
        .map(|n| chi_y_fixed_row(lambdas, n))
        .collect::<Result<_>>()?;
    Ok(values.windows(m + 1).all(|w| {
        let (head, last) = w.split_at(m);
        (coeffs.step(head) - &last[0]).is_zero()
    }))
}
