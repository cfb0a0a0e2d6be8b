//! Self-check suite reproducing the published tables and identities.
//!
//! Each criterion computes its values from a Lambda table, compares them with
//! the reference data, and records a transcript of what it computed so runs
//! can be compared byte for byte.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::engine::{
    chi_y, chi_y_by_recurrence_with, euler_obstruction, ml_degree_by_row, ml_degree_with,
    ml_table_with, ClosedForm, ModelShape,
};
use crate::exact::{pow_u64, ExactMatrix, GaussianRational};
use crate::lambda::{top_lambda, LambdaTable};
use crate::oracle::{
    count_critical_points_3x3, rank1_mle, rank1_mle_exact, verify_critical_point, DataMatrix,
    Model, OracleParams,
};
use crate::parallel;
use crate::reference;
use crate::strata::{fiber_euler_char, validate_w2};

/// Replace `lambda_index` of `Lambda_m` by itself plus `delta` before checking.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LambdaFault {
    pub m: usize,
    pub lambda_index: usize,
    pub delta: i64,
}

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub lambda_fault: Option<LambdaFault>,
    /// Run the multi-start numerical count (the slowest criterion).
    pub numeric: bool,
    pub oracle: OracleParams,
    /// Extra seeds for the "never more than the ML degree" check.
    pub extra_seeds: Vec<u64>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            lambda_fault: None,
            numeric: true,
            oracle: OracleParams::default(),
            extra_seeds: vec![1, 2, 3, 4, 5],
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u128,
    #[serde(skip)]
    pub transcript: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub criteria: Vec<CriterionResult>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> impl Iterator<Item = &CriterionResult> {
        self.criteria.iter().filter(|c| !c.passed)
    }
}

struct Check {
    ok: bool,
    detail: String,
    transcript: String,
}

impl Check {
    fn new() -> Self {
        Check {
            ok: true,
            detail: String::new(),
            transcript: String::new(),
        }
    }

    fn expect(&mut self, cond: bool, what: impl FnOnce() -> String) {
        if !cond && self.ok {
            self.ok = false;
            self.detail = what();
        }
    }

    fn record(&mut self, line: impl std::fmt::Display) {
        let _ = writeln!(self.transcript, "{line}");
    }
}

fn table_for(opts: &SuiteOptions, m_max: usize) -> LambdaTable {
    let m_max = opts.lambda_fault.map_or(m_max, |f| m_max.max(f.m));
    let table = LambdaTable::build(m_max).expect("m_max >= 2");
    match opts.lambda_fault {
        Some(f) => table
            .with_perturbed_entry(f.m, f.lambda_index, f.delta)
            .expect("fault within table"),
        None => table,
    }
}

fn table_one(opts: &SuiteOptions) -> Check {
    let mut c = Check::new();
    let table = table_for(opts, 7);
    match ml_table_with(&table, 7, 13) {
        Ok(t) => {
            for (m, n, want) in reference::ml_degree_entries() {
                let got = t.get(m, n).cloned().unwrap_or_default();
                c.record(format!("{m} {n} {got}"));
                c.expect(got == BigInt::from(want), || {
                    format!("({m}, {n}) = {got}, expected {want}")
                });
            }
        }
        Err(e) => c.expect(false, || e.to_string()),
    }
    c
}

fn table_two(opts: &SuiteOptions) -> Check {
    let mut c = Check::new();
    let table = table_for(opts, 7);
    for (k, want) in reference::LAMBDA_ROWS.iter().enumerate() {
        let m = k + 2;
        let row = table.get(m).expect("row present");
        let want: Vec<BigInt> = want.iter().map(|&v| BigInt::from(v)).collect();
        c.record(format!("{m}: {row}"));
        c.expect(row.values() == want.as_slice(), || {
            format!("Lambda_{m} = ({row}), expected {want:?}")
        });
    }
    c
}

fn three_by_n(opts: &SuiteOptions) -> Check {
    let mut c = Check::new();
    let table = table_for(opts, 3);
    for n in 3..=64usize {
        let got = ml_degree_with(ModelShape::new(3, n), &table).unwrap_or_default();
        let want = pow_u64(&BigInt::from(2), n as u64 + 1) - 6;
        c.record(format!("3 {n} {got}"));
        c.expect(got == want, || {
            format!("MLdeg(3, {n}) = {got}, expected {want}")
        });
    }
    c
}

fn twenty_by_twenty(opts: &SuiteOptions) -> Check {
    let mut c = Check::new();
    let table = table_for(opts, 20);
    let got = ml_degree_with(ModelShape::new(20, 20), &table).unwrap_or_default();
    c.record(&got);
    c.expect(got.to_string() == reference::ML_DEGREE_20_20, || {
        format!("MLdeg(20, 20) = {got}")
    });
    c
}

fn three_by_three_triple(opts: &SuiteOptions) -> Check {
    let mut c = Check::new();
    let table = table_for(opts, 3);
    let shape = ModelShape::new(3, 3);
    let e = euler_obstruction(shape).unwrap_or_default();
    let chi = chi_y(shape, table.get(3).expect("row present")).unwrap_or_default();
    let ml = &e - &chi;
    c.record(format!("{e} {chi} {ml}"));
    c.expect(e == BigInt::from(-2), || format!("e_33 = {e}"));
    c.expect(chi == BigInt::from(-12), || format!("chi(Y_33) = {chi}"));
    c.expect(ml == BigInt::from(10), || format!("MLdeg(3, 3) = {ml}"));
    c
}

fn cross_methods(opts: &SuiteOptions) -> Check {
    let mut c = Check::new();
    let table = table_for(opts, 7);
    for m in 3..=7 {
        let row = table.get(m).expect("row present");
        let closed = match ClosedForm::from_lambda(row) {
            Ok(cf) => cf,
            Err(e) => {
                c.expect(false, || e.to_string());
                continue;
            }
        };
        let chis = chi_y_by_recurrence_with(row, m + 20).expect("m >= 2");
        for n in m..=m + 20 {
            let direct = ml_degree_with(ModelShape::new(m, n), &table).unwrap_or_default();
            let by_closed = closed.evaluate(n);
            let by_recurrence =
                euler_obstruction(ModelShape::new(m, n)).unwrap_or_default() - &chis[n - 2];
            c.record(format!("{m} {n} {direct}"));
            c.expect(direct == by_closed && direct == by_recurrence, || {
                format!(
                    "({m}, {n}): direct {direct}, closed {by_closed}, recurrence {by_recurrence}"
                )
            });
        }
    }
    c
}

fn symmetry(opts: &SuiteOptions) -> Check {
    let mut c = Check::new();
    let table = table_for(opts, 10);
    for m in 2..=10 {
        for n in 2..=10 {
            let a = ml_degree_by_row(ModelShape::new(m, n), &table).unwrap_or_default();
            let b = ml_degree_by_row(ModelShape::new(n, m), &table).unwrap_or_default();
            c.record(format!("{m} {n} {a}"));
            c.expect(a == b, || {
                format!("MLdeg({m}, {n}) = {a} but MLdeg({n}, {m}) = {b}")
            });
        }
    }
    c
}

fn lambda_invariants(opts: &SuiteOptions) -> Check {
    let mut c = Check::new();
    let table = table_for(opts, 12);
    for m in 2..=12usize {
        let row = table.get(m).expect("row present");
        let sign: i64 = if m % 2 == 0 { 1 } else { -1 };
        let top = row.lambda(m - 1);
        let sum: BigInt = row.values().iter().sum();
        let weighted = row.weighted_sum();
        c.record(format!("{m}: {top} {sum} {weighted}"));
        c.expect(top == top_lambda(m), || {
            format!("lambda_{} of Lambda_{m} = {top}", m - 1)
        });
        c.expect(sum == BigInt::from(1 + sign), || {
            format!("sum of Lambda_{m} = {sum}")
        });
        c.expect(
            weighted == BigRational::from_integer(BigInt::from(sign * (m as i64 - 1))),
            || format!("sum lambda_i/(i+1) of Lambda_{m} = {weighted}"),
        );
    }
    c
}

fn example_strata() -> Check {
    let mut c = Check::new();
    let cases: [(&[i64; 3], &[i64; 3], i64); 3] = [
        (&[1, 2, -2], &[1, 3, -3], 0),
        (&[2, 1, -2], &[2, -2, 1], -1),
        (&[4, -2, -1], &[5, 7, -11], -2),
    ];
    for (k, (a, b, want)) in cases.into_iter().enumerate() {
        let col = |v: &[i64; 3]| v.iter().map(|&x| GaussianRational::from_int(x)).collect();
        let m = ExactMatrix::from_columns(&[col(a), col(b)]).expect("3x2");
        match validate_w2(&m) {
            Ok(x) => {
                let f = fiber_euler_char(&x);
                let pts: Vec<String> = f.points.iter().map(ToString::to_string).collect();
                c.record(format!("x{k}: {} {}", f.chi, pts.join(",")));
                c.expect(f.chi == want, || {
                    format!("chi(F_x{k}) = {}, expected {want}", f.chi)
                });
            }
            Err(e) => c.expect(false, || format!("x{k} rejected: {e}")),
        }
    }
    c
}

fn rank_one_example() -> Check {
    let mut c = Check::new();
    let u = DataMatrix::from_rows(&[vec![2, 8], vec![5, 10]]).expect("2x2");
    let exact = rank1_mle_exact(&u).expect("nonempty");
    let want: Vec<BigRational> = [70, 180, 105, 270]
        .iter()
        .map(|&v| BigRational::new(BigInt::from(v), BigInt::from(625)))
        .collect();
    c.expect(exact == want, || format!("rank-one MLE = {exact:?}"));
    let p = rank1_mle(&u).expect("nonempty");
    let r = verify_critical_point(&p, &u, Model::Rank1, 1e-12).expect("shapes agree");
    c.expect(r.pass, || format!("residual {:e}", r.residual));
    c
}

fn numeric_count(opts: &SuiteOptions) -> Check {
    let mut c = Check::new();
    let u = DataMatrix::from_rows(&reference::GENERIC_3X3_DATA.map(|r| r.to_vec())).expect("3x3");
    let report = match count_critical_points_3x3(&u, &opts.oracle) {
        Ok(r) => r,
        Err(e) => {
            c.expect(false, || e.to_string());
            return c;
        }
    };
    c.expect(report.count == reference::ML_DEGREE_3X3, || {
        format!(
            "seed {} found {} critical points",
            opts.oracle.seed, report.count
        )
    });
    for p in &report.accepted {
        let r =
            verify_critical_point(p, &u, Model::Rank2Of3x3, opts.oracle.newton_tol).expect("3x3");
        c.expect(r.pass, || {
            format!("accepted point re-verifies at {:e}", r.residual)
        });
    }
    for &seed in &opts.extra_seeds {
        let params = OracleParams {
            seed,
            ..opts.oracle
        };
        let n = count_critical_points_3x3(&u, &params).map_or(0, |r| r.count);
        c.expect(n <= reference::ML_DEGREE_3X3, || {
            format!("seed {seed} found {n} > 10 points")
        });
    }
    c
}

type ExactCriterion = (u32, &'static str, Duration, fn(&SuiteOptions) -> Check);

fn exact_criteria() -> Vec<ExactCriterion> {
    vec![
        (1, "ml-degree-table", Duration::from_secs(1), table_one),
        (2, "lambda-table", Duration::from_secs(1), table_two),
        (
            3,
            "three-by-n-closed-form",
            Duration::from_secs(1),
            three_by_n,
        ),
        (
            4,
            "twenty-by-twenty",
            Duration::from_secs(5),
            twenty_by_twenty,
        ),
        (
            5,
            "three-by-three-euler-triple",
            Duration::from_secs(1),
            three_by_three_triple,
        ),
        (
            6,
            "cross-method-equivalence",
            Duration::from_secs(2),
            cross_methods,
        ),
        (7, "symmetry", Duration::from_secs(1), symmetry),
        (
            8,
            "lambda-invariants",
            Duration::from_secs(1),
            lambda_invariants,
        ),
        (9, "fiber-strata", Duration::from_secs(1), |_| {
            example_strata()
        }),
    ]
}

fn run_timed(
    id: u32,
    name: &'static str,
    budget: Duration,
    f: impl FnOnce() -> Check,
) -> CriterionResult {
    let start = Instant::now();
    let mut check = f();
    let elapsed = start.elapsed();
    if check.ok && elapsed > budget {
        check.ok = false;
        check.detail = format!("took {elapsed:?}, budget {budget:?}");
    }
    CriterionResult {
        id,
        name,
        passed: check.ok,
        detail: check.detail,
        elapsed_ms: elapsed.as_millis(),
        transcript: check.transcript,
    }
}

/// Transcripts of the exact criteria, joined.
fn exact_transcript(opts: &SuiteOptions) -> String {
    exact_criteria()
        .into_iter()
        .map(|(id, _, _, f)| format!("[{id}]\n{}", f(opts).transcript))
        .collect()
}

fn determinism(opts: &SuiteOptions) -> Check {
    let mut c = Check::new();
    let first = parallel::with_threads(Some(1), || exact_transcript(opts));
    let second = parallel::with_threads(Some(1), || exact_transcript(opts));
    let wide = parallel::with_threads(Some(4), || exact_transcript(opts));
    c.expect(first == second, || "two single-thread runs differ".into());
    c.expect(first == wide, || "1-thread and 4-thread runs differ".into());
    c.record(format!("{} bytes", first.len()));
    c
}

pub fn run_reference_suite(opts: &SuiteOptions) -> SuiteReport {
    let mut criteria: Vec<CriterionResult> = exact_criteria()
        .into_iter()
        .map(|(id, name, budget, f)| run_timed(id, name, budget, || f(opts)))
        .collect();
    criteria.push(run_timed(
        10,
        "rank-one-critical-point",
        Duration::from_secs(1),
        rank_one_example,
    ));
    if opts.numeric {
        criteria.push(run_timed(
            11,
            "numeric-critical-count",
            Duration::from_secs(60),
            || numeric_count(opts),
        ));
    }
    criteria.push(run_timed(
        12,
        "determinism",
        Duration::from_secs(30),
        || determinism(opts),
    ));
    SuiteReport { criteria }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact_only() -> SuiteOptions {
        SuiteOptions {
            numeric: false,
            ..SuiteOptions::default()
        }
    }

    #[test]
    fn clean_build_passes() {
        let report = run_reference_suite(&exact_only());
        let failed: Vec<_> = report
            .failed()
            .map(|c| (c.name, c.detail.clone()))
            .collect();
        assert!(report.all_passed(), "{failed:?}");
        assert_eq!(report.criteria.len(), 11);
    }

    #[test]
    fn injected_fault_is_named() {
        let opts = SuiteOptions {
            lambda_fault: Some(LambdaFault {
                m: 5,
                lambda_index: 2,
                delta: 3,
            }),
            ..exact_only()
        };
        let report = run_reference_suite(&opts);
        let failed: Vec<&str> = report.failed().map(|c| c.name).collect();
        assert!(failed.contains(&"lambda-table"));
        assert!(failed.contains(&"lambda-invariants"));
        assert!(failed.contains(&"ml-degree-table"));
        assert!(!failed.contains(&"fiber-strata"));
    }
}
