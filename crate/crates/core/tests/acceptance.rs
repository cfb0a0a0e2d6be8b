//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Expected values are written out here rather than taken from
//! `mldeg::reference`, so a typo in one place cannot hide in both.

use std::fmt::Write as _;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;

use mldeg::engine::{
    chi_y, chi_y_by_recurrence, closed_form, euler_obstruction, euler_record, ml_degree, ml_table,
    ModelShape,
};
use mldeg::exact::{ExactMatrix, GaussianRational};
use mldeg::lambda::{compute_lambda, lambda_table};
use mldeg::oracle::{
    count_critical_points_3x3, rank1_mle, verify_critical_point, DataMatrix, Model, OracleParams,
};
use mldeg::parallel;
use mldeg::strata::{fiber_euler_char, validate_w2};
use mldeg::verify::{run_reference_suite, SuiteOptions};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn big(s: &str) -> BigInt {
    s.parse().unwrap()
}

fn within(start: Instant, budget: Duration, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    if t > budget {
        Err(format!("{what} took {t:?}, budget {budget:?}"))
    } else {
        Ok(())
    }
}

// (m, n, value) for m = 2..=7, n = m..=m+6.
const TABLE_ONE: [(usize, usize, u64); 42] = [
    (2, 2, 1),
    (2, 3, 1),
    (2, 4, 1),
    (2, 5, 1),
    (2, 6, 1),
    (2, 7, 1),
    (2, 8, 1),
    (3, 3, 10),
    (3, 4, 26),
    (3, 5, 58),
    (3, 6, 122),
    (3, 7, 250),
    (3, 8, 506),
    (3, 9, 1018),
    (4, 4, 191),
    (4, 5, 843),
    (4, 6, 3119),
    (4, 7, 10587),
    (4, 8, 34271),
    (4, 9, 107883),
    (4, 10, 333839),
    (5, 5, 6776),
    (5, 6, 40924),
    (5, 7, 212936),
    (5, 8, 1015564),
    (5, 9, 4586456),
    (5, 10, 19984444),
    (5, 11, 84986216),
    (6, 6, 378477),
    (6, 7, 2865245),
    (6, 8, 19177197),
    (6, 9, 118430045),
    (6, 10, 692277357),
    (6, 11, 3892815965),
    (6, 12, 21284701677),
    (7, 7, 30305766),
    (7, 8, 274740990),
    (7, 9, 2244706374),
    (7, 10, 17048729886),
    (7, 11, 122818757286),
    (7, 12, 850742384190),
    (7, 13, 5720543812614),
];

fn table_one() -> Outcome {
    let start = Instant::now();
    let t = ml_table(7, 13).map_err(|e| e.to_string())?;
    within(start, Duration::from_secs(1), "ml_table(7, 13)")?;
    let mut out = String::new();
    for &(m, n, want) in &TABLE_ONE {
        let got = t.get(m, n).ok_or(format!("missing ({m},{n})"))?;
        if *got != BigInt::from(want) {
            return Err(format!("({m},{n}) = {got}, expected {want}"));
        }
        let _ = write!(out, "{got} ");
    }
    Ok(out)
}

fn table_two() -> Outcome {
    let rows: [&[i64]; 6] = [
        &[2],
        &[-12, 12],
        &[50, -120, 72],
        &[-180, 780, -1080, 480],
        &[602, -4200, 10080, -10080, 3600],
        &[-1932, 20412, -75600, 127680, -100800, 30240],
    ];
    let mut out = String::new();
    for (k, want) in rows.iter().enumerate() {
        let m = k + 2;
        let got = compute_lambda(m).map_err(|e| e.to_string())?;
        let want: Vec<BigInt> = want.iter().map(|&v| BigInt::from(v)).collect();
        if got.values() != want.as_slice() {
            return Err(format!("Lambda_{m} = {got}"));
        }
        let _ = writeln!(out, "{got}");
    }
    Ok(out)
}

fn three_by_n() -> Outcome {
    let start = Instant::now();
    let mut out = String::new();
    for n in 3..=64usize {
        let got = ml_degree(ModelShape::new(3, n)).map_err(|e| e.to_string())?;
        let want = (BigInt::from(1) << (n + 1)) - 6;
        if got != want {
            return Err(format!("(3,{n}) = {got}, expected {want}"));
        }
        let _ = write!(out, "{got} ");
    }
    within(start, Duration::from_secs(1), "3 x n sweep")?;
    Ok(out)
}

fn twenty_by_twenty() -> Outcome {
    let start = Instant::now();
    let got = ml_degree(ModelShape::new(20, 20)).map_err(|e| e.to_string())?;
    within(start, Duration::from_secs(5), "ml_degree(20, 20)")?;
    if got != big("19674198689452133729973092792823813947695") {
        return Err(format!("got {got}"));
    }
    Ok(got.to_string())
}

fn euler_triple() -> Outcome {
    let shape = ModelShape::new(3, 3);
    let e = euler_obstruction(shape).map_err(|e| e.to_string())?;
    let chi =
        chi_y(shape, &compute_lambda(3).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let ml = e.clone() - chi.clone();
    if (e.clone(), chi.clone(), ml.clone())
        != (BigInt::from(-2), BigInt::from(-12), BigInt::from(10))
    {
        return Err(format!("e = {e}, chi = {chi}, ML = {ml}"));
    }
    let table = lambda_table(3).map_err(|e| e.to_string())?;
    let rec = euler_record(shape, &table).map_err(|e| e.to_string())?;
    if rec.ml_degree != ml {
        return Err(format!("record disagrees: {rec:?}"));
    }
    Ok(format!("{e} {chi} {ml}"))
}

fn cross_method() -> Outcome {
    let start = Instant::now();
    let mut out = String::new();
    for m in 3..=7usize {
        let cf = closed_form(m).map_err(|e| e.to_string())?;
        let rec = chi_y_by_recurrence(m, m + 20).map_err(|e| e.to_string())?;
        for n in m..=m + 20 {
            let direct = ml_degree(ModelShape::new(m, n)).map_err(|e| e.to_string())?;
            let sign = if (m + n - 1) % 2 == 0 { 1 } else { -1 };
            let e_mn = BigInt::from(sign * (m as i64 - 1));
            let from_rec = e_mn - &rec[n - 2];
            let from_cf = cf.evaluate(n);
            if direct != from_rec || direct != from_cf {
                return Err(format!(
                    "({m},{n}): direct {direct}, recurrence {from_rec}, closed form {from_cf}"
                ));
            }
            let _ = write!(out, "{direct} ");
        }
    }
    within(start, Duration::from_secs(2), "cross-method sweep")?;
    Ok(out)
}

fn symmetry() -> Outcome {
    let mut out = String::new();
    for m in 2..=10usize {
        for n in 2..=10usize {
            let a = ml_degree(ModelShape::new(m, n)).map_err(|e| e.to_string())?;
            let b = ml_degree(ModelShape::new(n, m)).map_err(|e| e.to_string())?;
            if a != b {
                return Err(format!("({m},{n}) = {a} but ({n},{m}) = {b}"));
            }
            let _ = write!(out, "{a} ");
        }
    }
    Ok(out)
}

fn lambda_invariants() -> Outcome {
    let table = lambda_table(12).map_err(|e| e.to_string())?;
    let mut out = String::new();
    for m in 2..=12usize {
        let row = table.get(m).ok_or(format!("no row {m}"))?;
        let factorial: BigInt = (1..=m).map(BigInt::from).product();
        let top = BigInt::from(m - 1) * factorial;
        if row.lambda(m - 1) != top {
            return Err(format!("m = {m}: top entry {} != {top}", row.lambda(m - 1)));
        }
        let plain: BigInt = row.values().iter().sum();
        let alt = if m % 2 == 0 { 2 } else { 0 };
        if plain != BigInt::from(alt) {
            return Err(format!("m = {m}: sum = {plain}"));
        }
        let weighted: BigRational = row
            .values()
            .iter()
            .enumerate()
            .map(|(k, l)| BigRational::new(l.clone(), BigInt::from(k + 2)))
            .sum();
        let want = BigInt::from((m as i64 - 1) * if m % 2 == 0 { 1 } else { -1 });
        if weighted != BigRational::from_integer(want.clone()) {
            return Err(format!(
                "m = {m}: weighted sum = {weighted}, expected {want}"
            ));
        }
        let _ = writeln!(out, "{row}");
    }
    Ok(out)
}

fn fiber_strata() -> Outcome {
    let col = |v: &[i64]| {
        v.iter()
            .map(|&x| GaussianRational::from_int(x))
            .collect::<Vec<_>>()
    };
    let cases: [(&[i64], &[i64], i64); 3] = [
        (&[1, 2, -2], &[1, 3, -3], 0),
        (&[2, 1, -2], &[2, -2, 1], -1),
        (&[4, -2, -1], &[5, 7, -11], -2),
    ];
    let mut out = String::new();
    for (a, b, want) in cases {
        let m = ExactMatrix::from_columns(&[col(a), col(b)]).map_err(|e| e.to_string())?;
        let x = validate_w2(&m).map_err(|e| e.to_string())?;
        let f = fiber_euler_char(&x);
        if f.chi != want {
            return Err(format!("{a:?}, {b:?}: chi = {}, expected {want}", f.chi));
        }
        let _ = write!(out, "{} ", f.chi);
    }
    Ok(out)
}

fn rank_one_point() -> Outcome {
    let u = DataMatrix::from_rows(&[vec![2, 8], vec![5, 10]]).map_err(|e| e.to_string())?;
    let p = rank1_mle(&u).map_err(|e| e.to_string())?;
    let want = [70.0, 180.0, 105.0, 270.0].map(|v| v / 625.0);
    for (got, want) in p.p.iter().zip(want) {
        if (got.re - want).abs() > 1e-15 || got.im.abs() > 1e-15 {
            return Err(format!("p = {:?}", p.p));
        }
    }
    let r = verify_critical_point(&p, &u, Model::Rank1, 1e-12).map_err(|e| e.to_string())?;
    if !r.pass || r.residual >= 1e-12 {
        return Err(format!("residual {}", r.residual));
    }
    Ok(format!("residual {:e}", r.residual))
}

fn numeric_count() -> Outcome {
    let start = Instant::now();
    let u = DataMatrix::from_rows(&[vec![7, 11, 5], vec![3, 13, 2], vec![8, 6, 9]])
        .map_err(|e| e.to_string())?;
    let params = OracleParams {
        starts: 5000,
        seed: 42,
        ..OracleParams::default()
    };
    let report = count_critical_points_3x3(&u, &params).map_err(|e| e.to_string())?;
    if report.count != 10 {
        return Err(format!("seed 42 found {} points", report.count));
    }
    for p in &report.accepted {
        let r =
            verify_critical_point(p, &u, Model::Rank2Of3x3, 1e-10).map_err(|e| e.to_string())?;
        if !r.pass {
            return Err(format!("accepted point has residual {}", r.residual));
        }
    }
    let mut counts = vec![report.count];
    for seed in 1..=5 {
        let params = OracleParams {
            seed,
            ..params
        };
        let c = count_critical_points_3x3(&u, &params)
            .map_err(|e| e.to_string())?
            .count;
        if c > 10 {
            return Err(format!("seed {seed} found {c} points"));
        }
        counts.push(c);
    }
    within(start, Duration::from_secs(60), "numeric count")?;
    Ok(format!("counts {counts:?}"))
}

fn exact_transcript() -> Result<Vec<String>, String> {
    let criteria: [fn() -> Outcome; 9] = [
        table_one,
        table_two,
        three_by_n,
        twenty_by_twenty,
        euler_triple,
        cross_method,
        symmetry,
        lambda_invariants,
        fiber_strata,
    ];
    criteria.iter().map(|c| c()).collect()
}

fn determinism() -> Outcome {
    let under = |threads: &str| {
        std::env::set_var(parallel::THREADS_ENV, threads);
        let out = parallel::with_env_threads(exact_transcript);
        std::env::remove_var(parallel::THREADS_ENV);
        out
    };
    let first = under("1")?;
    let second = under("1")?;
    let four = under("4")?;
    if first != second {
        return Err("two runs with one thread differ".into());
    }
    if first != four {
        return Err("one thread and four threads differ".into());
    }
    Ok(format!("{} transcripts identical", first.len()))
}

fn library_suite() -> Outcome {
    let report = run_reference_suite(&SuiteOptions {
        numeric: false,
        ..SuiteOptions::default()
    });
    if report.all_passed() {
        Ok(format!("{} criteria", report.criteria.len()))
    } else {
        let names: Vec<&str> = report.failed().map(|c| c.name).collect();
        Err(format!("failed: {}", names.join(", ")))
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        ("ml degree table", table_one),
        ("lambda table", table_two),
        ("3 x n closed form", three_by_n),
        ("20 x 20", twenty_by_twenty),
        ("3 x 3 euler triple", euler_triple),
        ("cross-method equivalence", cross_method),
        ("symmetry", symmetry),
        ("lambda invariants", lambda_invariants),
        ("fiber strata", fiber_strata),
        ("rank-one critical point", rank_one_point),
        ("numeric critical count", numeric_count),
        ("determinism", determinism),
        ("library verify suite", library_suite),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(_) => println!("PASS {:>2} {name} ({ms} ms)", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({ms} ms): {why}", k + 1);
            }
        }
    }
    println!("{} of {} passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
