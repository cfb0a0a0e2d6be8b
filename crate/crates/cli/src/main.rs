//! `mldeg`: ML degrees of rank-2 mixtures of independence models.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use mldeg::engine::{ml_degree, ml_table, ModelShape};
use mldeg::io::{parse_data_json, parse_matrix_json};
use mldeg::lambda::compute_lambda;
use mldeg::oracle::{
    count_critical_points_3x3, rank1_mle, rank1_mle_exact, verify_critical_point, Model,
    OracleParams,
};
use mldeg::parallel;
use mldeg::strata::{fiber_euler_char, validate_w2};
use mldeg::verify::{run_reference_suite, LambdaFault, SuiteOptions};
use mldeg::Error;

#[derive(Parser)]
#[command(
    name = "mldeg",
    version,
    about = "Exact ML degrees of rank-2 mixtures of independence models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Csv,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum OracleModel {
    #[value(name = "rank2-3x3")]
    Rank2,
    Rank1,
}

#[derive(Subcommand)]
enum Command {
    /// ML degree of X_mn.
    Compute {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "plain")]
        format: Format,
    },
    /// Grid of ML degrees for m = 2..=max-m, n = 2..=max-n.
    Table {
        #[arg(long = "max-m")]
        max_m: usize,
        #[arg(long = "max-n")]
        max_n: usize,
        #[arg(long, value_enum, default_value = "plain")]
        format: Format,
    },
    /// The sequence Lambda_m.
    Lambda {
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum, default_value = "plain")]
        format: Format,
    },
    /// Fiber Euler characteristic of an m x 2 matrix in W_2.
    ClassifyFiber {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Numerical critical points of the likelihood for count data.
    Oracle {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, value_enum, default_value = "rank2-3x3")]
        model: OracleModel,
        #[arg(long, default_value_t = 5000)]
        starts: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long = "newton-tol", default_value_t = 1e-10)]
        newton_tol: f64,
        #[arg(long = "dedup-tol", default_value_t = 1e-6)]
        dedup_tol: f64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Reproduce the published tables and identities.
    Verify {
        #[arg(long, default_value = "paper")]
        suite: String,
        /// Skip the multi-start numerical count.
        #[arg(long = "skip-numeric")]
        skip_numeric: bool,
        /// Perturb one Lambda entry before checking, as `M:INDEX:DELTA`.
        #[arg(long = "inject-lambda-fault", hide = true)]
        inject_lambda_fault: Option<String>,
        #[arg(long, value_enum, default_value = "plain")]
        format: Format,
    },
}

enum Failure {
    Usage(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(format!("{}: {e}", e.name()))
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn to_json(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json value serializes")
}

fn compute(m: usize, n: usize, format: Format) -> Result<String, Failure> {
    let d = ml_degree(ModelShape::new(m, n))?;
    Ok(match format {
        Format::Plain => format!("{d}\n"),
        Format::Csv => format!("m,n,ml_degree\n{m},{n},{d}\n"),
        Format::Json => to_json(&json!({"m": m, "n": n, "ml_degree": d.to_string()})) + "\n",
    })
}

fn table(max_m: usize, max_n: usize, format: Format) -> Result<String, Failure> {
    let t = ml_table(max_m, max_n)?;
    let mut out = String::new();
    match format {
        Format::Csv => {
            let header: Vec<String> = t.n_values().map(|n| n.to_string()).collect();
            let _ = writeln!(out, "m\\n,{}", header.join(","));
            for (m, row) in t.m_values().zip(&t.grid) {
                let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
                let _ = writeln!(out, "{m},{}", cells.join(","));
            }
        }
        Format::Plain => {
            let width = t
                .grid
                .iter()
                .flatten()
                .map(|v| v.to_string().len())
                .max()
                .unwrap_or(1)
                .max(3);
            let _ = write!(out, "{:>4}", "m\\n");
            for n in t.n_values() {
                let _ = write!(out, " {n:>width$}");
            }
            out.push('\n');
            for (m, row) in t.m_values().zip(&t.grid) {
                let _ = write!(out, "{m:>4}");
                for v in row {
                    let _ = write!(out, " {:>width$}", v.to_string());
                }
                out.push('\n');
            }
        }
        Format::Json => {
            let rows: Vec<Value> = t
                .m_values()
                .zip(&t.grid)
                .map(|(m, row)| {
                    json!({"m": m, "values": row.iter().map(ToString::to_string).collect::<Vec<_>>()})
                })
                .collect();
            out = to_json(&json!({
                "m_min": t.m_min, "m_max": t.m_max,
                "n_min": t.n_min, "n_max": t.n_max,
                "rows": rows,
            })) + "\n";
        }
    }
    Ok(out)
}

fn lambda(m: usize, format: Format) -> Result<String, Failure> {
    let row = compute_lambda(m)?;
    let values: Vec<String> = row.values().iter().map(ToString::to_string).collect();
    Ok(match format {
        Format::Plain => format!("{row}\n"),
        Format::Csv => format!("{}\n", values.join(",")),
        Format::Json => {
            to_json(&json!({
                "m": m,
                "lambda": values,
                "diagonal_ml_degree": row.diagonal_ml_degree().to_string(),
            })) + "\n"
        }
    })
}

fn classify_fiber(path: &Path, format: Format) -> Result<String, Failure> {
    let m = parse_matrix_json(&read(path)?)?;
    let x = validate_w2(&m)?;
    let f = fiber_euler_char(&x);
    let points: Vec<String> = f.points.iter().map(ToString::to_string).collect();
    Ok(match format {
        Format::Plain => format!(
            "chi={} k={} points={}\n",
            f.chi,
            f.stratum_k,
            points.join(" ")
        ),
        Format::Csv => format!(
            "chi,k,points\n{},{},{}\n",
            f.chi,
            f.stratum_k,
            points.join(";")
        ),
        Format::Json => to_json(&json!({"chi": f.chi, "k": f.stratum_k, "points": points})) + "\n",
    })
}

#[allow(clippy::too_many_arguments)]
fn oracle(
    path: &Path,
    model: OracleModel,
    starts: usize,
    seed: u64,
    newton_tol: f64,
    dedup_tol: f64,
    format: Format,
) -> Result<String, Failure> {
    let u = parse_data_json(&read(path)?)?;
    match model {
        OracleModel::Rank1 => {
            let p = rank1_mle(&u)?;
            let exact: Vec<String> = rank1_mle_exact(&u)?
                .iter()
                .map(ToString::to_string)
                .collect();
            let check = verify_critical_point(&p, &u, Model::Rank1, 1e-12)?;
            Ok(match format {
                Format::Json => {
                    to_json(&json!({
                        "rows": u.rows(), "cols": u.cols(),
                        "p": exact,
                        "boundary": p.boundary,
                        "residual": check.residual,
                    })) + "\n"
                }
                Format::Csv => format!("{}\n", exact.join(",")),
                Format::Plain => format!("{}\n", exact.join(" ")),
            })
        }
        OracleModel::Rank2 => {
            let params = OracleParams {
                starts,
                seed,
                newton_tol,
                dedup_tol,
                ..OracleParams::default()
            };
            let report = count_critical_points_3x3(&u, &params)?;
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            Ok(match format {
                Format::Json => {
                    serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
                }
                Format::Csv => {
                    let r = &report.rejected;
                    format!(
                        "count,non_converged,on_coordinate_hyperplane,rank_deficient,duplicate\n{},{},{},{},{}\n",
                        report.count, r.non_converged, r.on_coordinate_hyperplane, r.rank_deficient, r.duplicate
                    )
                }
                Format::Plain => format!("{}\n", report.count),
            })
        }
    }
}

fn parse_fault(spec: &str) -> Result<LambdaFault, Failure> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || Failure::Usage(format!("fault must be M:INDEX:DELTA, got {spec:?}"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let fault = LambdaFault {
        m: parts[0].parse().map_err(|_| bad())?,
        lambda_index: parts[1].parse().map_err(|_| bad())?,
        delta: parts[2].parse().map_err(|_| bad())?,
    };
    if fault.m < 2 || fault.lambda_index == 0 || fault.lambda_index >= fault.m {
        return Err(bad());
    }
    Ok(fault)
}

fn verify(
    suite: &str,
    skip_numeric: bool,
    fault: Option<String>,
    format: Format,
) -> Result<String, Failure> {
    if suite != "paper" {
        return Err(Failure::Usage(format!(
            "unknown suite {suite:?}; available: paper"
        )));
    }
    let opts = SuiteOptions {
        lambda_fault: fault.as_deref().map(parse_fault).transpose()?,
        numeric: !skip_numeric,
        ..SuiteOptions::default()
    };
    let report = run_reference_suite(&opts);
    let mut out = match format {
        Format::Json => serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
        Format::Csv => {
            let mut s = String::from("id,name,passed,elapsed_ms\n");
            for c in &report.criteria {
                let _ = writeln!(s, "{},{},{},{}", c.id, c.name, c.passed, c.elapsed_ms);
            }
            s
        }
        Format::Plain => {
            let mut s = String::new();
            for c in &report.criteria {
                let status = if c.passed { "PASS" } else { "FAIL" };
                let _ = write!(s, "{status} [{:>2}] {} ({} ms)", c.id, c.name, c.elapsed_ms);
                if !c.passed {
                    let _ = write!(s, ": {}", c.detail);
                }
                s.push('\n');
            }
            s
        }
    };
    if report.all_passed() {
        Ok(out)
    } else {
        let names: Vec<&str> = report.failed().map(|c| c.name).collect();
        let _ = writeln!(out, "failed: {}", names.join(", "));
        Err(Failure::Verification(out))
    }
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Compute { m, n, format } => compute(m, n, format),
        Command::Table {
            max_m,
            max_n,
            format,
        } => table(max_m, max_n, format),
        Command::Lambda { m, format } => lambda(m, format),
        Command::ClassifyFiber { matrix, format } => classify_fiber(&matrix, format),
        Command::Oracle {
            data,
            model,
            starts,
            seed,
            newton_tol,
            dedup_tol,
            format,
        } => oracle(&data, model, starts, seed, newton_tol, dedup_tol, format),
        Command::Verify {
            suite,
            skip_numeric,
            inject_lambda_fault,
            format,
        } => verify(&suite, skip_numeric, inject_lambda_fault, format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match parallel::with_env_threads(|| run(cli)) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Verification(out)) => {
            print!("{out}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
