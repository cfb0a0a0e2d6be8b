//! JSON file formats for matrices and count data.
//!
//! Exact matrices:
//!
//! ```json
//! {"rows": 3, "cols": 2, "entries": [["1", "1"], ["2", "3"], ["-2", "-3"]]}
//! ```
//!
//! Each entry is a scalar literal `a`, `a/b`, `ci`, or `a/b+c/di`. Plain JSON
//! integers are accepted on input. Count data uses the same layout with
//! nonnegative integer entries.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::exact::{ExactMatrix, GaussianRational};
use crate::oracle::DataMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<Value>>,
}

fn check_layout(rows: usize, cols: usize, entries: &[Vec<Value>]) -> Result<()> {
    if entries.len() != rows || entries.iter().any(|r| r.len() != cols) {
        return Err(Error::Parse(format!(
            "declared {rows}x{cols} but entries do not match"
        )));
    }
    Ok(())
}

fn scalar(v: &Value) -> Result<GaussianRational> {
    match v {
        Value::String(s) => s.parse(),
        Value::Number(n) if n.is_i64() => Ok(GaussianRational::from_int(n.as_i64().expect("i64"))),
        other => Err(Error::Parse(format!("unsupported matrix entry {other}"))),
    }
}

impl MatrixFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matrix file serializes")
    }

    pub fn to_exact(&self) -> Result<ExactMatrix> {
        check_layout(self.rows, self.cols, &self.entries)?;
        let rows = self
            .entries
            .iter()
            .map(|r| r.iter().map(scalar).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let mut m = ExactMatrix::from_rows(rows)?;
        if self.rows == 0 || self.cols == 0 {
            m = ExactMatrix::zeros(self.rows, self.cols);
        }
        Ok(m)
    }

    pub fn from_exact(m: &ExactMatrix) -> Self {
        MatrixFile {
            rows: m.rows(),
            cols: m.cols(),
            entries: (0..m.rows())
                .map(|i| {
                    m.row(i)
                        .iter()
                        .map(|v| Value::String(v.to_string()))
                        .collect()
                })
                .collect(),
        }
    }
}

pub fn parse_matrix_json(text: &str) -> Result<ExactMatrix> {
    MatrixFile::from_json(text)?.to_exact()
}

pub fn matrix_to_json(m: &ExactMatrix) -> String {
    MatrixFile::from_exact(m).to_json()
}

fn count(v: &Value) -> Result<u64> {
    match v {
        Value::Number(n) => n
            .as_u64()
            .ok_or_else(|| Error::Parse(format!("count {n} is not a nonnegative integer"))),
        Value::String(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("count {s:?} is not a nonnegative integer"))),
        other => Err(Error::Parse(format!("unsupported count {other}"))),
    }
}

pub fn parse_data_json(text: &str) -> Result<DataMatrix> {
    let file = MatrixFile::from_json(text)?;
    check_layout(file.rows, file.cols, &file.entries)?;
    let rows = file
        .entries
        .iter()
        .map(|r| r.iter().map(count).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    DataMatrix::from_rows(&rows)
}

pub fn data_to_json(u: &DataMatrix) -> String {
    let file = MatrixFile {
        rows: u.rows(),
        cols: u.cols(),
        entries: u
            .to_rows()
            .into_iter()
            .map(|r| r.into_iter().map(Value::from).collect())
            .collect(),
    };
    file.to_json()
}
