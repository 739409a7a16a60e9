//! JSON wire formats shared with the command-line tool.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, RealMatrix};

/// `{"rows": r, "cols": c, "data": [[re, im], ...]}` in row-major order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let mut data = Vec::with_capacity(m.len());
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                let z = m[(r, c)];
                data.push([z.re, z.im]);
            }
        }
        Self { rows: m.nrows(), cols: m.ncols(), data }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::Invalid("matrix must have positive dimensions".into()));
        }
        if self.data.len() != self.rows * self.cols {
            return Err(Error::Invalid(format!(
                "data has {} entries, expected {}x{}",
                self.data.len(),
                self.rows,
                self.cols
            )));
        }
        if self.data.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Invalid("matrix contains non-finite entries".into()));
        }
        Ok(ComplexMatrix::from_row_iterator(
            self.rows,
            self.cols,
            self.data.iter().map(|&[re, im]| Complex64::new(re, im)),
        ))
    }
}

/// Real matrices are accepted either as nested rows or in the flat layout.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RealMatrixJson {
    Nested(Vec<Vec<f64>>),
    Flat { rows: usize, cols: usize, data: Vec<f64> },
}

impl RealMatrixJson {
    pub fn to_matrix(&self) -> Result<RealMatrix> {
        let m = match self {
            RealMatrixJson::Nested(rows) => {
                let r = rows.len();
                let c = rows.first().map_or(0, Vec::len);
                if r == 0 || c == 0 || rows.iter().any(|row| row.len() != c) {
                    return Err(Error::Invalid("ragged or empty real matrix".into()));
                }
                RealMatrix::from_row_iterator(r, c, rows.iter().flatten().copied())
            }
            RealMatrixJson::Flat { rows, cols, data } => {
                if *rows == 0 || *cols == 0 || data.len() != rows * cols {
                    return Err(Error::Invalid("flat real matrix has inconsistent size".into()));
                }
                RealMatrix::from_row_slice(*rows, *cols, data)
            }
        };
        if m.iter().any(|x| !x.is_finite()) {
            return Err(Error::Invalid("matrix contains non-finite entries".into()));
        }
        Ok(m)
    }

    pub fn from_matrix(m: &RealMatrix) -> Self {
        RealMatrixJson::Nested((0..m.nrows()).map(|r| m.row(r).iter().copied().collect()).collect())
    }
}

pub fn matrix_to_json(m: &ComplexMatrix) -> String {
    serde_json::to_string(&MatrixJson::from_matrix(m)).expect("matrix serialization cannot fail")
}

pub fn matrix_from_json(text: &str) -> Result<ComplexMatrix> {
    let parsed: MatrixJson = serde_json::from_str(text).map_err(|e| Error::Invalid(format!("bad matrix JSON: {e}")))?;
    parsed.to_matrix()
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<ComplexMatrix> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
    matrix_from_json(&text)
}

pub fn write_matrix(path: impl AsRef<Path>, m: &ComplexMatrix) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, matrix_to_json(m)).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

pub fn real_matrix_from_json(text: &str) -> Result<RealMatrix> {
    let parsed: RealMatrixJson =
        serde_json::from_str(text).map_err(|e| Error::Invalid(format!("bad real matrix JSON: {e}")))?;
    parsed.to_matrix()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bitwise() {
        let mut rng = crate::linalg::rng_from_seed(9);
        let m = crate::linalg::ginibre(5, &mut rng);
        let back = matrix_from_json(&matrix_to_json(&m)).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn rejects_wrong_length() {
        assert!(matrix_from_json(r#"{"rows":2,"cols":2,"data":[[1,0]]}"#).is_err());
        assert!(matrix_from_json("not json").is_err());
    }

    #[test]
    fn real_layouts() {
        let a = real_matrix_from_json("[[1,2],[3,4]]").unwrap();
        let b = real_matrix_from_json(r#"{"rows":2,"cols":2,"data":[1,2,3,4]}"#).unwrap();
        assert_eq!(a, b);
        assert_eq!(a[(1, 0)], 3.0);
    }
}
