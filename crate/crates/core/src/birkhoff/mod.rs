//! Unistochasticity toolkit: bracelet conditions, a decision procedure for
//! order 4, the constructive solver for circulant matrices of order 4, robust
//! Hadamard matrices, unistochastic rays and triangles, and equi-entangled bases.

mod circulant;
mod decide4;
mod hadamard;
mod rays;

pub use circulant::{circulant_matrix, circulant_unistochastic_4};
pub use decide4::{decide_unistochastic_4, DEFAULT_GRID, DEFAULT_TOL};
pub use hadamard::{is_robust_hadamard, robust_hadamard, robust_hadamard_dims};
pub use rays::{
    equi_entangled_basis, is_complementary, is_strongly_complementary, ray_unitary, schmidt_coefficients,
    triangle_unistochastic, RayResult,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::MatrixJson;
use crate::linalg::{squared_moduli, ComplexMatrix, RealMatrix};

/// Row/column sums must equal 1 within this tolerance.
pub const SUM_TOL: f64 = 1e-12;

/// Square nonnegative matrix with unit row and column sums.
#[derive(Debug, Clone, PartialEq)]
pub struct BistochasticMatrix(RealMatrix);

impl BistochasticMatrix {
    /// Validates sums within [`SUM_TOL`]; entries down to `−1e-15` are clipped to 0.
    pub fn new(m: RealMatrix) -> Result<Self> {
        Self::with_tolerance(m, SUM_TOL)
    }

    pub fn with_tolerance(mut m: RealMatrix, tol: f64) -> Result<Self> {
        if !m.is_square() || m.nrows() == 0 {
            return Err(Error::Dimension(format!("bistochastic matrix must be square, got {:?}", m.shape())));
        }
        if m.iter().any(|x| !x.is_finite()) {
            return Err(Error::Invalid("non-finite entry".into()));
        }
        if let Some(x) = m.iter().find(|&&x| x < -1e-15) {
            return Err(Error::Invalid(format!("negative entry {x}")));
        }
        m.apply(|x| *x = x.max(0.0));
        let n = m.nrows();
        for k in 0..n {
            let (r, c) = (m.row(k).sum(), m.column(k).sum());
            if (r - 1.0).abs() > tol || (c - 1.0).abs() > tol {
                return Err(Error::Invalid(format!("row/column {k} sums to {r}/{c}, not 1")));
            }
        }
        Ok(BistochasticMatrix(m))
    }

    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("rows must form a square array".into()));
        }
        Self::new(RealMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &RealMatrix {
        &self.0
    }

    pub fn into_inner(self) -> RealMatrix {
        self.0
    }

    /// `max_ij |B_ij − |U_ij|²|`.
    pub fn residual(&self, u: &ComplexMatrix) -> f64 {
        if u.shape() != self.0.shape() {
            return f64::INFINITY;
        }
        (squared_moduli(u) - &self.0).amax()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Unistochastic,
    NotBracelet,
    /// The search found no witness; this is evidence, not a proof.
    RejectedBySearch,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnistochasticCertificate {
    pub verdict: Verdict,
    pub witness: Option<ComplexMatrix>,
    /// `max |B_ij − |U_ij|²|` of the witness, or of the closest candidate for a rejection.
    pub residual: Option<f64>,
    /// Number of objective evaluations spent in the phase scan.
    pub evaluations: usize,
    pub note: String,
}

impl UnistochasticCertificate {
    pub(crate) fn not_bracelet(v: &BraceletViolation) -> Self {
        UnistochasticCertificate {
            verdict: Verdict::NotBracelet,
            witness: None,
            residual: None,
            evaluations: 0,
            note: format!("{:?} pair ({}, {}) violates the bracelet condition", v.kind, v.pair.0, v.pair.1),
        }
    }

    pub(crate) fn certified(b: &BistochasticMatrix, u: ComplexMatrix, evaluations: usize, note: String) -> Self {
        UnistochasticCertificate { verdict: Verdict::Unistochastic, residual: Some(b.residual(&u)), witness: Some(u), evaluations, note }
    }

    pub fn to_json(&self) -> CertificateJson {
        CertificateJson {
            verdict: self.verdict,
            witness: self.witness.as_ref().map(MatrixJson::from_matrix),
            residual: self.residual,
            note: self.note.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<MatrixJson>,
    pub residual: Option<f64>,
    pub note: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LineKind {
    Row,
    Column,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BraceletViolation {
    pub kind: LineKind,
    pub pair: (usize, usize),
}

/// Checks `2·max_j √(B_lj B_kj) ≤ Σ_j √(B_lj B_kj)` for every pair of rows, then
/// every pair of columns, returning the first violation.
pub fn is_bracelet(b: &BistochasticMatrix) -> std::result::Result<(), BraceletViolation> {
    let q = b.0.map(f64::sqrt);
    let n = b.n();
    let fails = |prod: &dyn Fn(usize) -> f64| {
        let (mut sum, mut max) = (0.0f64, 0.0f64);
        for j in 0..n {
            let p = prod(j);
            sum += p;
            max = max.max(p);
        }
        2.0 * max > sum + 1e-12
    };
    for k in 0..n {
        for l in k + 1..n {
            if fails(&|j| q[(k, j)] * q[(l, j)]) {
                return Err(BraceletViolation { kind: LineKind::Row, pair: (k, l) });
            }
        }
    }
    for k in 0..n {
        for l in k + 1..n {
            if fails(&|j| q[(j, k)] * q[(j, l)]) {
                return Err(BraceletViolation { kind: LineKind::Column, pair: (k, l) });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{permutation_matrix, van_der_waerden};

    #[test]
    fn off_diagonal_three_fails() {
        let b = BistochasticMatrix::from_rows(&[&[0.0, 0.5, 0.5], &[0.5, 0.0, 0.5], &[0.5, 0.5, 0.0]]).unwrap();
        let v = is_bracelet(&b).unwrap_err();
        assert_eq!(v, BraceletViolation { kind: LineKind::Row, pair: (0, 1) });
    }

    #[test]
    fn permutations_and_flat_pass() {
        let p = BistochasticMatrix::new(permutation_matrix(&[2, 0, 3, 1])).unwrap();
        assert!(is_bracelet(&p).is_ok());
        for n in 1..=12 {
            assert!(is_bracelet(&BistochasticMatrix::new(van_der_waerden(n)).unwrap()).is_ok());
        }
    }

    #[test]
    fn validation() {
        assert!(BistochasticMatrix::from_rows(&[&[0.6, 0.4], &[0.5, 0.5]]).is_err());
        assert!(BistochasticMatrix::from_rows(&[&[1.1, -0.1], &[-0.1, 1.1]]).is_err());
        let b = BistochasticMatrix::from_rows(&[&[1.0 + 1e-16, -1e-16], &[-1e-16, 1.0 + 1e-16]]).unwrap();
        assert_eq!(b.matrix()[(0, 1)], 0.0);
    }
}
