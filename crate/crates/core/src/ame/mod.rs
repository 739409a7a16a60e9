//! Tools for the hunt for 2-unitary matrices of order 36: weighted quantum
//! Latin squares and their matrices, the `A`/`G`/`W` families built around the
//! classical array `P36`, multiunitarity tests, the Rather iteration,
//! Hessian-eigenvector ascent of `e_p` and the block-structured assembler.

mod ascent;
mod blocks;
mod families;
mod probe;
mod qls;
mod rather;
mod region;

pub use ascent::{steepest_ascent, AscentOptions, AscentResult};
pub use blocks::{
    block_assemble, block_entangling_power, block_search, pattern_violations, BlockSearchResult, BlockStrategy,
    BlockVectors, PatternTable,
};
pub use families::{
    family_matrix, family_qls, ols3_qls, p36_qls, seed_qls, Family, A_OPT, G_OPT, W_OPT,
};
pub use probe::{rotation_probe, RotationProbe};
pub use qls::{parse_digit_rows, qls_to_matrix, QlsEntry, WeightedQls};
pub use rather::{rather_iterate, RatherOptions, RatherResult};
pub use region::{w_region_scan, RegionPoint, RegionScan};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{gamma_unchecked, reshuffle_unchecked, unitarity_residual_fro, ComplexMatrix};

/// One row of an optimisation trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub iteration: usize,
    pub e_p: f64,
    pub g_t: f64,
    pub grad_max: Option<f64>,
    pub step: Option<f64>,
    pub accepted: bool,
}

pub type SearchTrace = Vec<TraceRecord>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MultiunitaryReport {
    pub u_ok: bool,
    pub r_ok: bool,
    pub gamma_ok: bool,
    /// Frobenius norms of `X†X − I` for `X = U, U^R, U^Γ`.
    pub residuals: [f64; 3],
}

impl MultiunitaryReport {
    pub fn all(&self) -> bool {
        self.u_ok && self.r_ok && self.gamma_ok
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().cloned().fold(0.0, f64::max)
    }
}

pub fn is_multiunitary(u: &ComplexMatrix, n: usize, tol: f64) -> Result<MultiunitaryReport> {
    if u.nrows() != n * n || u.ncols() != n * n {
        return Err(Error::Dimension(format!("expected side {}, got {}x{}", n * n, u.nrows(), u.ncols())));
    }
    Ok(multiunitary_unchecked(u, n, tol))
}

pub(crate) fn multiunitary_unchecked(u: &ComplexMatrix, n: usize, tol: f64) -> MultiunitaryReport {
    let residuals = [
        unitarity_residual_fro(u),
        unitarity_residual_fro(&reshuffle_unchecked(u, n)),
        unitarity_residual_fro(&gamma_unchecked(u, n)),
    ];
    MultiunitaryReport { u_ok: residuals[0] < tol, r_ok: residuals[1] < tol, gamma_ok: residuals[2] < tol, residuals }
}

/// Pairs of `n×n` blocks `(i,j) < (k,l)` that are identical within `tol`.
/// Repeated blocks make rows of `U^R` coincide, which is what spoils its unitarity.
pub fn repeated_blocks(u: &ComplexMatrix, n: usize, tol: f64) -> Result<Vec<((usize, usize), (usize, usize))>> {
    if u.nrows() != n * n || u.ncols() != n * n {
        return Err(Error::Dimension(format!("expected side {}, got {}x{}", n * n, u.nrows(), u.ncols())));
    }
    let block = |i: usize, j: usize| u.view((n * i, n * j), (n, n)).into_owned();
    let nonzero = |b: &ComplexMatrix| b.iter().any(|z| z.norm() > tol);
    let cells: Vec<_> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    for (p, &a) in cells.iter().enumerate() {
        let ba = block(a.0, a.1);
        if !nonzero(&ba) {
            continue;
        }
        for &b in &cells[p + 1..] {
            if (&ba - block(b.0, b.1)).iter().all(|z| z.norm() <= tol) {
                out.push((a, b));
            }
        }
    }
    Ok(out)
}

/// Constants of the analytic golden 2-unitary matrix of order 36.
pub mod golden {
    use num_complex::Complex64;

    /// `a = (5+√5)^(−1/2)`.
    pub fn a() -> f64 {
        (5.0 + 5f64.sqrt()).powf(-0.5)
    }

    /// `b = ((5+√5)/20)^(1/2)`.
    pub fn b() -> f64 {
        ((5.0 + 5f64.sqrt()) / 20.0).sqrt()
    }

    pub const C: f64 = std::f64::consts::FRAC_1_SQRT_2;

    /// `ω = e^{iπ/10}`, a 20th root of unity.
    pub fn omega() -> Complex64 {
        Complex64::from_polar(1.0, std::f64::consts::PI / 10.0)
    }

    pub fn golden_ratio() -> f64 {
        (1.0 + 5f64.sqrt()) / 2.0
    }
}
