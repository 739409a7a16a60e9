use serde::{Deserialize, Serialize};

use super::{multiunitary_unchecked, MultiunitaryReport, SearchTrace, TraceRecord};
use crate::error::{Error, Result};
use crate::gates::{entangling_power_unchecked, gate_typicality_unchecked, UNITARY_TOL};
use crate::linalg::{ensure_unitary, gamma_unchecked, polar_unitary, reshuffle_unchecked, ComplexMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatherOptions {
    pub max_steps: usize,
    /// Convergence threshold on all three Frobenius unitarity residuals.
    pub tol: f64,
    /// Residuals are evaluated every this many steps.
    pub check_every: usize,
    /// Stop as stalled when `e_p` moved less than `stall_delta` over `stall_window`
    /// steps while still below `1 − 1e-9`.
    pub stall_window: usize,
    pub stall_delta: f64,
    /// Keep iterating at least this long even when already converged.
    pub min_steps: usize,
}

impl Default for RatherOptions {
    fn default() -> Self {
        RatherOptions { max_steps: 2000, tol: 1e-10, check_every: 10, stall_window: 50, stall_delta: 1e-13, min_steps: 0 }
    }
}

#[derive(Debug, Clone)]
pub struct RatherResult {
    pub matrix: ComplexMatrix,
    pub converged: bool,
    pub stalled: bool,
    pub steps: usize,
    pub report: MultiunitaryReport,
    pub trace: SearchTrace,
}

/// Iterates `U ← polar((U^R)^Γ)` from a unitary starting point.
pub fn rather_iterate(u0: &ComplexMatrix, n: usize, opts: &RatherOptions) -> Result<RatherResult> {
    if u0.nrows() != n * n || u0.ncols() != n * n {
        return Err(Error::Dimension(format!("expected side {}, got {}x{}", n * n, u0.nrows(), u0.ncols())));
    }
    ensure_unitary(u0, UNITARY_TOL)?;
    let check_every = opts.check_every.max(1);
    let mut u = u0.clone();
    let mut trace = SearchTrace::new();
    let mut report = multiunitary_unchecked(&u, n, opts.tol);
    let mut stalled = false;
    let mut steps = 0;
    if !report.all() || opts.min_steps > 0 {
        for step in 1..=opts.max_steps {
            u = polar_unitary(&gamma_unchecked(&reshuffle_unchecked(&u, n), n))?;
            steps = step;
            let e_p = entangling_power_unchecked(&u, n);
            trace.push(TraceRecord {
                iteration: step,
                e_p,
                g_t: gate_typicality_unchecked(&u, n),
                grad_max: None,
                step: None,
                accepted: true,
            });
            if step % check_every == 0 || step == opts.max_steps {
                report = multiunitary_unchecked(&u, n, opts.tol);
                if report.all() && step >= opts.min_steps {
                    break;
                }
            }
            if step > opts.stall_window && e_p < 1.0 - 1e-9 {
                let past = trace[step - 1 - opts.stall_window].e_p;
                if (e_p - past).abs() < opts.stall_delta {
                    report = multiunitary_unchecked(&u, n, opts.tol);
                    stalled = !report.all();
                    break;
                }
            }
        }
    }
    Ok(RatherResult { converged: report.all(), matrix: u, stalled, steps, report, trace })
}
