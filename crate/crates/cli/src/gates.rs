use std::path::PathBuf;

use clap::{Args, Subcommand};
use qdesign::gates;
use serde_json::json;

use crate::util::{check_side, emit, load_matrix, CliResult};

#[derive(Debug, Args)]
pub struct GateArgs {
    /// Matrix JSON of side n².
    pub matrix: PathBuf,
    /// Local dimension of each of the two subsystems.
    #[arg(long)]
    pub n: usize,
}

#[derive(Debug, Args)]
pub struct DerivArgs {
    #[command(flatten)]
    pub gate: GateArgs,
    /// Report summary statistics instead of the full vector or matrix.
    #[arg(long)]
    pub spectrum: bool,
}

#[derive(Debug, Subcommand)]
pub enum GatesCmd {
    /// Entangling power e_p.
    Ep(GateArgs),
    /// Gate typicality g_t.
    Gt(GateArgs),
    /// Average singular entropy s_e of X, X^R and X^Γ (any nonzero matrix).
    Se(GateArgs),
    /// Gradient of e_p in the Hermitian basis.
    Grad(DerivArgs),
    /// Hessian of e_p in the Hermitian basis.
    Hessian(DerivArgs),
}

/// Relative zero band used when bucketing Hessian eigenvalues.
const ZERO_BAND: f64 = 1e-6;

pub fn run(cmd: GatesCmd) -> CliResult {
    match cmd {
        GatesCmd::Ep(a) => {
            let u = load_matrix(&a.matrix)?;
            check_side(&u, a.n)?;
            emit(&json!({ "e_p": gates::entangling_power(&u, a.n)? }))
        }
        GatesCmd::Gt(a) => {
            let u = load_matrix(&a.matrix)?;
            check_side(&u, a.n)?;
            emit(&json!({ "g_t": gates::gate_typicality(&u, a.n)? }))
        }
        GatesCmd::Se(a) => {
            let x = load_matrix(&a.matrix)?;
            check_side(&x, a.n)?;
            emit(&json!({ "s_e": gates::avg_singular_entropy(&x, a.n)? }))
        }
        GatesCmd::Grad(a) => {
            let u = load_matrix(&a.gate.matrix)?;
            check_side(&u, a.gate.n)?;
            let g = gates::ep_gradient(&u, a.gate.n)?;
            let mut out = json!({ "dimension": g.len(), "max_norm": g.amax(), "l2_norm": g.norm() });
            if !a.spectrum {
                out["gradient"] = json!(g.iter().collect::<Vec<_>>());
            }
            emit(&out)
        }
        GatesCmd::Hessian(a) => {
            let u = load_matrix(&a.gate.matrix)?;
            check_side(&u, a.gate.n)?;
            let h = gates::ep_hessian(&u, a.gate.n)?;
            if a.spectrum {
                let eigs = gates::symmetric_eigenvalues(&h);
                emit(&json!({
                    "dimension": h.nrows(),
                    "stats": gates::spectrum_stats(&eigs, ZERO_BAND),
                    "pairing_fraction": gates::pairing_fraction(&eigs, ZERO_BAND),
                    "eigenvalues": eigs,
                }))
            } else {
                let rows: Vec<Vec<f64>> = (0..h.nrows()).map(|r| h.row(r).iter().copied().collect()).collect();
                emit(&json!({ "dimension": h.nrows(), "hessian": rows }))
            }
        }
    }
}
