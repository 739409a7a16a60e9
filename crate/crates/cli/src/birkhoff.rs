use std::path::PathBuf;

use clap::{Args, Subcommand};
use qdesign::birkhoff::{
    circulant_unistochastic_4, decide_unistochastic_4, equi_entangled_basis, is_bracelet, ray_unitary,
    schmidt_coefficients, triangle_unistochastic, BistochasticMatrix, RayResult, DEFAULT_GRID, DEFAULT_TOL,
};
use qdesign::io::RealMatrixJson;
use serde_json::{json, Value};

use crate::util::{emit, load_matrix, load_real_matrix, matrix_value, parse_csv, CliError, CliResult};

#[derive(Debug, Args)]
pub struct BistochasticArgs {
    /// Real matrix JSON: nested rows or `{"rows", "cols", "data"}`.
    pub matrix: PathBuf,
}

#[derive(Debug, Args)]
pub struct Decide4Args {
    pub matrix: PathBuf,
    /// Grid points per branch over the free phase.
    #[arg(long, default_value_t = DEFAULT_GRID)]
    pub grid: usize,
    /// Acceptance threshold on the witness residual.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct CirculantArgs {
    /// First row `a,b,c,d` of the circulant matrix.
    #[arg(long, value_parser = parse_weights)]
    pub weights: Weights,
}

#[derive(Debug, Clone, Copy)]
pub struct Weights([f64; 4]);

fn parse_weights(s: &str) -> Result<Weights, String> {
    let v: Vec<f64> = parse_csv(s)?;
    <[f64; 4]>::try_from(v.as_slice()).map(Weights).map_err(|_| format!("expected 4 weights, got {}", v.len()))
}

#[derive(Debug, Args)]
pub struct RayArgs {
    #[arg(long)]
    pub n: usize,
    /// Position on the ray; negative values lie on the counter-ray, down to −1/(n−1).
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    /// Permutation as a comma-separated image list; identity by default.
    #[arg(long)]
    pub perm: Option<String>,
}

#[derive(Debug, Args)]
pub struct TriangleArgs {
    #[arg(long)]
    pub p: String,
    #[arg(long)]
    pub q: String,
    #[arg(long)]
    pub w1: f64,
    #[arg(long)]
    pub w2: f64,
}

#[derive(Debug, Args)]
pub struct BasisArgs {
    /// Unitary matrix JSON of order n; yields n² states in C^n ⊗ C^n.
    pub matrix: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum BirkhoffCmd {
    /// Check the bracelet conditions.
    Bracelet(BistochasticArgs),
    /// Decide unistochasticity of a 4×4 bistochastic matrix.
    Decide4(Decide4Args),
    /// Closed-form decision for a 4×4 circulant bistochastic matrix.
    Circulant4(CirculantArgs),
    /// Unitary on the ray through a permutation matrix and the flat matrix.
    Ray(RayArgs),
    /// Unistochastic point in the triangle spanned by two permutations and the flat matrix.
    Triangle(TriangleArgs),
    /// Equi-entangled basis from a unitary and the Schmidt coefficients of its vectors.
    Basis(BasisArgs),
}

fn perm(s: &str) -> CliResult<Vec<usize>> {
    parse_csv(s).map_err(|e| CliError::input(format!("permutation: {e}")))
}

fn ray_payload(r: &RayResult) -> Value {
    json!({
        "b": RealMatrixJson::from_matrix(r.b.matrix()),
        "u": matrix_value(&r.u),
        "residual": r.b.residual(&r.u),
    })
}

pub fn run(cmd: BirkhoffCmd) -> CliResult {
    match cmd {
        BirkhoffCmd::Bracelet(a) => {
            let b = BistochasticMatrix::new(load_real_matrix(&a.matrix)?)?;
            match is_bracelet(&b) {
                Ok(()) => emit(&json!({ "bracelet": true })),
                Err(v) => emit(&json!({ "bracelet": false, "violation": v })),
            }
        }
        BirkhoffCmd::Decide4(a) => {
            if a.grid < 2 || !(a.tol > 0.0) {
                return Err(CliError::input("--grid must be at least 2 and --tol positive"));
            }
            let m = load_real_matrix(&a.matrix)?;
            if m.shape() != (4, 4) {
                return Err(CliError::input(format!("decide4 needs a 4x4 matrix, got {}x{}", m.nrows(), m.ncols())));
            }
            let b = BistochasticMatrix::new(m)?;
            emit(&serde_json::to_value(decide_unistochastic_4(&b, a.grid, a.tol).to_json()).expect("certificate serializes"))
        }
        BirkhoffCmd::Circulant4(a) => {
            let [w0, w1, w2, w3] = a.weights.0;
            let cert = circulant_unistochastic_4(w0, w1, w2, w3)?;
            emit(&serde_json::to_value(cert.to_json()).expect("certificate serializes"))
        }
        BirkhoffCmd::Ray(a) => {
            let p = match &a.perm {
                Some(s) => perm(s)?,
                None => (0..a.n).collect(),
            };
            emit(&ray_payload(&ray_unitary(a.n, a.alpha, &p)?))
        }
        BirkhoffCmd::Triangle(a) => {
            let r = triangle_unistochastic(&perm(&a.p)?, &perm(&a.q)?, a.w1, a.w2)?;
            emit(&ray_payload(&r))
        }
        BirkhoffCmd::Basis(a) => {
            let u = load_matrix(&a.matrix)?;
            let n = u.nrows();
            let basis = equi_entangled_basis(&u)?;
            let vectors: Vec<Vec<[f64; 2]>> = basis.iter().map(|v| v.iter().map(|z| [z.re, z.im]).collect()).collect();
            let schmidt = basis.iter().map(|v| schmidt_coefficients(v, n)).collect::<qdesign::Result<Vec<_>>>()?;
            emit(&json!({ "n": n, "vectors": vectors, "schmidt": schmidt }))
        }
    }
}
