use std::path::PathBuf;

use clap::{Args, Subcommand};
use qdesign::ame::{
    block_assemble, block_search, family_matrix, is_multiunitary, rather_iterate, rotation_probe, steepest_ascent,
    w_region_scan, AscentOptions, BlockStrategy, Family, RatherOptions, RegionPoint,
};
use qdesign::gates::{entangling_power, evaluate, gate_typicality};
use qdesign::linalg::{expi_hermitian, haar_unitary, random_hermitian, rng_from_seed};
use serde_json::{json, Map, Value};

use crate::util::{check_side, emit, load_matrix, parse_angles, place_matrix, CliError, CliResult};

/// Tolerance on the Frobenius unitarity residuals of U, U^R and U^Γ.
const MULTIUNITARY_TOL: f64 = 1e-10;

#[derive(Debug, Args)]
pub struct FamilyArgs {
    /// A, G or W.
    #[arg(long)]
    pub kind: Family,
    /// Comma-separated angles (`pi/4`, `3pi/8`, `0.1`, ...) or `opt` for the family optimum.
    #[arg(long)]
    pub params: String,
    /// Write the matrix JSON here instead of embedding it in the output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RatherArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub seed: u64,
    /// Start from `M·exp(iεH)` with a random Hermitian `H` instead of a Haar-random unitary.
    #[arg(long)]
    pub seed_matrix: Option<PathBuf>,
    /// Size of the perturbation around `--seed-matrix`.
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    #[arg(long)]
    pub steps: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AscendArgs {
    pub matrix: PathBuf,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub iters: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BlocksArgs {
    /// hadamard, random or refine.
    #[arg(long)]
    pub strategy: BlockStrategy,
    #[arg(long)]
    pub budget: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RegionArgs {
    #[arg(long)]
    pub samples: usize,
    #[arg(long)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ProbeArgs {
    pub matrix: PathBuf,
    #[arg(long)]
    pub n: usize,
    /// Nonzero rotation angles tried per pair of basis vectors.
    #[arg(long, default_value_t = 36)]
    pub angles: usize,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    pub matrix: PathBuf,
    #[arg(long)]
    pub n: usize,
}

#[derive(Debug, Subcommand)]
pub enum AmeCmd {
    /// Matrix of the A, G or W family at the given angles.
    Family(FamilyArgs),
    /// Iterate U ← polar((U^R)^Γ) towards a 2-unitary matrix.
    Rather(RatherArgs),
    /// Hessian-eigenvector ascent of e_p.
    Ascend(AscendArgs),
    /// Search the block ansatz for large e_p.
    Blocks(BlocksArgs),
    /// (e_p, g_t) coordinates of the W family as CSV.
    Region(RegionArgs),
    /// Sweep all two-level rotations U·R_α looking for an increase of e_p.
    Probe(ProbeArgs),
    /// Unitarity residuals of U, U^R and U^Γ.
    Check(CheckArgs),
}

pub fn run(cmd: AmeCmd) -> CliResult {
    match cmd {
        AmeCmd::Family(a) => {
            let params = if a.params.trim().eq_ignore_ascii_case("opt") {
                a.kind.optimum().to_vec()
            } else {
                parse_angles(&a.params).map_err(CliError::input)?
            };
            let u = family_matrix(a.kind, &params)?;
            let v = evaluate(&u, 6)?;
            let mut out = Map::new();
            out.insert("kind".into(), json!(a.kind));
            out.insert("params".into(), json!(params));
            out.insert("e_p".into(), json!(v.e_p));
            out.insert("g_t".into(), json!(v.g_t));
            place_matrix(&mut out, &u, a.out.as_ref())?;
            emit(&Value::Object(out))
        }
        AmeCmd::Rather(a) => {
            if a.n < 2 {
                return Err(CliError::input("--n must be at least 2"));
            }
            let side = a.n * a.n;
            let mut rng = rng_from_seed(a.seed);
            let u0 = match &a.seed_matrix {
                Some(path) => {
                    let m = load_matrix(path)?;
                    check_side(&m, a.n)?;
                    m * expi_hermitian(&random_hermitian(side, &mut rng), a.epsilon)
                }
                None => haar_unitary(side, &mut rng),
            };
            let opts = RatherOptions { max_steps: a.steps, tol: MULTIUNITARY_TOL, ..Default::default() };
            let r = rather_iterate(&u0, a.n, &opts)?;
            let mut out = Map::new();
            out.insert("converged".into(), json!(r.converged));
            out.insert("stalled".into(), json!(r.stalled));
            out.insert("steps".into(), json!(r.steps));
            out.insert("e_p".into(), json!(entangling_power(&r.matrix, a.n)?));
            out.insert("g_t".into(), json!(gate_typicality(&r.matrix, a.n)?));
            out.insert("residuals".into(), json!(r.report.residuals));
            place_matrix(&mut out, &r.matrix, a.out.as_ref())?;
            emit(&Value::Object(out))
        }
        AmeCmd::Ascend(a) => {
            let u = load_matrix(&a.matrix)?;
            check_side(&u, a.n)?;
            let r = steepest_ascent(&u, a.n, &AscentOptions { iters: a.iters, ..Default::default() })?;
            let mut out = Map::new();
            out.insert("e_p_initial".into(), json!(r.trace[0].e_p));
            out.insert("e_p".into(), json!(r.e_p));
            out.insert("accepted_steps".into(), json!(r.accepted_steps));
            out.insert("last_top_eigenvalue".into(), json!(r.last_top_eigenvalue));
            out.insert("trace".into(), json!(r.trace));
            place_matrix(&mut out, &r.matrix, a.out.as_ref())?;
            emit(&Value::Object(out))
        }
        AmeCmd::Blocks(a) => {
            let r = block_search(a.strategy, a.seed, a.budget)?;
            let u = block_assemble(&r.vectors);
            let mut out = Map::new();
            out.insert("strategy".into(), json!(a.strategy));
            out.insert("e_p".into(), json!(r.e_p));
            out.insert("s_e".into(), json!(r.s_e));
            out.insert("evaluations".into(), json!(r.evaluations));
            out.insert("multiunitary".into(), json!(is_multiunitary(&u, 6, MULTIUNITARY_TOL)?));
            place_matrix(&mut out, &u, a.out.as_ref())?;
            emit(&Value::Object(out))
        }
        AmeCmd::Region(a) => {
            let scan = w_region_scan(a.samples, a.seed)?;
            write_region_csv(&scan.scatter, &scan.diagonal_curve, &scan.ellipse_curve)
        }
        AmeCmd::Probe(a) => {
            let u = load_matrix(&a.matrix)?;
            check_side(&u, a.n)?;
            let p = rotation_probe(&u, a.n, a.angles)?;
            let mut out = serde_json::to_value(p).expect("probe serializes");
            out["improving"] = json!(p.best_gain > 0.0);
            emit(&out)
        }
        AmeCmd::Check(a) => {
            let u = load_matrix(&a.matrix)?;
            check_side(&u, a.n)?;
            let r = is_multiunitary(&u, a.n, MULTIUNITARY_TOL)?;
            let mut out = serde_json::to_value(r).expect("report serializes");
            out["multiunitary"] = json!(r.all());
            emit(&out)
        }
    }
}

fn write_region_csv(scatter: &[RegionPoint], diagonal: &[RegionPoint], ellipse: &[RegionPoint]) -> CliResult {
    let mut w = csv::Writer::from_writer(std::io::stdout().lock());
    let io = |e: csv::Error| match e.kind() {
        csv::ErrorKind::Io(io) if io.kind() == std::io::ErrorKind::BrokenPipe => None,
        _ => Some(CliError::input(format!("writing CSV: {e}"))),
    };
    let mut body = || -> Result<(), csv::Error> {
        w.write_record(["series", "e_p", "g_t", "x", "y", "z", "u", "w"])?;
        for (name, points) in [("scatter", scatter), ("diagonal", diagonal), ("ellipse", ellipse)] {
            for p in points {
                let mut rec = vec![name.to_string(), p.e_p.to_string(), p.g_t.to_string()];
                rec.extend(p.params.iter().map(f64::to_string));
                w.write_record(&rec)?;
            }
        }
        w.flush().map_err(csv::Error::from)
    };
    match body() {
        Ok(()) => Ok(()),
        Err(e) => io(e).map_or(Ok(()), Err),
    }
}
