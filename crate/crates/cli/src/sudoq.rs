use std::path::PathBuf;

use clap::{Args, Subcommand};
use qdesign::io::MatrixJson;
use qdesign::sudoq::{
    cardinality, classify_random_4x4, construct_from_families, construct_wh_sudoq, parse_ket_grid, verify_sudoq,
    GridJson, SudoQGrid, DISTINCT_TOL, ORTHO_TOL,
};
use qdesign::ComplexMatrix;
use serde_json::{json, Map, Value};

use crate::util::{emit, from_value, read_json, CliError, CliResult};

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Grid JSON `{"n", "entries"}`, or `{"kets": "1 2 3+4 ..."}` for 4×4 ket notation.
    pub grid: PathBuf,
    /// Orthogonality tolerance on |⟨a|b⟩|.
    #[arg(long, default_value_t = ORTHO_TOL)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct CardinalityArgs {
    pub grid: PathBuf,
    /// Entries closer than this up to global phase count as equal.
    #[arg(long, default_value_t = DISTINCT_TOL)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    /// JSON `{"us": [matrix, ...], "vs": [matrix, ...]}` with n unitaries of order n each.
    pub families: PathBuf,
    /// Write the grid JSON here instead of embedding it in the output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct WhArgs {
    /// Odd prime or 2.
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum SudoqCmd {
    /// Check that every row, column and block is an orthonormal basis.
    Verify(GridArgs),
    /// Number of distinct entries up to global phase and the resulting class.
    Cardinality(CardinalityArgs),
    /// Grid built from two families of unitaries.
    Construct(ConstructArgs),
    /// Grid built from Weyl–Heisenberg mutually unbiased bases.
    Wh(WhArgs),
    /// Cardinality histogram of random 4×4 designs.
    Classify(ClassifyArgs),
}

fn load_grid(path: &std::path::Path) -> CliResult<SudoQGrid> {
    let v = read_json(path)?;
    if let Some(kets) = v.get("kets") {
        let text = kets.as_str().ok_or_else(|| CliError::input("\"kets\" must be a string"))?;
        return Ok(parse_ket_grid(text)?);
    }
    let json: GridJson = from_value(v, "grid JSON")?;
    Ok(json.to_grid()?)
}

fn load_family(v: &Value, key: &str) -> CliResult<Vec<ComplexMatrix>> {
    let list = v.get(key).ok_or_else(|| CliError::input(format!("missing \"{key}\"")))?;
    let jsons: Vec<MatrixJson> = from_value(list.clone(), key)?;
    jsons.iter().map(|m| m.to_matrix().map_err(CliError::from)).collect()
}

fn grid_payload(g: &SudoQGrid, out: Option<&PathBuf>) -> CliResult<Value> {
    let v = verify_sudoq(g, ORTHO_TOL);
    let c = cardinality(g, DISTINCT_TOL);
    let mut m = Map::new();
    m.insert("n".into(), json!(g.n()));
    m.insert("valid".into(), json!(v.ok));
    m.insert("bases_certified".into(), json!(v.bases_certified));
    m.insert("cardinality".into(), json!(c.cardinality));
    m.insert("class".into(), json!(c.class));
    let grid = serde_json::to_value(g.to_json()).expect("grid serializes");
    match out {
        Some(path) => {
            let text = serde_json::to_string(&grid).expect("grid serializes");
            std::fs::write(path, text + "\n").map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
            m.insert("out".into(), json!(path.display().to_string()));
        }
        None => {
            m.insert("grid".into(), grid);
        }
    }
    Ok(Value::Object(m))
}

pub fn run(cmd: SudoqCmd) -> CliResult {
    match cmd {
        SudoqCmd::Verify(a) => {
            let g = load_grid(&a.grid)?;
            emit(&serde_json::to_value(verify_sudoq(&g, a.tol)).expect("verification serializes"))
        }
        SudoqCmd::Cardinality(a) => {
            let g = load_grid(&a.grid)?;
            let c = cardinality(&g, a.tol);
            emit(&json!({ "cardinality": c.cardinality, "class": c.class }))
        }
        SudoqCmd::Construct(a) => {
            let v = read_json(&a.families)?;
            let g = construct_from_families(&load_family(&v, "us")?, &load_family(&v, "vs")?)?;
            emit(&grid_payload(&g, a.out.as_ref())?)
        }
        SudoqCmd::Wh(a) => emit(&grid_payload(&construct_wh_sudoq(a.n)?, a.out.as_ref())?),
        SudoqCmd::Classify(a) => {
            emit(&serde_json::to_value(classify_random_4x4(a.samples, a.seed)?).expect("histogram serializes"))
        }
    }
}
