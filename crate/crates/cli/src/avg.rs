use clap::{Args, Subcommand};
use qdesign::averages::{avg_ep_multipartite, avg_ep_tripartite, ep_grand_mean_mc, PartyDims};
use qdesign::linalg::Group;
use serde_json::json;

use crate::util::{emit, CliResult};

#[derive(Debug, Args)]
pub struct FormulaArgs {
    /// Local dimensions, e.g. `2,2,2`.
    #[arg(long)]
    pub dims: PartyDims,
    #[arg(long)]
    pub group: Group,
}

#[derive(Debug, Args)]
pub struct McArgs {
    #[arg(long)]
    pub dims: PartyDims,
    #[arg(long)]
    pub group: Group,
    /// Haar-random gates in the grand mean.
    #[arg(long, default_value_t = 200)]
    pub gates: usize,
    /// Random product states per gate.
    #[arg(long, default_value_t = 10_000)]
    pub states: usize,
    #[arg(long)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum AvgCmd {
    /// Closed-form Haar average of the entangling power.
    Formula(FormulaArgs),
    /// Monte Carlo grand mean over random gates and product states.
    Mc(McArgs),
}

fn closed_form(dims: &PartyDims, group: Group) -> qdesign::Result<f64> {
    if dims.parties() == 3 {
        avg_ep_tripartite(dims, group)
    } else {
        Ok(avg_ep_multipartite(dims, group))
    }
}

pub fn run(cmd: AvgCmd) -> CliResult {
    match cmd {
        AvgCmd::Formula(a) => emit(&json!({
            "value": closed_form(&a.dims, a.group)?,
            "method": "formula",
            "dims": a.dims.dims(),
            "group": a.group,
        })),
        AvgCmd::Mc(a) => {
            let gm = ep_grand_mean_mc(&a.dims, a.group, a.gates, a.states, a.seed)?;
            emit(&json!({
                "value": gm.mean,
                "std_error": gm.std_error,
                "method": "mc",
                "dims": a.dims.dims(),
                "group": a.group,
                "gates": gm.gates,
                "states": gm.states,
                "formula_value": closed_form(&a.dims, a.group)?,
            }))
        }
    }
}
