use anyhow::Result;
use clap::Args;
use hes_core::entanglement::{entanglement_entropy, schmidt_coefficients, Bipartition};
use serde::Serialize;

use crate::output::{csv, json};
use crate::statespec::StateSpec;
use crate::{Format, OutputArgs, TruncationArgs};

/// Schmidt coefficients below this are reported as absent.
const SCHMIDT_FLOOR: f64 = 1e-12;

#[derive(Args, Debug)]
pub struct EntropyArgs {
    /// hes:<label>:z=..., paritybell:<label>:z=...,z'=..., spinbell:<label>, product:z=...
    statespec: String,
    #[command(flatten)]
    trunc: TruncationArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Serialize)]
struct Report {
    state: String,
    space: String,
    dim: Option<usize>,
    entropy: f64,
    schmidt_rank: usize,
    schmidt_coefficients: Vec<f64>,
}

pub fn run(args: &EntropyArgs) -> Result<()> {
    let spec: StateSpec = args.statespec.parse()?;
    let zs = spec.amplitudes();
    let dim = if zs.is_empty() {
        2
    } else {
        args.trunc.dim_for(&zs)?
    };
    let state = spec.build(dim)?;
    let cut = Bipartition::first(state.space().len())?;
    let spectrum = schmidt_coefficients(&state, &cut)?;
    let coefficients: Vec<f64> = spectrum
        .coefficients
        .iter()
        .copied()
        .filter(|&c| c > SCHMIDT_FLOOR)
        .collect();
    let report = Report {
        state: spec.canonical(),
        space: state.space().to_string(),
        dim: (!zs.is_empty()).then_some(dim),
        entropy: entanglement_entropy(&state, &cut)?,
        schmidt_rank: coefficients.len(),
        schmidt_coefficients: coefficients,
    };

    let body = match args.output.format_or(Format::Json) {
        Format::Json => json(&report)?,
        Format::Csv => {
            let joined: Vec<String> = report
                .schmidt_coefficients
                .iter()
                .map(|c| c.to_string())
                .collect();
            let row = (
                &report.state,
                report.entropy,
                report.schmidt_rank,
                joined.join(";"),
            );
            csv(
                &["state", "entropy", "schmidt_rank", "schmidt_coefficients"],
                &[row],
            )?
        }
    };
    args.output.emit(&body)
}
