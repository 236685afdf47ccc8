use anyhow::{bail, Result};
use clap::Args;
use hes_core::protocols::{run_trials, swap_entanglement, swap_expansion};
use hes_core::SpinBellLabel;
use serde::Serialize;

use crate::output::{complex, csv, json, min_mean, PerOutcome};
use crate::{Format, OutputArgs, TruncationArgs};

#[derive(Args, Debug)]
pub struct SwapArgs {
    /// Amplitude of the first pair, qubit 1 with mode 2.
    #[arg(long, default_value_t = 1.0)]
    z: f64,
    /// Amplitude of the second pair, qubit 3 with mode 4.
    #[arg(long, default_value_t = 1.0)]
    zprime: f64,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    trunc: TruncationArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Serialize)]
struct Trial {
    trial: usize,
    outcome: &'static str,
    parity_state: &'static str,
    probability: f64,
    fidelity: f64,
    entropy: f64,
}

#[derive(Debug, Serialize)]
struct Report {
    z: f64,
    z_prime: f64,
    dim: usize,
    trials: usize,
    seed: u64,
    counts: PerOutcome<usize>,
    frequencies: PerOutcome<f64>,
    /// Parity Bell state left on modes (2, 4) for each spin outcome on (1, 3).
    pairing: PerOutcome<&'static str>,
    coefficients: PerOutcome<[f64; 2]>,
    min_fidelity: f64,
    mean_fidelity: f64,
    entropy_min: f64,
    entropy_max: f64,
}

pub fn run(args: &SwapArgs) -> Result<()> {
    for (name, z) in [("z", args.z), ("zprime", args.zprime)] {
        if !z.is_finite() || z < 0.0 {
            bail!("--{name} must be finite and nonnegative, got {z}");
        }
    }
    if args.trials == 0 {
        bail!("--trials must be at least 1");
    }
    let (z, zp) = (args.z, args.zprime);
    let dim = args.trunc.dim_for(&[z, zp])?;
    let expansion = swap_expansion(z, zp, dim)?;
    let records = run_trials(args.seed, args.trials, |rng| {
        let r = swap_entanglement(z, zp, dim, rng)?;
        Ok((r.outcome, r.probability, r.fidelity, r.entropy))
    })?;
    let rows: Vec<Trial> = records
        .iter()
        .enumerate()
        .map(|(i, (outcome, p, f, s))| Trial {
            trial: i,
            outcome: outcome.key(),
            parity_state: outcome.paired_parity().symbol(),
            probability: *p,
            fidelity: *f,
            entropy: *s,
        })
        .collect();

    let body = match args.output.format_or(Format::Json) {
        Format::Csv => csv(
            &[
                "trial",
                "outcome",
                "parity_state",
                "probability",
                "fidelity",
                "entropy",
            ],
            &rows,
        )?,
        Format::Json => {
            let mut counts = [0usize; 4];
            for (outcome, ..) in &records {
                counts[outcome.index()] += 1;
            }
            let n = args.trials as f64;
            let (min_fidelity, mean_fidelity) = min_mean(rows.iter().map(|r| r.fidelity));
            let entropy_min = rows.iter().map(|r| r.entropy).fold(f64::INFINITY, f64::min);
            let entropy_max = rows
                .iter()
                .map(|r| r.entropy)
                .fold(f64::NEG_INFINITY, f64::max);
            json(&Report {
                z,
                z_prime: zp,
                dim,
                trials: args.trials,
                seed: args.seed,
                counts: PerOutcome::from_fn(|k| counts[k]),
                frequencies: PerOutcome::from_fn(|k| counts[k] as f64 / n),
                pairing: PerOutcome::from_fn(|k| SpinBellLabel::ALL[k].paired_parity().symbol()),
                coefficients: PerOutcome::from_fn(|k| complex(expansion[k].2)),
                min_fidelity,
                mean_fidelity,
                entropy_min,
                entropy_max,
            })?
        }
    };
    args.output.emit(&body)
}
