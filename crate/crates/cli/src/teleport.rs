use anyhow::{bail, Result};
use clap::{Args, ValueEnum};
use hes_core::protocols::{
    correction_for, parity_correction_for, run_trials, teleport_parity, teleport_spin,
};
use hes_core::{Complex64, HesLabel, ParityBellLabel, SpinBellLabel};
use serde::Serialize;

use crate::output::{complex, csv, json, min_mean, PerOutcome};
use crate::statespec::{parse_complex, parse_label};
use crate::{Format, OutputArgs, TruncationArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    /// Qubit state onto a mode through a hybrid channel.
    Spin,
    /// Parity qubit on a mode onto the channel's qubit.
    Parity,
}

#[derive(Args, Debug)]
pub struct TeleportArgs {
    #[arg(value_enum, default_value_t = Kind::Spin)]
    kind: Kind,
    /// Amplitude on |↑⟩ (spin) or |z″⟩_e (parity), e.g. 0.6, 0.3+0.4i.
    #[arg(long, default_value = "0.6", allow_hyphen_values = true, value_parser = parse_complex)]
    alpha: Complex64,
    /// Amplitude on |↓⟩ (spin) or |z″⟩_o (parity).
    #[arg(long, default_value = "0.8i", allow_hyphen_values = true, value_parser = parse_complex)]
    beta: Complex64,
    /// Rescale (alpha, beta) to unit norm instead of rejecting them.
    #[arg(long)]
    normalize: bool,
    /// Channel amplitude.
    #[arg(long, default_value_t = 1.0)]
    z: f64,
    /// Amplitude of the parity qubit being teleported (parity only); defaults to --z.
    #[arg(long)]
    zpp: Option<f64>,
    #[arg(long, default_value = "phi+", value_parser = parse_label::<HesLabel>)]
    channel: HesLabel,
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
    correction: &'static str,
    probability: f64,
    fidelity: f64,
}

#[derive(Debug, Serialize)]
struct Report {
    kind: &'static str,
    channel: &'static str,
    alpha: [f64; 2],
    beta: [f64; 2],
    z: f64,
    z_input: Option<f64>,
    dim: usize,
    trials: usize,
    seed: u64,
    counts: PerOutcome<usize>,
    frequencies: PerOutcome<f64>,
    corrections: PerOutcome<&'static str>,
    min_fidelity: f64,
    mean_fidelity: f64,
}

fn check_amplitude(name: &str, z: f64) -> Result<()> {
    if !z.is_finite() || z < 0.0 {
        bail!("--{name} must be finite and nonnegative, got {z}");
    }
    Ok(())
}

pub fn run(args: &TeleportArgs) -> Result<()> {
    check_amplitude("z", args.z)?;
    if args.trials == 0 {
        bail!("--trials must be at least 1");
    }
    let (mut alpha, mut beta) = (args.alpha, args.beta);
    let norm = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
    if args.normalize {
        if norm == 0.0 {
            bail!("alpha and beta are both zero");
        }
        alpha /= norm;
        beta /= norm;
    } else if (norm * norm - 1.0).abs() > 1e-12 {
        bail!(
            "|alpha|^2 + |beta|^2 = {} (pass --normalize to rescale)",
            norm * norm
        );
    }

    let channel = args.channel;
    let (z, kind) = (args.z, args.kind);
    let zpp = args.zpp.unwrap_or(z);
    let (dim, z_input, corrections) = match kind {
        Kind::Spin => (
            args.trunc.dim_for(&[z])?,
            None,
            PerOutcome::from_fn(|k| correction_for(SpinBellLabel::ALL[k], channel).name()),
        ),
        Kind::Parity => {
            check_amplitude("zpp", zpp)?;
            (
                args.trunc.dim_for(&[z, zpp])?,
                Some(zpp),
                PerOutcome::from_fn(|k| {
                    parity_correction_for(ParityBellLabel::ALL[k], channel).name()
                }),
            )
        }
    };

    let trials = run_trials(args.seed, args.trials, |rng| {
        let r = match kind {
            Kind::Spin => teleport_spin(alpha, beta, channel, z, dim, rng)?,
            Kind::Parity => teleport_parity(alpha, beta, zpp, channel, z, dim, rng)?,
        };
        Ok((r.outcome, r.correction, r.outcome_probability, r.fidelity))
    })?;
    let rows: Vec<Trial> = trials
        .iter()
        .enumerate()
        .map(|(i, (outcome, correction, p, f))| Trial {
            trial: i,
            outcome: outcome.key(),
            correction: correction.name(),
            probability: *p,
            fidelity: *f,
        })
        .collect();

    let body = match args.output.format_or(Format::Json) {
        Format::Csv => csv(
            &["trial", "outcome", "correction", "probability", "fidelity"],
            &rows,
        )?,
        Format::Json => {
            let mut counts = [0usize; 4];
            for (outcome, ..) in &trials {
                counts[outcome.index()] += 1;
            }
            let n = args.trials as f64;
            let (min_fidelity, mean_fidelity) = min_mean(rows.iter().map(|r| r.fidelity));
            json(&Report {
                kind: match kind {
                    Kind::Spin => "spin",
                    Kind::Parity => "parity",
                },
                channel: channel.key(),
                alpha: complex(alpha),
                beta: complex(beta),
                z,
                z_input,
                dim,
                trials: args.trials,
                seed: args.seed,
                counts: PerOutcome::from_fn(|k| counts[k]),
                frequencies: PerOutcome::from_fn(|k| counts[k] as f64 / n),
                corrections,
                min_fidelity,
                mean_fidelity,
            })?
        }
    };
    args.output.emit(&body)
}
