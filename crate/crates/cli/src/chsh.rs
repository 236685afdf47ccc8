use anyhow::{bail, Result};
use clap::Args;
use hes_core::bellchsh::{
    analytic_optimum_for, chsh_value, optimize_chsh, ChshSettings, CIRELSON_BOUND,
};
use hes_core::protocols::hes_state;
use hes_core::pseudospin::{build_pseudospin, k_series};
use hes_core::HesLabel;
use serde::Serialize;

use crate::output::{csv, json};
use crate::{Format, OutputArgs, TruncationArgs};

#[derive(Args, Debug)]
pub struct ChshArgs {
    #[arg(long, default_value_t = 1.0)]
    z: f64,
    #[arg(long, default_value_t = 16)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Hybrid Bell state: phi+, phi-, psi+, psi- (or φ⁺ ...).
    #[arg(long, default_value = "phi+", value_parser = crate::statespec::parse_label::<HesLabel>)]
    state: HesLabel,
    #[command(flatten)]
    trunc: TruncationArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Serialize)]
struct Angles {
    theta: f64,
    phi: f64,
}

#[derive(Debug, Serialize)]
struct Settings {
    a: Angles,
    a_prime: Angles,
    b: Angles,
    b_prime: Angles,
}

impl From<&ChshSettings> for Settings {
    fn from(s: &ChshSettings) -> Self {
        let [a, ap, b, bp] = s.angles().map(|(theta, phi)| Angles { theta, phi });
        Settings {
            a,
            a_prime: ap,
            b,
            b_prime: bp,
        }
    }
}

#[derive(Debug, Serialize)]
struct Report {
    z: f64,
    state: &'static str,
    dim: usize,
    k: f64,
    analytic_value: f64,
    /// `⟨B⟩` of the truncated state at the closed-form settings.
    analytic_value_numeric: f64,
    optimizer_value: f64,
    gap: f64,
    cirelson_bound: f64,
    analytic_settings: Settings,
    optimizer_settings: Settings,
    iterations: usize,
    restarts_used: usize,
    seed: u64,
}

pub fn run(args: &ChshArgs) -> Result<()> {
    if !args.z.is_finite() || args.z < 0.0 {
        bail!("--z must be finite and nonnegative, got {}", args.z);
    }
    if args.restarts == 0 {
        bail!("--restarts must be at least 1");
    }
    let dim = args.trunc.dim_for(&[args.z])?;
    let ops = build_pseudospin(dim)?;
    let state = hes_state(args.state, args.z, dim)?;
    let analytic = analytic_optimum_for(args.state, args.z)?;
    let opt = optimize_chsh(&state, &ops, args.restarts, args.seed)?;
    let k = k_series(args.z, 1e-15)?;
    let report = Report {
        z: args.z,
        state: args.state.key(),
        dim,
        k,
        analytic_value: analytic.value,
        analytic_value_numeric: chsh_value(&state, &analytic.settings, &ops)?,
        optimizer_value: opt.value,
        gap: opt.value - analytic.value,
        cirelson_bound: CIRELSON_BOUND,
        analytic_settings: (&analytic.settings).into(),
        optimizer_settings: (&opt.settings).into(),
        iterations: opt.iterations,
        restarts_used: opt.restarts_used,
        seed: args.seed,
    };

    let body = match args.output.format_or(Format::Json) {
        Format::Json => json(&report)?,
        Format::Csv => {
            let o = &report.optimizer_settings;
            let row = (
                report.z,
                report.state,
                report.dim,
                report.k,
                report.analytic_value,
                report.optimizer_value,
                report.gap,
                [o.a.theta, o.a.phi, o.a_prime.theta, o.a_prime.phi],
                [o.b.theta, o.b.phi, o.b_prime.theta, o.b_prime.phi],
                report.iterations,
                report.restarts_used,
                report.seed,
            );
            csv(
                &[
                    "z",
                    "state",
                    "dim",
                    "k",
                    "analytic_value",
                    "optimizer_value",
                    "gap",
                    "theta_a",
                    "phi_a",
                    "theta_a_prime",
                    "phi_a_prime",
                    "theta_b",
                    "phi_b",
                    "theta_b_prime",
                    "phi_b_prime",
                    "iterations",
                    "restarts_used",
                    "seed",
                ],
                &[row],
            )?
        }
    };
    args.output.emit(&body)
}
