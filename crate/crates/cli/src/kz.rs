use anyhow::{bail, Result};
use clap::Args;
use hes_core::pseudospin::{k_matrix, k_series};
use rayon::prelude::*;
use serde::Serialize;

use crate::output::{csv, json};
use crate::{Format, OutputArgs, TruncationArgs};

const SERIES_TOL: f64 = 1e-15;

#[derive(Args, Debug)]
pub struct KzArgs {
    #[arg(long, default_value_t = 0.0)]
    zmin: f64,
    #[arg(long, default_value_t = 3.0)]
    zmax: f64,
    /// Number of evenly spaced rows, endpoints included.
    #[arg(long, default_value_t = 31)]
    steps: usize,
    #[command(flatten)]
    trunc: TruncationArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Serialize)]
struct Row {
    z: f64,
    k_series: f64,
    k_matrix: f64,
    abs_diff: f64,
    violation: f64,
    dim: usize,
}

#[derive(Serialize)]
struct Report<'a> {
    rows: &'a [Row],
}

fn grid(zmin: f64, zmax: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![zmin];
    }
    let h = (zmax - zmin) / (steps - 1) as f64;
    (0..steps)
        .map(|i| {
            if i == steps - 1 {
                zmax
            } else {
                zmin + i as f64 * h
            }
        })
        .collect()
}

pub fn run(args: &KzArgs) -> Result<()> {
    if !(args.zmin.is_finite() && args.zmax.is_finite()) || args.zmin < 0.0 {
        bail!("z range must be finite and nonnegative");
    }
    if args.zmin > args.zmax {
        bail!("--zmin {} exceeds --zmax {}", args.zmin, args.zmax);
    }
    if args.steps == 0 {
        bail!("--steps must be at least 1");
    }
    if args.steps == 1 && args.zmin != args.zmax {
        bail!("--steps 1 needs --zmin equal to --zmax");
    }
    let rows = grid(args.zmin, args.zmax, args.steps)
        .into_par_iter()
        .map(|z| {
            let dim = args.trunc.dim_for(&[z])?;
            let ks = k_series(z, SERIES_TOL)?;
            let km = k_matrix(z, dim)?;
            Ok(Row {
                z,
                k_series: ks,
                k_matrix: km,
                abs_diff: (ks - km).abs(),
                violation: 2.0 * (1.0 + ks * ks).sqrt(),
                dim,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let body = match args.output.format_or(Format::Csv) {
        Format::Csv => {
            let flat: Vec<[f64; 5]> = rows
                .iter()
                .map(|r| [r.z, r.k_series, r.k_matrix, r.abs_diff, r.violation])
                .collect();
            csv(
                &["z", "K_series", "K_matrix", "abs_diff", "violation"],
                &flat,
            )?
        }
        Format::Json => json(&Report { rows: &rows })?,
    };
    args.output.emit(&body)
}
