use std::fs;
use std::io::Write;

use anyhow::{Context, Result};
use hes_core::Complex64;
use serde::Serialize;

use crate::{Format, OutputArgs};

impl OutputArgs {
    pub fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    pub fn emit(&self, body: &str) -> Result<()> {
        match &self.out {
            Some(path) => {
                fs::write(path, body).with_context(|| format!("writing {}", path.display()))
            }
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(body.as_bytes())?;
                stdout.flush()?;
                Ok(())
            }
        }
    }
}

pub fn json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// CSV with an explicit header row; rows are serialized positionally.
pub fn csv<T: Serialize>(header: &[&str], rows: &[T]) -> Result<String> {
    let mut w = ::csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.serialize(row)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// `[re, im]`.
pub fn complex(c: Complex64) -> [f64; 2] {
    [c.re, c.im]
}

/// One value per Bell-type outcome, keyed in basis order.
#[derive(Debug, Clone, Serialize)]
pub struct PerOutcome<T> {
    pub phi_plus: T,
    pub phi_minus: T,
    pub psi_plus: T,
    pub psi_minus: T,
}

impl<T> PerOutcome<T> {
    pub fn from_fn(mut f: impl FnMut(usize) -> T) -> Self {
        Self {
            phi_plus: f(0),
            phi_minus: f(1),
            psi_plus: f(2),
            psi_minus: f(3),
        }
    }
}

/// Minimum and running-order mean of `values`.
pub fn min_mean(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (mut min, mut sum, mut n) = (f64::INFINITY, 0.0, 0usize);
    for v in values {
        min = min.min(v);
        sum += v;
        n += 1;
    }
    (min, sum / n as f64)
}
