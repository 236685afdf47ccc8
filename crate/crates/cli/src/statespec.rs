//! Parsing of labels, complex amplitudes and named states such as
//! `hes:ψ⁺:z=1`, `paritybell:φ̃⁺:z=0.5,z'=1`, `spinbell:Φ⁺`, `product:z=1`.

use std::collections::HashMap;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use hes_core::fock::{even_coherent, tensor, StateVector};
use hes_core::protocols::{hes_state, parity_bell_state, spin_bell_state};
use hes_core::{Complex64, HesLabel, ParityBellLabel, SpinBellLabel};

pub fn parse_label<L>(s: &str) -> Result<L, String>
where
    L: FromStr,
    L::Err: std::fmt::Display,
{
    s.parse::<L>().map_err(|e| e.to_string())
}

/// Accepts `0.6`, `0.8i`, `-0.3+0.4i`, `i`.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let t = match t.as_str() {
        "i" | "+i" => "1i".to_string(),
        "-i" => "-1i".to_string(),
        _ => t,
    };
    let c = Complex64::from_str(&t).map_err(|_| format!("not a complex number: {s:?}"))?;
    if !(c.re.is_finite() && c.im.is_finite()) {
        return Err(format!("not a finite complex number: {s:?}"));
    }
    Ok(c)
}

#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Hes {
        label: HesLabel,
        z: f64,
    },
    ParityBell {
        label: ParityBellLabel,
        z: f64,
        z_prime: f64,
    },
    SpinBell {
        label: SpinBellLabel,
    },
    /// `|↑⟩ ⊗ |z⟩_e`.
    Product {
        z: f64,
    },
}

fn parse_params(s: &str) -> Result<HashMap<String, f64>> {
    let mut out = HashMap::new();
    for part in s.split(',').filter(|p| !p.trim().is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| anyhow!("expected key=value, got {part:?}"))?;
        let key = match k.trim() {
            "z" => "z",
            "z'" | "z′" | "zprime" | "zp" => "z_prime",
            other => bail!("unknown parameter {other:?}"),
        };
        let v: f64 = v
            .trim()
            .parse()
            .with_context(|| format!("bad value for {key}: {v:?}"))?;
        if !v.is_finite() || v < 0.0 {
            bail!("{key} must be finite and nonnegative, got {v}");
        }
        if out.insert(key.to_string(), v).is_some() {
            bail!("{key} given twice");
        }
    }
    Ok(out)
}

fn take(params: &mut HashMap<String, f64>, key: &str) -> Result<f64> {
    params
        .remove(key)
        .ok_or_else(|| anyhow!("missing parameter {key}"))
}

impl FromStr for StateSpec {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.splitn(3, ':');
        let kind = parts.next().unwrap_or_default().trim().to_lowercase();
        let spec = match kind.as_str() {
            "hes" => {
                let label = parts.next().ok_or_else(|| anyhow!("missing label"))?.parse()?;
                let mut p = parse_params(parts.next().unwrap_or_default())?;
                let z = take(&mut p, "z")?;
                ensure_empty(&p)?;
                StateSpec::Hes { label, z }
            }
            "paritybell" => {
                let label = parts.next().ok_or_else(|| anyhow!("missing label"))?.parse()?;
                let mut p = parse_params(parts.next().unwrap_or_default())?;
                let z = take(&mut p, "z")?;
                let z_prime = take(&mut p, "z_prime")?;
                ensure_empty(&p)?;
                StateSpec::ParityBell { label, z, z_prime }
            }
            "spinbell" => {
                let label = parts.next().ok_or_else(|| anyhow!("missing label"))?.parse()?;
                if parts.next().is_some() {
                    bail!("spinbell takes no parameters");
                }
                StateSpec::SpinBell { label }
            }
            "product" => {
                let rest: Vec<&str> = parts.collect();
                let mut p = parse_params(&rest.join(":"))?;
                let z = take(&mut p, "z")?;
                ensure_empty(&p)?;
                StateSpec::Product { z }
            }
            _ => bail!("unknown state kind {kind:?} in {s:?}; expected hes, paritybell, spinbell or product"),
        };
        Ok(spec)
    }
}

fn ensure_empty(p: &HashMap<String, f64>) -> Result<()> {
    match p.keys().next() {
        Some(k) => bail!("unexpected parameter {k}"),
        None => Ok(()),
    }
}

impl StateSpec {
    /// Coherent amplitudes that set the truncation.
    pub fn amplitudes(&self) -> Vec<f64> {
        match *self {
            StateSpec::Hes { z, .. } | StateSpec::Product { z } => vec![z],
            StateSpec::ParityBell { z, z_prime, .. } => vec![z, z_prime],
            StateSpec::SpinBell { .. } => vec![],
        }
    }

    pub fn build(&self, dim: usize) -> Result<StateVector> {
        Ok(match *self {
            StateSpec::Hes { label, z } => hes_state(label, z, dim)?,
            StateSpec::ParityBell { label, z, z_prime } => {
                parity_bell_state(label, z, z_prime, dim)?
            }
            StateSpec::SpinBell { label } => spin_bell_state(label),
            StateSpec::Product { z } => tensor(&StateVector::up(), &even_coherent(z, dim)?),
        })
    }

    /// Canonical form with unicode labels.
    pub fn canonical(&self) -> String {
        match self {
            StateSpec::Hes { label, z } => format!("hes:{label}:z={z}"),
            StateSpec::ParityBell { label, z, z_prime } => {
                format!("paritybell:{label}:z={z},z'={z_prime}")
            }
            StateSpec::SpinBell { label } => format!("spinbell:{label}"),
            StateSpec::Product { z } => format!("product:z={z}"),
        }
    }
}
