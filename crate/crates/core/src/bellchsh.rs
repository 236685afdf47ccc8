//! CHSH Bell operator for a qubit paired with a pseudospin mode.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{HesError, Result};
use crate::fock::{Operator, SpaceDescriptor, StateVector};
use crate::labels::HesLabel;
use crate::pseudospin::{self, dot_s, dot_sigma, Direction, PseudospinOps};
use crate::simplex::{self, SimplexOptions};

/// Local-realist bound on `|⟨B⟩|`.
pub const CHSH_CLASSICAL_BOUND: f64 = 2.0;

/// Quantum (Cirel'son) bound `2√2`.
pub const CIRELSON_BOUND: f64 = 2.0 * std::f64::consts::SQRT_2;

const K_TOL: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChshSettings {
    pub a: Direction,
    pub a_prime: Direction,
    pub b: Direction,
    pub b_prime: Direction,
}

impl ChshSettings {
    /// All four directions in the x–z plane, given by polar angles.
    pub fn from_polar(theta_a: f64, theta_a_prime: f64, theta_b: f64, theta_b_prime: f64) -> Self {
        Self {
            a: Direction::from_polar(theta_a),
            a_prime: Direction::from_polar(theta_a_prime),
            b: Direction::from_polar(theta_b),
            b_prime: Direction::from_polar(theta_b_prime),
        }
    }

    /// From `[θa, φa, θa′, φa′, θb, φb, θb′, φb′]`.
    pub fn from_angles(angles: &[f64; 8]) -> Self {
        Self {
            a: Direction::from_angles(angles[0], angles[1]),
            a_prime: Direction::from_angles(angles[2], angles[3]),
            b: Direction::from_angles(angles[4], angles[5]),
            b_prime: Direction::from_angles(angles[6], angles[7]),
        }
    }

    /// `(θ, φ)` of `a, a′, b, b′`, with θ in `[0, π]` and φ in `(−π, π]`.
    pub fn angles(&self) -> [(f64, f64); 4] {
        [self.a, self.a_prime, self.b, self.b_prime].map(|d| (d.theta(), d.phi()))
    }

    pub fn directions(&self) -> [Direction; 4] {
        [self.a, self.a_prime, self.b, self.b_prime]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChshResult {
    pub value: f64,
    pub settings: ChshSettings,
    pub iterations: usize,
    pub restarts_used: usize,
}

/// `B = a·σ ⊗ (b + b′)·ŝ + a′·σ ⊗ (b − b′)·ŝ` on qubit ⊗ mode.
pub fn bell_operator(settings: &ChshSettings, ops: &PseudospinOps) -> Operator {
    let sa = dot_sigma(&settings.a);
    let sa_p = dot_sigma(&settings.a_prime);
    let sb = dot_s(&settings.b, ops);
    let sb_p = dot_s(&settings.b_prime, ops);
    let m = sa.matrix().kronecker(sb.matrix())
        + sa.matrix().kronecker(sb_p.matrix())
        + sa_p.matrix().kronecker(sb.matrix())
        - sa_p.matrix().kronecker(sb_p.matrix());
    let space = SpaceDescriptor::qubit().product(ops.s_z().space());
    Operator::new(space, m).expect("bell operator dims")
}

/// The second factor may be a mode or a qubit of matching dimension; a
/// qubit paired with `build_pseudospin(2)` sees ordinary Pauli matrices.
fn check_chsh_space(state: &StateVector, ops: &PseudospinOps) -> Result<()> {
    let f = state.space().factors();
    let expected = SpaceDescriptor::qubit().product(ops.s_z().space());
    if f.len() == 2 && f[0].is_qubit() && f[1].dim() == ops.dim() {
        Ok(())
    } else {
        Err(HesError::SpaceMismatch {
            left: state.space().clone(),
            right: expected,
        })
    }
}

/// `⟨ψ|B|ψ⟩` for a qubit ⊗ mode state.
pub fn chsh_value(
    state: &StateVector,
    settings: &ChshSettings,
    ops: &PseudospinOps,
) -> Result<f64> {
    check_chsh_space(state, ops)?;
    let b = bell_operator(settings, ops);
    let amps = state.amps();
    let v: Complex64 = amps.dotc(&(b.matrix() * amps));
    if v.im.abs() >= 1e-10 {
        return Err(HesError::InvalidParameter(format!(
            "Bell expectation has imaginary part {:e}",
            v.im
        )));
    }
    Ok(v.re)
}

/// `T[i][j] = ⟨σ_i ⊗ s_j⟩` for `i, j ∈ {x, y, z}`. By linearity
/// `⟨B⟩ = a·T(b + b′) + a′·T(b − b′)`.
pub fn correlation_tensor(state: &StateVector, ops: &PseudospinOps) -> Result<[[f64; 3]; 3]> {
    check_chsh_space(state, ops)?;
    let axes = [
        Direction::x_axis(),
        Direction::y_axis(),
        Direction::z_axis(),
    ];
    let amps = state.amps();
    let mut t = [[0.0; 3]; 3];
    for (i, ai) in axes.iter().enumerate() {
        let sigma = dot_sigma(ai);
        for (j, bj) in axes.iter().enumerate() {
            let s = dot_s(bj, ops);
            let m = sigma.matrix().kronecker(s.matrix());
            t[i][j] = amps.dotc(&(m * amps)).re;
        }
    }
    Ok(t)
}

fn tensor_value(t: &[[f64; 3]; 3], s: &ChshSettings) -> f64 {
    let [a, ap, b, bp] = s.directions().map(|d| d.components());
    let mut v = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            v += t[i][j] * (a[i] * (b[j] + bp[j]) + ap[i] * (b[j] - bp[j]));
        }
    }
    v
}

/// In-plane settings that reach `2√(1+K²)` on the given hybrid Bell state.
///
/// For `φ⁺` these are `θa = 0, θa′ = π/2, θb = arctan K = −θb′`. The other
/// labels flip the sign of `⟨σz sz⟩` and/or `⟨σx sx⟩`, which is undone by
/// mirroring the `b, b′` axes.
pub fn analytic_settings(label: HesLabel, k: f64) -> ChshSettings {
    let beta = k.atan();
    let (sign_z, sign_x) = match label {
        HesLabel::PhiPlus => (1.0, 1.0),
        HesLabel::PhiMinus => (1.0, -1.0),
        HesLabel::PsiPlus => (-1.0, 1.0),
        HesLabel::PsiMinus => (-1.0, -1.0),
    };
    let mirrored = |theta: f64| {
        let d = Direction::from_polar(theta);
        let [x, _, z] = d.components();
        Direction::new(sign_x * x, 0.0, sign_z * z).expect("unit")
    };
    ChshSettings {
        a: Direction::from_polar(0.0),
        a_prime: Direction::from_polar(FRAC_PI_2),
        b: mirrored(beta),
        b_prime: mirrored(-beta),
    }
}

/// Closed-form optimum `2√(1+K(z)²)` with its `φ⁺` settings.
pub fn analytic_optimum(z: f64) -> Result<ChshResult> {
    analytic_optimum_for(HesLabel::PhiPlus, z)
}

pub fn analytic_optimum_for(label: HesLabel, z: f64) -> Result<ChshResult> {
    let k = pseudospin::k_series(z, K_TOL)?;
    Ok(ChshResult {
        value: 2.0 * (1.0 + k * k).sqrt(),
        settings: analytic_settings(label, k),
        iterations: 0,
        restarts_used: 0,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub seed: u64,
    pub max_iter: usize,
    pub xtol: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 16,
            seed: 0,
            max_iter: 2000,
            xtol: 1e-9,
        }
    }
}

/// Maximizes `⟨B⟩` over all eight spherical angles with a multi-start simplex.
pub fn optimize_chsh(
    state: &StateVector,
    ops: &PseudospinOps,
    restarts: usize,
    seed: u64,
) -> Result<ChshResult> {
    optimize_chsh_with(
        state,
        ops,
        &OptimizerConfig {
            restarts,
            seed,
            ..Default::default()
        },
    )
}

pub fn optimize_chsh_with(
    state: &StateVector,
    ops: &PseudospinOps,
    config: &OptimizerConfig,
) -> Result<ChshResult> {
    if config.restarts == 0 {
        return Err(HesError::InvalidParameter("restarts must be >= 1".into()));
    }
    let t = correlation_tensor(state, ops)?;
    let objective = |x: &[f64]| {
        let angles: [f64; 8] = x.try_into().expect("eight angles");
        -tensor_value(&t, &ChshSettings::from_angles(&angles))
    };
    let opts = SimplexOptions {
        initial_step: 0.5,
        xtol: config.xtol,
        max_iter: config.max_iter,
    };

    let runs: Vec<(f64, [f64; 8], usize)> = (0..config.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(r as u64));
            let x0: Vec<f64> = (0..8)
                .map(|i| {
                    if i % 2 == 0 {
                        rng.random_range(0.0..PI)
                    } else {
                        rng.random_range(0.0..2.0 * PI)
                    }
                })
                .collect();
            let res = simplex::minimize(objective, &x0, &opts);
            let x: [f64; 8] = res.x.try_into().expect("eight angles");
            (-res.value, x, res.iterations)
        })
        .collect();

    // first strictly better run wins, so ties go to the lowest restart index
    let mut best = 0;
    for (i, run) in runs.iter().enumerate() {
        if run.0 > runs[best].0 {
            best = i;
        }
    }
    let (_, x, iterations) = runs[best];
    let settings = ChshSettings::from_angles(&x);
    Ok(ChshResult {
        value: chsh_value(state, &settings, ops)?,
        settings,
        iterations,
        restarts_used: config.restarts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{even_coherent, tensor};
    use crate::pseudospin::build_pseudospin;
    use approx::assert_abs_diff_eq;

    #[test]
    fn all_z_axis_collapses_to_two_sigma_z_s_z() {
        let ops = build_pseudospin(4).unwrap();
        let z = Direction::z_axis();
        let s = ChshSettings {
            a: z,
            a_prime: z,
            b: z,
            b_prime: z,
        };
        let b = bell_operator(&s, &ops);
        let expected = dot_sigma(&z).matrix().kronecker(ops.s_z().matrix()) * Complex64::from(2.0);
        assert_eq!(*b.matrix(), expected);
    }

    #[test]
    fn product_state_on_z_axis_gives_two() {
        let ops = build_pseudospin(16).unwrap();
        let state = tensor(&StateVector::up(), &even_coherent(1.0, 16).unwrap());
        let s = ChshSettings::from_polar(0.0, 0.0, 0.0, 0.0);
        assert_abs_diff_eq!(chsh_value(&state, &s, &ops).unwrap(), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn rejects_wrong_space() {
        let ops = build_pseudospin(6).unwrap();
        let state = tensor(&StateVector::up(), &even_coherent(0.5, 12).unwrap());
        let s = ChshSettings::from_polar(0.0, 0.0, 0.0, 0.0);
        assert!(chsh_value(&state, &s, &ops).is_err());
    }

    #[test]
    fn zero_restarts_rejected() {
        let ops = build_pseudospin(2).unwrap();
        let state = tensor(&StateVector::up(), &StateVector::up());
        assert!(optimize_chsh(&state, &ops, 0, 0).is_err());
    }
}
