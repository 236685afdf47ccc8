//! Bell bases and the teleportation / entanglement-swapping protocols.
//!
//! Party ordering follows the subscripts of the protocol: spin teleportation
//! lives on `qubit₁ ⊗ qubit₂ ⊗ mode₃`, parity teleportation on
//! `qubit₁ ⊗ mode₂ ⊗ mode₃`, and swapping on `qubit₁ ⊗ mode₂ ⊗ qubit₃ ⊗ mode₄`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entanglement::{entanglement_entropy, Bipartition};
use crate::error::{HesError, Result};
use crate::fock::{
    self, apply, even_coherent, fidelity, odd_coherent, tensor, Operator, SpaceDescriptor,
    StateVector,
};
use crate::labels::{BellShape, Correction, HesLabel, ParityBellLabel, SpinBellLabel};
use crate::pseudospin::{build_pseudospin, dot_sigma, Direction};

/// Allowed weight outside the parity Bell span before measuring.
pub const PARITY_SPAN_TOL: f64 = 1e-10;

/// Expected signs of `½(Φ⁺φ̃⁺, Φ⁻φ̃⁻, Ψ⁺ψ̃⁺, Ψ⁻ψ̃⁻)` in `ψ⁻₁₂ ⊗ ψ⁻₃₄`.
pub const SWAP_SIGNS: [f64; 4] = [1.0, -1.0, -1.0, 1.0];

const SWAP_COEFF_TOL: f64 = 1e-12;

/// Seeded source of measurement draws.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    counter: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            counter: 0,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of draws taken so far.
    pub fn counter(&self) -> u64 {
        self.counter
    }

    /// Uniform draw in `[0, 1)`.
    pub fn next_uniform(&mut self) -> f64 {
        self.counter += 1;
        self.rng.random::<f64>()
    }
}

/// Inverse-CDF pick; zero-probability branches are never chosen.
fn sample_index(probs: &[f64], u: f64) -> usize {
    let total: f64 = probs.iter().sum();
    let target = u * total;
    let mut cum = 0.0;
    let mut last = 0;
    for (k, &p) in probs.iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        cum += p;
        last = k;
        if target < cum {
            return k;
        }
    }
    last
}

// ---------------------------------------------------------------------------
// bases

fn bell_pair(
    shape: BellShape,
    zero_a: &StateVector,
    one_a: &StateVector,
    zero_b: &StateVector,
    one_b: &StateVector,
) -> Result<StateVector> {
    let (first, second) = if shape.same {
        (tensor(zero_a, zero_b), tensor(one_a, one_b))
    } else {
        (tensor(zero_a, one_b), tensor(one_a, zero_b))
    };
    StateVector::superpose(&[
        (Complex64::from(1.0), &first),
        (Complex64::from(shape.sign), &second),
    ])
}

pub fn spin_bell_state(label: SpinBellLabel) -> StateVector {
    let (up, down) = (StateVector::up(), StateVector::down());
    bell_pair(label.shape(), &up, &down, &up, &down).expect("two-qubit Bell state")
}

/// `φ± = (|↑⟩|z⟩_e ± |↓⟩|z⟩_o)/√2`, `ψ± = (|↑⟩|z⟩_o ± |↓⟩|z⟩_e)/√2`.
pub fn hes_state(label: HesLabel, z: f64, dim: usize) -> Result<StateVector> {
    let (e, o) = (even_coherent(z, dim)?, odd_coherent(z, dim)?);
    bell_pair(
        label.shape(),
        &StateVector::up(),
        &StateVector::down(),
        &e,
        &o,
    )
}

pub fn parity_bell_state(
    label: ParityBellLabel,
    z: f64,
    z_prime: f64,
    dim: usize,
) -> Result<StateVector> {
    parity_bell_state_dims(label, z, dim, z_prime, dim)
}

/// Parity Bell state with independent truncations for the two modes.
pub fn parity_bell_state_dims(
    label: ParityBellLabel,
    z: f64,
    dim: usize,
    z_prime: f64,
    dim_prime: usize,
) -> Result<StateVector> {
    let (e, o) = (even_coherent(z, dim)?, odd_coherent(z, dim)?);
    let (ep, op) = (
        even_coherent(z_prime, dim_prime)?,
        odd_coherent(z_prime, dim_prime)?,
    );
    bell_pair(label.shape(), &e, &o, &ep, &op)
}

/// Parity qubit `α|z⟩_e + β|z⟩_o`.
pub fn parity_qubit(alpha: Complex64, beta: Complex64, z: f64, dim: usize) -> Result<StateVector> {
    check_normalized(alpha, beta)?;
    let (e, o) = (even_coherent(z, dim)?, odd_coherent(z, dim)?);
    StateVector::superpose(&[(alpha, &e), (beta, &o)])
}

fn check_normalized(alpha: Complex64, beta: Complex64) -> Result<()> {
    let n = alpha.norm_sqr() + beta.norm_sqr();
    if (n - 1.0).abs() > 1e-12 {
        Err(HesError::NotNormalized(n))
    } else {
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// measurements

#[derive(Debug, Clone, PartialEq)]
pub struct BellMeasurement<L> {
    pub outcome: L,
    pub probability: f64,
    /// Branch probabilities in `ALL` order.
    pub probabilities: [f64; 4],
    /// Post-measurement state with the measured factors removed, or the
    /// selected basis state when nothing else is left.
    pub collapsed: StateVector,
}

fn measure_pair<L: Copy>(
    state: &StateVector,
    pair: (usize, usize),
    basis: [(L, StateVector); 4],
    span_tol: Option<f64>,
    rng: &mut RngStream,
) -> Result<BellMeasurement<L>> {
    if pair.0 == pair.1 {
        return Err(HesError::InvalidParameter(format!(
            "measured factors must differ, got {pair:?}"
        )));
    }
    if state.space().len() == 2 {
        return measure_whole(state, pair, basis, span_tol, rng);
    }
    let mut branches = Vec::with_capacity(4);
    for (label, bra) in &basis {
        let (space, amps) = state.contract(&[pair.0, pair.1], bra)?;
        branches.push((*label, space, amps));
    }
    let probabilities: [f64; 4] = std::array::from_fn(|k| branches[k].2.norm_squared());
    check_span(&probabilities, span_tol)?;
    let k = sample_index(&probabilities, rng.next_uniform());
    let (outcome, space, amps) = branches.swap_remove(k);
    let collapsed =
        StateVector::new(space, amps)?.with_truncation_residual(state.truncation_residual());
    Ok(BellMeasurement {
        outcome,
        probability: probabilities[k],
        probabilities,
        collapsed,
    })
}

fn check_span(probabilities: &[f64; 4], span_tol: Option<f64>) -> Result<()> {
    if let Some(tol) = span_tol {
        let residual = 1.0 - probabilities.iter().sum::<f64>();
        if residual > tol {
            return Err(HesError::OutOfSpan { residual });
        }
    }
    Ok(())
}

/// Both factors are measured, so the state collapses onto the basis state.
fn measure_whole<L: Copy>(
    state: &StateVector,
    pair: (usize, usize),
    basis: [(L, StateVector); 4],
    span_tol: Option<f64>,
    rng: &mut RngStream,
) -> Result<BellMeasurement<L>> {
    let ordered = state.permute(&[pair.0, pair.1])?;
    let mut probabilities = [0.0; 4];
    for (k, (_, ket)) in basis.iter().enumerate() {
        probabilities[k] = fock::inner(ket, &ordered)?.norm_sqr();
    }
    check_span(&probabilities, span_tol)?;
    let k = sample_index(&probabilities, rng.next_uniform());
    let (outcome, ket) = basis[k].clone();
    Ok(BellMeasurement {
        outcome,
        probability: probabilities[k],
        probabilities,
        collapsed: ket,
    })
}

/// Projective measurement of qubits `(i, j)` in the `Φ±, Ψ±` basis.
pub fn measure_spin_bell(
    state: &StateVector,
    qubits: (usize, usize),
    rng: &mut RngStream,
) -> Result<BellMeasurement<SpinBellLabel>> {
    state.space().expect_qubit(qubits.0)?;
    state.space().expect_qubit(qubits.1)?;
    let basis = SpinBellLabel::ALL.map(|l| (l, spin_bell_state(l)));
    measure_pair(state, qubits, basis, None, rng)
}

/// Projective measurement of modes `(i, j)` onto `φ̃±(z, z′), ψ̃±(z, z′)`,
/// with `z` on mode `i` and `z′` on mode `j`.
///
/// The four states only span part of mode ⊗ mode, so the state must lie in
/// their span up to [`PARITY_SPAN_TOL`].
pub fn measure_parity_bell(
    state: &StateVector,
    modes: (usize, usize),
    z: f64,
    z_prime: f64,
    rng: &mut RngStream,
) -> Result<BellMeasurement<ParityBellLabel>> {
    let di = state.space().expect_mode(modes.0)?;
    let dj = state.space().expect_mode(modes.1)?;
    let mut basis = Vec::with_capacity(4);
    for l in ParityBellLabel::ALL {
        basis.push((l, parity_bell_state_dims(l, z, di, z_prime, dj)?));
    }
    let basis: [(ParityBellLabel, StateVector); 4] =
        basis.try_into().expect("four parity Bell states");
    measure_pair(state, modes, basis, Some(PARITY_SPAN_TOL), rng)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParityOutcome {
    /// `+1` or `−1`.
    pub parity: i8,
    pub probability: f64,
    pub collapsed: StateVector,
}

/// Probabilities of parity `+1` and `−1` on a mode.
pub fn parity_probabilities(state: &StateVector, mode_index: usize) -> Result<(f64, f64)> {
    let dim = state.space().expect_mode(mode_index)?;
    let m = state.bipartite_matrix(&[mode_index])?;
    let even: f64 = (0..dim)
        .step_by(2)
        .map(|r| m.row(r).iter().map(|c| c.norm_sqr()).sum::<f64>())
        .sum();
    let odd: f64 = (1..dim)
        .step_by(2)
        .map(|r| m.row(r).iter().map(|c| c.norm_sqr()).sum::<f64>())
        .sum();
    Ok((even, odd))
}

/// Projective measurement of `s_z = (−1)^N` on one mode.
pub fn parity_measurement(
    state: &StateVector,
    mode_index: usize,
    rng: &mut RngStream,
) -> Result<ParityOutcome> {
    let (p_even, p_odd) = parity_probabilities(state, mode_index)?;
    let k = sample_index(&[p_even, p_odd], rng.next_uniform());
    let dim = state.space().expect_mode(mode_index)?;
    let keep = if k == 0 { 0 } else { 1 };
    let projector = Operator::new(
        state.space().select(&[mode_index])?,
        nalgebra::DMatrix::from_fn(dim, dim, |i, j| {
            if i == j && i % 2 == keep {
                Complex64::from(1.0)
            } else {
                Complex64::from(0.0)
            }
        }),
    )?;
    let projected = apply(&projector, state, mode_index)?;
    let collapsed = StateVector::new(state.space().clone(), projected.amps().clone())?
        .with_truncation_residual(state.truncation_residual());
    Ok(ParityOutcome {
        parity: if k == 0 { 1 } else { -1 },
        probability: if k == 0 { p_even } else { p_odd },
        collapsed,
    })
}

// ---------------------------------------------------------------------------
// teleportation

/// Correction that turns the channel's branch for `outcome` back into the
/// input codeword pattern. For the `φ⁺` channel: `Φ⁺ → I, Φ⁻ → s_z,
/// Ψ⁺ → s_x, Ψ⁻ → s_y`.
pub fn correction_for(outcome: SpinBellLabel, channel: HesLabel) -> Correction {
    outcome.pauli().compose(channel.pauli())
}

/// Spin-side correction after a parity Bell measurement.
pub fn parity_correction_for(outcome: ParityBellLabel, channel: HesLabel) -> Correction {
    outcome.pauli().compose(channel.pauli())
}

fn mode_correction(c: Correction, dim: usize) -> Result<Operator> {
    let ops = build_pseudospin(dim)?;
    Ok(match c {
        Correction::Identity => ops.identity(),
        Correction::Z => ops.s_z().clone(),
        Correction::X => ops.s_x().clone(),
        Correction::Y => ops.s_y().clone(),
    })
}

fn qubit_correction(c: Correction) -> Operator {
    match c {
        Correction::Identity => Operator::identity(SpaceDescriptor::qubit()),
        Correction::Z => dot_sigma(&Direction::z_axis()),
        Correction::X => dot_sigma(&Direction::x_axis()),
        Correction::Y => dot_sigma(&Direction::y_axis()),
    }
}

/// Branches of `|φ⟩₁ ⊗ |channel⟩₂₃` on mode 3, one per spin Bell outcome on
/// qubits (1, 2): the input equals `½ Σ |Bell⟩₁₂ ⊗ branch`.
pub fn decompose_teleport_input(
    alpha: Complex64,
    beta: Complex64,
    z: f64,
    channel: HesLabel,
    dim: usize,
) -> Result<Vec<(SpinBellLabel, StateVector)>> {
    let input = tensor(
        &StateVector::qubit(alpha, beta)?,
        &hes_state(channel, z, dim)?,
    );
    SpinBellLabel::ALL
        .iter()
        .map(|&l| {
            let (space, amps) = input.contract(&[0, 1], &spin_bell_state(l))?;
            Ok((l, StateVector::new(space, amps)?))
        })
        .collect()
}

/// Replica expected on mode 3 once `correction` has been applied.
///
/// `I` and `s_z` restore `α|z⟩_e + β|z⟩_o`. `s_x` and `s_y` produce
/// `α s₊|z⟩_o + β s₋|z⟩_e` (the latter up to a global `−i`), whose even and
/// odd components play the roles of `|↑⟩` and `|↓⟩`.
pub fn spin_teleport_target(
    alpha: Complex64,
    beta: Complex64,
    correction: Correction,
    z: f64,
    dim: usize,
) -> Result<StateVector> {
    let (e, o) = (even_coherent(z, dim)?, odd_coherent(z, dim)?);
    match correction {
        Correction::Identity | Correction::Z => StateVector::superpose(&[(alpha, &e), (beta, &o)]),
        Correction::X | Correction::Y => {
            let ops = build_pseudospin(dim)?;
            let raised = apply(ops.s_plus(), &o, 0)?;
            let lowered = apply(ops.s_minus(), &e, 0)?;
            StateVector::superpose(&[(alpha, &raised), (beta, &lowered)])
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TeleportOutcome {
    Spin(SpinBellLabel),
    Parity(ParityBellLabel),
}

impl TeleportOutcome {
    pub fn key(self) -> &'static str {
        match self {
            TeleportOutcome::Spin(l) => l.key(),
            TeleportOutcome::Parity(l) => l.key(),
        }
    }

    pub fn index(self) -> usize {
        match self {
            TeleportOutcome::Spin(l) => l.index(),
            TeleportOutcome::Parity(l) => l.index(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TeleportRecord {
    pub outcome: TeleportOutcome,
    pub outcome_probability: f64,
    pub probabilities: [f64; 4],
    pub correction: Correction,
    pub output_state: StateVector,
    pub target_state: StateVector,
    /// `|⟨target|output⟩|²`.
    pub fidelity: f64,
}

/// Teleports `α|↑⟩ + β|↓⟩` from qubit 1 onto mode 3 through `channel₂₃`.
pub fn teleport_spin(
    alpha: Complex64,
    beta: Complex64,
    channel: HesLabel,
    z: f64,
    dim: usize,
    rng: &mut RngStream,
) -> Result<TeleportRecord> {
    let input = tensor(
        &StateVector::qubit(alpha, beta)?,
        &hes_state(channel, z, dim)?,
    );
    let m = measure_spin_bell(&input, (0, 1), rng)?;
    let correction = correction_for(m.outcome, channel);
    let output_state = apply(&mode_correction(correction, dim)?, &m.collapsed, 0)?;
    let target_state = spin_teleport_target(alpha, beta, correction, z, dim)?;
    Ok(TeleportRecord {
        outcome: TeleportOutcome::Spin(m.outcome),
        outcome_probability: m.probability,
        probabilities: m.probabilities,
        correction,
        fidelity: fidelity(&target_state, &output_state)?,
        output_state,
        target_state,
    })
}

/// Teleports the parity qubit `α|z″⟩_e + β|z″⟩_o` on mode 3 onto the spin of
/// `channel₁₂(z)` via a parity Bell measurement on modes (3, 2).
pub fn teleport_parity(
    alpha: Complex64,
    beta: Complex64,
    z_dblprime: f64,
    channel: HesLabel,
    z: f64,
    dim: usize,
    rng: &mut RngStream,
) -> Result<TeleportRecord> {
    let full = tensor(
        &hes_state(channel, z, dim)?,
        &parity_qubit(alpha, beta, z_dblprime, dim)?,
    );
    let m = measure_parity_bell(&full, (2, 1), z_dblprime, z, rng)?;
    let correction = parity_correction_for(m.outcome, channel);
    let output_state = apply(&qubit_correction(correction), &m.collapsed, 0)?;
    let target_state = StateVector::qubit(alpha, beta)?;
    Ok(TeleportRecord {
        outcome: TeleportOutcome::Parity(m.outcome),
        outcome_probability: m.probability,
        probabilities: m.probabilities,
        correction,
        fidelity: fidelity(&target_state, &output_state)?,
        output_state,
        target_state,
    })
}

// ---------------------------------------------------------------------------
// entanglement swapping

/// `ψ⁻₁₂(z) ⊗ ψ⁻₃₄(z′)` on `qubit₁ ⊗ mode₂ ⊗ qubit₃ ⊗ mode₄`.
pub fn swap_input(z: f64, z_prime: f64, dim: usize) -> Result<StateVector> {
    Ok(tensor(
        &hes_state(HesLabel::PsiMinus, z, dim)?,
        &hes_state(HesLabel::PsiMinus, z_prime, dim)?,
    ))
}

/// Coefficients `⟨Bell₁₃ ⊗ parity-Bell₂₄ | χ⟩` for the four paired terms.
pub fn swap_expansion(
    z: f64,
    z_prime: f64,
    dim: usize,
) -> Result<[(SpinBellLabel, ParityBellLabel, Complex64); 4]> {
    let chi = swap_input(z, z_prime, dim)?;
    let mut out = Vec::with_capacity(4);
    for l in SpinBellLabel::ALL {
        let p = l.paired_parity();
        // built as qubit₁ qubit₃ mode₂ mode₄, reordered to the input layout
        let term = tensor(&spin_bell_state(l), &parity_bell_state(p, z, z_prime, dim)?)
            .permute(&[0, 2, 1, 3])?;
        out.push((l, p, fock::inner(&term, &chi)?));
    }
    Ok(out.try_into().expect("four terms"))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwapRecord {
    pub outcome: SpinBellLabel,
    pub parity_label: ParityBellLabel,
    pub probability: f64,
    pub probabilities: [f64; 4],
    pub coefficients: [Complex64; 4],
    /// Overlap of modes (2, 4) with the paired parity Bell state.
    pub fidelity: f64,
    /// Entanglement between modes 2 and 4 after the measurement, in ebits.
    pub entropy: f64,
    pub mode_state: StateVector,
}

/// Swaps entanglement from `ψ⁻₁₂(z) ⊗ ψ⁻₃₄(z′)` onto modes (2, 4) by a spin
/// Bell measurement on qubits (1, 3).
pub fn swap_entanglement(
    z: f64,
    z_prime: f64,
    dim: usize,
    rng: &mut RngStream,
) -> Result<SwapRecord> {
    let expansion = swap_expansion(z, z_prime, dim)?;
    let coefficients = expansion.map(|(_, _, c)| c);
    for (k, (l, _, c)) in expansion.iter().enumerate() {
        let expected = Complex64::from(0.5 * SWAP_SIGNS[k]);
        if (c - expected).norm() > SWAP_COEFF_TOL {
            return Err(HesError::ExpansionMismatch(format!(
                "coefficient of {l} is {c}, expected {expected}"
            )));
        }
    }
    let chi = swap_input(z, z_prime, dim)?;
    let m = measure_spin_bell(&chi, (0, 2), rng)?;
    let parity_label = m.outcome.paired_parity();
    let target = parity_bell_state(parity_label, z, z_prime, dim)?;
    Ok(SwapRecord {
        outcome: m.outcome,
        parity_label,
        probability: m.probability,
        probabilities: m.probabilities,
        coefficients,
        fidelity: fidelity(&target, &m.collapsed)?,
        entropy: entanglement_entropy(&m.collapsed, &Bipartition::first(2)?)?,
        mode_state: m.collapsed,
    })
}

// ---------------------------------------------------------------------------
// batches

/// Runs `trials` independent protocol instances, trial `i` seeded with
/// `seed + i`. Results come back in trial order whatever the scheduling.
pub fn run_trials<T, F>(seed: u64, trials: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut RngStream) -> Result<T> + Sync,
{
    (0..trials)
        .into_par_iter()
        .map(|i| f(&mut RngStream::new(seed.wrapping_add(i as u64))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::from(re)
    }

    #[test]
    fn phi_plus_amplitudes() {
        let s = spin_bell_state(SpinBellLabel::PhiPlus);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let expected = [h, 0.0, 0.0, h];
        for (a, e) in s.amps().iter().zip(expected) {
            assert!((a - c(e)).norm() < 1e-15);
        }
    }

    #[test]
    fn sampling_skips_empty_branches() {
        assert_eq!(sample_index(&[0.0, 1.0, 0.0, 0.0], 0.0), 1);
        assert_eq!(sample_index(&[0.5, 0.0, 0.5, 0.0], 0.999_999_999_9), 2);
        assert_eq!(sample_index(&[0.25; 4], 0.3), 1);
    }

    #[test]
    fn rng_counts_draws() {
        let mut r = RngStream::new(5);
        r.next_uniform();
        r.next_uniform();
        assert_eq!(r.counter(), 2);
        assert_eq!(r.seed(), 5);
    }

    #[test]
    fn spin_measurement_rejects_modes() {
        let s = hes_state(HesLabel::PhiPlus, 0.5, 12).unwrap();
        let full = tensor(&StateVector::up(), &s);
        let mut rng = RngStream::new(0);
        assert!(matches!(
            measure_spin_bell(&full, (0, 2), &mut rng),
            Err(HesError::FactorKind { .. })
        ));
        assert!(measure_spin_bell(&full, (0, 0), &mut rng).is_err());
    }

    #[test]
    fn parity_measurement_rejects_out_of_span() {
        // |2⟩|2⟩ overlaps the parity Bell states only partially
        let modes = tensor(
            &StateVector::fock(16, 2).unwrap(),
            &StateVector::fock(16, 2).unwrap(),
        );
        let s = tensor(&StateVector::up(), &modes);
        let mut rng = RngStream::new(0);
        let r = measure_parity_bell(&s, (1, 2), 1.0, 1.0, &mut rng);
        assert!(matches!(r, Err(HesError::OutOfSpan { .. })), "{r:?}");
    }

    #[test]
    fn teleport_rejects_unnormalized_input() {
        let mut rng = RngStream::new(0);
        assert!(matches!(
            teleport_spin(c(1.0), c(1.0), HesLabel::PhiPlus, 0.5, 10, &mut rng),
            Err(HesError::NotNormalized(_))
        ));
    }
}
