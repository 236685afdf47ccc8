//! Pseudospin algebra of a bosonic mode and the overlap function `K(z)`.
//!
//! `s_z = (−1)^N` is the parity operator and `s₊ = Σ |2n⟩⟨2n+1|` flips odd
//! Fock states down into even ones. On an even truncation each pair
//! `{|2n⟩, |2n+1⟩}` is a closed two-level block, so the spin-½ algebra holds
//! exactly on the truncated matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{HesError, Result};
use crate::fock::{self, Operator, SpaceDescriptor, ONE, ZERO};

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, PartialEq)]
pub struct PseudospinOps {
    dim: usize,
    s_z: Operator,
    s_plus: Operator,
    s_minus: Operator,
    s_x: Operator,
    s_y: Operator,
}

impl PseudospinOps {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn s_z(&self) -> &Operator {
        &self.s_z
    }

    pub fn s_plus(&self) -> &Operator {
        &self.s_plus
    }

    pub fn s_minus(&self) -> &Operator {
        &self.s_minus
    }

    pub fn s_x(&self) -> &Operator {
        &self.s_x
    }

    pub fn s_y(&self) -> &Operator {
        &self.s_y
    }

    pub fn identity(&self) -> Operator {
        Operator::identity(self.s_z.space().clone())
    }
}

pub fn build_pseudospin(dim: usize) -> Result<PseudospinOps> {
    let space = SpaceDescriptor::mode(dim)?;
    let s_z = DMatrix::from_fn(dim, dim, |i, j| match (i == j, i % 2) {
        (true, 0) => ONE,
        (true, _) => -ONE,
        _ => ZERO,
    });
    let s_plus = DMatrix::from_fn(
        dim,
        dim,
        |i, j| {
            if i % 2 == 0 && j == i + 1 {
                ONE
            } else {
                ZERO
            }
        },
    );
    let s_minus = s_plus.adjoint();
    let s_x = &s_plus + &s_minus;
    let s_y = (&s_plus - &s_minus) * (-I);
    Ok(PseudospinOps {
        dim,
        s_z: Operator::new(space.clone(), s_z)?,
        s_plus: Operator::new(space.clone(), s_plus)?,
        s_minus: Operator::new(space.clone(), s_minus)?,
        s_x: Operator::new(space.clone(), s_x)?,
        s_y: Operator::new(space, s_y)?,
    })
}

/// Unit measurement direction in 3D.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Direction {
    x: f64,
    y: f64,
    z: f64,
}

impl Direction {
    const TOL: f64 = 1e-12;

    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > Self::TOL {
            return Err(HesError::InvalidParameter(format!(
                "direction ({x}, {y}, {z}) has norm {norm}"
            )));
        }
        Ok(Self { x, y, z })
    }

    /// `(sin θ, 0, cos θ)`: polar angle in the x–z plane.
    pub fn from_polar(theta: f64) -> Self {
        Self {
            x: theta.sin(),
            y: 0.0,
            z: theta.cos(),
        }
    }

    /// Spherical angles: polar `theta`, azimuth `phi`.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        Self {
            x: theta.sin() * phi.cos(),
            y: theta.sin() * phi.sin(),
            z: theta.cos(),
        }
    }

    pub fn x_axis() -> Self {
        Self {
            x: 1.0,
            y: 0.0,
            z: 0.0,
        }
    }

    pub fn y_axis() -> Self {
        Self {
            x: 0.0,
            y: 1.0,
            z: 0.0,
        }
    }

    pub fn z_axis() -> Self {
        Self {
            x: 0.0,
            y: 0.0,
            z: 1.0,
        }
    }

    pub fn components(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    /// Polar angle in `[0, π]`.
    pub fn theta(&self) -> f64 {
        self.z.clamp(-1.0, 1.0).acos()
    }

    /// Azimuth in `(−π, π]`.
    pub fn phi(&self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn negated(&self) -> Self {
        Self {
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }
}

/// `n · ŝ` on the mode.
pub fn dot_s(dir: &Direction, ops: &PseudospinOps) -> Operator {
    let m = ops.s_x.matrix() * Complex64::from(dir.x)
        + ops.s_y.matrix() * Complex64::from(dir.y)
        + ops.s_z.matrix() * Complex64::from(dir.z);
    Operator::new(ops.s_z.space().clone(), m).expect("pseudospin dims")
}

/// `n · σ̂` on a qubit.
pub fn dot_sigma(dir: &Direction) -> Operator {
    let m = DMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(dir.z, 0.0),
            Complex64::new(dir.x, -dir.y),
            Complex64::new(dir.x, dir.y),
            Complex64::new(-dir.z, 0.0),
        ],
    );
    Operator::new(SpaceDescriptor::qubit(), m).expect("qubit dims")
}

/// Below this `z` the series is replaced by its limit `K = 1`.
const K_SMALL_Z: f64 = 1e-8;

/// `ln(½ sinh 2x)`, safe for large `x`.
fn ln_half_sinh_2x(x: f64) -> f64 {
    if x > 10.0 {
        2.0 * x - 2.0 * std::f64::consts::LN_2 + (-(-4.0 * x).exp()).ln_1p()
    } else {
        (0.5 * (2.0 * x).sinh()).ln()
    }
}

/// `K(z)` from its closed series, summed in the log domain.
///
/// Terms grow before they decay once `z` is large, so summation only stops
/// after a term is both below `tol` and smaller than its predecessor.
pub fn k_series(z: f64, tol: f64) -> Result<f64> {
    if !z.is_finite() || z < 0.0 {
        return Err(HesError::InvalidParameter(format!(
            "z must be finite and nonnegative, got {z}"
        )));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(HesError::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if z < K_SMALL_Z {
        return Ok(1.0);
    }
    let ln_z = z.ln();
    let ln_pref = -0.5 * ln_half_sinh_2x(z * z);
    // ln (2n)! and ln (2n+1)!, advanced incrementally
    let mut ln_f_even = 0.0_f64;
    let mut ln_f_odd = 0.0_f64;
    let mut sum = 0.0;
    let mut prev = 0.0;
    for n in 0..1_000_000usize {
        if n > 0 {
            let a = (2 * n) as f64;
            ln_f_even = ln_f_odd + a.ln();
            ln_f_odd = ln_f_even + (a + 1.0).ln();
        }
        let term = ((4 * n + 1) as f64 * ln_z - 0.5 * (ln_f_even + ln_f_odd) + ln_pref).exp();
        sum += term;
        if term < tol && term < prev {
            return Ok(sum);
        }
        prev = term;
    }
    Err(HesError::InvalidParameter(format!(
        "K series did not converge at z = {z}"
    )))
}

/// `K(z) = ⟨z|_e s₊ |z⟩_o` evaluated with truncated matrices.
pub fn k_matrix(z: f64, dim: usize) -> Result<f64> {
    let ops = build_pseudospin(dim)?;
    let even = fock::even_coherent(z, dim)?;
    let odd = fock::odd_coherent(z, dim)?;
    let raised = fock::apply(ops.s_plus(), &odd, 0)?;
    let k = fock::inner(&even, &raised)?;
    if k.im.abs() >= 1e-12 {
        return Err(HesError::InvalidParameter(format!(
            "K overlap has imaginary part {:e}",
            k.im
        )));
    }
    Ok(k.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::StateVector;
    use approx::assert_abs_diff_eq;

    #[test]
    fn parity_and_flip_on_fock_states() {
        let ops = build_pseudospin(4).unwrap();
        let v0 = StateVector::fock(4, 0).unwrap();
        let v1 = StateVector::fock(4, 1).unwrap();
        assert_eq!(ops.s_z().act(&v0).unwrap(), v0);
        let flipped = fock::apply(ops.s_z(), &v1, 0).unwrap();
        assert_eq!(flipped.amps()[1], -ONE);
        let up = fock::apply(ops.s_plus(), &v1, 0).unwrap();
        assert_eq!(up.amps(), v0.amps());
        let killed = fock::apply(ops.s_plus(), &v0, 0).unwrap();
        assert_eq!(killed.norm(), 0.0);
    }

    #[test]
    fn odd_dim_rejected() {
        assert!(build_pseudospin(5).is_err());
        assert!(build_pseudospin(0).is_err());
    }

    #[test]
    fn s_minus_is_exact_adjoint() {
        let ops = build_pseudospin(10).unwrap();
        assert_eq!(ops.s_plus().adjoint(), *ops.s_minus());
    }

    #[test]
    fn basis_directions() {
        let ops = build_pseudospin(6).unwrap();
        assert_eq!(dot_s(&Direction::z_axis(), &ops), *ops.s_z());
        assert_eq!(
            dot_s(&Direction::x_axis(), &ops),
            ops.s_plus().add(ops.s_minus()).unwrap()
        );
        let sz = dot_sigma(&Direction::z_axis());
        assert_eq!(sz.matrix()[(0, 0)], ONE);
        assert_eq!(sz.matrix()[(1, 1)], -ONE);
        let sx = dot_sigma(&Direction::x_axis());
        assert_eq!(sx.matrix()[(0, 1)], ONE);
        assert_eq!(sx.matrix()[(1, 0)], ONE);
    }

    #[test]
    fn direction_validation() {
        assert!(Direction::new(1.0, 1.0, 0.0).is_err());
        let d = Direction::new(0.6, 0.0, 0.8).unwrap();
        assert_abs_diff_eq!(d.theta(), 0.6f64.asin(), epsilon = 1e-15);
    }

    #[test]
    fn k_limits() {
        assert_eq!(k_series(0.0, 1e-15).unwrap(), 1.0);
        assert_eq!(k_matrix(0.0, 4).unwrap(), 1.0);
        assert!(k_series(-1.0, 1e-15).is_err());
        assert!(k_series(1.0, 0.0).is_err());
    }

    #[test]
    fn k_series_survives_large_z() {
        let k = k_series(12.0, 1e-15).unwrap();
        assert!(k.is_finite() && k < 1.0 && k > 0.99);
    }
}
