//! Simulation and analysis of hybrid entangled states: a spin qubit
//! entangled with a bosonic mode through even/odd coherent states.
//!
//! - [`fock`]: composite qubit/mode spaces, states, operators, partial traces
//! - [`pseudospin`]: parity pseudospin operators and the overlap `K(z)`
//! - [`bellchsh`]: CHSH Bell operator, closed-form and numerical optima
//! - [`entanglement`]: Schmidt spectra and entanglement entropy
//! - [`protocols`]: Bell bases, teleportation and entanglement swapping

pub mod bellchsh;
pub mod entanglement;
pub mod error;
pub mod fock;
pub mod labels;
pub mod protocols;
pub mod pseudospin;
pub mod simplex;

pub use error::{HesError, Result};
pub use fock::{DensityMatrix, Factor, Operator, SpaceDescriptor, StateVector};
pub use labels::{Correction, HesLabel, ParityBellLabel, SpinBellLabel};
pub use num_complex::Complex64;
