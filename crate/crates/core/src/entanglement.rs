//! Entanglement of pure bipartite states.

use serde::{Deserialize, Serialize};

use crate::error::{HesError, Result};
use crate::fock::{partial_trace, DensityMatrix, StateVector};

/// Eigenvalues below this are dropped before taking logarithms.
const EIGEN_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    side_a: Vec<usize>,
    side_b: Vec<usize>,
}

impl Bipartition {
    /// `side_a` against the complement within `n_factors`.
    pub fn new(side_a: &[usize], n_factors: usize) -> Result<Self> {
        let mut a = side_a.to_vec();
        a.sort_unstable();
        a.dedup();
        if a.len() != side_a.len() {
            return Err(HesError::InvalidCut(format!(
                "repeated factor in {side_a:?}"
            )));
        }
        if let Some(&i) = a.iter().find(|&&i| i >= n_factors) {
            return Err(HesError::InvalidCut(format!(
                "factor {i} out of range for {n_factors} factors"
            )));
        }
        let b: Vec<usize> = (0..n_factors).filter(|i| !a.contains(i)).collect();
        if a.is_empty() || b.is_empty() {
            return Err(HesError::InvalidCut(format!(
                "both sides must be nonempty, got {a:?} | {b:?}"
            )));
        }
        Ok(Self {
            side_a: a,
            side_b: b,
        })
    }

    /// First factor against the rest.
    pub fn first(n_factors: usize) -> Result<Self> {
        Self::new(&[0], n_factors)
    }

    pub fn side_a(&self) -> &[usize] {
        &self.side_a
    }

    pub fn side_b(&self) -> &[usize] {
        &self.side_b
    }

    pub fn swapped(&self) -> Self {
        Self {
            side_a: self.side_b.clone(),
            side_b: self.side_a.clone(),
        }
    }

    fn check(&self, state: &StateVector) -> Result<()> {
        let n = state.space().len();
        if self.side_a.len() + self.side_b.len() != n {
            return Err(HesError::InvalidCut(format!(
                "cut covers {} factors, state has {n}",
                self.side_a.len() + self.side_b.len()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchmidtSpectrum {
    /// Descending, nonnegative.
    pub coefficients: Vec<f64>,
}

impl SchmidtSpectrum {
    pub fn rank(&self, tol: f64) -> usize {
        self.coefficients.iter().filter(|&&c| c > tol).count()
    }

    pub fn entropy(&self) -> f64 {
        entropy_bits(self.coefficients.iter().map(|c| c * c))
    }
}

pub fn schmidt_coefficients(state: &StateVector, cut: &Bipartition) -> Result<SchmidtSpectrum> {
    cut.check(state)?;
    let m = state.bipartite_matrix(cut.side_a())?;
    let mut coefficients: Vec<f64> = m.singular_values().iter().copied().collect();
    coefficients.sort_by(|a, b| b.total_cmp(a));
    Ok(SchmidtSpectrum { coefficients })
}

/// Von Neumann entropy of either reduced state, in bits.
pub fn entanglement_entropy(state: &StateVector, cut: &Bipartition) -> Result<f64> {
    Ok(schmidt_coefficients(state, cut)?.entropy())
}

/// Same quantity computed from the eigenvalues of `tr_B |ψ⟩⟨ψ|`.
pub fn entropy_from_reduced(state: &StateVector, cut: &Bipartition) -> Result<f64> {
    cut.check(state)?;
    let rho = partial_trace(state, cut.side_a())?;
    Ok(von_neumann_entropy(&rho))
}

pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    entropy_bits(rho.eigenvalues())
}

fn entropy_bits(probs: impl IntoIterator<Item = f64>) -> f64 {
    let s: f64 = probs
        .into_iter()
        .filter(|&p| p > EIGEN_FLOOR)
        .map(|p| -p * p.log2())
        .sum();
    // −0.0 for product states reads badly in reports
    s.max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{tensor, StateVector};

    #[test]
    fn product_state_has_zero_entropy() {
        let s = tensor(&StateVector::up(), &StateVector::fock(4, 2).unwrap());
        let cut = Bipartition::first(2).unwrap();
        let spec = schmidt_coefficients(&s, &cut).unwrap();
        assert!((spec.coefficients[0] - 1.0).abs() < 1e-15);
        assert_eq!(spec.rank(1e-12), 1);
        assert_eq!(entanglement_entropy(&s, &cut).unwrap(), 0.0);
    }

    #[test]
    fn invalid_cuts() {
        assert!(Bipartition::new(&[], 2).is_err());
        assert!(Bipartition::new(&[0, 1], 2).is_err());
        assert!(Bipartition::new(&[3], 2).is_err());
        assert!(Bipartition::new(&[0, 0], 3).is_err());
        let s = tensor(&StateVector::up(), &StateVector::down());
        let cut = Bipartition::new(&[0], 3).unwrap();
        assert!(entanglement_entropy(&s, &cut).is_err());
    }
}
