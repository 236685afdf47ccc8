//! Composite Hilbert spaces of qubits and truncated bosonic modes.
//!
//! Amplitudes are stored row-major over the factor list: the first factor is
//! the most significant digit of the flat index, so `tensor` agrees with the
//! Kronecker product and a two-qubit register reads `↑↑, ↑↓, ↓↑, ↓↓`.
//! Qubit basis index 0 is `|↑⟩`, index 1 is `|↓⟩`.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{HesError, Result};

/// Default bound on the probability mass dropped when truncating a series.
pub const DEFAULT_TRUNCATION_TOL: f64 = 1e-12;

/// Tail tolerance used when the mode dimension is picked automatically.
pub const ADAPTIVE_TAIL_TOL: f64 = 1e-14;

const NORM_TOL: f64 = 1e-12;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Factor {
    Qubit,
    Mode(usize),
}

impl Factor {
    pub fn dim(self) -> usize {
        match self {
            Factor::Qubit => 2,
            Factor::Mode(d) => d,
        }
    }

    pub fn is_qubit(self) -> bool {
        matches!(self, Factor::Qubit)
    }

    pub fn is_mode(self) -> bool {
        matches!(self, Factor::Mode(_))
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Qubit => write!(f, "qubit"),
            Factor::Mode(d) => write!(f, "mode({d})"),
        }
    }
}

/// Ordered list of tensor factors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpaceDescriptor {
    factors: Vec<Factor>,
}

impl SpaceDescriptor {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(HesError::InvalidParameter(
                "a space needs at least one factor".into(),
            ));
        }
        for f in &factors {
            if let Factor::Mode(d) = *f {
                check_mode_dim(d)?;
            }
        }
        Ok(Self { factors })
    }

    pub fn qubit() -> Self {
        Self {
            factors: vec![Factor::Qubit],
        }
    }

    pub fn mode(dim: usize) -> Result<Self> {
        Self::new(vec![Factor::Mode(dim)])
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factor(&self, index: usize) -> Result<Factor> {
        self.factors
            .get(index)
            .copied()
            .ok_or_else(|| HesError::FactorIndex {
                index,
                space: self.clone(),
            })
    }

    pub fn dims(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.dim()).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.factors.iter().map(|f| f.dim()).product()
    }

    /// Space of `self ⊗ other`.
    pub fn product(&self, other: &SpaceDescriptor) -> SpaceDescriptor {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        SpaceDescriptor { factors }
    }

    /// Sub-space made of the listed factors, in the listed order.
    pub fn select(&self, indices: &[usize]) -> Result<SpaceDescriptor> {
        let factors = indices
            .iter()
            .map(|&i| self.factor(i))
            .collect::<Result<Vec<_>>>()?;
        SpaceDescriptor::new(factors)
    }

    fn complement(&self, indices: &[usize]) -> Vec<usize> {
        (0..self.len()).filter(|i| !indices.contains(i)).collect()
    }

    pub(crate) fn expect_qubit(&self, index: usize) -> Result<()> {
        if self.factor(index)?.is_qubit() {
            Ok(())
        } else {
            Err(HesError::FactorKind {
                index,
                space: self.clone(),
                expected: "qubit",
            })
        }
    }

    pub(crate) fn expect_mode(&self, index: usize) -> Result<usize> {
        match self.factor(index)? {
            Factor::Mode(d) => Ok(d),
            Factor::Qubit => Err(HesError::FactorKind {
                index,
                space: self.clone(),
                expected: "mode",
            }),
        }
    }
}

impl fmt::Display for SpaceDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, factor) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " ⊗ ")?;
            }
            write!(f, "{factor}")?;
        }
        Ok(())
    }
}

fn check_mode_dim(dim: usize) -> Result<()> {
    if dim < 2 || !dim.is_multiple_of(2) {
        Err(HesError::InvalidModeDim(dim))
    } else {
        Ok(())
    }
}

fn check_same_space(a: &SpaceDescriptor, b: &SpaceDescriptor) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(HesError::SpaceMismatch {
            left: a.clone(),
            right: b.clone(),
        })
    }
}

/// Maps every flat index of a space onto a (row, column) pair, where the row
/// enumerates the digits of `side` (in the given order) and the column the
/// digits of the remaining factors (in space order).
struct Reshape {
    rows: usize,
    cols: usize,
    pairs: Vec<(usize, usize)>,
}

impl Reshape {
    fn new(space: &SpaceDescriptor, side: &[usize]) -> Result<Self> {
        for (k, &i) in side.iter().enumerate() {
            space.factor(i)?;
            if side[..k].contains(&i) {
                return Err(HesError::InvalidParameter(format!(
                    "factor {i} listed twice"
                )));
            }
        }
        let dims = space.dims();
        let rest = space.complement(side);
        let rows: usize = side.iter().map(|&i| dims[i]).product();
        let cols: usize = rest.iter().map(|&i| dims[i]).product();

        let n = dims.len();
        let mut digits = vec![0usize; n];
        let mut pairs = Vec::with_capacity(rows * cols);
        for _ in 0..rows * cols {
            let row = side.iter().fold(0, |acc, &i| acc * dims[i] + digits[i]);
            let col = rest.iter().fold(0, |acc, &i| acc * dims[i] + digits[i]);
            pairs.push((row, col));
            // odometer increment, last factor fastest
            for k in (0..n).rev() {
                digits[k] += 1;
                if digits[k] < dims[k] {
                    break;
                }
                digits[k] = 0;
            }
        }
        Ok(Self { rows, cols, pairs })
    }

    fn split(&self, amps: &DVector<Complex64>) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.rows, self.cols);
        for (flat, &(r, c)) in self.pairs.iter().enumerate() {
            m[(r, c)] = amps[flat];
        }
        m
    }

    fn merge(&self, m: &DMatrix<Complex64>) -> DVector<Complex64> {
        DVector::from_iterator(self.pairs.len(), self.pairs.iter().map(|&(r, c)| m[(r, c)]))
    }
}

/// Pure state over a composite space, normalized to unit length.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    space: SpaceDescriptor,
    amps: DVector<Complex64>,
    truncation_residual: f64,
}

impl StateVector {
    /// Normalizes `amps` and wraps them.
    pub fn new(space: SpaceDescriptor, amps: DVector<Complex64>) -> Result<Self> {
        let expected = space.total_dim();
        if amps.len() != expected {
            return Err(HesError::AmplitudeLength {
                space,
                expected,
                got: amps.len(),
            });
        }
        let norm = amps.norm();
        if norm.is_nan() || norm <= 1e-300 || !norm.is_finite() {
            return Err(HesError::ZeroNorm);
        }
        Ok(Self {
            space,
            amps: amps / Complex64::from(norm),
            truncation_residual: 0.0,
        })
    }

    pub fn basis(space: SpaceDescriptor, index: usize) -> Result<Self> {
        let n = space.total_dim();
        if index >= n {
            return Err(HesError::InvalidParameter(format!(
                "basis index {index} out of range for {space}"
            )));
        }
        let mut amps = DVector::zeros(n);
        amps[index] = ONE;
        Self::new(space, amps)
    }

    pub fn up() -> Self {
        Self::basis(SpaceDescriptor::qubit(), 0).expect("qubit basis")
    }

    pub fn down() -> Self {
        Self::basis(SpaceDescriptor::qubit(), 1).expect("qubit basis")
    }

    /// Fock state `|n⟩` of a mode truncated at `dim`.
    pub fn fock(dim: usize, n: usize) -> Result<Self> {
        Self::basis(SpaceDescriptor::mode(dim)?, n)
    }

    /// `α|↑⟩ + β|↓⟩`; the amplitudes must already be normalized.
    pub fn qubit(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let norm_sq = alpha.norm_sqr() + beta.norm_sqr();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(HesError::NotNormalized(norm_sq));
        }
        Self::new(
            SpaceDescriptor::qubit(),
            DVector::from_vec(vec![alpha, beta]),
        )
    }

    /// Normalized linear combination of states sharing one space.
    pub fn superpose(terms: &[(Complex64, &StateVector)]) -> Result<Self> {
        let (_, first) = terms.first().ok_or_else(|| {
            HesError::InvalidParameter("superposition needs at least one term".into())
        })?;
        let mut amps = DVector::zeros(first.dim());
        let mut residual: f64 = 0.0;
        for (c, s) in terms {
            check_same_space(&first.space, &s.space)?;
            amps += &s.amps * *c;
            residual = residual.max(s.truncation_residual);
        }
        let mut out = Self::new(first.space.clone(), amps)?;
        out.truncation_residual = residual;
        Ok(out)
    }

    pub fn space(&self) -> &SpaceDescriptor {
        &self.space
    }

    pub fn amps(&self) -> &DVector<Complex64> {
        &self.amps
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    pub fn truncation_residual(&self) -> f64 {
        self.truncation_residual
    }

    pub fn with_truncation_residual(mut self, residual: f64) -> Self {
        self.truncation_residual = residual;
        self
    }

    /// Reorders the factors: factor `k` of the result is factor `order[k]` of `self`.
    pub fn permute(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.space.len() {
            return Err(HesError::InvalidParameter(format!(
                "permutation of length {} for a {}-factor space",
                order.len(),
                self.space.len()
            )));
        }
        let reshape = Reshape::new(&self.space, order)?;
        let column = reshape.split(&self.amps).column(0).into_owned();
        Ok(Self {
            space: self.space.select(order)?,
            amps: column,
            truncation_residual: self.truncation_residual,
        })
    }

    /// Amplitudes arranged as a matrix: rows over `side` (given order), columns
    /// over the remaining factors (space order).
    pub fn bipartite_matrix(&self, side: &[usize]) -> Result<DMatrix<Complex64>> {
        Ok(Reshape::new(&self.space, side)?.split(&self.amps))
    }

    /// Contracts the factors in `side` with `⟨bra|` and returns the
    /// unnormalized amplitudes on the remaining factors.
    pub(crate) fn contract(
        &self,
        side: &[usize],
        bra: &StateVector,
    ) -> Result<(SpaceDescriptor, DVector<Complex64>)> {
        let side_space = self.space.select(side)?;
        check_same_space(&side_space, &bra.space)?;
        let rest = self.space.complement(side);
        if rest.is_empty() {
            return Err(HesError::InvalidParameter(
                "contraction would leave no factors".into(),
            ));
        }
        let m = self.bipartite_matrix(side)?;
        let out = m.transpose() * bra.amps.map(|c| c.conj());
        Ok((self.space.select(&rest)?, out))
    }
}

/// Dense operator on a composite space.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    space: SpaceDescriptor,
    matrix: DMatrix<Complex64>,
}

impl Operator {
    pub fn new(space: SpaceDescriptor, matrix: DMatrix<Complex64>) -> Result<Self> {
        let n = space.total_dim();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(HesError::InvalidParameter(format!(
                "{}x{} matrix on space {space} of dimension {n}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self { space, matrix })
    }

    pub fn identity(space: SpaceDescriptor) -> Self {
        let n = space.total_dim();
        Self {
            space,
            matrix: DMatrix::identity(n, n),
        }
    }

    pub fn space(&self) -> &SpaceDescriptor {
        &self.space
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn adjoint(&self) -> Self {
        Self {
            space: self.space.clone(),
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            space: self.space.clone(),
            matrix: &self.matrix * c,
        }
    }

    pub fn add(&self, other: &Operator) -> Result<Self> {
        check_same_space(&self.space, &other.space)?;
        Ok(Self {
            space: self.space.clone(),
            matrix: &self.matrix + &other.matrix,
        })
    }

    pub fn sub(&self, other: &Operator) -> Result<Self> {
        check_same_space(&self.space, &other.space)?;
        Ok(Self {
            space: self.space.clone(),
            matrix: &self.matrix - &other.matrix,
        })
    }

    /// Operator product `self · other`.
    pub fn compose(&self, other: &Operator) -> Result<Self> {
        check_same_space(&self.space, &other.space)?;
        Ok(Self {
            space: self.space.clone(),
            matrix: &self.matrix * &other.matrix,
        })
    }

    pub fn commutator(&self, other: &Operator) -> Result<Self> {
        self.compose(other)?.sub(&other.compose(self)?)
    }

    /// Largest elementwise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Operator) -> Result<f64> {
        check_same_space(&self.space, &other.space)?;
        Ok((&self.matrix - &other.matrix)
            .iter()
            .fold(0.0, |m, c| m.max(c.norm())))
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let n = self.matrix.nrows();
        (0..n).all(|i| {
            (0..n).all(|j| (self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm() <= tol)
        })
    }

    /// `self |state⟩` for an operator on the state's full space.
    pub fn act(&self, state: &StateVector) -> Result<StateVector> {
        check_same_space(&self.space, &state.space)?;
        let out = StateVector::new(self.space.clone(), &self.matrix * &state.amps)?;
        Ok(out.with_truncation_residual(state.truncation_residual))
    }

    /// `⟨state|self|state⟩`.
    pub fn expectation(&self, state: &StateVector) -> Result<Complex64> {
        check_same_space(&self.space, &state.space)?;
        Ok(state.amps.dotc(&(&self.matrix * &state.amps)))
    }

    /// Eigenvalues of a Hermitian operator, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self
            .matrix
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

/// Density operator over a (usually reduced) space.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    space: SpaceDescriptor,
    matrix: DMatrix<Complex64>,
}

impl DensityMatrix {
    const TOL: f64 = 1e-12;

    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(space: SpaceDescriptor, matrix: DMatrix<Complex64>) -> Result<Self> {
        let op = Operator::new(space, matrix)?;
        if !op.is_hermitian(Self::TOL) {
            return Err(HesError::InvalidDensity("not Hermitian".into()));
        }
        let rho = Self {
            space: op.space,
            matrix: op.matrix,
        };
        let tr = rho.trace();
        if (tr - 1.0).abs() > Self::TOL {
            return Err(HesError::InvalidDensity(format!("trace {tr}")));
        }
        if let Some(min) = rho.eigenvalues().last() {
            if *min < -Self::TOL {
                return Err(HesError::InvalidDensity(format!(
                    "negative eigenvalue {min:e}"
                )));
            }
        }
        Ok(rho)
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn pure(state: &StateVector) -> Self {
        Self {
            space: state.space.clone(),
            matrix: &state.amps * state.amps.adjoint(),
        }
    }

    pub fn space(&self) -> &SpaceDescriptor {
        &self.space
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// Eigenvalues, descending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self
            .matrix
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        ev
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix) -> Result<f64> {
        check_same_space(&self.space, &other.space)?;
        Ok((&self.matrix - &other.matrix)
            .iter()
            .fold(0.0, |m, c| m.max(c.norm())))
    }
}

// ---------------------------------------------------------------------------
// composite-space algebra

pub fn tensor(a: &StateVector, b: &StateVector) -> StateVector {
    StateVector {
        space: a.space.product(&b.space),
        amps: a.amps.kronecker(&b.amps),
        truncation_residual: a.truncation_residual.max(b.truncation_residual),
    }
}

pub fn tensor_op(a: &Operator, b: &Operator) -> Operator {
    Operator {
        space: a.space.product(&b.space),
        matrix: a.matrix.kronecker(&b.matrix),
    }
}

/// Applies a single-factor operator to factor `factor_index`, identity elsewhere.
///
/// The result is not renormalized: for non-unitary `op` (e.g. `s₊`) the norm
/// of the returned vector tells how much weight survived.
pub fn apply(op: &Operator, state: &StateVector, factor_index: usize) -> Result<StateVector> {
    let target = state.space.select(&[factor_index])?;
    check_same_space(&op.space, &target)?;
    let reshape = Reshape::new(&state.space, &[factor_index])?;
    let m = reshape.split(&state.amps);
    Ok(StateVector {
        space: state.space.clone(),
        amps: reshape.merge(&(&op.matrix * m)),
        truncation_residual: state.truncation_residual,
    })
}

/// `⟨a|b⟩`.
pub fn inner(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    check_same_space(&a.space, &b.space)?;
    Ok(a.amps.dotc(&b.amps))
}

/// `|⟨target|state⟩|²`, blind to global phase.
pub fn fidelity(target: &StateVector, state: &StateVector) -> Result<f64> {
    Ok(inner(target, state)?.norm_sqr())
}

/// Reduced density matrix on the `keep` factors (kept in space order).
pub fn partial_trace(state: &StateVector, keep: &[usize]) -> Result<DensityMatrix> {
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.is_empty() || keep.len() >= state.space.len() {
        return Err(HesError::InvalidParameter(format!(
            "keep set {keep:?} must be a nonempty proper subset of {} factors",
            state.space.len()
        )));
    }
    let m = state.bipartite_matrix(&keep)?;
    Ok(DensityMatrix {
        space: state.space.select(&keep)?,
        matrix: &m * m.adjoint(),
    })
}

// ---------------------------------------------------------------------------
// bosonic states

/// `ln n!` for every `n < len`.
pub(crate) fn ln_factorials(len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    let mut acc = 0.0;
    for n in 0..len {
        if n > 1 {
            acc += (n as f64).ln();
        }
        out.push(acc);
    }
    out
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

fn check_z(z: f64) -> Result<()> {
    if !z.is_finite() || z < 0.0 {
        Err(HesError::InvalidParameter(format!(
            "z must be finite and nonnegative, got {z}"
        )))
    } else {
        Ok(())
    }
}

/// Sum of `exp(log_term(n))` over `n = start, start + step, …` until terms
/// are past their peak and negligible.
fn log_tail_sum(start: usize, step: usize, log_term: impl Fn(usize) -> f64, peak: f64) -> f64 {
    let mut sum = 0.0;
    let mut n = start;
    loop {
        let t = log_term(n).exp();
        sum += t;
        if (n as f64) > peak && (t <= sum * 1e-18 || t < 1e-300) {
            break;
        }
        n += step;
        if n > start + 100_000 {
            break;
        }
    }
    sum
}

/// Probability `P(N ≥ dim)` of a Poisson distribution with mean `z²`.
pub fn poisson_tail(z: f64, dim: usize) -> f64 {
    if z == 0.0 {
        return if dim == 0 { 1.0 } else { 0.0 };
    }
    let mean = z * z;
    let ln_mean = mean.ln();
    let mut lnf = ln_factorial(dim);
    // terms are generated incrementally so ln n! is not recomputed from scratch
    let mut sum = 0.0;
    let mut n = dim;
    loop {
        let t = (n as f64 * ln_mean - mean - lnf).exp();
        sum += t;
        if (n as f64) > mean && (t <= sum * 1e-18 || t < 1e-300) {
            break;
        }
        n += 1;
        lnf += (n as f64).ln();
    }
    sum
}

/// Smallest even mode dimension (at least 4) whose Poisson tail at mean
/// `z²` is below `tol`.
pub fn mode_dim_for(z: f64, tol: f64) -> Result<usize> {
    check_z(z)?;
    if !(tol > 0.0 && tol < 1.0) {
        return Err(HesError::InvalidParameter(format!(
            "tolerance must lie in (0, 1), got {tol}"
        )));
    }
    let mut dim = 4;
    while poisson_tail(z, dim) >= tol {
        dim += 2;
    }
    Ok(dim)
}

/// Mode dimension used when none is given explicitly.
pub fn adaptive_dim(z: f64) -> Result<usize> {
    mode_dim_for(z, ADAPTIVE_TAIL_TOL)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    fn offset(self) -> usize {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn sign(self) -> i8 {
        match self {
            Parity::Even => 1,
            Parity::Odd => -1,
        }
    }
}

/// `ln cosh x` (even) or `ln sinh x` (odd) for `x > 0`, overflow-safe.
fn ln_cat_norm(x: f64, parity: Parity) -> f64 {
    if x > 20.0 {
        let e = (-2.0 * x).exp();
        let corr = match parity {
            Parity::Even => e.ln_1p(),
            Parity::Odd => (-e).ln_1p(),
        };
        x + corr - std::f64::consts::LN_2
    } else {
        match parity {
            Parity::Even => x.cosh().ln(),
            Parity::Odd => x.sinh().ln(),
        }
    }
}

/// Probability mass of the even/odd coherent state lying at `n ≥ dim`.
pub fn cat_truncation_residual(z: f64, dim: usize, parity: Parity) -> Result<f64> {
    check_z(z)?;
    if z == 0.0 {
        return Ok(if dim > parity.offset() { 0.0 } else { 1.0 });
    }
    let x = z * z;
    let ln_norm = ln_cat_norm(x, parity);
    let ln_x = x.ln();
    let first = if dim % 2 == parity.offset() {
        dim
    } else {
        dim + 1
    };
    Ok(log_tail_sum(
        first,
        2,
        |n| n as f64 * ln_x - ln_factorial(n) - ln_norm,
        x,
    ))
}

fn cat_state(z: f64, dim: usize, parity: Parity, tol: f64) -> Result<StateVector> {
    check_z(z)?;
    check_mode_dim(dim)?;
    let space = SpaceDescriptor::mode(dim)?;
    if z == 0.0 {
        // z → 0 limits: |0⟩ for even, |1⟩ for odd
        return StateVector::basis(space, parity.offset());
    }
    let residual = cat_truncation_residual(z, dim, parity)?;
    if residual >= tol {
        return Err(HesError::Truncation { residual, tol, dim });
    }
    let x = z * z;
    let ln_norm = ln_cat_norm(x, parity);
    let ln_z = z.ln();
    let lnf = ln_factorials(dim);
    let mut amps = DVector::zeros(dim);
    for n in (parity.offset()..dim).step_by(2) {
        let ln_amp = n as f64 * ln_z - 0.5 * lnf[n] - 0.5 * ln_norm;
        amps[n] = Complex64::new(ln_amp.exp(), 0.0);
    }
    Ok(StateVector::new(space, amps)?.with_truncation_residual(residual))
}

/// Even coherent state `|z⟩_e` truncated at `dim` with the default tolerance.
pub fn even_coherent(z: f64, dim: usize) -> Result<StateVector> {
    cat_state(z, dim, Parity::Even, DEFAULT_TRUNCATION_TOL)
}

/// Odd coherent state `|z⟩_o`; `z = 0` gives `|1⟩`.
pub fn odd_coherent(z: f64, dim: usize) -> Result<StateVector> {
    cat_state(z, dim, Parity::Odd, DEFAULT_TRUNCATION_TOL)
}

pub fn even_coherent_with_tol(z: f64, dim: usize, tol: f64) -> Result<StateVector> {
    cat_state(z, dim, Parity::Even, tol)
}

pub fn odd_coherent_with_tol(z: f64, dim: usize, tol: f64) -> Result<StateVector> {
    cat_state(z, dim, Parity::Odd, tol)
}
