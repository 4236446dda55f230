use num_complex::Complex64;

use super::{PauliLabel, QuantumError};
use crate::linalg::{inner, CMatrix};

pub const NORM_TOL: f64 = 1e-12;
pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
/// Eigenvalues in `[-PSD_TOL, 0)` count as numerical drift and are clamped.
pub const PSD_TOL: f64 = 1e-10;

fn qubits_for_dim(dim: usize) -> Result<usize, QuantumError> {
    match dim {
        2 => Ok(1),
        4 => Ok(2),
        8 => Ok(3),
        16 => Ok(4),
        _ => Err(QuantumError::InvalidDimension(dim)),
    }
}

/// Matrix of a single-qubit operator acting on `qubit` of an `n`-qubit register.
/// Qubit 0 is the most significant tensor factor.
pub fn embed_single(op: &CMatrix, qubit: usize, n: usize) -> CMatrix {
    let mut full = CMatrix::identity(1);
    for k in 0..n {
        let factor = if k == qubit {
            op.clone()
        } else {
            CMatrix::identity(2)
        };
        full = full.kron(&factor);
    }
    full
}

/// Normalized state vector on one to four qubits.
#[derive(Clone, Debug)]
pub struct PureState {
    amps: Vec<Complex64>,
}

impl PureState {
    pub fn new(amps: Vec<Complex64>) -> Result<Self, QuantumError> {
        qubits_for_dim(amps.len())?;
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(QuantumError::NonFinite);
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(QuantumError::NotNormalized(norm));
        }
        Ok(Self { amps })
    }

    pub(crate) fn from_amplitudes_unchecked(amps: Vec<Complex64>) -> Self {
        Self { amps }
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn qubits(&self) -> usize {
        self.amps.len().trailing_zeros() as usize
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `|<self|other>|^2`
    pub fn fidelity(&self, other: &PureState) -> f64 {
        inner(&self.amps, &other.amps).norm_sqr()
    }

    /// Equality up to global phase.
    pub fn equivalent(&self, other: &PureState) -> bool {
        self.dim() == other.dim() && self.fidelity(other) >= 1.0 - NORM_TOL
    }

    pub fn tensor(&self, other: &PureState) -> PureState {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        PureState { amps }
    }

    pub fn apply_unitary(&self, u: &CMatrix) -> PureState {
        PureState {
            amps: u.apply(&self.amps),
        }
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::from_matrix_unchecked(CMatrix::outer(&self.amps, &self.amps))
    }
}

/// Hermitian, unit-trace, positive semidefinite matrix on one to four qubits.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    m: CMatrix,
}

impl DensityMatrix {
    pub fn new(m: CMatrix) -> Result<Self, QuantumError> {
        qubits_for_dim(m.dim())?;
        if m.as_slice().iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(QuantumError::NonFinite);
        }
        let herm = m.hermiticity_defect();
        if herm > HERMITIAN_TOL {
            return Err(QuantumError::NotHermitian(herm));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(QuantumError::NotUnitTrace(tr.re));
        }
        let min = m.hermitian_eigenvalues()[0];
        if min < -PSD_TOL {
            return Err(QuantumError::NotPositive(min));
        }
        Ok(Self { m })
    }

    pub(crate) fn from_matrix_unchecked(m: CMatrix) -> Self {
        Self { m }
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self, QuantumError> {
        qubits_for_dim(dim)?;
        Ok(Self {
            m: CMatrix::identity(dim).scale_real(1.0 / dim as f64),
        })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    pub fn qubits(&self) -> usize {
        self.m.dim().trailing_zeros() as usize
    }

    pub fn trace(&self) -> f64 {
        self.m.trace().re
    }

    /// Eigenvalues with drift in `[-PSD_TOL, 0)` clamped to zero.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.m
            .hermitian_eigenvalues()
            .into_iter()
            .map(|v| if v < 0.0 && v >= -PSD_TOL { 0.0 } else { v })
            .collect()
    }

    /// `<v|ρ|v>` for a vector of matching dimension.
    pub fn expectation_vec(&self, v: &[Complex64]) -> f64 {
        inner(v, &self.m.apply(v)).re
    }

    /// `Tr(ρ P)` for a Hermitian operator `P`.
    pub fn expectation(&self, op: &CMatrix) -> f64 {
        (&self.m * op).trace().re
    }

    /// `U ρ U†` for a unitary of matching dimension.
    pub fn evolve(&self, u: &CMatrix) -> DensityMatrix {
        DensityMatrix {
            m: self.m.conjugate_by(u),
        }
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix {
            m: self.m.kron(&other.m),
        }
    }

    /// Convex combination `Σ w_i ρ_i`. Weights must be nonnegative and sum to one.
    pub fn mixture(parts: &[(f64, DensityMatrix)]) -> Result<DensityMatrix, QuantumError> {
        let first = parts.first().ok_or(QuantumError::EmptyEnsemble)?;
        let dim = first.1.dim();
        let mut total = 0.0;
        let mut m = CMatrix::zeros(dim);
        for (w, rho) in parts {
            if rho.dim() != dim {
                return Err(QuantumError::DimensionMismatch(dim, rho.dim()));
            }
            if !(*w >= 0.0) {
                return Err(QuantumError::InvalidPriors);
            }
            total += w;
            m = &m + &rho.m.scale_real(*w);
        }
        if (total - 1.0).abs() > TRACE_TOL {
            return Err(QuantumError::InvalidPriors);
        }
        Ok(DensityMatrix { m })
    }

    /// Post-measurement state `P ρ P / Tr(P ρ)` together with its probability.
    /// Returns `None` when the outcome has probability below `1e-15`.
    pub fn project(&self, projector: &CMatrix) -> (f64, Option<DensityMatrix>) {
        let pm = &(projector * &self.m) * projector;
        let prob = pm.trace().re;
        if prob < 1e-15 {
            return (prob.max(0.0), None);
        }
        (
            prob,
            Some(DensityMatrix {
                m: pm.scale_real(1.0 / prob),
            }),
        )
    }

    /// Validates the invariants, returning the first violation.
    pub fn validate(&self) -> Result<(), QuantumError> {
        DensityMatrix::new(self.m.clone()).map(|_| ())
    }
}

/// Single-qubit Pauli on one tensor factor of a state.
pub trait ApplyPauli: Sized {
    fn apply_pauli(&self, op: PauliLabel, qubit: usize) -> Result<Self, QuantumError>;
}

impl ApplyPauli for PureState {
    fn apply_pauli(&self, op: PauliLabel, qubit: usize) -> Result<Self, QuantumError> {
        let n = self.qubits();
        if qubit >= n {
            return Err(QuantumError::QubitOutOfRange { qubit, qubits: n });
        }
        Ok(self.apply_unitary(&embed_single(&op.matrix(), qubit, n)))
    }
}

impl ApplyPauli for DensityMatrix {
    fn apply_pauli(&self, op: PauliLabel, qubit: usize) -> Result<Self, QuantumError> {
        let n = self.qubits();
        if qubit >= n {
            return Err(QuantumError::QubitOutOfRange { qubit, qubits: n });
        }
        Ok(self.evolve(&embed_single(&op.matrix(), qubit, n)))
    }
}

pub fn apply_pauli<S: ApplyPauli>(state: &S, op: PauliLabel, qubit: usize) -> Result<S, QuantumError> {
    state.apply_pauli(op, qubit)
}

/// Reduced state on the qubits listed in `keep` (ascending, distinct, non-empty).
pub fn partial_trace(dm: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix, QuantumError> {
    let n = dm.qubits();
    if keep.is_empty()
        || keep.windows(2).any(|w| w[0] >= w[1])
        || keep.iter().any(|&q| q >= n)
    {
        return Err(QuantumError::InvalidSelector(keep.to_vec()));
    }
    let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
    let kd = 1usize << keep.len();
    let td = 1usize << traced.len();

    // Full index from (kept bits, traced bits); qubit 0 is the most significant bit.
    let compose = |k: usize, t: usize| -> usize {
        let mut idx = 0usize;
        for (pos, &q) in keep.iter().enumerate() {
            let bit = (k >> (keep.len() - 1 - pos)) & 1;
            idx |= bit << (n - 1 - q);
        }
        for (pos, &q) in traced.iter().enumerate() {
            let bit = (t >> (traced.len() - 1 - pos)) & 1;
            idx |= bit << (n - 1 - q);
        }
        idx
    };

    let m = dm.matrix();
    let mut out = CMatrix::zeros(kd);
    for i in 0..kd {
        for j in 0..kd {
            let mut acc = Complex64::new(0.0, 0.0);
            for t in 0..td {
                acc += m[(compose(i, t), compose(j, t))];
            }
            out[(i, j)] = acc;
        }
    }
    Ok(DensityMatrix::from_matrix_unchecked(out))
}
