//! Exact state algebra on up to four qubits.
//!
//! Conventions: computational basis `|00⟩,|01⟩,|10⟩,|11⟩` with qubit 0 the
//! most significant factor; Bell states ordered ψ⁻, ψ⁺, φ⁻, φ⁺ so that the
//! δ-vector of a Bell-diagonal state reads off in that order.

mod bell;
mod pauli;
mod state;

use thiserror::Error;

pub use bell::{
    bell_measure, bell_state, pauli_twirl, product_decompose, purify_bell_diagonal, BellDiagonal,
    BellLabel, DecompositionRow, SinglePhoton, PRODUCT_DECOMPOSITIONS,
};
pub use pauli::{Basis, PauliLabel, Symbol};
pub use state::{
    apply_pauli, embed_single, partial_trace, ApplyPauli, DensityMatrix, PureState, HERMITIAN_TOL,
    NORM_TOL, PSD_TOL, TRACE_TOL,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuantumError {
    #[error("dimension {0} is not 2, 4, 8 or 16")]
    InvalidDimension(usize),
    #[error("non-finite amplitude or matrix entry")]
    NonFinite,
    #[error("state not normalized (squared norm {0})")]
    NotNormalized(f64),
    #[error("matrix not Hermitian (defect {0:e})")]
    NotHermitian(f64),
    #[error("trace {0} is not 1")]
    NotUnitTrace(f64),
    #[error("negative eigenvalue {0:e}")]
    NotPositive(f64),
    #[error("qubit {qubit} out of range for {qubits}-qubit state")]
    QubitOutOfRange { qubit: usize, qubits: usize },
    #[error("invalid subsystem selector {0:?}")]
    InvalidSelector(Vec<usize>),
    #[error("dimension mismatch: expected {0}, got {1}")]
    DimensionMismatch(usize, usize),
    #[error("priors must be nonnegative, match the ensemble length and sum to 1")]
    InvalidPriors,
    #[error("empty ensemble")]
    EmptyEnsemble,
    #[error("invalid Bell-diagonal weights {0:?}")]
    InvalidBellDiagonal([f64; 4]),
}

/// `-Σ λ log₂ λ` over the spectrum, in bits.
pub fn von_neumann_entropy(dm: &DensityMatrix) -> f64 {
    dm.eigenvalues()
        .into_iter()
        .filter(|&l| l > 0.0)
        .map(|l| -l * l.log2())
        .sum::<f64>()
        .max(0.0)
}

/// Holevo quantity `S(Σ pᵢρᵢ) − Σ pᵢ S(ρᵢ)` of an ensemble.
pub fn holevo_bound(states: &[DensityMatrix], priors: &[f64]) -> Result<f64, QuantumError> {
    if states.is_empty() {
        return Err(QuantumError::EmptyEnsemble);
    }
    if priors.len() != states.len() {
        return Err(QuantumError::InvalidPriors);
    }
    let parts: Vec<(f64, DensityMatrix)> = priors.iter().copied().zip(states.iter().cloned()).collect();
    let average = DensityMatrix::mixture(&parts)?;
    let conditional: f64 = parts
        .iter()
        .map(|(p, rho)| p * von_neumann_entropy(rho))
        .sum();
    Ok(von_neumann_entropy(&average) - conditional)
}

/// Eve's view of an MDI-TS message pair: the purification of `d` on
/// A, B, E₁, E₂, scrambled by Bob's uniform cover on B, then encoded with
/// each dense-coding unitary on A. Returned in [`Symbol`] order.
pub fn mdi_ts_encoded_ensemble(d: &BellDiagonal) -> Vec<DensityMatrix> {
    let phi = purify_bell_diagonal(d).to_density();
    let covered: Vec<(f64, DensityMatrix)> = PauliLabel::ALL
        .iter()
        .map(|&p| (0.25, phi.evolve(&embed_single(&p.matrix(), 1, 4))))
        .collect();
    let covered = DensityMatrix::mixture(&covered).expect("uniform cover mixture");
    Symbol::ALL
        .iter()
        .map(|s| covered.evolve(&embed_single(&s.unitary(), 0, 4)))
        .collect()
}

/// Eve's view of an MDI-DL04 message photon: `ρ_AE = Tr_B |Φ_ABE⟩⟨Φ_ABE|`
/// with bit 0 encoded as `I` and bit 1 as `encoding` on A.
pub fn mdi_dl04_encoded_ensemble(d: &BellDiagonal, encoding: PauliLabel) -> Vec<DensityMatrix> {
    let phi = purify_bell_diagonal(d).to_density();
    let rho_ae = partial_trace(&phi, &[0, 2, 3]).expect("A,E selector");
    vec![
        rho_ae.clone(),
        rho_ae.evolve(&embed_single(&encoding.matrix(), 0, 3)),
    ]
}
