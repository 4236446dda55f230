//! Pauli noise: the depolarizing channel, its Pauli-error form, composition
//! of independent Pauli channels and the δ ↔ QBER mapping.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use thiserror::Error;

use crate::linalg::CMatrix;
use crate::quantum::{
    embed_single, BellDiagonal, BellLabel, DensityMatrix, PauliLabel, QuantumError, Basis,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChannelError {
    #[error("channel parameter {0} outside [0, 1]")]
    ParamOutOfRange(f64),
    #[error("invalid Pauli distribution {0:?}")]
    InvalidDistribution([f64; 4]),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

/// Depolarizing strength `p`: `ρ ↦ p·I/2 + (1−p)·ρ`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct ChannelParam(f64);

impl ChannelParam {
    pub fn new(p: f64) -> Result<Self, ChannelError> {
        if !(0.0..=1.0).contains(&p) {
            return Err(ChannelError::ParamOutOfRange(p));
        }
        Ok(Self(p))
    }

    pub fn noiseless() -> Self {
        Self(0.0)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Probabilities of I, X, Y, Z errors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PauliDistribution([f64; 4]);

impl PauliDistribution {
    pub fn new(probs: [f64; 4]) -> Result<Self, ChannelError> {
        let sum: f64 = probs.iter().sum();
        if probs.iter().any(|p| !(*p >= 0.0)) || (sum - 1.0).abs() > 1e-12 {
            return Err(ChannelError::InvalidDistribution(probs));
        }
        Ok(Self(probs))
    }

    pub fn identity() -> Self {
        Self([1.0, 0.0, 0.0, 0.0])
    }

    pub fn uniform() -> Self {
        Self([0.25; 4])
    }

    pub fn probs(&self) -> [f64; 4] {
        self.0
    }

    pub fn get(&self, p: PauliLabel) -> f64 {
        self.0[p.index()]
    }

    /// Distribution of the net error after `self` then `other`, independently.
    pub fn convolve(&self, other: &PauliDistribution) -> PauliDistribution {
        let mut out = [0.0; 4];
        for a in PauliLabel::ALL {
            for b in PauliLabel::ALL {
                out[a.compose(b).index()] += self.get(a) * other.get(b);
            }
        }
        PauliDistribution(out)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> PauliLabel {
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        for p in PauliLabel::ALL {
            acc += self.0[p.index()];
            if u < acc {
                return p;
            }
        }
        // u landed in rounding slack above the cumulative sum
        PauliLabel::ALL
            .iter()
            .rev()
            .copied()
            .find(|p| self.0[p.index()] > 0.0)
            .unwrap_or(PauliLabel::I)
    }

    /// Probability that the error anticommutes with `basis`, i.e. flips a
    /// measurement outcome in that basis.
    pub fn flip_probability(&self, basis: Basis) -> f64 {
        PauliLabel::ALL
            .iter()
            .filter(|p| p.anticommutes(basis.pauli()))
            .map(|&p| self.get(p))
            .sum()
    }

    /// Bell-diagonal state reached by applying this error to one half of ψ⁻.
    pub fn to_bell_diagonal(&self) -> BellDiagonal {
        let mut d = [0.0; 4];
        for p in PauliLabel::ALL {
            d[BellLabel::from_frame(p).index()] = self.get(p);
        }
        BellDiagonal::new(d).expect("distribution already validated")
    }

    pub fn from_bell_diagonal(d: &BellDiagonal) -> Self {
        Self(PauliLabel::ALL.map(|p| d.get(BellLabel::from_frame(p))))
    }
}

/// `(1−3p/4, p/4, p/4, p/4)`
pub fn depolarizing_pauli_dist(p: ChannelParam) -> PauliDistribution {
    let q = p.value() / 4.0;
    PauliDistribution([1.0 - 3.0 * q, q, q, q])
}

pub fn convolve(d1: &PauliDistribution, d2: &PauliDistribution) -> PauliDistribution {
    d1.convolve(d2)
}

/// `Σ_k p_k σ_k ρ σ_k` on one qubit.
pub fn apply_pauli_channel(
    dm: &DensityMatrix,
    dist: &PauliDistribution,
    qubit: usize,
) -> Result<DensityMatrix, ChannelError> {
    let n = dm.qubits();
    if qubit >= n {
        return Err(QuantumError::QubitOutOfRange { qubit, qubits: n }.into());
    }
    let mut acc = CMatrix::zeros(dm.dim());
    for p in PauliLabel::ALL {
        let w = dist.get(p);
        if w == 0.0 {
            continue;
        }
        let u = embed_single(&p.matrix(), qubit, n);
        acc = &acc + &dm.matrix().conjugate_by(&u).scale_real(w);
    }
    Ok(DensityMatrix::from_matrix_unchecked(acc))
}

/// Depolarizing channel on one qubit, `p·(I/2 ⊗ Tr_q ρ) + (1−p)·ρ`.
pub fn depolarize(
    dm: &DensityMatrix,
    p: ChannelParam,
    qubit: usize,
) -> Result<DensityMatrix, ChannelError> {
    apply_pauli_channel(dm, &depolarizing_pauli_dist(p), qubit)
}

/// Disagreement rates of correlated single-qubit checks on a pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorRates {
    pub eps_z: f64,
    pub eps_x: f64,
    pub eps_y: f64,
}

impl ErrorRates {
    pub fn get(&self, basis: Basis) -> f64 {
        match basis {
            Basis::Z => self.eps_z,
            Basis::X => self.eps_x,
            Basis::Y => self.eps_y,
        }
    }
}

/// `ε_z = δ₃+δ₄`, `ε_x = δ₂+δ₄`, `ε_y = δ₂+δ₃` relative to a ψ⁻ reference.
pub fn error_rates_from_deltas(d: &BellDiagonal) -> ErrorRates {
    let [_, d2, d3, d4] = d.deltas();
    ErrorRates {
        eps_z: d3 + d4,
        eps_x: d2 + d4,
        eps_y: d2 + d3,
    }
}

/// Probability that both halves of a two-qubit state give the same outcome in
/// `basis`. For a ψ⁻ reference every basis is anti-correlated, so this is the
/// check error rate.
pub fn parallel_outcome_probability(dm: &DensityMatrix, basis: Basis) -> Result<f64, QuantumError> {
    if dm.dim() != 4 {
        return Err(QuantumError::DimensionMismatch(4, dm.dim()));
    }
    let same = &basis.projector(0).kron(&basis.projector(0)) + &basis.projector(1).kron(&basis.projector(1));
    Ok(dm.expectation(&same))
}

/// Check error rates computed directly from measurement statistics.
pub fn measured_error_rates(dm: &DensityMatrix) -> Result<ErrorRates, QuantumError> {
    Ok(ErrorRates {
        eps_z: parallel_outcome_probability(dm, Basis::Z)?,
        eps_x: parallel_outcome_probability(dm, Basis::X)?,
        eps_y: parallel_outcome_probability(dm, Basis::Y)?,
    })
}

/// Where channel noise acts in the MDI protocols.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum NoisePlacement {
    /// Only the first transmission to Charlie, whose errors the checks see.
    #[default]
    FirstLegOnly,
    /// The message re-transmission is noisy as well.
    BothLegs,
}

impl FromStr for NoisePlacement {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "first-leg-only" => Ok(NoisePlacement::FirstLegOnly),
            "both-legs" => Ok(NoisePlacement::BothLegs),
            other => Err(format!("unknown noise placement '{other}'")),
        }
    }
}

impl fmt::Display for NoisePlacement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NoisePlacement::FirstLegOnly => "first-leg-only",
            NoisePlacement::BothLegs => "both-legs",
        })
    }
}
