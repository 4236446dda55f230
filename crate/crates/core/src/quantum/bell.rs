use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;

use super::state::{DensityMatrix, PureState};
use super::{PauliLabel, QuantumError};
use crate::linalg::{inner, CMatrix};

/// The four Bell states, in the order used for δ-vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BellLabel {
    PsiMinus,
    PsiPlus,
    PhiMinus,
    PhiPlus,
}

impl BellLabel {
    pub const ALL: [BellLabel; 4] = [
        BellLabel::PsiMinus,
        BellLabel::PsiPlus,
        BellLabel::PhiMinus,
        BellLabel::PhiPlus,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Self {
        Self::ALL[i & 3]
    }

    /// The Pauli `P` with `(I ⊗ P)|ψ⁻⟩ ∝ |self⟩`.
    ///
    /// This identifies the Bell basis with the Pauli group relative to the
    /// singlet, which is what the Pauli-frame simulator tracks.
    pub fn frame(self) -> PauliLabel {
        match self {
            BellLabel::PsiMinus => PauliLabel::I,
            BellLabel::PsiPlus => PauliLabel::Z,
            BellLabel::PhiMinus => PauliLabel::X,
            BellLabel::PhiPlus => PauliLabel::Y,
        }
    }

    pub fn from_frame(p: PauliLabel) -> Self {
        match p {
            PauliLabel::I => BellLabel::PsiMinus,
            PauliLabel::Z => BellLabel::PsiPlus,
            PauliLabel::X => BellLabel::PhiMinus,
            PauliLabel::Y => BellLabel::PhiPlus,
        }
    }

    /// Label reached by applying `p` to either half of a pair in state `self`.
    pub fn shifted(self, p: PauliLabel) -> Self {
        Self::from_frame(self.frame().compose(p))
    }

    pub fn amplitudes(self) -> [Complex64; 4] {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let z = Complex64::new(0.0, 0.0);
        match self {
            BellLabel::PsiMinus => [z, h, -h, z],
            BellLabel::PsiPlus => [z, h, h, z],
            BellLabel::PhiMinus => [h, z, z, -h],
            BellLabel::PhiPlus => [h, z, z, h],
        }
    }
}

impl fmt::Display for BellLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BellLabel::PsiMinus => "psi-",
            BellLabel::PsiPlus => "psi+",
            BellLabel::PhiMinus => "phi-",
            BellLabel::PhiPlus => "phi+",
        };
        f.write_str(s)
    }
}

/// Computational-basis amplitudes of a Bell state (`|00⟩,|01⟩,|10⟩,|11⟩`).
pub fn bell_state(label: BellLabel) -> PureState {
    PureState::from_amplitudes_unchecked(label.amplitudes().to_vec())
}

/// Weights of a Bell-diagonal two-qubit state, indexed by [`BellLabel`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BellDiagonal([f64; 4]);

impl BellDiagonal {
    pub fn new(deltas: [f64; 4]) -> Result<Self, QuantumError> {
        let sum: f64 = deltas.iter().sum();
        if deltas.iter().any(|d| !(0.0..=1.0).contains(d)) || (sum - 1.0).abs() > 1e-12 {
            return Err(QuantumError::InvalidBellDiagonal(deltas));
        }
        Ok(Self(deltas))
    }

    pub fn pure(label: BellLabel) -> Self {
        let mut d = [0.0; 4];
        d[label.index()] = 1.0;
        Self(d)
    }

    pub fn deltas(&self) -> [f64; 4] {
        self.0
    }

    pub fn get(&self, label: BellLabel) -> f64 {
        self.0[label.index()]
    }

    pub fn density_matrix(&self) -> DensityMatrix {
        let mut m = CMatrix::zeros(4);
        for label in BellLabel::ALL {
            let v = label.amplitudes();
            m = &m + &CMatrix::outer(&v, &v).scale_real(self.get(label));
        }
        DensityMatrix::from_matrix_unchecked(m)
    }
}

/// `⟨Ψᵢ|ρ|Ψᵢ⟩` for the four Bell states.
pub fn bell_measure(dm: &DensityMatrix) -> Result<[f64; 4], QuantumError> {
    if dm.dim() != 4 {
        return Err(QuantumError::DimensionMismatch(4, dm.dim()));
    }
    Ok(BellLabel::ALL.map(|l| dm.expectation_vec(&l.amplitudes())))
}

/// Diagonal of a two-qubit state in the Bell basis, i.e. the Bell-diagonal
/// state a full Pauli twirl would leave behind.
pub fn pauli_twirl(dm: &DensityMatrix) -> Result<BellDiagonal, QuantumError> {
    let probs = bell_measure(dm)?;
    BellDiagonal::new(probs.map(|p| p.clamp(0.0, 1.0)))
}

/// `Σᵢ √δᵢ |Ψᵢ⟩|Eᵢ⟩` with `|Eᵢ⟩` the computational basis of a two-qubit environment.
/// Qubit order is A, B, E₁, E₂.
pub fn purify_bell_diagonal(d: &BellDiagonal) -> PureState {
    let mut amps = vec![Complex64::new(0.0, 0.0); 16];
    for label in BellLabel::ALL {
        let w = d.get(label).sqrt();
        let e = label.index();
        for (ab, a) in label.amplitudes().iter().enumerate() {
            amps[ab * 4 + e] += a * w;
        }
    }
    PureState::from_amplitudes_unchecked(amps)
}

/// The four single-photon states used for security checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SinglePhoton {
    Zero,
    One,
    Plus,
    Minus,
}

impl SinglePhoton {
    pub const ALL: [SinglePhoton; 4] = [
        SinglePhoton::Zero,
        SinglePhoton::One,
        SinglePhoton::Plus,
        SinglePhoton::Minus,
    ];

    pub fn amplitudes(self) -> [Complex64; 2] {
        let r = |x: f64| Complex64::new(x, 0.0);
        match self {
            SinglePhoton::Zero => [r(1.0), r(0.0)],
            SinglePhoton::One => [r(0.0), r(1.0)],
            SinglePhoton::Plus => [r(FRAC_1_SQRT_2), r(FRAC_1_SQRT_2)],
            SinglePhoton::Minus => [r(FRAC_1_SQRT_2), r(-FRAC_1_SQRT_2)],
        }
    }

    pub fn same_basis(self, other: SinglePhoton) -> bool {
        use SinglePhoton::*;
        matches!(
            (self, other),
            (Zero | One, Zero | One) | (Plus | Minus, Plus | Minus)
        )
    }
}

impl fmt::Display for SinglePhoton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SinglePhoton::Zero => "0",
            SinglePhoton::One => "1",
            SinglePhoton::Plus => "+",
            SinglePhoton::Minus => "-",
        };
        f.write_str(s)
    }
}

/// Bell-basis amplitudes `⟨Ψ_k|a b⟩` of a product of two single photons.
pub fn product_decompose(a: SinglePhoton, b: SinglePhoton) -> [Complex64; 4] {
    let [a0, a1] = a.amplitudes();
    let [b0, b1] = b.amplitudes();
    let product = [a0 * b0, a0 * b1, a1 * b0, a1 * b1];
    BellLabel::ALL.map(|l| inner(&l.amplitudes(), &product))
}

/// One row of the reference decomposition table: `|a b⟩ = Σ cₖ |Ψₖ⟩ / √2`,
/// with `c` indexed in [`BellLabel`] order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecompositionRow {
    pub a: SinglePhoton,
    pub b: SinglePhoton,
    pub coefficients: [f64; 4],
}

/// Bell decomposition of the eight same-basis product states.
pub const PRODUCT_DECOMPOSITIONS: [DecompositionRow; 8] = {
    use SinglePhoton::*;
    [
        DecompositionRow { a: Zero, b: Zero, coefficients: [0.0, 0.0, 1.0, 1.0] },
        DecompositionRow { a: One, b: One, coefficients: [0.0, 0.0, -1.0, 1.0] },
        DecompositionRow { a: Zero, b: One, coefficients: [1.0, 1.0, 0.0, 0.0] },
        DecompositionRow { a: One, b: Zero, coefficients: [-1.0, 1.0, 0.0, 0.0] },
        DecompositionRow { a: Plus, b: Plus, coefficients: [0.0, 1.0, 0.0, 1.0] },
        DecompositionRow { a: Minus, b: Minus, coefficients: [0.0, -1.0, 0.0, 1.0] },
        DecompositionRow { a: Plus, b: Minus, coefficients: [-1.0, 0.0, 1.0, 0.0] },
        DecompositionRow { a: Minus, b: Plus, coefficients: [1.0, 0.0, 1.0, 0.0] },
    ]
};
