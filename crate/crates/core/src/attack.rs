//! Intercept-resend eavesdropper on a single photon in flight.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::channels::PauliDistribution;
use crate::linalg::CMatrix;
use crate::quantum::{embed_single, Basis, DensityMatrix, PauliLabel, QuantumError};

/// Bases Eve picks from, uniformly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BasisSet {
    pub z: bool,
    pub x: bool,
    pub y: bool,
}

impl BasisSet {
    pub const ZX: BasisSet = BasisSet { z: true, x: true, y: false };

    pub fn bases(self) -> Vec<Basis> {
        let mut v = Vec::with_capacity(3);
        if self.z {
            v.push(Basis::Z);
        }
        if self.x {
            v.push(Basis::X);
        }
        if self.y {
            v.push(Basis::Y);
        }
        v
    }

    pub fn is_empty(self) -> bool {
        !(self.z || self.x || self.y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Attack {
    #[default]
    None,
    /// Measure Alice's photon on its way to Charlie and resend the eigenstate found.
    InterceptResend(BasisSet),
}

impl Attack {
    pub fn is_active(self) -> bool {
        matches!(self, Attack::InterceptResend(_))
    }

    /// The attack as a Pauli channel on the intercepted photon. Measuring in
    /// basis `b` and resending is the dephasing `½ρ + ½ σ_b ρ σ_b`.
    pub fn pauli_distribution(self) -> PauliDistribution {
        match self {
            Attack::None => PauliDistribution::identity(),
            Attack::InterceptResend(set) => {
                let bases = set.bases();
                let mut probs = [0.5, 0.0, 0.0, 0.0];
                for b in &bases {
                    probs[b.pauli().index()] += 0.5 / bases.len() as f64;
                }
                PauliDistribution::new(probs).expect("dephasing mixture")
            }
        }
    }
}

impl FromStr for Attack {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" => Ok(Attack::None),
            "intercept-resend" => Ok(Attack::InterceptResend(BasisSet::ZX)),
            other => Err(format!("unknown attack '{other}'")),
        }
    }
}

impl fmt::Display for Attack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Attack::None => "none",
            Attack::InterceptResend(_) => "intercept-resend",
        })
    }
}

/// Pauli-frame form: Eve picks a basis; with probability ½ her resent
/// eigenstate differs from the photon's frame by that basis' Pauli.
pub fn eve_intercept_resend<R: Rng + ?Sized>(
    in_flight: PauliLabel,
    bases: BasisSet,
    rng: &mut R,
) -> PauliLabel {
    let choices = bases.bases();
    if choices.is_empty() {
        return in_flight;
    }
    let basis = choices[rng.gen_range(0..choices.len() as u32) as usize];
    if rng.gen_bool(0.5) {
        in_flight.compose(basis.pauli())
    } else {
        in_flight
    }
}

/// Density-matrix form: projective measurement of `qubit` in a uniformly
/// chosen basis followed by preparation of the observed eigenstate.
pub fn intercept_resend_density(
    dm: &DensityMatrix,
    qubit: usize,
    bases: BasisSet,
) -> Result<DensityMatrix, QuantumError> {
    let n = dm.qubits();
    if qubit >= n {
        return Err(QuantumError::QubitOutOfRange { qubit, qubits: n });
    }
    let choices = bases.bases();
    if choices.is_empty() {
        return Ok(dm.clone());
    }
    let weight = 1.0 / choices.len() as f64;
    let mut acc = CMatrix::zeros(dm.dim());
    for basis in choices {
        for outcome in 0..2 {
            let proj = embed_single(&basis.projector(outcome), qubit, n);
            let (prob, post) = dm.project(&proj);
            if let Some(post) = post {
                acc = &acc + &post.matrix().scale_real(prob * weight);
            }
        }
    }
    Ok(DensityMatrix::from_matrix_unchecked(acc))
}
