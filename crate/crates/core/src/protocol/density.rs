//! Density-matrix backend: the same round as [`super::frame`], carried out on
//! explicit 16-dim states. Slow, used only to cross-check the frame model.

use super::{swap_correction, ProtocolConfig, RoundDistribution};
use crate::attack::{intercept_resend_density, Attack};
use crate::channels::{apply_pauli_channel, parallel_outcome_probability, NoisePlacement};
use crate::linalg::CMatrix;
use crate::model::dl04_measurement_basis;
use crate::quantum::{
    bell_measure, bell_state, embed_single, partial_trace, ApplyPauli, Basis, BellLabel, PauliLabel,
    Symbol,
};

const S_A: usize = 0;
const C_A: usize = 1;
const C_B: usize = 2;
const S_B: usize = 3;

/// Exact outcome probabilities from density matrices (message transmission lossless).
pub fn density_round_distribution(cfg: &ProtocolConfig) -> RoundDistribution {
    let model = cfg.model();
    let leg = model.leg();
    let second = model.second_leg();
    let singlet = bell_state(BellLabel::PsiMinus);

    // qubits S_A, C_A, C_B, S_B
    let mut four = singlet.tensor(&singlet).to_density();
    four = apply_pauli_channel(&four, &leg, C_A).expect("qubit in range");
    if let Attack::InterceptResend(set) = cfg.attack {
        four = intercept_resend_density(&four, C_A, set).expect("qubit in range");
    }
    four = apply_pauli_channel(&four, &leg, C_B).expect("qubit in range");

    let mut out = RoundDistribution {
        charlie: [0.0; 4],
        check_error: [0.0; 3],
        symbol_error: [0.0; 4],
        bit_error: 0.0,
    };

    for gamma in BellLabel::ALL {
        let v = gamma.amplitudes();
        let proj = CMatrix::identity(2)
            .kron(&CMatrix::outer(&v, &v))
            .kron(&CMatrix::identity(2));
        let (prob, post) = four.project(&proj);
        out.charlie[gamma.index()] += prob;
        let Some(post) = post else { continue };
        let pair = partial_trace(&post, &[S_A, S_B])
            .expect("valid selector")
            .apply_pauli(swap_correction(gamma), 1)
            .expect("qubit in range");

        for basis in Basis::ALL {
            out.check_error[basis.index()] += prob * parallel_outcome_probability(&pair, basis).expect("two qubits");
        }

        for symbol in Symbol::ALL {
            for cover in Symbol::ALL {
                let u = &embed_single(&symbol.unitary(), 0, 2) * &embed_single(&cover.unitary(), 1, 2);
                let mut sent = pair.evolve(&u);
                if cfg.noise == NoisePlacement::BothLegs {
                    sent = apply_pauli_channel(&sent, &second, 0).expect("qubit in range");
                    sent = apply_pauli_channel(&sent, &second, 1).expect("qubit in range");
                }
                let probs = bell_measure(&sent).expect("two qubits");
                for label in BellLabel::ALL {
                    let decoded = if cfg.cover_bookkeeping {
                        Symbol::from_pauli(label.frame().compose(cover.pauli()))
                    } else {
                        Symbol::from_pauli(label.frame())
                    };
                    out.symbol_error[decoded.difference(symbol).index()] += prob * probs[label.index()] / 16.0;
                }
            }
        }

        let basis = dl04_measurement_basis(cfg.dl04_encoding);
        for bit in 0..2u8 {
            let u = if bit == 1 { cfg.dl04_encoding } else { PauliLabel::I };
            let mut sent = pair.apply_pauli(u, S_A).expect("qubit in range");
            if cfg.noise == NoisePlacement::BothLegs {
                sent = apply_pauli_channel(&sent, &second, S_A).expect("qubit in range");
            }
            // decoded = r_A ⊕ r_B ⊕ 1, so equal outcomes decode to 1
            let same = parallel_outcome_probability(&sent, basis).expect("two qubits");
            let err = if bit == 0 { same } else { 1.0 - same };
            out.bit_error += prob * err * 0.5;
        }
    }
    out
}
