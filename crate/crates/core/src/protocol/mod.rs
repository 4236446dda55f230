//! Round-by-round Monte Carlo of the equivalent MDI-TS and MDI-DL04
//! protocols in the Pauli frame, with an exact density-matrix backend used
//! to cross-check per-round outcome probabilities.
//!
//! A round: Alice and Bob each send one half of a ψ⁻ pair to Charlie, who
//! Bell-measures them; Bob applies [`swap_correction`] so the retained
//! S_A–S_B pair is nominally ψ⁻. The round is then either a correlation
//! check or carries a message.

mod density;
mod frame;
mod stats;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::attack::Attack;
use crate::channels::{ChannelParam, NoisePlacement};
use crate::infotheory::InfoError;
use crate::model::{ChannelModel, Protocol};
use crate::quantum::{BellLabel, PauliLabel};

pub use density::density_round_distribution;
pub use frame::{frame_round_distribution, resolve_round, sample_round, RoleInputs, RoundInputs};
pub use stats::{estimate_stats, Estimate, MessageStats, TranscriptStats};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("estimate unavailable: {0}")]
    EstimateUnavailable(String),
    #[error(transparent)]
    Info(#[from] InfoError),
}

/// Everything that determines a simulation run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProtocolConfig {
    pub protocol: Protocol,
    pub rounds: u64,
    /// Probability that a round is used as a security check.
    pub check_fraction: f64,
    /// Depolarizing parameter shared by every leg.
    pub channel: ChannelParam,
    pub noise: NoisePlacement,
    /// Overrides the measured gain.
    pub q: Option<f64>,
    pub eta: Option<f64>,
    /// `U₁` for MDI-DL04.
    pub dl04_encoding: PauliLabel,
    pub attack: Attack,
    pub seed: u64,
    /// Per-photon survival probability of the message transmission.
    pub transmittance: f64,
    /// Whether Bob undoes his cover operation when decoding. Off only for diagnostics.
    pub cover_bookkeeping: bool,
}

impl Default for ProtocolConfig {
    fn default() -> Self {
        Self {
            protocol: Protocol::MdiTs,
            rounds: 100_000,
            check_fraction: 0.5,
            channel: ChannelParam::noiseless(),
            noise: NoisePlacement::FirstLegOnly,
            q: None,
            eta: None,
            dl04_encoding: PauliLabel::Y,
            attack: Attack::None,
            seed: 0,
            transmittance: 1.0,
            cover_bookkeeping: true,
        }
    }
}

impl ProtocolConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |m: &str| Err(SimError::InvalidConfig(m.to_string()));
        if !self.protocol.is_mdi() {
            return bad("only mdi-ts and mdi-dl04 can be simulated");
        }
        if self.rounds == 0 {
            return bad("rounds must be at least 1");
        }
        if !(self.check_fraction > 0.0 && self.check_fraction < 1.0) {
            return bad("check fraction must lie in (0, 1)");
        }
        if self.dl04_encoding == PauliLabel::I {
            return bad("MDI-DL04 encoding U1 must not be the identity");
        }
        if !(self.transmittance > 0.0 && self.transmittance <= 1.0) {
            return bad("transmittance must lie in (0, 1]");
        }
        if let Some(q) = self.q {
            if !(0.0..=1.0).contains(&q) {
                return bad("Q must lie in [0, 1]");
            }
        }
        if let Some(eta) = self.eta {
            if !(eta >= 0.0 && eta.is_finite()) {
                return bad("eta must be nonnegative");
            }
        }
        if let Attack::InterceptResend(set) = self.attack {
            if set.is_empty() {
                return bad("intercept-resend needs at least one basis");
            }
        }
        Ok(())
    }

    pub fn model(&self) -> ChannelModel {
        ChannelModel::new(self.channel, self.noise, self.attack)
    }
}

/// Pauli Bob applies to S_B after Charlie announces `outcome` so that the
/// swapped S_A–S_B pair is ψ⁻ (both sources emit ψ⁻).
pub fn swap_correction(outcome: BellLabel) -> PauliLabel {
    outcome.frame()
}

/// One simulated round as the parties see it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RoundRecord {
    /// Charlie's Bell outcome on C_A, C_B.
    pub charlie: BellLabel,
    /// Bell label of S_A–S_B after the swap correction.
    pub shared: BellLabel,
    pub role: RoundRole,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RoundRole {
    Check {
        basis: crate::quantum::Basis,
        alice: u8,
        bob: u8,
    },
    Message(MessageRecord),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MessageRecord {
    /// Two-bit dense-coding symbol (MDI-TS).
    Dense {
        encoded: crate::quantum::Symbol,
        decoded: Option<crate::quantum::Symbol>,
    },
    /// One bit (MDI-DL04).
    Bit { encoded: u8, decoded: Option<u8> },
}

/// Runs `cfg.rounds` rounds and returns their records. Deterministic in `cfg`.
pub fn simulate_rounds(cfg: &ProtocolConfig) -> Result<Vec<RoundRecord>, SimError> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let model = cfg.model();
    let sampler = frame::Sampler::new(cfg, &model);
    Ok((0..cfg.rounds)
        .map(|_| resolve_round(&sampler.draw(&mut rng), cfg))
        .collect())
}

pub fn run_mdi_ts(cfg: &ProtocolConfig) -> Result<TranscriptStats, SimError> {
    if cfg.protocol != Protocol::MdiTs {
        return Err(SimError::InvalidConfig("run_mdi_ts needs protocol mdi-ts".into()));
    }
    estimate_stats(&simulate_rounds(cfg)?, cfg)
}

pub fn run_mdi_dl04(cfg: &ProtocolConfig) -> Result<TranscriptStats, SimError> {
    if cfg.protocol != Protocol::MdiDl04 {
        return Err(SimError::InvalidConfig("run_mdi_dl04 needs protocol mdi-dl04".into()));
    }
    estimate_stats(&simulate_rounds(cfg)?, cfg)
}

/// Dispatches on `cfg.protocol`.
pub fn run(cfg: &ProtocolConfig) -> Result<TranscriptStats, SimError> {
    match cfg.protocol {
        Protocol::MdiTs => run_mdi_ts(cfg),
        Protocol::MdiDl04 => run_mdi_dl04(cfg),
        other => Err(SimError::InvalidConfig(format!("{other} has no simulator"))),
    }
}

/// Exact per-round outcome probabilities, as produced by either backend.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RoundDistribution {
    /// Probability of each Charlie swap outcome.
    pub charlie: [f64; 4],
    /// Check disagreement probability per basis, indexed by [`crate::quantum::Basis`].
    pub check_error: [f64; 3],
    /// MDI-TS: probability of each error symbol `decoded ⊖ encoded`.
    pub symbol_error: [f64; 4],
    /// MDI-DL04: probability that the decoded bit differs.
    pub bit_error: f64,
}

impl RoundDistribution {
    pub fn max_abs_diff(&self, other: &RoundDistribution) -> f64 {
        self.charlie
            .iter()
            .zip(&other.charlie)
            .chain(self.check_error.iter().zip(&other.check_error))
            .chain(self.symbol_error.iter().zip(&other.symbol_error))
            .chain(std::iter::once((&self.bit_error, &other.bit_error)))
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::CMatrix;
    use crate::quantum::{bell_state, embed_single, partial_trace, ApplyPauli, Symbol};

    /// 16-dim oracle: qubits S_A, C_A, C_B, S_B; two singlets; Charlie
    /// projects (C_A, C_B) onto `outcome`; returns the normalized S_A–S_B state.
    fn swapped_pair(outcome: BellLabel) -> crate::quantum::DensityMatrix {
        let singlet = bell_state(BellLabel::PsiMinus);
        let four = singlet.tensor(&singlet).to_density();
        let v = outcome.amplitudes();
        let proj = CMatrix::identity(2).kron(&CMatrix::outer(&v, &v)).kron(&CMatrix::identity(2));
        let (prob, post) = four.project(&proj);
        assert!((prob - 0.25).abs() < 1e-12);
        partial_trace(&post.unwrap(), &[0, 3]).unwrap()
    }

    #[test]
    fn swap_table_from_statevector_oracle() {
        let singlet = bell_state(BellLabel::PsiMinus).to_density();
        for outcome in BellLabel::ALL {
            let pair = swapped_pair(outcome);
            // the uncorrected pair carries the same label as Charlie's outcome
            let probs = crate::quantum::bell_measure(&pair).unwrap();
            assert!((probs[outcome.index()] - 1.0).abs() < 1e-12);
            let fixed = pair.apply_pauli(swap_correction(outcome), 1).unwrap();
            assert!((fixed.expectation(singlet.matrix()) - 1.0).abs() < 1e-12, "{outcome}");
        }
        assert_eq!(swap_correction(BellLabel::PsiMinus), PauliLabel::I);
        assert_eq!(swap_correction(BellLabel::PsiPlus), PauliLabel::Z);
    }

    #[test]
    fn config_validation() {
        let ok = ProtocolConfig::default();
        assert!(ok.validate().is_ok());
        let cases = [
            ProtocolConfig { rounds: 0, ..ok },
            ProtocolConfig { check_fraction: 0.0, ..ok },
            ProtocolConfig { check_fraction: 1.0, ..ok },
            ProtocolConfig { dl04_encoding: PauliLabel::I, ..ok },
            ProtocolConfig { protocol: Protocol::Dl04, ..ok },
            ProtocolConfig { transmittance: 0.0, ..ok },
            ProtocolConfig { q: Some(1.5), ..ok },
            ProtocolConfig { eta: Some(-1.0), ..ok },
        ];
        for c in cases {
            assert!(matches!(c.validate(), Err(SimError::InvalidConfig(_))), "{c:?}");
        }
        assert!(run_mdi_dl04(&ok).is_err());
        assert!(run_mdi_ts(&ProtocolConfig { protocol: Protocol::MdiDl04, ..ok }).is_err());
    }

    #[test]
    fn noiseless_decoding_is_perfect() {
        for protocol in [Protocol::MdiTs, Protocol::MdiDl04] {
            for enc in [PauliLabel::X, PauliLabel::Y, PauliLabel::Z] {
                let cfg = ProtocolConfig { protocol, rounds: 20_000, seed: 9, dl04_encoding: enc, ..Default::default() };
                for r in simulate_rounds(&cfg).unwrap() {
                    assert_eq!(r.shared, BellLabel::PsiMinus);
                    match r.role {
                        RoundRole::Check { alice, bob, .. } => assert_ne!(alice, bob),
                        RoundRole::Message(MessageRecord::Dense { encoded, decoded }) => {
                            assert_eq!(Some(encoded), decoded)
                        }
                        RoundRole::Message(MessageRecord::Bit { encoded, decoded }) => {
                            assert_eq!(Some(encoded), decoded)
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn cover_scrambles_bell_label_uniformly() {
        // For any frame error and fixed symbol, the label entering Charlie's
        // second Bell measurement runs over all four labels as the cover does.
        for error in PauliLabel::ALL {
            for symbol in Symbol::ALL {
                let mut counts = [0u32; 4];
                for cover in Symbol::ALL {
                    let label = BellLabel::from_frame(error)
                        .shifted(symbol.pauli())
                        .shifted(cover.pauli());
                    counts[label.index()] += 1;
                }
                assert_eq!(counts, [1, 1, 1, 1]);
            }
        }
    }

    #[test]
    fn dense_coding_decode_via_density_matrix() {
        // encode on A, cover on B, Bell-measure: decoded label ⊕ cover = symbol
        let singlet = bell_state(BellLabel::PsiMinus).to_density();
        for symbol in Symbol::ALL {
            for cover in Symbol::ALL {
                let u = &embed_single(&symbol.unitary(), 0, 2) * &embed_single(&cover.unitary(), 1, 2);
                let probs = crate::quantum::bell_measure(&singlet.evolve(&u)).unwrap();
                let label = BellLabel::from_index(probs.iter().position(|&p| p > 0.5).unwrap());
                assert_eq!(Symbol::from_pauli(label.frame().compose(cover.pauli())), symbol);
            }
        }
    }

    #[test]
    fn identical_seeds_identical_records() {
        let cfg = ProtocolConfig { channel: ChannelParam::new(0.3).unwrap(), rounds: 5000, seed: 42, ..Default::default() };
        assert_eq!(simulate_rounds(&cfg).unwrap(), simulate_rounds(&cfg).unwrap());
        let other = ProtocolConfig { seed: 43, ..cfg };
        assert_ne!(simulate_rounds(&cfg).unwrap(), simulate_rounds(&other).unwrap());
    }
}
