//! Pauli-frame backend. A round's randomness is drawn into [`RoundInputs`];
//! [`resolve_round`] turns inputs into what the parties observe. The sampler
//! and the exact enumerator share `resolve_round`.

use rand::Rng;

use super::{MessageRecord, ProtocolConfig, RoundDistribution, RoundRecord, RoundRole};
use crate::attack::{eve_intercept_resend, Attack};
use crate::channels::PauliDistribution;
use crate::model::{dl04_measurement_basis, ChannelModel, Protocol};
use crate::quantum::{Basis, BellLabel, PauliLabel, Symbol};

/// All random choices of one round.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RoundInputs {
    /// Error on C_A (channel, plus the attacker if present).
    pub leg_a: PauliLabel,
    /// Error on C_B.
    pub leg_b: PauliLabel,
    /// Charlie's outcome for the swap measurement.
    pub charlie: BellLabel,
    pub role: RoleInputs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RoleInputs {
    Check {
        basis: Basis,
        /// Alice's outcome; Bob's follows from the shared frame.
        alice: u8,
    },
    Dense {
        symbol: Symbol,
        cover: Symbol,
        second_a: PauliLabel,
        second_b: PauliLabel,
        delivered: bool,
    },
    Bit {
        bit: u8,
        second_a: PauliLabel,
        /// Charlie's single-photon outcome on M_A.
        charlie_outcome: u8,
        delivered: bool,
    },
}

/// Check bases in use: Z and X, plus Y when MDI-DL04 encodes with iσy.
pub(crate) fn check_bases(cfg: &ProtocolConfig) -> Vec<Basis> {
    if cfg.protocol == Protocol::MdiDl04 && cfg.dl04_encoding == PauliLabel::Y {
        vec![Basis::Z, Basis::X, Basis::Y]
    } else {
        vec![Basis::Z, Basis::X]
    }
}

pub(crate) struct Sampler {
    protocol: Protocol,
    leg: PauliDistribution,
    second: PauliDistribution,
    attack: Attack,
    check_fraction: f64,
    check_bases: Vec<Basis>,
    transmittance: f64,
}

impl Sampler {
    pub(crate) fn new(cfg: &ProtocolConfig, model: &ChannelModel) -> Self {
        Self {
            protocol: cfg.protocol,
            leg: model.leg(),
            second: model.second_leg(),
            attack: cfg.attack,
            check_fraction: cfg.check_fraction,
            check_bases: check_bases(cfg),
            transmittance: cfg.transmittance,
        }
    }

    pub(crate) fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> RoundInputs {
        let mut leg_a = self.leg.sample(rng);
        if let Attack::InterceptResend(set) = self.attack {
            leg_a = eve_intercept_resend(leg_a, set, rng);
        }
        let leg_b = self.leg.sample(rng);
        let charlie = BellLabel::from_index(rng.gen_range(0..4u32) as usize);
        let role = if rng.gen_bool(self.check_fraction) {
            RoleInputs::Check {
                basis: self.check_bases[rng.gen_range(0..self.check_bases.len() as u32) as usize],
                alice: rng.gen_range(0..2),
            }
        } else if self.protocol == Protocol::MdiTs {
            let symbol = Symbol::new(rng.gen_range(0..4));
            let cover = Symbol::new(rng.gen_range(0..4));
            let second_a = self.second.sample(rng);
            let second_b = self.second.sample(rng);
            let delivered = self.transmittance >= 1.0
                || rng.gen_bool(self.transmittance * self.transmittance);
            RoleInputs::Dense { symbol, cover, second_a, second_b, delivered }
        } else {
            let bit = rng.gen_range(0..2);
            let second_a = self.second.sample(rng);
            let charlie_outcome = rng.gen_range(0..2);
            let delivered = self.transmittance >= 1.0 || rng.gen_bool(self.transmittance);
            RoleInputs::Bit { bit, second_a, charlie_outcome, delivered }
        };
        RoundInputs { leg_a, leg_b, charlie, role }
    }
}

/// Draws one round's inputs for `cfg` from `rng`.
pub fn sample_round<R: Rng + ?Sized>(cfg: &ProtocolConfig, rng: &mut R) -> RoundInputs {
    Sampler::new(cfg, &cfg.model()).draw(rng)
}

/// Observable outcome of a round given its random inputs.
pub fn resolve_round(inputs: &RoundInputs, cfg: &ProtocolConfig) -> RoundRecord {
    // Charlie's outcome is the label left on S_A–S_B, shifted by both leg errors.
    let residual = inputs
        .charlie
        .shifted(inputs.leg_a)
        .shifted(inputs.leg_b);
    let shared = residual.shifted(super::swap_correction(inputs.charlie));
    let frame = shared.frame();

    let role = match inputs.role {
        RoleInputs::Check { basis, alice } => {
            // ψ⁻ is anti-correlated in every basis; an anticommuting error flips Bob.
            let flip = frame.anticommutes(basis.pauli()) as u8;
            RoundRole::Check { basis, alice, bob: alice ^ 1 ^ flip }
        }
        RoleInputs::Dense { symbol, cover, second_a, second_b, delivered } => {
            let label = shared
                .shifted(symbol.pauli())
                .shifted(cover.pauli())
                .shifted(second_a)
                .shifted(second_b);
            let decoded = delivered.then(|| {
                if cfg.cover_bookkeeping {
                    Symbol::from_pauli(label.frame().compose(cover.pauli()))
                } else {
                    Symbol::from_pauli(label.frame())
                }
            });
            RoundRole::Message(MessageRecord::Dense { encoded: symbol, decoded })
        }
        RoleInputs::Bit { bit, second_a, charlie_outcome, delivered } => {
            let u = if bit == 1 { cfg.dl04_encoding } else { PauliLabel::I };
            let g = frame.compose(u).compose(second_a);
            let basis = dl04_measurement_basis(cfg.dl04_encoding);
            let bob = charlie_outcome ^ 1 ^ g.anticommutes(basis.pauli()) as u8;
            let decoded = delivered.then_some(charlie_outcome ^ bob ^ 1);
            RoundRole::Message(MessageRecord::Bit { encoded: bit, decoded })
        }
    };
    RoundRecord { charlie: inputs.charlie, shared, role }
}

fn support(d: &PauliDistribution) -> impl Iterator<Item = (PauliLabel, f64)> + '_ {
    PauliLabel::ALL
        .into_iter()
        .map(move |p| (p, d.get(p)))
        .filter(|&(_, w)| w > 0.0)
}

/// Exact outcome probabilities of the Pauli-frame model by enumerating
/// every combination of round inputs (message transmission lossless).
pub fn frame_round_distribution(cfg: &ProtocolConfig) -> RoundDistribution {
    let model = cfg.model();
    let alice_leg = model.alice_first_leg();
    let bob_leg = model.leg();
    let second = model.second_leg();

    let mut out = RoundDistribution {
        charlie: [0.0; 4],
        check_error: [0.0; 3],
        symbol_error: [0.0; 4],
        bit_error: 0.0,
    };

    for (leg_a, wa) in support(&alice_leg) {
        for (leg_b, wb) in support(&bob_leg) {
            for charlie in BellLabel::ALL {
                let w = wa * wb * 0.25;
                out.charlie[charlie.index()] += w;
                let base = |role| RoundInputs { leg_a, leg_b, charlie, role };

                for basis in Basis::ALL {
                    for alice in 0..2 {
                        let rec = resolve_round(&base(RoleInputs::Check { basis, alice }), cfg);
                        if let RoundRole::Check { alice, bob, .. } = rec.role {
                            if alice == bob {
                                out.check_error[basis.index()] += w * 0.5;
                            }
                        }
                    }
                }

                for symbol in Symbol::ALL {
                    for cover in Symbol::ALL {
                        for (second_a, sa) in support(&second) {
                            for (second_b, sb) in support(&second) {
                                let role = RoleInputs::Dense { symbol, cover, second_a, second_b, delivered: true };
                                let rec = resolve_round(&base(role), cfg);
                                if let RoundRole::Message(MessageRecord::Dense { encoded, decoded: Some(d) }) = rec.role {
                                    out.symbol_error[d.difference(encoded).index()] += w * sa * sb / 16.0;
                                }
                            }
                        }
                    }
                }

                for bit in 0..2 {
                    for (second_a, sa) in support(&second) {
                        for charlie_outcome in 0..2 {
                            let role = RoleInputs::Bit { bit, second_a, charlie_outcome, delivered: true };
                            let rec = resolve_round(&base(role), cfg);
                            if let RoundRole::Message(MessageRecord::Bit { encoded, decoded: Some(d) }) = rec.role {
                                if d != encoded {
                                    out.bit_error += w * sa * 0.25;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{ChannelParam, NoisePlacement};

    #[test]
    fn enumeration_matches_closed_form_model() {
        for noise in [NoisePlacement::FirstLegOnly, NoisePlacement::BothLegs] {
            for p in [0.0, 0.1, 0.37, 1.0] {
                for protocol in [Protocol::MdiTs, Protocol::MdiDl04] {
                    let cfg = ProtocolConfig {
                        protocol,
                        channel: ChannelParam::new(p).unwrap(),
                        noise,
                        ..Default::default()
                    };
                    let model = cfg.model();
                    let dist = frame_round_distribution(&cfg);
                    let rates = model.error_rates(protocol);
                    for b in Basis::ALL {
                        assert!((dist.check_error[b.index()] - rates.get(b)).abs() < 1e-12);
                    }
                    if protocol == Protocol::MdiTs {
                        let ev = model.symbol_error_vector(protocol).components();
                        for k in 0..4 {
                            assert!((dist.symbol_error[k] - ev[k]).abs() < 1e-12);
                        }
                    } else {
                        let e = model.bit_error(protocol, cfg.dl04_encoding);
                        assert!((dist.bit_error - e).abs() < 1e-12);
                    }
                    for c in dist.charlie {
                        assert!((c - 0.25).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn ignoring_cover_scrambles_symbols() {
        let cfg = ProtocolConfig { cover_bookkeeping: false, ..Default::default() };
        let dist = frame_round_distribution(&cfg);
        for k in 0..4 {
            assert!((dist.symbol_error[k] - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn y_checks_only_for_y_encoding() {
        let ts = ProtocolConfig::default();
        assert_eq!(check_bases(&ts), vec![Basis::Z, Basis::X]);
        let dl_y = ProtocolConfig { protocol: Protocol::MdiDl04, ..Default::default() };
        assert_eq!(check_bases(&dl_y), vec![Basis::Z, Basis::X, Basis::Y]);
        let dl_x = ProtocolConfig { dl04_encoding: PauliLabel::X, ..dl_y };
        assert_eq!(check_bases(&dl_x), vec![Basis::Z, Basis::X]);
    }
}
