//! Closed-form error rates and capacities for the symmetric depolarizing
//! channel, for the two MDI protocols and their non-MDI baselines.

use std::fmt;
use std::str::FromStr;

use crate::attack::Attack;
use crate::channels::{
    depolarizing_pauli_dist, error_rates_from_deltas, ChannelParam, ErrorRates, NoisePlacement,
    PauliDistribution,
};
use crate::infotheory::{
    binary_entropy, bisect_zero, capacity_dl04_non_mdi, capacity_mdi_dl04, capacity_mdi_ts,
    capacity_two_step_non_mdi, eve_info_dl04, eve_info_mdi_ts, shannon_entropy, CapacityResult,
    ErrorVector, Gains, InfoError,
};
use crate::quantum::{Basis, PauliLabel, Symbol};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Protocol {
    MdiTs,
    MdiDl04,
    /// Two-step QSDC baseline without MDI.
    TwoStep,
    /// DL04 baseline without MDI.
    Dl04,
}

impl Protocol {
    pub const ALL: [Protocol; 4] = [Protocol::MdiTs, Protocol::TwoStep, Protocol::MdiDl04, Protocol::Dl04];

    pub fn is_mdi(self) -> bool {
        matches!(self, Protocol::MdiTs | Protocol::MdiDl04)
    }

    /// Capacity at zero noise with unit gains: bits per transmitted pair/photon.
    pub fn noiseless_capacity(self) -> f64 {
        match self {
            Protocol::MdiTs | Protocol::TwoStep => 2.0,
            Protocol::MdiDl04 | Protocol::Dl04 => 1.0,
        }
    }

    /// The non-MDI counterpart of an MDI protocol.
    pub fn baseline(self) -> Option<Protocol> {
        match self {
            Protocol::MdiTs => Some(Protocol::TwoStep),
            Protocol::MdiDl04 => Some(Protocol::Dl04),
            _ => None,
        }
    }
}

impl FromStr for Protocol {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mdi-ts" => Ok(Protocol::MdiTs),
            "mdi-dl04" => Ok(Protocol::MdiDl04),
            "two-step" => Ok(Protocol::TwoStep),
            "dl04" => Ok(Protocol::Dl04),
            other => Err(format!("unknown protocol '{other}'")),
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Protocol::MdiTs => "mdi-ts",
            Protocol::MdiDl04 => "mdi-dl04",
            Protocol::TwoStep => "two-step",
            Protocol::Dl04 => "dl04",
        })
    }
}

/// Basis Charlie and Bob measure in to decode a DL04 bit encoded with `u`:
/// one the encoding flips. `σx → Z`, `σz → X`, `iσy → Z`.
pub fn dl04_measurement_basis(u: PauliLabel) -> Basis {
    match u {
        PauliLabel::Z => Basis::X,
        _ => Basis::Z,
    }
}

/// Check basis whose error rate bounds the leakage of a DL04 bit encoded with `u`.
pub fn dl04_leakage_basis(u: PauliLabel) -> Basis {
    match u {
        PauliLabel::X => Basis::X,
        PauliLabel::Z => Basis::Z,
        _ => Basis::Y,
    }
}

/// Pauli-error distributions on each transmission of one protocol round.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelModel {
    pub p: ChannelParam,
    pub noise: NoisePlacement,
    pub attack: Attack,
}

impl ChannelModel {
    pub fn new(p: ChannelParam, noise: NoisePlacement, attack: Attack) -> Self {
        Self { p, noise, attack }
    }

    pub fn leg(&self) -> PauliDistribution {
        depolarizing_pauli_dist(self.p)
    }

    /// Alice's first transmission, including the attacker if present.
    pub fn alice_first_leg(&self) -> PauliDistribution {
        self.leg().convolve(&self.attack.pauli_distribution())
    }

    /// Error on a message photon sent to Charlie in the second transmission.
    pub fn second_leg(&self) -> PauliDistribution {
        match self.noise {
            NoisePlacement::FirstLegOnly => PauliDistribution::identity(),
            NoisePlacement::BothLegs => self.leg(),
        }
    }

    /// Frame of the checked pair: both source legs for MDI, one channel use otherwise.
    pub fn checked_pair(&self, protocol: Protocol) -> PauliDistribution {
        if protocol.is_mdi() {
            self.alice_first_leg().convolve(&self.leg())
        } else {
            self.alice_first_leg()
        }
    }

    /// Net error on the decoded message.
    pub fn message_errors(&self, protocol: Protocol) -> PauliDistribution {
        let first = self.checked_pair(protocol);
        let second = self.second_leg();
        match protocol {
            // both M_A and M_B travel to Charlie
            Protocol::MdiTs => first.convolve(&second).convolve(&second),
            // Bob keeps M_B
            Protocol::MdiDl04 | Protocol::TwoStep | Protocol::Dl04 => first.convolve(&second),
        }
    }

    pub fn error_rates(&self, protocol: Protocol) -> ErrorRates {
        error_rates_from_deltas(&self.checked_pair(protocol).to_bell_diagonal())
    }

    pub fn symbol_error_vector(&self, protocol: Protocol) -> ErrorVector {
        let m = self.message_errors(protocol);
        ErrorVector::new(Symbol::ALL.map(|s| m.get(s.pauli()))).expect("distribution")
    }

    pub fn bit_error(&self, protocol: Protocol, encoding: PauliLabel) -> f64 {
        self.message_errors(protocol)
            .flip_probability(dl04_measurement_basis(encoding))
    }
}

/// One closed-form point of a capacity curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnalyticPoint {
    pub protocol: Protocol,
    pub p: f64,
    pub rates: ErrorRates,
    /// `H(ℰ)` for dense coding, `h(e)` for one-bit protocols.
    pub message_entropy: f64,
    pub eve_info: f64,
    pub capacity: CapacityResult,
}

impl AnalyticPoint {
    pub fn x(&self) -> f64 {
        self.p / 2.0
    }
}

pub fn analytic_point(
    protocol: Protocol,
    model: &ChannelModel,
    gains: Gains,
    encoding: PauliLabel,
) -> Result<AnalyticPoint, InfoError> {
    let rates = model.error_rates(protocol);
    let (message_entropy, eve_info, capacity) = match protocol {
        Protocol::MdiTs | Protocol::TwoStep => {
            let ev = model.symbol_error_vector(protocol);
            let cap = if protocol == Protocol::MdiTs {
                capacity_mdi_ts(gains, &ev, rates.eps_z, rates.eps_x)?
            } else {
                capacity_two_step_non_mdi(gains, &ev, rates.eps_z, rates.eps_x)?
            };
            (shannon_entropy(&ev), eve_info_mdi_ts(rates.eps_z, rates.eps_x)?, cap)
        }
        Protocol::MdiDl04 => {
            let e = model.bit_error(protocol, encoding);
            let eps_u = rates.get(dl04_leakage_basis(encoding));
            (
                binary_entropy(e)?,
                binary_entropy(eps_u)?,
                capacity_mdi_dl04(gains, e, eps_u)?,
            )
        }
        Protocol::Dl04 => {
            let e = model.bit_error(protocol, encoding);
            (
                binary_entropy(e)?,
                eve_info_dl04(rates.eps_x, rates.eps_z)?,
                capacity_dl04_non_mdi(gains, e, rates.eps_x, rates.eps_z)?,
            )
        }
    };
    Ok(AnalyticPoint {
        protocol,
        p: model.p.value(),
        rates,
        message_entropy,
        eve_info,
        capacity,
    })
}

/// Settings shared by every point of a closed-form sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurveSettings {
    pub noise: NoisePlacement,
    pub gains: Gains,
    pub encoding: PauliLabel,
}

impl Default for CurveSettings {
    fn default() -> Self {
        Self {
            noise: NoisePlacement::FirstLegOnly,
            gains: Gains::unit(),
            encoding: PauliLabel::Y,
        }
    }
}

/// Raw capacity at sweep coordinate `x = p/2`.
pub fn capacity_at_x(protocol: Protocol, x: f64, settings: &CurveSettings) -> Result<f64, InfoError> {
    let p = ChannelParam::new(2.0 * x).map_err(|_| InfoError::OutOfRange {
        name: "x",
        value: x,
        lo: 0.0,
        hi: 0.5,
    })?;
    let model = ChannelModel::new(p, settings.noise, Attack::None);
    Ok(analytic_point(protocol, &model, settings.gains, settings.encoding)?.capacity.raw)
}

/// Bisection tolerance on `x` for reported zero crossings.
pub const ZERO_CROSSING_TOL: f64 = 1e-9;

/// Smallest `x ∈ [0, ½]` where the raw capacity reaches zero, if it does.
pub fn zero_crossing(protocol: Protocol, settings: &CurveSettings) -> Option<f64> {
    let f = |x: f64| capacity_at_x(protocol, x, settings).unwrap_or(f64::NAN);
    bisect_zero(f, 0.0, 0.5, ZERO_CROSSING_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(protocol: Protocol, x: f64) -> AnalyticPoint {
        let model = ChannelModel::new(ChannelParam::new(2.0 * x).unwrap(), NoisePlacement::FirstLegOnly, Attack::None);
        analytic_point(protocol, &model, Gains::unit(), PauliLabel::Y).unwrap()
    }

    #[test]
    fn noiseless_endpoints() {
        assert_eq!(point(Protocol::MdiTs, 0.0).capacity.raw, 2.0);
        assert_eq!(point(Protocol::TwoStep, 0.0).capacity.raw, 2.0);
        assert_eq!(point(Protocol::MdiDl04, 0.0).capacity.raw, 1.0);
        assert_eq!(point(Protocol::Dl04, 0.0).capacity.raw, 1.0);
    }

    #[test]
    fn mdi_error_rates_are_two_leg_convolution() {
        for i in 0..=50 {
            let x = i as f64 / 100.0;
            let r = point(Protocol::MdiTs, x).rates;
            let expect = 2.0 * x * (1.0 - x);
            assert!((r.eps_z - expect).abs() < 1e-12);
            assert!((r.eps_x - expect).abs() < 1e-12);
            assert!((r.eps_y - expect).abs() < 1e-12);
            let single = point(Protocol::TwoStep, x).rates;
            assert!((single.eps_z - x).abs() < 1e-12);
        }
    }

    #[test]
    fn mdi_ts_matches_hand_formula() {
        // first-leg-only: ℰ is the depolarizing vector with p' = 4x(1-x)
        for i in 0..=50 {
            let x = i as f64 / 100.0;
            let pp = 4.0 * x * (1.0 - x);
            let ev = ErrorVector::new([1.0 - 0.75 * pp, pp / 4.0, pp / 4.0, pp / 4.0]).unwrap();
            let eps = pp / 2.0;
            let expect = 2.0 - shannon_entropy(&ev) - 2.0 * binary_entropy(eps).unwrap();
            assert!((point(Protocol::MdiTs, x).capacity.raw - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn both_legs_adds_message_noise_only() {
        let p = ChannelParam::new(0.2).unwrap();
        let a = ChannelModel::new(p, NoisePlacement::FirstLegOnly, Attack::None);
        let b = ChannelModel::new(p, NoisePlacement::BothLegs, Attack::None);
        assert_eq!(a.error_rates(Protocol::MdiTs), b.error_rates(Protocol::MdiTs));
        assert!(b.symbol_error_vector(Protocol::MdiTs).error_rate() > a.symbol_error_vector(Protocol::MdiTs).error_rate());
        assert!(b.bit_error(Protocol::MdiDl04, PauliLabel::Y) > a.bit_error(Protocol::MdiDl04, PauliLabel::Y));
    }

    #[test]
    fn mdi_below_baselines_everywhere() {
        for i in 0..=100 {
            let x = i as f64 * 0.005;
            let ts = point(Protocol::MdiTs, x).capacity.raw;
            let two = point(Protocol::TwoStep, x).capacity.raw;
            let md = point(Protocol::MdiDl04, x).capacity.raw;
            let dl = point(Protocol::Dl04, x).capacity.raw;
            assert!(ts <= two + 1e-12, "x={x}");
            assert!(md <= dl + 1e-12, "x={x}");
            if x > 0.0 && x < 0.5 {
                assert!(ts < two);
            }
        }
    }

    #[test]
    fn zero_crossings_bracket_sign_change() {
        let s = CurveSettings::default();
        for protocol in Protocol::ALL {
            let x = zero_crossing(protocol, &s).unwrap();
            assert!(capacity_at_x(protocol, (x - 1e-6).max(0.0), &s).unwrap() > 0.0);
            assert!(capacity_at_x(protocol, x + 1e-6, &s).unwrap() <= 0.0);
        }
        let ts = zero_crossing(Protocol::MdiTs, &s).unwrap();
        let two = zero_crossing(Protocol::TwoStep, &s).unwrap();
        assert!(ts < two);
    }

    #[test]
    fn parse_protocol() {
        for p in Protocol::ALL {
            assert_eq!(p.to_string().parse::<Protocol>().unwrap(), p);
        }
        assert!("bb84".parse::<Protocol>().is_err());
    }
}
