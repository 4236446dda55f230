//! Tallies of a simulated transcript and the capacity they imply.

use super::{MessageRecord, ProtocolConfig, RoundRecord, RoundRole, SimError};
use crate::infotheory::{
    binary_entropy, capacity_mdi_dl04, capacity_mdi_ts, eve_info_mdi_ts, shannon_entropy, CapacityResult,
    ErrorVector, Gains,
};
use crate::model::{dl04_leakage_basis, Protocol};
use crate::quantum::Basis;

/// A binomial frequency with its standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub std_err: f64,
    pub samples: u64,
}

impl Estimate {
    pub fn binomial(hits: u64, samples: u64) -> Option<Self> {
        if samples == 0 {
            return None;
        }
        let value = hits as f64 / samples as f64;
        Some(Self {
            value,
            std_err: (value * (1.0 - value) / samples as f64).sqrt(),
            samples,
        })
    }

    /// Whether `truth` lies within `k` standard errors.
    pub fn covers(&self, truth: f64, k: f64) -> bool {
        (self.value - truth).abs() <= k * self.std_err
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MessageStats {
    /// MDI-TS: empirical ℰ and the raw counts behind it.
    Symbols { errors: ErrorVector, counts: [u64; 4] },
    /// MDI-DL04: decoded bit error rate.
    Bit { e: Estimate },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TranscriptStats {
    pub protocol: Protocol,
    pub rounds: u64,
    pub check_rounds: u64,
    pub message_rounds: u64,
    /// Message rounds that reached a decision (all of them without loss).
    pub decoded_rounds: u64,
    pub checks_per_basis: [u64; 3],
    /// Disagreement rate per check basis, indexed by [`Basis::index`].
    pub eps: [Option<Estimate>; 3],
    pub message: MessageStats,
    pub gains: Gains,
    pub message_entropy: f64,
    pub eve_info: f64,
    pub capacity: CapacityResult,
    /// Delta-method standard error of `capacity.raw` (gain treated as exact).
    pub capacity_std_err: f64,
    pub attack_active: bool,
}

impl TranscriptStats {
    pub fn eps(&self, basis: Basis) -> Option<Estimate> {
        self.eps[basis.index()]
    }

    /// Disagreement frequency pooled over every check round.
    pub fn qber(&self) -> Option<Estimate> {
        let (hits, n) = self.eps.iter().flatten().fold((0u64, 0u64), |(h, n), e| {
            (h + (e.value * e.samples as f64).round() as u64, n + e.samples)
        });
        Estimate::binomial(hits, n)
    }
}

/// `h'(x) = log₂((1−x)/x)`; zero at the endpoints where the delta method degenerates.
fn h_prime(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        0.0
    } else {
        ((1.0 - x) / x).log2()
    }
}

fn need(eps: &[Option<Estimate>; 3], basis: Basis) -> Result<Estimate, SimError> {
    eps[basis.index()].ok_or_else(|| SimError::EstimateUnavailable(format!("no check rounds in basis {basis}")))
}

/// Aggregates round records into QBERs, message statistics and a capacity estimate.
pub fn estimate_stats(records: &[RoundRecord], cfg: &ProtocolConfig) -> Result<TranscriptStats, SimError> {
    if records.is_empty() {
        return Err(SimError::InvalidConfig("no rounds to estimate from".into()));
    }
    let mut checks = [0u64; 3];
    let mut disagreements = [0u64; 3];
    let mut message_rounds = 0u64;
    let mut decoded_rounds = 0u64;
    let mut symbol_counts = [0u64; 4];
    let mut bit_errors = 0u64;

    for r in records {
        match r.role {
            RoundRole::Check { basis, alice, bob } => {
                checks[basis.index()] += 1;
                // ψ⁻ reference: agreement means anti-correlated outcomes
                if alice == bob {
                    disagreements[basis.index()] += 1;
                }
            }
            RoundRole::Message(m) => {
                message_rounds += 1;
                match m {
                    MessageRecord::Dense { encoded, decoded: Some(d) } => {
                        decoded_rounds += 1;
                        symbol_counts[d.difference(encoded).index()] += 1;
                    }
                    MessageRecord::Bit { encoded, decoded: Some(d) } => {
                        decoded_rounds += 1;
                        bit_errors += (d != encoded) as u64;
                    }
                    _ => {}
                }
            }
        }
    }

    let eps = [0, 1, 2].map(|i| Estimate::binomial(disagreements[i], checks[i]));
    if decoded_rounds == 0 {
        return Err(SimError::EstimateUnavailable("no decoded message rounds".into()));
    }
    let q = cfg.q.unwrap_or(decoded_rounds as f64 / message_rounds as f64);
    let gains = Gains::new(q, cfg.eta.unwrap_or(1.0))?;
    let n = decoded_rounds as f64;

    let (message, message_entropy, eve_info, capacity, variance) = match cfg.protocol {
        Protocol::MdiTs => {
            let ez = need(&eps, Basis::Z)?;
            let ex = need(&eps, Basis::X)?;
            let errors = ErrorVector::new(symbol_counts.map(|c| c as f64 / n))
                .or_else(|_| {
                    // renormalize away the last-ulp drift of the division
                    let v = symbol_counts.map(|c| c as f64 / n);
                    let s: f64 = v.iter().sum();
                    ErrorVector::new(v.map(|x| x / s))
                })?;
            let h = shannon_entropy(&errors);
            let second_moment: f64 = errors
                .components()
                .iter()
                .filter(|&&e| e > 0.0)
                .map(|&e| e * e.log2().powi(2))
                .sum();
            let var_h = ((second_moment - h * h) / n).max(0.0);
            let var_leak = (h_prime(ez.value) * ez.std_err).powi(2) + (h_prime(ex.value) * ex.std_err).powi(2);
            let cap = capacity_mdi_ts(gains, &errors, ez.value, ex.value)?;
            let variance = q * q * (var_h + gains.eta * gains.eta * var_leak);
            (
                MessageStats::Symbols { errors, counts: symbol_counts },
                h,
                eve_info_mdi_ts(ez.value, ex.value)?,
                cap,
                variance,
            )
        }
        Protocol::MdiDl04 => {
            let eu = need(&eps, dl04_leakage_basis(cfg.dl04_encoding))?;
            let e = Estimate::binomial(bit_errors, decoded_rounds).expect("decoded rounds > 0");
            let cap = capacity_mdi_dl04(gains, e.value, eu.value)?;
            let variance = q
                * q
                * ((h_prime(e.value) * e.std_err).powi(2) + (gains.eta * h_prime(eu.value) * eu.std_err).powi(2));
            (
                MessageStats::Bit { e },
                binary_entropy(e.value)?,
                binary_entropy(eu.value)?,
                cap,
                variance,
            )
        }
        other => return Err(SimError::InvalidConfig(format!("{other} has no simulator"))),
    };

    Ok(TranscriptStats {
        protocol: cfg.protocol,
        rounds: records.len() as u64,
        check_rounds: checks.iter().sum(),
        message_rounds,
        decoded_rounds,
        checks_per_basis: checks,
        eps,
        message,
        gains,
        message_entropy,
        eve_info,
        capacity,
        capacity_std_err: variance.sqrt(),
        attack_active: cfg.attack.is_active(),
    })
}
