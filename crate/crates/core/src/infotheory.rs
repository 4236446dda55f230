//! Entropies and secrecy-capacity lower bounds.
//!
//! Every capacity is reported both raw (possibly negative, so zero
//! crossings survive) and clamped at zero.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InfoError {
    #[error("{name} = {value} outside [{lo}, {hi}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("error vector {0:?} is not a probability distribution")]
    InvalidErrorVector([f64; 4]),
}

fn check_range(name: &'static str, value: f64, lo: f64, hi: f64) -> Result<f64, InfoError> {
    if (lo..=hi).contains(&value) {
        Ok(value)
    } else {
        Err(InfoError::OutOfRange { name, value, lo, hi })
    }
}

fn check_unit(name: &'static str, value: f64) -> Result<f64, InfoError> {
    check_range(name, value, 0.0, 1.0)
}

/// `h(x) = −x log₂ x − (1−x) log₂(1−x)`
pub fn binary_entropy(x: f64) -> Result<f64, InfoError> {
    let x = check_unit("x", x)?;
    Ok(xlog(x) + xlog(1.0 - x))
}

fn xlog(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

/// Distribution of message-symbol errors over `00, 01, 10, 11`; component 0
/// is the probability of decoding correctly.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorVector([f64; 4]);

impl ErrorVector {
    pub fn new(v: [f64; 4]) -> Result<Self, InfoError> {
        let sum: f64 = v.iter().sum();
        if v.iter().any(|x| !(*x >= 0.0)) || (sum - 1.0).abs() > 1e-12 {
            return Err(InfoError::InvalidErrorVector(v));
        }
        Ok(Self(v))
    }

    pub fn noiseless() -> Self {
        Self([1.0, 0.0, 0.0, 0.0])
    }

    pub fn components(&self) -> [f64; 4] {
        self.0
    }

    /// Probability of any symbol error.
    pub fn error_rate(&self) -> f64 {
        1.0 - self.0[0]
    }
}

pub fn shannon_entropy(v: &ErrorVector) -> f64 {
    v.0.iter().map(|&x| xlog(x)).sum::<f64>().max(0.0)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CapacityResult {
    pub raw: f64,
    pub clamped: f64,
}

impl CapacityResult {
    pub fn from_raw(raw: f64) -> Self {
        Self {
            raw,
            clamped: raw.max(0.0),
        }
    }
}

/// Gain `Q` of the legitimate decoding and gain gap `η` between the AB and AE channels.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Gains {
    pub q: f64,
    pub eta: f64,
}

impl Gains {
    pub fn new(q: f64, eta: f64) -> Result<Self, InfoError> {
        check_unit("Q", q)?;
        check_range("eta", eta, 0.0, f64::MAX)?;
        Ok(Self { q, eta })
    }

    pub fn unit() -> Self {
        Self { q: 1.0, eta: 1.0 }
    }
}

impl Default for Gains {
    fn default() -> Self {
        Self::unit()
    }
}

/// Upper bound on Eve's information per MDI-TS pair, `h(ε_z) + h(ε_x)`.
pub fn eve_info_mdi_ts(eps_z: f64, eps_x: f64) -> Result<f64, InfoError> {
    Ok(binary_entropy(check_unit("eps_z", eps_z)?)? + binary_entropy(check_unit("eps_x", eps_x)?)?)
}

/// `Q·{2 − H(ℰ) − η·[h(ε_z)+h(ε_x)]}`
pub fn capacity_mdi_ts(
    gains: Gains,
    errors: &ErrorVector,
    eps_z: f64,
    eps_x: f64,
) -> Result<CapacityResult, InfoError> {
    let gains = Gains::new(gains.q, gains.eta)?;
    let leak = eve_info_mdi_ts(eps_z, eps_x)?;
    Ok(CapacityResult::from_raw(
        gains.q * (2.0 - shannon_entropy(errors) - gains.eta * leak),
    ))
}

/// `Q·[1 − h(e) − η·h(ε_u)]`
pub fn capacity_mdi_dl04(gains: Gains, e: f64, eps_u: f64) -> Result<CapacityResult, InfoError> {
    let gains = Gains::new(gains.q, gains.eta)?;
    let he = binary_entropy(check_unit("e", e)?)?;
    let hu = binary_entropy(check_unit("eps_u", eps_u)?)?;
    Ok(CapacityResult::from_raw(gains.q * (1.0 - he - gains.eta * hu)))
}

/// Leakage of non-MDI DL04, `h(min(ε_x+ε_z, ½))`: never more than one bit.
pub fn eve_info_dl04(eps_x: f64, eps_z: f64) -> Result<f64, InfoError> {
    let s = check_unit("eps_x", eps_x)? + check_unit("eps_z", eps_z)?;
    binary_entropy(s.min(0.5))
}

/// `Q·[1 − h(e) − η·h(min(ε_x+ε_z, ½))]`
pub fn capacity_dl04_non_mdi(
    gains: Gains,
    e: f64,
    eps_x: f64,
    eps_z: f64,
) -> Result<CapacityResult, InfoError> {
    let gains = Gains::new(gains.q, gains.eta)?;
    let he = binary_entropy(check_unit("e", e)?)?;
    let leak = eve_info_dl04(eps_x, eps_z)?;
    Ok(CapacityResult::from_raw(gains.q * (1.0 - he - gains.eta * leak)))
}

/// Two-step baseline: the MDI-TS form evaluated with single-channel error rates.
pub fn capacity_two_step_non_mdi(
    gains: Gains,
    errors: &ErrorVector,
    eps_z: f64,
    eps_x: f64,
) -> Result<CapacityResult, InfoError> {
    capacity_mdi_ts(gains, errors, eps_z, eps_x)
}

/// Root of `f` on `[lo, hi]` by bisection, assuming `f(lo) > 0 ≥ f(hi)`.
/// Returns `None` without a sign change.
pub fn bisect_zero<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> Option<f64> {
    let (flo, fhi) = (f(lo), f(hi));
    if !(flo > 0.0 && fhi <= 0.0) {
        return None;
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}
