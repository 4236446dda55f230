//! Browser bindings. Each export takes a JSON options string and returns a
//! JSON result, so the page needs no generated type glue beyond strings.
//! The `*_json` functions are the same operations for native callers.

use serde::{Deserialize, Serialize};
use wasm_bindgen::prelude::*;

use qsdc_core::attack::Attack;
use qsdc_core::channels::{error_rates_from_deltas, ChannelParam, NoisePlacement};
use qsdc_core::infotheory::{binary_entropy, Gains};
use qsdc_core::model::{CurveSettings, Protocol};
use qsdc_core::protocol::{self, MessageStats, ProtocolConfig};
use qsdc_core::quantum::{holevo_bound, mdi_ts_encoded_ensemble, Basis, BellDiagonal, PauliLabel};
use qsdc_core::report::{self, Grid};

/// Largest round count the page may request; keeps the tab responsive.
pub const MAX_ROUNDS: u64 = 2_000_000;

fn encoding(s: &str) -> Result<PauliLabel, String> {
    match s {
        "x" => Ok(PauliLabel::X),
        "y" => Ok(PauliLabel::Y),
        "z" => Ok(PauliLabel::Z),
        _ => Err(format!("encoding must be x, y or z, got '{s}'")),
    }
}

fn default_step() -> f64 {
    0.005
}
fn default_one() -> f64 {
    1.0
}
fn default_y() -> String {
    "y".into()
}
fn default_noise() -> String {
    "first-leg-only".into()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepOptions {
    pub protocols: Vec<String>,
    #[serde(default = "default_step")]
    pub step: f64,
    #[serde(default = "default_noise")]
    pub noise: String,
    #[serde(default = "default_one")]
    pub q: f64,
    #[serde(default = "default_one")]
    pub eta: f64,
    #[serde(default = "default_y")]
    pub encoding: String,
}

#[derive(Serialize)]
pub struct Crossing {
    pub protocol: String,
    pub x: Option<f64>,
}

#[derive(Serialize)]
pub struct SweepResult {
    pub csv: String,
    pub svg: String,
    pub crossings: Vec<Crossing>,
}

pub fn sweep_json(options: &str) -> Result<String, String> {
    let o: SweepOptions = serde_json::from_str(options).map_err(|e| e.to_string())?;
    let protocols = o
        .protocols
        .iter()
        .map(|p| p.parse::<Protocol>())
        .collect::<Result<Vec<_>, _>>()?;
    if protocols.is_empty() {
        return Err("select at least one protocol".into());
    }
    let grid: Grid = format!("0:0.5:{}", o.step).parse().map_err(|e: report::GridError| e.to_string())?;
    let settings = CurveSettings {
        noise: o.noise.parse::<NoisePlacement>()?,
        gains: Gains::new(o.q, o.eta).map_err(|e| e.to_string())?,
        encoding: encoding(&o.encoding)?,
    };
    let rows = report::analytic_sweep(&protocols, &grid, &settings).map_err(|e| e.to_string())?;
    let crossings = report::zero_crossings(&protocols, &settings)
        .into_iter()
        .map(|(p, x)| Crossing { protocol: p.to_string(), x })
        .collect();
    let result = SweepResult {
        csv: report::to_csv(&rows),
        svg: report::to_svg(&rows, "Secrecy capacity against x = p/2"),
        crossings,
    };
    serde_json::to_string(&result).map_err(|e| e.to_string())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateOptions {
    pub protocol: String,
    pub p: f64,
    pub rounds: u64,
    pub seed: u64,
    #[serde(default)]
    pub attack: bool,
    #[serde(default = "default_noise")]
    pub noise: String,
    #[serde(default = "default_y")]
    pub encoding: String,
}

#[derive(Serialize)]
pub struct EstimateOut {
    pub basis: String,
    pub value: f64,
    pub std_err: f64,
    pub samples: u64,
}

#[derive(Serialize)]
pub struct SimulateResult {
    pub protocol: String,
    pub rounds: u64,
    pub check_rounds: u64,
    pub message_rounds: u64,
    pub qber: Vec<EstimateOut>,
    /// ℰ for MDI-TS, `[1−e, e]` for MDI-DL04.
    pub message_errors: Vec<f64>,
    pub message_entropy: f64,
    pub eve_info: f64,
    pub capacity: f64,
    pub capacity_std_err: f64,
    pub analytic_capacity: f64,
    pub attack_active: bool,
}

pub fn simulate_json(options: &str) -> Result<String, String> {
    let o: SimulateOptions = serde_json::from_str(options).map_err(|e| e.to_string())?;
    if o.rounds > MAX_ROUNDS {
        return Err(format!("at most {MAX_ROUNDS} rounds in the browser"));
    }
    let cfg = ProtocolConfig {
        protocol: o.protocol.parse()?,
        rounds: o.rounds,
        channel: ChannelParam::new(o.p).map_err(|e| e.to_string())?,
        noise: o.noise.parse()?,
        dl04_encoding: encoding(&o.encoding)?,
        attack: if o.attack { "intercept-resend".parse()? } else { Attack::None },
        seed: o.seed,
        ..Default::default()
    };
    let stats = protocol::run(&cfg).map_err(|e| e.to_string())?;
    let analytic = qsdc_core::model::analytic_point(cfg.protocol, &cfg.model(), Gains::unit(), cfg.dl04_encoding)
        .map_err(|e| e.to_string())?;
    let qber = Basis::ALL
        .iter()
        .filter_map(|&b| {
            stats.eps(b).map(|e| EstimateOut {
                basis: b.to_string(),
                value: e.value,
                std_err: e.std_err,
                samples: e.samples,
            })
        })
        .collect();
    let message_errors = match stats.message {
        MessageStats::Symbols { errors, .. } => errors.components().to_vec(),
        MessageStats::Bit { e } => vec![1.0 - e.value, e.value],
    };
    let result = SimulateResult {
        protocol: cfg.protocol.to_string(),
        rounds: stats.rounds,
        check_rounds: stats.check_rounds,
        message_rounds: stats.message_rounds,
        qber,
        message_errors,
        message_entropy: stats.message_entropy,
        eve_info: stats.eve_info,
        capacity: stats.capacity.raw,
        capacity_std_err: stats.capacity_std_err,
        analytic_capacity: analytic.capacity.raw,
        attack_active: stats.attack_active,
    };
    serde_json::to_string(&result).map_err(|e| e.to_string())
}

#[derive(Serialize)]
pub struct HolevoResult {
    pub deltas: [f64; 4],
    pub eps_z: f64,
    pub eps_x: f64,
    pub chi: f64,
    pub bound: f64,
    pub within_bound: bool,
}

/// Holevo quantity of Eve's view of an MDI-TS message pair with Bell weights `deltas`.
pub fn holevo_json(options: &str) -> Result<String, String> {
    let deltas: [f64; 4] = serde_json::from_str(options).map_err(|e| e.to_string())?;
    let d = BellDiagonal::new(deltas).map_err(|e| e.to_string())?;
    let rates = error_rates_from_deltas(&d);
    let chi = holevo_bound(&mdi_ts_encoded_ensemble(&d), &[0.25; 4]).map_err(|e| e.to_string())?;
    let bound = binary_entropy(rates.eps_z).map_err(|e| e.to_string())?
        + binary_entropy(rates.eps_x).map_err(|e| e.to_string())?;
    let result = HolevoResult {
        deltas,
        eps_z: rates.eps_z,
        eps_x: rates.eps_x,
        chi,
        bound,
        within_bound: chi <= bound + 1e-9,
    };
    serde_json::to_string(&result).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn sweep(options: &str) -> Result<String, JsValue> {
    sweep_json(options).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn simulate(options: &str) -> Result<String, JsValue> {
    simulate_json(options).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn holevo(options: &str) -> Result<String, JsValue> {
    holevo_json(options).map_err(|e| JsValue::from_str(&e))
}
