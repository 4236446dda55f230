use qsdc_wasm::{holevo_json, simulate_json, sweep_json};
use serde_json::Value;

#[test]
fn sweep_returns_csv_svg_and_crossings() {
    let out: Value = serde_json::from_str(&sweep_json(r#"{"protocols":["mdi-ts","two-step"],"step":0.05}"#).unwrap()).unwrap();
    let csv = out["csv"].as_str().unwrap();
    assert_eq!(csv.lines().count(), 1 + 2 * 11);
    assert!(out["svg"].as_str().unwrap().contains("<polyline"));
    let crossings = out["crossings"].as_array().unwrap();
    assert_eq!(crossings.len(), 2);
    let ts = crossings[0]["x"].as_f64().unwrap();
    let two_step = crossings[1]["x"].as_f64().unwrap();
    assert!(0.0 < ts && ts < two_step && two_step < 0.5);
}

#[test]
fn sweep_rejects_bad_options() {
    assert!(sweep_json(r#"{"protocols":[]}"#).is_err());
    assert!(sweep_json(r#"{"protocols":["bb84"]}"#).is_err());
    assert!(sweep_json(r#"{"protocols":["dl04"],"step":0}"#).is_err());
    assert!(sweep_json(r#"{"protocols":["dl04"],"q":2}"#).is_err());
    assert!(sweep_json(r#"{"protocols":["dl04"],"colour":"red"}"#).is_err());
}

#[test]
fn simulate_noiseless_and_attacked() {
    let out: Value = serde_json::from_str(&simulate_json(r#"{"protocol":"mdi-dl04","p":0,"rounds":2000,"seed":1}"#).unwrap()).unwrap();
    assert_eq!(out["capacity"].as_f64(), Some(1.0));
    assert_eq!(out["qber"].as_array().unwrap().len(), 3);

    let out: Value = serde_json::from_str(
        &simulate_json(r#"{"protocol":"mdi-ts","p":0,"rounds":100000,"seed":1,"attack":true}"#).unwrap(),
    )
    .unwrap();
    assert_eq!(out["attack_active"], Value::Bool(true));
    let z = out["qber"][0]["value"].as_f64().unwrap();
    assert!((z - 0.25).abs() < 0.015);
    assert!(simulate_json(r#"{"protocol":"mdi-ts","p":0,"rounds":100000000,"seed":1}"#).is_err());
}

#[test]
fn holevo_pure_and_noisy() {
    let out: Value = serde_json::from_str(&holevo_json("[1,0,0,0]").unwrap()).unwrap();
    assert!(out["chi"].as_f64().unwrap().abs() < 1e-9);
    let out: Value = serde_json::from_str(&holevo_json("[0.7,0.1,0.1,0.1]").unwrap()).unwrap();
    assert_eq!(out["within_bound"], Value::Bool(true));
    assert!(out["chi"].as_f64().unwrap() > 0.0);
    assert!(holevo_json("[0.5,0.5,0.5,0]").is_err());
}
