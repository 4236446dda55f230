//! Self-checks run by `qsdc verify`: each compares a library routine with an
//! independent construction and reports a named pass/fail.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;

use crate::attack::{Attack, BasisSet};
use crate::channels::{depolarize, measured_error_rates, ChannelParam, NoisePlacement};
use crate::infotheory::binary_entropy;
use crate::linalg::CMatrix;
use crate::model::Protocol;
use crate::protocol::{density_round_distribution, frame_round_distribution, swap_correction, ProtocolConfig};
use crate::quantum::{
    bell_measure, bell_state, holevo_bound, mdi_ts_encoded_ensemble, partial_trace, pauli_twirl, product_decompose,
    ApplyPauli, BellDiagonal, BellLabel, DecompositionRow,
};

pub const AMPLITUDE_TOL: f64 = 1e-12;
pub const EQUIVALENCE_TOL: f64 = 1e-12;
pub const HOLEVO_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(CheckOutcome { name: name.into(), passed, detail: detail.into() });
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        let failed = self.failures().count();
        write!(f, "{} checks, {} failed", self.checks.len(), failed)
    }
}

/// Bell states against their literal computational-basis amplitudes.
pub fn check_bell_states(report: &mut VerifyReport) {
    let h = FRAC_1_SQRT_2;
    let expected = [
        (BellLabel::PsiMinus, [0.0, h, -h, 0.0]),
        (BellLabel::PsiPlus, [0.0, h, h, 0.0]),
        (BellLabel::PhiMinus, [h, 0.0, 0.0, -h]),
        (BellLabel::PhiPlus, [h, 0.0, 0.0, h]),
    ];
    for (label, amps) in expected {
        let got = bell_state(label);
        let err = got
            .amplitudes()
            .iter()
            .zip(amps)
            .map(|(a, e)| (a - Complex64::new(e, 0.0)).norm())
            .fold(0.0, f64::max);
        report.push(format!("bell-state {label}"), err < AMPLITUDE_TOL, format!("max amplitude error {err:.3e}"));
    }
}

/// Each table row `|ab⟩ = Σ cₖ|Ψₖ⟩/√2` against the Bell-basis projection of the product state.
pub fn check_product_decompositions(report: &mut VerifyReport, table: &[DecompositionRow]) {
    for row in table {
        let got = product_decompose(row.a, row.b);
        let err = got
            .iter()
            .zip(row.coefficients)
            .map(|(g, c)| (g - Complex64::new(c * FRAC_1_SQRT_2, 0.0)).norm())
            .fold(0.0, f64::max);
        report.push(
            format!("product-decomposition |{}{}>", row.a, row.b),
            err < AMPLITUDE_TOL,
            format!("max coefficient error {err:.3e}"),
        );
    }
}

/// Two singlets on S_A, C_A, C_B, S_B; Charlie projects the middle pair onto
/// `outcome`; returns the probability and the fidelity of the corrected outer pair with ψ⁻.
pub fn swap_oracle(outcome: BellLabel) -> (f64, f64) {
    let singlet = bell_state(BellLabel::PsiMinus);
    let four = singlet.tensor(&singlet).to_density();
    let v = outcome.amplitudes();
    let proj = CMatrix::identity(2)
        .kron(&CMatrix::outer(&v, &v))
        .kron(&CMatrix::identity(2));
    let (prob, post) = four.project(&proj);
    let Some(post) = post else { return (prob, 0.0) };
    let pair = partial_trace(&post, &[0, 3])
        .expect("outer pair")
        .apply_pauli(swap_correction(outcome), 1)
        .expect("qubit in range");
    (prob, pair.expectation_vec(singlet.amplitudes()))
}

pub fn check_swap_table(report: &mut VerifyReport) {
    for outcome in BellLabel::ALL {
        let (prob, fidelity) = swap_oracle(outcome);
        let ok = (prob - 0.25).abs() < AMPLITUDE_TOL && (fidelity - 1.0).abs() < AMPLITUDE_TOL;
        report.push(
            format!("swap-correction {outcome} -> {}", swap_correction(outcome)),
            ok,
            format!("probability {prob:.12}, fidelity {fidelity:.12}"),
        );
    }
}

/// Depolarizing one half of ψ⁻ against `δ = (1−3p/4, p/4, p/4, p/4)` and `ε = p/2`.
pub fn check_channel_identities(report: &mut VerifyReport) {
    let singlet = bell_state(BellLabel::PsiMinus).to_density();
    let mut worst: f64 = 0.0;
    for i in 0..=10 {
        let p = i as f64 / 10.0;
        let rho = depolarize(&singlet, ChannelParam::new(p).expect("p in range"), 1).expect("qubit in range");
        let delta = bell_measure(&rho).expect("two qubits");
        let expect = [1.0 - 0.75 * p, 0.25 * p, 0.25 * p, 0.25 * p];
        for k in 0..4 {
            worst = worst.max((delta[k] - expect[k]).abs());
        }
        let rates = measured_error_rates(&rho).expect("two qubits");
        for e in [rates.eps_z, rates.eps_x, rates.eps_y] {
            worst = worst.max((e - p / 2.0).abs());
        }
    }
    report.push("depolarizing-identities", worst < AMPLITUDE_TOL, format!("max deviation {worst:.3e}"));
}

/// Pauli-frame enumeration against the density-matrix backend.
pub fn check_backend_equivalence(report: &mut VerifyReport) {
    for protocol in [Protocol::MdiTs, Protocol::MdiDl04] {
        for p in [0.0, 0.1, 0.5, 1.0] {
            for attack in [Attack::None, Attack::InterceptResend(BasisSet::ZX)] {
                let cfg = ProtocolConfig {
                    protocol,
                    channel: ChannelParam::new(p).expect("p in range"),
                    attack,
                    noise: NoisePlacement::FirstLegOnly,
                    ..Default::default()
                };
                let diff = frame_round_distribution(&cfg).max_abs_diff(&density_round_distribution(&cfg));
                report.push(
                    format!("backend-equivalence {protocol} p={p} attack={attack}"),
                    diff < EQUIVALENCE_TOL,
                    format!("max probability difference {diff:.3e}"),
                );
            }
        }
    }
}

/// 125 Bell-diagonal weight vectors: `δ₁ = a/4`, then each later weight
/// takes `b/4`, `c/4` of what remains, `a, b, c ∈ {0, …, 4}`.
pub fn simplex_grid() -> Vec<[f64; 4]> {
    let mut out = Vec::with_capacity(125);
    for a in 0..5 {
        for b in 0..5 {
            for c in 0..5 {
                let d1 = a as f64 / 4.0;
                let d2 = (1.0 - d1) * b as f64 / 4.0;
                let d3 = (1.0 - d1 - d2) * c as f64 / 4.0;
                let d4 = (1.0 - d1 - d2 - d3).max(0.0);
                out.push([d1, d2, d3, d4]);
            }
        }
    }
    out
}

/// Holevo quantity of the encoded MDI-TS ensemble against `h(ε_z) + h(ε_x)`.
pub fn check_holevo_grid(report: &mut VerifyReport) {
    let mut worst = f64::NEG_INFINITY;
    let mut worst_at = [0.0; 4];
    let mut bad = 0;
    for deltas in simplex_grid() {
        let d = BellDiagonal::new(deltas).expect("grid point on simplex");
        let ensemble = mdi_ts_encoded_ensemble(&d);
        let chi = holevo_bound(&ensemble, &[0.25; 4]).expect("ensemble");
        let eps_z = deltas[2] + deltas[3];
        let eps_x = deltas[1] + deltas[3];
        let bound = binary_entropy(eps_z.clamp(0.0, 1.0)).expect("unit") + binary_entropy(eps_x.clamp(0.0, 1.0)).expect("unit");
        let margin = chi - bound;
        if margin > HOLEVO_SLACK {
            bad += 1;
        }
        if margin > worst {
            worst = margin;
            worst_at = deltas;
        }
    }
    report.push(
        "holevo-grid",
        bad == 0,
        format!("125 points, {bad} violations, max chi - bound = {worst:.3e} at delta = {worst_at:?}"),
    );
}

/// Cross-check the twirl used for Bell-diagonal reductions: twirling an
/// already Bell-diagonal state is the identity.
fn check_twirl(report: &mut VerifyReport) {
    let d = BellDiagonal::new([0.55, 0.2, 0.15, 0.1]).expect("weights");
    let t = pauli_twirl(&d.density_matrix()).expect("two qubits");
    let err = d
        .deltas()
        .iter()
        .zip(t.deltas())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    report.push("bell-diagonal-twirl", err < AMPLITUDE_TOL, format!("max weight change {err:.3e}"));
}

/// Every check, with the decomposition table supplied by the caller.
pub fn run_with_table(table: &[DecompositionRow]) -> VerifyReport {
    let mut report = VerifyReport::default();
    check_bell_states(&mut report);
    check_product_decompositions(&mut report, table);
    check_swap_table(&mut report);
    check_channel_identities(&mut report);
    check_twirl(&mut report);
    check_backend_equivalence(&mut report);
    check_holevo_grid(&mut report);
    report
}

pub fn run_all() -> VerifyReport {
    run_with_table(&crate::quantum::PRODUCT_DECOMPOSITIONS)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::PRODUCT_DECOMPOSITIONS;

    #[test]
    fn clean_build_passes() {
        let r = run_all();
        assert!(r.all_passed(), "{r}");
        assert_eq!(r.checks.iter().filter(|c| c.name.starts_with("product-decomposition")).count(), 8);
    }

    #[test]
    fn sign_flip_is_named() {
        let mut table = PRODUCT_DECOMPOSITIONS;
        table[6].coefficients[0] = -table[6].coefficients[0];
        let r = run_with_table(&table);
        let failed: Vec<_> = r.failures().map(|c| c.name.as_str()).collect();
        assert_eq!(failed, vec!["product-decomposition |+->"]);
    }

    #[test]
    fn simplex_grid_is_on_simplex() {
        let g = simplex_grid();
        assert_eq!(g.len(), 125);
        for d in g {
            assert!(d.iter().all(|&x| x >= 0.0));
            assert!((d.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }
}
