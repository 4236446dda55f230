use qsdc_core::attack::{Attack, BasisSet};
use qsdc_core::channels::{ChannelParam, NoisePlacement};
use qsdc_core::model::Protocol;
use qsdc_core::protocol::{run, simulate_rounds, MessageStats, ProtocolConfig, SimError};
use qsdc_core::quantum::{Basis, PauliLabel};

fn cfg(protocol: Protocol, p: f64, rounds: u64, seed: u64) -> ProtocolConfig {
    ProtocolConfig {
        protocol,
        channel: ChannelParam::new(p).unwrap(),
        rounds,
        seed,
        ..Default::default()
    }
}

/// Independent oracle: two depolarized legs, each flipping a given basis with
/// probability x = p/2, disagree with probability 2x(1-x).
fn two_leg_qber(p: f64) -> f64 {
    let x = p / 2.0;
    2.0 * x * (1.0 - x)
}

#[test]
fn noiseless_runs() {
    let s = run(&cfg(Protocol::MdiTs, 0.0, 1000, 7)).unwrap();
    assert_eq!(s.capacity.raw, 2.0);
    assert_eq!(s.eps(Basis::Z).unwrap().value, 0.0);
    let s = run(&cfg(Protocol::MdiDl04, 0.0, 1000, 7)).unwrap();
    assert_eq!(s.capacity.raw, 1.0);
    match s.message {
        MessageStats::Bit { e } => assert_eq!(e.value, 0.0),
        _ => panic!("expected bit stats"),
    }
}

#[test]
fn mdi_ts_converges_at_p_02() {
    let s = run(&cfg(Protocol::MdiTs, 0.2, 1_000_000, 7)).unwrap();
    for b in [Basis::Z, Basis::X] {
        let e = s.eps(b).unwrap().value;
        assert!((e - two_leg_qber(0.2)).abs() < 0.005, "{b}: {e}");
    }
}

#[test]
fn mdi_dl04_converges_at_p_02() {
    let s = run(&cfg(Protocol::MdiDl04, 0.2, 1_000_000, 7)).unwrap();
    for b in Basis::ALL {
        let e = s.eps(b).unwrap().value;
        assert!((e - two_leg_qber(0.2)).abs() < 0.005, "{b}: {e}");
    }
    // Bob measures in Z for U1 = iσy; Z-basis flips come from X and Y errors
    match s.message {
        MessageStats::Bit { e } => assert!((e.value - two_leg_qber(0.2)).abs() < 0.005),
        _ => panic!("expected bit stats"),
    }
}

#[test]
fn estimates_within_five_sigma_at_p_03() {
    for protocol in [Protocol::MdiTs, Protocol::MdiDl04] {
        let s = run(&cfg(protocol, 0.3, 200_000, 11)).unwrap();
        for e in s.eps.iter().flatten() {
            assert!(e.covers(two_leg_qber(0.3), 5.0), "{protocol}: {e:?}");
        }
    }
}

#[test]
fn symbol_errors_without_cover_bookkeeping() {
    let c = ProtocolConfig { cover_bookkeeping: false, ..cfg(Protocol::MdiTs, 0.0, 100_000, 3) };
    let s = run(&c).unwrap();
    match s.message {
        MessageStats::Symbols { errors, .. } => assert!((errors.error_rate() - 0.75).abs() < 0.01),
        _ => panic!("expected symbol stats"),
    }
}

#[test]
fn intercept_resend_is_detected() {
    let base = cfg(Protocol::MdiTs, 0.0, 1_000_000, 21);
    let attacked = ProtocolConfig { attack: Attack::InterceptResend(BasisSet::ZX), ..base };
    let clean = run(&base).unwrap();
    let hit = run(&attacked).unwrap();
    assert!(hit.attack_active && !clean.attack_active);
    let q = hit.qber().unwrap();
    assert!((q.value - 0.25).abs() < 0.005, "{q:?}");
    let gap = clean.capacity.raw - hit.capacity.raw;
    let sigma = (clean.capacity_std_err.powi(2) + hit.capacity_std_err.powi(2)).sqrt();
    assert!(gap > 5.0 * sigma, "gap {gap} sigma {sigma}");
}

#[test]
fn attack_off_matches_plain_run() {
    let c = cfg(Protocol::MdiDl04, 0.1, 20_000, 5);
    let d = ProtocolConfig { attack: Attack::None, ..c };
    assert_eq!(run(&c).unwrap(), run(&d).unwrap());
}

#[test]
fn qber_interval_coverage() {
    let p = 0.2;
    let truth = two_leg_qber(p);
    let covered = (0..100)
        .filter(|&seed| {
            let s = run(&cfg(Protocol::MdiTs, p, 20_000, 1000 + seed)).unwrap();
            s.eps(Basis::Z).unwrap().covers(truth, 3.0)
        })
        .count();
    assert!(covered >= 99, "{covered}/100");
}

#[test]
fn both_legs_noise_raises_message_errors() {
    let first = run(&cfg(Protocol::MdiTs, 0.2, 200_000, 1)).unwrap();
    let both = run(&ProtocolConfig { noise: NoisePlacement::BothLegs, ..cfg(Protocol::MdiTs, 0.2, 200_000, 1) }).unwrap();
    assert!(both.message_entropy > first.message_entropy);
}

#[test]
fn loss_lowers_gain() {
    let c = ProtocolConfig { transmittance: 0.5, ..cfg(Protocol::MdiTs, 0.0, 100_000, 2) };
    let s = run(&c).unwrap();
    assert!((s.gains.q - 0.25).abs() < 0.01, "{}", s.gains.q);
    assert!(s.decoded_rounds < s.message_rounds);
}

#[test]
fn tiny_runs_flag_missing_estimates() {
    // a single round cannot contain both a Z and an X check plus a message
    let err = run(&cfg(Protocol::MdiTs, 0.1, 1, 0)).unwrap_err();
    assert!(matches!(err, SimError::EstimateUnavailable(_)));
}

#[test]
fn dl04_encodings_decode_cleanly() {
    for enc in [PauliLabel::X, PauliLabel::Z] {
        let c = ProtocolConfig { dl04_encoding: enc, ..cfg(Protocol::MdiDl04, 0.0, 5000, 8) };
        assert_eq!(run(&c).unwrap().capacity.raw, 1.0);
        assert_eq!(simulate_rounds(&c).unwrap().len(), 5000);
    }
}
