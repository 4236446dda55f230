//! `qsdc` command-line front end.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use qsdc_core::attack::Attack;
use qsdc_core::channels::{ChannelParam, NoisePlacement};
use qsdc_core::infotheory::Gains;
use qsdc_core::model::{analytic_point, CurveSettings, Protocol};
use qsdc_core::protocol::{self, MessageStats, ProtocolConfig, SimError, TranscriptStats};
use qsdc_core::quantum::{Basis, PauliLabel};
use qsdc_core::report::{self, fmt_sig, Grid, SweepRow};
use qsdc_core::verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INSUFFICIENT: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "qsdc", version, about = "Secrecy-capacity sweeps and Monte Carlo runs for MDI-TS and MDI-DL04")]
#[command(args_override_self = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Closed-form capacity curves over a grid of x = p/2.
    Sweep(Common),
    /// Monte Carlo run of one protocol at one channel parameter.
    Simulate(Common),
    /// Oracle and invariant self-checks.
    Verify(Common),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// mdi-ts, mdi-dl04, two-step, dl04; comma-separated or `all` for sweeps
    #[arg(long)]
    pub protocol: Option<String>,
    /// Depolarizing parameter per leg
    #[arg(long, conflicts_with = "x")]
    pub p: Option<f64>,
    /// Sweep coordinate x = p/2
    #[arg(long)]
    pub x: Option<f64>,
    /// start:stop:step over x
    #[arg(long, conflicts_with_all = ["p", "x"])]
    pub grid: Option<String>,
    #[arg(long, default_value_t = 100_000)]
    pub rounds: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.5)]
    pub check_fraction: f64,
    /// first-leg-only or both-legs
    #[arg(long, default_value = "first-leg-only")]
    pub noise: NoisePlacement,
    /// MDI-DL04 encoding U1: x, y (iσy) or z
    #[arg(long, default_value = "y", value_parser = parse_encoding)]
    pub encoding: PauliLabel,
    /// none or intercept-resend
    #[arg(long, default_value = "none")]
    pub attack: Attack,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub eta: Option<f64>,
    /// Write CSV here instead of stdout
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// File of `key = value` lines using the flag names; flags given on the command line win
    #[arg(long)]
    pub config: Option<PathBuf>,
}

fn parse_encoding(s: &str) -> Result<PauliLabel, String> {
    match s.to_ascii_lowercase().as_str() {
        "x" => Ok(PauliLabel::X),
        "y" => Ok(PauliLabel::Y),
        "z" => Ok(PauliLabel::Z),
        _ => Err(format!("encoding must be x, y or z, got '{s}'")),
    }
}

/// Failure with the exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        let code = match e {
            SimError::EstimateUnavailable(_) => EXIT_INSUFFICIENT,
            _ => EXIT_USAGE,
        };
        Self { code, message: e.to_string() }
    }
}

fn flag_name(arg: &str) -> Option<&str> {
    let name = arg.strip_prefix("--")?;
    Some(name.split_once('=').map_or(name, |(n, _)| n))
}

/// Inserts the `--config` file's entries as flags right after the
/// subcommand, skipping keys the user gave explicitly (`p` and `x` count as one).
pub fn splice_config(args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let strs: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let mut path = None;
    for (i, a) in strs.iter().enumerate() {
        if a == "--config" {
            path = strs.get(i + 1).cloned();
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        }
    }
    let Some(path) = path else { return Ok(args) };
    let text = fs::read_to_string(&path).map_err(|e| CliError::usage(format!("cannot read config {path}: {e}")))?;

    let given: Vec<&str> = strs.iter().filter_map(|a| flag_name(a)).collect();
    let point_given = given.iter().any(|&n| n == "p" || n == "x" || n == "grid");
    let mut extra = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::usage(format!("{path}:{}: expected key = value", lineno + 1)));
        };
        let key = key.trim().replace('_', "-");
        if key == "config" {
            return Err(CliError::usage(format!("{path}:{}: config files cannot nest", lineno + 1)));
        }
        let is_point = matches!(key.as_str(), "p" | "x" | "grid");
        if given.contains(&key.as_str()) || (is_point && point_given) {
            continue;
        }
        extra.push(OsString::from(format!("--{key}")));
        extra.push(OsString::from(value.trim()));
    }
    // argv[0], subcommand, then config flags, then the user's flags
    let at = args.len().min(2);
    let mut out = args[..at].to_vec();
    out.extend(extra);
    out.extend_from_slice(&args[at..]);
    Ok(out)
}

/// Entry point; returns the process exit code.
pub fn main_with_args<I: IntoIterator<Item = OsString>>(args: I) -> i32 {
    let args = match splice_config(args.into_iter().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {}", e.message);
            return e.code;
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match &cli.command {
        Command::Sweep(c) => cmd_sweep(c),
        Command::Simulate(c) => cmd_simulate(c),
        Command::Verify(c) => cmd_verify(c),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

fn parse_protocols(s: Option<&str>, default: &[Protocol]) -> Result<Vec<Protocol>, CliError> {
    match s {
        None => Ok(default.to_vec()),
        Some("all") => Ok(Protocol::ALL.to_vec()),
        Some(list) => list
            .split(',')
            .map(|t| t.trim().parse::<Protocol>().map_err(CliError::usage))
            .collect(),
    }
}

fn channel_p(c: &Common) -> Result<Option<f64>, CliError> {
    let p = match (c.p, c.x) {
        (Some(p), _) => Some(p),
        (None, Some(x)) => Some(2.0 * x),
        (None, None) => None,
    };
    if let Some(p) = p {
        ChannelParam::new(p).map_err(|e| CliError::usage(e.to_string()))?;
    }
    Ok(p)
}

fn gains(c: &Common) -> Result<Gains, CliError> {
    Gains::new(c.q.unwrap_or(1.0), c.eta.unwrap_or(1.0)).map_err(|e| CliError::usage(e.to_string()))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))
}

/// CSV to `--csv` or stdout, SVG to `--svg`. Returns whether stdout is free for text.
fn emit(c: &Common, rows: &[SweepRow], title: &str) -> Result<bool, CliError> {
    let csv = report::to_csv(rows);
    let stdout_free = match &c.csv {
        Some(path) => {
            write_file(path, &csv)?;
            true
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(csv.as_bytes()).map_err(|e| CliError::usage(e.to_string()))?;
            false
        }
    };
    if let Some(path) = &c.svg {
        write_file(path, &report::to_svg(rows, title))?;
    }
    Ok(stdout_free)
}

fn say(stdout_free: bool, text: &str) {
    if stdout_free {
        println!("{text}");
    } else {
        eprintln!("{text}");
    }
}

pub fn cmd_sweep(c: &Common) -> Result<i32, CliError> {
    let protocols = parse_protocols(c.protocol.as_deref(), &Protocol::ALL)?;
    if c.attack.is_active() {
        return Err(CliError::usage("sweep draws attack-free curves; use simulate for attacks"));
    }
    let grid = match (&c.grid, channel_p(c)?) {
        (Some(g), _) => g.parse::<Grid>().map_err(|e| CliError::usage(e.to_string()))?,
        (None, Some(p)) => Grid::single(p / 2.0),
        (None, None) => Grid::default(),
    };
    let settings = CurveSettings { noise: c.noise, gains: gains(c)?, encoding: c.encoding };
    let rows = report::analytic_sweep(&protocols, &grid, &settings).map_err(|e| CliError::usage(e.to_string()))?;
    let free = emit(c, &rows, "Secrecy capacity against x = p/2")?;
    for (protocol, crossing) in report::zero_crossings(&protocols, &settings) {
        let text = match crossing {
            Some(x) => format!("zero crossing {protocol}: x* = {x:.9}"),
            None => format!("zero crossing {protocol}: none in [0, 0.5]"),
        };
        say(free, &text);
    }
    Ok(EXIT_OK)
}

fn config_from(c: &Common) -> Result<ProtocolConfig, CliError> {
    let protocols = parse_protocols(c.protocol.as_deref(), &[Protocol::MdiTs])?;
    let [protocol] = protocols[..] else {
        return Err(CliError::usage("simulate takes exactly one protocol"));
    };
    let p = channel_p(c)?.unwrap_or(0.0);
    if c.grid.is_some() {
        return Err(CliError::usage("simulate runs at a single --p or --x, not a grid"));
    }
    let cfg = ProtocolConfig {
        protocol,
        rounds: c.rounds,
        check_fraction: c.check_fraction,
        channel: ChannelParam::new(p).map_err(|e| CliError::usage(e.to_string()))?,
        noise: c.noise,
        q: c.q,
        eta: c.eta,
        dl04_encoding: c.encoding,
        attack: c.attack,
        seed: c.seed,
        ..Default::default()
    };
    cfg.validate()?;
    Ok(cfg)
}

fn summary(stats: &TranscriptStats, cfg: &ProtocolConfig, analytic: &SweepRow) -> String {
    let mut lines = vec![format!(
        "{} p={} rounds={} seed={} attack={}{}",
        cfg.protocol,
        fmt_sig(cfg.channel.value()),
        stats.rounds,
        cfg.seed,
        cfg.attack,
        if stats.attack_active { " (active)" } else { "" }
    )];
    lines.push(format!(
        "  rounds: {} check, {} message, {} decoded",
        stats.check_rounds, stats.message_rounds, stats.decoded_rounds
    ));
    let expect = [analytic.eps_z, analytic.eps_x, analytic.eps_y];
    for b in Basis::ALL {
        if let Some(e) = stats.eps(b) {
            lines.push(format!(
                "  eps_{} = {:.6} ± {:.6} (n={}, analytic {:.6})",
                b.to_string().to_lowercase(),
                e.value,
                e.std_err,
                e.samples,
                expect[b.index()]
            ));
        }
    }
    if let Some(q) = stats.qber() {
        lines.push(format!("  QBER (all checks) = {:.6} ± {:.6}", q.value, q.std_err));
    }
    match stats.message {
        MessageStats::Symbols { errors, .. } => {
            let v = errors.components();
            lines.push(format!(
                "  E = ({:.6}, {:.6}, {:.6}, {:.6}), H(E) = {:.6}",
                v[0], v[1], v[2], v[3], stats.message_entropy
            ));
        }
        MessageStats::Bit { e } => {
            lines.push(format!("  e = {:.6} ± {:.6}", e.value, e.std_err));
        }
    }
    lines.push(format!("  gain Q = {:.6}, eta = {}", stats.gains.q, stats.gains.eta));
    lines.push(format!(
        "  capacity = {:.6} ± {:.6} (analytic {:.6})",
        stats.capacity.raw, stats.capacity_std_err, analytic.capacity_raw
    ));
    lines.join("\n")
}

pub fn cmd_simulate(c: &Common) -> Result<i32, CliError> {
    let cfg = config_from(c)?;
    let stats = protocol::run(&cfg)?;
    let gains = Gains::new(cfg.q.unwrap_or(1.0), cfg.eta.unwrap_or(1.0)).map_err(|e| CliError::usage(e.to_string()))?;
    let point = analytic_point(cfg.protocol, &cfg.model(), gains, cfg.dl04_encoding)
        .map_err(|e| CliError::usage(e.to_string()))?;
    let analytic = SweepRow::from_analytic(&point);
    let rows = [SweepRow::from_stats(&stats, &cfg), analytic];
    let free = emit(c, &rows, &format!("{} Monte Carlo", cfg.protocol))?;
    say(free, &summary(&stats, &cfg, &analytic));
    Ok(EXIT_OK)
}

pub fn cmd_verify(_c: &Common) -> Result<i32, CliError> {
    let report = verify::run_all();
    println!("{report}");
    if report.all_passed() {
        Ok(EXIT_OK)
    } else {
        for f in report.failures() {
            eprintln!("failed: {}", f.name);
        }
        Ok(EXIT_VERIFY_FAILED)
    }
}
