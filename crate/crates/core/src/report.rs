//! Sweep rows, CSV and SVG output.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::attack::Attack;
use crate::channels::ChannelParam;
use crate::infotheory::InfoError;
use crate::model::{analytic_point, zero_crossing, AnalyticPoint, ChannelModel, CurveSettings, Protocol};
use crate::protocol::{ProtocolConfig, TranscriptStats};
use crate::quantum::Basis;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    Analytic,
    MonteCarlo,
}

impl Source {
    pub fn as_str(self) -> &'static str {
        match self {
            Source::Analytic => "analytic",
            Source::MonteCarlo => "montecarlo",
        }
    }
}

/// One output row. `x` is the sweep coordinate `p/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub x: f64,
    pub p: f64,
    pub protocol: Protocol,
    pub eps_z: f64,
    pub eps_x: f64,
    pub eps_y: f64,
    pub h_of_e: f64,
    pub eve_info: f64,
    pub capacity_raw: f64,
    pub capacity_clamped: f64,
    pub source: Source,
    pub seed: Option<u64>,
    pub rounds: Option<u64>,
}

pub const CSV_HEADER: &str =
    "x,p,protocol,eps_z,eps_x,eps_y,H_of_E,eve_info,capacity_raw,capacity_clamped,source,seed,rounds";

impl SweepRow {
    pub fn from_analytic(point: &AnalyticPoint) -> Self {
        Self {
            x: point.x(),
            p: point.p,
            protocol: point.protocol,
            eps_z: point.rates.eps_z,
            eps_x: point.rates.eps_x,
            eps_y: point.rates.eps_y,
            h_of_e: point.message_entropy,
            eve_info: point.eve_info,
            capacity_raw: point.capacity.raw,
            capacity_clamped: point.capacity.clamped,
            source: Source::Analytic,
            seed: None,
            rounds: None,
        }
    }

    /// Monte Carlo row. Bases that were never checked are reported as NaN.
    pub fn from_stats(stats: &TranscriptStats, cfg: &ProtocolConfig) -> Self {
        let eps = |b: Basis| stats.eps(b).map_or(f64::NAN, |e| e.value);
        let p = cfg.channel.value();
        Self {
            x: p / 2.0,
            p,
            protocol: stats.protocol,
            eps_z: eps(Basis::Z),
            eps_x: eps(Basis::X),
            eps_y: eps(Basis::Y),
            h_of_e: stats.message_entropy,
            eve_info: stats.eve_info,
            capacity_raw: stats.capacity.raw,
            capacity_clamped: stats.capacity.clamped,
            source: Source::MonteCarlo,
            seed: Some(cfg.seed),
            rounds: Some(stats.rounds),
        }
    }

    pub fn to_csv(&self) -> String {
        let opt = |v: Option<u64>| v.map(|n| n.to_string()).unwrap_or_default();
        [
            fmt_sig(self.x),
            fmt_sig(self.p),
            self.protocol.to_string(),
            fmt_sig(self.eps_z),
            fmt_sig(self.eps_x),
            fmt_sig(self.eps_y),
            fmt_sig(self.h_of_e),
            fmt_sig(self.eve_info),
            fmt_sig(self.capacity_raw),
            fmt_sig(self.capacity_clamped),
            self.source.as_str().to_string(),
            opt(self.seed),
            opt(self.rounds),
        ]
        .join(",")
    }
}

/// Header plus one LF-terminated line per row.
pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.to_csv());
        out.push('\n');
    }
    out
}

const SIG_DIGITS: i32 = 12;

/// `printf("%.12g")`: 12 significant digits, trailing zeros dropped,
/// exponent form outside `1e-4 ≤ |v| < 1e12`.
pub fn fmt_sig(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    // round first, so the exponent reflects carries like 9.9999…→10
    let sci = format!("{:.*e}", (SIG_DIGITS - 1) as usize, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= SIG_DIGITS {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", strip_zeros(mantissa), exp.abs())
    } else {
        let decimals = (SIG_DIGITS - 1 - exp).max(0) as usize;
        strip_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("invalid grid '{0}': expected start:stop:step with 0 <= start <= stop <= 0.5 and step > 0")]
pub struct GridError(pub String);

/// Closed range of sweep coordinates `x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Default for Grid {
    fn default() -> Self {
        Self { start: 0.0, stop: 0.5, step: 0.005 }
    }
}

impl Grid {
    pub fn single(x: f64) -> Self {
        Self { start: x, stop: x, step: 1.0 }
    }

    /// `start + i·step` up to `stop`, allowing for rounding in the step count.
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|i| (self.start + i as f64 * self.step).min(self.stop)).collect()
    }
}

impl FromStr for Grid {
    type Err = GridError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || GridError(s.to_string());
        let parts: Vec<f64> = s
            .split(':')
            .map(|t| t.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| err())?;
        let [start, stop, step] = parts[..] else { return Err(err()) };
        if !(0.0 <= start && start <= stop && stop <= 0.5 && step > 0.0 && step.is_finite()) {
            return Err(err());
        }
        Ok(Self { start, stop, step })
    }
}

/// Closed-form rows for every protocol at every grid point, grouped by protocol.
pub fn analytic_sweep(
    protocols: &[Protocol],
    grid: &Grid,
    settings: &CurveSettings,
) -> Result<Vec<SweepRow>, InfoError> {
    let xs = grid.points();
    let mut rows = Vec::with_capacity(xs.len() * protocols.len());
    for &protocol in protocols {
        for &x in &xs {
            let p = ChannelParam::new(2.0 * x).map_err(|_| InfoError::OutOfRange {
                name: "x",
                value: x,
                lo: 0.0,
                hi: 0.5,
            })?;
            let model = ChannelModel::new(p, settings.noise, Attack::None);
            let point = analytic_point(protocol, &model, settings.gains, settings.encoding)?;
            rows.push(SweepRow::from_analytic(&point));
        }
    }
    Ok(rows)
}

/// First `x` where each curve's raw capacity reaches zero.
pub fn zero_crossings(protocols: &[Protocol], settings: &CurveSettings) -> Vec<(Protocol, Option<f64>)> {
    protocols.iter().map(|&p| (p, zero_crossing(p, settings))).collect()
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Line plot of `capacity_clamped` against `x`, one series per
/// (protocol, source). Points are written in data coordinates with the
/// same digits as the CSV; a transform maps them onto the plot area.
pub fn to_svg(rows: &[SweepRow], title: &str) -> String {
    let mut series: Vec<(Protocol, Source, Vec<&SweepRow>)> = Vec::new();
    for r in rows {
        match series.iter_mut().find(|(p, s, _)| *p == r.protocol && *s == r.source) {
            Some((_, _, v)) => v.push(r),
            None => series.push((r.protocol, r.source, vec![r])),
        }
    }

    let finite = |v: f64| v.is_finite();
    let x_max = rows.iter().map(|r| r.x).filter(|v| finite(*v)).fold(0.0, f64::max);
    let x_max = if x_max > 0.0 { x_max } else { 0.5 };
    let y_max = rows
        .iter()
        .map(|r| r.capacity_clamped)
        .filter(|v| finite(*v))
        .fold(0.0, f64::max)
        .ceil()
        .max(1.0);

    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = plot_w / x_max;
    let sy = plot_h / y_max;
    let px = |x: f64| LEFT + x * sx;
    let py = |y: f64| TOP + plot_h - y * sy;

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="22" text-anchor="middle" font-size="15">{}</text>"#, LEFT + plot_w / 2.0, escape(title));

    // axes and ticks
    let _ = writeln!(s, r#"<g stroke="black" stroke-width="1">"#);
    let _ = writeln!(s, r#"<line x1="{LEFT}" y1="{}" x2="{}" y2="{}"/>"#, py(0.0), px(x_max), py(0.0));
    let _ = writeln!(s, r#"<line x1="{LEFT}" y1="{}" x2="{LEFT}" y2="{}"/>"#, py(0.0), py(y_max));
    let _ = writeln!(s, "</g>");
    for i in 0..=5 {
        let x = x_max * i as f64 / 5.0;
        let _ = writeln!(
            s,
            r#"<line x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="black"/><text x="{0}" y="{3}" text-anchor="middle">{4}</text>"#,
            px(x),
            py(0.0),
            py(0.0) + 5.0,
            py(0.0) + 20.0,
            fmt_sig((x * 1e6).round() / 1e6)
        );
    }
    let y_ticks = (y_max * 4.0) as usize;
    for i in 0..=y_ticks {
        let y = y_max * i as f64 / y_ticks as f64;
        let _ = writeln!(
            s,
            r#"<line x1="{0}" y1="{1}" x2="{2}" y2="{1}" stroke="black"/><text x="{3}" y="{4}" text-anchor="end">{5}</text>"#,
            LEFT - 5.0,
            py(y),
            LEFT,
            LEFT - 8.0,
            py(y) + 4.0,
            fmt_sig(y)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">channel parameter x = p/2</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        s,
        r#"<text x="18" y="{0}" text-anchor="middle" transform="rotate(-90 18 {0})">secrecy capacity (bits)</text>"#,
        TOP + plot_h / 2.0
    );

    // data, in data coordinates
    let _ = writeln!(
        s,
        r#"<g transform="translate({LEFT} {}) scale({sx} {})" fill="none">"#,
        TOP + plot_h,
        -sy
    );
    for (i, (protocol, source, pts)) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let coords: Vec<String> = pts
            .iter()
            .filter(|r| finite(r.x) && finite(r.capacity_clamped))
            .map(|r| format!("{},{}", fmt_sig(r.x), fmt_sig(r.capacity_clamped)))
            .collect();
        match source {
            Source::Analytic => {
                let _ = writeln!(
                    s,
                    r#"<polyline data-protocol="{protocol}" data-source="analytic" stroke="{color}" stroke-width="2" vector-effect="non-scaling-stroke" points="{}"/>"#,
                    coords.join(" ")
                );
            }
            Source::MonteCarlo => {
                // zero-length round-capped segments draw as dots
                let d: String = coords.iter().map(|c| format!("M{c} l0,0 ")).collect();
                let _ = writeln!(
                    s,
                    r#"<path data-protocol="{protocol}" data-source="montecarlo" stroke="{color}" stroke-width="7" stroke-linecap="round" vector-effect="non-scaling-stroke" d="{}"/>"#,
                    d.trim_end()
                );
            }
        }
    }
    let _ = writeln!(s, "</g>");

    // legend
    for (i, (protocol, source, _)) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let y = TOP + 10.0 + 20.0 * i as f64;
        let x = WIDTH - RIGHT + 15.0;
        let label = match source {
            Source::Analytic => protocol.to_string(),
            Source::MonteCarlo => format!("{protocol} (MC)"),
        };
        let _ = writeln!(
            s,
            r#"<line x1="{x}" y1="{y}" x2="{}" y2="{y}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}">{}</text>"#,
            x + 20.0,
            x + 26.0,
            y + 4.0,
            escape(&label)
        );
    }
    s.push_str("</svg>\n");
    s
}
