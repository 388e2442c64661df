//! Line-oriented trace records.
//!
//! Each record is one line: `tick=<n> t=<seconds, 6 decimals> kind=<Kind>` followed
//! by the kind's fields in a fixed order:
//!
//! | kind            | fields                                   |
//! |-----------------|------------------------------------------|
//! | AreaEnter/Exit  | `area=<path> other=<path>`               |
//! | SerialTx        | `byte=0x<hh>`                            |
//! | PinChange       | `pin=<n> level=HIGH\|LOW`                |
//! | PlatformState   | `node=<path> state=<State> y=<f>`        |
//! | Impulse         | `node=<path> torque=<x,y,z>`             |
//! | Teleport        | `node=<path> pos=<x,y,z>`                |
//! | TransformSample | `node=<path> pos=<x,y,z> rot=<w,x,y,z>`  |
//! | Warning         | `code=<Code> [detail fields]`            |
//!
//! Floats use six fractional digits; the time column is derived from the tick
//! count with integer arithmetic, so it never drifts.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TraceKind {
    AreaEnter,
    AreaExit,
    SerialTx,
    PinChange,
    PlatformState,
    Impulse,
    Teleport,
    TransformSample,
    Warning,
}

impl TraceKind {
    pub const ALL: [TraceKind; 9] = [
        TraceKind::AreaEnter,
        TraceKind::AreaExit,
        TraceKind::SerialTx,
        TraceKind::PinChange,
        TraceKind::PlatformState,
        TraceKind::Impulse,
        TraceKind::Teleport,
        TraceKind::TransformSample,
        TraceKind::Warning,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TraceKind::AreaEnter => "AreaEnter",
            TraceKind::AreaExit => "AreaExit",
            TraceKind::SerialTx => "SerialTx",
            TraceKind::PinChange => "PinChange",
            TraceKind::PlatformState => "PlatformState",
            TraceKind::Impulse => "Impulse",
            TraceKind::Teleport => "Teleport",
            TraceKind::TransformSample => "TransformSample",
            TraceKind::Warning => "Warning",
        }
    }
}

impl fmt::Display for TraceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TraceKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TraceKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown trace kind {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceRecord {
    pub tick: u64,
    pub kind: TraceKind,
    pub fields: Vec<(&'static str, String)>,
}

/// Six fractional digits; negative zero prints as zero.
pub fn fmt_f64(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".to_string()
    } else {
        s
    }
}

pub fn fmt_vec(v: [f64; 3]) -> String {
    format!("{},{},{}", fmt_f64(v[0]), fmt_f64(v[1]), fmt_f64(v[2]))
}

/// `tick / rate` with six decimals, rounded half-to-even, in exact integer arithmetic.
pub fn fmt_tick_time(tick: u64, rate: u32) -> String {
    let rate = rate as u128;
    let scaled = tick as u128 * 1_000_000;
    let mut micros = scaled / rate;
    let rem = scaled % rate;
    if rem * 2 > rate || (rem * 2 == rate && micros % 2 == 1) {
        micros += 1;
    }
    format!("{}.{:06}", micros / 1_000_000, micros % 1_000_000)
}

impl TraceRecord {
    pub fn new(tick: u64, kind: TraceKind) -> Self {
        Self { tick, kind, fields: Vec::new() }
    }

    pub fn field(mut self, key: &'static str, value: impl Into<String>) -> Self {
        self.fields.push((key, value.into()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields.iter().find(|(k, _)| *k == key).map(|(_, v)| v.as_str())
    }

    pub fn area(tick: u64, entered: bool, area: &str, other: &str) -> Self {
        let kind = if entered { TraceKind::AreaEnter } else { TraceKind::AreaExit };
        Self::new(tick, kind).field("area", area).field("other", other)
    }

    pub fn serial_tx(tick: u64, byte: u8) -> Self {
        Self::new(tick, TraceKind::SerialTx).field("byte", format!("0x{byte:02x}"))
    }

    pub fn pin_change(tick: u64, pin: u8, high: bool) -> Self {
        Self::new(tick, TraceKind::PinChange)
            .field("pin", pin.to_string())
            .field("level", if high { "HIGH" } else { "LOW" })
    }

    pub fn platform_state(tick: u64, node: &str, state: &str, y: f64) -> Self {
        Self::new(tick, TraceKind::PlatformState)
            .field("node", node)
            .field("state", state)
            .field("y", fmt_f64(y))
    }

    pub fn impulse(tick: u64, node: &str, torque: [f64; 3]) -> Self {
        Self::new(tick, TraceKind::Impulse).field("node", node).field("torque", fmt_vec(torque))
    }

    pub fn teleport(tick: u64, node: &str, pos: [f64; 3]) -> Self {
        Self::new(tick, TraceKind::Teleport).field("node", node).field("pos", fmt_vec(pos))
    }

    pub fn transform_sample(tick: u64, node: &str, pos: [f64; 3], rot: [f64; 4]) -> Self {
        Self::new(tick, TraceKind::TransformSample)
            .field("node", node)
            .field("pos", fmt_vec(pos))
            .field(
                "rot",
                format!("{},{},{},{}", fmt_f64(rot[0]), fmt_f64(rot[1]), fmt_f64(rot[2]), fmt_f64(rot[3])),
            )
    }

    pub fn warning(tick: u64, code: &str) -> Self {
        Self::new(tick, TraceKind::Warning).field("code", code)
    }

    /// The record's line, without the trailing newline.
    pub fn to_line(&self, tick_rate: u32) -> String {
        let mut line = format!("tick={} t={} kind={}", self.tick, fmt_tick_time(self.tick, tick_rate), self.kind);
        for (k, v) in &self.fields {
            line.push(' ');
            line.push_str(k);
            line.push('=');
            line.push_str(v);
        }
        line
    }
}

/// Writes one record per line.
pub fn write_trace<W: Write>(sink: &mut W, record: &TraceRecord, tick_rate: u32) -> io::Result<()> {
    let mut line = record.to_line(tick_rate);
    line.push('\n');
    sink.write_all(line.as_bytes())
}

/// A trace line read back from disk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedRecord {
    pub line: usize,
    pub tick: u64,
    pub time: String,
    pub kind: String,
    pub fields: Vec<(String, String)>,
}

impl ParsedRecord {
    pub fn get(&self, key: &str) -> Option<&str> {
        match key {
            "kind" => Some(&self.kind),
            "t" => Some(&self.time),
            _ => self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str()),
        }
    }
}

/// Parses a whole trace file. Errors carry the 1-based line number.
pub fn parse_trace(text: &str) -> Result<Vec<ParsedRecord>, (usize, String)> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let mut tokens = raw.split(' ');
        let mut take = |key: &str| -> Result<String, (usize, String)> {
            let tok = tokens.next().ok_or((lineno, format!("missing {key}=")))?;
            tok.strip_prefix(key)
                .and_then(|r| r.strip_prefix('='))
                .map(str::to_string)
                .ok_or((lineno, format!("expected {key}=, found {tok:?}")))
        };
        let tick = take("tick")?.parse::<u64>().map_err(|e| (lineno, format!("bad tick: {e}")))?;
        let time = take("t")?;
        let kind = take("kind")?;
        let mut fields = Vec::new();
        for tok in tokens {
            let (k, v) = tok.split_once('=').ok_or((lineno, format!("expected key=value, found {tok:?}")))?;
            fields.push((k.to_string(), v.to_string()));
        }
        out.push(ParsedRecord { line: lineno, tick, time, kind, fields });
    }
    Ok(out)
}
