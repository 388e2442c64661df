//! Command-line front end: run a scene against a scenario, check traces,
//! compare replays.

pub mod assertions;

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

use immerse::devices::Transport;
use immerse::sceneio::{self, parse_trace};
use immerse::{Runtime, RuntimeError, RuntimeOptions};

pub use assertions::{parse_assertions, Assertion};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: io::Error },
    #[error("{path}:{source}")]
    Format { path: PathBuf, pos: sceneio::Pos, source: sceneio::FormatError },
    #[error("{path}:{line}: {message}")]
    Syntax { path: PathBuf, line: usize, message: String },
    #[error(transparent)]
    Runtime(#[from] RuntimeError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Runtime(e) if !e.is_input_error() => EXIT_RUNTIME,
            CliError::Write { .. } => EXIT_RUNTIME,
            _ => EXIT_INPUT,
        }
    }
}

/// `virtual` or `passthrough:<device path>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SerialChoice(pub Transport);

impl FromStr for SerialChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once(':') {
            None if s == "virtual" => Ok(SerialChoice(Transport::Virtual)),
            Some(("passthrough", path)) if !path.is_empty() => Ok(SerialChoice(Transport::Passthrough(path.into()))),
            _ => Err(format!("expected `virtual` or `passthrough:<path>`, found {s:?}")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub scene: PathBuf,
    pub scenario: PathBuf,
    pub trace: PathBuf,
    pub serial: Transport,
    pub sample_stride: u64,
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })
}

fn located(path: &Path, source: sceneio::FormatError) -> CliError {
    CliError::Format { path: path.to_path_buf(), pos: source.pos(), source }
}

/// Simulates to the end of the scenario and writes the trace. Returns the summary line.
pub fn simulate(cfg: &RunConfig) -> Result<String, CliError> {
    let scene = sceneio::parse_scene_bytes(&read(&cfg.scene)?).map_err(|e| located(&cfg.scene, e))?;
    let scenario = sceneio::parse_scenario_bytes(&read(&cfg.scenario)?).map_err(|e| located(&cfg.scenario, e))?;
    log::info!("{} nodes, {} commands", scene.nodes.len(), scenario.len());
    let options = RuntimeOptions { sample_stride: cfg.sample_stride, transport: cfg.serial.clone() };
    let mut runtime = Runtime::new(&scene, &scenario, options)?;
    let file = File::create(&cfg.trace).map_err(|source| CliError::Write { path: cfg.trace.clone(), source })?;
    let mut sink = BufWriter::new(file);
    let summary = runtime.run_to(&mut sink)?;
    Ok(format!(
        "ok ticks={} time={} records={} trace={}",
        summary.ticks,
        sceneio::trace::fmt_tick_time(summary.ticks, immerse::TICK_RATE),
        summary.records,
        cfg.trace.display()
    ))
}

/// Exit code for `run`: 0 on success, 2 for bad input, 3 for failures while simulating.
pub fn run(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match simulate(cfg) {
        Ok(line) => {
            let _ = writeln!(out, "{line}");
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

/// Checks every assertion; the first failure is reported. 0 pass, 1 fail, 2 unreadable input.
pub fn verify(trace: &Path, assertions: &Path, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let loaded = (|| {
        let text = String::from_utf8_lossy(&read(trace)?).into_owned();
        let records = parse_trace(&text)
            .map_err(|(line, message)| CliError::Syntax { path: trace.to_path_buf(), line, message })?;
        let text = String::from_utf8_lossy(&read(assertions)?).into_owned();
        let checks = parse_assertions(&text)
            .map_err(|(line, message)| CliError::Syntax { path: assertions.to_path_buf(), line, message })?;
        Ok::<_, CliError>((records, checks))
    })();
    let (records, checks) = match loaded {
        Ok(v) => v,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_INPUT;
        }
    };
    for a in &checks {
        if let Err(actual) = a.check(&records) {
            let _ = writeln!(out, "FAIL {}:{}: {} ({actual})", assertions.display(), a.line, a.text);
            return EXIT_FAILED;
        }
    }
    let _ = writeln!(out, "ok {} assertions hold over {} records", checks.len(), records.len());
    EXIT_OK
}

/// Byte comparison of two traces. 0 identical, 1 different, 2 unreadable.
pub fn replay_check(a: &Path, b: &Path, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let (left, right) = match (read(a), read(b)) {
        (Ok(l), Ok(r)) => (l, r),
        (Err(e), _) | (_, Err(e)) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_INPUT;
        }
    };
    if left == right {
        let _ = writeln!(out, "identical ({} bytes)", left.len());
        return EXIT_OK;
    }
    let mut la = left.split(|&c| c == b'\n');
    let mut lb = right.split(|&c| c == b'\n');
    let mut line = 1;
    loop {
        match (la.next(), lb.next()) {
            (Some(x), Some(y)) if x == y => line += 1,
            (x, y) => {
                let show = |s: Option<&[u8]>| s.map_or("<end of file>".to_string(), |s| String::from_utf8_lossy(s).into_owned());
                let _ = writeln!(out, "differ at line {line}");
                let _ = writeln!(out, "< {}", show(x));
                let _ = writeln!(out, "> {}", show(y));
                return EXIT_FAILED;
            }
        }
    }
}
