//! File formats: scenes, scenarios and traces.

mod lex;
pub mod scenario;
pub mod scene;
pub mod trace;

use std::fmt;

use thiserror::Error;

pub use scenario::{parse_scenario, parse_scenario_bytes, Command, ScenarioDoc, TimedCommand};
pub use scene::{load_world, parse_scene, parse_scene_bytes, DeclKind, LoadedWorld, NodeDecl, SceneDoc, ShapeDecl};
pub use trace::{parse_trace, write_trace, ParsedRecord, TraceKind, TraceRecord};

/// A 1-based position in a source file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

/// Rejected input. Every variant points at the first offending token.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FormatError {
    #[error("{pos}: expected {expected}")]
    Parse { pos: Pos, expected: String },
    #[error("{pos}: node {node:?}: {message}")]
    Semantic { pos: Pos, node: String, message: String },
    #[error("{pos}: time {time} is earlier than previous command at {previous}")]
    NonMonotonicTime { pos: Pos, time: f64, previous: f64 },
}

impl FormatError {
    pub(crate) fn parse(pos: Pos, expected: impl Into<String>) -> Self {
        FormatError::Parse { pos, expected: expected.into() }
    }

    pub fn pos(&self) -> Pos {
        match self {
            FormatError::Parse { pos, .. }
            | FormatError::Semantic { pos, .. }
            | FormatError::NonMonotonicTime { pos, .. } => *pos,
        }
    }

    pub fn is_parse(&self) -> bool {
        matches!(self, FormatError::Parse { .. })
    }
}

/// Shortest text that parses back to exactly `x`.
pub(crate) fn num(x: f64) -> String {
    let s = format!("{x}");
    if s == "-0" { "0".to_string() } else { s }
}
