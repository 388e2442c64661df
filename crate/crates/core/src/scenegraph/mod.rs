//! Named node tree with transform composition, path lookup, signals and timers.
//!
//! Nodes live in an arena owned by [`SceneTree`] and are addressed by [`NodeId`].
//! Lifecycle callbacks run in tree pre-order (children in insertion order), which
//! makes every run over the same tree produce the same invocation sequence.

mod signal;
mod timer;
mod tree;

pub use signal::{known_signals, Connection, SignalHub};
pub use timer::{ticks_for_period, Timer};
pub use tree::{Lifecycle, NodeId, NodeKind, NodeSpec, SceneTree};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SceneError {
    #[error("a sibling named {0:?} already exists")]
    DuplicateName(String),
    #[error("attaching {child:?} under {parent:?} would create a cycle")]
    CycleDetected { parent: String, child: String },
    #[error("node {0:?} already has a parent")]
    AlreadyAttached(String),
    #[error("invalid node name {0:?}")]
    InvalidName(String),
    #[error("path segment {segment:?} not found")]
    NotFound { segment: String },
    #[error("node kind {kind:?} has no signal {signal:?}")]
    UnknownSignal { kind: NodeKind, signal: String },
    #[error("{signal:?} is already connected to handler {handler:?}")]
    DuplicateConnection { signal: String, handler: String },
    #[error("signal {signal:?} emitted while it is being handled")]
    Reentrant { signal: String },
    #[error("node {0:?} is not a timer")]
    NotATimer(String),
}
