use std::collections::BTreeMap;

use super::{NodeId, NodeKind, SceneError, SceneTree};
use crate::scalar::Scalar;

/// Signals a node of the given kind can emit.
pub fn known_signals(kind: NodeKind) -> &'static [&'static str] {
    match kind {
        NodeKind::Timer => &["timeout"],
        NodeKind::Area => &["body_entered", "body_exited", "area_entered", "area_exited", "pressed"],
        NodeKind::PhysicsBody => &["pressed"],
        NodeKind::Controller => &["button_pressed", "button_released"],
        NodeKind::Spatial | NodeKind::Camera | NodeKind::Origin | NodeKind::MeshStub => &[],
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Connection {
    pub source: NodeId,
    pub signal: String,
    pub target: NodeId,
    pub handler: String,
}

/// Subscription table. Delivery is synchronous and in subscription order.
#[derive(Debug, Clone, Default)]
pub struct SignalHub {
    table: BTreeMap<(NodeId, String), Vec<Connection>>,
    in_flight: Vec<(NodeId, String)>,
}

impl SignalHub {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn connect<T: Scalar>(
        &mut self,
        tree: &SceneTree<T>,
        source: NodeId,
        signal: &str,
        target: NodeId,
        handler: &str,
    ) -> Result<(), SceneError> {
        let kind = tree.kind(source);
        if !known_signals(kind).contains(&signal) {
            return Err(SceneError::UnknownSignal { kind, signal: signal.to_string() });
        }
        let subs = self.table.entry((source, signal.to_string())).or_default();
        if subs.iter().any(|c| c.target == target && c.handler == handler) {
            return Err(SceneError::DuplicateConnection {
                signal: signal.to_string(),
                handler: handler.to_string(),
            });
        }
        subs.push(Connection {
            source,
            signal: signal.to_string(),
            target,
            handler: handler.to_string(),
        });
        Ok(())
    }

    pub fn disconnect(&mut self, source: NodeId, signal: &str, target: NodeId, handler: &str) -> bool {
        match self.table.get_mut(&(source, signal.to_string())) {
            Some(subs) => {
                let before = subs.len();
                subs.retain(|c| !(c.target == target && c.handler == handler));
                subs.len() != before
            }
            None => false,
        }
    }

    pub fn subscribers(&self, source: NodeId, signal: &str) -> &[Connection] {
        self.table
            .get(&(source, signal.to_string()))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Delivers `signal` from `source` to each subscriber through `deliver`.
    ///
    /// `deliver` receives the hub so handlers may emit other signals; emitting a
    /// signal that is currently being delivered fails with `Reentrant`.
    pub fn emit<E, F>(&mut self, source: NodeId, signal: &str, mut deliver: F) -> Result<usize, E>
    where
        E: From<SceneError>,
        F: FnMut(&mut SignalHub, &Connection) -> Result<(), E>,
    {
        let key = (source, signal.to_string());
        if self.in_flight.contains(&key) {
            return Err(SceneError::Reentrant { signal: signal.to_string() }.into());
        }
        let subs = self.subscribers(source, signal).to_vec();
        if subs.is_empty() {
            return Ok(0);
        }
        self.in_flight.push(key);
        let mut result = Ok(subs.len());
        for conn in &subs {
            if let Err(e) = deliver(self, conn) {
                result = Err(e);
                break;
            }
        }
        self.in_flight.pop();
        result
    }
}
