use std::collections::BTreeMap;

use super::RuntimeError;
use crate::devices::{SerialBus, TrackedDevices};
use crate::math::Vec3;
use crate::scenegraph::{NodeId, SignalHub};
use crate::sceneio::TraceRecord;
use crate::{PhysicsWorld, SceneTree};

/// One applied torque impulse with the angular velocity around it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImpulseLog {
    pub tick: u64,
    pub board: NodeId,
    pub torque: Vec3<f64>,
    pub omega_before: Vec3<f64>,
    pub omega_after: Vec3<f64>,
}

/// Everything a behaviour may touch.
pub struct Ctx {
    pub tree: SceneTree,
    pub world: PhysicsWorld,
    pub hub: SignalHub,
    pub serial: SerialBus,
    pub devices: TrackedDevices,
    pub params: BTreeMap<NodeId, Vec<(String, String)>>,
    pub records: Vec<TraceRecord>,
    pub impulses: Vec<ImpulseLog>,
    /// Tick being produced by the current frame.
    pub frame: u64,
}

impl Ctx {
    pub fn param(&self, id: NodeId, key: &str) -> Option<&str> {
        self.params.get(&id)?.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn number(&self, id: NodeId, key: &str, default: f64) -> Result<f64, RuntimeError> {
        match self.param(id, key) {
            None => Ok(default),
            Some(v) => v.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(|| RuntimeError::Config {
                node: self.tree.path_of(id),
                message: format!("{key} must be a number, got {v:?}"),
            }),
        }
    }

    pub fn flag(&self, id: NodeId, key: &str, default: bool) -> Result<bool, RuntimeError> {
        match self.param(id, key) {
            None => Ok(default),
            Some("true") => Ok(true),
            Some("false") => Ok(false),
            Some(v) => Err(RuntimeError::Config {
                node: self.tree.path_of(id),
                message: format!("{key} must be true or false, got {v:?}"),
            }),
        }
    }

    pub fn resolve(&self, from: NodeId, path: &str) -> Result<NodeId, RuntimeError> {
        self.tree.get_node(from, path).map_err(|_| RuntimeError::MissingNode {
            from: self.tree.path_of(from),
            path: path.to_string(),
        })
    }

    /// Node named by parameter `key`, or `default` when unset. An explicit
    /// parameter must resolve; a missing default yields `None`.
    pub fn optional(&self, from: NodeId, key: &str, default: &str) -> Result<Option<NodeId>, RuntimeError> {
        match self.param(from, key) {
            Some(p) => self.resolve(from, p).map(Some),
            None => Ok(self.tree.get_node(from, default).ok()),
        }
    }

    pub fn connect(&mut self, source: NodeId, signal: &str, target: NodeId, handler: &str) -> Result<(), RuntimeError> {
        self.hub.connect(&self.tree, source, signal, target, handler)?;
        Ok(())
    }

    pub fn record(&mut self, r: TraceRecord) {
        self.records.push(r);
    }

    /// Moves serial trace records into the main stream.
    pub fn sync_serial(&mut self) {
        let mut rs = self.serial.take_records();
        self.records.append(&mut rs);
    }

    pub fn path(&self, id: NodeId) -> String {
        self.tree.path_of(id)
    }
}
