use std::fmt;

use super::{SceneError, Timer};
use crate::math::{Quat, Transform, Vec3};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Spatial,
    PhysicsBody,
    Area,
    Camera,
    Origin,
    Controller,
    Timer,
    MeshStub,
}

/// Everything needed to create a node.
#[derive(Debug, Clone)]
pub struct NodeSpec<T: Scalar> {
    pub name: String,
    pub kind: NodeKind,
    pub local: Transform<T>,
    pub behavior: Option<String>,
    pub timer: Option<Timer<T>>,
}

impl<T: Scalar> NodeSpec<T> {
    pub fn new(name: impl Into<String>, kind: NodeKind) -> Self {
        Self {
            name: name.into(),
            kind,
            local: Transform::identity(),
            behavior: None,
            timer: None,
        }
    }

    pub fn at(mut self, position: Vec3<T>) -> Self {
        self.local.position = position;
        self
    }

    pub fn with_local(mut self, local: Transform<T>) -> Self {
        self.local = local;
        self
    }

    pub fn with_behavior(mut self, behavior: impl Into<String>) -> Self {
        self.behavior = Some(behavior.into());
        self
    }

    pub fn with_timer(mut self, timer: Timer<T>) -> Self {
        self.timer = Some(timer);
        self
    }
}

/// One scheduled lifecycle callback.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lifecycle {
    Ready(NodeId),
    Process(NodeId),
}

#[derive(Debug, Clone)]
struct NodeData<T: Scalar> {
    name: String,
    kind: NodeKind,
    local: Transform<T>,
    parent: Option<NodeId>,
    children: Vec<NodeId>,
    behavior: Option<String>,
    visible: bool,
    ready_done: bool,
    timer: Option<Timer<T>>,
}

#[derive(Debug, Clone)]
pub struct SceneTree<T: Scalar> {
    nodes: Vec<NodeData<T>>,
    tick_rate: u32,
}

impl<T: Scalar> Default for SceneTree<T> {
    fn default() -> Self {
        Self::new(crate::TICK_RATE)
    }
}

fn valid_name(name: &str) -> bool {
    !name.is_empty() && !name.contains('/') && name != "." && name != ".."
}

impl<T: Scalar> SceneTree<T> {
    pub fn new(tick_rate: u32) -> Self {
        let root = NodeData {
            name: "root".to_string(),
            kind: NodeKind::Spatial,
            local: Transform::identity(),
            parent: None,
            children: Vec::new(),
            behavior: None,
            visible: true,
            ready_done: false,
            timer: None,
        };
        Self { nodes: vec![root], tick_rate }
    }

    pub fn root(&self) -> NodeId {
        NodeId(0)
    }

    pub fn tick_rate(&self) -> u32 {
        self.tick_rate
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.len() <= 1
    }

    pub fn contains(&self, id: NodeId) -> bool {
        id.index() < self.nodes.len()
    }

    fn node(&self, id: NodeId) -> &NodeData<T> {
        &self.nodes[id.index()]
    }

    fn node_mut(&mut self, id: NodeId) -> &mut NodeData<T> {
        &mut self.nodes[id.index()]
    }

    /// Creates a detached node. Attach it with [`SceneTree::add_child`].
    pub fn create(&mut self, spec: NodeSpec<T>) -> Result<NodeId, SceneError> {
        if !valid_name(&spec.name) {
            return Err(SceneError::InvalidName(spec.name));
        }
        let id = NodeId(self.nodes.len() as u32);
        self.nodes.push(NodeData {
            name: spec.name,
            kind: spec.kind,
            local: Transform::new(spec.local.position, spec.local.rotation),
            parent: None,
            children: Vec::new(),
            behavior: spec.behavior,
            visible: true,
            ready_done: false,
            timer: spec.timer,
        });
        Ok(id)
    }

    /// Appends `child` as the last child of `parent`.
    pub fn add_child(&mut self, parent: NodeId, child: NodeId) -> Result<NodeId, SceneError> {
        if self.is_ancestor_or_self(child, parent) {
            return Err(SceneError::CycleDetected {
                parent: self.node(parent).name.clone(),
                child: self.node(child).name.clone(),
            });
        }
        if self.node(child).parent.is_some() {
            return Err(SceneError::AlreadyAttached(self.node(child).name.clone()));
        }
        let name = &self.node(child).name;
        if self.child_named(parent, name).is_some() {
            return Err(SceneError::DuplicateName(name.clone()));
        }
        self.node_mut(parent).children.push(child);
        self.node_mut(child).parent = Some(parent);
        Ok(child)
    }

    /// Creates a node and attaches it under `parent` in one step.
    pub fn spawn(&mut self, parent: NodeId, spec: NodeSpec<T>) -> Result<NodeId, SceneError> {
        if self.child_named(parent, &spec.name).is_some() {
            return Err(SceneError::DuplicateName(spec.name));
        }
        let id = self.create(spec)?;
        self.add_child(parent, id)
    }

    /// Moves an attached node under a new parent.
    pub fn reparent(&mut self, node: NodeId, new_parent: NodeId) -> Result<(), SceneError> {
        if self.is_ancestor_or_self(node, new_parent) {
            return Err(SceneError::CycleDetected {
                parent: self.node(new_parent).name.clone(),
                child: self.node(node).name.clone(),
            });
        }
        if self.child_named(new_parent, &self.node(node).name).is_some() {
            return Err(SceneError::DuplicateName(self.node(node).name.clone()));
        }
        if let Some(old) = self.node(node).parent {
            self.node_mut(old).children.retain(|c| *c != node);
        }
        self.node_mut(new_parent).children.push(node);
        self.node_mut(node).parent = Some(new_parent);
        Ok(())
    }

    fn is_ancestor_or_self(&self, candidate: NodeId, node: NodeId) -> bool {
        let mut cur = Some(node);
        while let Some(id) = cur {
            if id == candidate {
                return true;
            }
            cur = self.node(id).parent;
        }
        false
    }

    pub fn child_named(&self, parent: NodeId, name: &str) -> Option<NodeId> {
        self.node(parent)
            .children
            .iter()
            .copied()
            .find(|c| self.node(*c).name == name)
    }

    /// Resolves a `/`-separated path relative to `base`.
    ///
    /// A leading `/` starts from the root, `..` steps to the parent and `.` or
    /// empty segments are skipped, so `""` resolves to `base` itself.
    pub fn get_node(&self, base: NodeId, path: &str) -> Result<NodeId, SceneError> {
        let mut cur = if path.starts_with('/') { self.root() } else { base };
        for segment in path.split('/') {
            match segment {
                "" | "." => {}
                ".." => {
                    cur = self.node(cur).parent.ok_or_else(|| SceneError::NotFound {
                        segment: segment.to_string(),
                    })?;
                }
                name => {
                    cur = self.child_named(cur, name).ok_or_else(|| SceneError::NotFound {
                        segment: name.to_string(),
                    })?;
                }
            }
        }
        Ok(cur)
    }

    /// Absolute path; the root is `/`.
    pub fn path_of(&self, id: NodeId) -> String {
        let mut parts = Vec::new();
        let mut cur = id;
        while let Some(parent) = self.node(cur).parent {
            parts.push(self.node(cur).name.as_str());
            cur = parent;
        }
        if parts.is_empty() {
            return "/".to_string();
        }
        parts.reverse();
        let mut out = String::new();
        for p in parts {
            out.push('/');
            out.push_str(p);
        }
        out
    }

    pub fn name(&self, id: NodeId) -> &str {
        &self.node(id).name
    }

    pub fn kind(&self, id: NodeId) -> NodeKind {
        self.node(id).kind
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        self.node(id).parent
    }

    pub fn children(&self, id: NodeId) -> &[NodeId] {
        &self.node(id).children
    }

    pub fn behavior(&self, id: NodeId) -> Option<&str> {
        self.node(id).behavior.as_deref()
    }

    pub fn is_visible(&self, id: NodeId) -> bool {
        self.node(id).visible
    }

    pub fn set_visible(&mut self, id: NodeId, visible: bool) {
        self.node_mut(id).visible = visible;
    }

    pub fn local(&self, id: NodeId) -> Transform<T> {
        self.node(id).local
    }

    pub fn set_local(&mut self, id: NodeId, local: Transform<T>) {
        self.node_mut(id).local = Transform::new(local.position, local.rotation);
    }

    pub fn translation(&self, id: NodeId) -> Vec3<T> {
        self.node(id).local.position
    }

    /// Replaces the local position, leaving the orientation untouched.
    pub fn set_translation(&mut self, id: NodeId, p: Vec3<T>) {
        self.node_mut(id).local.position = p;
    }

    pub fn set_rotation(&mut self, id: NodeId, r: Quat<T>) {
        self.node_mut(id).local.rotation = r.normalized();
    }

    pub fn global_transform(&self, id: NodeId) -> Transform<T> {
        let node = self.node(id);
        match node.parent {
            Some(p) => self.global_transform(p).compose(&node.local),
            None => node.local,
        }
    }

    /// Sets the local transform so that the node's global pose becomes `global`.
    pub fn set_global_transform(&mut self, id: NodeId, global: Transform<T>) {
        let local = match self.node(id).parent {
            Some(p) => self.global_transform(p).inverse().compose(&global),
            None => global,
        };
        self.set_local(id, local);
    }

    /// Moves the node by a world-space offset, leaving other local components untouched.
    pub fn translate_global(&mut self, id: NodeId, delta: Vec3<T>) {
        let local_delta = match self.node(id).parent {
            Some(p) => self.global_transform(p).rotation.conjugate().rotate(delta),
            None => delta,
        };
        let mut local = self.local(id);
        local.position += local_delta;
        self.set_local(id, local);
    }

    /// Sets the world-space orientation, keeping the local translation.
    pub fn set_global_rotation(&mut self, id: NodeId, rotation: Quat<T>) {
        let mut local = self.local(id);
        local.rotation = match self.node(id).parent {
            Some(p) => self.global_transform(p).rotation.conjugate() * rotation,
            None => rotation,
        };
        self.set_local(id, local);
    }

    /// Attached nodes in pre-order, children in insertion order.
    pub fn preorder(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![self.root()];
        while let Some(id) = stack.pop() {
            out.push(id);
            stack.extend(self.node(id).children.iter().rev().copied());
        }
        out
    }

    /// Callbacks owed this tick: pending ready handlers, then process handlers.
    ///
    /// Marks the returned ready handlers as done, so each node's ready fires once.
    pub fn lifecycle_plan(&mut self) -> Vec<Lifecycle> {
        let order: Vec<NodeId> = self
            .preorder()
            .into_iter()
            .filter(|id| self.node(*id).behavior.is_some())
            .collect();
        let mut plan = Vec::with_capacity(order.len() * 2);
        for &id in &order {
            let node = self.node_mut(id);
            if !node.ready_done {
                node.ready_done = true;
                plan.push(Lifecycle::Ready(id));
            }
        }
        plan.extend(order.into_iter().map(Lifecycle::Process));
        plan
    }

    pub fn timer(&self, id: NodeId) -> Option<&Timer<T>> {
        self.node(id).timer.as_ref()
    }

    pub fn start_timer(&mut self, id: NodeId) -> Result<(), SceneError> {
        let rate = self.tick_rate;
        let node = self.node_mut(id);
        match node.timer.as_mut() {
            Some(t) => {
                t.start(rate);
                Ok(())
            }
            None => Err(SceneError::NotATimer(node.name.clone())),
        }
    }

    pub fn stop_timer(&mut self, id: NodeId) -> Result<(), SceneError> {
        let node = self.node_mut(id);
        match node.timer.as_mut() {
            Some(t) => {
                t.stop();
                Ok(())
            }
            None => Err(SceneError::NotATimer(node.name.clone())),
        }
    }

    /// Starts every autostart timer that is not yet running.
    pub fn start_autostart_timers(&mut self) {
        let rate = self.tick_rate;
        for node in &mut self.nodes {
            if let Some(t) = node.timer.as_mut() {
                if t.autostart && !t.is_running() {
                    t.start(rate);
                }
            }
        }
    }

    /// Counts all running timers down by one tick; returns those that elapsed, in pre-order.
    pub fn advance_timers(&mut self) -> Vec<NodeId> {
        let mut fired = Vec::new();
        for id in self.preorder() {
            if let Some(t) = self.node_mut(id).timer.as_mut() {
                if t.advance() {
                    fired.push(id);
                }
            }
        }
        fired
    }
}
