//! Gameplay behaviours and the frame loop that drives them.
//!
//! Each frame produces one physics tick `k` in this order:
//!
//! 1. tracked devices are sampled at `k / 90` s and bound controllers posed;
//! 2. pending ready handlers run (first frame only);
//! 3. scripted presses and trigger changes due by tick `k` are applied;
//! 4. process handlers run in tree order;
//! 5. timers count down and emit `timeout`;
//! 6. physics-process handlers run (the footplate moves here);
//! 7. the physics world steps;
//! 8. area events are traced and delivered as signals;
//! 9. the serial link delivers bytes due by tick `k`;
//! 10. transforms are sampled every `sample_stride` ticks and on the last tick.

mod bridge;
mod context;
mod footplate;
mod player;
mod teleport;

use std::collections::BTreeMap;
use std::io::{self, Write};

use thiserror::Error;

pub use bridge::{Bridge, BOARD_TORQUE, FOOT_AREAS};
pub use context::{Ctx, ImpulseLog};
pub use footplate::{Footplate, PlatformState, HALT_OFFSET};
pub use player::{Player, FLOOR_NAMES};
pub use teleport::{teleport, Teleport};

use crate::devices::{Button, Role, SerialBus, SerialError, TrackedDevices, Transport};
use crate::math::{Quat, Vec3};
use crate::physics::{BodyKind, PhysicsError};
use crate::scenegraph::{Lifecycle, NodeId, NodeKind, SceneError, SignalHub};
use crate::sceneio::{self, Command, FormatError, ScenarioDoc, SceneDoc, TraceRecord};
use crate::TICK_RATE;

#[derive(Debug, Error)]
pub enum RuntimeError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("{node}: {message}")]
    Config { node: String, message: String },
    #[error("node {path:?} not found from {from}")]
    MissingNode { from: String, path: String },
    #[error("scenario: {0}")]
    Scenario(String),
    #[error(transparent)]
    Scene(#[from] SceneError),
    #[error(transparent)]
    Physics(#[from] PhysicsError),
    #[error(transparent)]
    Serial(#[from] SerialError),
    #[error("trace output: {0}")]
    Io(#[from] io::Error),
}

impl RuntimeError {
    /// Problems in the scene or scenario rather than during simulation.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            RuntimeError::Format(_) | RuntimeError::Config { .. } | RuntimeError::MissingNode { .. } | RuntimeError::Scenario(_)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuntimeOptions {
    /// Ticks between transform samples; at least 1.
    pub sample_stride: u64,
    pub transport: Transport,
}

impl Default for RuntimeOptions {
    fn default() -> Self {
        Self { sample_stride: 9, transport: Transport::Virtual }
    }
}

#[derive(Debug, Clone)]
pub enum Behavior {
    Footplate(Footplate),
    Player(Player),
    Bridge(Bridge),
    Teleport(Teleport),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RunSummary {
    pub ticks: u64,
    pub records: u64,
}

/// First tick at which a command scheduled for `t` seconds applies.
pub fn due_tick(t: f64) -> u64 {
    ((t * TICK_RATE as f64 - 1e-9).ceil().max(1.0)) as u64
}

/// Ticks needed to cover `t` seconds.
pub fn ticks_for(t: f64) -> u64 {
    (t * TICK_RATE as f64 - 1e-9).ceil().max(0.0) as u64
}

pub struct Runtime {
    ctx: Ctx,
    behaviors: BTreeMap<NodeId, Behavior>,
    order: Vec<NodeId>,
    bindings: Vec<(NodeId, Role)>,
    sampled: Vec<NodeId>,
    commands: Vec<(u64, Command)>,
    cursor: usize,
    end_tick: u64,
    stride: u64,
}

fn quat_of(rotation: Option<[f64; 4]>) -> Quat<f64> {
    match rotation {
        Some([x, y, z, angle]) => Quat::from_axis_angle(Vec3::new(x, y, z), angle),
        None => Quat::identity(),
    }
}

impl Runtime {
    pub fn new(scene: &SceneDoc, scenario: &ScenarioDoc, options: RuntimeOptions) -> Result<Self, RuntimeError> {
        if options.sample_stride == 0 {
            return Err(RuntimeError::Scenario("sample stride must be at least 1".into()));
        }
        let loaded = sceneio::load_world(scene)?;
        let mut ctx = Ctx {
            tree: loaded.tree,
            world: loaded.world,
            hub: SignalHub::new(),
            serial: SerialBus::with_transport(TICK_RATE, &options.transport),
            devices: TrackedDevices::new(),
            params: loaded.params,
            records: Vec::new(),
            impulses: Vec::new(),
            frame: 0,
        };

        let mut commands = Vec::new();
        for c in &scenario.commands {
            match &c.command {
                Command::Pose { role, position: [x, y, z], rotation } => {
                    ctx.devices.add_key(*role, c.time, Vec3::new(*x, *y, *z), quat_of(*rotation));
                }
                Command::Press { path } => {
                    ctx.tree
                        .get_node(ctx.tree.root(), path)
                        .map_err(|_| RuntimeError::Scenario(format!("press target {path:?} is not in the scene")))?;
                    commands.push((due_tick(c.time), c.command.clone()));
                }
                Command::Trigger { .. } => commands.push((due_tick(c.time), c.command.clone())),
            }
        }

        let mut behaviors = BTreeMap::new();
        let mut order = Vec::new();
        let mut bindings = Vec::new();
        let mut sampled = Vec::new();
        for id in ctx.tree.preorder() {
            if matches!(ctx.tree.kind(id), NodeKind::Controller | NodeKind::Camera) {
                if let Some(role) = ctx.param(id, "role") {
                    let role = role.parse().map_err(|_| RuntimeError::Config {
                        node: ctx.path(id),
                        message: format!("unknown role {role:?}"),
                    })?;
                    bindings.push((id, role));
                }
            }
            let moving = ctx.world.body(id).is_some_and(|b| matches!(b.kind, BodyKind::Rigid | BodyKind::Kinematic));
            if moving || ctx.tree.kind(id) == NodeKind::Origin {
                sampled.push(id);
            }
            let Some(kind) = ctx.tree.behavior(id).map(str::to_string) else { continue };
            let b = match kind.as_str() {
                "footplate" => Behavior::Footplate(Footplate::new(id, &ctx)?),
                "player" => Behavior::Player(Player::new()),
                "bridge" => Behavior::Bridge(Bridge::new(id, &ctx)?),
                "teleport" => Behavior::Teleport(Teleport::new(id, &ctx)?),
                other => {
                    return Err(RuntimeError::Config { node: ctx.path(id), message: format!("unknown behavior {other:?}") })
                }
            };
            behaviors.insert(id, b);
            order.push(id);
        }

        Ok(Self {
            ctx,
            behaviors,
            order,
            bindings,
            sampled,
            commands,
            cursor: 0,
            end_tick: ticks_for(scenario.duration()),
            stride: options.sample_stride,
        })
    }

    /// Parses and builds a runtime from scene and scenario text.
    pub fn from_text(scene: &str, scenario: &str, options: RuntimeOptions) -> Result<Self, RuntimeError> {
        let scene = sceneio::parse_scene(scene)?;
        let scenario = sceneio::parse_scenario(scenario)?;
        Self::new(&scene, &scenario, options)
    }

    pub fn tick(&self) -> u64 {
        self.ctx.world.tick()
    }

    pub fn time(&self) -> f64 {
        self.ctx.world.time()
    }

    pub fn end_tick(&self) -> u64 {
        self.end_tick
    }

    pub fn is_finished(&self) -> bool {
        self.tick() >= self.end_tick
    }

    pub fn tree(&self) -> &crate::SceneTree {
        &self.ctx.tree
    }

    pub fn world(&self) -> &crate::PhysicsWorld {
        &self.ctx.world
    }

    pub fn world_mut(&mut self) -> &mut crate::PhysicsWorld {
        &mut self.ctx.world
    }

    pub fn serial(&self) -> &SerialBus {
        &self.ctx.serial
    }

    pub fn devices(&self) -> &TrackedDevices {
        &self.ctx.devices
    }

    pub fn impulses(&self) -> &[ImpulseLog] {
        &self.ctx.impulses
    }

    pub fn node(&self, path: &str) -> Option<NodeId> {
        self.ctx.tree.get_node(self.ctx.tree.root(), path).ok()
    }

    pub fn behavior(&self, id: NodeId) -> Option<&Behavior> {
        self.behaviors.get(&id)
    }

    pub fn behavior_mut(&mut self, id: NodeId) -> Option<&mut Behavior> {
        self.behaviors.get_mut(&id)
    }

    pub fn footplate(&self, id: NodeId) -> Option<&Footplate> {
        match self.behaviors.get(&id) {
            Some(Behavior::Footplate(f)) => Some(f),
            _ => None,
        }
    }

    pub fn player(&self, id: NodeId) -> Option<&Player> {
        match self.behaviors.get(&id) {
            Some(Behavior::Player(p)) => Some(p),
            _ => None,
        }
    }

    pub fn teleporter(&self, id: NodeId) -> Option<&Teleport> {
        match self.behaviors.get(&id) {
            Some(Behavior::Teleport(t)) => Some(t),
            _ => None,
        }
    }

    /// Records emitted so far that have not been taken.
    pub fn records(&self) -> &[TraceRecord] {
        &self.ctx.records
    }

    pub fn take_records(&mut self) -> Vec<TraceRecord> {
        std::mem::take(&mut self.ctx.records)
    }

    /// Emits `pressed` from the node at `path`, as a scripted press would.
    pub fn press(&mut self, path: &str) -> Result<(), RuntimeError> {
        let id = self
            .node(path)
            .ok_or_else(|| RuntimeError::Scenario(format!("press target {path:?} is not in the scene")))?;
        let n = self.emit(id, "pressed", None)?;
        if n == 0 {
            let r = TraceRecord::warning(self.ctx.frame, "UnhandledPress").field("node", self.ctx.path(id));
            self.ctx.record(r);
        }
        Ok(())
    }

    /// Sets a hand trigger and emits the controller button signal.
    pub fn trigger(&mut self, role: Role, down: bool) -> Result<(), RuntimeError> {
        if self.ctx.devices.set_button(role, Button::Trigger, down) {
            let signal = if down { "button_pressed" } else { "button_released" };
            let hands: Vec<NodeId> = self.bindings.iter().filter(|(_, r)| *r == role).map(|(id, _)| *id).collect();
            for id in hands {
                self.emit(id, signal, None)?;
            }
        }
        Ok(())
    }

    fn emit(&mut self, source: NodeId, signal: &str, arg: Option<NodeId>) -> Result<usize, RuntimeError> {
        let mut hub = std::mem::take(&mut self.ctx.hub);
        let behaviors = &mut self.behaviors;
        let ctx = &mut self.ctx;
        let result = hub.emit(source, signal, |_, conn| {
            let Some(b) = behaviors.get_mut(&conn.target) else { return Ok(()) };
            match b {
                Behavior::Footplate(f) => f.on_signal(conn.target, &conn.handler, ctx),
                Behavior::Player(p) => match arg {
                    Some(body) => p.on_signal(&conn.handler, body, ctx),
                    None => Ok(()),
                },
                Behavior::Bridge(br) => match arg {
                    Some(area) => br.on_signal(&conn.handler, conn.source, area, ctx),
                    None => Ok(()),
                },
                Behavior::Teleport(t) => t.on_signal(conn.target, &conn.handler, ctx),
            }
        });
        self.ctx.hub = hub;
        result
    }

    fn ready(&mut self, id: NodeId) -> Result<(), RuntimeError> {
        let ctx = &mut self.ctx;
        match self.behaviors.get_mut(&id) {
            Some(Behavior::Footplate(f)) => f.ready(id, ctx),
            Some(Behavior::Player(p)) => p.ready(id, ctx),
            Some(Behavior::Bridge(b)) => b.ready(id, ctx),
            Some(Behavior::Teleport(t)) => t.ready(id, ctx),
            None => Ok(()),
        }
    }

    fn process(&mut self, id: NodeId) -> Result<(), RuntimeError> {
        let ctx = &mut self.ctx;
        match self.behaviors.get_mut(&id) {
            Some(Behavior::Player(p)) => p.process(ctx),
            Some(Behavior::Teleport(t)) => t.process(id, ctx),
            _ => Ok(()),
        }
    }

    fn physics_process(&mut self, id: NodeId) -> Result<(), RuntimeError> {
        let ctx = &mut self.ctx;
        match self.behaviors.get_mut(&id) {
            Some(Behavior::Footplate(f)) => f.physics_process(id, ctx),
            _ => Ok(()),
        }
    }

    /// Runs one frame, producing tick `self.tick() + 1`.
    pub fn step(&mut self) -> Result<(), RuntimeError> {
        let k = self.ctx.world.tick() + 1;
        self.ctx.frame = k;

        let t = k as f64 / TICK_RATE as f64;
        self.ctx.devices.sample(t);
        for &(id, role) in &self.bindings {
            if self.ctx.devices.has_track(role) {
                let pose = self.ctx.devices.device(role).pose;
                self.ctx.tree.set_local(id, pose);
            }
        }

        let plan = self.ctx.tree.lifecycle_plan();
        for step in &plan {
            if let Lifecycle::Ready(id) = *step {
                self.ready(id)?;
            }
        }
        if k == 1 {
            self.ctx.tree.start_autostart_timers();
        }

        while let Some((due, cmd)) = self.commands.get(self.cursor).cloned() {
            if due > k {
                break;
            }
            self.cursor += 1;
            match cmd {
                Command::Press { path } => self.press(&path)?,
                Command::Trigger { role, down } => self.trigger(role, down)?,
                Command::Pose { .. } => {}
            }
        }

        for step in &plan {
            if let Lifecycle::Process(id) = *step {
                self.process(id)?;
            }
        }

        for timer in self.ctx.tree.advance_timers() {
            self.emit(timer, "timeout", None)?;
        }

        for i in 0..self.order.len() {
            self.physics_process(self.order[i])?;
        }

        let events = self.ctx.world.step(&mut self.ctx.tree)?;
        for e in events {
            let r = TraceRecord::area(e.tick, e.kind.is_enter(), &self.ctx.path(e.area), &self.ctx.path(e.other));
            self.ctx.record(r);
            self.emit(e.area, e.kind.signal(), Some(e.other))?;
        }

        self.ctx.serial.pump(k)?;
        self.ctx.sync_serial();

        if k.is_multiple_of(self.stride) || k == self.end_tick {
            for &id in &self.sampled {
                let g = self.ctx.tree.global_transform(id);
                let (p, q) = (g.position, g.rotation);
                let r = TraceRecord::transform_sample(k, &self.ctx.path(id), [p.x, p.y, p.z], [q.w, q.x, q.y, q.z]);
                self.ctx.records.push(r);
            }
        }
        Ok(())
    }

    /// Steps until the scripted end.
    pub fn run(&mut self) -> Result<RunSummary, RuntimeError> {
        while !self.is_finished() {
            self.step()?;
        }
        Ok(RunSummary { ticks: self.tick(), records: self.ctx.records.len() as u64 })
    }

    /// Steps until the scripted end, writing each frame's records to `sink`.
    pub fn run_to<W: Write>(&mut self, sink: &mut W) -> Result<RunSummary, RuntimeError> {
        let mut written = 0;
        while !self.is_finished() {
            self.step()?;
            for r in self.ctx.records.drain(..) {
                sceneio::write_trace(sink, &r, TICK_RATE)?;
                written += 1;
            }
        }
        sink.flush()?;
        Ok(RunSummary { ticks: self.tick(), records: written })
    }
}
