use std::fmt;

use super::context::Ctx;
use super::RuntimeError;
use crate::devices::PortHandle;
use crate::math::Vec3;
use crate::physics::BodyKind;
use crate::scenegraph::NodeId;
use crate::sceneio::TraceRecord;

pub const BAUD: u32 = 9600;
pub const RX_BUFFER: usize = 1000;
/// Height above `stopping` at which the platform halts.
pub const HALT_OFFSET: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlatformState {
    Idle,
    Rising,
    Arrived,
}

impl fmt::Display for PlatformState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PlatformState::Idle => "Idle",
            PlatformState::Rising => "Rising",
            PlatformState::Arrived => "Arrived",
        })
    }
}

/// Lifting platform: rises on a button press and drives the haptic motors
/// through the serial link while moving.
#[derive(Debug, Clone)]
pub struct Footplate {
    pub state: PlatformState,
    pub force: f64,
    pub stopping: f64,
    pub port: Option<PortHandle>,
    upper: Option<NodeId>,
    player: Option<NodeId>,
    origin: Option<NodeId>,
    camera: Option<NodeId>,
    timer: Option<NodeId>,
    arrow: Option<NodeId>,
}

impl Footplate {
    pub fn new(me: NodeId, ctx: &Ctx) -> Result<Self, RuntimeError> {
        if ctx.world.body(me).map(|b| b.kind) != Some(BodyKind::Kinematic) {
            return Err(RuntimeError::Config {
                node: ctx.path(me),
                message: "footplate behavior needs a KinematicBody".into(),
            });
        }
        Ok(Self {
            state: PlatformState::Idle,
            force: ctx.number(me, "force", 90.0)?,
            stopping: 0.0,
            port: None,
            upper: None,
            player: None,
            origin: None,
            camera: None,
            timer: None,
            arrow: None,
        })
    }

    pub fn ready(&mut self, me: NodeId, ctx: &mut Ctx) -> Result<(), RuntimeError> {
        if let Some(timer) = ctx.optional(me, "timer", "Timer")? {
            ctx.connect(timer, "timeout", me, "_on_timer_timeout")?;
            self.timer = Some(timer);
        }
        let upper = ctx.resolve(me, ctx.param(me, "upper").unwrap_or("../Environment/UpperFloor1"))?;
        self.upper = Some(upper);
        self.stopping = ctx.tree.translation(upper).y.trunc();
        self.player = ctx.optional(me, "player", "Player")?;
        self.origin = ctx.optional(me, "origin", "Player/PlayerOrigin")?;
        self.camera = ctx.optional(me, "camera", "Player/PlayerOrigin/Head")?;
        self.arrow = ctx.optional(me, "arrow", "Player/TeleportArrow")?;
        if let Some(button) = ctx.optional(me, "button", "../Environment/Button")? {
            ctx.connect(button, "pressed", me, "_move_platform_with_button")?;
        }

        // an attached device wins over the emulated board
        let ports = ctx.serial.list_ports();
        let name = ports.last().expect("virtual port always listed");
        let port = ctx.serial.open(name, BAUD, RX_BUFFER)?;
        ctx.serial.flush(port, ctx.frame)?;
        log::debug!("{}: port {} open, {} bytes available", ctx.path(me), name, ctx.serial.get_available(port)?);
        self.port = Some(port);
        ctx.sync_serial();
        Ok(())
    }

    pub fn on_signal(&mut self, me: NodeId, handler: &str, ctx: &mut Ctx) -> Result<(), RuntimeError> {
        match handler {
            "_move_platform_with_button" => self.press(me, ctx),
            _ => Ok(()),
        }
    }

    fn press(&mut self, me: NodeId, ctx: &mut Ctx) -> Result<(), RuntimeError> {
        if self.state != PlatformState::Idle {
            ctx.record(
                TraceRecord::warning(ctx.frame, "IgnoredPress")
                    .field("node", ctx.path(me))
                    .field("state", self.state.to_string()),
            );
            return Ok(());
        }
        if let Some(p) = self.player {
            ctx.tree.set_translation(p, Vec3::new(1.7, 0.0, 0.8));
        }
        for n in [self.origin, self.camera].into_iter().flatten() {
            ctx.tree.set_translation(n, Vec3::new(-1.7, 0.0, -0.8));
        }
        if let Some(t) = self.timer {
            ctx.tree.stop_timer(t)?;
        }
        if let Some(a) = self.arrow {
            ctx.tree.set_visible(a, false);
        }
        self.state = PlatformState::Rising;
        let y = ctx.tree.translation(me).y;
        ctx.record(TraceRecord::platform_state(ctx.frame, &ctx.path(me), "Rising", y));
        self.send(b"h", ctx)
    }

    fn send(&mut self, byte: &[u8], ctx: &mut Ctx) -> Result<(), RuntimeError> {
        let port = self.port.expect("port opened in ready");
        ctx.serial.write(port, byte, ctx.frame)?;
        ctx.serial.flush(port, ctx.frame)?;
        ctx.sync_serial();
        Ok(())
    }

    pub fn physics_process(&mut self, me: NodeId, ctx: &mut Ctx) -> Result<(), RuntimeError> {
        if self.state != PlatformState::Rising {
            return Ok(());
        }
        let dt = ctx.world.dt();
        let velocity = Vec3::new(0.0, self.force * dt, 0.0);
        ctx.world.move_and_slide(&mut ctx.tree, me, velocity, dt)?;
        let h = ctx.tree.translation(me).y;
        if h >= self.stopping + HALT_OFFSET {
            self.force = 0.0;
            self.state = PlatformState::Arrived;
            ctx.record(TraceRecord::platform_state(ctx.frame, &ctx.path(me), "Arrived", h));
            self.send(b"l", ctx)?;
        }
        Ok(())
    }
}
