use super::context::Ctx;
use super::RuntimeError;
use crate::math::{Transform, Vec3};
use crate::physics::BodyKind;
use crate::scenegraph::NodeId;
use crate::sceneio::TraceRecord;

/// Minimum up-component of a surface normal for a valid landing spot.
pub const FLOOR_NORMAL_Y: f64 = 0.7;

/// Hand-trigger teleport: aim along the hand's -z, release to move the rig.
#[derive(Debug, Clone)]
pub struct Teleport {
    pub enabled: bool,
    pub range: f64,
    pub held: bool,
    pub endpoint: Option<Vec3<f64>>,
    origin: Option<NodeId>,
    arrow: Option<NodeId>,
}

impl Teleport {
    pub fn new(me: NodeId, ctx: &Ctx) -> Result<Self, RuntimeError> {
        Ok(Self {
            enabled: ctx.flag(me, "enabled", false)?,
            range: ctx.number(me, "range", 20.0)?,
            held: false,
            endpoint: None,
            origin: None,
            arrow: None,
        })
    }

    pub fn ready(&mut self, me: NodeId, ctx: &mut Ctx) -> Result<(), RuntimeError> {
        self.origin = Some(ctx.resolve(me, ctx.param(me, "origin").unwrap_or(".."))?);
        self.arrow = ctx.optional(me, "arrow", "../../TeleportArrow")?;
        if let Some(a) = self.arrow {
            ctx.tree.set_visible(a, false);
        }
        ctx.connect(me, "button_pressed", me, "_on_trigger_pressed")?;
        ctx.connect(me, "button_released", me, "_on_trigger_released")?;
        Ok(())
    }

    /// Floor point under the hand's aim, if any.
    pub fn aim(&self, me: NodeId, ctx: &Ctx) -> Option<Vec3<f64>> {
        let hand = ctx.tree.global_transform(me);
        let dir = hand.rotation.rotate(Vec3::new(0.0, 0.0, -1.0));
        let hit = ctx.world.ray_cast(&ctx.tree, hand.position, dir, self.range, |_, b| b.kind == BodyKind::Static)?;
        (hit.normal.y >= FLOOR_NORMAL_Y).then_some(hit.point)
    }

    fn update(&mut self, me: NodeId, ctx: &mut Ctx) {
        self.endpoint = self.aim(me, ctx);
        if let Some(a) = self.arrow {
            ctx.tree.set_visible(a, self.endpoint.is_some());
            if let Some(p) = self.endpoint {
                let r = ctx.tree.global_transform(a).rotation;
                ctx.tree.set_global_transform(a, Transform::new(p, r));
            }
        }
    }

    pub fn on_signal(&mut self, me: NodeId, handler: &str, ctx: &mut Ctx) -> Result<(), RuntimeError> {
        if !self.enabled {
            return Ok(());
        }
        match handler {
            "_on_trigger_pressed" => {
                self.held = true;
                self.update(me, ctx);
            }
            "_on_trigger_released" if self.held => {
                self.held = false;
                self.update(me, ctx);
                if let Some(a) = self.arrow {
                    ctx.tree.set_visible(a, false);
                }
                match self.endpoint.take() {
                    Some(p) => teleport(ctx, self.origin.expect("ready"), p),
                    None => ctx.record(TraceRecord::warning(ctx.frame, "InvalidEndpoint").field("node", ctx.path(me))),
                }
            }
            _ => {}
        }
        Ok(())
    }

    pub fn process(&mut self, me: NodeId, ctx: &mut Ctx) -> Result<(), RuntimeError> {
        if self.enabled && self.held {
            self.update(me, ctx);
        }
        Ok(())
    }
}

/// Places `origin` at the world-space `endpoint`, keeping its orientation.
pub fn teleport(ctx: &mut Ctx, origin: NodeId, endpoint: Vec3<f64>) {
    let r = ctx.tree.global_transform(origin).rotation;
    ctx.tree.set_global_transform(origin, Transform::new(endpoint, r));
    let p = ctx.tree.global_transform(origin).position;
    ctx.record(TraceRecord::teleport(ctx.frame, &ctx.path(origin), [p.x, p.y, p.z]));
}
