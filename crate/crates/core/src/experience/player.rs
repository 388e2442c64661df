use std::collections::BTreeSet;

use super::context::Ctx;
use super::RuntimeError;
use crate::scenegraph::NodeId;

/// Bodies that count as walkable floor.
pub const FLOOR_NAMES: [&str; 2] = ["BottomFloor", "UpperFloor1"];

/// Keeps the player's collision shape under the tracked rig while a foot is on a floor.
#[derive(Debug, Clone, Default)]
pub struct Player {
    pub changel: bool,
    pub changer: bool,
    left_foot: Option<NodeId>,
    right_foot: Option<NodeId>,
    origin: Option<NodeId>,
    collision: Option<NodeId>,
    left_floors: BTreeSet<NodeId>,
    right_floors: BTreeSet<NodeId>,
}

impl Player {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn collision(&self) -> Option<NodeId> {
        self.collision
    }

    pub fn origin(&self) -> Option<NodeId> {
        self.origin
    }

    pub fn ready(&mut self, me: NodeId, ctx: &mut Ctx) -> Result<(), RuntimeError> {
        let left = ctx.resolve(me, "PlayerOrigin/LeftFootController/LeftFootArea")?;
        let right = ctx.resolve(me, "PlayerOrigin/RightFootController/RightFootArea")?;
        self.origin = Some(ctx.resolve(me, "PlayerOrigin")?);
        self.collision = Some(ctx.resolve(me, "PlayerCollisionShape")?);
        ctx.connect(left, "body_entered", me, "_on_LeftFootArea_body_entered")?;
        ctx.connect(right, "body_entered", me, "_on_RightFootArea_body_entered")?;
        ctx.connect(left, "body_exited", me, "_on_LeftFootArea_body_exited")?;
        ctx.connect(right, "body_exited", me, "_on_RightFootArea_body_exited")?;
        self.left_foot = Some(left);
        self.right_foot = Some(right);
        Ok(())
    }

    /// Whether either foot stands somewhere other than the collision shape.
    fn feet_moved(&self, ctx: &Ctx) -> bool {
        let shape = ctx.tree.global_transform(self.collision.expect("ready")).position;
        [self.left_foot, self.right_foot]
            .into_iter()
            .flatten()
            .any(|f| ctx.tree.global_transform(f).position != shape)
    }

    pub fn on_signal(&mut self, handler: &str, body: NodeId, ctx: &mut Ctx) -> Result<(), RuntimeError> {
        if !FLOOR_NAMES.contains(&ctx.tree.name(body)) {
            return Ok(());
        }
        let moved = self.feet_moved(ctx);
        match handler {
            "_on_LeftFootArea_body_entered" => {
                self.left_floors.insert(body);
                self.changel |= moved;
            }
            "_on_RightFootArea_body_entered" => {
                self.right_floors.insert(body);
                self.changer |= moved;
            }
            "_on_LeftFootArea_body_exited" => {
                self.left_floors.remove(&body);
                self.changel &= !self.left_floors.is_empty();
            }
            "_on_RightFootArea_body_exited" => {
                self.right_floors.remove(&body);
                self.changer &= !self.right_floors.is_empty();
            }
            _ => {}
        }
        Ok(())
    }

    pub fn process(&mut self, ctx: &mut Ctx) -> Result<(), RuntimeError> {
        if self.changel || self.changer {
            let (origin, collision) = (self.origin.expect("ready"), self.collision.expect("ready"));
            let p = ctx.tree.translation(origin);
            ctx.tree.set_translation(collision, p);
        }
        Ok(())
    }
}
