use std::collections::BTreeMap;

use super::context::{Ctx, ImpulseLog};
use super::RuntimeError;
use crate::math::Vec3;
use crate::physics::BodyKind;
use crate::scenegraph::{ticks_for_period, NodeId, NodeKind};
use crate::sceneio::TraceRecord;

pub const FOOT_AREAS: [&str; 2] = ["RightFootArea", "LeftFootArea"];
pub const BOARD_TORQUE: Vec3<f64> = Vec3 { x: 0.02, y: 0.0, z: 0.0 };

/// Rocks each rigid board once when a foot steps onto it.
#[derive(Debug, Clone)]
pub struct Bridge {
    pub torque: Vec3<f64>,
    debounce_ticks: u64,
    boards: Vec<NodeId>,
    quiet_until: BTreeMap<NodeId, u64>,
}

impl Bridge {
    pub fn new(me: NodeId, ctx: &Ctx) -> Result<Self, RuntimeError> {
        let debounce = ctx.number(me, "debounce", 0.2)?;
        if debounce < 0.0 {
            return Err(RuntimeError::Config { node: ctx.path(me), message: "debounce must be >= 0".into() });
        }
        let debounce_ticks = if debounce == 0.0 { 0 } else { ticks_for_period(debounce, ctx.tree.tick_rate()) };
        Ok(Self { torque: BOARD_TORQUE, debounce_ticks, boards: Vec::new(), quiet_until: BTreeMap::new() })
    }

    pub fn boards(&self) -> &[NodeId] {
        &self.boards
    }

    /// Connects every rigid board below the bridge through its detection area.
    pub fn ready(&mut self, me: NodeId, ctx: &mut Ctx) -> Result<(), RuntimeError> {
        let mut stack = vec![me];
        let mut found = Vec::new();
        while let Some(n) = stack.pop() {
            for &c in ctx.tree.children(n).iter().rev() {
                stack.push(c);
            }
            if ctx.world.body(n).is_some_and(|b| b.kind == BodyKind::Rigid) {
                found.push(n);
            }
        }
        found.sort_by_key(|&b| ctx.path(b));
        for board in found {
            let areas: Vec<NodeId> =
                ctx.tree.children(board).iter().copied().filter(|&c| ctx.tree.kind(c) == NodeKind::Area).collect();
            for area in areas {
                ctx.connect(area, "area_entered", me, "_on_Board_area_entered")?;
            }
            self.boards.push(board);
        }
        Ok(())
    }

    pub fn on_signal(&mut self, handler: &str, source: NodeId, area: NodeId, ctx: &mut Ctx) -> Result<(), RuntimeError> {
        if handler != "_on_Board_area_entered" || !FOOT_AREAS.contains(&ctx.tree.name(area)) {
            return Ok(());
        }
        let board = ctx.tree.parent(source).expect("board area has a parent");
        if self.quiet_until.get(&board).is_some_and(|&t| ctx.frame < t) {
            return Ok(());
        }
        self.quiet_until.insert(board, ctx.frame + self.debounce_ticks);
        let before = ctx.world.body(board).and_then(|b| b.rigid).map(|r| r.angular_velocity).unwrap_or_default();
        ctx.world.apply_torque_impulse(&ctx.tree, board, self.torque)?;
        let after = ctx.world.body(board).and_then(|b| b.rigid).map(|r| r.angular_velocity).unwrap_or_default();
        let t = self.torque;
        ctx.impulses.push(ImpulseLog { tick: ctx.frame, board, torque: t, omega_before: before, omega_after: after });
        ctx.record(TraceRecord::impulse(ctx.frame, &ctx.path(board), [t.x, t.y, t.z]));
        Ok(())
    }
}
