use std::collections::{BTreeMap, BTreeSet};

use super::body::{Body, BodyKind};
use super::broadphase::{ordered, sweep_and_prune, Proxy};
use super::filter::{interacts, should_scan};
use super::shape::{contact, overlap, Shape};
use super::PhysicsError;
use crate::math::{Quat, Transform, Vec3};
use crate::scalar::Scalar;
use crate::scenegraph::{NodeId, SceneTree};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicsConfig<T> {
    pub gravity: Vec3<T>,
    /// Exponential angular damping rate λ (1/s); ω is scaled by exp(−λ·dt) per step.
    pub angular_damping: T,
    pub contact_margin: T,
    pub tick_rate: u32,
}

impl<T: Scalar> Default for PhysicsConfig<T> {
    fn default() -> Self {
        Self {
            gravity: Vec3::new(T::zero(), T::of(-9.8), T::zero()),
            angular_damping: T::one(),
            contact_margin: T::of(1e-3),
            tick_rate: crate::TICK_RATE,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ContactKind {
    AreaBodyEntered,
    AreaBodyExited,
    AreaAreaEntered,
    AreaAreaExited,
}

impl ContactKind {
    pub fn is_enter(self) -> bool {
        matches!(self, ContactKind::AreaBodyEntered | ContactKind::AreaAreaEntered)
    }

    /// Name of the signal the area emits for this event.
    pub fn signal(self) -> &'static str {
        match self {
            ContactKind::AreaBodyEntered => "body_entered",
            ContactKind::AreaBodyExited => "body_exited",
            ContactKind::AreaAreaEntered => "area_entered",
            ContactKind::AreaAreaExited => "area_exited",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ContactEvent {
    pub kind: ContactKind,
    pub area: NodeId,
    pub other: NodeId,
    pub tick: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlideResult<T> {
    pub displacement: Vec3<T>,
    pub blocked: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayHit<T> {
    pub node: NodeId,
    pub distance: T,
    pub point: Vec3<T>,
    pub normal: Vec3<T>,
}

#[derive(Debug, Clone)]
pub struct PhysicsWorld<T: Scalar> {
    bodies: BTreeMap<NodeId, Body<T>>,
    config: PhysicsConfig<T>,
    tick: u64,
    /// (area, other) pairs overlapping at the end of the last step.
    overlaps: BTreeSet<(NodeId, NodeId)>,
    queued_moves: Vec<(NodeId, Vec3<T>)>,
}

impl<T: Scalar> Default for PhysicsWorld<T> {
    fn default() -> Self {
        Self::new(PhysicsConfig::default())
    }
}

struct Posed<T: Scalar> {
    id: NodeId,
    pose: Transform<T>,
}

impl<T: Scalar> PhysicsWorld<T> {
    pub fn new(config: PhysicsConfig<T>) -> Self {
        Self {
            bodies: BTreeMap::new(),
            config,
            tick: 0,
            overlaps: BTreeSet::new(),
            queued_moves: Vec::new(),
        }
    }

    pub fn config(&self) -> &PhysicsConfig<T> {
        &self.config
    }

    pub fn config_mut(&mut self) -> &mut PhysicsConfig<T> {
        &mut self.config
    }

    pub fn dt(&self) -> T {
        T::one() / T::of(self.config.tick_rate as f64)
    }

    pub fn tick(&self) -> u64 {
        self.tick
    }

    /// Simulated seconds, computed from the tick count.
    pub fn time(&self) -> f64 {
        self.tick as f64 / self.config.tick_rate as f64
    }

    pub fn add_body(
        &mut self,
        tree: &SceneTree<T>,
        node: NodeId,
        body: Body<T>,
    ) -> Result<(), PhysicsError> {
        let name = tree.path_of(node);
        let invalid = |reason: &str| PhysicsError::InvalidBody { node: name.clone(), reason: reason.to_string() };
        if self.bodies.contains_key(&node) {
            return Err(PhysicsError::DuplicateBody(name));
        }
        if !body.shape.is_valid() {
            return Err(invalid("shape dimensions must be positive and finite"));
        }
        if body.filter.layer == 0 {
            return Err(invalid("at least one collision layer is required"));
        }
        match (body.kind, &body.rigid) {
            (BodyKind::Rigid, Some(r)) if !r.is_valid() => {
                return Err(invalid("mass and inertia must be positive and finite"))
            }
            (BodyKind::Rigid, None) => return Err(invalid("rigid body without rigid state")),
            (k, Some(_)) if k != BodyKind::Rigid => return Err(invalid("rigid state on a non-rigid body")),
            _ => {}
        }
        self.bodies.insert(node, body);
        Ok(())
    }

    pub fn body(&self, id: NodeId) -> Option<&Body<T>> {
        self.bodies.get(&id)
    }

    pub fn body_mut(&mut self, id: NodeId) -> Option<&mut Body<T>> {
        self.bodies.get_mut(&id)
    }

    pub fn bodies(&self) -> impl Iterator<Item = (NodeId, &Body<T>)> {
        self.bodies.iter().map(|(k, v)| (*k, v))
    }

    pub fn len(&self) -> usize {
        self.bodies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bodies.is_empty()
    }

    /// Current (area, other) overlap set.
    pub fn area_overlaps(&self) -> &BTreeSet<(NodeId, NodeId)> {
        &self.overlaps
    }

    fn require<'a>(&'a self, tree: &SceneTree<T>, id: NodeId) -> Result<&'a Body<T>, PhysicsError> {
        self.bodies.get(&id).ok_or_else(|| PhysicsError::NotABody(tree.path_of(id)))
    }

    fn require_kind(&self, tree: &SceneTree<T>, id: NodeId, kind: BodyKind) -> Result<(), PhysicsError> {
        let body = self.require(tree, id)?;
        if body.kind != kind {
            return Err(PhysicsError::WrongBodyKind {
                node: tree.path_of(id),
                expected: kind.as_str(),
                found: body.kind.as_str(),
            });
        }
        Ok(())
    }

    /// Directional scan test between two registered bodies.
    pub fn should_scan(&self, a: NodeId, b: NodeId) -> bool {
        match (self.bodies.get(&a), self.bodies.get(&b)) {
            (Some(x), Some(y)) => should_scan(&x.filter, &y.filter),
            _ => false,
        }
    }

    pub fn interacts(&self, a: NodeId, b: NodeId) -> bool {
        match (self.bodies.get(&a), self.bodies.get(&b)) {
            (Some(x), Some(y)) => interacts(&x.filter, &y.filter),
            _ => false,
        }
    }

    fn posed(&self, tree: &SceneTree<T>) -> Vec<Posed<T>> {
        self.bodies
            .keys()
            .map(|&id| Posed { id, pose: tree.global_transform(id) })
            .collect()
    }

    fn proxies(&self, posed: &[Posed<T>]) -> Vec<Proxy<T>> {
        let margin = self.config.contact_margin;
        posed
            .iter()
            .map(|p| {
                let body = &self.bodies[&p.id];
                Proxy { id: p.id, aabb: body.shape.aabb(&p.pose).inflate(margin), filter: body.filter }
            })
            .collect()
    }

    /// Candidate pairs: every filter-passing pair whose margin-inflated bounds overlap.
    pub fn broadphase_pairs(&self, tree: &SceneTree<T>) -> BTreeSet<(NodeId, NodeId)> {
        sweep_and_prune(&self.proxies(&self.posed(tree)))
    }

    /// Queues a kinematic move executed during the next [`PhysicsWorld::step`].
    pub fn queue_move(&mut self, id: NodeId, velocity: Vec3<T>) {
        self.queued_moves.push((id, velocity));
    }

    /// Advances one fixed step: integrate rigid bodies, run queued kinematic moves,
    /// recompute area overlaps, diff them into events, advance the tick.
    pub fn step(&mut self, tree: &mut SceneTree<T>) -> Result<Vec<ContactEvent>, PhysicsError> {
        let dt = self.dt();
        let rigid: Vec<NodeId> = self
            .bodies
            .iter()
            .filter(|(_, b)| b.kind == BodyKind::Rigid)
            .map(|(id, _)| *id)
            .collect();
        for id in rigid {
            self.integrate_rigid(tree, id, dt)?;
        }
        self.resolve_rigid_contacts(tree)?;

        for (id, velocity) in std::mem::take(&mut self.queued_moves) {
            self.move_and_slide(tree, id, velocity, dt)?;
        }

        let next_tick = self.tick + 1;
        let current = self.compute_area_overlaps(tree);
        let mut events: Vec<ContactEvent> = Vec::new();
        for &(area, other) in current.difference(&self.overlaps) {
            events.push(self.event(area, other, next_tick, true));
        }
        for &(area, other) in self.overlaps.difference(&current) {
            events.push(self.event(area, other, next_tick, false));
        }
        events.sort_by_cached_key(|e| (tree.path_of(e.area), tree.path_of(e.other)));
        self.overlaps = current;
        self.tick = next_tick;
        Ok(events)
    }

    fn event(&self, area: NodeId, other: NodeId, tick: u64, entered: bool) -> ContactEvent {
        let other_is_area = self.bodies.get(&other).is_some_and(|b| b.kind == BodyKind::Area);
        let kind = match (other_is_area, entered) {
            (false, true) => ContactKind::AreaBodyEntered,
            (false, false) => ContactKind::AreaBodyExited,
            (true, true) => ContactKind::AreaAreaEntered,
            (true, false) => ContactKind::AreaAreaExited,
        };
        ContactEvent { kind, area, other, tick }
    }

    /// Pairs (area, other) where the area scans `other` and the shapes overlap.
    pub fn compute_area_overlaps(&self, tree: &SceneTree<T>) -> BTreeSet<(NodeId, NodeId)> {
        let posed = self.posed(tree);
        let poses: BTreeMap<NodeId, Transform<T>> = posed.iter().map(|p| (p.id, p.pose)).collect();
        let mut out = BTreeSet::new();
        for (a, b) in sweep_and_prune(&self.proxies(&posed)) {
            let (ba, bb) = (&self.bodies[&a], &self.bodies[&b]);
            if ba.kind != BodyKind::Area && bb.kind != BodyKind::Area {
                continue;
            }
            if !overlap(&ba.shape, &poses[&a], &bb.shape, &poses[&b]) {
                continue;
            }
            if ba.kind == BodyKind::Area && should_scan(&ba.filter, &bb.filter) {
                out.insert((a, b));
            }
            if bb.kind == BodyKind::Area && should_scan(&bb.filter, &ba.filter) {
                out.insert((b, a));
            }
        }
        out
    }

    /// Semi-implicit Euler: v += g·dt, x += v·dt, then ω is damped and the
    /// orientation advanced by the rotation vector ω·dt.
    pub fn integrate_rigid(&mut self, tree: &mut SceneTree<T>, id: NodeId, dt: T) -> Result<(), PhysicsError> {
        self.require_kind(tree, id, BodyKind::Rigid)?;
        let gravity = self.config.gravity;
        let world_damping = self.config.angular_damping;
        let pose = tree.global_transform(id);
        let state = self.bodies.get_mut(&id).and_then(|b| b.rigid.as_mut()).expect("rigid state");

        state.linear_velocity += gravity * (state.gravity_scale * dt);
        let step = state.linear_velocity * dt;

        if let Some(r) = state.restoring {
            let relative = r.rest.conjugate() * pose.rotation;
            let theta = relative.twist_angle(r.axis);
            let torque = r.rest.rotate(r.axis) * (-r.stiffness * theta);
            let alpha = state.inverse_inertia_mul(pose.rotation, torque);
            state.angular_velocity += alpha * dt;
        }
        let lambda = state.angular_damping.unwrap_or(world_damping);
        if lambda != T::zero() {
            state.angular_velocity = state.angular_velocity * (-lambda * dt).exp();
        }
        let spin = state.angular_velocity * dt;
        let rotation = Quat::from_scaled_axis(spin) * pose.rotation;

        if !state.is_finite() || !step.is_finite() || !rotation.is_finite() {
            return Err(PhysicsError::NonFiniteState(tree.path_of(id)));
        }
        // untouched components stay bit-exact
        if step != Vec3::zero() {
            tree.translate_global(id, step);
        }
        if spin != Vec3::zero() {
            tree.set_global_rotation(id, rotation);
        }
        Ok(())
    }

    /// Restitution-free projection of rigid bodies out of solid bodies they interact with.
    fn resolve_rigid_contacts(&mut self, tree: &mut SceneTree<T>) -> Result<(), PhysicsError> {
        let pairs = self.broadphase_pairs(tree);
        for (a, b) in pairs {
            let (ka, kb) = (self.bodies[&a].kind, self.bodies[&b].kind);
            if ka == BodyKind::Area || kb == BodyKind::Area {
                continue;
            }
            if ka != BodyKind::Rigid && kb != BodyKind::Rigid {
                continue;
            }
            let (ta, tb) = (tree.global_transform(a), tree.global_transform(b));
            let c = match contact(&self.bodies[&a].shape, &ta, &self.bodies[&b].shape, &tb) {
                Some(c) if c.depth > T::zero() => c,
                _ => continue,
            };
            let inv_mass = |k: BodyKind, body: &Body<T>| match k {
                BodyKind::Rigid => T::one() / body.rigid.as_ref().expect("rigid state").mass,
                _ => T::zero(),
            };
            let wa = inv_mass(ka, &self.bodies[&a]);
            let wb = inv_mass(kb, &self.bodies[&b]);
            let w = wa + wb;
            let n = c.normal;

            let va = self.bodies[&a].rigid.map_or(Vec3::zero(), |r| r.linear_velocity);
            let vb = self.bodies[&b].rigid.map_or(Vec3::zero(), |r| r.linear_velocity);
            let approach = (vb - va).dot(n);
            let j = if approach < T::zero() { -approach / w } else { T::zero() };

            if wa > T::zero() {
                let share = c.depth * wa / w;
                tree.translate_global(a, -(n * share));
                let r = self.bodies.get_mut(&a).and_then(|x| x.rigid.as_mut()).expect("rigid state");
                r.linear_velocity -= n * (j * wa);
            }
            if wb > T::zero() {
                let share = c.depth * wb / w;
                tree.translate_global(b, n * share);
                let r = self.bodies.get_mut(&b).and_then(|x| x.rigid.as_mut()).expect("rigid state");
                r.linear_velocity += n * (j * wb);
            }
        }
        Ok(())
    }

    /// `ω += I⁻¹·τ`, applied immediately. Returns the change in angular velocity.
    pub fn apply_torque_impulse(
        &mut self,
        tree: &SceneTree<T>,
        id: NodeId,
        torque_impulse: Vec3<T>,
    ) -> Result<Vec3<T>, PhysicsError> {
        self.require_kind(tree, id, BodyKind::Rigid)?;
        let rotation = tree.global_transform(id).rotation;
        let state = self.bodies.get_mut(&id).and_then(|b| b.rigid.as_mut()).expect("rigid state");
        let delta = state.inverse_inertia_mul(rotation, torque_impulse);
        state.angular_velocity += delta;
        if !state.is_finite() {
            return Err(PhysicsError::NonFiniteState(tree.path_of(id)));
        }
        Ok(delta)
    }

    pub fn apply_impulse(&mut self, tree: &SceneTree<T>, id: NodeId, impulse: Vec3<T>) -> Result<(), PhysicsError> {
        self.require_kind(tree, id, BodyKind::Rigid)?;
        let state = self.bodies.get_mut(&id).and_then(|b| b.rigid.as_mut()).expect("rigid state");
        state.linear_velocity += impulse / state.mass;
        if !state.is_finite() {
            return Err(PhysicsError::NonFiniteState(tree.path_of(id)));
        }
        Ok(())
    }

    /// Moves a kinematic body by `velocity·dt`, stopping short of filter-passing
    /// static/kinematic bodies and sliding along them.
    ///
    /// The body is kept within the contact margin of obstacles without
    /// penetrating them; the motion component into each contact normal is removed.
    pub fn move_and_slide(
        &mut self,
        tree: &mut SceneTree<T>,
        id: NodeId,
        velocity: Vec3<T>,
        dt: T,
    ) -> Result<SlideResult<T>, PhysicsError> {
        self.require_kind(tree, id, BodyKind::Kinematic)?;
        let me = &self.bodies[&id];
        let margin = self.config.contact_margin;
        let skin = margin * T::half();
        let tolerance = margin * T::of(0.25);
        let probe: Shape<T> = me.shape.inflated(skin);

        let obstacles: Vec<(Shape<T>, Transform<T>)> = self
            .bodies
            .iter()
            .filter(|(other, b)| {
                **other != id
                    && matches!(b.kind, BodyKind::Static | BodyKind::Kinematic)
                    && should_scan(&me.filter, &b.filter)
            })
            .map(|(other, b)| (b.shape, tree.global_transform(*other)))
            .collect();

        let start = tree.global_transform(id);
        let mut pose = start;
        let mut remaining = velocity * dt;
        let mut blocked = false;
        let tiny = T::of(1e-12);

        let penetrating = |at: &Transform<T>, ob: &(Shape<T>, Transform<T>)| {
            contact(&probe, at, &ob.0, &ob.1).filter(|c| c.depth > tolerance)
        };

        // contacts already present at the start constrain motion but cannot be backed out of
        let mut normals: Vec<Vec3<T>> = Vec::new();
        let mut initially: Vec<bool> = Vec::with_capacity(obstacles.len());
        for ob in &obstacles {
            let c = penetrating(&pose, ob);
            if let Some(c) = c {
                normals.push(c.normal);
            }
            initially.push(c.is_some());
        }

        for _ in 0..4 {
            for n in &normals {
                let into = remaining.dot(*n);
                if into > T::zero() {
                    remaining -= *n * into;
                    blocked = true;
                }
            }
            if remaining.norm() <= tiny {
                break;
            }
            let moved = |s: T| Transform::new(pose.position + remaining * s, pose.rotation);
            let hits_at = |s: T| {
                obstacles
                    .iter()
                    .zip(&initially)
                    .filter(|(_, init)| !**init)
                    .filter_map(|(ob, _)| penetrating(&moved(s), ob))
                    .max_by(|a, b| a.depth.partial_cmp(&b.depth).unwrap_or(std::cmp::Ordering::Equal))
            };
            if hits_at(T::one()).is_none() {
                pose = moved(T::one());
                break;
            }
            let (mut lo, mut hi) = (T::zero(), T::one());
            for _ in 0..48 {
                let mid = (lo + hi) * T::half();
                if hits_at(mid).is_some() {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let hit = hits_at(hi).expect("upper bound of the search collides");
            pose = moved(lo);
            remaining = remaining * (T::one() - lo);
            blocked = true;
            normals.push(hit.normal);
        }

        if !pose.is_finite() {
            return Err(PhysicsError::NonFiniteState(tree.path_of(id)));
        }
        tree.set_global_transform(id, pose);
        Ok(SlideResult { displacement: pose.position - start.position, blocked })
    }

    /// FNV-1a over every body's pose and velocities, in node order.
    pub fn state_hash(&self, tree: &SceneTree<T>) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut feed = |x: f64| {
            for b in x.to_bits().to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x0000_0100_0000_01b3);
            }
        };
        feed(self.tick as f64);
        for (id, body) in &self.bodies {
            let t = tree.global_transform(*id);
            for v in t.position.to_f64() {
                feed(v);
            }
            for v in [t.rotation.w, t.rotation.x, t.rotation.y, t.rotation.z] {
                feed(v.as_f64());
            }
            if let Some(r) = &body.rigid {
                for v in r.linear_velocity.to_f64().into_iter().chain(r.angular_velocity.to_f64()) {
                    feed(v);
                }
            }
        }
        h
    }

    /// Hash of static body poses only.
    pub fn static_hash(&self, tree: &SceneTree<T>) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for (id, body) in &self.bodies {
            if body.kind != BodyKind::Static {
                continue;
            }
            let t = tree.global_transform(*id);
            let vals = t.position.to_f64().into_iter().chain(
                [t.rotation.w, t.rotation.x, t.rotation.y, t.rotation.z].map(|v| v.as_f64()),
            );
            for v in vals {
                for b in v.to_bits().to_le_bytes() {
                    h ^= b as u64;
                    h = h.wrapping_mul(0x0000_0100_0000_01b3);
                }
            }
        }
        h
    }

    /// Whether any pair in `(a, b)` order is currently overlapping according to the last step.
    pub fn is_overlapping(&self, area: NodeId, other: NodeId) -> bool {
        self.overlaps.contains(&(area, other))
    }

    /// Direct narrowphase query between two bodies at their current poses.
    pub fn bodies_overlap(&self, tree: &SceneTree<T>, a: NodeId, b: NodeId) -> bool {
        match (self.bodies.get(&a), self.bodies.get(&b)) {
            (Some(x), Some(y)) => overlap(&x.shape, &tree.global_transform(a), &y.shape, &tree.global_transform(b)),
            _ => false,
        }
    }

    /// Nearest body hit by the ray `from + s·dir`, `0 ≤ s ≤ max_distance`, among bodies
    /// accepted by `accept`. `dir` must be non-zero; distances are in units of `|dir|`.
    pub fn ray_cast(
        &self,
        tree: &SceneTree<T>,
        from: Vec3<T>,
        dir: Vec3<T>,
        max_distance: T,
        accept: impl Fn(NodeId, &Body<T>) -> bool,
    ) -> Option<RayHit<T>> {
        let mut best: Option<RayHit<T>> = None;
        for (&id, body) in &self.bodies {
            if !accept(id, body) {
                continue;
            }
            let pose = tree.global_transform(id);
            if let Some((s, normal)) = body.shape.ray_hit(&pose, from, dir) {
                if s <= max_distance && best.as_ref().is_none_or(|b| s < b.distance) {
                    best = Some(RayHit { node: id, distance: s, point: from + dir * s, normal });
                }
            }
        }
        best
    }

    pub fn pair_key(a: NodeId, b: NodeId) -> (NodeId, NodeId) {
        ordered(a, b)
    }
}
