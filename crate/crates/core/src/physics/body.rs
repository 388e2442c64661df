use super::filter::CollisionFilter;
use super::shape::Shape;
use crate::math::{Quat, Vec3};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BodyKind {
    /// Detection only, never receives contact response.
    Area,
    /// Never moved by the engine.
    Static,
    /// Moved by the integrator.
    Rigid,
    /// Moved only through `move_and_slide`.
    Kinematic,
}

impl BodyKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BodyKind::Area => "Area",
            BodyKind::Static => "Static",
            BodyKind::Rigid => "Rigid",
            BodyKind::Kinematic => "Kinematic",
        }
    }
}

/// Torque pulling the body back toward a rest orientation about one axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Restoring<T> {
    /// N·m per radian of twist.
    pub stiffness: T,
    /// Twist axis in the rest frame.
    pub axis: Vec3<T>,
    pub rest: Quat<T>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidState<T> {
    pub mass: T,
    /// Principal moments in the body frame.
    pub inertia: Vec3<T>,
    pub linear_velocity: Vec3<T>,
    pub angular_velocity: Vec3<T>,
    pub gravity_scale: T,
    /// Per-body override of the world's angular damping rate (1/s).
    pub angular_damping: Option<T>,
    pub restoring: Option<Restoring<T>>,
}

impl<T: Scalar> RigidState<T> {
    pub fn new(mass: T, inertia: Vec3<T>) -> Self {
        Self {
            mass,
            inertia,
            linear_velocity: Vec3::zero(),
            angular_velocity: Vec3::zero(),
            gravity_scale: T::one(),
            angular_damping: None,
            restoring: None,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.mass > T::zero()
            && self.mass.is_finite()
            && self.inertia.is_finite()
            && self.inertia.x > T::zero()
            && self.inertia.y > T::zero()
            && self.inertia.z > T::zero()
            && self.is_finite()
    }

    pub fn is_finite(&self) -> bool {
        self.linear_velocity.is_finite() && self.angular_velocity.is_finite()
    }

    /// World-frame `I⁻¹·v` for a body oriented by `rotation`.
    pub fn inverse_inertia_mul(&self, rotation: Quat<T>, v: Vec3<T>) -> Vec3<T> {
        let local = rotation.conjugate().rotate(v);
        rotation.rotate(local.component_div(self.inertia))
    }
}

impl<T: Scalar> Default for RigidState<T> {
    fn default() -> Self {
        Self::new(T::one(), Vec3::splat(T::of(0.1)))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Body<T> {
    pub kind: BodyKind,
    pub shape: Shape<T>,
    pub filter: CollisionFilter,
    /// Present exactly when `kind == Rigid`.
    pub rigid: Option<RigidState<T>>,
}

impl<T: Scalar> Body<T> {
    pub fn new(kind: BodyKind, shape: Shape<T>, filter: CollisionFilter) -> Self {
        let rigid = (kind == BodyKind::Rigid).then(RigidState::default);
        Self { kind, shape, filter, rigid }
    }

    pub fn rigid(shape: Shape<T>, filter: CollisionFilter, state: RigidState<T>) -> Self {
        Self { kind: BodyKind::Rigid, shape, filter, rigid: Some(state) }
    }

    pub fn is_solid(&self) -> bool {
        self.kind != BodyKind::Area
    }
}
