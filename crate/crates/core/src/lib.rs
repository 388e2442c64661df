//! Headless, deterministic runtime for a room-scale VR experience.
//!
//! The engine combines a named scene tree, a fixed-step physics world with
//! layer/mask collision filtering, tracked-device input, a serial haptics link
//! with an emulated microcontroller, and the gameplay behaviours driving them.
//! Scenes and scenarios are plain text; every run produces a line-oriented trace.
//!
//! Math, scene and physics layers are generic over [`Scalar`]; the runtime
//! above them is concrete `f64`. Aliases for both precisions live here.

pub mod devices;
pub mod experience;
pub mod math;
pub mod physics;
pub mod scalar;
pub mod sceneio;
pub mod scenegraph;

pub use scalar::Scalar;

/// Physics ticks per simulated second.
pub const TICK_RATE: u32 = 90;

pub type Vec3 = math::Vec3<f64>;
pub type Quat = math::Quat<f64>;
pub type Transform = math::Transform<f64>;
pub type Shape = physics::Shape<f64>;
pub type Body = physics::Body<f64>;
pub type RigidState = physics::RigidState<f64>;
pub type SceneTree = scenegraph::SceneTree<f64>;
pub type PhysicsWorld = physics::PhysicsWorld<f64>;

pub type Vec3f = math::Vec3<f32>;
pub type Transformf = math::Transform<f32>;
pub type SceneTreef = scenegraph::SceneTree<f32>;
pub type PhysicsWorldf = physics::PhysicsWorld<f32>;

pub use experience::{Runtime, RuntimeError, RuntimeOptions};
