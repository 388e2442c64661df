//! Fixed-timestep physics: four body kinds, layer/mask filtering, shape overlap,
//! rigid integration, kinematic move-and-slide and area enter/exit events.

mod body;
pub mod broadphase;
mod filter;
pub mod shape;
mod world;

pub use body::{Body, BodyKind, Restoring, RigidState};
pub use filter::{bits_of, interacts, numbers_of, should_scan, CollisionFilter};
pub use shape::{contact, overlap, Aabb, Contact, Shape};
pub use world::{ContactEvent, ContactKind, PhysicsConfig, PhysicsWorld, RayHit, SlideResult};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PhysicsError {
    #[error("non-finite state on body {0}")]
    NonFiniteState(String),
    #[error("body {node} is {found}, expected {expected}")]
    WrongBodyKind {
        node: String,
        expected: &'static str,
        found: &'static str,
    },
    #[error("node {0} has no physics body")]
    NotABody(String),
    #[error("node {0} already has a physics body")]
    DuplicateBody(String),
    #[error("invalid body {node}: {reason}")]
    InvalidBody { node: String, reason: String },
}
