//! Tracked-device input and the serial haptics link.

mod arduino;
mod serial;
mod tracked;

pub use arduino::{fold_pin, Level, VirtualArduino, HAPTIC_PIN};
pub use serial::{
    delivery_latency_ticks, DeviceSide, PortHandle, PortState, SerialBus, SerialError, Transport, DEFAULT_BAUD,
    STANDARD_BAUDS, VIRTUAL_PORT,
};
pub use tracked::{Button, Keyframe, Role, TrackedDevice, TrackedDevices, Trajectory};
