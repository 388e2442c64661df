use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::math::{Quat, Transform, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    Head,
    LeftHand,
    RightHand,
    LeftFoot,
    RightFoot,
}

impl Role {
    pub const ALL: [Role; 5] = [Role::Head, Role::LeftHand, Role::RightHand, Role::LeftFoot, Role::RightFoot];

    pub fn as_str(self) -> &'static str {
        match self {
            Role::Head => "Head",
            Role::LeftHand => "LeftHand",
            Role::RightHand => "RightHand",
            Role::LeftFoot => "LeftFoot",
            Role::RightFoot => "RightFoot",
        }
    }

    pub fn is_hand(self) -> bool {
        matches!(self, Role::LeftHand | Role::RightHand)
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Role {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Role::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| format!("unknown device role {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Button {
    Trigger,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Keyframe {
    pub time: f64,
    pub pose: Transform<f64>,
}

/// Piecewise-linear pose track; clamped before the first and after the last key.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Trajectory {
    keys: Vec<Keyframe>,
}

impl Trajectory {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a key. Keys must arrive in non-decreasing time order.
    pub fn push(&mut self, time: f64, pose: Transform<f64>) {
        debug_assert!(self.keys.last().is_none_or(|k| k.time <= time));
        self.keys.push(Keyframe { time, pose });
    }

    pub fn keys(&self) -> &[Keyframe] {
        &self.keys
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn sample(&self, t: f64) -> Option<Transform<f64>> {
        let first = self.keys.first()?;
        if t < first.time {
            return Some(first.pose);
        }
        // last key whose time <= t
        let idx = self.keys.partition_point(|k| k.time <= t) - 1;
        let a = &self.keys[idx];
        let Some(b) = self.keys.get(idx + 1) else {
            return Some(a.pose);
        };
        let span = b.time - a.time;
        if span <= 0.0 {
            return Some(b.pose);
        }
        let s = (t - a.time) / span;
        Some(Transform::new(a.pose.position.lerp(b.pose.position, s), a.pose.rotation.slerp(b.pose.rotation, s)))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrackedDevice {
    pub role: Role,
    /// Tracking-space pose.
    pub pose: Transform<f64>,
    pub buttons: BTreeSet<Button>,
}

impl TrackedDevice {
    pub fn new(role: Role) -> Self {
        Self { role, pose: Transform::identity(), buttons: BTreeSet::new() }
    }

    pub fn is_pressed(&self, b: Button) -> bool {
        self.buttons.contains(&b)
    }
}

/// All tracked devices and their scripted trajectories.
#[derive(Debug, Clone, PartialEq)]
pub struct TrackedDevices {
    devices: BTreeMap<Role, TrackedDevice>,
    tracks: BTreeMap<Role, Trajectory>,
}

impl Default for TrackedDevices {
    fn default() -> Self {
        Self {
            devices: Role::ALL.into_iter().map(|r| (r, TrackedDevice::new(r))).collect(),
            tracks: BTreeMap::new(),
        }
    }
}

impl TrackedDevices {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn device(&self, role: Role) -> &TrackedDevice {
        &self.devices[&role]
    }

    pub fn device_mut(&mut self, role: Role) -> &mut TrackedDevice {
        self.devices.get_mut(&role).expect("all roles present")
    }

    pub fn track_mut(&mut self, role: Role) -> &mut Trajectory {
        self.tracks.entry(role).or_default()
    }

    pub fn has_track(&self, role: Role) -> bool {
        self.tracks.get(&role).is_some_and(|t| !t.is_empty())
    }

    pub fn add_key(&mut self, role: Role, time: f64, position: Vec3<f64>, rotation: Quat<f64>) {
        self.track_mut(role).push(time, Transform::new(position, rotation));
    }

    /// Sets every scripted device's pose from its trajectory at `t`.
    /// Returns the roles that were updated.
    pub fn sample(&mut self, t: f64) -> Vec<Role> {
        let mut updated = Vec::new();
        for (role, track) in &self.tracks {
            if let Some(pose) = track.sample(t) {
                self.devices.get_mut(role).expect("all roles present").pose = pose;
                updated.push(*role);
            }
        }
        updated
    }

    pub fn set_button(&mut self, role: Role, button: Button, down: bool) -> bool {
        let d = self.device_mut(role);
        if down {
            d.buttons.insert(button)
        } else {
            d.buttons.remove(&button)
        }
    }
}
