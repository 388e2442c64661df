//! Emulation of the footplate's microcontroller sketch: pin 8 follows the last
//! `'h'` / `'l'` byte received; everything else is ignored.

use std::fmt;

pub const HAPTIC_PIN: u8 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Level {
    #[default]
    Low,
    High,
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Low => "LOW",
            Level::High => "HIGH",
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VirtualArduino {
    pin8: Level,
    /// Set once the host has opened the port; bytes arriving earlier are dropped.
    serial_ready: bool,
    received: u64,
}

impl VirtualArduino {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn pin8(&self) -> Level {
        self.pin8
    }

    pub fn is_ready(&self) -> bool {
        self.serial_ready
    }

    /// Bytes consumed since the last reset.
    pub fn received(&self) -> u64 {
        self.received
    }

    /// Power-on: pin low, waiting for the host to open the port.
    pub fn reset(&mut self) {
        *self = Self::default();
    }

    /// The host opened the port.
    pub fn begin(&mut self) {
        self.reset();
        self.serial_ready = true;
    }

    /// Consumes one byte; returns the new level when pin 8 changes.
    pub fn handle_byte(&mut self, b: u8) -> Option<Level> {
        if !self.serial_ready {
            return None;
        }
        self.received += 1;
        let next = match b {
            b'h' => Level::High,
            b'l' => Level::Low,
            _ => return None,
        };
        if next == self.pin8 {
            return None;
        }
        self.pin8 = next;
        Some(next)
    }
}

/// Reference fold: `'h'` → HIGH, `'l'` → LOW, anything else keeps the level; starts LOW.
pub fn fold_pin(bytes: &[u8]) -> Level {
    bytes.iter().fold(Level::Low, |acc, b| match b {
        b'h' => Level::High,
        b'l' => Level::Low,
        _ => acc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ready() -> VirtualArduino {
        let mut d = VirtualArduino::new();
        d.begin();
        d
    }

    #[test]
    fn h_sets_high() {
        let mut d = ready();
        assert_eq!(d.handle_byte(b'h'), Some(Level::High));
        assert_eq!(d.pin8(), Level::High);
    }

    #[test]
    fn other_bytes_ignored() {
        let mut d = ready();
        d.handle_byte(b'h');
        assert_eq!(d.handle_byte(b'x'), None);
        assert_eq!(d.pin8(), Level::High);
    }

    #[test]
    fn replay_hlhhl() {
        let mut d = ready();
        let transitions: Vec<Level> = b"hlhhl".iter().filter_map(|b| d.handle_byte(*b)).collect();
        assert_eq!(transitions, vec![Level::High, Level::Low, Level::High, Level::Low]);
    }

    #[test]
    fn bytes_before_begin_are_dropped() {
        let mut d = VirtualArduino::new();
        assert_eq!(d.handle_byte(b'h'), None);
        assert_eq!(d.pin8(), Level::Low);
        assert_eq!(d.received(), 0);
    }
}
