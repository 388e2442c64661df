use std::fmt;

/// Collision layer/mask pair. Bit `i` stands for layer `i + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct CollisionFilter {
    pub layer: u32,
    pub mask: u32,
}

impl CollisionFilter {
    pub const fn new(layer: u32, mask: u32) -> Self {
        Self { layer, mask }
    }

    /// Builds a filter from 1-based layer numbers. Numbers outside `1..=32` are ignored.
    pub fn from_layers(layers: &[u8], mask: &[u8]) -> Self {
        Self { layer: bits_of(layers), mask: bits_of(mask) }
    }

    pub fn layers(&self) -> Vec<u8> {
        numbers_of(self.layer)
    }

    pub fn mask_layers(&self) -> Vec<u8> {
        numbers_of(self.mask)
    }

    /// Whether a body with this filter scans for `other`: `mask ∩ other.layer ≠ ∅`.
    #[inline]
    pub fn scans(&self, other: &CollisionFilter) -> bool {
        self.mask & other.layer != 0
    }
}

pub fn bits_of(layers: &[u8]) -> u32 {
    layers
        .iter()
        .filter(|l| (1..=32).contains(*l))
        .fold(0u32, |acc, l| acc | 1 << (l - 1))
}

pub fn numbers_of(bits: u32) -> Vec<u8> {
    (0..32u8).filter(|i| bits & (1 << i) != 0).map(|i| i + 1).collect()
}

/// Directional test: does `a` scan `b`?
#[inline]
pub fn should_scan(a: &CollisionFilter, b: &CollisionFilter) -> bool {
    a.scans(b)
}

/// Symmetric pair gate used for contact response and broadphase.
#[inline]
pub fn interacts(a: &CollisionFilter, b: &CollisionFilter) -> bool {
    a.scans(b) || b.scans(a)
}

impl fmt::Display for CollisionFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "layer={:?} mask={:?}", self.layers(), self.mask_layers())
    }
}
