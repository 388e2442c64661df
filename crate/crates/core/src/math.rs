//! Small fixed-size linear algebra: vectors, unit quaternions and rigid transforms.

use std::ops::{Add, AddAssign, Div, Index, Mul, Neg, Sub, SubAssign};

use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Scalar> Vec3<T> {
    #[inline]
    pub const fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    pub fn splat(v: T) -> Self {
        Self::new(v, v, v)
    }

    pub fn unit_x() -> Self {
        Self::new(T::one(), T::zero(), T::zero())
    }

    pub fn unit_y() -> Self {
        Self::new(T::zero(), T::one(), T::zero())
    }

    pub fn unit_z() -> Self {
        Self::new(T::zero(), T::zero(), T::one())
    }

    pub fn from_f64(x: f64, y: f64, z: f64) -> Self {
        Self::new(T::of(x), T::of(y), T::of(z))
    }

    pub fn to_f64(self) -> [f64; 3] {
        [self.x.as_f64(), self.y.as_f64(), self.z.as_f64()]
    }

    #[inline]
    pub fn dot(self, o: Self) -> T {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    #[inline]
    pub fn cross(self, o: Self) -> Self {
        Self::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm_squared(self) -> T {
        self.dot(self)
    }

    pub fn norm(self) -> T {
        self.norm_squared().sqrt()
    }

    /// Unit vector in the same direction, or `None` for (near) zero input.
    pub fn try_normalize(self, eps: T) -> Option<Self> {
        let n = self.norm();
        if n > eps {
            Some(self / n)
        } else {
            None
        }
    }

    pub fn component_mul(self, o: Self) -> Self {
        Self::new(self.x * o.x, self.y * o.y, self.z * o.z)
    }

    pub fn component_div(self, o: Self) -> Self {
        Self::new(self.x / o.x, self.y / o.y, self.z / o.z)
    }

    pub fn abs(self) -> Self {
        Self::new(self.x.abs(), self.y.abs(), self.z.abs())
    }

    pub fn min(self, o: Self) -> Self {
        Self::new(self.x.min(o.x), self.y.min(o.y), self.z.min(o.z))
    }

    pub fn max(self, o: Self) -> Self {
        Self::new(self.x.max(o.x), self.y.max(o.y), self.z.max(o.z))
    }

    pub fn clamp(self, lo: Self, hi: Self) -> Self {
        self.max(lo).min(hi)
    }

    pub fn lerp(self, o: Self, s: T) -> Self {
        self + (o - self) * s
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn max_abs_diff(self, o: Self) -> T {
        let d = (self - o).abs();
        d.x.max(d.y).max(d.z)
    }
}

impl<T> Index<usize> for Vec3<T> {
    type Output = T;

    fn index(&self, i: usize) -> &T {
        match i {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            _ => panic!("Vec3 index {i} out of range"),
        }
    }
}

impl<T: Scalar> Add for Vec3<T> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<T: Scalar> AddAssign for Vec3<T> {
    #[inline]
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<T: Scalar> Sub for Vec3<T> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<T: Scalar> SubAssign for Vec3<T> {
    #[inline]
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl<T: Scalar> Mul<T> for Vec3<T> {
    type Output = Self;
    #[inline]
    fn mul(self, s: T) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }
}

impl<T: Scalar> Div<T> for Vec3<T> {
    type Output = Self;
    #[inline]
    fn div(self, s: T) -> Self {
        Self::new(self.x / s, self.y / s, self.z / s)
    }
}

impl<T: Scalar> Neg for Vec3<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

/// Rotation stored as a unit quaternion `w + xi + yj + zk`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quat<T> {
    pub w: T,
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Scalar> Default for Quat<T> {
    fn default() -> Self {
        Self::identity()
    }
}

impl<T: Scalar> Quat<T> {
    pub fn identity() -> Self {
        Self { w: T::one(), x: T::zero(), y: T::zero(), z: T::zero() }
    }

    pub fn from_components(w: T, x: T, y: T, z: T) -> Self {
        Self { w, x, y, z }.normalized()
    }

    /// Rotation of `angle` radians about `axis`. A zero axis yields the identity.
    pub fn from_axis_angle(axis: Vec3<T>, angle: T) -> Self {
        match axis.try_normalize(T::zero()) {
            Some(a) => {
                let (s, c) = (angle * T::half()).sin_cos();
                Self { w: c, x: a.x * s, y: a.y * s, z: a.z * s }.normalized()
            }
            None => Self::identity(),
        }
    }

    /// Rotation by the vector `v` interpreted as axis * angle.
    pub fn from_scaled_axis(v: Vec3<T>) -> Self {
        let angle = v.norm();
        if angle == T::zero() {
            return Self::identity();
        }
        Self::from_axis_angle(v / angle, angle)
    }

    /// Axis and angle in `[0, pi]`; identity maps to `(unit_x, 0)`.
    pub fn to_axis_angle(self) -> (Vec3<T>, T) {
        let q = if self.w < T::zero() { -self } else { self };
        let v = Vec3::new(q.x, q.y, q.z);
        let s = v.norm();
        if s == T::zero() {
            return (Vec3::unit_x(), T::zero());
        }
        let angle = T::two() * s.atan2(q.w);
        (v / s, angle)
    }

    pub fn norm(self) -> T {
        (self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn normalized(self) -> Self {
        let n = self.norm();
        if n == T::zero() || !n.is_finite() {
            return Self::identity();
        }
        Self { w: self.w / n, x: self.x / n, y: self.y / n, z: self.z / n }
    }

    pub fn conjugate(self) -> Self {
        Self { w: self.w, x: -self.x, y: -self.y, z: -self.z }
    }

    pub fn rotate(self, v: Vec3<T>) -> Vec3<T> {
        // v' = v + 2w(u x v) + 2 u x (u x v)
        let u = Vec3::new(self.x, self.y, self.z);
        let t = u.cross(v) * T::two();
        v + t * self.w + u.cross(t)
    }

    /// Columns of the equivalent rotation matrix.
    pub fn axes(self) -> [Vec3<T>; 3] {
        [
            self.rotate(Vec3::unit_x()),
            self.rotate(Vec3::unit_y()),
            self.rotate(Vec3::unit_z()),
        ]
    }

    /// Angle of the twist component about `axis` (unit), in `(-pi, pi]`.
    pub fn twist_angle(self, axis: Vec3<T>) -> T {
        let p = Vec3::new(self.x, self.y, self.z).dot(axis);
        let a = T::two() * p.atan2(self.w);
        if a > T::PI() {
            a - T::two() * T::PI()
        } else if a <= -T::PI() {
            a + T::two() * T::PI()
        } else {
            a
        }
    }

    pub fn slerp(self, other: Self, s: T) -> Self {
        let mut b = other;
        let mut d = self.w * b.w + self.x * b.x + self.y * b.y + self.z * b.z;
        if d < T::zero() {
            b = -b;
            d = -d;
        }
        if d > T::of(0.9995) {
            let lerp = Self {
                w: self.w + (b.w - self.w) * s,
                x: self.x + (b.x - self.x) * s,
                y: self.y + (b.y - self.y) * s,
                z: self.z + (b.z - self.z) * s,
            };
            return lerp.normalized();
        }
        let theta = d.acos();
        let sin_t = theta.sin();
        let wa = ((T::one() - s) * theta).sin() / sin_t;
        let wb = (s * theta).sin() / sin_t;
        Self {
            w: self.w * wa + b.w * wb,
            x: self.x * wa + b.x * wb,
            y: self.y * wa + b.y * wb,
            z: self.z * wa + b.z * wb,
        }
        .normalized()
    }

    pub fn is_finite(self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl<T: Scalar> Neg for Quat<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self { w: -self.w, x: -self.x, y: -self.y, z: -self.z }
    }
}

impl<T: Scalar> Mul for Quat<T> {
    type Output = Self;

    /// Hamilton product; normalized so chains stay on the unit sphere.
    fn mul(self, o: Self) -> Self {
        Self {
            w: self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            x: self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            y: self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            z: self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        }
        .normalized()
    }
}

/// Position + orientation. Scale is always 1.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Transform<T: Scalar> {
    pub position: Vec3<T>,
    pub rotation: Quat<T>,
}

impl<T: Scalar> Transform<T> {
    pub fn identity() -> Self {
        Self { position: Vec3::zero(), rotation: Quat::identity() }
    }

    pub fn from_position(position: Vec3<T>) -> Self {
        Self { position, rotation: Quat::identity() }
    }

    pub fn new(position: Vec3<T>, rotation: Quat<T>) -> Self {
        Self { position, rotation: rotation.normalized() }
    }

    /// `self ∘ child`: the pose of `child` expressed in `self`'s parent frame.
    pub fn compose(&self, child: &Self) -> Self {
        Self {
            position: self.position + self.rotation.rotate(child.position),
            rotation: self.rotation * child.rotation,
        }
    }

    pub fn inverse(&self) -> Self {
        let inv = self.rotation.conjugate();
        Self { position: -inv.rotate(self.position), rotation: inv }
    }

    pub fn transform_point(&self, p: Vec3<T>) -> Vec3<T> {
        self.position + self.rotation.rotate(p)
    }

    pub fn inverse_transform_point(&self, p: Vec3<T>) -> Vec3<T> {
        self.rotation.conjugate().rotate(p - self.position)
    }

    pub fn is_finite(&self) -> bool {
        self.position.is_finite() && self.rotation.is_finite()
    }
}
